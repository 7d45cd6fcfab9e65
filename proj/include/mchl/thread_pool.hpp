#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mchl {

/// Fixed set of workers running index-parallel jobs. The calling thread takes
/// part, so a pool of size n runs up to n jobs at once with n - 1 workers.
class ThreadPool {
 public:
  explicit ThreadPool(int size);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int size() const { return static_cast<int>(workers_.size()) + 1; }

  /// Calls fn(i) for every i in [0, count) and returns when all are done.
  /// The first exception thrown by a job is rethrown here.
  void run(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  void workerLoop();
  void drain();

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t count_ = 0;
  std::size_t next_ = 0;
  std::size_t finished_ = 0;
  std::size_t generation_ = 0;
  std::exception_ptr error_;
  bool stop_ = false;
};

}  // namespace mchl
