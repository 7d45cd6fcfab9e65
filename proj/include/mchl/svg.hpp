#pragma once

#include <string>

#include "mchl/core.hpp"

namespace mchl {

// Scale: 1 site = 4 px, 1 row = 10 px, row 0 at the bottom.
// Palette by cell height:
//   h=1 #4e79a7, h=2 #f28e2b, h=3 #59a14f, h=4 #e15759, h>=5 #b07aa1
//   fixed cells #555555, blockages #bbbbbb, P rows #f4f4f4, G rows #e8e8e8
// Movable cells that are not legalized are drawn at (cx, cy) with a dashed
// outline. Output bytes depend only on the placement.
std::string renderSvg(const Placement& p);

}  // namespace mchl
