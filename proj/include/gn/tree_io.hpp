#pragma once

#include <string>

#include "gn/tree.hpp"

namespace gn {

// JSON export carrying the labels in birth order; round-trips exactly.
std::string tree_to_json(const LabelledTree& tree);
LabelledTree tree_from_json(const std::string& text);

}  // namespace gn
