#pragma once

#include <string>

#include "adamo/vecmath.hpp"

namespace adamo {

// One named parameter tensor, flattened to a vector. The metadata tags are
// fixed at model construction and drive the architecture-aware update rules.
struct ParamBlock {
  std::string name;
  Vector values;
  int logical_dim = 2;  // tensor rank before flattening
  bool scale_invariant = false;

  Index numel() const { return values.size(); }
};

}  // namespace adamo
