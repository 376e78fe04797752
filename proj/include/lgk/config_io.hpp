#pragma once
// Flat key=value parameter files. Keys: u1, u2, delta (rational "p/q" or
// exact decimal), beta (decimal), l0 (integer), strict (bool). '#' starts a
// comment. Unknown keys are rejected.

#include "lgk/model.hpp"
#include <string>

namespace lgk {

ModelParams parse_params_text(const std::string& text);
ModelParams parse_params_file(const std::string& path);

} // namespace lgk
