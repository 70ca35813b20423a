#pragma once

#include <string>

#include "dunkl/root_system.hpp"

namespace dunkl {

/// {"ambient_dim", "roots", "kappa", "positive_choice_vector"}; kappa runs parallel to roots.
std::string root_system_to_json(const RootSystem& r, int indent = 2);
RootSystem root_system_from_json(const std::string& text);
RootSystem load_root_system(const std::string& path);

}  // namespace dunkl
