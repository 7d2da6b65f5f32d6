#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hopfkit/field.hpp"

namespace hopfkit {

/// Built-in reference systems with closed-form polar dynamics.
struct AtlasEntry {
  std::string name;
  std::function<ParamField(double beta)> builder;
  std::string citation;
};

const std::vector<AtlasEntry>& atlas();

/// Throws InputError for unknown names. `beta` is only used by "infinity".
ParamField atlas_system(const std::string& name, double beta = 1.0);

}  // namespace hopfkit
