#pragma once

#include <map>
#include <string>
#include <vector>

#include "repnet/presentation.hpp"

namespace repnet {

// Built-in study systems. `params` supplies required scalars
// (delta for temperley_lieb; the others take none).
Presentation builtin(const std::string& name, const std::map<std::string, double>& params);

// Degeneracy probes for a built-in: relations deliberately NOT in the training
// set whose residuals distinguish genuine solutions from collapsed ones
// (identity map, involutions, the zero map).
std::vector<RelationEq> builtin_probes(const std::string& name);

const std::vector<std::string>& builtin_names();

}  // namespace repnet
