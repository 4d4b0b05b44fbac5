#pragma once

#include <string>

#include "hybridtherm/hybrid/hybrid.hpp"

namespace hybridtherm {

/// Model bundle directory: manifest.json (strategy, scenario, columns,
/// standardizer), physics.json (the RC network), and the learner files.
void save_bundle(const HybridModel& model, const std::string& directory);
HybridModel load_bundle(const std::string& directory);

}  // namespace hybridtherm
