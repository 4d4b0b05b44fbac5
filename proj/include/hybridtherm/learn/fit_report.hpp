#pragma once

#include <vector>

namespace hybridtherm {

/// Training diagnostics. Loss traces are per-epoch and stay empty for
/// closed-form or tree fits.
struct FitReport {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    int epochs = 0;
    bool early_stopped = false;
};

}  // namespace hybridtherm
