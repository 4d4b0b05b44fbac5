#pragma once

#include <string>
#include <variant>

#include "hybridtherm/learn/ffnn.hpp"
#include "hybridtherm/learn/fit_report.hpp"
#include "hybridtherm/learn/forest.hpp"
#include "hybridtherm/learn/linear.hpp"

namespace hybridtherm {

enum class LearnerKind { Linear, Ffnn, Forest };

std::string to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& s);  // "lr" | "ffnn" | "rf"

struct LearnerConfig {
    LearnerKind kind = LearnerKind::Linear;
    FfnnConfig ffnn;
    ForestConfig forest;
    FinetuneConfig finetune;      // augmentation fine-tuning (FFNN patience 3)
    int rf_extension_trees = 100; // augmentation warm-start extension
    std::uint64_t seed = 0;       // overrides the per-model seeds when nonzero
};

/// Uniform multi-output fit/predict/fine-tune facade over the three model
/// families.
class Learner {
public:
    static Learner fit(const LearnerConfig& config, const Eigen::MatrixXd& X,
                       const Eigen::MatrixXd& Y);

    /// Continues training on new data: Adam updates for LR/FFNN (FFNN patience
    /// defaults to 3), warm-start tree extension for forests.
    Learner finetuned(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) const;

    Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;

    LearnerKind kind() const { return config_.kind; }
    const LearnerConfig& config() const { return config_; }
    const FitReport& report() const { return report_; }

    const LinearModel& linear() const;
    const FfnnModel& ffnn() const;
    const ForestModel& forest() const;

    static Learner wrap(LinearModel model, LearnerConfig config = {});
    static Learner wrap(FfnnModel model, LearnerConfig config = {});
    static Learner wrap(ForestModel model, LearnerConfig config = {});

    /// LR and forests serialize to versioned JSON at <prefix>.json; the FFNN
    /// writes a JSON header plus a flat binary weight blob (<prefix>.bin).
    void save(const std::string& path_prefix) const;
    static Learner load(const std::string& path_prefix);

private:
    std::variant<LinearModel, FfnnModel, ForestModel> model_;
    LearnerConfig config_;
    FitReport report_;
};

}  // namespace hybridtherm
