#ifndef ADVPIPE_REPORT_HPP
#define ADVPIPE_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "advpipe/attack.hpp"
#include "advpipe/classifier.hpp"
#include "advpipe/dataset.hpp"

namespace advpipe::report {

/// One success-rate cell, kept as counts so rates stay exact and reports
/// can be pooled across seeds without rounding drift.
struct EvalCell {
    long long successes = 0;
    long long denominator = 0;

    double rate() const {
        return denominator > 0
                   ? static_cast<double>(successes) / static_cast<double>(denominator)
                   : 0.0;
    }
};

struct EvalRow {
    std::string source;
    std::string attack;
    std::vector<EvalCell> cells;  // parallel to EvalReport::targets
};

/// Success-rate table: rows are (source model, attack) pairs, columns are
/// target models, plus each target's clean accuracy and the denominator
/// policy the cells were computed under.
struct EvalReport {
    std::string policy = "clean_correct";  // or "all"
    std::vector<std::string> targets;
    std::vector<double> clean_accuracy;  // parallel to targets
    std::vector<EvalRow> rows;
};

/// Deterministic plain-text CSV; from_csv(to_csv(r)) reproduces r exactly
/// and to_csv is byte-stable for identical inputs.
std::string to_csv(const EvalReport& report);
EvalReport from_csv(const std::string& text);

/// Human-readable success-rate tables (percentages, one decimal).
std::string to_markdown(const EvalReport& report);

/// Element-wise pool of per-seed reports: counts are summed per cell and
/// clean accuracies averaged. All reports must share labels and shape.
EvalReport pool_reports(const std::vector<EvalReport>& reports);

using NamedModel = std::pair<std::string, const models::Classifier*>;

struct MatrixJob {
    std::vector<NamedModel> sources;
    std::vector<NamedModel> targets;
    std::vector<attack::AttackConfig> attacks;
    const data::Dataset* dataset = nullptr;
    std::string policy = "clean_correct";
    std::uint64_t base_seed = 0;
    int threads = 1;
};

/// Crafts adversarial examples on every source with every attack and scores
/// them against every target (success = predicted class differs from the
/// true label). Each (row, example) pair attacks under its own derived
/// seed, so results are independent of the thread count.
EvalReport run_matrix(const MatrixJob& job);

}  // namespace advpipe::report

#endif
