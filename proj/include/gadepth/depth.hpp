#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gadepth/dataset.hpp"
#include "gadepth/fitness.hpp"
#include "gadepth/ga.hpp"

namespace gadepth {

enum class Fold { train, test, validation };

Fold fold_from_string(const std::string& s);
std::string to_string(Fold fold);

struct SweepConfig {
    std::vector<int> size_limits;      // strictly increasing, all >= 1
    int replicates = 50;
    EvaluatorKind evaluator = EvaluatorKind::nonlinear;
    FitnessMode fitness_mode = FitnessMode::cv;
    GaConfig ga;                       // template; seed is derived per cell
    int cv_folds = 5;
    std::uint64_t base_seed = 0;
    int workers = 0;                   // 0: hardware concurrency

    void validate() const;
};

struct ReplicateResult {
    double train_auc = 0.0;
    double test_auc = 0.0;
    double validation_auc = 0.0;
    SubsetGenome genome;         // empty when the curve came from a CSV
    std::string selected_names;  // semicolon-joined feature names
    std::uint64_t seed = 0;

    double auc(Fold fold) const;
};

struct DepthCurve {
    std::vector<int> size_limits;
    std::vector<std::vector<ReplicateResult>> replicates;  // aligned with size_limits

    double mean(Fold fold, std::size_t i) const;
    std::vector<double> means(Fold fold) const;
};

// Per-replicate seed; stable so individual sweep cells can be re-run.
std::uint64_t sweep_cell_seed(std::uint64_t base_seed, int size_limit, int replicate);

using ProgressSink = std::function<void(int done, int total)>;

// For each (size_limit, replicate): a GA run over train+test rows followed by
// evaluate_final of the winning genome. Cells execute on a worker pool; the
// result is independent of the worker count.
DepthCurve run_sweep(const Dataset& data, const Partition& partition, const SweepConfig& config,
                     const ProgressSink& progress = {});

// Smallest size_limit reaching threshold*peak of the fold's mean curve, per
// threshold; threshold 1.0 selects the first size_limit attaining the peak.
std::map<double, int> threshold_depths(const DepthCurve& curve, Fold fold,
                                       const std::vector<double>& thresholds);

// Size limit with the largest perpendicular distance above the chord joining
// the first and last curve points; a curve with no point above the chord
// yields the first size_limit.
int elbow_point(const DepthCurve& curve, Fold fold);

struct FoldReport {
    std::map<double, int> depth_at;
    int elbow = 0;
    double peak_mean = 0.0;
    int peak_size_limit = 0;
};

struct ComplexityReport {
    FoldReport train;
    FoldReport test;
    FoldReport validation;

    const FoldReport& fold(Fold f) const;
};

// Threshold depths at {0.90, 0.95, 0.99, 0.995, 1.00} plus the elbow on all
// three folds.
ComplexityReport build_report(const DepthCurve& curve);

void write_curve_csv(const DepthCurve& curve, const std::string& path);
DepthCurve read_curve_csv(const std::string& path);

std::string report_to_json(const ComplexityReport& report);

}  // namespace gadepth
