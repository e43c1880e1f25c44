#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gadepth/dataset.hpp"
#include "gadepth/genome.hpp"
#include "gadepth/linear_model.hpp"
#include "gadepth/tree_model.hpp"

namespace gadepth {

enum class EvaluatorKind { linear, nonlinear };

// How a genome is scored during the GA search. cv (default): mean held-out
// AUC of stratified k-fold over the visible rows. holdout: fit on the visible
// rows, score on a fixed holdout set supplied by the caller.
enum class FitnessMode { cv, holdout };

struct FitnessHarness {
    EvaluatorKind kind = EvaluatorKind::nonlinear;
    int k = 5;
    std::uint64_t seed = 0;
    FitnessMode mode = FitnessMode::cv;
    LinearConfig linear;
    TreeConfig tree;
    std::vector<std::size_t> holdout_idx;  // only used in holdout mode
};

EvaluatorKind evaluator_from_string(const std::string& s);
std::string to_string(EvaluatorKind kind);

// Fits the configured evaluator on (rows=fit_idx, cols=subset) and returns
// AUC scores for eval_idx rows.
std::vector<double> fit_and_score(const Dataset& data, std::span<const std::size_t> fit_idx,
                                  std::span<const std::size_t> eval_idx,
                                  const SubsetGenome& subset, const FitnessHarness& harness);

// Mean held-out AUC over a precomputed fold plan; used by the GA so every
// genome in a run sees the same folds.
double cv_fitness_with_plan(const Dataset& data, const FoldPlan& plan,
                            const SubsetGenome& subset, const FitnessHarness& harness);

// Standalone fitness: derives the fold plan from harness.seed over the sorted
// visible indices (cv mode) or scores against harness.holdout_idx.
double cv_fitness(const Dataset& data, std::span<const std::size_t> visible_idx,
                  const SubsetGenome& subset, const FitnessHarness& harness);

struct FinalEvaluation {
    double train_auc = 0.0;
    double test_auc = 0.0;
    double validation_auc = 0.0;
};

// One model fit on the training partition, scored on all three partitions.
FinalEvaluation evaluate_final(const Dataset& data, const Partition& partition,
                               const SubsetGenome& subset, const FitnessHarness& harness);

}  // namespace gadepth
