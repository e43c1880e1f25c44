#include "gadepth/fitness.hpp"

#include <algorithm>

#include "gadepth/metrics.hpp"

namespace gadepth {

EvaluatorKind evaluator_from_string(const std::string& s) {
    if (s == "linear") return EvaluatorKind::linear;
    if (s == "nonlinear") return EvaluatorKind::nonlinear;
    throw ValidationError("unknown fitness evaluator \"" + s + "\" (use linear or nonlinear)");
}

std::string to_string(EvaluatorKind kind) {
    return kind == EvaluatorKind::linear ? "linear" : "nonlinear";
}

std::vector<double> fit_and_score(const Dataset& data, std::span<const std::size_t> fit_idx,
                                  std::span<const std::size_t> eval_idx,
                                  const SubsetGenome& subset, const FitnessHarness& harness) {
    if (subset.selected.empty()) throw ValidationError("fitness: empty feature subset");
    const Matrix x_fit = gather(data.features, fit_idx, subset.selected);
    std::vector<int> y_fit;
    y_fit.reserve(fit_idx.size());
    for (std::size_t r : fit_idx) y_fit.push_back(data.labels[r]);

    const Matrix x_eval = gather(data.features, eval_idx, subset.selected);
    if (harness.kind == EvaluatorKind::linear) {
        return fit_linear(x_fit, y_fit, harness.linear).predict_scores(x_eval);
    }
    return fit_tree(x_fit, y_fit, harness.tree).predict_scores(x_eval);
}

double cv_fitness_with_plan(const Dataset& data, const FoldPlan& plan,
                            const SubsetGenome& subset, const FitnessHarness& harness) {
    double total = 0.0;
    for (int fold = 0; fold < plan.k; ++fold) {
        const auto held_out = plan.fold_members(fold);
        const auto fit_rows = plan.fold_complement(fold);
        const auto scores = fit_and_score(data, fit_rows, held_out, subset, harness);
        std::vector<int> y;
        y.reserve(held_out.size());
        for (std::size_t r : held_out) y.push_back(data.labels[r]);
        total += auc_roc(scores, y);
    }
    return total / static_cast<double>(plan.k);
}

double cv_fitness(const Dataset& data, std::span<const std::size_t> visible_idx,
                  const SubsetGenome& subset, const FitnessHarness& harness) {
    std::vector<std::size_t> visible(visible_idx.begin(), visible_idx.end());
    std::sort(visible.begin(), visible.end());
    if (harness.mode == FitnessMode::holdout) {
        const auto scores = fit_and_score(data, visible, harness.holdout_idx, subset, harness);
        std::vector<int> y;
        y.reserve(harness.holdout_idx.size());
        for (std::size_t r : harness.holdout_idx) y.push_back(data.labels[r]);
        return auc_roc(scores, y);
    }
    const FoldPlan plan = stratified_kfold(visible, data.labels, harness.k, harness.seed);
    return cv_fitness_with_plan(data, plan, subset, harness);
}

FinalEvaluation evaluate_final(const Dataset& data, const Partition& partition,
                               const SubsetGenome& subset, const FitnessHarness& harness) {
    if (subset.selected.empty()) throw ValidationError("evaluate_final: empty feature subset");
    auto score_on = [&](const std::vector<std::size_t>& rows,
                        const auto& predict) {
        const Matrix x = gather(data.features, rows, subset.selected);
        std::vector<int> y;
        y.reserve(rows.size());
        for (std::size_t r : rows) y.push_back(data.labels[r]);
        return auc_roc(predict(x), y);
    };

    const Matrix x_train = gather(data.features, partition.train_idx, subset.selected);
    std::vector<int> y_train;
    y_train.reserve(partition.train_idx.size());
    for (std::size_t r : partition.train_idx) y_train.push_back(data.labels[r]);

    FinalEvaluation out;
    if (harness.kind == EvaluatorKind::linear) {
        const LinearModel model = fit_linear(x_train, y_train, harness.linear);
        auto predict = [&](const Matrix& x) { return model.predict_scores(x); };
        out.train_auc = score_on(partition.train_idx, predict);
        out.test_auc = score_on(partition.test_idx, predict);
        out.validation_auc = score_on(partition.validation_idx, predict);
    } else {
        const TreeModel model = fit_tree(x_train, y_train, harness.tree);
        auto predict = [&](const Matrix& x) { return model.predict_scores(x); };
        out.train_auc = score_on(partition.train_idx, predict);
        out.test_auc = score_on(partition.test_idx, predict);
        out.validation_auc = score_on(partition.validation_idx, predict);
    }
    return out;
}

}  // namespace gadepth
