#include "gadepth/tree_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gadepth/dataset.hpp"

namespace gadepth {

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

// weighted Gini of a left/right partition given positive counts
double weighted_gini(double pos_l, double n_l, double pos_r, double n_r) {
    const double neg_l = n_l - pos_l, neg_r = n_r - pos_r;
    const double g_l = n_l > 0.0 ? 2.0 * pos_l * neg_l / (n_l * n_l) : 0.0;
    const double g_r = n_r > 0.0 ? 2.0 * pos_r * neg_r / (n_r * n_r) : 0.0;
    return (n_l * g_l + n_r * g_r) / (n_l + n_r);
}

}  // namespace

TreeModel fit_tree(const Matrix& x, const std::vector<int>& y, const TreeConfig& config) {
    const std::size_t m = x.rows, p = x.cols;
    if (p < 1 || m < 1) throw ValidationError("fit_tree: empty input");
    if (y.size() != m) throw ValidationError("fit_tree: label count mismatch");
    for (double v : x.values)
        if (!std::isfinite(v)) throw ValidationError("fit_tree: non-finite input");

    TreeModel model;
    model.n_features = p;

    struct Work {
        std::vector<std::size_t> rows;
        int node;
        int depth;
    };

    std::vector<Work> stack;
    {
        std::vector<std::size_t> all(m);
        std::iota(all.begin(), all.end(), 0);
        model.nodes.emplace_back();
        stack.push_back({std::move(all), 0, 0});
    }

    std::vector<std::pair<double, int>> column;  // (value, label), reused per feature
    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        const auto& rows = work.rows;
        const double n = static_cast<double>(rows.size());

        std::size_t pos = 0;
        for (std::size_t r : rows) pos += static_cast<std::size_t>(y[r] == 1);

        TreeNode& node = model.nodes[static_cast<std::size_t>(work.node)];
        node.sample_count = rows.size();
        node.positive_fraction = static_cast<double>(pos) / n;

        const bool pure = pos == 0 || pos == rows.size();
        const bool depth_capped = config.max_depth >= 0 && work.depth >= config.max_depth;
        if (pure || depth_capped ||
            rows.size() < static_cast<std::size_t>(config.min_samples_split)) {
            continue;
        }

        SplitChoice best;
        for (std::size_t f = 0; f < p; ++f) {
            column.clear();
            for (std::size_t r : rows) column.emplace_back(x(r, f), y[r]);
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            double pos_l = 0.0, n_l = 0.0;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                pos_l += static_cast<double>(column[i].second == 1);
                n_l += 1.0;
                if (column[i].first == column[i + 1].first) continue;
                const double thr = column[i].first + 0.5 * (column[i + 1].first - column[i].first);
                const double imp =
                    weighted_gini(pos_l, n_l, static_cast<double>(pos) - pos_l, n - n_l);
                if (imp < best.impurity) {  // strict: earliest feature/threshold wins ties
                    best = {true, f, thr, imp};
                }
            }
        }
        if (!best.found) continue;  // every feature constant within the node

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);

        const int left_id = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        const int right_id = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();

        TreeNode& parent = model.nodes[static_cast<std::size_t>(work.node)];
        parent.feature = static_cast<int>(best.feature);
        parent.threshold = best.threshold;
        parent.left = left_id;
        parent.right = right_id;

        stack.push_back({std::move(right_rows), right_id, work.depth + 1});
        stack.push_back({std::move(left_rows), left_id, work.depth + 1});
    }
    return model;
}

std::vector<double> TreeModel::predict_scores(const Matrix& x) const {
    if (x.cols != n_features) throw ValidationError("predict_scores: feature width mismatch");
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const TreeNode* node = &nodes[0];
        while (!node->is_leaf()) {
            node = &nodes[static_cast<std::size_t>(
                x(i, static_cast<std::size_t>(node->feature)) <= node->threshold ? node->left
                                                                                 : node->right)];
        }
        out[i] = node->positive_fraction;
    }
    return out;
}

int TreeModel::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const TreeNode& node = nodes[static_cast<std::size_t>(id)];
        if (!node.is_leaf()) {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return deepest;
}

}  // namespace gadepth
