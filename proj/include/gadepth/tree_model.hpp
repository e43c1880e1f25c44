#pragma once

#include <cstddef>
#include <vector>

#include "gadepth/matrix.hpp"

namespace gadepth {

struct TreeConfig {
    int max_depth = -1;         // negative: unlimited
    int min_samples_split = 2;
};

struct TreeNode {
    int feature = -1;           // -1 marks a leaf
    double threshold = 0.0;     // go left when value <= threshold
    int left = -1;
    int right = -1;
    double positive_fraction = 0.0;
    std::size_t sample_count = 0;

    bool is_leaf() const { return feature < 0; }
};

// CART-style binary classification tree: greedy Gini splits at midpoints
// between consecutive distinct values, deterministic tie-breaking (lowest
// feature index, then lowest threshold). Zero-gain splits are taken as long
// as the node is impure and some feature still varies, so an unbounded tree
// interpolates any consistent training set.
struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::size_t n_features = 0;

    std::vector<double> predict_scores(const Matrix& x) const;
    int depth() const;
};

TreeModel fit_tree(const Matrix& x, const std::vector<int>& y, const TreeConfig& config = {});

}  // namespace gadepth
