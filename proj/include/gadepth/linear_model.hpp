#pragma once

#include <vector>

#include "gadepth/matrix.hpp"

namespace gadepth {

struct LinearConfig {
    double lambda = -1.0;          // L2 strength; negative means 1/m
    int max_iterations = 500;
    double tolerance = 1e-6;       // on the gradient 2-norm
};

// L2-regularized logistic regression trained by full-batch gradient descent
// with Armijo backtracking. Deterministic: weights start at zero, features are
// standardized by training statistics (constant features get scale 1).
struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    std::vector<double> loss_trace;  // accepted loss per iteration, non-increasing

    std::vector<double> predict_scores(const Matrix& x) const;
};

LinearModel fit_linear(const Matrix& x, const std::vector<int>& y, const LinearConfig& config = {});

}  // namespace gadepth
