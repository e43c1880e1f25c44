#include "gadepth/linear_model.hpp"

#include <cmath>
#include <stdexcept>

#include "gadepth/dataset.hpp"

namespace gadepth {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z), overflow-safe
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

struct Objective {
    const Matrix& x;  // standardized
    const std::vector<int>& y;
    double lambda;

    double loss(const std::vector<double>& w, double b) const {
        const std::size_t m = x.rows, p = x.cols;
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = x.values.data() + i * p;
            double z = b;
            for (std::size_t j = 0; j < p; ++j) z += w[j] * row[j];
            total += softplus(z) - (y[i] == 1 ? z : 0.0);
        }
        double reg = 0.0;
        for (double wj : w) reg += wj * wj;
        return total / static_cast<double>(m) + 0.5 * lambda * reg;
    }

    // returns loss, fills grad_w / grad_b
    double loss_grad(const std::vector<double>& w, double b, std::vector<double>& gw,
                     double& gb) const {
        const std::size_t m = x.rows, p = x.cols;
        std::fill(gw.begin(), gw.end(), 0.0);
        gb = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = x.values.data() + i * p;
            double z = b;
            for (std::size_t j = 0; j < p; ++j) z += w[j] * row[j];
            total += softplus(z) - (y[i] == 1 ? z : 0.0);
            const double r = sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0);
            for (std::size_t j = 0; j < p; ++j) gw[j] += r * row[j];
            gb += r;
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        double reg = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            gw[j] = gw[j] * inv_m + lambda * w[j];
            reg += w[j] * w[j];
        }
        gb *= inv_m;
        return total * inv_m + 0.5 * lambda * reg;
    }
};

}  // namespace

LinearModel fit_linear(const Matrix& x, const std::vector<int>& y, const LinearConfig& config) {
    const std::size_t m = x.rows, p = x.cols;
    if (p < 1 || m < 1) throw ValidationError("fit_linear: empty input");
    if (y.size() != m) throw ValidationError("fit_linear: label count mismatch");
    bool has0 = false, has1 = false;
    for (int yi : y) (yi == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw ValidationError("fit_linear: both classes required");
    for (double v : x.values)
        if (!std::isfinite(v)) throw ValidationError("fit_linear: non-finite input");

    LinearModel model;
    model.feature_mean.assign(p, 0.0);
    model.feature_scale.assign(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += x(i, j);
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = x(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(m);
        model.feature_mean[j] = mean;
        model.feature_scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    Matrix xs(m, p);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < p; ++j)
            xs(i, j) = (x(i, j) - model.feature_mean[j]) / model.feature_scale[j];

    const double lambda = config.lambda >= 0.0 ? config.lambda : 1.0 / static_cast<double>(m);
    Objective obj{xs, y, lambda};

    std::vector<double> w(p, 0.0), gw(p, 0.0), prev_w, prev_gw;
    double b = 0.0, gb = 0.0, prev_b = 0.0, prev_gb = 0.0;
    double loss = obj.loss_grad(w, b, gw, gb);
    model.loss_trace.push_back(loss);

    double step = 1.0;
    for (int it = 0; it < config.max_iterations; ++it) {
        double gnorm2 = gb * gb;
        for (double g : gw) gnorm2 += g * g;
        if (std::sqrt(gnorm2) <= config.tolerance) break;

        // Barzilai-Borwein trial step, safeguarded; backtracking keeps descent monotone
        if (it > 0) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const double s = w[j] - prev_w[j];
                const double dg = gw[j] - prev_gw[j];
                sy += s * dg;
                yy += dg * dg;
            }
            const double sb = b - prev_b, dgb = gb - prev_gb;
            sy += sb * dgb;
            yy += dgb * dgb;
            step = (yy > 0.0 && sy > 0.0) ? sy / yy : std::min(step * 2.0, 1.0);
            step = std::min(std::max(step, 1e-10), 1e6);
        }

        prev_w = w;
        prev_b = b;
        prev_gw = gw;
        prev_gb = gb;

        constexpr double armijo = 1e-4;
        std::vector<double> w_try(p);
        double loss_try = 0.0, b_try = 0.0;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t j = 0; j < p; ++j) w_try[j] = w[j] - step * gw[j];
            b_try = b - step * gb;
            loss_try = obj.loss(w_try, b_try);
            if (loss_try <= loss - armijo * step * gnorm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step underflow: gradient numerically flat

        w = std::move(w_try);
        b = b_try;
        loss = obj.loss_grad(w, b, gw, gb);
        model.loss_trace.push_back(loss_try);
    }

    model.weights = std::move(w);
    model.intercept = b;
    return model;
}

std::vector<double> LinearModel::predict_scores(const Matrix& x) const {
    if (x.cols != weights.size())
        throw ValidationError("predict_scores: feature width mismatch");
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double z = intercept;
        for (std::size_t j = 0; j < x.cols; ++j)
            z += weights[j] * (x(i, j) - feature_mean[j]) / feature_scale[j];
        out[i] = sigmoid(z);
    }
    return out;
}

}  // namespace gadepth
