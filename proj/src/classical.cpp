#include "gadepth/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gadepth/matrix.hpp"
#include "gadepth/rng.hpp"

namespace gadepth {

namespace {

constexpr double kEigenTol = 1e-10;

void require_binary(const Dataset& data) {
    if (data.class_count(0) == 0 || data.class_count(1) == 0)
        throw ValidationError("classical measures need both classes present");
}

// Rows re-ordered lexicographically (features, then label). Every measure is
// computed on this ordering, which makes results exactly invariant to row
// permutations of the input: accumulation order, seeded pairings and distance
// tie-breaks all become canonical.
Dataset canonical_row_order(const Dataset& data) {
    const std::size_t n = data.n_rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = data.features.row(a), rb = data.features.row(b);
        for (std::size_t c = 0; c < ra.size(); ++c) {
            if (ra[c] != rb[c]) return ra[c] < rb[c];
        }
        return data.labels[a] < data.labels[b];
    });
    Dataset out;
    out.features = Matrix(n, data.n_features());
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = data.features.row(order[i]);
        std::copy(row.begin(), row.end(), out.features.values.begin() +
                                              static_cast<std::ptrdiff_t>(i * out.features.cols));
        out.labels[i] = data.labels[order[i]];
    }
    out.feature_names = data.feature_names;
    out.class_names = data.class_names;
    return out;
}

Matrix min_max_scaled(const Matrix& x) {
    Matrix out = x;
    for (std::size_t c = 0; c < x.cols; ++c) {
        double lo = x(0, c), hi = x(0, c);
        for (std::size_t r = 1; r < x.rows; ++r) {
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        const double range = hi - lo;
        for (std::size_t r = 0; r < x.rows; ++r)
            out(r, c) = range > 0.0 ? (x(r, c) - lo) / range : 0.0;
    }
    return out;
}

Matrix pairwise_distances(const Matrix& x) {
    const std::size_t n = x.rows;
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            const double* a = x.values.data() + i * x.cols;
            const double* b = x.values.data() + j * x.cols;
            for (std::size_t c = 0; c < x.cols; ++c) {
                const double diff = a[c] - b[c];
                s += diff * diff;
            }
            d(i, j) = d(j, i) = std::sqrt(s);
        }
    }
    return d;
}

// distance to the closest opposite-class instance, per instance
std::vector<double> enemy_distances(const Matrix& dist, const std::vector<int>& y) {
    const std::size_t n = dist.rows;
    std::vector<double> out(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (y[i] != y[j]) out[i] = std::min(out[i], dist(i, j));
    return out;
}

// same-class interpolated points, one per instance, seeded
Matrix interpolated_points(const Matrix& x, const std::vector<int>& y, Rng& rng) {
    const std::size_t n = x.rows;
    Matrix synth(n, x.cols);
    std::vector<std::vector<std::size_t>> members(2);
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(y[i])].push_back(i);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pool = members[static_cast<std::size_t>(y[i])];
        std::size_t partner = i;
        if (pool.size() > 1) {
            do {
                partner = pool[rng.uniform_index(pool.size())];
            } while (partner == i);
        }
        const double t = rng.uniform01();
        for (std::size_t c = 0; c < x.cols; ++c)
            synth(i, c) = x(i, c) + t * (x(partner, c) - x(i, c));
    }
    return synth;
}

// nearest training instance; ties count as an error when any tied neighbor
// disagrees with the expected label
bool nn_errs(const Matrix& train, const std::vector<int>& y, const double* point, int expected,
             std::size_t exclude) {
    double best = std::numeric_limits<double>::infinity();
    bool mismatch = false;
    for (std::size_t j = 0; j < train.rows; ++j) {
        if (j == exclude) continue;
        double s = 0.0;
        const double* b = train.values.data() + j * train.cols;
        for (std::size_t c = 0; c < train.cols; ++c) {
            const double diff = point[c] - b[c];
            s += diff * diff;
        }
        if (s < best) {
            best = s;
            mismatch = y[j] != expected;
        } else if (s == best && y[j] != expected) {
            mismatch = true;
        }
    }
    return mismatch;
}

struct HingeClassifier {
    std::vector<double> weights;
    double bias = 0.0;

    double decision(const double* row, std::size_t cols) const {
        double z = bias;
        for (std::size_t c = 0; c < cols; ++c) z += weights[c] * row[c];
        return z;
    }
};

// full-batch hinge subgradient descent on min-max scaled inputs; keeps the
// iterate with the lowest regularized objective
HingeClassifier fit_hinge(const Matrix& x, const std::vector<int>& y,
                          const ClassicalConfig& config) {
    const std::size_t n = x.rows, p = x.cols;
    std::vector<double> w(p, 0.0), gw(p, 0.0), best_w(p, 0.0);
    double b = 0.0, best_b = 0.0;
    double best_obj = std::numeric_limits<double>::infinity();
    const double lambda = config.hinge_lambda;

    for (int epoch = 0; epoch < config.hinge_epochs; ++epoch) {
        std::fill(gw.begin(), gw.end(), 0.0);
        double gb = 0.0, hinge = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double yi = y[i] == 1 ? 1.0 : -1.0;
            const double* row = x.values.data() + i * p;
            double z = b;
            for (std::size_t c = 0; c < p; ++c) z += w[c] * row[c];
            const double margin = yi * z;
            if (margin < 1.0) {
                hinge += 1.0 - margin;
                for (std::size_t c = 0; c < p; ++c) gw[c] -= yi * row[c];
                gb -= yi;
            }
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        double reg = 0.0;
        for (std::size_t c = 0; c < p; ++c) reg += w[c] * w[c];
        const double obj = hinge * inv_n + 0.5 * lambda * reg;
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
            best_b = b;
        }
        const double eta = 0.5 / std::sqrt(static_cast<double>(epoch) + 1.0);
        for (std::size_t c = 0; c < p; ++c) w[c] -= eta * (gw[c] * inv_n + lambda * w[c]);
        b -= eta * gb * inv_n;
    }
    return {std::move(best_w), best_b};
}

// per-feature class range overlap interval [lo, hi]
struct OverlapInterval {
    double lo, hi;
    bool defined;
};

OverlapInterval class_overlap(const Matrix& x, const std::vector<int>& y,
                              const std::vector<std::size_t>& rows, std::size_t feature) {
    double min0 = std::numeric_limits<double>::infinity(), max0 = -min0;
    double min1 = min0, max1 = -min0;
    bool seen0 = false, seen1 = false;
    for (std::size_t r : rows) {
        const double v = x(r, feature);
        if (y[r] == 0) {
            min0 = std::min(min0, v);
            max0 = std::max(max0, v);
            seen0 = true;
        } else {
            min1 = std::min(min1, v);
            max1 = std::max(max1, v);
            seen1 = true;
        }
    }
    if (!seen0 || !seen1) return {0.0, 0.0, false};
    return {std::max(min0, min1), std::min(max0, max1), true};
}

// --- small dense symmetric eigen toolbox -----------------------------------

// cyclic Jacobi; good enough for the scatter matrices used by f1v
void jacobi_eigensymm(std::vector<double>& a, std::size_t n, std::vector<double>& eigenvalues,
                      std::vector<double>& eigenvectors) {
    eigenvectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) eigenvectors[i * n + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off <= 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = eigenvectors[k * n + p], vkq = eigenvectors[k * n + q];
                    eigenvectors[k * n + p] = c * vkp - s * vkq;
                    eigenvectors[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i * n + i];
}

}  // namespace

const std::vector<std::string>& classical_metric_names() {
    static const std::vector<std::string> names = {
        "f1", "f1v", "f2", "f3", "f4", "l1", "l2", "l3", "n1", "n2", "n3",
        "n4", "t1", "lsc", "density", "cls_coef", "hubs", "t2", "t3", "t4", "c1", "c2"};
    return names;
}

std::map<std::string, double> feature_based_measures(const Dataset& raw) {
    require_binary(raw);
    const Dataset data = canonical_row_order(raw);
    const Matrix& x = data.features;
    const std::vector<int>& y = data.labels;
    const std::size_t n = x.rows, d = x.cols;
    const double n0 = static_cast<double>(data.class_count(0));
    const double n1 = static_cast<double>(data.class_count(1));

    std::map<std::string, double> out;

    // f1: inverse of the best per-feature Fisher discriminant ratio
    double best_ratio = 0.0;
    bool infinite_ratio = false;
    for (std::size_t f = 0; f < d; ++f) {
        double mu = 0.0, mu0 = 0.0, mu1 = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            mu += x(r, f);
            (y[r] == 0 ? mu0 : mu1) += x(r, f);
        }
        mu /= static_cast<double>(n);
        mu0 /= n0;
        mu1 /= n1;
        double within = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dev = x(r, f) - (y[r] == 0 ? mu0 : mu1);
            within += dev * dev;
        }
        const double between = n0 * (mu0 - mu) * (mu0 - mu) + n1 * (mu1 - mu) * (mu1 - mu);
        if (within > 0.0) {
            best_ratio = std::max(best_ratio, between / within);
        } else if (between > 0.0) {
            infinite_ratio = true;  // constant within both classes, means differ
        }
    }
    out["f1"] = infinite_ratio ? 0.0 : 1.0 / (1.0 + best_ratio);

    // f1v: Fisher directional vector with pseudo-inverted pooled scatter
    {
        std::vector<double> mu0(d, 0.0), mu1(d, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t f = 0; f < d; ++f) (y[r] == 0 ? mu0[f] : mu1[f]) += x(r, f);
        for (std::size_t f = 0; f < d; ++f) {
            mu0[f] /= n0;
            mu1[f] /= n1;
        }
        std::vector<double> w(d * d, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const auto& mu = y[r] == 0 ? mu0 : mu1;
            for (std::size_t i = 0; i < d; ++i) {
                const double di = x(r, i) - mu[i];
                for (std::size_t j = i; j < d; ++j) w[i * d + j] += di * (x(r, j) - mu[j]);
            }
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < i; ++j) w[i * d + j] = w[j * d + i];
        for (double& v : w) v /= static_cast<double>(n);

        std::vector<double> delta(d);
        for (std::size_t f = 0; f < d; ++f) delta[f] = mu0[f] - mu1[f];

        std::vector<double> evals, evecs, a = w;
        jacobi_eigensymm(a, d, evals, evecs);
        double max_eval = 0.0;
        for (double v : evals) max_eval = std::max(max_eval, std::abs(v));
        std::vector<double> dir(d, 0.0);  // W^+ delta
        for (std::size_t e = 0; e < d; ++e) {
            if (std::abs(evals[e]) <= kEigenTol * std::max(max_eval, 1e-300)) continue;
            double proj = 0.0;
            for (std::size_t f = 0; f < d; ++f) proj += evecs[f * d + e] * delta[f];
            proj /= evals[e];
            for (std::size_t f = 0; f < d; ++f) dir[f] += proj * evecs[f * d + e];
        }
        double num = 0.0;  // (dir . delta)^2
        for (std::size_t f = 0; f < d; ++f) num += dir[f] * delta[f];
        num *= num;
        double den = 0.0;  // dir^T W dir
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += w[i * d + j] * dir[j];
            den += dir[i] * acc;
        }
        double f1v;
        if (den > 0.0) {
            f1v = 1.0 / (1.0 + num / den);
        } else {
            f1v = num > 0.0 ? 0.0 : 1.0;
        }
        out["f1v"] = f1v;
    }

    // f2 / f3: per-feature class range overlap
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);
    double f2 = 1.0, best_efficiency = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
        const auto ov = class_overlap(x, y, all_rows, f);
        double lo = x(0, f), hi = x(0, f);
        for (std::size_t r = 1; r < n; ++r) {
            lo = std::min(lo, x(r, f));
            hi = std::max(hi, x(r, f));
        }
        const double range = hi - lo;
        f2 *= range > 0.0 ? std::max(0.0, ov.hi - ov.lo) / range : 1.0;

        std::size_t outside = 0;
        for (std::size_t r = 0; r < n; ++r)
            outside += static_cast<std::size_t>(x(r, f) < ov.lo || x(r, f) > ov.hi);
        best_efficiency = std::max(best_efficiency, static_cast<double>(outside) / static_cast<double>(n));
    }
    out["f2"] = f2;
    out["f3"] = 1.0 - best_efficiency;

    // f4: residual after iterative removal by the most efficient feature
    {
        std::vector<std::size_t> remaining = all_rows;
        std::vector<bool> used(d, false);
        for (std::size_t round = 0; round < d && !remaining.empty(); ++round) {
            std::size_t best_f = d;
            std::size_t best_removed = 0;
            std::vector<std::size_t> best_keep;
            for (std::size_t f = 0; f < d; ++f) {
                if (used[f]) continue;
                const auto ov = class_overlap(x, y, remaining, f);
                std::vector<std::size_t> keep;
                for (std::size_t r : remaining) {
                    const bool separable = !ov.defined || x(r, f) < ov.lo || x(r, f) > ov.hi;
                    if (!separable) keep.push_back(r);
                }
                const std::size_t removed = remaining.size() - keep.size();
                if (best_f == d || removed > best_removed) {
                    best_f = f;
                    best_removed = removed;
                    best_keep = std::move(keep);
                }
            }
            used[best_f] = true;
            remaining = std::move(best_keep);
        }
        out["f4"] = static_cast<double>(remaining.size()) / static_cast<double>(n);
    }
    return out;
}

std::map<std::string, double> linearity_measures(const Dataset& raw,
                                                 const ClassicalConfig& config) {
    require_binary(raw);
    const Dataset data = canonical_row_order(raw);
    const Matrix xs = min_max_scaled(data.features);
    const std::vector<int>& y = data.labels;
    const std::size_t n = xs.rows;

    const HingeClassifier clf = fit_hinge(xs, y, config);
    double wnorm = 0.0;
    for (double w : clf.weights) wnorm += w * w;
    wnorm = std::sqrt(wnorm);

    double error_distance = 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = clf.decision(xs.values.data() + i * xs.cols, xs.cols);
        const double yi = y[i] == 1 ? 1.0 : -1.0;
        if (yi * z < 0.0) {
            ++errors;
            if (wnorm > 0.0) error_distance += std::abs(z) / wnorm;
        }
    }

    Rng rng(derive_seed(config.seed, 0x4c33u));
    const Matrix synth = interpolated_points(xs, y, rng);
    std::size_t synth_errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = clf.decision(synth.values.data() + i * synth.cols, synth.cols);
        const double yi = y[i] == 1 ? 1.0 : -1.0;
        synth_errors += static_cast<std::size_t>(yi * z < 0.0);
    }

    std::map<std::string, double> out;
    out["l1"] = error_distance / static_cast<double>(n);
    out["l2"] = static_cast<double>(errors) / static_cast<double>(n);
    out["l3"] = static_cast<double>(synth_errors) / static_cast<double>(n);
    return out;
}

std::map<std::string, double> neighborhood_measures(const Dataset& raw,
                                                    const ClassicalConfig& config) {
    require_binary(raw);
    if (raw.n_rows() < 3) throw ValidationError("neighborhood measures need n >= 3");
    const Dataset data = canonical_row_order(raw);
    const Matrix xs = min_max_scaled(data.features);
    const std::vector<int>& y = data.labels;
    const std::size_t n = xs.rows;
    const Matrix dist = pairwise_distances(xs);

    std::map<std::string, double> out;

    // n1: fraction of MST edges joining opposite classes (Prim, O(n^2))
    {
        std::vector<bool> in_tree(n, false);
        std::vector<double> best_dist(n, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> best_from(n, 0);
        in_tree[0] = true;
        for (std::size_t j = 1; j < n; ++j) {
            best_dist[j] = dist(0, j);
            best_from[j] = 0;
        }
        std::size_t cross_edges = 0;
        for (std::size_t added = 1; added < n; ++added) {
            std::size_t pick = n;
            for (std::size_t j = 0; j < n; ++j)
                if (!in_tree[j] && (pick == n || best_dist[j] < best_dist[pick])) pick = j;
            in_tree[pick] = true;
            cross_edges += static_cast<std::size_t>(y[pick] != y[best_from[pick]]);
            for (std::size_t j = 0; j < n; ++j) {
                if (!in_tree[j] && dist(pick, j) < best_dist[j]) {
                    best_dist[j] = dist(pick, j);
                    best_from[j] = pick;
                }
            }
        }
        out["n1"] = static_cast<double>(cross_edges) / static_cast<double>(n - 1);
    }

    // n2: intra/inter nearest-neighbor distance ratio
    {
        double intra = 0.0, inter = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best_same = std::numeric_limits<double>::infinity();
            double best_diff = best_same;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                auto& slot = y[j] == y[i] ? best_same : best_diff;
                slot = std::min(slot, dist(i, j));
            }
            if (std::isfinite(best_same)) intra += best_same;
            inter += best_diff;
        }
        if (inter > 0.0) {
            const double r = intra / inter;
            out["n2"] = r / (1.0 + r);
        } else {
            out["n2"] = 1.0;  // enemies at distance zero
        }
    }

    // n3: leave-one-out 1-NN error, distance ties resolved toward error
    {
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i)
            errors += static_cast<std::size_t>(
                nn_errs(xs, y, xs.values.data() + i * xs.cols, y[i], i));
        out["n3"] = static_cast<double>(errors) / static_cast<double>(n);
    }

    // n4: 1-NN error on same-class interpolated points
    {
        Rng rng(derive_seed(config.seed, 0x4e34u));
        const Matrix synth = interpolated_points(xs, y, rng);
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i)
            errors += static_cast<std::size_t>(
                nn_errs(xs, y, synth.values.data() + i * synth.cols, y[i], n));
        out["n4"] = static_cast<double>(errors) / static_cast<double>(n);
    }

    // t1: hyperspheres grown to the nearest enemy, contained spheres absorbed
    {
        const std::vector<double> radius = enemy_distances(dist, y);
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool absorbed = false;
            for (std::size_t j = 0; j < n && !absorbed; ++j) {
                if (j == i) continue;
                if (dist(i, j) + radius[i] <= radius[j] &&
                    (radius[j] > radius[i] || (radius[j] == radius[i] && j < i)))
                    absorbed = true;
            }
            kept += static_cast<std::size_t>(!absorbed);
        }
        out["t1"] = static_cast<double>(kept) / static_cast<double>(n);
    }

    // lsc: local set sizes (instances strictly closer than the nearest enemy)
    {
        const std::vector<double> radius = enemy_distances(dist, y);
        std::size_t total = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                total += static_cast<std::size_t>(dist(i, j) < radius[i]);
        out["lsc"] = 1.0 - static_cast<double>(total) / static_cast<double>(n * n);
    }
    return out;
}

std::vector<double> hub_scores(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<double> v(n, 1.0), av(n, 0.0), next(n, 0.0);
    bool any_edge = false;
    for (const auto& nb : adj) any_edge = any_edge || !nb.empty();
    if (!any_edge) return std::vector<double>(n, 0.0);

    // power iteration on A^T A (= A^2 for the undirected adjacency)
    for (int it = 0; it < 100000; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j : adj[i]) s += v[j];
            av[i] = s;
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j : adj[i]) s += av[j];
            next[i] = s;
            norm += s * s;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) return std::vector<double>(n, 0.0);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= norm;
            change = std::max(change, std::abs(next[i] - v[i]));
        }
        v = next;
        if (change <= kEigenTol) break;
    }
    return v;
}

GraphMeasures network_measures_from_adjacency(std::vector<std::vector<std::size_t>> adj) {
    const std::size_t n = adj.size();
    if (n < 2) throw ValidationError("network measures need at least 2 vertices");
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    GraphMeasures out;

    std::size_t edge_count = 0;
    for (const auto& nb : adj) edge_count += nb.size();
    edge_count /= 2;
    out.density = 1.0 - static_cast<double>(2 * edge_count) / static_cast<double>(n * (n - 1));

    double cc_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = adj[i];
        if (nb.size() < 2) continue;
        std::size_t links = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                links += static_cast<std::size_t>(
                    std::binary_search(adj[nb[a]].begin(), adj[nb[a]].end(), nb[b]));
        cc_sum += 2.0 * static_cast<double>(links) /
                  (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }
    out.cls_coef = 1.0 - cc_sum / static_cast<double>(n);

    const std::vector<double> hubs = hub_scores(adj);
    const double peak = *std::max_element(hubs.begin(), hubs.end());
    double mean = 0.0;
    if (peak > 0.0)
        for (double h : hubs) mean += h / peak;
    out.hubs = 1.0 - mean / static_cast<double>(n);
    return out;
}

std::map<std::string, double> network_measures(const Dataset& raw,
                                               const ClassicalConfig& config) {
    if (raw.n_rows() < 3) throw ValidationError("network measures need n >= 3");
    const Dataset data = canonical_row_order(raw);
    const Matrix& x = data.features;
    const std::size_t n = x.rows, d = x.cols;

    std::vector<double> range(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double lo = x(0, c), hi = x(0, c);
        for (std::size_t r = 1; r < n; ++r) {
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        range[c] = hi - lo;
    }

    // Gower epsilon-graph; inter-class edges pruned
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (data.labels[i] != data.labels[j]) continue;
            double g = 0.0;
            for (std::size_t c = 0; c < d; ++c)
                if (range[c] > 0.0) g += std::abs(x(i, c) - x(j, c)) / range[c];
            g /= static_cast<double>(d);
            if (g < config.gower_epsilon) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    const GraphMeasures gm = network_measures_from_adjacency(adj);
    return {{"density", gm.density}, {"cls_coef", gm.cls_coef}, {"hubs", gm.hubs}};
}

std::map<std::string, double> dimensionality_measures(const Dataset& raw,
                                                      const ClassicalConfig& config) {
    const Dataset data = canonical_row_order(raw);
    const Matrix& x = data.features;
    const std::size_t n = x.rows, d = x.cols;

    // centered data; covariance products are applied matrix-free
    Matrix xc = x;
    for (std::size_t c = 0; c < d; ++c) {
        double mu = 0.0;
        for (std::size_t r = 0; r < n; ++r) mu += x(r, c);
        mu /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) xc(r, c) -= mu;
    }
    const double denom = static_cast<double>(n - 1);
    double total_var = 0.0;
    for (double v : xc.values) total_var += v * v;
    total_var /= denom;

    std::size_t components = 0;
    if (total_var > 1e-12) {
        std::vector<std::vector<double>> basis;
        std::vector<double> lambdas;
        double cumulative = 0.0;
        std::vector<double> v(d), xv(n), cv(d);
        const std::size_t max_components = std::min(n, d);
        while (cumulative < config.pca_variance * total_var - 1e-12 * total_var &&
               components < max_components) {
            for (std::size_t c = 0; c < d; ++c) v[c] = 1.0 + 1e-3 * static_cast<double>(c);
            double lambda = 0.0;
            for (int it = 0; it < 10000; ++it) {
                // cv = C v, deflated by the eigenpairs found so far
                for (std::size_t r = 0; r < n; ++r) {
                    double s = 0.0;
                    const double* row = xc.values.data() + r * d;
                    for (std::size_t c = 0; c < d; ++c) s += row[c] * v[c];
                    xv[r] = s;
                }
                std::fill(cv.begin(), cv.end(), 0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    const double* row = xc.values.data() + r * d;
                    for (std::size_t c = 0; c < d; ++c) cv[c] += row[c] * xv[r];
                }
                for (std::size_t c = 0; c < d; ++c) cv[c] /= denom;
                for (std::size_t e = 0; e < basis.size(); ++e) {
                    double proj = 0.0;
                    for (std::size_t c = 0; c < d; ++c) proj += basis[e][c] * v[c];
                    proj *= lambdas[e];
                    for (std::size_t c = 0; c < d; ++c) cv[c] -= proj * basis[e][c];
                }
                double norm = 0.0;
                for (double s : cv) norm += s * s;
                norm = std::sqrt(norm);
                if (norm <= 1e-300) {
                    lambda = 0.0;
                    break;
                }
                double new_lambda = 0.0;
                for (std::size_t c = 0; c < d; ++c) new_lambda += v[c] * cv[c];
                double change = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const double nv = cv[c] / norm;
                    change = std::max(change, std::abs(nv - v[c]));
                    v[c] = nv;
                }
                // sign flips oscillate for negative-shift artifacts; compare magnitude
                const double rel = std::abs(new_lambda - lambda) /
                                   std::max(std::abs(new_lambda), 1e-300);
                lambda = new_lambda;
                if (change <= kEigenTol || rel <= kEigenTol) break;
            }
            if (lambda <= 1e-12 * total_var) break;  // residual variance is numerically zero
            basis.push_back(v);
            lambdas.push_back(lambda);
            cumulative += lambda;
            ++components;
        }
    }

    std::map<std::string, double> out;
    out["t2"] = static_cast<double>(d) / static_cast<double>(n);
    out["t3"] = static_cast<double>(components) / static_cast<double>(n);
    out["t4"] = static_cast<double>(components) / static_cast<double>(d);
    return out;
}

std::map<std::string, double> class_imbalance_measures(const Dataset& data) {
    require_binary(data);
    const double n = static_cast<double>(data.n_rows());
    const double p0 = static_cast<double>(data.class_count(0)) / n;
    const double p1 = static_cast<double>(data.class_count(1)) / n;

    const double entropy = -(p0 * std::log2(p0) + p1 * std::log2(p1));
    const double ir = 0.5 * (p0 / p1 + p1 / p0);

    std::map<std::string, double> out;
    out["c1"] = 1.0 - entropy;
    out["c2"] = 1.0 - 1.0 / ir;
    return out;
}

ClassicalReport full_report(const Dataset& data, const ClassicalConfig& config) {
    ClassicalReport report;
    auto merge = [&](const std::map<std::string, double>& part, const char* family) {
        for (const auto& [k, v] : part) {
            if (!std::isfinite(v))
                throw std::runtime_error(std::string("classical metric ") + k + " (" + family +
                                         ") is non-finite");
            report.values[k] = v;
        }
    };
    merge(feature_based_measures(data), "feature-based");
    merge(linearity_measures(data, config), "linearity");
    merge(neighborhood_measures(data, config), "neighborhood");
    merge(network_measures(data, config), "network");
    merge(dimensionality_measures(data, config), "dimensionality");
    merge(class_imbalance_measures(data), "class-imbalance");

    double total = 0.0;
    for (const auto& [k, v] : report.values) total += std::clamp(v, 0.0, 1.0);
    report.score = total / static_cast<double>(report.values.size());
    return report;
}

std::string classical_report_to_json(const ClassicalReport& report) {
    nlohmann::json j;
    for (const auto& name : classical_metric_names()) j["values"][name] = report.values.at(name);
    j["score"] = report.score;
    return j.dump(2);
}

std::string classical_report_to_csv(const ClassicalReport& report) {
    std::ostringstream header, row;
    char buf[32];
    for (const auto& name : classical_metric_names()) {
        header << name << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", report.values.at(name));
        row << buf << ',';
    }
    header << "score";
    std::snprintf(buf, sizeof(buf), "%.17g", report.score);
    row << buf;
    return header.str() + "\n" + row.str() + "\n";
}

}  // namespace gadepth
