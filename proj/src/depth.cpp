#include "gadepth/depth.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace gadepth {

Fold fold_from_string(const std::string& s) {
    if (s == "train") return Fold::train;
    if (s == "test") return Fold::test;
    if (s == "validation") return Fold::validation;
    throw ValidationError("unknown fold \"" + s + "\"");
}

std::string to_string(Fold fold) {
    switch (fold) {
        case Fold::train: return "train";
        case Fold::test: return "test";
        default: return "validation";
    }
}

void SweepConfig::validate() const {
    if (size_limits.empty()) throw ValidationError("size_limits must be non-empty");
    for (std::size_t i = 0; i < size_limits.size(); ++i) {
        if (size_limits[i] < 1) throw ValidationError("size_limits must all be >= 1");
        if (i > 0 && size_limits[i] <= size_limits[i - 1])
            throw ValidationError("size_limits must be strictly increasing");
    }
    if (replicates < 1) throw ValidationError("replicates must be >= 1");
    if (cv_folds < 2) throw ValidationError("cv folds must be >= 2");
}

double ReplicateResult::auc(Fold fold) const {
    switch (fold) {
        case Fold::train: return train_auc;
        case Fold::test: return test_auc;
        default: return validation_auc;
    }
}

double DepthCurve::mean(Fold fold, std::size_t i) const {
    const auto& cell = replicates[i];
    // summed in sorted order so the mean is exactly invariant to replicate order
    std::vector<double> values;
    values.reserve(cell.size());
    for (const auto& r : cell) values.push_back(r.auc(fold));
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(cell.size());
}

std::vector<double> DepthCurve::means(Fold fold) const {
    std::vector<double> out(size_limits.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mean(fold, i);
    return out;
}

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, int size_limit, int replicate) {
    return derive_seed(base_seed, static_cast<std::uint64_t>(size_limit),
                       static_cast<std::uint64_t>(replicate));
}

DepthCurve run_sweep(const Dataset& data, const Partition& partition, const SweepConfig& config,
                     const ProgressSink& progress) {
    config.validate();

    std::vector<std::size_t> visible;
    if (config.fitness_mode == FitnessMode::cv) {
        std::merge(partition.train_idx.begin(), partition.train_idx.end(),
                   partition.test_idx.begin(), partition.test_idx.end(),
                   std::back_inserter(visible));
    } else {
        visible = partition.train_idx;
    }

    DepthCurve curve;
    curve.size_limits = config.size_limits;
    curve.replicates.assign(config.size_limits.size(),
                            std::vector<ReplicateResult>(static_cast<std::size_t>(config.replicates)));

    struct Cell {
        std::size_t s_pos;
        int replicate;
    };
    std::vector<Cell> cells;
    for (std::size_t s = 0; s < config.size_limits.size(); ++s)
        for (int r = 0; r < config.replicates; ++r) cells.push_back({s, r});

    std::atomic<std::size_t> cursor{0};
    std::atomic<int> done{0};
    std::mutex failure_mutex;
    std::string failure;

    auto worker = [&]() {
        for (;;) {
            const std::size_t at = cursor.fetch_add(1);
            if (at >= cells.size()) return;
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure.empty()) return;
            }
            const Cell cell = cells[at];
            const int size_limit = config.size_limits[cell.s_pos];
            const std::uint64_t seed = sweep_cell_seed(config.base_seed, size_limit, cell.replicate);
            try {
                GaConfig ga = config.ga;
                ga.size_limit = size_limit;
                ga.seed = seed;

                FitnessHarness harness;
                harness.kind = config.evaluator;
                harness.k = config.cv_folds;
                harness.seed = seed;
                harness.mode = config.fitness_mode;
                if (config.fitness_mode == FitnessMode::holdout)
                    harness.holdout_idx = partition.test_idx;

                const GaRunResult run = run_ga(data, visible, ga, harness);
                const FinalEvaluation final = evaluate_final(data, partition, run.best_genome, harness);

                ReplicateResult& slot = curve.replicates[cell.s_pos][static_cast<std::size_t>(cell.replicate)];
                slot.train_auc = final.train_auc;
                slot.test_auc = final.test_auc;
                slot.validation_auc = final.validation_auc;
                slot.genome = run.best_genome;
                slot.seed = seed;
                std::string names;
                for (std::size_t idx : run.best_genome.selected) {
                    if (!names.empty()) names += ';';
                    names += data.feature_names[idx];
                }
                slot.selected_names = std::move(names);
            } catch (const std::exception& err) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (failure.empty())
                    failure = "sweep cell (size_limit=" + std::to_string(size_limit) +
                              ", replicate=" + std::to_string(cell.replicate) + ") failed: " + err.what();
                return;
            }
            const int completed = done.fetch_add(1) + 1;
            if (progress) progress(completed, static_cast<int>(cells.size()));
        }
    };

    unsigned n_workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                            : std::thread::hardware_concurrency();
    if (n_workers == 0) n_workers = 1;
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(cells.size()));

    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!failure.empty()) throw std::runtime_error(failure);
    return curve;
}

std::map<double, int> threshold_depths(const DepthCurve& curve, Fold fold,
                                       const std::vector<double>& thresholds) {
    if (curve.size_limits.empty()) throw ValidationError("threshold_depths: empty curve");
    const std::vector<double> means = curve.means(fold);
    const double peak = *std::max_element(means.begin(), means.end());

    std::map<double, int> out;
    for (double t : thresholds) {
        const double target = t >= 1.0 ? peak : t * peak;
        for (std::size_t i = 0; i < means.size(); ++i) {
            if (means[i] >= target) {
                out[t] = curve.size_limits[i];
                break;
            }
        }
    }
    return out;
}

int elbow_point(const DepthCurve& curve, Fold fold) {
    const std::size_t n = curve.size_limits.size();
    if (n < 2) throw ValidationError("elbow_point: need at least 2 size limits");
    const std::vector<double> means = curve.means(fold);

    const double x0 = curve.size_limits.front(), y0 = means.front();
    const double x1 = curve.size_limits.back(), y1 = means.back();
    const double dx = x1 - x0, dy = y1 - y0;

    // signed cross product; positive means the point lies above the chord
    double best = 0.0;
    std::size_t best_i = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double cross = dx * (means[i] - y0) - dy * (curve.size_limits[i] - x0);
        if (cross > 0.0 && (!found || cross > best)) {
            best = cross;
            best_i = i;
            found = true;
        }
    }
    return found ? curve.size_limits[best_i] : curve.size_limits.front();
}

const FoldReport& ComplexityReport::fold(Fold f) const {
    switch (f) {
        case Fold::train: return train;
        case Fold::test: return test;
        default: return validation;
    }
}

ComplexityReport build_report(const DepthCurve& curve) {
    static const std::vector<double> kThresholds = {0.90, 0.95, 0.99, 0.995, 1.00};
    ComplexityReport report;
    for (Fold fold : {Fold::train, Fold::test, Fold::validation}) {
        FoldReport fr;
        fr.depth_at = threshold_depths(curve, fold, kThresholds);
        fr.elbow = elbow_point(curve, fold);
        const auto means = curve.means(fold);
        const auto peak_it = std::max_element(means.begin(), means.end());
        fr.peak_mean = *peak_it;
        fr.peak_size_limit =
            curve.size_limits[static_cast<std::size_t>(peak_it - means.begin())];
        switch (fold) {
            case Fold::train: report.train = std::move(fr); break;
            case Fold::test: report.test = std::move(fr); break;
            default: report.validation = std::move(fr); break;
        }
    }
    return report;
}

namespace {

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_curve_csv(const DepthCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "size_limit,replicate,train_auc,test_auc,validation_auc,selected_features,seed\n";
    for (std::size_t i = 0; i < curve.size_limits.size(); ++i) {
        for (std::size_t r = 0; r < curve.replicates[i].size(); ++r) {
            const ReplicateResult& rep = curve.replicates[i][r];
            out << curve.size_limits[i] << ',' << r << ',' << format_g17(rep.train_auc) << ','
                << format_g17(rep.test_auc) << ',' << format_g17(rep.validation_auc) << ','
                << rep.selected_names << ',' << rep.seed << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

DepthCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open curve file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty curve file: " + path);

    DepthCurve curve;
    std::map<int, std::vector<ReplicateResult>> cells;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 7)
            throw ValidationError("curve file row " + std::to_string(row) + ": expected 7 fields");
        ReplicateResult rep;
        int size_limit = 0;
        try {
            size_limit = std::stoi(fields[0]);
            rep.train_auc = std::stod(fields[2]);
            rep.test_auc = std::stod(fields[3]);
            rep.validation_auc = std::stod(fields[4]);
            // feature names may themselves contain commas; everything between
            // the AUC columns and the trailing seed belongs to them
            rep.selected_names = fields[5];
            for (std::size_t f = 6; f + 1 < fields.size(); ++f)
                rep.selected_names += "," + fields[f];
            rep.seed = std::stoull(fields.back());
        } catch (const std::exception&) {
            throw ValidationError("curve file row " + std::to_string(row) + ": parse error");
        }
        cells[size_limit].push_back(std::move(rep));
    }
    if (cells.empty()) throw ValidationError("curve file has no data rows: " + path);
    for (auto& [size_limit, reps] : cells) {
        curve.size_limits.push_back(size_limit);
        curve.replicates.push_back(std::move(reps));
    }
    return curve;
}

std::string report_to_json(const ComplexityReport& report) {
    nlohmann::json j;
    for (Fold fold : {Fold::train, Fold::test, Fold::validation}) {
        const FoldReport& fr = report.fold(fold);
        nlohmann::json jf;
        nlohmann::json depths;
        for (const auto& [t, s] : fr.depth_at) {
            char key[16];
            std::snprintf(key, sizeof(key), "%g", t);
            depths[key] = s;
        }
        jf["depth_at"] = depths;
        jf["elbow"] = fr.elbow;
        jf["peak_mean"] = fr.peak_mean;
        jf["peak_size_limit"] = fr.peak_size_limit;
        j[to_string(fold)] = jf;
    }
    return j.dump(2);
}

}  // namespace gadepth
