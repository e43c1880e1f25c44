#include "gadepth/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace gadepth {

namespace {

constexpr double kMarginalTol = 1e-11;
constexpr int kBalanceSweepBudget = 10000;

std::vector<int> cell_genotypes(std::size_t index, int order) {
    std::vector<int> g(static_cast<std::size_t>(order));
    for (int l = order - 1; l >= 0; --l) {
        g[static_cast<std::size_t>(l)] = static_cast<int>(index % 3);
        index /= 3;
    }
    return g;
}

double hw_probability(double maf, int genotype) {
    switch (genotype) {
        case 0: return (1.0 - maf) * (1.0 - maf);
        case 1: return 2.0 * maf * (1.0 - maf);
        default: return maf * maf;
    }
}

int sample_genotype(double maf, Rng& rng) {
    const double u = rng.uniform01();
    const double p0 = (1.0 - maf) * (1.0 - maf);
    if (u < p0) return 0;
    if (u < p0 + 2.0 * maf * (1.0 - maf)) return 1;
    return 2;
}

// Gauss-Seidel sweeps that cancel single-locus marginal deviations; the
// overall prevalence is preserved by construction. Linear in the table, so a
// balanced pattern scales to any amplitude while staying balanced.
bool balance_marginals(PenetranceModel& model) {
    const int order = model.order;
    for (int sweep = 0; sweep < kBalanceSweepBudget; ++sweep) {
        if (model.max_marginal_deviation() <= kMarginalTol) return true;
        const double k = model.prevalence();
        for (int locus = 0; locus < order; ++locus) {
            for (int value = 0; value < 3; ++value) {
                double marginal = 0.0, mass = 0.0;
                for (std::size_t c = 0; c < model.cell_count(); ++c) {
                    const auto g = cell_genotypes(c, order);
                    if (g[static_cast<std::size_t>(locus)] != value) continue;
                    const double p = model.genotype_probability(g);
                    marginal += p * model.table[c];
                    mass += p;
                }
                const double deviation = marginal / mass - k;
                for (std::size_t c = 0; c < model.cell_count(); ++c) {
                    const auto g = cell_genotypes(c, order);
                    if (g[static_cast<std::size_t>(locus)] == value)
                        model.table[c] -= deviation;
                }
            }
        }
    }
    return model.max_marginal_deviation() <= kMarginalTol;
}

}  // namespace

std::size_t PenetranceModel::cell_index(const std::vector<int>& genotypes) const {
    std::size_t idx = 0;
    for (int g : genotypes) idx = idx * 3 + static_cast<std::size_t>(g);
    return idx;
}

double PenetranceModel::genotype_probability(const std::vector<int>& genotypes) const {
    double p = 1.0;
    for (std::size_t l = 0; l < genotypes.size(); ++l) p *= hw_probability(maf[l], genotypes[l]);
    return p;
}

double PenetranceModel::prevalence() const {
    double k = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c)
        k += genotype_probability(cell_genotypes(c, order)) * table[c];
    return k;
}

double PenetranceModel::heritability() const {
    const double k = prevalence();
    double var = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c) {
        const double d = table[c] - k;
        var += genotype_probability(cell_genotypes(c, order)) * d * d;
    }
    return var / (k * (1.0 - k));
}

double PenetranceModel::max_marginal_deviation() const {
    const double k = prevalence();
    double worst = 0.0;
    for (int locus = 0; locus < order; ++locus) {
        for (int value = 0; value < 3; ++value) {
            double marginal = 0.0, mass = 0.0;
            for (std::size_t c = 0; c < cell_count(); ++c) {
                const auto g = cell_genotypes(c, order);
                if (g[static_cast<std::size_t>(locus)] != value) continue;
                const double p = genotype_probability(g);
                marginal += p * table[c];
                mass += p;
            }
            worst = std::max(worst, std::abs(marginal / mass - k));
        }
    }
    return worst;
}

PenetranceModel make_xor_model(int order, std::vector<double> maf, double target_heritability) {
    if (order != 2 && order != 3) throw ValidationError("model order must be 2 or 3");
    if (maf.size() != static_cast<std::size_t>(order))
        throw ValidationError("need one minor allele frequency per locus");
    for (double m : maf)
        if (!(m > 0.0 && m <= 0.5))
            throw ValidationError("minor allele frequencies must be in (0, 0.5]");
    if (!(target_heritability > 0.0 && target_heritability < 1.0))
        throw ValidationError("target heritability must be in (0, 1)");

    PenetranceModel model;
    model.order = order;
    model.maf = std::move(maf);
    model.table.resize(static_cast<std::size_t>(std::pow(3.0, order)));

    // unit-amplitude parity pattern around 0.5, then cancel main effects
    for (std::size_t c = 0; c < model.cell_count(); ++c) {
        const auto g = cell_genotypes(c, order);
        const int het = static_cast<int>(std::count(g.begin(), g.end(), 1));
        model.table[c] = 0.5 + (het % 2 == 1 ? 0.5 : -0.5);
    }
    if (!balance_marginals(model))
        throw ValidationError("penetrance balancing failed to converge for the given MAFs");

    std::vector<double> pattern(model.cell_count());
    double max_abs = 0.0;
    for (std::size_t c = 0; c < model.cell_count(); ++c) {
        pattern[c] = (model.table[c] - 0.5) / 0.5;  // balanced, unit-scaled
        max_abs = std::max(max_abs, std::abs(pattern[c]));
    }
    if (max_abs <= 0.0) throw ValidationError("degenerate penetrance pattern");

    auto apply_amplitude = [&](double a) {
        for (std::size_t c = 0; c < model.cell_count(); ++c)
            model.table[c] = 0.5 + a * pattern[c];
    };

    const double a_max = 0.5 / max_abs;  // keeps every penetrance inside [0,1]
    apply_amplitude(a_max);
    if (model.heritability() + 1e-3 < target_heritability)
        throw ValidationError("target heritability " + std::to_string(target_heritability) +
                              " unreachable: amplitude bound gives at most " +
                              std::to_string(model.heritability()));

    double lo = 0.0, hi = a_max;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        apply_amplitude(mid);
        const double h2 = model.heritability();
        if (std::abs(h2 - target_heritability) <= 1e-9) break;
        (h2 < target_heritability ? lo : hi) = mid;
    }
    return model;
}

void GenSpec::validate() const {
    if (models.empty() || models.size() > 2)
        throw ValidationError("spec needs one or two penetrance models");
    if (n_cases < 1 || n_controls < 1) throw ValidationError("case/control counts must be >= 1");
    std::size_t functional = 0;
    for (const auto& m : models) functional += static_cast<std::size_t>(m.order);
    if (total_features < functional)
        throw ValidationError("total_features must be >= the summed model orders");
    const auto [lo, hi] = irrelevant_maf_range;
    if (!(lo > 0.0 && lo <= hi && hi <= 0.5))
        throw ValidationError("irrelevant MAF range must satisfy 0 < lo <= hi <= 0.5");
}

GeneratedDataset generate(const GenSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, 0x53594eu));

    std::size_t functional_total = 0;
    for (const auto& m : spec.models) functional_total += static_cast<std::size_t>(m.order);

    // functional loci get seeded random column positions
    const auto positions = rng.sample_indices(spec.total_features, functional_total);
    std::vector<std::size_t> shuffled(positions);
    rng.shuffle(shuffled);

    GeneratedDataset out;
    out.spec = spec;
    std::vector<bool> is_functional(spec.total_features, false);
    std::size_t cursor = 0;
    std::vector<std::vector<std::size_t>> model_columns;
    for (const auto& m : spec.models) {
        std::vector<std::size_t> cols(shuffled.begin() + static_cast<std::ptrdiff_t>(cursor),
                                      shuffled.begin() + static_cast<std::ptrdiff_t>(cursor + m.order));
        cursor += static_cast<std::size_t>(m.order);
        for (std::size_t c : cols) is_functional[c] = true;
        out.functional_positions.push_back(cols);
        model_columns.push_back(std::move(cols));
    }

    std::vector<std::string> names(spec.total_features);
    std::vector<double> irrelevant_maf(spec.total_features, 0.0);
    const auto [maf_lo, maf_hi] = spec.irrelevant_maf_range;
    for (std::size_t c = 0; c < spec.total_features; ++c) {
        names[c] = "f" + std::to_string(c) + (is_functional[c] ? "_fn" : "");
        if (!is_functional[c]) {
            irrelevant_maf[c] = maf_lo == maf_hi ? maf_lo : rng.uniform(maf_lo, maf_hi);
            out.irrelevant_mafs.push_back(irrelevant_maf[c]);
        }
    }

    const std::size_t n = spec.n_cases + spec.n_controls;
    Matrix features(n, spec.total_features);
    std::vector<int> labels(n, 0);

    std::size_t cases_left = spec.n_cases, controls_left = spec.n_controls, row = 0;
    const std::size_t attempt_budget = 200 * n + 10000;
    std::size_t attempts = 0;
    std::vector<std::vector<int>> genotypes(spec.models.size());

    while (cases_left + controls_left > 0) {
        if (++attempts > attempt_budget)
            throw ValidationError("rejection budget exhausted: penetrances too extreme for the "
                                  "requested case/control quotas");
        const std::size_t driver =
            spec.models.size() == 2 ? static_cast<std::size_t>(rng.bernoulli(0.5)) : 0;
        for (std::size_t m = 0; m < spec.models.size(); ++m) {
            auto& g = genotypes[m];
            g.resize(static_cast<std::size_t>(spec.models[m].order));
            for (std::size_t l = 0; l < g.size(); ++l)
                g[l] = sample_genotype(spec.models[m].maf[l], rng);
        }
        const PenetranceModel& active = spec.models[driver];
        const double penetrance = active.table[active.cell_index(genotypes[driver])];
        const int label = rng.bernoulli(penetrance) ? 1 : 0;

        auto& quota = label == 1 ? cases_left : controls_left;
        if (quota == 0) continue;
        --quota;

        for (std::size_t m = 0; m < spec.models.size(); ++m)
            for (std::size_t l = 0; l < genotypes[m].size(); ++l)
                features(row, model_columns[m][l]) = genotypes[m][l];
        for (std::size_t c = 0; c < spec.total_features; ++c)
            if (!is_functional[c]) features(row, c) = sample_genotype(irrelevant_maf[c], rng);
        labels[row] = label;
        ++row;
    }

    out.data = make_dataset(std::move(features), std::move(labels), std::move(names));
    return out;
}

double empirical_prevalence(const PenetranceModel& model, std::size_t n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x505245u));
    std::vector<int> g(static_cast<std::size_t>(model.order));
    std::size_t cases = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < g.size(); ++l) g[l] = sample_genotype(model.maf[l], rng);
        cases += static_cast<std::size_t>(rng.bernoulli(model.table[model.cell_index(g)]));
    }
    return static_cast<double>(cases) / static_cast<double>(n);
}

std::vector<SuiteEntry> paper_suite(std::uint64_t seed) {
    struct Family {
        std::string name;
        std::vector<PenetranceModel> models;
    };
    const double h2 = 0.4;
    std::vector<Family> families;
    families.push_back({"xor2", {make_xor_model(2, {0.5, 0.5}, h2)}});
    families.push_back({"xor3", {make_xor_model(3, {0.5, 0.5, 0.5}, h2)}});
    families.push_back(
        {"het2x2", {make_xor_model(2, {0.5, 0.5}, h2), make_xor_model(2, {0.5, 0.5}, h2)}});

    const std::vector<std::pair<std::string, std::size_t>> sizes = {
        {"low", 0}, {"normal", 20}, {"median", 100}, {"high", 1000}};

    std::vector<SuiteEntry> out;
    std::uint64_t stream = 0;
    for (const auto& family : families) {
        std::size_t functional = 0;
        for (const auto& m : family.models) functional += static_cast<std::size_t>(m.order);
        for (const auto& [size_name, total] : sizes) {
            GenSpec spec;
            spec.models = family.models;
            spec.n_cases = 400;
            spec.n_controls = 400;
            spec.total_features = total == 0 ? functional : total;
            spec.seed = derive_seed(seed, 0x535549u, stream++);
            out.push_back({family.name + "_" + size_name, generate(spec)});
        }
    }
    return out;
}

std::string generation_manifest_json(const GeneratedDataset& generated) {
    nlohmann::json j;
    nlohmann::json models = nlohmann::json::array();
    for (const auto& m : generated.spec.models) {
        nlohmann::json jm;
        jm["order"] = m.order;
        jm["maf"] = m.maf;
        jm["table"] = m.table;
        jm["prevalence"] = m.prevalence();
        jm["heritability"] = m.heritability();
        jm["max_marginal_deviation"] = m.max_marginal_deviation();
        models.push_back(jm);
    }
    j["models"] = models;
    j["n_cases"] = generated.spec.n_cases;
    j["n_controls"] = generated.spec.n_controls;
    j["total_features"] = generated.spec.total_features;
    j["irrelevant_maf_range"] = {generated.spec.irrelevant_maf_range.first,
                                 generated.spec.irrelevant_maf_range.second};
    j["seed"] = generated.spec.seed;
    j["functional_positions"] = generated.functional_positions;
    return j.dump(2);
}

}  // namespace gadepth
