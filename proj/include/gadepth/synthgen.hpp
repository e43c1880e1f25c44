#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gadepth/dataset.hpp"
#include "gadepth/rng.hpp"

namespace gadepth {

// A k-locus penetrance model: P(case | genotype combination) for each of the
// 3^k combinations, genotypes coded as minor-allele counts 0/1/2 drawn under
// Hardy-Weinberg proportions at the per-locus minor allele frequency.
struct PenetranceModel {
    int order = 2;
    std::vector<double> maf;     // length order, each in (0, 0.5]
    std::vector<double> table;   // 3^order penetrances in [0,1], row-major

    std::size_t cell_count() const { return table.size(); }
    // row-major index of a genotype combination
    std::size_t cell_index(const std::vector<int>& genotypes) const;
    double genotype_probability(const std::vector<int>& genotypes) const;

    double prevalence() const;
    double heritability() const;  // Var(f) / (K (1 - K))
    // largest |marginal penetrance - prevalence| over all loci and genotype
    // values; zero means pure epistasis (no main effects)
    double max_marginal_deviation() const;
};

// Builds a parity ("XOR") epistasis model: penetrance is high on genotype
// combinations with an odd number of heterozygous loci. The amplitude around
// 0.5 is found by bisection so the achieved heritability lands within 1e-3 of
// target; at maf != 0.5 the raw pattern is first rebalanced so no locus keeps
// a main effect. Throws when the target is unreachable within penetrance
// bounds or the balancing iteration fails to converge.
PenetranceModel make_xor_model(int order, std::vector<double> maf, double target_heritability);

struct GenSpec {
    std::vector<PenetranceModel> models;  // one, or two for heterogeneity
    std::size_t n_cases = 0;
    std::size_t n_controls = 0;
    std::size_t total_features = 0;
    std::pair<double, double> irrelevant_maf_range{0.05, 0.5};
    std::uint64_t seed = 0;

    void validate() const;
};

struct GeneratedDataset {
    Dataset data;
    std::vector<std::vector<std::size_t>> functional_positions;  // per model
    std::vector<double> irrelevant_mafs;  // aligned with non-functional columns
    GenSpec spec;
};

// Rejection-samples rows until the case/control quotas fill. Functional loci
// follow the model; irrelevant features are independent Hardy-Weinberg
// genotypes with a per-feature MAF drawn from irrelevant_maf_range. With two
// models each instance is driven by one of them (fair coin) and the other
// model's loci carry no signal for it.
GeneratedDataset generate(const GenSpec& spec);

// Empirical case fraction under unconstrained sampling; used to check the
// analytic prevalence.
double empirical_prevalence(const PenetranceModel& model, std::size_t n, std::uint64_t seed);

struct SuiteEntry {
    std::string name;
    GeneratedDataset dataset;
};

// The synthetic validation grid: {2-way, 3-way, heterogeneous 2x2-way} at
// {functional-only, 20, 100, 1000} total features, balanced 400/400.
std::vector<SuiteEntry> paper_suite(std::uint64_t seed);

std::string generation_manifest_json(const GeneratedDataset& generated);

}  // namespace gadepth
