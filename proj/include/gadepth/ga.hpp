#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gadepth/dataset.hpp"
#include "gadepth/fitness.hpp"
#include "gadepth/genome.hpp"
#include "gadepth/rng.hpp"

namespace gadepth {

struct GaConfig {
    int population_size = 500;
    int generations = 50;
    double mutation_rate = 0.2;
    int mutation_flips = 1;   // bit flips per mutation event
    double crossover_rate = 0.8;
    int tournament_size = 6;
    int size_limit = 1;
    std::uint64_t seed = 0;
    int elitism_count = 1;
    bool memoize = true;  // cache fitness per genome; transparent to results

    void validate(std::size_t d) const;
};

struct GaRunResult {
    SubsetGenome best_genome;
    double best_fitness = 0.0;
    std::vector<double> fitness_trace;  // per-generation best
    std::size_t evaluations = 0;        // underlying fitness computations (cache misses)
    std::uint64_t seed = 0;
};

std::vector<SubsetGenome> initialize_population(std::size_t d, const GaConfig& config, Rng& rng);

// Uniformly samples tournament_size distinct individuals and returns the
// fittest; ties go to the smaller genome, then lexicographic order.
const SubsetGenome& tournament_select(std::span<const SubsetGenome> population,
                                      std::span<const double> fitnesses, const GaConfig& config,
                                      Rng& rng);

// Uniform crossover on the binary-vector view: shared indices stay in both
// children, each exclusive index lands in exactly one child; both children
// are repaired back into 1..size_limit.
std::pair<SubsetGenome, SubsetGenome> crossover(const SubsetGenome& a, const SubsetGenome& b,
                                                const GaConfig& config, Rng& rng);

// With probability mutation_rate, flips one uniformly chosen position of the
// length-d vector. A removal that would empty the genome is redrawn as an
// addition.
SubsetGenome mutate(const SubsetGenome& g, std::size_t d, const GaConfig& config, Rng& rng);

// Randomly deletes indices while the genome exceeds size_limit; an empty
// genome becomes a uniformly random singleton over 0..d-1.
SubsetGenome repair_size_limit(SubsetGenome g, int size_limit, std::size_t d, Rng& rng);

// Generational loop against arbitrary fitness functions; the caller owns
// memoization. `fitness` drives selection and may vary by generation;
// `reference` scores each generation's winner on one fixed footing and is
// what best_fitness and the (monotone) trace report.
GaRunResult run_ga_core(std::size_t d, const GaConfig& config,
                        const std::function<double(const SubsetGenome&, int generation)>& fitness,
                        const std::function<double(const SubsetGenome&)>& reference);

// Convenience overload for generation-independent fitness.
GaRunResult run_ga_core(std::size_t d, const GaConfig& config,
                        const std::function<double(const SubsetGenome&)>& fitness);

// The full harness. Selection fitness is k-fold CV whose fold plan is
// re-derived every generation (fresh folds keep a lucky noise genome from
// camping on the top spot); reported best fitness uses the run-wide plan that
// the standalone cv_fitness operation would build, so GA results compare
// directly against exhaustive search. Fitness values are memoized per genome
// (within a generation for the rotating plans, run-wide for the reference).
GaRunResult run_ga(const Dataset& data, std::span<const std::size_t> visible_idx,
                   const GaConfig& config, const FitnessHarness& harness);

std::string ga_result_to_json(const GaRunResult& result, const Dataset& data);

}  // namespace gadepth
