#include "gadepth/ga.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gadepth/metrics.hpp"

namespace gadepth {

void GaConfig::validate(std::size_t d) const {
    if (population_size < 1) throw ValidationError("population_size must be >= 1");
    if (tournament_size < 1 || tournament_size > population_size)
        throw ValidationError("tournament_size must be in 1..population_size");
    if (generations < 1) throw ValidationError("generations must be >= 1");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
        throw ValidationError("mutation_rate must be in [0,1]");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw ValidationError("crossover_rate must be in [0,1]");
    if (size_limit < 1) throw ValidationError("size_limit must be >= 1");
    if (elitism_count < 0) throw ValidationError("elitism_count must be >= 0");
    if (d < 1) throw ValidationError("dataset must have at least one feature");
}

std::vector<SubsetGenome> initialize_population(std::size_t d, const GaConfig& config, Rng& rng) {
    const std::size_t max_size = std::min<std::size_t>(static_cast<std::size_t>(config.size_limit), d);
    std::vector<SubsetGenome> population;
    population.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        const std::size_t size = 1 + rng.uniform_index(max_size);
        population.push_back({rng.sample_indices(d, size)});
    }
    return population;
}

const SubsetGenome& tournament_select(std::span<const SubsetGenome> population,
                                      std::span<const double> fitnesses, const GaConfig& config,
                                      Rng& rng) {
    const auto picks =
        rng.sample_indices(population.size(), static_cast<std::size_t>(config.tournament_size));
    std::size_t best = picks[0];
    for (std::size_t i = 1; i < picks.size(); ++i) {
        const std::size_t c = picks[i];
        if (fitnesses[c] > fitnesses[best] ||
            (fitnesses[c] == fitnesses[best] && genome_before(population[c], population[best]))) {
            best = c;
        }
    }
    return population[best];
}

SubsetGenome repair_size_limit(SubsetGenome g, int size_limit, std::size_t d, Rng& rng) {
    while (g.selected.size() > static_cast<std::size_t>(size_limit)) {
        g.selected.erase(g.selected.begin() +
                         static_cast<std::ptrdiff_t>(rng.uniform_index(g.selected.size())));
    }
    if (g.selected.empty()) g.selected.push_back(rng.uniform_index(d));
    return g;
}

std::pair<SubsetGenome, SubsetGenome> crossover(const SubsetGenome& a, const SubsetGenome& b,
                                                const GaConfig& config, Rng& rng) {
    SubsetGenome child1, child2;
    std::size_t i = 0, j = 0;
    std::size_t d_hint = 0;
    while (i < a.selected.size() || j < b.selected.size()) {
        std::size_t idx;
        bool in_a = false, in_b = false;
        if (i < a.selected.size() && (j == b.selected.size() || a.selected[i] <= b.selected[j])) {
            idx = a.selected[i];
            in_a = true;
            in_b = j < b.selected.size() && b.selected[j] == idx;
        } else {
            idx = b.selected[j];
            in_b = true;
        }
        if (in_a) ++i;
        if (in_b) ++j;
        d_hint = std::max(d_hint, idx + 1);

        if (in_a && in_b) {
            child1.selected.push_back(idx);
            child2.selected.push_back(idx);
        } else {
            (rng.bernoulli(0.5) ? child1 : child2).selected.push_back(idx);
        }
    }
    // an empty child is repaired to a random singleton from the parents' union
    if (child1.selected.empty() || child2.selected.empty()) {
        std::vector<std::size_t> pool;
        std::set_union(a.selected.begin(), a.selected.end(), b.selected.begin(), b.selected.end(),
                       std::back_inserter(pool));
        auto& empty_child = child1.selected.empty() ? child1 : child2;
        if (!pool.empty()) empty_child.selected.push_back(pool[rng.uniform_index(pool.size())]);
    }
    child1 = repair_size_limit(std::move(child1), config.size_limit, std::max<std::size_t>(d_hint, 1), rng);
    child2 = repair_size_limit(std::move(child2), config.size_limit, std::max<std::size_t>(d_hint, 1), rng);
    return {std::move(child1), std::move(child2)};
}

SubsetGenome mutate(const SubsetGenome& g, std::size_t d, const GaConfig& config, Rng& rng) {
    if (!rng.bernoulli(config.mutation_rate)) return g;
    SubsetGenome out = g;
    const std::size_t pos = rng.uniform_index(d);
    const auto it = std::lower_bound(out.selected.begin(), out.selected.end(), pos);
    const bool is_selected = it != out.selected.end() && *it == pos;
    if (is_selected) {
        if (out.selected.size() == 1) {
            // removal would empty the genome: redraw as an addition instead
            if (d == 1) return out;
            std::size_t add = rng.uniform_index(d - 1);
            if (add >= pos) ++add;  // skip the single selected index
            out.selected.insert(
                std::lower_bound(out.selected.begin(), out.selected.end(), add), add);
        } else {
            out.selected.erase(it);
        }
    } else {
        out.selected.insert(it, pos);
    }
    return repair_size_limit(std::move(out), config.size_limit, d, rng);
}

GaRunResult run_ga_core(std::size_t d, const GaConfig& config,
                        const std::function<double(const SubsetGenome&, int)>& fitness,
                        const std::function<double(const SubsetGenome&)>& reference) {
    config.validate(d);
    Rng rng(derive_seed(config.seed, 0x4741u));

    std::vector<SubsetGenome> population = initialize_population(d, config, rng);
    std::vector<double> fitnesses(population.size());

    GaRunResult result;
    result.seed = config.seed;
    auto better = [](double fa, const SubsetGenome& ga, double fb, const SubsetGenome& gb) {
        return fa > fb || (fa == fb && genome_before(ga, gb));
    };

    for (int gen = 0; gen < config.generations; ++gen) {
        std::size_t gen_best = 0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            fitnesses[i] = fitness(population[i], gen);
            if (i > 0 && better(fitnesses[i], population[i], fitnesses[gen_best], population[gen_best]))
                gen_best = i;
        }
        const double gen_best_ref = reference(population[gen_best]);
        if (gen == 0 || better(gen_best_ref, population[gen_best], result.best_fitness,
                               result.best_genome)) {
            result.best_fitness = gen_best_ref;
            result.best_genome = population[gen_best];
        }
        result.fitness_trace.push_back(result.best_fitness);
        if (gen + 1 == config.generations) break;

        std::vector<SubsetGenome> next;
        next.reserve(population.size());
        if (config.elitism_count > 0) {
            std::vector<std::size_t> order(population.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return better(fitnesses[a], population[a], fitnesses[b], population[b]);
            });
            const std::size_t elites =
                std::min<std::size_t>(static_cast<std::size_t>(config.elitism_count), order.size());
            for (std::size_t e = 0; e < elites; ++e) next.push_back(population[order[e]]);
        }
        while (next.size() < population.size()) {
            const SubsetGenome& p1 = tournament_select(population, fitnesses, config, rng);
            const SubsetGenome& p2 = tournament_select(population, fitnesses, config, rng);
            SubsetGenome c1, c2;
            if (rng.bernoulli(config.crossover_rate)) {
                std::tie(c1, c2) = crossover(p1, p2, config, rng);
            } else {
                c1 = p1;
                c2 = p2;
            }
            c1 = mutate(c1, d, config, rng);
            c2 = mutate(c2, d, config, rng);
            next.push_back(std::move(c1));
            if (next.size() < population.size()) next.push_back(std::move(c2));
        }
        population = std::move(next);
    }
    return result;
}

GaRunResult run_ga_core(std::size_t d, const GaConfig& config,
                        const std::function<double(const SubsetGenome&)>& fitness) {
    return run_ga_core(
        d, config, [&](const SubsetGenome& g, int) { return fitness(g); }, fitness);
}

GaRunResult run_ga(const Dataset& data, std::span<const std::size_t> visible_idx,
                   const GaConfig& config, const FitnessHarness& harness) {
    std::vector<std::size_t> visible(visible_idx.begin(), visible_idx.end());
    std::sort(visible.begin(), visible.end());

    std::size_t raw_evaluations = 0;

    auto holdout_fitness = [&](const SubsetGenome& g) {
        ++raw_evaluations;
        const auto scores = fit_and_score(data, visible, harness.holdout_idx, g, harness);
        std::vector<int> y;
        y.reserve(harness.holdout_idx.size());
        for (std::size_t r : harness.holdout_idx) y.push_back(data.labels[r]);
        return auc_roc(scores, y);
    };

    GaRunResult result;
    if (harness.mode == FitnessMode::holdout) {
        std::map<std::vector<std::size_t>, double> cache;
        auto scorer = [&](const SubsetGenome& g) {
            if (!config.memoize) return holdout_fitness(g);
            const auto it = cache.find(g.selected);
            if (it != cache.end()) return it->second;
            const double f = holdout_fitness(g);
            cache.emplace(g.selected, f);
            return f;
        };
        result = run_ga_core(data.n_features(), config, scorer);
        result.evaluations = raw_evaluations;
        return result;
    }

    // reference plan: the one the standalone cv_fitness operation would build
    const FoldPlan reference_plan =
        stratified_kfold(visible, data.labels, harness.k, harness.seed);

    FoldPlan generation_plan;
    int plan_generation = -1;
    std::map<std::vector<std::size_t>, double> generation_cache, reference_cache;

    auto selection_fitness = [&](const SubsetGenome& g, int gen) {
        if (gen != plan_generation) {
            generation_plan = stratified_kfold(visible, data.labels, harness.k,
                                               derive_seed(harness.seed, 0x47454eu,
                                                           static_cast<std::uint64_t>(gen)));
            plan_generation = gen;
            generation_cache.clear();
        }
        if (config.memoize) {
            const auto it = generation_cache.find(g.selected);
            if (it != generation_cache.end()) return it->second;
        }
        ++raw_evaluations;
        const double f = cv_fitness_with_plan(data, generation_plan, g, harness);
        if (config.memoize) generation_cache.emplace(g.selected, f);
        return f;
    };

    auto reference_fitness = [&](const SubsetGenome& g) {
        if (config.memoize) {
            const auto it = reference_cache.find(g.selected);
            if (it != reference_cache.end()) return it->second;
        }
        ++raw_evaluations;
        const double f = cv_fitness_with_plan(data, reference_plan, g, harness);
        if (config.memoize) reference_cache.emplace(g.selected, f);
        return f;
    };

    result = run_ga_core(data.n_features(), config, selection_fitness, reference_fitness);
    result.evaluations = raw_evaluations;
    return result;
}

std::string ga_result_to_json(const GaRunResult& result, const Dataset& data) {
    nlohmann::json j;
    std::vector<std::string> names;
    names.reserve(result.best_genome.selected.size());
    for (std::size_t idx : result.best_genome.selected) names.push_back(data.feature_names[idx]);
    j["best_features"] = names;
    j["best_fitness"] = result.best_fitness;
    j["trace"] = result.fitness_trace;
    j["evaluations"] = result.evaluations;
    j["seed"] = result.seed;
    return j.dump(2);
}

}  // namespace gadepth
