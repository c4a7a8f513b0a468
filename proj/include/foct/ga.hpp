#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace foct {

struct GaBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }

    void validate() const {
        if (lower.empty() || lower.size() != upper.size())
            throw std::invalid_argument("GaBounds: lower/upper must be non-empty and equal length");
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument("GaBounds: lower must be < upper per gene");
    }
};

struct Individual {
    std::vector<double> genes;
    double score = 0.0;    // raw objective value, lower is better
    double fitness = 0.0;  // rank-scaled selection weight
};

enum class GaTermination { stall, max_generations };

struct GaConfig {
    int population_size = 20;
    int elite_count = 2;
    double crossover_fraction = 0.8;
    int max_generations = 100;
    double stall_tolerance = 1e-6;
    int stall_window = 50;
    double mutation_scale = 0.1;   // initial sigma as a fraction of gene range
    double mutation_shrink = 1.0;  // fraction of the scale annealed away by the last generation
    GaBounds bounds;
    std::uint64_t seed = 0;
    int threads = 1;  // 0 = hardware concurrency

    // called after each generation's evaluation with the population sorted
    // ascending by score; generation 0 is the initial population
    std::function<void(int generation, std::span<const Individual>)> observer;

    void validate() const {
        bounds.validate();
        if (population_size < 2)
            throw std::invalid_argument("GaConfig: population_size must be >= 2");
        if (elite_count < 0 || elite_count >= population_size)
            throw std::invalid_argument("GaConfig: need 0 <= elite_count < population_size");
        if (crossover_fraction < 0.0 || crossover_fraction > 1.0)
            throw std::invalid_argument("GaConfig: crossover_fraction must lie in [0, 1]");
        if (max_generations < 1)
            throw std::invalid_argument("GaConfig: max_generations must be >= 1");
        if (stall_window < 1)
            throw std::invalid_argument("GaConfig: stall_window must be >= 1");
        if (!(stall_tolerance >= 0.0))
            throw std::invalid_argument("GaConfig: stall_tolerance must be >= 0");
        if (mutation_scale < 0.0)
            throw std::invalid_argument("GaConfig: mutation_scale must be >= 0");
    }
};

struct GaResult {
    std::vector<double> best_genes;
    double best_score = 0.0;
    std::vector<double> best_history;  // per generation, non-increasing
    std::vector<double> mean_history;
    int generations = 0;
    GaTermination reason = GaTermination::max_generations;
};

// Fitness of the individual ranked r-th (1 = lowest score) is proportional
// to 1/sqrt(r); ties keep input order. Normalized so the fitnesses sum to
// the number of parents the selection stage will draw.
inline std::vector<double> rank_scale(std::span<const double> scores,
                                      int parents_needed) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> fitness(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double f = 1.0 / std::sqrt(static_cast<double>(r + 1));
        fitness[order[r]] = f;
        total += f;
    }
    const double norm = static_cast<double>(parents_needed) / total;
    for (double& f : fitness) f *= norm;
    return fitness;
}

// Stochastic uniform selection: one spin of equally spaced pointers over
// the cumulative fitness line.
inline std::vector<std::size_t> stochastic_uniform_select(std::span<const double> fitness,
                                                          std::size_t count,
                                                          std::mt19937_64& rng) {
    const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
    const double step = total / static_cast<double>(count);
    std::uniform_real_distribution<double> u(0.0, step);
    const double start = u(rng);
    std::vector<std::size_t> picks;
    picks.reserve(count);
    double cum = 0.0;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double pointer = start + step * static_cast<double>(k);
        while (idx + 1 < fitness.size() && cum + fitness[idx] < pointer) {
            cum += fitness[idx];
            ++idx;
        }
        picks.push_back(idx);
    }
    return picks;
}

// Per-gene source mask: true takes the gene from parent a.
inline std::vector<double> scattered_crossover_with_mask(std::span<const double> a,
                                                         std::span<const double> b,
                                                         const std::vector<bool>& mask) {
    if (a.size() != b.size() || a.size() != mask.size())
        throw std::invalid_argument("scattered_crossover: length mismatch");
    std::vector<double> child(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) child[i] = mask[i] ? a[i] : b[i];
    return child;
}

inline std::vector<double> scattered_crossover(std::span<const double> a,
                                               std::span<const double> b,
                                               std::mt19937_64& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("scattered_crossover: length mismatch");
    std::bernoulli_distribution coin(0.5);
    std::vector<double> child(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) child[i] = coin(rng) ? a[i] : b[i];
    return child;
}

// Additive zero-mean Gaussian noise, sigma = scale_g * (hi - lo) per gene,
// where scale_g shrinks linearly over the run; children are clamped into
// the bounds.
inline std::vector<double> gaussian_mutate(std::span<const double> parent, int generation,
                                           const GaConfig& cfg, std::mt19937_64& rng) {
    const double progress =
        std::min(1.0, static_cast<double>(generation) / cfg.max_generations);
    const double scale = cfg.mutation_scale * (1.0 - cfg.mutation_shrink * progress);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> child(parent.begin(), parent.end());
    for (std::size_t i = 0; i < child.size(); ++i) {
        const double range = cfg.bounds.upper[i] - cfg.bounds.lower[i];
        child[i] += gauss(rng) * scale * range;
        child[i] = std::clamp(child[i], cfg.bounds.lower[i], cfg.bounds.upper[i]);
    }
    return child;
}

namespace detail {

inline void evaluate_scores(const std::function<double(std::span<const double>)>& objective,
                            std::vector<Individual>& pop, std::size_t first, int threads) {
    const std::size_t n = pop.size();
    if (first >= n) return;
    int workers = threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : threads;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(n - first)));
    if (workers == 1) {
        for (std::size_t i = first; i < n; ++i) pop[i].score = objective(pop[i].genes);
        return;
    }
    std::vector<std::thread> team;
    team.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        team.emplace_back([&, w]() {
            for (std::size_t i = first + static_cast<std::size_t>(w); i < n;
                 i += static_cast<std::size_t>(workers))
                pop[i].score = objective(pop[i].genes);
        });
    }
    for (auto& t : team) t.join();
}

inline void sort_by_score(std::vector<Individual>& pop) {
    std::stable_sort(pop.begin(), pop.end(),
                     [](const Individual& a, const Individual& b) { return a.score < b.score; });
}

}  // namespace detail

// Real-coded minimization with rank scaling, stochastic-uniform selection,
// elitism, scattered crossover and shrinking Gaussian mutation. All
// randomness comes from one seeded stream owned by this loop; objective
// calls never touch it, so results are reproducible even when evaluations
// run on several threads.
inline GaResult ga_minimize(const std::function<double(std::span<const double>)>& objective,
                            const GaConfig& cfg) {
    cfg.validate();
    const std::size_t dim = cfg.bounds.dimension();
    const std::size_t pop_size = static_cast<std::size_t>(cfg.population_size);
    const std::size_t elite = static_cast<std::size_t>(cfg.elite_count);
    const std::size_t n_children = pop_size - elite;
    const std::size_t n_cross =
        static_cast<std::size_t>(std::llround(cfg.crossover_fraction * n_children));
    const std::size_t n_mutate = n_children - n_cross;

    std::mt19937_64 rng(cfg.seed);

    std::vector<Individual> pop(pop_size);
    for (auto& ind : pop) {
        ind.genes.resize(dim);
        for (std::size_t g = 0; g < dim; ++g) {
            std::uniform_real_distribution<double> u(cfg.bounds.lower[g], cfg.bounds.upper[g]);
            ind.genes[g] = u(rng);
        }
    }
    detail::evaluate_scores(objective, pop, 0, cfg.threads);
    detail::sort_by_score(pop);

    GaResult result;
    result.best_history.push_back(pop.front().score);
    double mean = 0.0;
    for (const auto& ind : pop) mean += ind.score;
    result.mean_history.push_back(mean / static_cast<double>(pop_size));
    if (cfg.observer) cfg.observer(0, pop);

    GaTermination reason = GaTermination::max_generations;
    int generation = 0;
    for (generation = 1; generation <= cfg.max_generations; ++generation) {
        std::vector<double> scores(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) scores[i] = pop[i].score;
        const auto fitness = rank_scale(scores, static_cast<int>(n_children));
        for (std::size_t i = 0; i < pop_size; ++i) pop[i].fitness = fitness[i];

        auto pool = stochastic_uniform_select(fitness, n_children, rng);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t next = 0;
        auto draw_parent = [&]() -> const Individual& {
            const Individual& p = pop[pool[next % pool.size()]];
            ++next;
            return p;
        };

        std::vector<Individual> offspring(pop_size);
        for (std::size_t i = 0; i < elite; ++i) offspring[i] = pop[i];
        for (std::size_t c = 0; c < n_cross; ++c) {
            const Individual& a = draw_parent();
            const Individual& b = draw_parent();
            offspring[elite + c].genes = scattered_crossover(a.genes, b.genes, rng);
        }
        for (std::size_t m = 0; m < n_mutate; ++m) {
            const Individual& p = draw_parent();
            offspring[elite + n_cross + m].genes =
                gaussian_mutate(p.genes, generation, cfg, rng);
        }

        detail::evaluate_scores(objective, offspring, elite, cfg.threads);
        pop = std::move(offspring);
        detail::sort_by_score(pop);

        result.best_history.push_back(pop.front().score);
        mean = 0.0;
        for (const auto& ind : pop) mean += ind.score;
        result.mean_history.push_back(mean / static_cast<double>(pop_size));
        if (cfg.observer) cfg.observer(generation, pop);

        if (generation >= cfg.stall_window) {
            const double past =
                result.best_history[static_cast<std::size_t>(generation - cfg.stall_window)];
            if (past - result.best_history.back() < cfg.stall_tolerance) {
                reason = GaTermination::stall;
                break;
            }
        }
    }

    result.generations = std::min(generation, cfg.max_generations);
    result.reason = reason;
    result.best_genes = pop.front().genes;
    result.best_score = pop.front().score;
    return result;
}

}  // namespace foct
