#pragma once

// Genetic algorithm over customer permutations.
//
// A chromosome is the visiting order of all customers. A split procedure cuts
// it into open routes from the merchant, so every chromosome maps to a solution
// that serves each customer exactly once and respects capacity. The GA uses the
// optimal split by default; `decode` is the greedy split. Selection works on
// fitness 1/Z.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "vrpstw/baseline.hpp"
#include "vrpstw/cost.hpp"
#include "vrpstw/model.hpp"
#include "vrpstw/random.hpp"

namespace vrpstw {

using Chromosome = std::vector<NodeId>;

/// How a chromosome is cut into routes.
enum class SplitMode {
    optimal,  // cheapest cut points for the given order (shortest path over cuts)
    greedy,   // `decode`: cut only when capacity or endurance forces it
};

struct GaConfig {
    std::size_t population_size = 100;
    std::size_t max_generations = 500;
    double crossover_rate = 0.9;
    double mutation_rate = 0.15;
    std::size_t tournament_size = 3;
    std::size_t elitism_count = 2;
    std::uint64_t seed = 1;
    std::size_t stall_generations = 100;
    /// Worker threads for fitness evaluation. Results do not depend on it.
    std::size_t threads = 1;
    SplitMode split = SplitMode::optimal;

    friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

inline void validate(const GaConfig& c) {
    std::vector<std::string> errors;
    if (c.population_size < 2) {
        errors.emplace_back("population_size ≥ 2 violated");
    }
    if (!(c.crossover_rate >= 0.0 && c.crossover_rate <= 1.0)) {
        errors.emplace_back("crossover_rate in [0,1] violated");
    }
    if (!(c.mutation_rate >= 0.0 && c.mutation_rate <= 1.0)) {
        errors.emplace_back("mutation_rate in [0,1] violated");
    }
    if (c.tournament_size < 1 || c.tournament_size > c.population_size) {
        errors.emplace_back("tournament_size in [1, population_size] violated");
    }
    if (c.elitism_count >= c.population_size) {
        errors.emplace_back("elitism_count < population_size violated");
    }
    if (c.threads < 1) {
        errors.emplace_back("threads ≥ 1 violated");
    }
    if (!errors.empty()) {
        std::string msg = "invalid GA config";
        for (const auto& e : errors) {
            msg += "\n  " + e;
        }
        throw ValidationError(msg);
    }
}

/// Splits a customer order into open routes from merchant node 0.
///
/// Customers are appended to the current route until the next one would push
/// the load above Q or the open-route distance above L; then a new route
/// starts with that customer.
inline std::vector<Route> decode(std::span<const NodeId> chrom, const Instance& instance, const DistanceMatrix& dm) {
    const NodeId depot = 0;
    const double capacity = instance.vehicle.capacity + cost_tolerance;
    const double endurance = instance.vehicle.endurance + cost_tolerance;

    std::vector<Route> routes;
    Route current{0, {depot}, false};
    double load = 0.0;
    double distance = 0.0;
    for (const NodeId c : chrom) {
        const double w = instance.load_of(c);
        if (w > capacity) {
            throw InfeasibleError(fmt::format("order {} load {} exceeds vehicle capacity Q {}", instance.order_at(c).id,
                                              w, instance.vehicle.capacity));
        }
        const double d = dm(current.nodes.back(), c);
        if (current.nodes.size() > 1 && (load + w > capacity || distance + d > endurance)) {
            routes.push_back(std::move(current));
            current = Route{routes.size(), {depot}, false};
            load = 0.0;
            distance = 0.0;
        }
        distance += dm(current.nodes.back(), c);
        load += w;
        current.nodes.push_back(c);
    }
    if (current.nodes.size() > 1) {
        routes.push_back(std::move(current));
    }
    return routes;
}

namespace detail {

/// Cheapest segmentation of `chrom` using at most `max_routes` routes (0 means
/// unlimited). Returns the cut positions or an empty vector if none exists.
inline std::vector<std::size_t> optimal_cuts(std::span<const NodeId> chrom, const Instance& instance,
                                             const DistanceMatrix& dm, std::size_t max_routes) {
    const std::size_t n = chrom.size();
    const auto& v = instance.vehicle;
    const auto& params = instance.costs;
    const double capacity = v.capacity + cost_tolerance;
    constexpr double inf = std::numeric_limits<double>::infinity();
    const bool layered = max_routes != 0 && max_routes < n;
    const std::size_t layers = layered ? max_routes : 1;

    // cost[k][j]: cheapest cover of the first j customers with k+1 routes
    // (or any number of routes when not layered).
    std::vector<std::vector<double>> cost(layers, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> pred(layers, std::vector<std::size_t>(n + 1, 0));

    const auto relax = [&](double base, std::size_t i, std::size_t to_layer) {
        double load = 0.0;
        double distance = 0.0;
        double penalty = 0.0;
        NodeId prev = 0;
        for (std::size_t j = i; j < n; ++j) {
            const NodeId c = chrom[j];
            load += instance.load_of(c);
            if (load > capacity) {
                break;
            }
            distance += dm(prev, c);
            prev = c;
            const double t = distance / v.speed + v.service_time * static_cast<double>(j - i);
            penalty += time_penalty(t, instance.order_at(c).window, params);
            const double route = v.unit_distance_cost * distance + v.fixed_cost +
                                 static_cast<double>(distance_penalty_factor(distance, v.endurance)) *
                                     params.distance_penalty +
                                 penalty;
            if (base + route < cost[to_layer][j + 1]) {
                cost[to_layer][j + 1] = base + route;
                pred[to_layer][j + 1] = i;
            }
        }
    };

    if (!layered) {
        cost[0][0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (cost[0][i] < inf) {
                relax(cost[0][i], i, 0);
            }
        }
        if (cost[0][n] == inf) {
            return {};
        }
        std::vector<std::size_t> cuts;
        for (std::size_t j = n; j > 0; j = pred[0][j]) {
            cuts.push_back(j);
        }
        std::reverse(cuts.begin(), cuts.end());
        return cuts;
    }

    relax(0.0, 0, 0);
    for (std::size_t k = 1; k < layers; ++k) {
        for (std::size_t i = 1; i < n; ++i) {
            if (cost[k - 1][i] < inf) {
                relax(cost[k - 1][i], i, k);
            }
        }
    }
    std::size_t best_layer = layers;
    for (std::size_t k = 0; k < layers; ++k) {
        if (cost[k][n] < inf && (best_layer == layers || cost[k][n] < cost[best_layer][n])) {
            best_layer = k;
        }
    }
    if (best_layer == layers) {
        return {};
    }
    std::vector<std::size_t> cuts;
    std::size_t j = n;
    for (std::size_t k = best_layer + 1; k-- > 0;) {
        cuts.push_back(j);
        j = pred[k][j];
    }
    std::reverse(cuts.begin(), cuts.end());
    return cuts;
}

} // namespace detail

/// Splits a customer order into the cheapest sequence of open routes that
/// keeps it intact: every contiguous segmentation is considered, capacity is
/// a hard limit and everything else (fixed cost, endurance and lateness) is
/// priced by the objective. Uses at most fleet_size routes when possible.
inline std::vector<Route> split_optimal(std::span<const NodeId> chrom, const Instance& instance,
                                        const DistanceMatrix& dm) {
    for (const NodeId c : chrom) {
        if (instance.load_of(c) > instance.vehicle.capacity + cost_tolerance) {
            throw InfeasibleError(fmt::format("order {} load {} exceeds vehicle capacity Q {}", instance.order_at(c).id,
                                              instance.load_of(c), instance.vehicle.capacity));
        }
    }
    auto cuts = detail::optimal_cuts(chrom, instance, dm, instance.fleet_size);
    if (cuts.empty()) {
        cuts = detail::optimal_cuts(chrom, instance, dm, 0);
    }
    std::vector<Route> routes;
    std::size_t begin = 0;
    for (const std::size_t end : cuts) {
        Route r{routes.size(), {0}, false};
        r.nodes.insert(r.nodes.end(), chrom.begin() + static_cast<std::ptrdiff_t>(begin),
                       chrom.begin() + static_cast<std::ptrdiff_t>(end));
        routes.push_back(std::move(r));
        begin = end;
    }
    return routes;
}

inline std::vector<Route> decode(std::span<const NodeId> chrom, const Instance& instance, const DistanceMatrix& dm,
                                 SplitMode mode) {
    return mode == SplitMode::optimal ? split_optimal(chrom, instance, dm) : decode(chrom, instance, dm);
}

/// Order crossover with an explicit segment [first, last] (0-based, inclusive).
///
/// Child 1 keeps p1's segment in place and fills the other positions left to
/// right with the remaining customers in p2's order; child 2 mirrors this.
inline std::pair<Chromosome, Chromosome> order_crossover(std::span<const NodeId> p1, std::span<const NodeId> p2,
                                                         std::size_t first, std::size_t last) {
    const auto make_child = [&](std::span<const NodeId> keep, std::span<const NodeId> fill) {
        const std::size_t n = keep.size();
        Chromosome child(n);
        const NodeId max_node = n == 0 ? 0 : *std::max_element(keep.begin(), keep.end());
        std::vector<bool> used(max_node + 1, false);
        for (std::size_t i = first; i <= last; ++i) {
            child[i] = keep[i];
            used[keep[i]] = true;
        }
        std::size_t pos = 0;
        for (const NodeId gene : fill) {
            if (gene <= max_node && used[gene]) {
                continue;
            }
            while (pos >= first && pos <= last) {
                ++pos;
            }
            child[pos++] = gene;
        }
        return child;
    };
    return {make_child(p1, p2), make_child(p2, p1)};
}

inline std::pair<Chromosome, Chromosome> crossover(std::span<const NodeId> p1, std::span<const NodeId> p2, Rng& rng) {
    if (p1.size() != p2.size()) {
        throw std::invalid_argument("crossover parents differ in length");
    }
    if (p1.empty()) {
        return {Chromosome{}, Chromosome{}};
    }
    auto i = static_cast<std::size_t>(uniform_index(rng, p1.size()));
    auto j = static_cast<std::size_t>(uniform_index(rng, p1.size()));
    if (i > j) {
        std::swap(i, j);
    }
    return order_crossover(p1, p2, i, j);
}

/// With probability `rate`, swaps two distinct random positions.
inline Chromosome mutate(Chromosome chrom, double rate, Rng& rng) {
    if (chrom.size() < 2 || !bernoulli(rng, rate)) {
        return chrom;
    }
    const auto i = static_cast<std::size_t>(uniform_index(rng, chrom.size()));
    auto j = static_cast<std::size_t>(uniform_index(rng, chrom.size() - 1));
    if (j >= i) {
        ++j;
    }
    std::swap(chrom[i], chrom[j]);
    return chrom;
}

/// The nearest-neighbour order followed by uniform random permutations.
inline std::vector<Chromosome> initialize_population(const Instance& instance, const DistanceMatrix& dm,
                                                     const GaConfig& config, Rng& rng) {
    std::vector<Chromosome> population;
    population.reserve(config.population_size);
    population.push_back(nearest_neighbor_order(instance, dm));

    Chromosome identity(instance.customer_count());
    std::iota(identity.begin(), identity.end(), instance.merchants.size());
    while (population.size() < config.population_size) {
        Chromosome c = identity;
        shuffle(std::span<NodeId>(c), rng);
        population.push_back(std::move(c));
    }
    return population;
}

inline std::vector<Chromosome> initialize_population(const Instance& instance, const GaConfig& config) {
    Rng rng(config.seed);
    return initialize_population(instance, build_distance_matrix(instance), config, rng);
}

struct SolveResult {
    Solution best_solution;
    Chromosome best_chromosome;
    double best_fitness = 0.0;
    std::size_t generations_run = 0;
    /// Best Z after initialization and after each generation.
    std::vector<double> history;
};

/// Called once per generation (0 = initial population) with the population.
using GenerationObserver = std::function<void(std::size_t generation, std::span<const Chromosome> population)>;

namespace detail {

/// Ranking key. Solutions needing more vehicles than the fleet has rank below
/// every fleet-feasible one.
struct Score {
    std::size_t excess_routes = 0;
    double z = 0.0;

    friend bool operator<(const Score& l, const Score& r) noexcept {
        return l.excess_routes != r.excess_routes ? l.excess_routes < r.excess_routes : l.z < r.z;
    }
};

inline Score score(const Chromosome& chrom, const Instance& instance, const DistanceMatrix& dm, SplitMode mode) {
    const auto routes = decode(chrom, instance, dm, mode);
    Score s;
    s.z = evaluate(routes, instance, dm).total;
    s.excess_routes = routes.size() > instance.fleet_size ? routes.size() - instance.fleet_size : 0;
    return s;
}

inline void score_all(std::span<const Chromosome> population, std::span<Score> out, const Instance& instance,
                      const DistanceMatrix& dm, std::size_t threads, SplitMode mode) {
    const std::size_t n = population.size();
    if (threads <= 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = score(population[i], instance, dm, mode);
        }
        return;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
        const std::size_t end = std::min(n, begin + chunk);
        workers.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                out[i] = score(population[i], instance, dm, mode);
            }
        });
    }
}

/// Index of the best entry; the lowest index wins ties.
inline std::size_t best_index(std::span<const Score> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) {
            best = i;
        }
    }
    return best;
}

inline std::size_t tournament(std::span<const Score> scores, std::size_t size, Rng& rng) {
    auto best = static_cast<std::size_t>(uniform_index(rng, scores.size()));
    for (std::size_t k = 1; k < size; ++k) {
        const auto i = static_cast<std::size_t>(uniform_index(rng, scores.size()));
        if (scores[i] < scores[best] || (!(scores[best] < scores[i]) && i < best)) {
            best = i;
        }
    }
    return best;
}

} // namespace detail

/// Runs the GA on a single-merchant instance.
///
/// Stops after `max_generations` or after `stall_generations` generations
/// without improving the best Z. The output depends only on the instance, the
/// distance matrix and the config (including its seed).
inline SolveResult solve(const Instance& instance, const DistanceMatrix& dm, const GaConfig& config,
                         const GenerationObserver& observer = {}) {
    require_valid(instance);
    require_single_merchant(instance);
    require_orders_fit(instance);
    validate(config);

    Rng rng(config.seed);
    auto population = initialize_population(instance, dm, config, rng);
    std::vector<detail::Score> scores(population.size());
    detail::score_all(population, scores, instance, dm, config.threads, config.split);
    if (observer) {
        observer(0, population);
    }

    std::size_t best = detail::best_index(scores);
    Chromosome best_chrom = population[best];
    detail::Score best_score = scores[best];

    SolveResult result;
    result.history.push_back(best_score.z);

    std::vector<std::size_t> ranking(population.size());
    std::size_t stall = 0;
    std::size_t generation = 0;
    while (generation < config.max_generations && stall < config.stall_generations) {
        std::iota(ranking.begin(), ranking.end(), 0);
        std::stable_sort(ranking.begin(), ranking.end(),
                         [&](std::size_t l, std::size_t r) { return scores[l] < scores[r]; });

        std::vector<Chromosome> next;
        next.reserve(config.population_size);
        for (std::size_t e = 0; e < config.elitism_count; ++e) {
            next.push_back(population[ranking[e]]);
        }
        while (next.size() < config.population_size) {
            const auto& pa = population[detail::tournament(scores, config.tournament_size, rng)];
            const auto& pb = population[detail::tournament(scores, config.tournament_size, rng)];
            auto children = bernoulli(rng, config.crossover_rate) ? crossover(pa, pb, rng) : std::pair{pa, pb};
            next.push_back(mutate(std::move(children.first), config.mutation_rate, rng));
            if (next.size() < config.population_size) {
                next.push_back(mutate(std::move(children.second), config.mutation_rate, rng));
            }
        }
        population = std::move(next);
        detail::score_all(population, scores, instance, dm, config.threads, config.split);
        ++generation;
        if (observer) {
            observer(generation, population);
        }

        best = detail::best_index(scores);
        const bool improved = scores[best].excess_routes < best_score.excess_routes ||
                              (scores[best].excess_routes == best_score.excess_routes &&
                               scores[best].z < best_score.z - cost_tolerance);
        if (scores[best] < best_score) {
            best_score = scores[best];
            best_chrom = population[best];
        }
        stall = improved ? 0 : stall + 1;
        result.history.push_back(best_score.z);
    }

    if (best_score.excess_routes > 0) {
        throw InfeasibleError(fmt::format("no solution found within fleet size {} (best needs {} more vehicles)",
                                          instance.fleet_size, best_score.excess_routes));
    }
    result.best_solution = make_solution(decode(best_chrom, instance, dm, config.split), instance, dm);
    result.best_chromosome = std::move(best_chrom);
    result.best_fitness = fitness(result.best_solution.cost.total);
    result.generations_run = generation;
    return result;
}

inline SolveResult solve(const Instance& instance, const GaConfig& config, Metric metric = Metric::euclidean) {
    return solve(instance, build_distance_matrix(instance, metric), config);
}

} // namespace vrpstw
