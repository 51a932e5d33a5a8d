#pragma once

// Objective function and constraint checks.
//
//   Z = o * (total arc distance) + r * (vehicles used)
//     + c_L * sum_k floor(dist_k / L) + sum_i penalty(t_i)
//
// Every route term is independent of the other routes, so `route_cost` is
// the unit the solvers cache and `evaluate` is its sum.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "vrpstw/model.hpp"

namespace vrpstw {

/// Absolute tolerance used for every cost comparison.
inline constexpr double cost_tolerance = 1e-9;

/// Soft-time-window penalty for arriving at `t`.
///
/// Early arrivals cost `early_coeff * (a - t)`, the window is free, and late
/// arrivals cost `late_coeff * (exp(t - b) - 1)`. The late branch keeps
/// growing past `c`; `c` only marks an arrival as hard-late in diagnostics.
inline double time_penalty(double t, const TimeWindow& window, const CostParams& params) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument(fmt::format("arrival time must be nonnegative, got {}", t));
    }
    if (t < window.a) {
        return params.early_coeff * (window.a - t);
    }
    if (t <= window.b) {
        return 0.0;
    }
    return params.late_coeff * std::expm1(t - window.b);
}

/// Endurance factor alpha = floor(distance / L).
///
/// Ratios within a few ulps of an integer snap to that integer so that
/// 0.3 / 0.1 counts as 3 and adding exactly L always raises the factor by one.
inline std::int64_t distance_penalty_factor(double route_distance, double endurance) {
    if (!(endurance > 0.0)) {
        throw std::invalid_argument(fmt::format("endurance must be positive, got {}", endurance));
    }
    if (!(route_distance >= 0.0)) {
        throw std::invalid_argument(fmt::format("route distance must be nonnegative, got {}", route_distance));
    }
    const double ratio = route_distance / endurance;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-12 * std::max(1.0, ratio)) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::floor(ratio));
}

/// Fitness used for selection: the reciprocal of total cost.
inline double fitness(double total_cost) {
    if (!(total_cost > 0.0)) {
        throw std::invalid_argument(fmt::format("fitness needs a positive cost, got {}", total_cost));
    }
    return 1.0 / total_cost;
}

/// Arrival times along each route, indexed like `Route::nodes` (position 0 is
/// the merchant at time 0).
struct ArrivalSchedule {
    std::vector<std::vector<double>> per_route;
    /// Time each route's vehicle finishes, including the return leg when closed.
    std::vector<double> completion;

    /// Arrival at `node`, or nullopt if no route visits it.
    [[nodiscard]] std::optional<double> arrival(std::span<const Route> routes, NodeId node) const {
        for (std::size_t r = 0; r < routes.size(); ++r) {
            for (std::size_t p = 1; p < routes[r].nodes.size(); ++p) {
                if (routes[r].nodes[p] == node) {
                    return per_route[r][p];
                }
            }
        }
        return std::nullopt;
    }
};

namespace detail {

inline void route_arrivals(const Route& route, const DistanceMatrix& dm, double speed, double service_time,
                           std::vector<double>& times, double& completion) {
    times.assign(route.nodes.size(), 0.0);
    double distance = 0.0;
    for (std::size_t p = 1; p < route.nodes.size(); ++p) {
        distance += dm.at(route.nodes[p - 1], route.nodes[p]);
        times[p] = distance / speed + service_time * static_cast<double>(p - 1);
    }
    completion = times.empty() ? 0.0 : times.back();
    if (route.nodes.size() > 1) {
        completion += service_time;
    }
    if (route.closed && !route.nodes.empty()) {
        completion += dm.at(route.nodes.back(), route.nodes.front()) / speed;
    }
}

} // namespace detail

inline ArrivalSchedule arrival_schedule(std::span<const Route> routes, const DistanceMatrix& dm, double speed,
                                        double service_time = 0.0) {
    if (!(speed > 0.0)) {
        throw std::invalid_argument(fmt::format("speed must be positive, got {}", speed));
    }
    ArrivalSchedule schedule;
    schedule.per_route.resize(routes.size());
    schedule.completion.resize(routes.size());
    for (std::size_t r = 0; r < routes.size(); ++r) {
        detail::route_arrivals(routes[r], dm, speed, service_time, schedule.per_route[r], schedule.completion[r]);
    }
    return schedule;
}

struct CostBreakdown {
    double transport_cost = 0.0;
    double fixed_cost = 0.0;
    double distance_penalty = 0.0;
    double time_penalty = 0.0;
    double total = 0.0;

    CostBreakdown& operator+=(const CostBreakdown& other) noexcept {
        transport_cost += other.transport_cost;
        fixed_cost += other.fixed_cost;
        distance_penalty += other.distance_penalty;
        time_penalty += other.time_penalty;
        total += other.total;
        return *this;
    }
};

/// Cost and bookkeeping for a single route.
struct RouteCost {
    CostBreakdown cost;
    double distance = 0.0;
    double completion_time = 0.0;
    std::int64_t endurance_factor = 0;
    std::size_t hard_late = 0;  // customers reached after their cutoff c
};

inline RouteCost route_cost(const Route& route, const Instance& instance, const DistanceMatrix& dm) {
    RouteCost rc;
    if (route.customer_count() == 0) {
        return rc;
    }
    const auto& v = instance.vehicle;
    const auto& params = instance.costs;

    std::vector<double> times;
    detail::route_arrivals(route, dm, v.speed, v.service_time, times, rc.completion_time);

    rc.distance = route_distance(route, dm);
    rc.endurance_factor = distance_penalty_factor(rc.distance, v.endurance);
    rc.cost.transport_cost = v.unit_distance_cost * rc.distance;
    rc.cost.fixed_cost = v.fixed_cost;
    rc.cost.distance_penalty = static_cast<double>(rc.endurance_factor) * params.distance_penalty;
    for (std::size_t p = 1; p < route.nodes.size(); ++p) {
        const auto& w = instance.order_at(route.nodes[p]).window;
        rc.cost.time_penalty += time_penalty(times[p], w, params);
        if (times[p] > w.c) {
            ++rc.hard_late;
        }
    }
    rc.cost.total = rc.cost.transport_cost + rc.cost.fixed_cost + rc.cost.distance_penalty + rc.cost.time_penalty;
    return rc;
}

namespace detail {

/// Throws InfeasibleError unless every customer node is visited exactly once.
inline void require_single_service(std::span<const Route> routes, const Instance& instance) {
    std::vector<int> served(instance.node_count(), 0);
    for (const auto& route : routes) {
        for (std::size_t p = 1; p < route.nodes.size(); ++p) {
            const NodeId node = route.nodes[p];
            if (!instance.is_customer(node)) {
                throw InfeasibleError(fmt::format("node {} is not a customer", node));
            }
            ++served[node];
        }
    }
    for (NodeId node = instance.merchants.size(); node < instance.node_count(); ++node) {
        if (served[node] != 1) {
            throw InfeasibleError(served[node] == 0 ? fmt::format("customer {} unserved", node)
                                                    : fmt::format("customer {} served {} times", node, served[node]));
        }
    }
}

} // namespace detail

/// Total cost of a complete solution. Fixed cost is charged only for routes
/// that serve at least one customer.
inline CostBreakdown evaluate(std::span<const Route> routes, const Instance& instance, const DistanceMatrix& dm) {
    detail::require_single_service(routes, instance);
    CostBreakdown total;
    for (const auto& route : routes) {
        total += route_cost(route, instance, dm).cost;
    }
    total.total = total.transport_cost + total.fixed_cost + total.distance_penalty + total.time_penalty;
    return total;
}

/// Every hard-constraint violation in `routes`; empty means feasible.
inline std::vector<std::string> check_feasibility(std::span<const Route> routes, const Instance& instance) {
    std::vector<std::string> out;
    std::vector<int> served(instance.node_count(), 0);
    std::size_t used = 0;

    for (std::size_t r = 0; r < routes.size(); ++r) {
        const auto& nodes = routes[r].nodes;
        if (nodes.empty()) {
            out.push_back(fmt::format("route {}: empty node list", r));
            continue;
        }
        if (!instance.is_merchant(nodes.front())) {
            out.push_back(fmt::format("route {}: first node {} is not a merchant", r, nodes.front()));
        }
        double load = 0.0;
        for (std::size_t p = 1; p < nodes.size(); ++p) {
            const NodeId node = nodes[p];
            if (node >= instance.node_count()) {
                out.push_back(fmt::format("route {}: node {} does not exist", r, node));
                continue;
            }
            if (instance.is_merchant(node)) {
                out.push_back(fmt::format("route {}: merchant node {} visited mid-route", r, node));
                continue;
            }
            ++served[node];
            load += instance.load_of(node);
            const auto& order = instance.order_at(node);
            if (instance.is_merchant(nodes.front()) && order.merchant_id != instance.merchants[nodes.front()].id) {
                out.push_back(fmt::format("route {}: customer {} ordered from merchant {} but route starts at {}", r,
                                          node, order.merchant_id, instance.merchants[nodes.front()].id));
            }
        }
        if (nodes.size() > 1) {
            ++used;
        }
        if (load > instance.vehicle.capacity + cost_tolerance) {
            out.push_back(fmt::format("route {} load {} > Q {}", r, load, instance.vehicle.capacity));
        }
    }

    for (NodeId node = instance.merchants.size(); node < instance.node_count(); ++node) {
        if (served[node] == 0) {
            out.push_back(fmt::format("customer {} unserved", node));
        } else if (served[node] > 1) {
            out.push_back(fmt::format("customer {} served {} times", node, served[node]));
        }
    }
    if (used > instance.fleet_size) {
        out.push_back(fmt::format("route count {} > fleet size {}", used, instance.fleet_size));
    }
    return out;
}

/// Derived totals reported next to the cost.
struct SolutionMetrics {
    double total_distance = 0.0;
    double makespan = 0.0;    // completion time of the longest route
    double total_time = 0.0;  // sum of route completion times
    std::size_t vehicles = 0;
    std::size_t hard_late = 0;
};

struct Solution {
    std::vector<Route> routes;
    CostBreakdown cost;
    SolutionMetrics metrics;
};

/// Evaluates `routes` and packages them as a Solution. Routes without
/// customers are dropped and vehicle indices renumbered in order.
inline Solution make_solution(std::vector<Route> routes, const Instance& instance, const DistanceMatrix& dm) {
    std::erase_if(routes, [](const Route& r) { return r.customer_count() == 0; });
    for (std::size_t k = 0; k < routes.size(); ++k) {
        routes[k].vehicle_index = k;
    }
    Solution sol;
    sol.cost = evaluate(routes, instance, dm);
    for (const auto& route : routes) {
        const auto rc = route_cost(route, instance, dm);
        sol.metrics.total_distance += rc.distance;
        sol.metrics.total_time += rc.completion_time;
        sol.metrics.makespan = std::max(sol.metrics.makespan, rc.completion_time);
        sol.metrics.hard_late += rc.hard_late;
    }
    sol.metrics.vehicles = routes.size();
    sol.routes = std::move(routes);
    return sol;
}

} // namespace vrpstw
