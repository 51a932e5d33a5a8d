#pragma once

// Experience-style baseline: greedy nearest-neighbour tours that return to
// the merchant after every trip.

#include <limits>
#include <vector>

#include "vrpstw/cost.hpp"
#include "vrpstw/model.hpp"

namespace vrpstw {

/// Throws InfeasibleError if some order alone is heavier than the vehicle capacity.
inline void require_orders_fit(const Instance& instance) {
    for (const auto& o : instance.orders) {
        const double load = o.quantity * instance.vehicle.unit_weight;
        if (load > instance.vehicle.capacity + cost_tolerance) {
            throw InfeasibleError(fmt::format("order {} load {} exceeds vehicle capacity Q {}", o.id, load,
                                              instance.vehicle.capacity));
        }
    }
}

/// Closed nearest-neighbour routes from merchant node 0.
///
/// The next stop is the closest unvisited customer that keeps the load within
/// Q and the closed tour within L. When nothing fits the tour returns home and
/// a new one starts. A customer farther than L/2 still gets its own tour.
inline std::vector<Route> nearest_neighbor_routes(const Instance& instance, const DistanceMatrix& dm) {
    require_orders_fit(instance);
    const NodeId depot = 0;
    const double capacity = instance.vehicle.capacity + cost_tolerance;
    const double endurance = instance.vehicle.endurance + cost_tolerance;

    std::vector<bool> visited(instance.node_count(), false);
    std::size_t remaining = instance.customer_count();
    std::vector<Route> routes;

    while (remaining > 0) {
        Route route{routes.size(), {depot}, true};
        NodeId current = depot;
        double load = 0.0;
        double distance = 0.0;

        for (;;) {
            NodeId best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            const bool first_stop = route.nodes.size() == 1;
            for (NodeId c = instance.merchants.size(); c < instance.node_count(); ++c) {
                if (visited[c]) {
                    continue;
                }
                const double d = dm(current, c);
                if (load + instance.load_of(c) > capacity) {
                    continue;
                }
                if (!first_stop && distance + d + dm(c, depot) > endurance) {
                    continue;
                }
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (best_d == std::numeric_limits<double>::infinity()) {
                break;
            }
            visited[best] = true;
            --remaining;
            route.nodes.push_back(best);
            load += instance.load_of(best);
            distance += best_d;
            current = best;
        }
        routes.push_back(std::move(route));
    }
    return routes;
}

/// Baseline solution; requires a single-merchant instance.
inline Solution baseline_solve(const Instance& instance, const DistanceMatrix& dm) {
    require_single_merchant(instance);
    return make_solution(nearest_neighbor_routes(instance, dm), instance, dm);
}

inline Solution baseline_solve(const Instance& instance, Metric metric = Metric::euclidean) {
    return baseline_solve(instance, build_distance_matrix(instance, metric));
}

/// Customers in the order the baseline visits them, used to seed the GA.
inline std::vector<NodeId> nearest_neighbor_order(const Instance& instance, const DistanceMatrix& dm) {
    std::vector<NodeId> order;
    order.reserve(instance.customer_count());
    for (const auto& route : nearest_neighbor_routes(instance, dm)) {
        order.insert(order.end(), route.nodes.begin() + 1, route.nodes.end());
    }
    return order;
}

} // namespace vrpstw
