#pragma once

// Exact solver for small instances, used to check the heuristics.
//
// Z is a sum of independent per-route costs, so the best ordering of every
// customer subset is found once (all permutations) and then every set
// partition into at most fleet_size subsets is scored from that table.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "vrpstw/baseline.hpp"
#include "vrpstw/cost.hpp"
#include "vrpstw/model.hpp"

namespace vrpstw {

struct OracleOptions {
    std::size_t max_customers = 8;
    bool closed = false;  // score closed tours instead of open routes
};

namespace detail {

struct SubsetRoute {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<NodeId> order;
};

class PartitionSearch {
  public:
    PartitionSearch(const std::vector<SubsetRoute>& table, std::size_t n, std::size_t max_groups)
        : table_(table), n_(n), max_groups_(max_groups) {}

    void run() { recurse((std::uint32_t{1} << n_) - 1, 0.0); }

    [[nodiscard]] bool found() const noexcept { return best_cost_ < std::numeric_limits<double>::infinity(); }
    [[nodiscard]] const std::vector<std::vector<NodeId>>& best() const noexcept { return best_; }

  private:
    void recurse(std::uint32_t remaining, double cost) {
        if (remaining == 0) {
            consider(cost);
            return;
        }
        if (groups_.size() == max_groups_) {
            return;
        }
        // The lowest remaining customer anchors the next group so every
        // partition is produced exactly once.
        const std::uint32_t low = remaining & (~remaining + 1);
        const std::uint32_t rest = remaining & ~low;
        for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
            const std::uint32_t group = sub | low;
            const auto& entry = table_[group];
            if (entry.cost < std::numeric_limits<double>::infinity()) {
                groups_.push_back(&entry.order);
                recurse(remaining & ~group, cost + entry.cost);
                groups_.pop_back();
            }
            if (sub == 0) {
                break;
            }
        }
    }

    void consider(double cost) {
        if (cost < best_cost_ - cost_tolerance) {
            best_cost_ = cost;
            store();
            return;
        }
        if (cost <= best_cost_ + cost_tolerance && lexicographically_smaller()) {
            best_cost_ = std::min(best_cost_, cost);
            store();
        }
    }

    [[nodiscard]] std::vector<std::vector<NodeId>> sorted_groups() const {
        std::vector<std::vector<NodeId>> g;
        for (const auto* order : groups_) {
            g.push_back(*order);
        }
        std::sort(g.begin(), g.end());
        return g;
    }

    [[nodiscard]] bool lexicographically_smaller() const { return sorted_groups() < best_; }

    void store() { best_ = sorted_groups(); }

    const std::vector<SubsetRoute>& table_;
    std::size_t n_;
    std::size_t max_groups_;
    std::vector<const std::vector<NodeId>*> groups_;
    double best_cost_ = std::numeric_limits<double>::infinity();
    std::vector<std::vector<NodeId>> best_;
};

} // namespace detail

/// Globally optimal solution by enumeration. Ties within the cost tolerance
/// go to the lexicographically smallest list of routes.
inline Solution oracle_solve(const Instance& instance, const DistanceMatrix& dm, const OracleOptions& options = {}) {
    require_single_merchant(instance);
    const std::size_t n = instance.customer_count();
    if (n > options.max_customers) {
        throw SizeLimitError(fmt::format("oracle is limited to {} customers, instance has {}", options.max_customers, n));
    }
    if (n > 20) {
        throw SizeLimitError(fmt::format("oracle cannot enumerate {} customers", n));
    }
    require_orders_fit(instance);
    if (n == 0) {
        return make_solution({}, instance, dm);
    }

    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<detail::SubsetRoute> table(full + 1);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        Route route{0, {0}, options.closed};
        double load = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (std::uint32_t{1} << k)) {
                route.nodes.push_back(instance.customer_node(k));
                load += instance.load_of(instance.customer_node(k));
            }
        }
        if (load > instance.vehicle.capacity + cost_tolerance) {
            continue;
        }
        auto& entry = table[mask];
        do {
            const double c = route_cost(route, instance, dm).cost.total;
            if (c < entry.cost - cost_tolerance) {
                entry.cost = c;
                entry.order.assign(route.nodes.begin() + 1, route.nodes.end());
            }
        } while (std::next_permutation(route.nodes.begin() + 1, route.nodes.end()));
    }

    detail::PartitionSearch search(table, n, instance.fleet_size);
    search.run();
    if (!search.found()) {
        throw InfeasibleError(fmt::format("no partition of {} customers fits in {} vehicles", n, instance.fleet_size));
    }

    std::vector<Route> routes;
    for (const auto& group : search.best()) {
        Route r{routes.size(), {0}, options.closed};
        r.nodes.insert(r.nodes.end(), group.begin(), group.end());
        routes.push_back(std::move(r));
    }
    return make_solution(std::move(routes), instance, dm);
}

inline Solution oracle_solve(const Instance& instance, std::size_t max_customers = 8,
                             Metric metric = Metric::euclidean) {
    return oracle_solve(instance, build_distance_matrix(instance, metric), OracleOptions{max_customers, false});
}

} // namespace vrpstw
