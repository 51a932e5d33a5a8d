#pragma once

// Problem data model shared by every solver: instance types, node indexing,
// the distance matrix, and structural validation.
//
// Node indexing: merchants occupy nodes [0, M) in declaration order and the
// customer of order k occupies node M + k. For the single-merchant
// sub-instances the solvers work on this gives merchant = 0 and customers
// 1..n, the convention used in every printed route string.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <fmt/format.h>

#include "vrpstw/error.hpp"

namespace vrpstw {

using NodeId = std::size_t;

struct Location {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Location&, const Location&) = default;
};

/// Customer time window. Arrivals in [a, b] are free; `c` is the point past
/// which a late arrival is reported as hard-late.
struct TimeWindow {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct Order {
    std::string id;
    std::string merchant_id;
    Location customer_location;
    int quantity = 1;
    TimeWindow window;
    /// Placement time in minutes from midnight; only used for batching.
    std::optional<double> placed_at;

    friend bool operator==(const Order&, const Order&) = default;
};

struct Merchant {
    std::string id;
    Location location;

    friend bool operator==(const Merchant&, const Merchant&) = default;
};

struct VehicleSpec {
    double capacity = 10.0;           // Q, weight units
    double endurance = 100.0;         // L, distance per battery
    double fixed_cost = 10.0;         // r, per vehicle used
    double unit_distance_cost = 1.0;  // o
    double unit_weight = 1.0;         // q, weight per item
    double speed = 1.0;               // distance per time unit
    double service_time = 0.0;        // time spent at each customer

    friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

struct CostParams {
    double distance_penalty = 50.0;  // c_L, charged per unit of the endurance factor
    double early_coeff = 0.5;
    double late_coeff = 1.5;

    friend bool operator==(const CostParams&, const CostParams&) = default;
};

struct Instance {
    std::string name;
    std::vector<Merchant> merchants;
    std::vector<Order> orders;
    VehicleSpec vehicle;
    CostParams costs;
    std::size_t fleet_size = 1;

    [[nodiscard]] std::size_t node_count() const noexcept { return merchants.size() + orders.size(); }
    [[nodiscard]] std::size_t customer_count() const noexcept { return orders.size(); }

    [[nodiscard]] NodeId customer_node(std::size_t order_index) const noexcept {
        return merchants.size() + order_index;
    }
    [[nodiscard]] bool is_merchant(NodeId node) const noexcept { return node < merchants.size(); }
    [[nodiscard]] bool is_customer(NodeId node) const noexcept {
        return node >= merchants.size() && node < node_count();
    }
    /// Order served at `node`; node must be a customer node.
    [[nodiscard]] const Order& order_at(NodeId node) const { return orders.at(node - merchants.size()); }

    [[nodiscard]] Location location(NodeId node) const {
        if (is_merchant(node)) {
            return merchants[node].location;
        }
        return orders.at(node - merchants.size()).customer_location;
    }

    /// Load an order contributes to a vehicle: quantity times unit weight.
    [[nodiscard]] double load_of(NodeId customer) const {
        return order_at(customer).quantity * vehicle.unit_weight;
    }

    [[nodiscard]] std::optional<NodeId> merchant_node(std::string_view merchant_id) const {
        for (std::size_t i = 0; i < merchants.size(); ++i) {
            if (merchants[i].id == merchant_id) {
                return i;
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// One vehicle trip. `nodes` starts at a merchant and then lists customers in
/// visiting order; a closed route additionally drives back to that merchant.
struct Route {
    std::size_t vehicle_index = 0;
    std::vector<NodeId> nodes;
    bool closed = false;

    [[nodiscard]] std::size_t customer_count() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }

    friend bool operator==(const Route&, const Route&) = default;
};

enum class Metric { euclidean, manhattan };

inline Metric parse_metric(std::string_view name) {
    if (name == "euclidean") {
        return Metric::euclidean;
    }
    if (name == "manhattan") {
        return Metric::manhattan;
    }
    throw ValidationError(fmt::format("unknown metric '{}' (expected euclidean or manhattan)", name));
}

inline double metric_distance(Location p, Location q, Metric metric) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return metric == Metric::euclidean ? std::hypot(dx, dy) : std::abs(dx) + std::abs(dy);
}

/// Dense symmetric matrix of node-to-node distances.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    [[nodiscard]] double operator()(NodeId i, NodeId j) const noexcept { return d_[i * n_ + j]; }
    double& operator()(NodeId i, NodeId j) noexcept { return d_[i * n_ + j]; }

    [[nodiscard]] double at(NodeId i, NodeId j) const {
        if (i >= n_ || j >= n_) {
            throw std::out_of_range(fmt::format("node index out of range: ({}, {}) in {}x{} matrix", i, j, n_, n_));
        }
        return (*this)(i, j);
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

inline DistanceMatrix build_distance_matrix(const Instance& instance, Metric metric = Metric::euclidean) {
    const std::size_t n = instance.node_count();
    DistanceMatrix dm(n);
    for (NodeId i = 0; i < n; ++i) {
        const Location li = instance.location(i);
        for (NodeId j = i + 1; j < n; ++j) {
            const double d = metric_distance(li, instance.location(j), metric);
            dm(i, j) = d;
            dm(j, i) = d;
        }
    }
    return dm;
}

/// Lists every broken invariant of `instance`; empty means valid.
inline std::vector<std::string> validate_instance(const Instance& instance) {
    std::vector<std::string> out;
    auto finite = [](Location p) { return std::isfinite(p.x) && std::isfinite(p.y); };

    if (instance.merchants.empty()) {
        out.emplace_back("merchants: at least 1 merchant required");
    }
    if (instance.orders.empty()) {
        out.emplace_back("orders: at least 1 order required");
    }
    if (instance.fleet_size < 1) {
        out.emplace_back("fleet_size: fleet_size ≥ 1 violated");
    }

    std::unordered_set<std::string> merchant_ids;
    for (const auto& m : instance.merchants) {
        if (!merchant_ids.insert(m.id).second) {
            out.push_back(fmt::format("merchant {}: duplicate id", m.id));
        }
        if (!finite(m.location)) {
            out.push_back(fmt::format("merchant {}: location must be finite", m.id));
        }
    }

    std::unordered_set<std::string> order_ids;
    for (const auto& o : instance.orders) {
        if (!order_ids.insert(o.id).second) {
            out.push_back(fmt::format("order {}: duplicate id", o.id));
        }
        if (!merchant_ids.contains(o.merchant_id)) {
            out.push_back(fmt::format("order {}: merchant_id '{}' does not resolve", o.id, o.merchant_id));
        }
        if (!finite(o.customer_location)) {
            out.push_back(fmt::format("order {}: location must be finite", o.id));
        }
        if (o.quantity < 1) {
            out.push_back(fmt::format("order {}: quantity ≥ 1 violated", o.id));
        }
        const auto& w = o.window;
        if (!(std::isfinite(w.a) && std::isfinite(w.b) && std::isfinite(w.c))) {
            out.push_back(fmt::format("order {} window: values must be finite", o.id));
        } else {
            if (w.a < 0.0) {
                out.push_back(fmt::format("order {} window: 0 ≤ a violated", o.id));
            }
            if (w.a > w.b) {
                out.push_back(fmt::format("order {} window: a ≤ b violated", o.id));
            }
            if (w.b > w.c) {
                out.push_back(fmt::format("order {} window: b ≤ c violated", o.id));
            }
        }
        if (o.placed_at && !std::isfinite(*o.placed_at)) {
            out.push_back(fmt::format("order {}: placed_at must be finite", o.id));
        }
    }

    const auto& v = instance.vehicle;
    auto positive = [&](double value, std::string_view field) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            out.push_back(fmt::format("vehicle: {} > 0 violated", field));
        }
    };
    positive(v.capacity, "capacity_Q");
    positive(v.endurance, "endurance_L");
    positive(v.fixed_cost, "fixed_cost_r");
    positive(v.unit_distance_cost, "unit_distance_cost_o");
    positive(v.unit_weight, "unit_weight_q");
    positive(v.speed, "speed");
    if (!(v.service_time >= 0.0)) {
        out.emplace_back("vehicle: service_time ≥ 0 violated");
    }

    const auto& c = instance.costs;
    if (!(c.distance_penalty >= 0.0)) {
        out.emplace_back("costs: distance_penalty_cL ≥ 0 violated");
    }
    if (!(c.early_coeff >= 0.0)) {
        out.emplace_back("costs: early_coeff ≥ 0 violated");
    }
    if (!(c.late_coeff >= 0.0)) {
        out.emplace_back("costs: late_coeff ≥ 0 violated");
    }
    return out;
}

/// Throws ValidationError listing every violation, if any.
inline void require_valid(const Instance& instance) {
    const auto violations = validate_instance(instance);
    if (violations.empty()) {
        return;
    }
    std::string msg = "invalid instance";
    if (!instance.name.empty()) {
        msg += " '" + instance.name + "'";
    }
    for (const auto& v : violations) {
        msg += "\n  " + v;
    }
    throw ValidationError(msg);
}

/// Solvers operate on one merchant at a time.
inline void require_single_merchant(const Instance& instance) {
    if (instance.merchants.size() != 1) {
        throw ValidationError(fmt::format(
            "solver needs a single-merchant instance, got {} merchants; split it with `batch` first",
            instance.merchants.size()));
    }
}

/// Sum of consecutive arc lengths, plus the return arc for a closed route.
inline double route_distance(const Route& route, const DistanceMatrix& dm) {
    if (route.nodes.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t p = 1; p < route.nodes.size(); ++p) {
        total += dm.at(route.nodes[p - 1], route.nodes[p]);
    }
    if (route.closed) {
        total += dm.at(route.nodes.back(), route.nodes.front());
    }
    return total;
}

inline double route_load(const Route& route, const Instance& instance) {
    double load = 0.0;
    for (std::size_t p = 1; p < route.nodes.size(); ++p) {
        load += instance.load_of(route.nodes[p]);
    }
    return load;
}

} // namespace vrpstw
