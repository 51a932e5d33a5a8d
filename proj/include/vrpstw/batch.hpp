#pragma once

// Time-segment order allocation: orders are bucketed by placement slot and
// then by merchant, and every bucket becomes its own single-merchant instance.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "vrpstw/model.hpp"

namespace vrpstw {

/// Slots are [start + k*slot_length, start + (k+1)*slot_length) inside the
/// half-open horizon [horizon_start, horizon_end), all in minutes.
struct BatchSpec {
    double slot_length = 30.0;
    double horizon_start = 690.0;  // 11:30
    double horizon_end = 1110.0;   // 18:30
};

inline void validate(const BatchSpec& spec) {
    if (!(spec.slot_length > 0.0)) {
        throw ValidationError("batch: slot_length > 0 violated");
    }
    if (!(spec.horizon_start < spec.horizon_end)) {
        throw ValidationError("batch: horizon start < end violated");
    }
}

struct Batch {
    std::size_t slot = 0;
    double slot_start = 0.0;
    std::string merchant_id;
    Instance instance;
};

struct RejectedOrder {
    std::string order_id;
    std::string reason;
};

struct BatchResult {
    std::vector<Batch> batches;  // by slot, then merchant declaration order
    std::vector<RejectedOrder> rejects;
};

/// "HH:MM" for minutes from midnight.
inline std::string clock_time(double minutes) {
    const auto m = static_cast<long long>(std::floor(minutes));
    return fmt::format("{:02}:{:02}", m / 60, m % 60);
}

inline BatchResult batch_orders(const Instance& instance, const BatchSpec& spec) {
    validate(spec);
    BatchResult result;
    // (slot, merchant position) -> order indices, in input order
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> groups;

    for (std::size_t i = 0; i < instance.orders.size(); ++i) {
        const auto& o = instance.orders[i];
        const auto merchant = instance.merchant_node(o.merchant_id);
        if (!merchant) {
            result.rejects.push_back({o.id, fmt::format("unknown merchant '{}'", o.merchant_id)});
            continue;
        }
        if (!o.placed_at) {
            result.rejects.push_back({o.id, "no placed_at time"});
            continue;
        }
        const double t = *o.placed_at;
        if (!(t >= spec.horizon_start && t < spec.horizon_end)) {
            result.rejects.push_back({o.id, fmt::format("placed at {} outside horizon {}-{}", clock_time(t),
                                                        clock_time(spec.horizon_start),
                                                        clock_time(spec.horizon_end))});
            continue;
        }
        const auto slot = static_cast<std::size_t>(std::floor((t - spec.horizon_start) / spec.slot_length));
        groups[{slot, *merchant}].push_back(i);
    }

    for (const auto& [key, members] : groups) {
        const auto& merchant = instance.merchants[key.second];
        Batch b;
        b.slot = key.first;
        b.slot_start = spec.horizon_start + static_cast<double>(key.first) * spec.slot_length;
        b.merchant_id = merchant.id;
        b.instance.name = fmt::format("{}_{}", merchant.id, clock_time(b.slot_start));
        b.instance.name.erase(std::remove(b.instance.name.begin(), b.instance.name.end(), ':'),
                              b.instance.name.end());
        b.instance.merchants = {merchant};
        b.instance.vehicle = instance.vehicle;
        b.instance.costs = instance.costs;
        b.instance.fleet_size = instance.fleet_size;
        for (const auto i : members) {
            b.instance.orders.push_back(instance.orders[i]);
        }
        result.batches.push_back(std::move(b));
    }
    return result;
}

} // namespace vrpstw
