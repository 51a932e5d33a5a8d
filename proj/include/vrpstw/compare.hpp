#pragma once

// Side-by-side runs of the closed-route baseline and the GA.

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "vrpstw/baseline.hpp"
#include "vrpstw/ga.hpp"

namespace vrpstw {

struct ComparisonRow {
    std::string instance;
    double baseline_z = 0.0;
    double ga_z = 0.0;
    double baseline_time = 0.0;  // total travel time over all routes
    double ga_time = 0.0;
    double baseline_distance = 0.0;
    double ga_distance = 0.0;
    std::optional<double> improvement_z_pct;
    std::optional<double> improvement_time_pct;
    std::optional<double> improvement_distance_pct;
};

/// (baseline - other) / baseline * 100, undefined unless baseline > 0.
inline std::optional<double> improvement_pct(double baseline, double other) {
    if (!(baseline > 0.0)) {
        return std::nullopt;
    }
    return (baseline - other) / baseline * 100.0;
}

inline ComparisonRow compare(const Instance& instance, const DistanceMatrix& dm, const GaConfig& config) {
    require_valid(instance);
    const Solution base = baseline_solve(instance, dm);
    const SolveResult ga = solve(instance, dm, config);
    const Solution& best = ga.best_solution;

    ComparisonRow row;
    row.instance = instance.name;
    row.baseline_z = base.cost.total;
    row.ga_z = best.cost.total;
    row.baseline_time = base.metrics.total_time;
    row.ga_time = best.metrics.total_time;
    row.baseline_distance = base.metrics.total_distance;
    row.ga_distance = best.metrics.total_distance;
    row.improvement_z_pct = improvement_pct(row.baseline_z, row.ga_z);
    row.improvement_time_pct = improvement_pct(row.baseline_time, row.ga_time);
    row.improvement_distance_pct = improvement_pct(row.baseline_distance, row.ga_distance);
    return row;
}

inline ComparisonRow compare(const Instance& instance, const GaConfig& config, Metric metric = Metric::euclidean) {
    return compare(instance, build_distance_matrix(instance, metric), config);
}

/// Compares every instance, running up to `jobs` at once. Rows come back
/// sorted by instance name whatever order the workers finish in.
inline std::vector<ComparisonRow> compare_all(const std::vector<Instance>& instances, const GaConfig& config,
                                              Metric metric = Metric::euclidean, std::size_t jobs = 1) {
    std::vector<ComparisonRow> rows(instances.size());
    jobs = std::max<std::size_t>(1, jobs);
    for (std::size_t begin = 0; begin < instances.size(); begin += jobs) {
        const std::size_t end = std::min(instances.size(), begin + jobs);
        std::vector<std::future<ComparisonRow>> pending;
        for (std::size_t i = begin; i < end; ++i) {
            pending.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async,
                                         [&, i] { return compare(instances[i], config, metric); }));
        }
        for (std::size_t i = begin; i < end; ++i) {
            rows[i] = pending[i - begin].get();
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ComparisonRow& l, const ComparisonRow& r) { return l.instance < r.instance; });
    return rows;
}

} // namespace vrpstw
