#pragma once

// Text, CSV and JSON renderings of solutions and comparison reports.
//
// Route strings follow the "0 - 3 - 1 - 2" convention: merchant first, nodes
// joined by " - ", a closed route ends with its merchant again, and several
// routes are separated by a single space.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "vrpstw/compare.hpp"
#include "vrpstw/cost.hpp"

namespace vrpstw {

enum class OutputFormat { text, csv, json };

inline OutputFormat parse_output_format(std::string_view s) {
    if (s == "text") {
        return OutputFormat::text;
    }
    if (s == "csv") {
        return OutputFormat::csv;
    }
    if (s == "json") {
        return OutputFormat::json;
    }
    throw ValidationError(fmt::format("unknown format '{}' (expected text, csv or json)", s));
}

inline std::string route_string(const Route& route) {
    std::string out;
    for (std::size_t p = 0; p < route.nodes.size(); ++p) {
        if (p > 0) {
            out += " - ";
        }
        out += std::to_string(route.nodes[p]);
    }
    if (route.closed && !route.nodes.empty()) {
        out += " - " + std::to_string(route.nodes.front());
    }
    return out;
}

inline std::string routes_string(std::span<const Route> routes) {
    std::string out;
    for (const auto& r : routes) {
        if (!out.empty()) {
            out += ' ';
        }
        out += route_string(r);
    }
    return out;
}

/// One solved instance: shop id, fitness, cost Z and timing.
struct SolutionRow {
    std::string shop_id;
    double fitness = 0.0;
    double z = 0.0;
    double makespan = 0.0;
    double total_time = 0.0;
    double distance = 0.0;
    std::string route;
};

inline SolutionRow make_row(std::string shop_id, const Solution& sol) {
    return SolutionRow{std::move(shop_id),         fitness(sol.cost.total), sol.cost.total,
                       sol.metrics.makespan,       sol.metrics.total_time,  sol.metrics.total_distance,
                       routes_string(sol.routes)};
}

inline std::string format_solution(const SolutionRow& row, const Solution& sol, OutputFormat format) {
    switch (format) {
    case OutputFormat::text:
        return fmt::format("{:<12} {:>9} {:>12} {:>10} {:>10} {:>10}  {}\n", "shop_id", "fitness", "min_C", "makespan",
                           "total_time", "distance", "route") +
               fmt::format("{:<12} {:>9.5f} {:>12.3f} {:>10.3f} {:>10.3f} {:>10.3f}  {}\n", row.shop_id, row.fitness,
                           row.z, row.makespan, row.total_time, row.distance, row.route);
    case OutputFormat::csv:
        return "shop_id,fitness,min_C,makespan,total_time,distance,transport_cost,fixed_cost,distance_penalty,"
               "time_penalty,route\n" +
               fmt::format("{},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{}\n", row.shop_id,
                           row.fitness, row.z, row.makespan, row.total_time, row.distance, sol.cost.transport_cost,
                           sol.cost.fixed_cost, sol.cost.distance_penalty, sol.cost.time_penalty, row.route);
    case OutputFormat::json: {
        nlohmann::ordered_json j;
        j["shop_id"] = row.shop_id;
        j["fitness"] = row.fitness;
        j["min_C"] = row.z;
        j["makespan"] = row.makespan;
        j["total_time"] = row.total_time;
        j["distance"] = row.distance;
        j["cost"] = {{"transport", sol.cost.transport_cost},
                     {"fixed", sol.cost.fixed_cost},
                     {"distance_penalty", sol.cost.distance_penalty},
                     {"time_penalty", sol.cost.time_penalty},
                     {"total", sol.cost.total}};
        j["hard_late"] = sol.metrics.hard_late;
        j["routes"] = nlohmann::ordered_json::array();
        for (const auto& r : sol.routes) {
            j["routes"].push_back({{"nodes", r.nodes}, {"closed", r.closed}});
        }
        j["route"] = row.route;
        return j.dump(2) + "\n";
    }
    }
    return {};
}

inline constexpr std::string_view comparison_csv_header =
    "instance,baseline_Z,ga_Z,baseline_time,ga_time,baseline_dist,ga_dist,impr_Z_pct,impr_time_pct,impr_dist_pct";

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) { return v ? fmt::format("{:.9f}", *v) : std::string{}; }

inline std::string opt_text(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : "n/a"; }

} // namespace detail

inline std::string format_comparison(const std::vector<ComparisonRow>& rows, OutputFormat format) {
    std::string out;
    switch (format) {
    case OutputFormat::csv:
        out += comparison_csv_header;
        out += '\n';
        for (const auto& r : rows) {
            out += fmt::format("{},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{:.9f},{},{},{}\n", r.instance, r.baseline_z,
                               r.ga_z, r.baseline_time, r.ga_time, r.baseline_distance, r.ga_distance,
                               detail::opt_cell(r.improvement_z_pct), detail::opt_cell(r.improvement_time_pct),
                               detail::opt_cell(r.improvement_distance_pct));
        }
        return out;
    case OutputFormat::text: {
        out += fmt::format("{:<16} {:>12} {:>12} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8} {:>8}\n", "instance",
                           "baseline_Z", "ga_Z", "base_time", "ga_time", "base_dist", "ga_dist", "Z_%", "time_%",
                           "dist_%");
        double base_z = 0.0, ga_z = 0.0, base_t = 0.0, ga_t = 0.0, base_d = 0.0, ga_d = 0.0;
        for (const auto& r : rows) {
            out += fmt::format("{:<16} {:>12.3f} {:>12.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>8} {:>8} {:>8}\n",
                               r.instance, r.baseline_z, r.ga_z, r.baseline_time, r.ga_time, r.baseline_distance,
                               r.ga_distance, detail::opt_text(r.improvement_z_pct),
                               detail::opt_text(r.improvement_time_pct), detail::opt_text(r.improvement_distance_pct));
            base_z += r.baseline_z;
            ga_z += r.ga_z;
            base_t += r.baseline_time;
            ga_t += r.ga_time;
            base_d += r.baseline_distance;
            ga_d += r.ga_distance;
        }
        if (rows.size() > 1) {
            out += fmt::format("{:<16} {:>12.3f} {:>12.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>8} {:>8} {:>8}\n",
                               "TOTAL", base_z, ga_z, base_t, ga_t, base_d, ga_d,
                               detail::opt_text(improvement_pct(base_z, ga_z)),
                               detail::opt_text(improvement_pct(base_t, ga_t)),
                               detail::opt_text(improvement_pct(base_d, ga_d)));
        }
        return out;
    }
    case OutputFormat::json: {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j{{"instance", r.instance},       {"baseline_Z", r.baseline_z},
                                     {"ga_Z", r.ga_z},               {"baseline_time", r.baseline_time},
                                     {"ga_time", r.ga_time},         {"baseline_dist", r.baseline_distance},
                                     {"ga_dist", r.ga_distance}};
            auto put = [&](const char* key, const std::optional<double>& v) {
                j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
            };
            put("impr_Z_pct", r.improvement_z_pct);
            put("impr_time_pct", r.improvement_time_pct);
            put("impr_dist_pct", r.improvement_distance_pct);
            arr.push_back(std::move(j));
        }
        return arr.dump(2) + "\n";
    }
    }
    return out;
}

} // namespace vrpstw
