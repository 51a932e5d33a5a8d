#pragma once

// Schematic SVG route map: merchant squares, numbered customer dots, one
// polyline per route and a distance legend.

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "vrpstw/cost.hpp"
#include "vrpstw/model.hpp"

namespace vrpstw {

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

inline constexpr std::array<std::string_view, 10> route_palette{
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

} // namespace detail

inline std::string render_route_svg(const Solution& solution, const Instance& instance, const DistanceMatrix& dm) {
    constexpr double plot = 560.0;
    constexpr double margin = 40.0;
    constexpr double legend_line = 18.0;

    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (NodeId n = 0; n < instance.node_count(); ++n) {
        const auto p = instance.location(n);
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    if (instance.node_count() == 0) {
        min_x = min_y = 0.0;
        max_x = max_y = 1.0;
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double scale = plot / span;
    auto px = [&](Location p) { return margin + (p.x - min_x) * scale; };
    auto py = [&](Location p) { return margin + (max_y - p.y) * scale; };

    const double width = plot + 2.0 * margin;
    const double height = plot + 2.0 * margin + legend_line * static_cast<double>(solution.routes.size() + 1);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" height=\"{:.0f}\" "
                       "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
                       width, height, width, height);
    out += fmt::format("<title>{}</title>\n", detail::xml_escape(instance.name.empty() ? "routes" : instance.name));
    out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t k = 0; k < solution.routes.size(); ++k) {
        const auto& route = solution.routes[k];
        std::string points;
        for (const NodeId n : route.nodes) {
            const auto p = instance.location(n);
            points += fmt::format("{:.2f},{:.2f} ", px(p), py(p));
        }
        if (route.closed && !route.nodes.empty()) {
            const auto p = instance.location(route.nodes.front());
            points += fmt::format("{:.2f},{:.2f} ", px(p), py(p));
        }
        if (!points.empty()) {
            points.pop_back();
        }
        out += fmt::format("<polyline data-route=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           k, points, detail::route_palette[k % detail::route_palette.size()]);
    }

    for (NodeId n = 0; n < instance.node_count(); ++n) {
        const auto p = instance.location(n);
        if (instance.is_merchant(n)) {
            out += fmt::format("<rect class=\"merchant\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"12\" height=\"12\" "
                               "fill=\"black\"/>\n",
                               px(p) - 6.0, py(p) - 6.0);
            out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">{}</text>\n", px(p) + 8.0,
                               py(p) - 8.0, detail::xml_escape(instance.merchants[n].id));
        } else {
            out += fmt::format("<circle class=\"customer\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"#444\"/>\n",
                               px(p), py(p));
            out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\">{}</text>\n", px(p) + 6.0,
                               py(p) - 6.0, n);
        }
    }

    double y = plot + 2.0 * margin;
    for (std::size_t k = 0; k < solution.routes.size(); ++k) {
        out += fmt::format("<text class=\"legend\" x=\"{:.0f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"{}\">"
                           "route {}: distance {:.3f}</text>\n",
                           margin, y, detail::route_palette[k % detail::route_palette.size()], k,
                           route_distance(solution.routes[k], dm));
        y += legend_line;
    }
    out += "</svg>\n";
    return out;
}

inline void emit_route_svg(const Solution& solution, const Instance& instance, const DistanceMatrix& dm,
                           const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
    out << render_route_svg(solution, instance, dm);
    if (!out) {
        throw IoError(fmt::format("write to '{}' failed", path.string()));
    }
}

} // namespace vrpstw
