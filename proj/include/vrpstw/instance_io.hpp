#pragma once

// Instance documents ("vrpstw/1" JSON), orders-only CSV import, and the
// synthetic instance generator.
//
// Window bounds a/b/c are time units after the vehicle leaves the merchant.
// placed_at is minutes from midnight (11:30 = 690).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "vrpstw/ga.hpp"
#include "vrpstw/model.hpp"
#include "vrpstw/random.hpp"

namespace vrpstw {

inline constexpr std::string_view instance_format_version = "vrpstw/1";

namespace detail {

using ojson = nlohmann::ordered_json;

inline void reject_unknown(const nlohmann::json& obj, std::string_view where,
                           std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ParseError(fmt::format("{}: expected an object", where));
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(fmt::format("{}: unknown field '{}'", where, key));
        }
    }
}

inline const nlohmann::json& field(const nlohmann::json& obj, std::string_view where, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(fmt::format("{}: missing field '{}'", where, key));
    }
    return *it;
}

inline double number(const nlohmann::json& obj, std::string_view where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_number()) {
        throw ParseError(fmt::format("{}.{}: expected a number", where, key));
    }
    return v.get<double>();
}

inline double number_or(const nlohmann::json& obj, std::string_view where, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, where, key) : fallback;
}

inline std::int64_t integer(const nlohmann::json& obj, std::string_view where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_number_integer()) {
        throw ParseError(fmt::format("{}.{}: expected an integer", where, key));
    }
    return v.get<std::int64_t>();
}

inline std::string text(const nlohmann::json& obj, std::string_view where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_string()) {
        throw ParseError(fmt::format("{}.{}: expected a string", where, key));
    }
    return v.get<std::string>();
}

inline const nlohmann::json& array(const nlohmann::json& obj, std::string_view where, const char* key) {
    const auto& v = field(obj, where, key);
    if (!v.is_array()) {
        throw ParseError(fmt::format("{}.{}: expected an array", where, key));
    }
    return v;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
    out << contents;
    if (!out) {
        throw IoError(fmt::format("write to '{}' failed", path.string()));
    }
}

} // namespace detail

/// Parses an instance document without validating it.
inline Instance instance_from_json(const nlohmann::json& doc) {
    using namespace detail;
    reject_unknown(doc, "instance", {"format", "name", "merchants", "orders", "vehicle", "costs"});
    const std::string version = text(doc, "instance", "format");
    if (version != instance_format_version) {
        throw ParseError(fmt::format("unsupported format '{}' (expected '{}')", version, instance_format_version));
    }

    Instance inst;
    if (doc.contains("name")) {
        inst.name = text(doc, "instance", "name");
    }

    std::size_t k = 0;
    for (const auto& m : array(doc, "instance", "merchants")) {
        const std::string where = fmt::format("merchants[{}]", k++);
        reject_unknown(m, where, {"id", "x", "y"});
        inst.merchants.push_back(Merchant{text(m, where, "id"), {number(m, where, "x"), number(m, where, "y")}});
    }

    k = 0;
    for (const auto& o : array(doc, "instance", "orders")) {
        const std::string where = fmt::format("orders[{}]", k++);
        reject_unknown(o, where, {"id", "merchant_id", "x", "y", "quantity", "a", "b", "c", "placed_at"});
        Order order;
        order.id = text(o, where, "id");
        order.merchant_id = text(o, where, "merchant_id");
        order.customer_location = {number(o, where, "x"), number(o, where, "y")};
        const auto q = integer(o, where, "quantity");
        if (q < std::numeric_limits<int>::min() || q > std::numeric_limits<int>::max()) {
            throw ParseError(fmt::format("{}.quantity: out of range", where));
        }
        order.quantity = static_cast<int>(q);
        order.window = {number(o, where, "a"), number(o, where, "b"), number(o, where, "c")};
        if (o.contains("placed_at")) {
            order.placed_at = number(o, where, "placed_at");
        }
        inst.orders.push_back(std::move(order));
    }

    const auto& v = field(doc, "instance", "vehicle");
    reject_unknown(v, "vehicle", {"Q", "L", "r", "o", "q", "speed", "fleet_size", "service_time"});
    inst.vehicle.capacity = number(v, "vehicle", "Q");
    inst.vehicle.endurance = number(v, "vehicle", "L");
    inst.vehicle.fixed_cost = number(v, "vehicle", "r");
    inst.vehicle.unit_distance_cost = number(v, "vehicle", "o");
    inst.vehicle.unit_weight = number(v, "vehicle", "q");
    inst.vehicle.speed = number(v, "vehicle", "speed");
    inst.vehicle.service_time = number_or(v, "vehicle", "service_time", 0.0);
    const auto fleet = integer(v, "vehicle", "fleet_size");
    if (fleet < 0) {
        throw ParseError("vehicle.fleet_size: must be nonnegative");
    }
    inst.fleet_size = static_cast<std::size_t>(fleet);

    const auto& c = field(doc, "instance", "costs");
    reject_unknown(c, "costs", {"c_L", "early_coeff", "late_coeff"});
    inst.costs.distance_penalty = number(c, "costs", "c_L");
    inst.costs.early_coeff = number(c, "costs", "early_coeff");
    inst.costs.late_coeff = number(c, "costs", "late_coeff");
    return inst;
}

inline nlohmann::ordered_json instance_to_json(const Instance& inst) {
    detail::ojson doc;
    doc["format"] = instance_format_version;
    if (!inst.name.empty()) {
        doc["name"] = inst.name;
    }
    doc["merchants"] = detail::ojson::array();
    for (const auto& m : inst.merchants) {
        doc["merchants"].push_back({{"id", m.id}, {"x", m.location.x}, {"y", m.location.y}});
    }
    doc["orders"] = detail::ojson::array();
    for (const auto& o : inst.orders) {
        detail::ojson j{{"id", o.id},
                        {"merchant_id", o.merchant_id},
                        {"x", o.customer_location.x},
                        {"y", o.customer_location.y},
                        {"quantity", o.quantity},
                        {"a", o.window.a},
                        {"b", o.window.b},
                        {"c", o.window.c}};
        if (o.placed_at) {
            j["placed_at"] = *o.placed_at;
        }
        doc["orders"].push_back(std::move(j));
    }
    const auto& v = inst.vehicle;
    doc["vehicle"] = {{"Q", v.capacity},    {"L", v.endurance}, {"r", v.fixed_cost},
                      {"o", v.unit_distance_cost}, {"q", v.unit_weight}, {"speed", v.speed},
                      {"fleet_size", inst.fleet_size}};
    if (v.service_time != 0.0) {
        doc["vehicle"]["service_time"] = v.service_time;
    }
    doc["costs"] = {{"c_L", inst.costs.distance_penalty},
                    {"early_coeff", inst.costs.early_coeff},
                    {"late_coeff", inst.costs.late_coeff}};
    return doc;
}

inline std::string dump_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

/// Parses a document from text; parse errors carry the byte position.
inline Instance parse_instance(std::string_view contents, std::string_view source = "<input>") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(contents);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", source, e.what()));
    }
    try {
        return instance_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(fmt::format("{}: {}", source, e.what()));
    }
}

/// Reads, parses and validates an instance file. A missing name defaults to
/// the file stem.
inline Instance load_instance(const std::filesystem::path& path) {
    Instance inst = parse_instance(detail::read_file(path), path.string());
    if (inst.name.empty()) {
        inst.name = path.stem().string();
    }
    require_valid(inst);
    return inst;
}

inline void save_instance(const Instance& inst, const std::filesystem::path& path) {
    detail::write_file(path, dump_instance(inst));
}

/// Orders-only CSV with header `id,merchant_id,x,y,quantity,a,b,c[,placed_at]`.
inline std::vector<Order> parse_orders_csv(std::string_view contents, std::string_view source = "<csv>") {
    std::vector<Order> orders;
    std::istringstream in{std::string(contents)};
    std::string line;
    std::size_t line_no = 0;
    bool has_placed_at = false;

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
                cell.pop_back();
            }
            const auto start = cell.find_first_not_of(' ');
            cells.push_back(start == std::string::npos ? std::string{} : cell.substr(start));
        }
        if (!s.empty() && s.back() == ',') {
            cells.emplace_back();
        }
        return cells;
    };
    auto to_double = [&](const std::string& cell, std::string_view col) {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) {
                throw std::invalid_argument(cell);
            }
            return v;
        } catch (const std::exception&) {
            throw ParseError(fmt::format("{}:{}: column {}: '{}' is not a number", source, line_no, col, cell));
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        if (line_no == 1) {
            const std::vector<std::string> base{"id", "merchant_id", "x", "y", "quantity", "a", "b", "c"};
            auto with_placed = base;
            with_placed.emplace_back("placed_at");
            if (cells == with_placed) {
                has_placed_at = true;
            } else if (cells != base) {
                throw ParseError(fmt::format("{}:1: unexpected header '{}'", source, line));
            }
            continue;
        }
        const std::size_t expected = has_placed_at ? 9 : 8;
        if (cells.size() != expected) {
            throw ParseError(
                fmt::format("{}:{}: expected {} columns, found {}", source, line_no, expected, cells.size()));
        }
        Order o;
        o.id = cells[0];
        o.merchant_id = cells[1];
        o.customer_location = {to_double(cells[2], "x"), to_double(cells[3], "y")};
        const double q = to_double(cells[4], "quantity");
        if (q != std::floor(q) || std::abs(q) > 1e9) {
            throw ParseError(fmt::format("{}:{}: quantity must be an integer", source, line_no));
        }
        o.quantity = static_cast<int>(q);
        o.window = {to_double(cells[5], "a"), to_double(cells[6], "b"), to_double(cells[7], "c")};
        if (has_placed_at && !cells[8].empty()) {
            o.placed_at = to_double(cells[8], "placed_at");
        }
        orders.push_back(std::move(o));
    }
    if (line_no == 0) {
        throw ParseError(fmt::format("{}: empty file", source));
    }
    return orders;
}

inline std::vector<Order> load_orders_csv(const std::filesystem::path& path) {
    return parse_orders_csv(detail::read_file(path), path.string());
}

enum class WindowStyle { wide, tight };

inline WindowStyle parse_window_style(std::string_view s) {
    if (s == "wide") {
        return WindowStyle::wide;
    }
    if (s == "tight") {
        return WindowStyle::tight;
    }
    throw ValidationError(fmt::format("unknown window style '{}' (expected wide or tight)", s));
}

struct GeneratorOptions {
    std::uint64_t seed = 1;
    std::size_t customers = 10;
    double spread = 10.0;
    WindowStyle windows = WindowStyle::wide;
    std::string name;
};

/// Synthetic single-merchant instance.
///
/// Merchant at the origin, customers uniform in [-spread, spread]^2,
/// quantities uniform in 1..5 and windows [a, a + w, a + 2w] where a is at
/// least the direct travel time from the merchant. Placement times fall in
/// 11:30-18:30. Values are rounded to 3 decimals so files stay readable.
inline Instance generate_instance(const GeneratorOptions& opt) {
    if (opt.customers < 1) {
        throw ValidationError("generator needs at least 1 customer");
    }
    if (!(opt.spread > 0.0)) {
        throw ValidationError("generator spread must be positive");
    }
    auto round3 = [](double v) { return std::round(v * 1000.0) / 1000.0; };

    Rng rng(opt.seed);
    Instance inst;
    inst.name = opt.name.empty() ? fmt::format("gen-{}-n{}", opt.seed, opt.customers) : opt.name;
    inst.merchants.push_back(Merchant{"M0", {0.0, 0.0}});

    inst.vehicle.capacity = 15.0;
    inst.vehicle.endurance = 4.0 * opt.spread;
    inst.vehicle.fixed_cost = 2.0 * opt.spread;
    inst.vehicle.unit_distance_cost = 1.0;
    inst.vehicle.unit_weight = 1.0;
    inst.vehicle.speed = 1.0;
    inst.costs = CostParams{};
    inst.fleet_size = opt.customers;

    const double width = opt.windows == WindowStyle::wide ? 2.0 * opt.spread : 0.5 * opt.spread;
    for (std::size_t i = 0; i < opt.customers; ++i) {
        Order o;
        o.id = fmt::format("o{}", i + 1);
        o.merchant_id = "M0";
        o.customer_location = {round3(uniform_real(rng, -opt.spread, opt.spread)),
                               round3(uniform_real(rng, -opt.spread, opt.spread))};
        o.quantity = 1 + static_cast<int>(uniform_index(rng, 5));
        const double direct = std::hypot(o.customer_location.x, o.customer_location.y) / inst.vehicle.speed;
        const double a = round3(direct + uniform_real(rng, 0.0, opt.spread));
        o.window = {a, round3(a + width), round3(a + 2.0 * width)};
        o.placed_at = 690.0 + static_cast<double>(uniform_index(rng, 420));
        inst.orders.push_back(std::move(o));
    }
    return inst;
}

/// GA parameters from a JSON object; absent keys keep `base` values.
inline GaConfig ga_config_from_json(const nlohmann::json& doc, GaConfig base = {}) {
    using namespace detail;
    reject_unknown(doc, "config",
                   {"population_size", "max_generations", "crossover_rate", "mutation_rate", "tournament_size",
                    "elitism_count", "seed", "stall_generations", "threads", "split"});
    auto count = [&](const char* key, std::size_t& dst) {
        if (doc.contains(key)) {
            const auto v = integer(doc, "config", key);
            if (v < 0) {
                throw ParseError(fmt::format("config.{}: must be nonnegative", key));
            }
            dst = static_cast<std::size_t>(v);
        }
    };
    count("population_size", base.population_size);
    count("max_generations", base.max_generations);
    count("tournament_size", base.tournament_size);
    count("elitism_count", base.elitism_count);
    count("stall_generations", base.stall_generations);
    count("threads", base.threads);
    base.crossover_rate = number_or(doc, "config", "crossover_rate", base.crossover_rate);
    base.mutation_rate = number_or(doc, "config", "mutation_rate", base.mutation_rate);
    if (doc.contains("split")) {
        const auto mode = text(doc, "config", "split");
        if (mode != "optimal" && mode != "greedy") {
            throw ParseError(fmt::format("config.split: '{}' is not optimal or greedy", mode));
        }
        base.split = mode == "optimal" ? SplitMode::optimal : SplitMode::greedy;
    }
    if (doc.contains("seed")) {
        const auto& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            throw ParseError("config.seed: expected a nonnegative integer");
        }
        base.seed = s.get<std::uint64_t>();
    }
    return base;
}

inline GaConfig load_ga_config(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return ga_config_from_json(doc);
}

} // namespace vrpstw
