#pragma once

// Command-line front end. `run_cli` takes argv-style arguments and explicit
// streams so it can be driven from tests; tools/vrpstw.cpp is a thin main.
//
// Exit codes: 0 success, 1 usage, 2 invalid or infeasible input, 3 internal.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vrpstw/baseline.hpp"
#include "vrpstw/batch.hpp"
#include "vrpstw/compare.hpp"
#include "vrpstw/ga.hpp"
#include "vrpstw/instance_io.hpp"
#include "vrpstw/oracle.hpp"
#include "vrpstw/report.hpp"
#include "vrpstw/svg.hpp"

namespace vrpstw {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_invalid = 2, exit_internal = 3 };

namespace detail {

/// Minutes from midnight, either as a number or as "HH:MM".
inline double parse_clock(const std::string& s) {
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos) {
            return std::stod(s);
        }
        return std::stod(s.substr(0, colon)) * 60.0 + std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
        throw ValidationError(fmt::format("bad time '{}' (expected minutes or HH:MM)", s));
    }
}

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string metric = "euclidean";
    std::string config_path;
    std::string format = "text";
    std::size_t threads = 1;

    [[nodiscard]] GaConfig ga_config() const {
        GaConfig cfg = config_path.empty() ? GaConfig{} : load_ga_config(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        if (threads > 1) {
            cfg.threads = threads;
        }
        return cfg;
    }
};

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Meal-delivery vehicle routing with soft time windows", "vrpstw"};
    app.require_subcommand(1);
    app.fallthrough();

    detail::GlobalOptions global;
    app.add_option("--seed", global.seed, "Random seed (generator and GA)");
    app.add_option("--metric", global.metric, "Distance metric")->check(CLI::IsMember({"euclidean", "manhattan"}));
    app.add_option("--config", global.config_path, "GA parameters as a JSON object")->check(CLI::ExistingFile);
    app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--threads", global.threads, "Worker threads for fitness evaluation")->check(CLI::PositiveNumber);

    // gen
    GeneratorOptions gen_opts;
    std::string gen_windows = "wide";
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a random single-merchant instance");
    gen->add_option("-n,--customers", gen_opts.customers, "Number of customers")->required();
    gen->add_option("--spread", gen_opts.spread, "Half-width of the customer square");
    gen->add_option("--windows", gen_windows, "Time window style")->check(CLI::IsMember({"wide", "tight"}));
    gen->add_option("--name", gen_opts.name, "Instance name");
    gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

    // solve / baseline / oracle / plot share an instance argument
    std::string instance_path;
    std::string svg_path;
    auto* solve_cmd = app.add_subcommand("solve", "Solve with the genetic algorithm (open routes)");
    solve_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--svg", svg_path, "Also write a route map");

    auto* base_cmd = app.add_subcommand("baseline", "Closed-route nearest-neighbour baseline");
    base_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    base_cmd->add_option("--svg", svg_path, "Also write a route map");

    OracleOptions oracle_opts;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact solution by enumeration (small instances)");
    oracle_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--max-customers", oracle_opts.max_customers, "Size cap");
    oracle_cmd->add_flag("--closed", oracle_opts.closed, "Score closed tours");

    std::string plot_solver = "ga";
    auto* plot_cmd = app.add_subcommand("plot", "Write an SVG route map");
    plot_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--solver", plot_solver, "Solver to plot")->check(CLI::IsMember({"ga", "baseline", "oracle"}));
    plot_cmd->add_option("-o,--out", svg_path, "SVG file")->required();

    // batch
    BatchSpec batch_spec;
    std::string batch_start = "11:30";
    std::string batch_end = "18:30";
    std::string batch_orders_csv;
    std::string batch_dir;
    auto* batch_cmd = app.add_subcommand("batch", "Split orders by time slot and merchant");
    batch_cmd->add_option("instance", instance_path, "Instance JSON (may hold several merchants)")
        ->required()
        ->check(CLI::ExistingFile);
    batch_cmd->add_option("--slot", batch_spec.slot_length, "Slot length in minutes");
    batch_cmd->add_option("--start", batch_start, "Horizon start (minutes or HH:MM)");
    batch_cmd->add_option("--end", batch_end, "Horizon end (minutes or HH:MM)");
    batch_cmd->add_option("--orders", batch_orders_csv, "Replace the orders with a CSV file")
        ->check(CLI::ExistingFile);
    batch_cmd->add_option("--out-dir", batch_dir, "Write one instance file per batch here");

    // compare
    std::vector<std::string> compare_paths;
    std::size_t corpus = 0;
    std::size_t min_customers = 5;
    std::size_t max_customers = 25;
    double corpus_spread = 10.0;
    std::string corpus_windows = "wide";
    std::size_t jobs = 1;
    auto* compare_cmd = app.add_subcommand("compare", "Baseline vs GA report");
    compare_cmd->add_option("instances", compare_paths, "Instance files")->check(CLI::ExistingFile);
    compare_cmd->add_option("--corpus", corpus, "Generate this many instances instead of reading files");
    compare_cmd->add_option("--min-customers", min_customers, "Corpus size range, lower end")
        ->check(CLI::PositiveNumber);
    compare_cmd->add_option("--max-customers", max_customers, "Corpus size range, upper end")
        ->check(CLI::PositiveNumber);
    compare_cmd->add_option("--spread", corpus_spread, "Corpus spread");
    compare_cmd->add_option("--windows", corpus_windows, "Corpus window style")
        ->check(CLI::IsMember({"wide", "tight"}));
    compare_cmd->add_option("--jobs", jobs, "Instances compared in parallel")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const Metric metric = parse_metric(global.metric);
        const OutputFormat format = parse_output_format(global.format);

        if (gen->parsed()) {
            gen_opts.seed = global.seed.value_or(1);
            gen_opts.windows = parse_window_style(gen_windows);
            const Instance inst = generate_instance(gen_opts);
            if (gen_out.empty()) {
                out << dump_instance(inst);
            } else {
                save_instance(inst, gen_out);
            }
            return exit_ok;
        }

        if (solve_cmd->parsed() || base_cmd->parsed() || oracle_cmd->parsed() || plot_cmd->parsed()) {
            const Instance inst = load_instance(instance_path);
            require_single_merchant(inst);
            const DistanceMatrix dm = build_distance_matrix(inst, metric);

            std::string solver = plot_cmd->parsed() ? plot_solver : "";
            if (solve_cmd->parsed()) {
                solver = "ga";
            } else if (base_cmd->parsed()) {
                solver = "baseline";
            } else if (oracle_cmd->parsed()) {
                solver = "oracle";
            }

            Solution sol;
            if (solver == "ga") {
                sol = solve(inst, dm, global.ga_config()).best_solution;
            } else if (solver == "baseline") {
                sol = baseline_solve(inst, dm);
            } else {
                sol = oracle_solve(inst, dm, oracle_opts);
            }

            if (!svg_path.empty()) {
                emit_route_svg(sol, inst, dm, svg_path);
            }
            if (!plot_cmd->parsed()) {
                out << format_solution(make_row(inst.name, sol), sol, format);
            }
            return exit_ok;
        }

        if (batch_cmd->parsed()) {
            batch_spec.horizon_start = detail::parse_clock(batch_start);
            batch_spec.horizon_end = detail::parse_clock(batch_end);
            Instance inst = parse_instance(detail::read_file(instance_path), instance_path);
            if (!batch_orders_csv.empty()) {
                inst.orders = load_orders_csv(batch_orders_csv);
            }
            require_valid(inst);
            const BatchResult result = batch_orders(inst, batch_spec);
            if (!batch_dir.empty()) {
                std::filesystem::create_directories(batch_dir);
                for (const auto& b : result.batches) {
                    save_instance(b.instance, std::filesystem::path(batch_dir) / (b.instance.name + ".json"));
                }
            }
            if (format == OutputFormat::json) {
                nlohmann::ordered_json j;
                j["batches"] = nlohmann::ordered_json::array();
                for (const auto& b : result.batches) {
                    std::vector<std::string> ids;
                    for (const auto& o : b.instance.orders) {
                        ids.push_back(o.id);
                    }
                    j["batches"].push_back({{"name", b.instance.name},
                                            {"slot", b.slot},
                                            {"slot_start", b.slot_start},
                                            {"merchant_id", b.merchant_id},
                                            {"orders", ids}});
                }
                j["rejects"] = nlohmann::ordered_json::array();
                for (const auto& r : result.rejects) {
                    j["rejects"].push_back({{"order_id", r.order_id}, {"reason", r.reason}});
                }
                out << j.dump(2) << "\n";
            } else if (format == OutputFormat::csv) {
                out << "name,slot,slot_start,merchant_id,orders\n";
                for (const auto& b : result.batches) {
                    out << fmt::format("{},{},{},{},{}\n", b.instance.name, b.slot, clock_time(b.slot_start),
                                       b.merchant_id, b.instance.orders.size());
                }
                for (const auto& r : result.rejects) {
                    err << fmt::format("rejected {}: {}\n", r.order_id, r.reason);
                }
            } else {
                for (const auto& b : result.batches) {
                    out << fmt::format("{:<16} slot {:>2} {}-{}  merchant {}  orders {}\n", b.instance.name, b.slot,
                                       clock_time(b.slot_start), clock_time(b.slot_start + batch_spec.slot_length),
                                       b.merchant_id, b.instance.orders.size());
                }
                for (const auto& r : result.rejects) {
                    out << fmt::format("rejected {}: {}\n", r.order_id, r.reason);
                }
            }
            return exit_ok;
        }

        if (compare_cmd->parsed()) {
            std::vector<Instance> instances;
            if (corpus > 0) {
                if (min_customers > max_customers) {
                    throw ValidationError("--min-customers must not exceed --max-customers");
                }
                const std::uint64_t base_seed = global.seed.value_or(1);
                Rng sizes(base_seed);
                for (std::size_t i = 0; i < corpus; ++i) {
                    GeneratorOptions g;
                    g.seed = base_seed + i;
                    g.customers = min_customers + uniform_index(sizes, max_customers - min_customers + 1);
                    g.spread = corpus_spread;
                    g.windows = parse_window_style(corpus_windows);
                    g.name = fmt::format("gen{:04}", i);
                    instances.push_back(generate_instance(g));
                }
            }
            for (const auto& p : compare_paths) {
                instances.push_back(load_instance(p));
            }
            if (instances.empty()) {
                throw ValidationError("compare needs instance files or --corpus N");
            }
            const auto rows = compare_all(instances, global.ga_config(), metric, jobs);
            out << format_comparison(rows, format);
            return exit_ok;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_usage;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run_cli(args, out, err);
}

} // namespace vrpstw
