// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/core.h>

#include "test_support.hpp"
#include "vrpstw/cli.hpp"
#include "vrpstw/vrpstw.hpp"

using namespace vrpstw;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double round_sig(double v, int digits) {
    if (v == 0.0) {
        return 0.0;
    }
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::round(v * scale) / scale;
}

Outcome penalty_fidelity() {
    const auto t0 = Clock::now();
    const CostParams params;
    Rng rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = uniform_real(rng, 0.0, 60.0);
        const double b = a + uniform_real(rng, 0.0, 30.0);
        const double t = uniform_real(rng, std::max(0.0, a - 40.0), b + 8.0);
        double expected = 0.0;
        if (t < a) {
            expected = 0.5 * (a - t);
        } else if (t > b) {
            expected = 1.5 * (std::exp(t - b) - 1.0);
        }
        worst = std::max(worst, std::fabs(time_penalty(t, TimeWindow{a, b, b + 30.0}, params) - expected));
    }
    bool continuous = true;
    for (int i = 0; i < 100; ++i) {
        const double a = uniform_real(rng, 0.0, 60.0);
        const double b = a + uniform_real(rng, 0.0, 30.0);
        const TimeWindow w{a, b, b + 30.0};
        continuous = continuous && time_penalty(a, w, params) == 0.0 && time_penalty(b, w, params) == 0.0;
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-9 && continuous && elapsed < 1.0,
            fmt::format("1000 triples, max abs error {:.2e}, continuity at a and b {}, {:.3f} s", worst,
                        continuous ? "exact" : "BROKEN", elapsed)};
}

Outcome floor_penalty() {
    const bool examples = distance_penalty_factor(5.0, 10.0) == 0 && distance_penalty_factor(22.0, 10.0) == 2;
    Rng rng(7);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const double L = uniform_real(rng, 0.5, 100.0);
        const double d = uniform_real(rng, 0.0, 1000.0);
        if (distance_penalty_factor(d + L, L) != distance_penalty_factor(d, L) + 1) {
            ++violations;
        }
    }
    return {examples && violations == 0,
            fmt::format("ratio 0.5 -> {}, ratio 2.2 -> {}, +L => +1 violations {}/1000", distance_penalty_factor(5.0, 10.0),
                        distance_penalty_factor(22.0, 10.0), violations)};
}

Outcome fitness_relation() {
    struct Row {
        const char* shop;
        double fitness;
        double min_c;
    };
    const std::array<Row, 11> table{{{"S451", 0.00548, 182.577},
                                     {"S455", 0.00236, 423.236},
                                     {"S464", 0.00215, 464.650},
                                     {"S471", 0.00676, 147.951},
                                     {"S474", 0.00447, 223.662},
                                     {"S478", 0.00787, 126.986},
                                     {"S486", 0.00192, 520.553},
                                     {"S489", 0.00127, 785.004},
                                     {"S491", 0.00314, 318.679},
                                     {"S493", 0.01193, 83.836},
                                     {"S495", 0.00338, 295.864}}};
    int matched = 0;
    std::string misses;
    for (const auto& row : table) {
        const double f = fitness(row.min_c);
        // reference fitness values carry 5 decimals, which is 3 or 4 significant figures
        const bool ok = round_sig(f, 3) == round_sig(row.fitness, 3) &&
                        fmt::format("{:.5f}", f) == fmt::format("{:.5f}", row.fitness);
        matched += ok ? 1 : 0;
        if (!ok) {
            misses += fmt::format(" {}({:.6f})", row.shop, f);
        }
    }
    return {matched == 11, fmt::format("{}/11 rows agree; 1/182.577 = {:.5f}, 1/83.836 = {:.5f}{}", matched,
                                       fitness(182.577), fitness(83.836), misses)};
}

struct OracleSuite {
    int within = 0;
    int runs = 0;
    int monotone = 0;
    double seconds = 0;
    double worst_gap = 0;
};

OracleSuite run_oracle_suite() {
    const auto t0 = Clock::now();
    OracleSuite s;
    for (int i = 0; i < 50; ++i) {
        GeneratorOptions g;
        g.seed = 1000 + static_cast<std::uint64_t>(i);
        g.customers = 5 + static_cast<std::size_t>(i % 3);
        g.windows = i % 2 == 0 ? WindowStyle::wide : WindowStyle::tight;
        const Instance inst = generate_instance(g);
        const DistanceMatrix dm = build_distance_matrix(inst);
        GaConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(i) + 1;
        const SolveResult r = solve(inst, dm, cfg);
        const Solution exact = oracle_solve(inst, dm);
        const double gap = (r.best_solution.cost.total - exact.cost.total) / exact.cost.total;
        s.worst_gap = std::max(s.worst_gap, gap);
        s.within += gap <= 0.02 ? 1 : 0;
        ++s.runs;
        s.monotone += std::is_sorted(r.history.rbegin(), r.history.rend()) ? 1 : 0;
    }
    s.seconds = seconds_since(t0);
    return s;
}

Outcome oracle_equivalence(const OracleSuite& s) {
    return {s.within * 100 >= 95 * s.runs && s.seconds < 120.0,
            fmt::format("{}/{} runs within 2% of the optimum, worst gap {:.2f}%, {:.1f} s", s.within, s.runs,
                        100.0 * s.worst_gap, s.seconds)};
}

Outcome monotonicity(const OracleSuite& s) {
    return {s.monotone == s.runs, fmt::format("{}/{} histories nonincreasing", s.monotone, s.runs)};
}

Outcome feasibility() {
    const auto t0 = Clock::now();
    Rng rng(99);
    int violations = 0;
    std::string first;
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Instance> instances;
    for (int i = 0; i < 200; ++i) {
        GeneratorOptions g;
        g.seed = 5000 + static_cast<std::uint64_t>(i);
        g.customers = 1 + uniform_index(rng, 25);
        g.spread = uniform_real(rng, 2.0, 30.0);
        g.windows = bernoulli(rng, 0.5) ? WindowStyle::wide : WindowStyle::tight;
        Instance inst = generate_instance(g);
        // tighten capacity and endurance so that splitting matters
        inst.vehicle.capacity = 5.0 + static_cast<double>(uniform_index(rng, 16));
        inst.vehicle.endurance = g.spread * uniform_real(rng, 0.5, 4.0);
        instances.push_back(std::move(inst));
    }
    std::vector<std::vector<std::string>> found(instances.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < instances.size(); i += workers) {
                const Instance& inst = instances[i];
                const DistanceMatrix dm = build_distance_matrix(inst);
                GaConfig cfg;
                cfg.seed = i + 1;
                for (const auto& sol : {solve(inst, dm, cfg).best_solution, baseline_solve(inst, dm)}) {
                    for (const auto& v : check_feasibility(sol.routes, inst)) {
                        found[i].push_back(fmt::format("{}: {}", inst.name, v));
                    }
                }
            }
        });
    }
    pool.clear();
    for (const auto& f : found) {
        violations += static_cast<int>(f.size());
        if (!f.empty() && first.empty()) {
            first = f.front();
        }
    }
    return {violations == 0, fmt::format("200 instances x (GA, baseline), {} violations, {:.1f} s{}", violations,
                                         seconds_since(t0), first.empty() ? "" : "; first: " + first)};
}

Outcome improvement_direction() {
    const auto t0 = Clock::now();
    std::vector<Instance> corpus;
    Rng sizes(1);
    for (int i = 0; i < 100; ++i) {
        GeneratorOptions g;
        g.seed = 1 + static_cast<std::uint64_t>(i);
        g.customers = 5 + uniform_index(sizes, 21);
        g.windows = i % 2 == 0 ? WindowStyle::wide : WindowStyle::tight;
        g.name = fmt::format("gen{:04}", i);
        corpus.push_back(generate_instance(g));
    }
    const auto rows = compare_all(corpus, GaConfig{}, Metric::euclidean,
                                  std::max(1u, std::thread::hardware_concurrency()));
    double base = 0;
    double ga = 0;
    int wins = 0;
    for (const auto& r : rows) {
        base += r.baseline_z;
        ga += r.ga_z;
        wins += r.ga_z <= r.baseline_z + cost_tolerance ? 1 : 0;
    }
    const double n = static_cast<double>(rows.size());
    return {ga / n < base / n && wins >= 90,
            fmt::format("mean Z GA {:.3f} vs baseline {:.3f}, GA <= baseline on {}/100, {:.1f} s", ga / n, base / n,
                        wins, seconds_since(t0))};
}

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), n);
    }
    pclose(pipe);
    return out;
}

Outcome determinism(const std::string& cli_path, const std::string& instance) {
    const std::string cmd = fmt::format("'{}' --seed 42 solve '{}'", cli_path, instance);
    const std::string first = capture(cmd);
    const std::string second = capture(cmd);
    return {!first.empty() && first == second,
            fmt::format("two runs of `solve --seed 42` on {}: {} bytes, {}", std::filesystem::path(instance).filename().string(),
                        first.size(), first == second ? "identical" : "DIFFERENT")};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome round_trip_and_format(const std::filesystem::path& source) {
    Rng rng(31);
    int lossless = 0;
    for (int i = 0; i < 100; ++i) {
        GeneratorOptions g;
        g.seed = static_cast<std::uint64_t>(i) + 1;
        g.customers = 1 + uniform_index(rng, 30);
        g.spread = uniform_real(rng, 0.1, 1000.0);
        Instance inst = generate_instance(g);
        // unrounded values exercise full double precision
        for (auto& o : inst.orders) {
            o.customer_location.x += uniform_unit(rng) / 3.0;
        }
        inst.vehicle.service_time = uniform_unit(rng);
        const std::string text = dump_instance(inst);
        const Instance back = parse_instance(text);
        lossless += back == inst && dump_instance(back) == text ? 1 : 0;
    }

    // reference route strings rebuilt from node lists
    int golden = 0;
    const std::vector<std::string> published{"0 - 1 - 2 - 4 - 3", "0 - 2 - 5 - 6 - 1 - 3 0 - 7 - 4",
                                             "0 - 4 - 1 - 6 - 5 - 2 - 7 - 0 0 - 3 - 0"};
    for (const auto& s : published) {
        std::vector<Route> routes;
        for (const auto& p : testing::parse_routes(s)) {
            Route r{routes.size(), {0}, p.closed};
            r.nodes.insert(r.nodes.end(), p.customers.begin(), p.customers.end());
            routes.push_back(std::move(r));
        }
        golden += routes_string(routes) == s ? 1 : 0;
    }
    std::ostringstream out;
    std::ostringstream err;
    const std::string instance = (source / "data/sample7.json").string();
    run_cli({"--seed", "42", "solve", instance}, out, err);
    const bool solve_golden = out.str() == slurp(source / "tests/golden/sample7_solve.txt");
    const std::string data_file = slurp(instance);
    const bool file_exact = dump_instance(parse_instance(data_file)) == data_file;

    return {lossless == 100 && golden == 3 && solve_golden && file_exact,
            fmt::format("{}/100 random instances lossless, {}/3 reference route strings, solve golden {}, data file "
                        "byte-exact {}",
                        lossless, golden, solve_golden ? "match" : "MISMATCH", file_exact ? "yes" : "NO")};
}

} // namespace

int main(int argc, char** argv) {
    const std::filesystem::path source = argc > 1 ? argv[1] : VRPSTW_SOURCE_DIR;
    const std::string cli_path = argc > 2 ? argv[2] : VRPSTW_CLI_PATH;

    int failures = 0;
    const auto report = [&](int id, const char* title, const Outcome& o) {
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    };

    report(1, "penalty-function fidelity", penalty_fidelity());
    report(2, "floor-penalty fidelity", floor_penalty());
    report(3, "fitness relation", fitness_relation());
    const OracleSuite suite = run_oracle_suite();
    report(4, "oracle equivalence", oracle_equivalence(suite));
    report(5, "feasibility", feasibility());
    report(6, "improvement direction", improvement_direction());
    report(7, "determinism", determinism(cli_path, (source / "data/sample20.json").string()));
    report(8, "monotonicity", monotonicity(suite));
    report(9, "round-trip and formatting", round_trip_and_format(source));

    std::printf("%s: %d/9 criteria passed\n", failures == 0 ? "ACCEPTED" : "REJECTED", 9 - failures);
    return failures == 0 ? 0 : 1;
}
