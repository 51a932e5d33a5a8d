#include <filesystem>
#include <fstream>
#include <regex>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vrpstw/baseline.hpp"
#include "vrpstw/batch.hpp"
#include "vrpstw/instance_io.hpp"
#include "vrpstw/svg.hpp"

using namespace vrpstw;
using vrpstw::testing::make_instance;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "vrpstw_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

Instance random_instance(Rng& rng) {
    Instance inst;
    inst.name = "rt" + std::to_string(uniform_index(rng, 1000));
    const auto merchants = 1 + uniform_index(rng, 3);
    for (std::size_t m = 0; m < merchants; ++m) {
        inst.merchants.push_back(Merchant{"S" + std::to_string(m), {uniform_real(rng, -1e3, 1e3), uniform_real(rng, -1, 1)}});
    }
    const auto orders = 1 + uniform_index(rng, 12);
    for (std::size_t k = 0; k < orders; ++k) {
        Order o;
        o.id = "o" + std::to_string(k);
        o.merchant_id = inst.merchants[uniform_index(rng, merchants)].id;
        o.customer_location = {uniform_real(rng, -50, 50), uniform_real(rng, -50, 50) / 3.0};
        o.quantity = 1 + static_cast<int>(uniform_index(rng, 9));
        const double a = uniform_real(rng, 0, 100);
        o.window = {a, a + 1.0 / 3.0, a + 7.1};
        if (bernoulli(rng, 0.7)) {
            o.placed_at = uniform_real(rng, 600, 1200);
        }
        inst.orders.push_back(o);
    }
    inst.vehicle = {uniform_real(rng, 1, 50), 0.1 + uniform_real(rng, 1, 50), 7.25, 1.0 / 7.0, 0.5, 2.0,
                    bernoulli(rng, 0.5) ? 0.0 : 1.5};
    inst.costs = {uniform_real(rng, 0, 100), 0.5, 1.5};
    inst.fleet_size = 1 + uniform_index(rng, 20);
    return inst;
}

} // namespace

TEST(InstanceJson, RoundTripProperty) {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const Instance inst = random_instance(rng);
        const std::string text = dump_instance(inst);
        const Instance back = parse_instance(text);
        EXPECT_EQ(back, inst);
        EXPECT_EQ(dump_instance(back), text);
    }
}

TEST(InstanceJson, FileRoundTrip) {
    GeneratorOptions g;
    g.customers = 7;
    const auto inst = generate_instance(g);
    const auto path = temp_path("rt.json");
    save_instance(inst, path);
    const auto loaded = load_instance(path);
    EXPECT_EQ(loaded, inst);
    EXPECT_EQ(loaded.customer_count(), 7u);
}

TEST(InstanceJson, MissingNameDefaultsToStem) {
    auto inst = make_instance({{1, 1}});
    inst.name.clear();
    const auto path = temp_path("S451.json");
    save_instance(inst, path);
    EXPECT_EQ(load_instance(path).name, "S451");
}

TEST(InstanceJson, RejectsUnknownFieldsAndVersions) {
    auto doc = instance_to_json(make_instance({{1, 1}}));
    auto bad = doc;
    bad["orders"][0]["colour"] = "red";
    EXPECT_THROW((void)parse_instance(bad.dump()), ParseError);
    bad = doc;
    bad["extra"] = 1;
    EXPECT_THROW((void)parse_instance(bad.dump()), ParseError);
    bad = doc;
    bad["format"] = "vrpstw/2";
    EXPECT_THROW((void)parse_instance(bad.dump()), ParseError);
    bad = doc;
    bad["vehicle"].erase("Q");
    EXPECT_THROW((void)parse_instance(bad.dump()), ParseError);
    bad = doc;
    bad["orders"][0]["quantity"] = 1.5;
    EXPECT_THROW((void)parse_instance(bad.dump()), ParseError);
}

TEST(InstanceJson, TruncatedFileReportsPosition) {
    const std::string text = dump_instance(make_instance({{1, 1}}));
    try {
        (void)parse_instance(text.substr(0, text.size() / 2), "cut.json");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("cut.json"), std::string::npos);
        EXPECT_NE(msg.find("line"), std::string::npos);
    }
}

TEST(InstanceJson, ValidationAbortNamesOrder) {
    auto inst = make_instance({{1, 1}, {2, 2}});
    inst.orders[1].window = {5, 3, 10};
    const auto path = temp_path("badwin.json");
    save_instance(inst, path);
    try {
        (void)load_instance(path);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("order q2 window: a ≤ b violated"), std::string::npos);
    }
}

TEST(OrdersCsv, Import) {
    const auto orders = parse_orders_csv("id,merchant_id,x,y,quantity,a,b,c,placed_at\n"
                                         "o1,S1,1.5,2,3,0,10,20,695\n"
                                         "o2,S1,-1,0,1,5,6,7,\n");
    ASSERT_EQ(orders.size(), 2u);
    EXPECT_EQ(orders[0].customer_location, (Location{1.5, 2.0}));
    EXPECT_EQ(orders[0].quantity, 3);
    EXPECT_EQ(orders[0].placed_at, 695.0);
    EXPECT_FALSE(orders[1].placed_at.has_value());
    EXPECT_THROW((void)parse_orders_csv("id,x\n"), ParseError);
    EXPECT_THROW((void)parse_orders_csv("id,merchant_id,x,y,quantity,a,b,c\no1,S1,zz,0,1,0,1,2\n"), ParseError);
    EXPECT_THROW((void)parse_orders_csv("id,merchant_id,x,y,quantity,a,b,c\no1,S1,0,0,1.5,0,1,2\n"), ParseError);
}

TEST(Generator, DeterministicAndInRange) {
    GeneratorOptions g;
    g.seed = 1234;
    g.customers = 20;
    g.spread = 10.0;
    EXPECT_EQ(dump_instance(generate_instance(g)), dump_instance(generate_instance(g)));
    const auto inst = generate_instance(g);
    EXPECT_TRUE(validate_instance(inst).empty());
    EXPECT_EQ(inst.merchants[0].location, (Location{0.0, 0.0}));
    for (const auto& o : inst.orders) {
        EXPECT_GE(o.customer_location.x, -10.0);
        EXPECT_LE(o.customer_location.x, 10.0);
        EXPECT_GE(o.customer_location.y, -10.0);
        EXPECT_LE(o.customer_location.y, 10.0);
        EXPECT_GE(o.quantity, 1);
        EXPECT_LE(o.quantity, 5);
        EXPECT_GE(o.window.a, std::hypot(o.customer_location.x, o.customer_location.y) - 1e-3);
        EXPECT_NEAR(o.window.c - o.window.b, o.window.b - o.window.a, 2e-3);
    }
    g.seed = 1235;
    EXPECT_NE(dump_instance(generate_instance(g)), dump_instance(inst));
    g.customers = 0;
    EXPECT_THROW((void)generate_instance(g), ValidationError);
}

TEST(GaConfigJson, ParsesAndRejects) {
    const auto cfg = ga_config_from_json(nlohmann::json::parse(
        R"({"population_size": 40, "mutation_rate": 0.2, "seed": 9, "split": "greedy"})"));
    EXPECT_EQ(cfg.population_size, 40u);
    EXPECT_DOUBLE_EQ(cfg.mutation_rate, 0.2);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.split, SplitMode::greedy);
    EXPECT_EQ(cfg.max_generations, GaConfig{}.max_generations);
    EXPECT_THROW((void)ga_config_from_json(nlohmann::json::parse(R"({"popsize": 4})")), ParseError);
    EXPECT_THROW((void)ga_config_from_json(nlohmann::json::parse(R"({"seed": -1})")), ParseError);
}

TEST(Batch, TimeSlots) {
    auto inst = make_instance({{1, 0}, {2, 0}, {3, 0}});
    inst.orders[0].placed_at = 695;  // 11:35
    inst.orders[1].placed_at = 700;  // 11:40
    inst.orders[2].placed_at = 785;  // 13:05
    const auto result = batch_orders(inst, BatchSpec{30, 690, 1110});
    ASSERT_EQ(result.batches.size(), 2u);
    EXPECT_EQ(result.batches[0].instance.orders.size(), 2u);
    EXPECT_EQ(result.batches[0].slot, 0u);
    EXPECT_EQ(result.batches[1].instance.orders.size(), 1u);
    EXPECT_EQ(result.batches[1].instance.orders[0].id, "q3");
    EXPECT_EQ(result.batches[1].slot, 3u);
    EXPECT_EQ(result.batches[1].instance.name, "M_1300");
    EXPECT_TRUE(result.rejects.empty());
}

TEST(Batch, SplitsByMerchantAndRejectsOutsideHorizon) {
    auto inst = make_instance({{1, 0}, {2, 0}, {3, 0}, {4, 0}});
    inst.merchants.push_back(Merchant{"N", {5, 5}});
    inst.orders[1].merchant_id = "N";
    for (auto& o : inst.orders) {
        o.placed_at = 700;
    }
    inst.orders[2].placed_at = 1140;  // 19:00
    inst.orders[3].placed_at.reset();
    const auto result = batch_orders(inst, BatchSpec{30, 690, 1110});
    ASSERT_EQ(result.batches.size(), 2u);
    EXPECT_EQ(result.batches[0].merchant_id, "M");
    EXPECT_EQ(result.batches[1].merchant_id, "N");
    for (const auto& b : result.batches) {
        EXPECT_EQ(b.instance.merchants.size(), 1u);
        EXPECT_TRUE(validate_instance(b.instance).empty());
    }
    ASSERT_EQ(result.rejects.size(), 2u);
    EXPECT_EQ(result.rejects[0].order_id, "q3");
    EXPECT_NE(result.rejects[0].reason.find("19:00"), std::string::npos);
    EXPECT_EQ(result.rejects[1].order_id, "q4");
}

TEST(Batch, PartitionProperty) {
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = random_instance(rng);
        const BatchSpec spec{uniform_real(rng, 5, 90), 690, 1110};
        const auto result = batch_orders(inst, spec);
        std::map<std::string, int> seen;
        for (const auto& b : result.batches) {
            EXPECT_FALSE(b.instance.orders.empty());
            for (const auto& o : b.instance.orders) {
                ++seen[o.id];
                EXPECT_EQ(o.merchant_id, b.merchant_id);
                EXPECT_GE(*o.placed_at, b.slot_start);
                EXPECT_LT(*o.placed_at, b.slot_start + spec.slot_length);
            }
        }
        for (const auto& r : result.rejects) {
            ++seen[r.order_id];
        }
        for (const auto& o : inst.orders) {
            EXPECT_EQ(seen[o.id], 1) << o.id;
        }
    }
}

TEST(Batch, InvalidSpec) {
    const auto inst = make_instance({{1, 0}});
    EXPECT_THROW((void)batch_orders(inst, BatchSpec{0, 690, 1110}), ValidationError);
    EXPECT_THROW((void)batch_orders(inst, BatchSpec{30, 700, 690}), ValidationError);
}

TEST(Svg, Structure) {
    auto inst = make_instance({{1, 0, 6}, {2, 0, 6}, {0, 3, 1}});
    inst.vehicle.capacity = 10;
    const auto dm = build_distance_matrix(inst);
    const auto sol = baseline_solve(inst, dm);
    ASSERT_EQ(sol.routes.size(), 2u);
    const auto svg = render_route_svg(sol, inst, dm);
    EXPECT_EQ(count(svg, "<polyline"), 2u);
    EXPECT_EQ(count(svg, "class=\"merchant\"") + count(svg, "class=\"customer\""), inst.node_count());
    EXPECT_EQ(count(svg, "class=\"legend\""), 2u);
    EXPECT_NE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""), std::string::npos);

    const auto empty = render_route_svg(Solution{}, inst, dm);
    EXPECT_EQ(count(empty, "<polyline"), 0u);
    EXPECT_EQ(count(empty, "class=\"customer\""), 3u);
}

TEST(Svg, UnwritablePath) {
    const auto inst = make_instance({{1, 0}});
    const auto dm = build_distance_matrix(inst);
    EXPECT_THROW(emit_route_svg(Solution{}, inst, dm, "/nonexistent-dir/x/y.svg"), IoError);
    const auto path = temp_path("map.svg");
    emit_route_svg(baseline_solve(inst, dm), inst, dm, path);
    EXPECT_GT(std::filesystem::file_size(path), 100u);
}
