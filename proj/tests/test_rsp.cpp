#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kiva/error.hpp"
#include "kiva/rsp.hpp"
#include "rsp_oracle.hpp"

using namespace kiva;

TEST_CASE("single station picks the orders sharing a rack") {
    // A=0, B=1, C=2; racks {A,B}, {C}.
    auto inst = Instance::from_lists(3, 1, 2, {{0}, {1}, {2}}, {{0, 1}, {2}});
    const std::vector<OrderIdx> all{0, 1, 2};
    const std::vector<RackIdx> racks{0, 1};
    for (RspMode mode : {RspMode::exact, RspMode::greedy, RspMode::automatic}) {
        const auto sc = solve_single_station_rsp(inst, all, racks, 2, mode);
        CHECK(sc.orders == std::vector<OrderIdx>{0, 1});
        CHECK(sc.racks == std::vector<RackIdx>{0});
    }
    CHECK(kt::brute_single_station(inst, all, racks, 2) == 1);
}

TEST_CASE("single station edge cases") {
    auto one_rack = Instance::from_lists(3, 1, 2, {{0}, {1}, {2}}, {{0}, {0, 1, 2}, {1}});
    const auto sc = solve_single_station_rsp(one_rack, std::vector<OrderIdx>{0, 1, 2}, kt::all_racks(one_rack), 3,
                                             RspMode::exact);
    CHECK(sc.racks == std::vector<RackIdx>{1});

    auto sym = Instance::from_lists(2, 1, 1, {{0}, {1}}, {{0}, {1}});
    const auto tie = solve_single_station_rsp(sym, std::vector<OrderIdx>{0, 1}, kt::all_racks(sym), 1, RspMode::exact);
    CHECK(tie.orders == std::vector<OrderIdx>{0});
    CHECK(tie.racks == std::vector<RackIdx>{0});

    CHECK_THROWS_AS(solve_single_station_rsp(sym, std::vector<OrderIdx>{0}, kt::all_racks(sym), 2, RspMode::exact),
                    Error);
    auto bare = Instance::from_lists(2, 1, 1, {{1}}, {{0}});
    try {
        solve_single_station_rsp(bare, std::vector<OrderIdx>{0}, kt::all_racks(bare), 1, RspMode::exact);
        FAIL("expected an infeasibility error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::infeasible);
    }
}

TEST_CASE("sequential solve, one station") {
    auto inst = Instance::from_lists(3, 1, 2, {{0}, {1}, {2}}, {{0, 1}, {2}, {0, 1, 2}});
    const auto seq = rsp_sequential(inst, RspMode::exact);
    const auto direct =
        solve_single_station_rsp(inst, std::vector<OrderIdx>{0, 1, 2}, kt::all_racks(inst), 3, RspMode::exact);
    REQUIRE(seq.stations.size() == 1);
    CHECK(seq.stations[0].orders == direct.orders);
    CHECK(seq.stations[0].racks == direct.racks);
    CHECK(seq.solves == 1);

    const auto reduced = rsp_reduce(inst, RspMode::exact);
    CHECK(reduced.solves == 2);
    CHECK(reduced.stations[0].racks == seq.stations[0].racks);
    CHECK(reduced.stations[0].orders == seq.stations[0].orders);
}

TEST_CASE("sequential solve, two stations with duplicated orders") {
    // A=0, B=1; orders {A},{A},{B},{B}; racks {A},{B},{A,B}.
    auto inst = Instance::from_lists(2, 2, 2, {{0}, {0}, {1}, {1}}, {{0}, {1}, {0, 1}});
    const auto seq = rsp_sequential(inst, RspMode::exact);
    CHECK(kt::partitions(inst, seq));
    CHECK(seq.stations[0].racks.size() == 1);
    CHECK(kt::brute_single_station(inst, {0, 1, 2, 3}, kt::all_racks(inst), 2) == 1);
    CHECK(seq.stations[0].orders == std::vector<OrderIdx>{0, 1});
    CHECK(seq.solves == 2);
}

TEST_CASE("consolidation repairs a greedy first station") {
    // Station 0 grabs rack {A,B} for two orders {A},{B}; leftovers {C},{D}
    // then need racks {C}, {D}. A joint view pairs {A},{C} with {A,C} and
    // {B},{D} with {B,D}, all from the pool.
    auto inst = Instance::from_lists(4, 2, 2, {{0}, {1}, {2}, {3}}, {{0, 1}, {2}, {3}, {0, 2}, {1, 3}});
    const auto seq = rsp_sequential(inst, RspMode::exact);
    const auto con = rsp_consolidate(inst, seq, RspMode::exact);
    CHECK(con.total_racks() <= seq.total_racks());
    CHECK(con.total_racks() == kt::brute_joint(inst, seq.rack_pool()));
    for (const auto& s : con.stations) CHECK(kt::covers(inst, s));
    CHECK(kt::partitions(inst, con));
}

TEST_CASE("theta from an assignment") {
    RspAssignment a;
    a.stations = {{{3}, {0}}, {{1}, {0}}};
    std::mt19937_64 rng(4);
    CHECK(theta_from_rsp(a, rng).stations == std::vector<OrderSequence>{{3}, {1}});

    a.stations = {{{0, 2, 4, 6, 8}, {0}}, {{1, 3, 5, 7}, {0}}};
    std::mt19937_64 r1(9), r2(9);
    const auto t1 = theta_from_rsp(a, r1);
    CHECK(t1 == theta_from_rsp(a, r2));
    for (std::size_t p = 0; p < 2; ++p) {
        auto sorted = t1.stations[p];
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == a.stations[p].orders);
    }
}

TEST_CASE("exact single-station solves match brute force") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        kt::TinyShape shape;
        shape.max_orders = 8;
        shape.max_racks = 6;
        const auto inst = kt::tiny_instance(300 + seed, shape);
        std::vector<OrderIdx> all(inst.order_count());
        std::iota(all.begin(), all.end(), 0);
        const std::size_t k = 1 + seed % inst.order_count();
        const auto sc = solve_single_station_rsp(inst, all, kt::all_racks(inst), k, RspMode::exact);
        CHECK(sc.orders.size() == k);
        CHECK(kt::covers(inst, sc));
        CHECK(sc.racks.size() == kt::brute_single_station(inst, all, kt::all_racks(inst), k));
    }
}

TEST_CASE("joint and reduced assignments satisfy the invariants") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        kt::TinyShape shape;
        shape.max_orders = 8;
        shape.max_racks = 6;
        shape.max_stations = 3;
        const auto inst = kt::tiny_instance(700 + seed, shape);
        CAPTURE(seed);
        const auto joint = rsp_joint(inst, kt::all_racks(inst), RspMode::exact, 10'000'000);
        REQUIRE(joint.has_value());
        CHECK(joint->total_racks() == kt::brute_joint(inst, kt::all_racks(inst)));
        CHECK(kt::partitions(inst, *joint));

        for (RspMode mode : {RspMode::exact, RspMode::greedy, RspMode::automatic}) {
            const auto seq = rsp_sequential(inst, mode);
            const auto red = rsp_consolidate(inst, seq, mode);
            CHECK(red.solves == inst.stations + 1);
            CHECK(red.total_racks() <= seq.total_racks());
            CHECK(kt::partitions(inst, red));
            for (const auto& s : red.stations) CHECK(kt::covers(inst, s));
        }
    }
}

TEST_CASE("greedy cover rule") {
    // Demand {0,1,2}; rack 1 covers two, racks 0 and 2 tie on the rest.
    auto inst = Instance::from_lists(3, 1, 1, {{0, 1, 2}}, {{2}, {0, 1}, {2}});
    CHECK(greedy_cover(inst.orders[0], kt::all_racks(inst), inst) == std::vector<RackIdx>{1, 0});
    const auto exact = exact_cover(inst.orders[0], kt::all_racks(inst), inst, 1000);
    REQUIRE(exact.has_value());
    CHECK(exact->size() == 2);
}
