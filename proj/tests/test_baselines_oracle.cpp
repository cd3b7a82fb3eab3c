#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kiva/annealing.hpp"
#include "kiva/baselines.hpp"
#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"
#include "kiva/oracle.hpp"
#include "kiva/station_dp.hpp"
#include "support.hpp"

using namespace kiva;

TEST_CASE("round robin assignment") {
    auto inst = Instance::from_lists(1, 2, 1, {{0}, {0}, {0}, {0}}, {{0}});
    CHECK(round_robin_assignment(inst).stations == std::vector<OrderSequence>{{0, 2}, {1, 3}});
}

TEST_CASE("greedy rack choice") {
    // A=0, B=1, C=2, F=3; racks {A,B}, {C,F}.
    auto inst = Instance::from_lists(4, 1, 2, {{0, 1}, {2}}, {{0, 1}, {2, 3}});
    CHECK(greedy_rack_sequence(inst, OrderSequence{0, 1}) == RackSequence{0, 1});

    auto tie = Instance::from_lists(2, 1, 1, {{0}}, {{1}, {0}, {0}});
    CHECK(greedy_rack_sequence(tie, OrderSequence{0}) == RackSequence{1});
}

TEST_CASE("rule-based baseline on the reference station") {
    const auto ref = reference_instance();
    const auto s = rb_solve(ref);
    CHECK(evaluate_fitness(s.mu) >= 3);
    CHECK(check_solution_feasibility(ref, s).feasible);
}

TEST_CASE("random assignment is balanced and seeded") {
    auto inst = Instance::from_lists(1, 3, 1, std::vector<std::vector<SkuId>>(10, {0}), {{0}});
    std::mt19937_64 a(5), b(5);
    const auto ta = random_assignment(inst, a);
    CHECK(ta == random_assignment(inst, b));
    CHECK(ta.segment_sizes() == balance_counts(10, 3));
    CHECK(validate_order_schedule(inst, ta).empty());
}

TEST_CASE("random-assignment annealing keeps the initial assignment") {
    const auto inst = kt::tiny_instance(3, {8, 2, 6, 3, 10, 2});
    SolverParams p;
    p.rng_seed = 12;
    p.max_iterations = 300;
    const auto r1 = roa_solve(inst, p);
    const auto r2 = roa_solve(inst, p);
    CHECK(r1.best == r2.best);
    CHECK(check_solution_feasibility(inst, r1.best).feasible);
    std::mt19937_64 rng(12);
    const auto theta0 = random_assignment(inst, rng);
    for (std::size_t s = 0; s < inst.stations; ++s) {
        auto got = r1.best.theta.stations[s];
        auto want = theta0.stations[s];
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        CHECK(got == want);
    }
}

TEST_CASE("station optimum by enumeration") {
    auto one = Instance::from_lists(2, 1, 1, {{0}}, {{0}, {1}});
    CHECK(exact_station_optimum(one, OrderSequence{0}).visits == 1);

    auto abc = Instance::from_lists(3, 1, 2, {{0}, {1}, {2}}, {{0, 1}, {2}});
    const auto opt = exact_station_optimum(abc, OrderSequence{0, 1, 2});
    CHECK(opt.visits == 2);
    CHECK(replay_station(abc, opt.sequence, opt.racks).complete);

    CHECK(exact_station_optimum(reference_instance(), OrderSequence{0, 1, 2, 3, 4}).visits == 3);
}

TEST_CASE("reference instance contents") {
    const auto ref = reference_instance();
    CHECK(ref.capacity == 3);
    CHECK(ref.stations == 1);
    CHECK(ref.rack_lists() == std::vector<std::vector<SkuId>>{{0, 1}, {2, 5}, {3}, {4, 6}});
    CHECK(ref.order_lists() == std::vector<std::vector<SkuId>>{{4}, {6}, {2}, {5}, {0, 1}});
    CHECK(reference_solution().mu.stations[0] == RackSequence{3, 1, 0});
}

TEST_CASE("joint optimum") {
    auto dom = Instance::from_lists(2, 1, 2, {{0}, {1}}, {{0}, {1}, {0, 1}});
    const auto r = brute_force_solve(dom);
    CHECK(r.objective == 1);
    CHECK(r.solution.mu.stations[0] == RackSequence{2});

    // Identical orders: every assignment costs the same.
    auto same = Instance::from_lists(2, 2, 1, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {{0}, {1}});
    CHECK(brute_force_solve(same).objective == 6);
}

TEST_CASE("size guard") {
    auto big = Instance::from_lists(1, 1, 1, std::vector<std::vector<SkuId>>(7, {0}), {{0}});
    try {
        brute_force_solve(big);
        FAIL("expected the limit guard");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::limit_exceeded);
    }
    OracleLimits wide;
    wide.max_orders = 7;
    CHECK(brute_force_solve(big, wide).objective == 1);
}

TEST_CASE("joint optimum lower-bounds every heuristic") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = kt::tiny_instance(9000 + seed);
        CAPTURE(seed);
        const auto opt = brute_force_solve(inst);
        CHECK(opt.objective == evaluate_fitness(opt.solution.mu));
        CHECK(check_solution_feasibility(inst, opt.solution).feasible);
        SolverParams p;
        p.rng_seed = seed;
        p.max_iterations = 200;
        CHECK(opt.objective <= evaluate_fitness(rb_solve(inst).mu));
        CHECK(opt.objective <= sa_solve(inst, p).stats.best_fitness);
        CHECK(opt.objective <= roa_solve(inst, p).stats.best_fitness);
    }
}

TEST_CASE("station optimum equals shortest sequence over all orderings") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        kt::TinyShape shape;
        shape.max_orders = 4;
        shape.max_racks = 4;
        shape.max_stations = 1;
        const auto inst = kt::tiny_instance(400 + seed, shape);
        OrderSequence seq(inst.order_count());
        std::iota(seq.begin(), seq.end(), 0);
        std::size_t best = SIZE_MAX;
        do best = std::min(best, kt::naive_min_visits(inst, seq, 6));
        while (std::next_permutation(seq.begin(), seq.end()));
        CHECK(exact_station_optimum(inst, seq).visits == best);
    }
}
