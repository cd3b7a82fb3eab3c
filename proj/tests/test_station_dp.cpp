#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"
#include "kiva/oracle.hpp"
#include "kiva/station_dp.hpp"
#include "support.hpp"

using namespace kiva;

namespace {
// A=0, B=1, C=2.
Instance abc(std::size_t capacity) {
    return Instance::from_lists(3, 1, capacity, {{0}, {1}, {2}}, {{0, 1}, {2}});
}
SkuSet sku(std::initializer_list<SkuId> ids) { return SkuSet(3, ids); }
} // namespace

TEST_CASE("initial state loads the first C orders") {
    const auto inst = abc(2);
    const OrderSequence seq{0, 1, 2};
    const auto s = initial_state(seq, inst);
    CHECK(s.residuals == std::vector<SkuSet>{sku({0}), sku({1})});
    CHECK(s.psi == 3);
    CHECK(s.stage == 0);

    const auto under = initial_state(OrderSequence{0}, abc(3));
    CHECK(under.residuals == std::vector<SkuSet>{sku({0}), sku({}), sku({})});
    CHECK(under.psi == 2);

    const auto ref = reference_instance();
    const auto ref_seq = reference_solution().theta.stations[0];
    const auto rs = initial_state(ref_seq, ref);
    CHECK(rs.psi == 4);
    REQUIRE(rs.residuals.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) CHECK(rs.residuals[c] == ref.orders[ref_seq[c]]);
}

TEST_CASE("transition rule") {
    const auto inst = abc(2);
    const OrderSequence seq{0, 1, 2};
    const auto s = initial_state(seq, inst);
    const auto next = transition(s, 0, seq, inst);
    REQUIRE(next.has_value());
    CHECK(next->residuals == std::vector<SkuSet>{sku({2}), sku({})});
    CHECK(next->psi == 4);
    CHECK(next->stage == 1);
    CHECK(next->terminal(3) == false);
    const auto last = transition(*next, 1, seq, inst);
    REQUIRE(last.has_value());
    CHECK(last->terminal(3));

    // A rack that shrinks nothing is not a transition.
    auto single = Instance::from_lists(2, 1, 1, {{0}}, {{1}});
    CHECK_FALSE(transition(initial_state(OrderSequence{0}, single), 0, OrderSequence{0}, single).has_value());

    // Partial coverage keeps the order on the bench.
    auto pair = Instance::from_lists(2, 1, 1, {{0, 1}}, {{0}});
    const auto partial = transition(initial_state(OrderSequence{0}, pair), 0, OrderSequence{0}, pair);
    REQUIRE(partial.has_value());
    CHECK(partial->residuals == std::vector<SkuSet>{SkuSet(2, {1})});
    CHECK(partial->psi == 2);
    CHECK(partial->stage == 1);
}

TEST_CASE("beam filtering order") {
    BenchState far{{sku({0})}, 3, 1};
    BenchState near{{sku({0})}, 5, 1};
    CHECK(rank_states(std::vector<BenchState>{far, near}, 6) == std::vector<std::size_t>{1, 0});

    BenchState narrow{{sku({0, 1}), sku({})}, 3, 1};
    BenchState wide{{sku({0, 1}), sku({2})}, 3, 1};
    CHECK(rank_states(std::vector<BenchState>{wide, narrow}, 6) == std::vector<std::size_t>{1, 0});

    CHECK(rank_states(std::vector<BenchState>{wide, wide, wide}, 6) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("beam search on small stations") {
    const auto inst = abc(2);
    auto best = beam_search(OrderSequence{0, 1, 2}, inst, unbounded_width);
    REQUIRE(best.has_value());
    CHECK(best->size() == 2);
    CHECK(kt::naive_min_visits(inst, {0, 1, 2}, 4) == 2);

    auto one = Instance::from_lists(1, 1, 1, {{0}}, {{0}});
    CHECK(beam_search(OrderSequence{0}, one, unbounded_width)->size() == 1);

    const auto ref = reference_instance();
    const auto seq = reference_solution().theta.stations[0];
    CHECK(beam_search(seq, ref, unbounded_width)->size() == 3);
    CHECK(iterated_beam_search(seq, ref, std::vector<std::size_t>{1, 4, 16}).size() == 3);
}

TEST_CASE("upper bound prunes sequences that are not shorter") {
    const auto inst = abc(2);
    const OrderSequence seq{0, 1, 2};
    CHECK_FALSE(beam_search(seq, inst, unbounded_width, 2).has_value());
    CHECK(beam_search(seq, inst, unbounded_width, 3)->size() == 2);
}

TEST_CASE("unstocked SKU is infeasible") {
    auto inst = Instance::from_lists(2, 1, 1, {{1}}, {{0}});
    CHECK_THROWS_AS(beam_search(OrderSequence{0}, inst, 4), Error);
}

TEST_CASE("stage bound") {
    const auto ref = reference_instance();
    CHECK(station_stage_bound(reference_solution().theta.stations[0], ref) == 5 * 2 * 4);
}

TEST_CASE("single width iteration equals plain beam search") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = kt::tiny_instance(seed);
        OrderSequence seq(inst.order_count());
        std::iota(seq.begin(), seq.end(), 0);
        const auto plain = beam_search(seq, inst, 1);
        REQUIRE(plain.has_value());
        CHECK(iterated_beam_search(seq, inst, std::vector<std::size_t>{1}) == *plain);
    }
}

TEST_CASE("exact search matches brute-force rack sequencing") {
    std::mt19937_64 rng(17);
    kt::TinyShape shape;
    shape.max_racks = 4;
    shape.max_orders = 4;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto inst = kt::tiny_instance(1000 + seed, shape);
        OrderSequence seq(inst.order_count());
        std::iota(seq.begin(), seq.end(), 0);
        std::shuffle(seq.begin(), seq.end(), rng);
        const auto best = beam_search(seq, inst, unbounded_width);
        REQUIRE(best.has_value());
        CHECK(best->size() == kt::naive_min_visits(inst, seq, 6));
    }
}

TEST_CASE("beam results replay to completion and iterated search never loses to its members") {
    const std::vector<std::size_t> gamma{1, 2, 4, 8};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        kt::TinyShape shape;
        shape.max_orders = 8;
        shape.max_capacity = 3;
        shape.max_skus = 10;
        shape.max_racks = 6;
        const auto inst = kt::tiny_instance(5000 + seed, shape);
        OrderSequence seq(inst.order_count());
        std::iota(seq.begin(), seq.end(), 0);
        const auto exact = beam_search(seq, inst, unbounded_width);
        REQUIRE(exact.has_value());
        CHECK(replay_station(inst, seq, *exact).complete);
        const auto ibs = iterated_beam_search(seq, inst, gamma);
        CHECK(replay_station(inst, seq, ibs).complete);
        CHECK(ibs.size() >= exact->size());
        for (std::size_t w : gamma) {
            const auto single = beam_search(seq, inst, w);
            REQUIRE(single.has_value());
            CHECK(replay_station(inst, seq, *single).complete);
            CHECK(ibs.size() <= single->size());
        }
    }
}

TEST_CASE("searcher is reusable and reports work") {
    const auto ref = reference_instance();
    BeamSearcher searcher(ref);
    const auto seq = reference_solution().theta.stations[0];
    const auto first = searcher.search(seq, 4);
    CHECK(searcher.last_generated() > 0);
    CHECK(searcher.search(seq, 4) == first);
    CHECK_THROWS_AS(searcher.iterate(seq, std::vector<std::size_t>{}), Error);
}
