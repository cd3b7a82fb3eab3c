#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kiva/model.hpp"
#include "kiva/station_dp.hpp"

namespace kiva {

/// Starting temperature at which a solution w * f0 worse than the initial
/// one is accepted with probability 1/2.
double init_temperature(double f0, double w);

/// Epoch length growth: K + floor(K * (1 - exp((f_min - f_max) / f_max))).
/// Leaves K unchanged when f_max is zero.
std::size_t epoch_length_update(std::size_t k, double f_min, double f_max);

/// exp(-delta / tau) clamped to 1 for improving moves.
double acceptance_probability(double delta_f, double tau);

/// Improving moves are always taken; otherwise one uniform draw decides.
bool accept(double delta_f, double tau, std::mt19937_64& rng);

// Deterministic move kernels on a flattened token list (0-based positions).
void swap_tokens(OrderSequence& tokens, std::size_t i, std::size_t j);
/// Moves the block [a, b] to just after position c; requires a <= b < c.
void shift_block(OrderSequence& tokens, std::size_t a, std::size_t b, std::size_t c);
/// Reverses the block [a, b]; requires a <= b.
void invert_block(OrderSequence& tokens, std::size_t a, std::size_t b);

enum class Move { swap = 0, shift = 1, inversion = 2 };
enum class Neighborhood {
    cross_station,   ///< positions anywhere in the flattened schedule
    within_station,  ///< all positions inside one uniformly chosen station
};

/// Applies a random move of the given kind. Segment sizes never change.
/// Returns the input unchanged when the schedule is too small for the move.
OrderSchedule random_move(const OrderSchedule& theta, Move move, Neighborhood hood, std::mt19937_64& rng);

OrderSchedule neighbor_swap(const OrderSchedule& theta, std::mt19937_64& rng);
OrderSchedule neighbor_shift(const OrderSchedule& theta, std::mt19937_64& rng);
OrderSchedule neighbor_inversion(const OrderSchedule& theta, std::mt19937_64& rng);

/// Station fitness through iterated beam search, memoised per order sequence.
class FitnessEvaluator {
public:
    FitnessEvaluator(const Instance& instance, std::vector<std::size_t> gamma, std::size_t cache_limit = 1u << 17);

    const RackSequence& station(const OrderSequence& sequence);
    RackSchedule schedule(const OrderSchedule& theta);

    std::size_t searches() const noexcept { return searches_; }
    std::size_t cache_hits() const noexcept { return hits_; }

private:
    struct SeqHash {
        std::size_t operator()(const OrderSequence& s) const noexcept;
    };
    BeamSearcher searcher_;
    std::vector<std::size_t> gamma_;
    std::size_t cache_limit_;
    std::unordered_map<OrderSequence, RackSequence, SeqHash> cache_;
    std::size_t searches_ = 0;
    std::size_t hits_ = 0;
};

enum class StopReason { iterations, temperature, time_limit, search_disabled, zero_fitness };

std::string_view to_string(StopReason reason);

struct RunStats {
    std::size_t iterations = 0;
    std::size_t epochs = 0;
    std::size_t accepted = 0;
    std::size_t improvements = 0;
    double initial_tau = 0.0;
    double final_tau = 0.0;
    std::size_t final_epoch_length = 0;
    std::size_t initial_fitness = 0;
    std::size_t best_fitness = 0;
    double wall_seconds = 0.0;
    StopReason stop = StopReason::iterations;
    std::vector<std::size_t> incumbent_trace;  // best fitness after each iteration
};

struct SaResult {
    Solution best;
    RunStats stats;
};

/// Simulated annealing over order schedules starting from `initial`.
SaResult anneal(const Instance& instance, const OrderSchedule& initial, const SolverParams& params,
                Neighborhood hood, std::mt19937_64& rng);

/// Full method: rack selection reduction for the initial assignment, random
/// station sequences, then annealing with cross-station moves. Runs
/// `params.restarts` independent seeds and keeps the best.
SaResult sa_solve(const Instance& instance, const SolverParams& params);

} // namespace kiva
