#pragma once

#include <span>

#include "kiva/annealing.hpp"
#include "kiva/model.hpp"

namespace kiva {

/// Round-robin assignment in arrival order.
OrderSchedule round_robin_assignment(const Instance& instance);

/// First-come-first-served bench with greedy rack calls: each visit brings the
/// rack covering the most units still required by the active orders (lowest
/// rack index on ties).
RackSequence greedy_rack_sequence(const Instance& instance, std::span<const OrderIdx> sequence);

/// Rule-based benchmark. Deterministic.
Solution rb_solve(const Instance& instance);

/// Uniformly random balanced assignment with random station sequences.
OrderSchedule random_assignment(const Instance& instance, std::mt19937_64& rng);

/// Random order assignment, then annealing with moves confined to a single
/// station.
SaResult roa_solve(const Instance& instance, const SolverParams& params);

} // namespace kiva
