#include "kiva/annealing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"
#include "kiva/rsp.hpp"

namespace kiva {

double init_temperature(double f0, double w) { return -w * f0 / std::log(0.5); }

std::size_t epoch_length_update(std::size_t k, double f_min, double f_max) {
    if (f_max <= 0.0) return k;
    const double kd = static_cast<double>(k);
    const double growth = std::floor(kd * (1.0 - std::exp((f_min - f_max) / f_max)));
    return k + static_cast<std::size_t>(std::max(0.0, growth));
}

double acceptance_probability(double delta_f, double tau) {
    if (delta_f <= 0.0) return 1.0;
    return std::exp(-delta_f / tau);
}

bool accept(double delta_f, double tau, std::mt19937_64& rng) {
    if (delta_f < 0.0) return true;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) < acceptance_probability(delta_f, tau);
}

void swap_tokens(OrderSequence& tokens, std::size_t i, std::size_t j) { std::swap(tokens.at(i), tokens.at(j)); }

void shift_block(OrderSequence& tokens, std::size_t a, std::size_t b, std::size_t c) {
    if (!(a <= b && b < c && c < tokens.size())) fail(ErrorKind::invalid_input, "shift needs a <= b < c < size");
    const auto first = tokens.begin() + static_cast<std::ptrdiff_t>(a);
    std::rotate(first, tokens.begin() + static_cast<std::ptrdiff_t>(b + 1),
                tokens.begin() + static_cast<std::ptrdiff_t>(c + 1));
}

void invert_block(OrderSequence& tokens, std::size_t a, std::size_t b) {
    if (!(a <= b && b < tokens.size())) fail(ErrorKind::invalid_input, "inversion needs a <= b < size");
    std::reverse(tokens.begin() + static_cast<std::ptrdiff_t>(a), tokens.begin() + static_cast<std::ptrdiff_t>(b + 1));
}

namespace {

std::size_t min_tokens(Move move) { return move == Move::shift ? 3 : 2; }

// Draws `count` distinct sorted positions from [lo, lo + len).
std::vector<std::size_t> draw_sorted(std::size_t lo, std::size_t len, std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> picks;
    std::uniform_int_distribution<std::size_t> pos(lo, lo + len - 1);
    while (picks.size() < count) {
        const std::size_t p = pos(rng);
        if (std::find(picks.begin(), picks.end(), p) == picks.end()) picks.push_back(p);
    }
    std::sort(picks.begin(), picks.end());
    return picks;
}

void apply_move(OrderSequence& tokens, Move move, std::size_t lo, std::size_t len, std::mt19937_64& rng) {
    switch (move) {
    case Move::swap: {
        auto p = draw_sorted(lo, len, 2, rng);
        swap_tokens(tokens, p[0], p[1]);
        break;
    }
    case Move::shift: {
        auto p = draw_sorted(lo, len, 3, rng);
        shift_block(tokens, p[0], p[1], p[2]);
        break;
    }
    case Move::inversion: {
        auto p = draw_sorted(lo, len, 2, rng);
        invert_block(tokens, p[0], p[1]);
        break;
    }
    }
}

bool move_possible(const OrderSchedule& theta, Move move, Neighborhood hood) {
    if (hood == Neighborhood::cross_station) return theta.token_count() >= min_tokens(move);
    return std::any_of(theta.stations.begin(), theta.stations.end(),
                       [&](const OrderSequence& s) { return s.size() >= min_tokens(move); });
}

} // namespace

OrderSchedule random_move(const OrderSchedule& theta, Move move, Neighborhood hood, std::mt19937_64& rng) {
    if (!move_possible(theta, move, hood)) return theta;
    auto tokens = theta.flatten();
    const auto sizes = theta.segment_sizes();
    if (hood == Neighborhood::cross_station) {
        apply_move(tokens, move, 0, tokens.size(), rng);
    } else {
        std::vector<std::size_t> eligible;
        for (std::size_t p = 0; p < sizes.size(); ++p)
            if (sizes[p] >= min_tokens(move)) eligible.push_back(p);
        std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
        const std::size_t station = eligible[pick(rng)];
        std::size_t lo = 0;
        for (std::size_t p = 0; p < station; ++p) lo += sizes[p];
        apply_move(tokens, move, lo, sizes[station], rng);
    }
    return OrderSchedule::split(tokens, sizes);
}

OrderSchedule neighbor_swap(const OrderSchedule& theta, std::mt19937_64& rng) {
    return random_move(theta, Move::swap, Neighborhood::cross_station, rng);
}
OrderSchedule neighbor_shift(const OrderSchedule& theta, std::mt19937_64& rng) {
    return random_move(theta, Move::shift, Neighborhood::cross_station, rng);
}
OrderSchedule neighbor_inversion(const OrderSchedule& theta, std::mt19937_64& rng) {
    return random_move(theta, Move::inversion, Neighborhood::cross_station, rng);
}

std::size_t FitnessEvaluator::SeqHash::operator()(const OrderSequence& s) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (OrderIdx o : s) {
        h ^= o;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

FitnessEvaluator::FitnessEvaluator(const Instance& instance, std::vector<std::size_t> gamma, std::size_t cache_limit)
    : searcher_(instance), gamma_(std::move(gamma)), cache_limit_(cache_limit) {}

const RackSequence& FitnessEvaluator::station(const OrderSequence& sequence) {
    if (auto it = cache_.find(sequence); it != cache_.end()) {
        ++hits_;
        return it->second;
    }
    if (cache_.size() >= cache_limit_) cache_.clear();
    ++searches_;
    auto result = searcher_.iterate(sequence, gamma_);
    return cache_.emplace(sequence, std::move(result)).first->second;
}

RackSchedule FitnessEvaluator::schedule(const OrderSchedule& theta) {
    RackSchedule mu;
    for (const auto& seq : theta.stations) mu.stations.push_back(station(seq));
    return mu;
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::iterations: return "iterations";
    case StopReason::temperature: return "temperature";
    case StopReason::time_limit: return "time-limit";
    case StopReason::search_disabled: return "search-disabled";
    case StopReason::zero_fitness: return "zero-fitness";
    }
    return "unknown";
}

SaResult anneal(const Instance& instance, const OrderSchedule& initial, const SolverParams& params,
                Neighborhood hood, std::mt19937_64& rng) {
    params.validate();
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - started).count(); };

    FitnessEvaluator evaluator(instance, params.gamma);
    OrderSchedule current = initial;
    RackSchedule current_mu = evaluator.schedule(current);
    std::size_t current_f = evaluate_fitness(current_mu);

    SaResult result;
    result.best = {current, current_mu};
    RunStats& stats = result.stats;
    stats.initial_fitness = current_f;
    stats.best_fitness = current_f;

    std::vector<Move> moves;
    for (Move m : {Move::swap, Move::shift, Move::inversion})
        if ((params.operator_mask >> static_cast<unsigned>(m)) & 1U && move_possible(current, m, hood))
            moves.push_back(m);

    auto finish = [&](StopReason why) {
        stats.stop = why;
        stats.wall_seconds = elapsed();
        return result;
    };
    if (current_f == 0) return finish(StopReason::zero_fitness);
    if (moves.empty()) return finish(StopReason::search_disabled);

    double tau = init_temperature(static_cast<double>(current_f), params.w);
    stats.initial_tau = tau;
    std::size_t epoch_length = params.k0;
    std::uniform_int_distribution<std::size_t> pick_move(0, moves.size() - 1);

    while (true) {
        stats.final_tau = tau;
        stats.final_epoch_length = epoch_length;
        if (stats.iterations >= params.max_iterations) return finish(StopReason::iterations);
        if (tau < params.tau_floor) return finish(StopReason::temperature);
        if (elapsed() >= params.time_limit_seconds) return finish(StopReason::time_limit);

        double f_min = static_cast<double>(current_f);
        double f_max = static_cast<double>(current_f);
        for (std::size_t k = 0; k < epoch_length; ++k) {
            if (stats.iterations >= params.max_iterations) return finish(StopReason::iterations);
            if (elapsed() >= params.time_limit_seconds) return finish(StopReason::time_limit);

            const Move move = moves[pick_move(rng)];
            OrderSchedule candidate = random_move(current, move, hood, rng);
            RackSchedule candidate_mu = current_mu;
            for (std::size_t p = 0; p < candidate.stations.size(); ++p)
                if (candidate.stations[p] != current.stations[p])
                    candidate_mu.stations[p] = evaluator.station(candidate.stations[p]);
            const std::size_t candidate_f = evaluate_fitness(candidate_mu);
            ++stats.iterations;

            const double delta = static_cast<double>(candidate_f) - static_cast<double>(current_f);
            const double fc = static_cast<double>(candidate_f);
            if (params.epoch_tracking == EpochTracking::all_observed) {
                f_min = std::min(f_min, fc);
                f_max = std::max(f_max, fc);
            } else if (delta < 0.0) {
                f_min = std::min(f_min, fc);
            } else {
                f_max = std::max(f_max, fc);
            }

            if (accept(delta, tau, rng)) {
                ++stats.accepted;
                if (delta < 0.0) ++stats.improvements;
                current = std::move(candidate);
                current_mu = std::move(candidate_mu);
                current_f = candidate_f;
                if (current_f < stats.best_fitness) {
                    stats.best_fitness = current_f;
                    result.best = {current, current_mu};
                }
            }
            stats.incumbent_trace.push_back(stats.best_fitness);
        }
        ++stats.epochs;
        epoch_length = epoch_length_update(epoch_length, f_min, f_max);
        tau *= params.alpha;
    }
}

SaResult sa_solve(const Instance& instance, const SolverParams& params) {
    params.validate();
    if (!validate_instance(instance).empty())
        fail(ErrorKind::invalid_instance, "instance failed validation: " + validate_instance(instance).front());
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    const RspAssignment sequential = rsp_sequential(instance, params.rsp_mode, params.rsp_node_budget);
    const RspAssignment reduced = rsp_consolidate(instance, sequential, params.rsp_mode, params.rsp_node_budget);

    // The annealer works on a copy holding only the pooled racks; rack
    // indices are mapped back at the end.
    std::vector<RackIdx> pool;
    Instance narrowed;
    if (params.rack_reduction) {
        pool = sequential.rack_pool();
        narrowed = instance;
        narrowed.racks.clear();
        for (RackIdx r : pool) narrowed.racks.push_back(instance.racks[r]);
    }
    const Instance& searched = params.rack_reduction ? narrowed : instance;

    std::optional<SaResult> best;
    for (std::size_t r = 0; r < params.restarts; ++r) {
        SolverParams run = params;
        run.time_limit_seconds =
            params.time_limit_seconds - std::chrono::duration<double>(clock::now() - started).count();
        if (r > 0 && run.time_limit_seconds <= 0.0) break;
        std::mt19937_64 rng(params.rng_seed + 0x9e3779b97f4a7c15ULL * r);
        const OrderSchedule theta0 = theta_from_rsp(reduced, rng);
        SaResult attempt = anneal(searched, theta0, run, Neighborhood::cross_station, rng);
        if (!best || attempt.stats.best_fitness < best->stats.best_fitness) best = std::move(attempt);
    }
    if (params.rack_reduction)
        for (auto& seq : best->best.mu.stations)
            for (auto& rack : seq) rack = pool[rack];
    best->stats.wall_seconds = std::chrono::duration<double>(clock::now() - started).count();
    return *best;
}

} // namespace kiva
