// A known-feasible two-station solution and one targeted corruption per
// constraint family.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kiva/evaluation.hpp"
#include "kiva/model.hpp"

namespace kt {

// Racks 0={0,1}, 1={2,3}, 2={4,5}, 3={0,2,4}; bench capacity 2.
inline kiva::Instance mutation_instance() {
    return kiva::Instance::from_lists(6, 2, 2, {{0}, {2}, {4}, {1}, {3}, {5}}, {{0, 1}, {2, 3}, {4, 5}, {0, 2, 4}});
}

inline kiva::Solution mutation_base() {
    return {kiva::OrderSchedule{{{0, 1, 2}, {3, 4, 5}}}, kiva::RackSchedule{{{0, 1, 2}, {0, 1, 2}}}};
}

struct Mutation {
    kiva::Constraint target;
    std::string name;
    std::function<kiva::FeasibilityReport()> run;
};

inline std::vector<Mutation> mutation_suite() {
    using namespace kiva;
    const Instance inst = mutation_instance();
    const Solution base = mutation_base();
    auto traces_of = [inst](const Solution& s) {
        std::vector<StationTrace> out;
        for (std::size_t p = 0; p < s.theta.stations.size(); ++p)
            out.push_back(replay_station(inst, s.theta.stations[p], s.mu.stations[p]));
        return out;
    };
    auto on_solution = [inst](std::function<void(Solution&)> edit) {
        return [inst, edit] {
            Solution s = mutation_base();
            edit(s);
            return check_solution_feasibility(inst, s);
        };
    };
    auto on_trace = [inst, base, traces_of](std::function<void(std::vector<StationTrace>&)> edit) {
        return [inst, base, traces_of, edit] {
            auto traces = traces_of(base);
            edit(traces);
            return verify_traces(inst, base, traces);
        };
    };

    std::vector<Mutation> suite;
    suite.push_back({Constraint::balance, "move an order to the other station", on_solution([](Solution& s) {
                         s.theta.stations[0].push_back(s.theta.stations[1].back());
                         s.theta.stations[1].pop_back();
                     })});
    suite.push_back({Constraint::single_assignment, "assign an order twice", on_solution([](Solution& s) {
                         s.theta.stations[1][0] = s.theta.stations[0][0];
                     })});
    suite.push_back({Constraint::active_only_if_assigned, "process a foreign order", on_trace([](auto& t) {
                         t[0].slots[0].active.push_back(3);
                     })});
    suite.push_back({Constraint::assigned_must_be_active, "never activate an order", on_trace([](auto& t) {
                         for (auto& slot : t[0].slots) {
                             std::erase(slot.active, OrderIdx{1});
                             std::erase_if(slot.picks, [](const Pick& p) { return p.order == 1; });
                         }
                     })});
    suite.push_back({Constraint::bench_capacity, "overfill the bench", on_trace([](auto& t) {
                         auto& slot = t[0].slots[0];
                         slot.active.push_back(2);
                     })});
    suite.push_back({Constraint::single_rack, "two racks in one slot", on_trace([](auto& t) {
                         t[0].slots[0].racks.push_back(3);
                     })});
    suite.push_back({Constraint::rack_only_if_assigned, "unscheduled rack visits", on_trace([](auto& t) {
                         t[0].slots.back().racks = {3};
                     })});
    suite.push_back({Constraint::assigned_rack_visits, "scheduled rack never shows up", [inst, base, traces_of] {
                         auto traces = traces_of(base);
                         Solution s = base;
                         s.mu.stations[0].push_back(3);
                         return verify_traces(inst, s, traces);
                     }});
    suite.push_back({Constraint::demand_delivered, "truncate the rack sequence", on_solution([](Solution& s) {
                         s.mu.stations[0].pop_back();
                     })});
    suite.push_back({Constraint::pick_requires_presence, "pick a SKU the rack lacks", on_trace([](auto& t) {
                         t[0].slots[0].picks.push_back({1, 5});
                     })});
    suite.push_back({Constraint::order_contiguity, "order returns after leaving", on_trace([](auto& t) {
                         t[0].slots.back().active.push_back(0);
                     })});
    suite.push_back({Constraint::rack_change, "drop a rack-change event", on_trace([](auto& t) {
                         t[0].slots[0].rack_change = false;
                     })});
    return suite;
}

} // namespace kt
