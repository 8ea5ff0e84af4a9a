#pragma once

#include <functional>
#include <vector>

#include "torsor_lab/picard.hpp"
#include "torsor_lab/ribbon_graph.hpp"

namespace torsor_lab {

/// State of the rotor-routing process: one rotor dart per non-sink vertex,
/// plus the chip position. Values; stepping is pure.
struct RotorState {
    int sink = 0;
    int chip = 0;
    std::vector<int> rotor; // vertex -> dart tailed there, -1 at the sink
};

/// Orients T toward the sink y and puts the chip at x.
inline RotorState initial_state(const RibbonGraph& g, const SpanningTree& t, int x, int y) {
    require_spanning_tree(g, t);
    if (x < 0 || x >= g.vertex_count() || y < 0 || y >= g.vertex_count())
        throw InputError("vertex out of range");
    RotorState s;
    s.sink = y;
    s.chip = x;
    s.rotor.assign(g.vertex_count(), -1);

    // Walk the tree from y; each vertex's rotor is its dart along the tree
    // path toward y.
    std::vector<int> stack = {y};
    std::vector<char> seen(g.vertex_count(), 0);
    seen[y] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int d : g.darts_at(v)) {
            if (!t.contains(g.edge_of(d))) continue;
            int w = g.head(d);
            if (seen[w]) continue;
            seen[w] = 1;
            s.rotor[w] = g.alpha(d); // dart at w pointing to v
            stack.push_back(w);
        }
    }
    return s;
}

/// One step: rotate the rotor at the chip, then move the chip along the newly
/// oriented dart.
inline RotorState rotor_step(const RibbonGraph& g, const RotorState& s) {
    if (s.chip == s.sink) throw ChipAtSink("chip is already at the sink");
    RotorState next = s;
    int d = g.sigma(next.rotor[next.chip]);
    next.rotor[next.chip] = d;
    next.chip = g.head(d);
    return next;
}

struct RotorStepRecord {
    long long step = 0;
    int chip = 0;           // position after the step
    int changed_vertex = 0; // vertex whose rotor turned
    int new_rotor_dart = 0;
};

inline SpanningTree tree_of_rotor(const RibbonGraph& g, const RotorState& s) {
    std::vector<int> edges;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (v != s.sink) edges.push_back(g.edge_of(s.rotor[v]));
    SpanningTree t{std::move(edges)};
    require_spanning_tree(g, t);
    return t;
}

/// Runs the process until the chip reaches the sink; `observe`, when given,
/// sees the initial state and the state after every step.
inline SpanningTree rotor_route_observed(
    const RibbonGraph& g, const SpanningTree& t, int x, int y,
    const std::function<void(const RotorState&, long long)>& observe,
    std::vector<RotorStepRecord>* trace = nullptr) {
    RotorState s = initial_state(g, t, x, y);
    if (observe) observe(s, 0);

    // Termination is guaranteed; the cap only converts a logic bug into a
    // clean failure.
    BigInt cap_big = BigInt(g.vertex_count()) * std::max(1, g.edge_count()) *
                         picard_group_order(g) +
                     g.vertex_count() + g.edge_count() + 8;
    long long cap = cap_big > 1000000000000ll ? 1000000000000ll : cap_big.convert_to<long long>();

    long long steps = 0;
    while (s.chip != s.sink) {
        int turned = s.chip;
        s = rotor_step(g, s);
        ++steps;
        if (trace) trace->push_back(RotorStepRecord{steps, s.chip, turned, s.rotor[turned]});
        if (observe) observe(s, steps);
        if (steps > cap) throw InvariantViolation("rotor routing exceeded its step cap");
    }
    return tree_of_rotor(g, s);
}

/// ((x) - (y))_y (T): route the chip from x into the sink y.
inline SpanningTree rotor_route(const RibbonGraph& g, const SpanningTree& t, int x, int y) {
    return rotor_route_observed(g, t, x, y, nullptr, nullptr);
}

inline SpanningTree rotor_route_traced(const RibbonGraph& g, const SpanningTree& t, int x, int y,
                                       std::vector<RotorStepRecord>& trace) {
    return rotor_route_observed(g, t, x, y, nullptr, &trace);
}

/// Action of a degree-0 divisor on T with sink y: apply each generator
/// (x) - (y) |coefficient| times, negative multiplicities via the order of
/// the generator's class. Generators are applied in ascending vertex order;
/// order independence is a tested property, not an assumption.
inline SpanningTree rotor_action(const RibbonGraph& g, const SpanningTree& t, const Divisor& d,
                                 int y) {
    if (d.degree() != 0) throw DegreeMismatch("rotor_action needs a degree-0 divisor");
    SpanningTree cur = t;
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (x == y || d[x] == 0) continue;
        long long a = d[x];
        long long reps;
        if (a > 0) {
            reps = a;
        } else {
            Divisor gen = Divisor::unit(g.vertex_count(), x) - Divisor::unit(g.vertex_count(), y);
            long long k = class_order(g, pic_class(g, gen));
            reps = ((a % k) + k) % k;
        }
        for (long long i = 0; i < reps; ++i) cur = rotor_route(g, cur, x, y);
    }
    return cur;
}

} // namespace torsor_lab
