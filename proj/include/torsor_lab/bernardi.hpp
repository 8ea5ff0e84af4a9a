#pragma once

#include <map>
#include <vector>

#include "torsor_lab/divisor.hpp"
#include "torsor_lab/picard.hpp"
#include "torsor_lab/ribbon_graph.hpp"

namespace torsor_lab {

struct TourStep {
    enum class Action { Traverse, Cut, RevisitCut };
    int index = 0;
    int dart = 0;
    Action action = Action::Traverse;
    int chip_at = -1; // set for first cuts
};

/// Result of one Bernardi tour: the degree-g divisor, the first-cut chip
/// placements in tour order, and the dart visit sequence.
struct BernardiRecord {
    Divisor divisor;
    std::vector<std::pair<int, int>> chip_events; // (edge, vertex)
    std::vector<int> dart_order;
    std::vector<TourStep> steps;
};

/// Tour of the spanning tree T starting at (v, e_dart): tree edges are
/// traversed, non-tree edges are cut, and each first cut drops a chip at the
/// tail of the cutting dart. Visits every dart exactly once.
inline BernardiRecord bernardi_tour(const RibbonGraph& g, const SpanningTree& t, int v,
                                    int e_dart) {
    require_spanning_tree(g, t);
    if (e_dart < 0 || e_dart >= g.dart_count() || g.vertex_of(e_dart) != v)
        throw DartNotAtBasepoint("tour must start on a dart at the basepoint");

    BernardiRecord rec;
    rec.divisor = Divisor(g.vertex_count());
    std::vector<char> cut_once(g.dart_count(), 0); // indexed by edge id
    std::vector<char> visited(g.dart_count(), 0);

    int cur = e_dart;
    int index = 0;
    do {
        if (visited[cur]) throw InvariantViolation("Bernardi tour revisited a dart");
        visited[cur] = 1;
        rec.dart_order.push_back(cur);
        const int edge = g.edge_of(cur);
        TourStep step;
        step.index = index++;
        step.dart = cur;
        if (t.contains(edge)) {
            step.action = TourStep::Action::Traverse;
            cur = g.sigma(g.alpha(cur));
        } else {
            if (!cut_once[edge]) {
                cut_once[edge] = 1;
                step.action = TourStep::Action::Cut;
                step.chip_at = g.tail(cur);
                rec.divisor[g.tail(cur)] += 1;
                rec.chip_events.emplace_back(edge, g.tail(cur));
            } else {
                step.action = TourStep::Action::RevisitCut;
            }
            cur = g.sigma(cur);
        }
        rec.steps.push_back(step);
    } while (cur != e_dart);

    if (static_cast<int>(rec.dart_order.size()) != g.dart_count())
        throw InvariantViolation("Bernardi tour missed darts");
    const long long nullity = g.edge_count() - g.vertex_count() + 1;
    if (rec.divisor.degree() != nullity)
        throw InvariantViolation("Bernardi divisor degree differs from the nullity");
    return rec;
}

/// Divisor-only tour, for hot loops.
inline Divisor bernardi_divisor(const RibbonGraph& g, const SpanningTree& t, int v, int e_dart) {
    require_spanning_tree(g, t);
    if (e_dart < 0 || e_dart >= g.dart_count() || g.vertex_of(e_dart) != v)
        throw DartNotAtBasepoint("tour must start on a dart at the basepoint");
    Divisor div(g.vertex_count());
    std::vector<char> cut_once(g.dart_count(), 0);
    int cur = e_dart;
    do {
        const int edge = g.edge_of(cur);
        if (t.contains(edge)) {
            cur = g.sigma(g.alpha(cur));
        } else {
            if (!cut_once[edge]) {
                cut_once[edge] = 1;
                div[g.tail(cur)] += 1;
            }
            cur = g.sigma(cur);
        }
    } while (cur != e_dart);
    return div;
}

/// Lowest dart id at v; the canonical basepoint edge.
inline int canonical_dart_at(const RibbonGraph& g, int v) {
    const auto& r = g.darts_at(v);
    return r.empty() ? -1 : r.front();
}

/// The bijection table of beta_(v,e): spanning trees (lex order) with their
/// divisor classes, plus the reverse lookup.
struct BernardiTable {
    int basepoint = 0;
    int base_dart = -1;
    int base_vertex_q = 0;
    std::vector<SpanningTree> trees;
    std::vector<PicClass> classes;
    std::map<PicClass, int> index_by_class;
    std::map<SpanningTree, int> index_by_tree;

    const SpanningTree& tree_for(const PicClass& cls) const {
        auto it = index_by_class.find(cls);
        if (it == index_by_class.end())
            throw InvariantViolation("class is not in the Bernardi table");
        return trees[it->second];
    }
};

inline BernardiTable bernardi_map(const RibbonGraph& g, int v, int e_dart, int q = 0) {
    if (e_dart < 0 || e_dart >= g.dart_count() || g.vertex_of(e_dart) != v)
        throw DartNotAtBasepoint("basepoint dart must be at the basepoint vertex");
    BernardiTable table;
    table.basepoint = v;
    table.base_dart = e_dart;
    table.base_vertex_q = q;
    for_each_spanning_tree(g, [&](const SpanningTree& t) {
        PicClass cls = pic_class(g, bernardi_divisor(g, t, v, e_dart), q);
        int idx = static_cast<int>(table.trees.size());
        if (!table.index_by_class.emplace(cls, idx).second)
            throw BijectivityViolation("two spanning trees share a Bernardi class");
        table.index_by_tree.emplace(t, idx);
        table.trees.push_back(t);
        table.classes.push_back(std::move(cls));
    });
    return table;
}

/// Overload picking the canonical dart at v.
inline BernardiTable bernardi_map(const RibbonGraph& g, int v) {
    return bernardi_map(g, v, canonical_dart_at(g, v));
}

/// [D] . T via the Bernardi bijection at basepoint v: the unique T' with
/// beta(T') ~ beta(T) + D.
inline SpanningTree bernardi_action_with_table(const RibbonGraph& g, const BernardiTable& table,
                                               const SpanningTree& t, const Divisor& d) {
    if (d.degree() != 0) throw DegreeMismatch("bernardi action needs a degree-0 divisor");
    auto it = table.index_by_tree.find(t);
    PicClass base = (it != table.index_by_tree.end())
                        ? table.classes[it->second]
                        : pic_class(g, bernardi_divisor(g, t, table.basepoint, table.base_dart),
                                    table.base_vertex_q);
    PicClass target = class_add(g, base, pic_class(g, d, table.base_vertex_q));
    return table.tree_for(target);
}

inline SpanningTree bernardi_action(const RibbonGraph& g, const SpanningTree& t, const Divisor& d,
                                    int v) {
    if (g.vertex_count() == 1) return t;
    BernardiTable table = bernardi_map(g, v);
    return bernardi_action_with_table(g, table, t, d);
}

/// Divisor of the rotation arc from e1 (inclusive) to e2 (exclusive) at v,
/// all darts oriented away from v. Checks the basepoint-shift identity
/// beta_(v,e2)(T) - beta_(v,e1)(T) ~ shift; a failure means a tour bug.
inline Divisor basepoint_shift(const RibbonGraph& g, int v, int e1_dart, int e2_dart,
                               const SpanningTree& t) {
    for (int d : {e1_dart, e2_dart})
        if (d < 0 || d >= g.dart_count() || g.vertex_of(d) != v)
            throw DartNotAtBasepoint("shift darts must be at the basepoint vertex");
    Divisor shift(g.vertex_count());
    if (e1_dart == e2_dart) return shift;
    int cur = e1_dart;
    do {
        shift += boundary(g, cur);
        cur = g.sigma(cur);
    } while (cur != e2_dart);

    Divisor diff = bernardi_divisor(g, t, v, e2_dart) - bernardi_divisor(g, t, v, e1_dart);
    if (!linearly_equivalent(g, diff, shift))
        throw InvariantViolation("basepoint-shift identity failed");
    return shift;
}

} // namespace torsor_lab
