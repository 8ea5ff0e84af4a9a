#pragma once

#include <functional>
#include <string>
#include <vector>

#include "torsor_lab/ribbon_graph.hpp"

namespace torsor_lab::fixtures {

/// Single edge on two vertices.
inline RibbonGraph single_edge() {
    return from_neighbor_lists({"u", "v"}, {{1}, {0}});
}

/// Path on k >= 2 vertices.
inline RibbonGraph path(int k) {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> nbrs(k);
    for (int i = 0; i < k; ++i) {
        labels.push_back("p" + std::to_string(i));
        if (i > 0) nbrs[i].push_back(i - 1);
        if (i + 1 < k) nbrs[i].push_back(i + 1);
    }
    return from_neighbor_lists(labels, nbrs);
}

/// Triangle; all vertices have degree 2, so the ribbon structure is unique.
inline RibbonGraph triangle() {
    return from_neighbor_lists({"a", "b", "c"}, {{1, 2}, {2, 0}, {0, 1}});
}

/// K_{2,3} with the rotations (ca,cd,cf) at c and (bf,ba,bd) at b; the
/// degree-2 vertices have unique rotations. Non-planar as a ribbon graph
/// (genus 1) although the underlying graph is planar.
inline RibbonGraph g_fig1() {
    // labels:      a        b          c          d       f
    // neighbors:   c b      f a d      a d f      c b     c b
    return from_neighbor_lists({"a", "b", "c", "d", "f"},
                               {{2, 1}, {4, 0, 3}, {0, 3, 4}, {2, 1}, {2, 1}});
}

/// Two triangles sharing the vertex c, with the rotation at c interleaving
/// them: (c a1, c f2, c a2, c f1). Genus 1.
inline RibbonGraph g_ex2() {
    // labels: c a1 a2 f1 f2
    return from_neighbor_lists({"c", "a1", "a2", "f1", "f2"},
                               {{1, 4, 2, 3}, {0, 2}, {1, 0}, {0, 4}, {3, 0}});
}

/// Three vertices, doubled edges c-a1 and c-f1, interleaved at c. A
/// non-planar multigraph on which both torsors nevertheless agree everywhere.
inline RibbonGraph g_rem() {
    // darts at c: 0 (-> a1), 1 (-> f1), 2 (-> a1), 3 (-> f1)
    // darts at a1: 4, 5;  at f1: 6, 7
    return from_rotations({"c", "a1", "f1"}, {{0, 1, 2, 3}, {4, 5}, {6, 7}},
                          {{0, 4}, {1, 6}, {2, 5}, {3, 7}});
}

/// g_fig1 with a pendant triangle {c, t1, t2} wedged at c, its darts placed
/// between ca and cd in the rotation.
inline RibbonGraph g_type_a_wedge() {
    // labels:  a       b          c                 d       f       t1      t2
    return from_neighbor_lists(
        {"a", "b", "c", "d", "f", "t1", "t2"},
        {{2, 1}, {4, 0, 3}, {0, 5, 6, 3, 4}, {2, 1}, {2, 1}, {2, 6}, {5, 2}});
}

/// A type-B instance whose a_n-sink witness fails, forcing the fallback
/// witness at the cut vertex: K4 (with a non-planar rotation system) wedged
/// with a triangle at c. Frozen from a search over small rotation systems;
/// the dart numbering is part of the fixture (it pins the lexicographic
/// spanning-tree extension used by the witness construction).
inline RibbonGraph g_case2() {
    // edges: 0-1 cw, 2-3 uv, 4-5 uw, 6-7 c a1, 8-9 a1 a2, 10-11 c a2,
    //        12-13 cu, 14-15 cv, 16-17 vw
    return from_rotations(
        {"c", "a1", "a2", "u", "v", "w"},
        {{6, 14, 10, 0, 12}, {7, 8}, {9, 11}, {13, 2, 4}, {15, 3, 16}, {1, 5, 17}},
        {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}, {12, 13}, {14, 15}, {16, 17}});
}

struct FixtureEntry {
    std::string name;
    std::string description;
    std::function<RibbonGraph()> build;
};

inline const std::vector<FixtureEntry>& all_fixtures() {
    static const std::vector<FixtureEntry> entries = {
        {"single_edge", "one edge on two vertices", single_edge},
        {"path3", "path on three vertices", [] { return path(3); }},
        {"path4", "path on four vertices", [] { return path(4); }},
        {"triangle", "triangle (planar)", triangle},
        {"g_fig1", "K_{2,3} with a genus-1 rotation system", g_fig1},
        {"g_ex2", "two triangles interleaved at c (type B)", g_ex2},
        {"g_rem", "doubled-edge multigraph where the torsors agree", g_rem},
        {"g_typeA", "g_fig1 with a pendant triangle wedged at c (type A)", g_type_a_wedge},
        {"g_caseB2", "type-B instance needing the cut-vertex witness", [] { return g_case2(); }},
    };
    return entries;
}

inline RibbonGraph by_name(const std::string& name) {
    for (const auto& f : all_fixtures())
        if (f.name == name) return f.build();
    throw InputError("unknown fixture: " + name);
}

} // namespace torsor_lab::fixtures
