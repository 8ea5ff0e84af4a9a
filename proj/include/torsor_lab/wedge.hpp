#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "torsor_lab/ribbon_graph.hpp"

namespace torsor_lab {

/// One side of a wedge split: the subgraph plus the order-preserving maps
/// back into the containing graph.
struct WedgePart {
    RibbonGraph graph;
    int cut_vertex = 0;              // id of c within this part
    std::vector<int> dart_to_g;      // part dart -> g dart
    std::vector<int> vertex_to_g;    // part vertex -> g vertex

    int edge_to_g(const RibbonGraph& g, int part_edge) const {
        return g.edge_of(dart_to_g[part_edge]);
    }
};

/// Split of G at a cut vertex into edge-disjoint parts sharing only c.
struct WedgeSplit {
    int cut_vertex = 0; // in g
    WedgePart g1, g2;

    // g dart -> (part, part dart id); part is 1 or 2.
    std::vector<int> dart_part;
    std::vector<int> dart_to_part_id;

    const WedgePart& part(int which) const { return which == 1 ? g1 : g2; }
};

namespace detail {

struct SubgraphBuild {
    RibbonGraph graph;
    int cut_vertex = 0;
    std::vector<int> dart_to_g;
    std::vector<int> vertex_to_g;
};

/// Edge-induced subgraph with inherited (restricted) rotations. Darts and
/// vertices are renumbered preserving the order of their ids in g.
/// `anchor_vertex` is always included, even when the edge set is empty.
inline SubgraphBuild build_subgraph(const RibbonGraph& g, const std::vector<int>& edges,
                                    int anchor_vertex) {
    SubgraphBuild out;
    std::vector<int> darts;
    for (int e : edges) {
        darts.push_back(e);
        darts.push_back(g.alpha(e));
    }
    std::sort(darts.begin(), darts.end());

    std::set<int> vertex_set = {anchor_vertex};
    for (int d : darts) vertex_set.insert(g.vertex_of(d));
    out.vertex_to_g.assign(vertex_set.begin(), vertex_set.end());

    std::vector<int> g_vertex_to_part(g.vertex_count(), -1);
    for (int i = 0; i < static_cast<int>(out.vertex_to_g.size()); ++i)
        g_vertex_to_part[out.vertex_to_g[i]] = i;
    out.cut_vertex = g_vertex_to_part[anchor_vertex];

    std::vector<int> g_dart_to_part(g.dart_count(), -1);
    for (int i = 0; i < static_cast<int>(darts.size()); ++i) g_dart_to_part[darts[i]] = i;
    out.dart_to_g = darts;

    std::vector<std::string> labels;
    for (int gv : out.vertex_to_g) labels.push_back(g.label(gv));

    std::vector<std::vector<int>> rotations(out.vertex_to_g.size());
    for (int i = 0; i < static_cast<int>(out.vertex_to_g.size()); ++i) {
        for (int d : g.darts_at(out.vertex_to_g[i]))
            if (g_dart_to_part[d] != -1) rotations[i].push_back(g_dart_to_part[d]);
    }
    std::vector<std::pair<int, int>> alpha_pairs;
    for (int e : edges) alpha_pairs.emplace_back(g_dart_to_part[e], g_dart_to_part[g.alpha(e)]);

    out.graph = from_rotations(labels, rotations, alpha_pairs);
    return out;
}

} // namespace detail

/// Splits g at c. G1 is induced by the edges reachable from the seed darts'
/// edges along paths that use c only as an endpoint; G2 gets the rest. A side
/// with no edges becomes the single-vertex graph on c. Loops at c join G1
/// only when they are themselves seeds.
inline WedgeSplit wedge_split(const RibbonGraph& g, int c, const std::vector<int>& seed_darts) {
    if (c < 0 || c >= g.vertex_count()) throw SeedNotAtCutVertex("cut vertex out of range");
    for (int d : seed_darts)
        if (d < 0 || d >= g.dart_count() || g.vertex_of(d) != c)
            throw SeedNotAtCutVertex("seed dart is not at the cut vertex");

    // Group edges by their component in G - c; loops at c are singleton groups.
    detail::DisjointSet dsu(g.vertex_count());
    for (int e : g.edge_ids()) {
        auto [u, v] = g.edge_endpoints(e);
        if (u != c && v != c) dsu.unite(u, v);
    }
    auto group_of = [&](int e) -> long long {
        auto [u, v] = g.edge_endpoints(e);
        if (u == c && v == c) return -static_cast<long long>(e) - 2; // loop at c
        int other = (u == c) ? v : (v == c) ? u : u;
        return dsu.find(other);
    };

    std::set<long long> seed_groups;
    for (int d : seed_darts) seed_groups.insert(group_of(g.edge_of(d)));

    std::vector<int> e1, e2;
    for (int e : g.edge_ids())
        (seed_groups.count(group_of(e)) ? e1 : e2).push_back(e);

    WedgeSplit split;
    split.cut_vertex = c;
    auto b1 = detail::build_subgraph(g, e1, c);
    auto b2 = detail::build_subgraph(g, e2, c);
    split.g1 = WedgePart{std::move(b1.graph), b1.cut_vertex, std::move(b1.dart_to_g),
                         std::move(b1.vertex_to_g)};
    split.g2 = WedgePart{std::move(b2.graph), b2.cut_vertex, std::move(b2.dart_to_g),
                         std::move(b2.vertex_to_g)};

    split.dart_part.assign(g.dart_count(), 0);
    split.dart_to_part_id.assign(g.dart_count(), -1);
    for (int i = 0; i < static_cast<int>(split.g1.dart_to_g.size()); ++i) {
        split.dart_part[split.g1.dart_to_g[i]] = 1;
        split.dart_to_part_id[split.g1.dart_to_g[i]] = i;
    }
    for (int i = 0; i < static_cast<int>(split.g2.dart_to_g.size()); ++i) {
        split.dart_part[split.g2.dart_to_g[i]] = 2;
        split.dart_to_part_id[split.g2.dart_to_g[i]] = i;
    }
    return split;
}

/// One entry of the rotation interleaving at the merged cut vertex.
struct MergeEntry {
    int part = 1; // 1 or 2
    int dart = 0; // dart id within that part, tailed at its cut vertex
};

/// Wedge sum of g1 and g2, identifying c1 with c2. `rotation_merge` lists the
/// darts at the merged vertex in counterclockwise order and must cover every
/// dart at c1 and c2 exactly once. Vertices keep g1-order then g2-order
/// (minus c2); g1 darts keep their ids, g2 dart d becomes |darts(g1)| + d.
inline RibbonGraph wedge_sum(const RibbonGraph& g1, const RibbonGraph& g2, int c1, int c2,
                             const std::vector<MergeEntry>& rotation_merge) {
    if (c1 < 0 || c1 >= g1.vertex_count() || c2 < 0 || c2 >= g2.vertex_count())
        throw IncompatibleCutVertex("cut vertex out of range");

    const int shift = g1.dart_count();
    const int darts = g1.dart_count() + g2.dart_count();
    const int n = g1.vertex_count() + g2.vertex_count() - 1;

    std::vector<int> g2_vertex_map(g2.vertex_count(), -1);
    {
        int next = g1.vertex_count();
        for (int v = 0; v < g2.vertex_count(); ++v)
            g2_vertex_map[v] = (v == c2) ? c1 : next++;
    }

    std::vector<int> alpha(darts, -1), sigma(darts, -1), dart_vertex(darts, -1);
    for (int d = 0; d < g1.dart_count(); ++d) {
        alpha[d] = g1.alpha(d);
        dart_vertex[d] = g1.vertex_of(d);
        if (g1.vertex_of(d) != c1) sigma[d] = g1.sigma(d);
    }
    for (int d = 0; d < g2.dart_count(); ++d) {
        alpha[shift + d] = shift + g2.alpha(d);
        dart_vertex[shift + d] = g2_vertex_map[g2.vertex_of(d)];
        if (g2.vertex_of(d) != c2) sigma[shift + d] = shift + g2.sigma(d);
    }

    // Rotation at the merged vertex comes from the interleaving.
    std::multiset<int> expected, given;
    for (int d : g1.darts_at(c1)) expected.insert(d);
    for (int d : g2.darts_at(c2)) expected.insert(shift + d);
    std::vector<int> cycle;
    for (const auto& m : rotation_merge) {
        if (m.part != 1 && m.part != 2) throw IncompatibleCutVertex("merge entry part must be 1 or 2");
        const RibbonGraph& part = (m.part == 1) ? g1 : g2;
        const int cv = (m.part == 1) ? c1 : c2;
        if (m.dart < 0 || m.dart >= part.dart_count() || part.vertex_of(m.dart) != cv)
            throw IncompatibleCutVertex("merge entry dart is not at the cut vertex");
        cycle.push_back(m.part == 1 ? m.dart : shift + m.dart);
        given.insert(cycle.back());
    }
    if (expected != given)
        throw IncompatibleCutVertex("merge must list every dart at the cut vertex exactly once");
    for (size_t i = 0; i < cycle.size(); ++i) sigma[cycle[i]] = cycle[(i + 1) % cycle.size()];

    std::vector<std::string> labels = g1.labels();
    for (int v = 0; v < g2.vertex_count(); ++v)
        if (v != c2) labels.push_back(g2.label(v));

    return build_ribbon_graph(n, alpha, sigma, dart_vertex, labels);
}

/// Merge order that reproduces g's rotation at the split's cut vertex.
inline std::vector<MergeEntry> merge_order_from(const RibbonGraph& g, const WedgeSplit& split) {
    std::vector<MergeEntry> merge;
    for (int d : g.darts_at(split.cut_vertex))
        merge.push_back(MergeEntry{split.dart_part[d], split.dart_to_part_id[d]});
    return merge;
}

/// Reassembles the split. The result is g up to the deterministic dart
/// renumbering (g1 darts first, then g2 darts, each order-preserving).
inline RibbonGraph wedge_reassemble(const RibbonGraph& g, const WedgeSplit& split) {
    return wedge_sum(split.g1.graph, split.g2.graph, split.g1.cut_vertex, split.g2.cut_vertex,
                     merge_order_from(g, split));
}

} // namespace torsor_lab
