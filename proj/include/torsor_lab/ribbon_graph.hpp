#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "torsor_lab/errors.hpp"

namespace torsor_lab {

namespace detail {

/// Per-graph memo for derived data (Smith forms, ...). Shared between copies
/// of an immutable graph; initialization is guarded so concurrent first use
/// is safe and idempotent.
struct DerivedCache {
    std::mutex mutex;
    std::map<std::pair<int, int>, std::shared_ptr<const void>> slots;

    template <typename T, typename Fn>
    std::shared_ptr<const T> get_or_compute(int kind, int key, Fn&& compute) {
        std::lock_guard<std::mutex> lock(mutex);
        auto& slot = slots[{kind, key}];
        if (!slot) slot = std::shared_ptr<const void>(new T(compute()),
                                                      [](const void* p) { delete static_cast<const T*>(p); });
        return std::static_pointer_cast<const T>(slot);
    }
};

} // namespace detail

/// A dart (half-edge). Darts are plain integer ids everywhere; this struct
/// exists for places that want the (id, tail vertex) pair spelled out.
struct Dart {
    int id = -1;
    int vertex = -1;
};

/// Edge subset forming a spanning tree. Edge ids are always kept sorted.
struct SpanningTree {
    std::vector<int> edges;

    SpanningTree() = default;
    explicit SpanningTree(std::vector<int> e) : edges(std::move(e)) {
        std::sort(edges.begin(), edges.end());
    }

    bool operator==(const SpanningTree& o) const { return edges == o.edges; }
    bool operator!=(const SpanningTree& o) const { return edges != o.edges; }
    bool operator<(const SpanningTree& o) const { return edges < o.edges; }

    bool contains(int edge) const {
        return std::binary_search(edges.begin(), edges.end(), edge);
    }
};

namespace detail {

class DisjointSet {
public:
    explicit DisjointSet(int n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

inline bool is_permutation_vector(const std::vector<int>& p) {
    std::vector<char> seen(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

} // namespace detail

/// Dart-based combinatorial map: a fixed-point-free involution `alpha` pairing
/// the two darts of each edge, and a rotation `sigma` whose cycles are the
/// counterclockwise dart orders around the vertices. Immutable once built.
///
/// Edge ids are the smaller dart id of the alpha orbit, so an edge id is also
/// a dart id and `alpha(e)` is the opposite dart of edge `e`.
class RibbonGraph {
public:
    RibbonGraph() = default;

    int vertex_count() const { return n_; }
    int dart_count() const { return static_cast<int>(alpha_.size()); }
    int edge_count() const { return dart_count() / 2; }

    int alpha(int d) const { return alpha_[d]; }
    int sigma(int d) const { return sigma_[d]; }
    int vertex_of(int d) const { return dart_vertex_[d]; }
    int tail(int d) const { return dart_vertex_[d]; }
    int head(int d) const { return dart_vertex_[alpha_[d]]; }
    int edge_of(int d) const { return std::min(d, alpha_[d]); }
    Dart dart(int d) const { return Dart{d, dart_vertex_[d]}; }

    /// Sorted list of edge ids (the lower dart of each edge).
    const std::vector<int>& edge_ids() const { return edge_ids_; }
    /// Position of an edge id in edge_ids(); -1 if not an edge id.
    int edge_index(int edge) const {
        auto it = std::lower_bound(edge_ids_.begin(), edge_ids_.end(), edge);
        if (it == edge_ids_.end() || *it != edge) return -1;
        return static_cast<int>(it - edge_ids_.begin());
    }
    std::pair<int, int> edge_darts(int edge) const { return {edge, alpha_[edge]}; }
    std::pair<int, int> edge_endpoints(int edge) const {
        return {dart_vertex_[edge], dart_vertex_[alpha_[edge]]};
    }
    bool is_loop(int edge) const {
        return dart_vertex_[edge] == dart_vertex_[alpha_[edge]];
    }

    /// Rotation at v as a dart list, anchored at the lowest dart id at v.
    const std::vector<int>& darts_at(int v) const { return rotations_[v]; }
    int degree(int v) const { return static_cast<int>(rotations_[v].size()); }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const { return labels_[v]; }
    int vertex_by_label(const std::string& name) const {
        for (int v = 0; v < n_; ++v)
            if (labels_[v] == name) return v;
        return -1;
    }

    /// The dart at `u` toward `v` that comes first in u's rotation; -1 if none.
    int dart_toward(int u, int v) const {
        for (int d : rotations_[u])
            if (head(d) == v) return d;
        return -1;
    }

    bool simple() const { return simple_; }

    bool operator==(const RibbonGraph& o) const {
        return n_ == o.n_ && dart_vertex_ == o.dart_vertex_ && alpha_ == o.alpha_ &&
               sigma_ == o.sigma_ && labels_ == o.labels_;
    }
    bool operator!=(const RibbonGraph& o) const { return !(*this == o); }

    detail::DerivedCache& derived_cache() const { return *cache_; }

    friend RibbonGraph build_ribbon_graph(int, const std::vector<int>&,
                                          const std::vector<int>&,
                                          const std::vector<int>&,
                                          std::vector<std::string>);

private:
    int n_ = 0;
    std::vector<int> dart_vertex_;
    std::vector<int> alpha_;
    std::vector<int> sigma_;
    std::vector<std::string> labels_;

    // Derived.
    std::vector<int> edge_ids_;
    std::vector<std::vector<int>> rotations_;
    bool simple_ = false;
    std::shared_ptr<detail::DerivedCache> cache_ = std::make_shared<detail::DerivedCache>();

    void finish_and_validate();
};

/// Builds a validated ribbon graph from explicit permutations and the
/// dart -> vertex assignment. Throws NotInvolution, CrossVertexRotation, or
/// Disconnected naming the violated invariant.
inline RibbonGraph build_ribbon_graph(int vertex_count, const std::vector<int>& alpha,
                                      const std::vector<int>& sigma,
                                      const std::vector<int>& dart_vertex,
                                      std::vector<std::string> labels = {}) {
    RibbonGraph g;
    g.n_ = vertex_count;
    g.alpha_ = alpha;
    g.sigma_ = sigma;
    g.dart_vertex_ = dart_vertex;
    g.labels_ = std::move(labels);
    g.finish_and_validate();
    return g;
}

/// Overload deriving the dart -> vertex assignment from sigma's orbits; orbits
/// are assigned vertex ids in order of their smallest dart.
inline RibbonGraph build_ribbon_graph(int vertex_count, const std::vector<int>& alpha,
                                      const std::vector<int>& sigma,
                                      std::vector<std::string> labels = {}) {
    if (!detail::is_permutation_vector(sigma))
        throw CrossVertexRotation("sigma is not a permutation of the darts");
    std::vector<int> dart_vertex(sigma.size(), -1);
    int next = 0;
    for (int d = 0; d < static_cast<int>(sigma.size()); ++d) {
        if (dart_vertex[d] != -1) continue;
        int v = next++;
        int cur = d;
        do {
            dart_vertex[cur] = v;
            cur = sigma[cur];
        } while (cur != d);
    }
    if (next != vertex_count)
        throw CrossVertexRotation("sigma orbit count does not match vertex count");
    return build_ribbon_graph(vertex_count, alpha, sigma, dart_vertex, std::move(labels));
}

inline void RibbonGraph::finish_and_validate() {
    const int darts = dart_count();
    if (n_ < 1) throw Disconnected("graph needs at least one vertex");
    if (darts % 2 != 0) throw NotInvolution("odd number of darts");
    if (static_cast<int>(sigma_.size()) != darts || static_cast<int>(dart_vertex_.size()) != darts)
        throw CrossVertexRotation("alpha, sigma, and dart-vertex sizes differ");
    if (labels_.empty()) {
        labels_.reserve(n_);
        for (int v = 0; v < n_; ++v) labels_.push_back(std::to_string(v));
    }
    if (static_cast<int>(labels_.size()) != n_)
        throw InputError("label count does not match vertex count");

    if (!detail::is_permutation_vector(alpha_))
        throw NotInvolution("alpha is not a permutation of the darts");
    for (int d = 0; d < darts; ++d) {
        if (alpha_[d] == d) throw NotInvolution("alpha has a fixed point");
        if (alpha_[alpha_[d]] != d) throw NotInvolution("alpha is not an involution");
    }
    if (!detail::is_permutation_vector(sigma_))
        throw CrossVertexRotation("sigma is not a permutation of the darts");
    for (int d = 0; d < darts; ++d) {
        int v = dart_vertex_[d];
        if (v < 0 || v >= n_) throw CrossVertexRotation("dart assigned to unknown vertex");
        if (dart_vertex_[sigma_[d]] != v)
            throw CrossVertexRotation("sigma maps a dart to another vertex");
    }

    // Each vertex's darts must form a single sigma orbit, anchored for output
    // at the lowest dart id.
    rotations_.assign(n_, {});
    std::vector<int> min_dart(n_, -1);
    for (int d = 0; d < darts; ++d) {
        int v = dart_vertex_[d];
        if (min_dart[v] == -1) min_dart[v] = d;
    }
    std::vector<int> orbit_size(n_, 0);
    for (int v = 0; v < n_; ++v) {
        if (min_dart[v] == -1) continue;
        int cur = min_dart[v];
        do {
            rotations_[v].push_back(cur);
            cur = sigma_[cur];
        } while (cur != min_dart[v]);
    }
    for (int d = 0; d < darts; ++d) orbit_size[dart_vertex_[d]]++;
    for (int v = 0; v < n_; ++v)
        if (static_cast<int>(rotations_[v].size()) != orbit_size[v])
            throw CrossVertexRotation("darts at one vertex split into several sigma cycles");

    // Connectivity over alpha-edges.
    detail::DisjointSet dsu(n_);
    int components = n_;
    for (int d = 0; d < darts; ++d)
        if (dsu.unite(dart_vertex_[d], dart_vertex_[alpha_[d]])) --components;
    if (components != 1) throw Disconnected("graph is not connected");

    edge_ids_.clear();
    for (int d = 0; d < darts; ++d)
        if (d < alpha_[d]) edge_ids_.push_back(d);

    simple_ = true;
    std::vector<std::pair<int, int>> pairs;
    for (int e : edge_ids_) {
        auto [u, v] = edge_endpoints(e);
        if (u == v) simple_ = false;
        pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) simple_ = false;
}

/// Builds a ribbon graph from per-vertex counterclockwise dart lists plus
/// alpha pairs. The first entry of each list is an arbitrary anchor.
inline RibbonGraph from_rotations(const std::vector<std::string>& labels,
                                  const std::vector<std::vector<int>>& rotation_lists,
                                  const std::vector<std::pair<int, int>>& alpha_pairs) {
    int darts = 0;
    for (const auto& r : rotation_lists) darts += static_cast<int>(r.size());
    std::vector<int> alpha(darts, -1), sigma(darts, -1), dart_vertex(darts, -1);
    for (int v = 0; v < static_cast<int>(rotation_lists.size()); ++v) {
        const auto& r = rotation_lists[v];
        for (size_t i = 0; i < r.size(); ++i) {
            int d = r[i];
            if (d < 0 || d >= darts || dart_vertex[d] != -1)
                throw CrossVertexRotation("bad dart id in rotation list");
            dart_vertex[d] = v;
            sigma[d] = r[(i + 1) % r.size()];
        }
    }
    for (auto [a, b] : alpha_pairs) {
        if (a < 0 || b < 0 || a >= darts || b >= darts || a == b || alpha[a] != -1 || alpha[b] != -1)
            throw NotInvolution("alpha pairs must form disjoint dart pairs");
        alpha[a] = b;
        alpha[b] = a;
    }
    return build_ribbon_graph(static_cast<int>(rotation_lists.size()), alpha, sigma,
                              dart_vertex, labels);
}

/// Builds a simple ribbon graph from counterclockwise neighbor lists, one per
/// vertex. Darts are numbered in list order. Rejects loops and multi-edges.
inline RibbonGraph from_neighbor_lists(const std::vector<std::string>& labels,
                                       const std::vector<std::vector<int>>& neighbors) {
    const int n = static_cast<int>(neighbors.size());
    std::vector<std::vector<int>> rotations(n);
    std::vector<std::pair<int, int>> incidence; // dart -> (tail, head)
    for (int v = 0; v < n; ++v) {
        for (int u : neighbors[v]) {
            if (u < 0 || u >= n) throw InputError("neighbor out of range");
            if (u == v) throw InputError("loops are not allowed in neighbor-list form");
            rotations[v].push_back(static_cast<int>(incidence.size()));
            incidence.emplace_back(v, u);
        }
    }
    std::vector<std::pair<int, int>> alpha_pairs;
    std::vector<int> match(incidence.size(), -1);
    for (int d = 0; d < static_cast<int>(incidence.size()); ++d) {
        if (match[d] != -1) continue;
        auto [v, u] = incidence[d];
        int partner = -1;
        for (int e = d + 1; e < static_cast<int>(incidence.size()); ++e) {
            if (match[e] == -1 && incidence[e] == std::make_pair(u, v)) {
                if (partner != -1) throw InputError("multi-edge in neighbor-list form");
                partner = e;
            }
        }
        if (partner == -1) throw InputError("edge mentioned from only one side");
        for (int e = d + 1; e < static_cast<int>(incidence.size()); ++e)
            if (e != partner && match[e] == -1 && incidence[e] == incidence[d])
                throw InputError("multi-edge in neighbor-list form");
        match[d] = partner;
        match[partner] = d;
        alpha_pairs.emplace_back(d, partner);
    }
    return from_rotations(labels, rotations, alpha_pairs);
}

/// Face orbits of phi = sigma . alpha, each started at its lowest dart,
/// listed in increasing order of that dart.
inline std::vector<std::vector<int>> faces(const RibbonGraph& g) {
    std::vector<std::vector<int>> result;
    std::vector<char> seen(g.dart_count(), 0);
    for (int d = 0; d < g.dart_count(); ++d) {
        if (seen[d]) continue;
        std::vector<int> face;
        int cur = d;
        do {
            seen[cur] = 1;
            face.push_back(cur);
            cur = g.sigma(g.alpha(cur));
        } while (cur != d);
        result.push_back(std::move(face));
    }
    return result;
}

/// Genus of the embedding surface: (2 - V + E - F) / 2. A graph with no
/// edges sits on the sphere with a single face.
inline int surface_genus(const RibbonGraph& g) {
    if (g.dart_count() == 0) return 0;
    const int f = static_cast<int>(faces(g).size());
    const int euler = g.vertex_count() - g.edge_count() + f;
    const int doubled = 2 - euler;
    if (doubled < 0 || doubled % 2 != 0)
        throw InvariantViolation("Euler characteristic is not of the form 2 - 2g");
    return doubled / 2;
}

inline bool is_planar_ribbon(const RibbonGraph& g) { return surface_genus(g) == 0; }

inline bool is_spanning_tree(const RibbonGraph& g, const SpanningTree& t) {
    if (static_cast<int>(t.edges.size()) != g.vertex_count() - 1) return false;
    detail::DisjointSet dsu(g.vertex_count());
    int prev = -1;
    for (int e : t.edges) {
        if (e == prev) return false;
        prev = e;
        if (g.edge_index(e) < 0) return false;
        auto [u, v] = g.edge_endpoints(e);
        if (!dsu.unite(u, v)) return false;
    }
    return true;
}

inline void require_spanning_tree(const RibbonGraph& g, const SpanningTree& t) {
    if (!is_spanning_tree(g, t)) throw NotASpanningTree("edge set is not a spanning tree");
}

/// Enumerates spanning trees in lexicographic order of their sorted edge-id
/// sequences. Backtracking over edges in id order; desk scale only.
inline void for_each_spanning_tree(const RibbonGraph& g,
                                   const std::function<void(const SpanningTree&)>& fn) {
    const auto& edges = g.edge_ids();
    const int need = g.vertex_count() - 1;
    if (need == 0) {
        fn(SpanningTree{});
        return;
    }
    std::vector<int> chosen;
    // Union-find with undo so backtracking is cheap.
    std::vector<int> parent(g.vertex_count()), rank_of(g.vertex_count(), 0);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::pair<int, int>> undo; // (child root attached, previous rank bump on parent)

    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    auto unite = [&](int a, int b) -> bool {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_of[a] < rank_of[b]) std::swap(a, b);
        parent[b] = a;
        int bump = 0;
        if (rank_of[a] == rank_of[b]) {
            rank_of[a]++;
            bump = 1;
        }
        undo.emplace_back(b, bump);
        return true;
    };
    auto rollback = [&]() {
        auto [b, bump] = undo.back();
        undo.pop_back();
        rank_of[parent[b]] -= bump;
        parent[b] = b;
    };

    std::function<void(int)> rec = [&](int idx) {
        if (static_cast<int>(chosen.size()) == need) {
            fn(SpanningTree{chosen});
            return;
        }
        const int remaining = static_cast<int>(edges.size()) - idx;
        if (remaining < need - static_cast<int>(chosen.size())) return;
        const int e = edges[idx];
        auto [u, v] = g.edge_endpoints(e);
        if (u != v && unite(u, v)) {
            chosen.push_back(e);
            rec(idx + 1);
            chosen.pop_back();
            rollback();
        }
        rec(idx + 1);
    };
    rec(0);
}

inline std::vector<SpanningTree> spanning_trees(const RibbonGraph& g) {
    std::vector<SpanningTree> result;
    for_each_spanning_tree(g, [&](const SpanningTree& t) { result.push_back(t); });
    return result;
}

} // namespace torsor_lab
