#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "torsor_lab/ribbon_graph.hpp"

namespace torsor_lab {

/// Integer formal sum of vertices, indexed by vertex id.
struct Divisor {
    std::vector<long long> coeffs;

    Divisor() = default;
    explicit Divisor(int vertex_count) : coeffs(vertex_count, 0) {}
    explicit Divisor(std::vector<long long> c) : coeffs(std::move(c)) {}

    static Divisor unit(int vertex_count, int v) {
        Divisor d(vertex_count);
        d.coeffs[v] = 1;
        return d;
    }

    long long& operator[](int v) { return coeffs[v]; }
    long long operator[](int v) const { return coeffs[v]; }
    int size() const { return static_cast<int>(coeffs.size()); }

    long long degree() const {
        long long sum = 0;
        for (long long c : coeffs) sum += c;
        return sum;
    }
    bool is_zero() const {
        for (long long c : coeffs)
            if (c != 0) return false;
        return true;
    }

    Divisor& operator+=(const Divisor& o) {
        for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
    Divisor& operator-=(const Divisor& o) {
        for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
        return *this;
    }
    friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
    friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
    friend Divisor operator*(long long k, Divisor a) {
        for (auto& c : a.coeffs) c *= k;
        return a;
    }
    friend Divisor operator-(Divisor a) {
        for (auto& c : a.coeffs) c = -c;
        return a;
    }
    bool operator==(const Divisor& o) const { return coeffs == o.coeffs; }
    bool operator!=(const Divisor& o) const { return coeffs != o.coeffs; }
};

/// Boundary of a dart: (head) - (tail). Zero for loop darts.
inline Divisor boundary(const RibbonGraph& g, int dart) {
    Divisor d(g.vertex_count());
    d[g.head(dart)] += 1;
    d[g.tail(dart)] -= 1;
    return d;
}

/// Laplacian column of v: deg(v)(v) - sum of neighbors with multiplicity,
/// loops ignored. Generates Prin(G) as v ranges over the vertices.
inline Divisor laplacian_column(const RibbonGraph& g, int v) {
    Divisor d(g.vertex_count());
    for (int e : g.edge_ids()) {
        auto [a, b] = g.edge_endpoints(e);
        if (a == b) continue;
        if (a == v || b == v) {
            d[v] += 1;
            d[a == v ? b : a] -= 1;
        }
    }
    return d;
}

/// Subset of darts with at most one dart per edge.
struct PartialOrientation {
    std::vector<int> darts;

    PartialOrientation() = default;
    explicit PartialOrientation(std::vector<int> d) : darts(std::move(d)) {}
};

inline void validate_partial_orientation(const RibbonGraph& g, const PartialOrientation& b) {
    std::set<int> edges;
    for (int d : b.darts) {
        if (d < 0 || d >= g.dart_count()) throw InputError("orientation dart out of range");
        if (!edges.insert(g.edge_of(d)).second)
            throw InputError("partial orientation uses one edge twice");
    }
}

inline Divisor sum_boundaries(const RibbonGraph& g, const PartialOrientation& b) {
    validate_partial_orientation(g, b);
    Divisor d(g.vertex_count());
    for (int dart : b.darts) {
        d[g.head(dart)] += 1;
        d[g.tail(dart)] -= 1;
    }
    return d;
}

inline bool has_directed_cycle(const RibbonGraph& g, const PartialOrientation& b) {
    for (int dart : b.darts)
        if (g.head(dart) == g.tail(dart)) return true; // oriented loop
    std::vector<std::vector<int>> out(g.vertex_count());
    for (int dart : b.darts) out[g.tail(dart)].push_back(g.head(dart));
    std::vector<int> color(g.vertex_count(), 0);
    std::function<bool(int)> dfs = [&](int v) {
        color[v] = 1;
        for (int w : out[v]) {
            if (color[w] == 1) return true;
            if (color[w] == 0 && dfs(w)) return true;
        }
        color[v] = 2;
        return false;
    };
    for (int v = 0; v < g.vertex_count(); ++v)
        if (color[v] == 0 && dfs(v)) return true;
    return false;
}

/// All edges across a vertex bipartition, oriented from the source side.
struct DirectedCut {
    std::vector<int> darts;       // oriented source -> sink side
    std::vector<int> source_side; // the vertex set S
};

/// Partitions B into directed cuts of g, or nullopt when impossible.
/// Requires B acyclic (throws ContainsDirectedCycle otherwise). Brute force
/// over vertex bipartitions with backtracking; graphs are desk scale.
inline std::optional<std::vector<DirectedCut>> directed_cut_decomposition(
    const RibbonGraph& g, const PartialOrientation& b) {
    validate_partial_orientation(g, b);
    if (has_directed_cycle(g, b))
        throw ContainsDirectedCycle("partial orientation contains a directed cycle");

    const int n = g.vertex_count();
    if (n > 20) throw InputError("directed cut search is limited to small graphs");

    std::vector<int> b_darts = b.darts;
    std::sort(b_darts.begin(), b_darts.end());
    const int k = static_cast<int>(b_darts.size());
    std::vector<int> dart_of_edge(g.dart_count(), -1), index_of_edge(g.dart_count(), -1);
    for (int i = 0; i < k; ++i) {
        dart_of_edge[g.edge_of(b_darts[i])] = b_darts[i];
        index_of_edge[g.edge_of(b_darts[i])] = i;
    }

    std::set<uint32_t> dead; // remaining-index masks known unsolvable
    std::vector<DirectedCut> cuts;

    std::function<bool(uint32_t)> solve = [&](uint32_t remaining) -> bool {
        if (remaining == 0) return true;
        if (dead.count(remaining)) return false;
        for (uint32_t s = 1; s + 1 < (1u << n); ++s) {
            DirectedCut cut;
            bool ok = true;
            for (int e : g.edge_ids()) {
                auto [u, v] = g.edge_endpoints(e);
                const bool iu = (s >> u) & 1u, iv = (s >> v) & 1u;
                if (iu == iv) continue;
                const int idx = index_of_edge[e];
                if (idx < 0 || !((remaining >> idx) & 1u)) {
                    ok = false;
                    break;
                }
                const int dart = dart_of_edge[e];
                if (!((s >> g.tail(dart)) & 1u)) { // must leave S
                    ok = false;
                    break;
                }
                cut.darts.push_back(dart);
            }
            if (!ok || cut.darts.empty()) continue;
            uint32_t next = remaining;
            for (int dart : cut.darts) next &= ~(1u << index_of_edge[g.edge_of(dart)]);
            for (int v = 0; v < n; ++v)
                if ((s >> v) & 1u) cut.source_side.push_back(v);
            cuts.push_back(std::move(cut));
            if (solve(next)) return true;
            cuts.pop_back();
        }
        dead.insert(remaining);
        return false;
    };

    if (k == 0) return std::vector<DirectedCut>{};
    if (!solve((k == 32) ? 0xffffffffu : ((1u << k) - 1))) return std::nullopt;
    return cuts;
}

} // namespace torsor_lab
