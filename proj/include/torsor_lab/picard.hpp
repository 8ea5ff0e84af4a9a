#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "torsor_lab/divisor.hpp"
#include "torsor_lab/integer_matrix.hpp"
#include "torsor_lab/ribbon_graph.hpp"
#include "torsor_lab/wedge.hpp"

namespace torsor_lab {

/// Reduced Laplacian with row/column of q removed; loops ignored.
inline IntMatrix reduced_laplacian(const RibbonGraph& g, int q) {
    const int n = g.vertex_count();
    std::vector<int> index(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v)
        if (v != q) index[v] = next++;
    IntMatrix m(n - 1, n - 1);
    for (int e : g.edge_ids()) {
        auto [u, v] = g.edge_endpoints(e);
        if (u == v) continue;
        if (u != q) m.at(index[u], index[u]) += 1;
        if (v != q) m.at(index[v], index[v]) += 1;
        if (u != q && v != q) {
            m.at(index[u], index[v]) -= 1;
            m.at(index[v], index[u]) -= 1;
        }
    }
    return m;
}

/// Smith data of the reduced Laplacian at q. Residues of divisors against the
/// diagonal give the canonical Pic form.
struct SnfData {
    IntMatrix u, s, w;
    std::vector<long long> diagonal; // invariant factors, each >= 1
    int base_vertex = 0;
    BigInt group_order = 1; // product of invariant factors = |Pic0|

    // Fast path: U demoted to int64 when entries are small enough that
    // residue computation cannot overflow.
    bool fits64 = false;
    std::vector<long long> u64;
    long long max_u_abs = 0;
};

inline const SnfData& snf_data(const RibbonGraph& g, int q) {
    auto ptr = g.derived_cache().get_or_compute<SnfData>(0, q, [&]() {
        SnfData d;
        d.base_vertex = q;
        SnfResult r = smith_normal_form(reduced_laplacian(g, q));
        d.u = std::move(r.u);
        d.s = std::move(r.s);
        d.w = std::move(r.w);
        for (const BigInt& f : r.diagonal) {
            if (f == 0) throw InvariantViolation("reduced Laplacian is singular");
            if (f > (1ll << 60)) throw InputError("invariant factor exceeds supported range");
            d.diagonal.push_back(f.convert_to<long long>());
            d.group_order *= f;
        }
        d.fits64 = true;
        const long long limit = 1ll << 30;
        for (const BigInt& x : d.u.a) {
            if (abs(x) >= limit) {
                d.fits64 = false;
                break;
            }
        }
        if (d.fits64) {
            for (const BigInt& x : d.u.a) {
                long long v = x.convert_to<long long>();
                d.u64.push_back(v);
                d.max_u_abs = std::max(d.max_u_abs, std::abs(v));
            }
        }
        return d;
    });
    // The cache keeps the pointer alive for the graph's lifetime.
    return *ptr;
}

/// Number of spanning trees = |Pic0| via the invariant factors.
inline BigInt picard_group_order(const RibbonGraph& g) {
    if (g.vertex_count() == 1) return 1;
    return snf_data(g, 0).group_order;
}

/// Canonical form of a divisor class: residues of the q-deleted coordinate
/// vector under U, taken modulo the invariant factors. Divisors of equal
/// degree are linearly equivalent iff their PicClasses are equal.
struct PicClass {
    int base_vertex = 0;
    long long degree = 0;
    std::vector<long long> residues;

    bool is_zero() const {
        for (long long r : residues)
            if (r != 0) return false;
        return true;
    }
    bool operator==(const PicClass& o) const {
        return base_vertex == o.base_vertex && degree == o.degree && residues == o.residues;
    }
    bool operator!=(const PicClass& o) const { return !(*this == o); }
    bool operator<(const PicClass& o) const {
        if (degree != o.degree) return degree < o.degree;
        if (base_vertex != o.base_vertex) return base_vertex < o.base_vertex;
        return residues < o.residues;
    }
};

inline PicClass pic_class(const RibbonGraph& g, const Divisor& d, int q = 0) {
    if (d.size() != g.vertex_count()) throw InputError("divisor size mismatch");
    PicClass cls;
    cls.base_vertex = q;
    cls.degree = d.degree();
    if (g.vertex_count() == 1) return cls;

    const SnfData& snf = snf_data(g, q);
    const int dim = g.vertex_count() - 1;
    std::vector<long long> v;
    v.reserve(dim);
    for (int w = 0; w < g.vertex_count(); ++w)
        if (w != q) v.push_back(d[w]);

    cls.residues.resize(dim);
    long long coeff_abs = 0;
    for (long long x : v) coeff_abs = std::max(coeff_abs, std::abs(x));
    const bool fast = snf.fits64 &&
                      static_cast<double>(dim) * static_cast<double>(std::max(snf.max_u_abs, 1ll)) *
                              static_cast<double>(std::max(coeff_abs, 1ll)) <
                          4.0e18;
    for (int i = 0; i < dim; ++i) {
        const long long m = snf.diagonal[i];
        if (fast) {
            long long acc = 0;
            const long long* row = snf.u64.data() + static_cast<size_t>(i) * dim;
            for (int j = 0; j < dim; ++j) acc += row[j] * v[j];
            cls.residues[i] = ((acc % m) + m) % m;
        } else {
            BigInt acc = 0;
            for (int j = 0; j < dim; ++j) acc += snf.u.at(i, j) * v[j];
            BigInt r = acc % m;
            if (r < 0) r += m;
            cls.residues[i] = r.convert_to<long long>();
        }
    }
    return cls;
}

inline PicClass class_add(const RibbonGraph& g, const PicClass& a, const PicClass& b) {
    if (a.base_vertex != b.base_vertex) throw InputError("classes use different base vertices");
    const SnfData& snf = snf_data(g, a.base_vertex);
    PicClass r;
    r.base_vertex = a.base_vertex;
    r.degree = a.degree + b.degree;
    r.residues.resize(a.residues.size());
    for (size_t i = 0; i < a.residues.size(); ++i)
        r.residues[i] = (a.residues[i] + b.residues[i]) % snf.diagonal[i];
    return r;
}

inline PicClass class_sub(const RibbonGraph& g, const PicClass& a, const PicClass& b) {
    if (a.base_vertex != b.base_vertex) throw InputError("classes use different base vertices");
    const SnfData& snf = snf_data(g, a.base_vertex);
    PicClass r;
    r.base_vertex = a.base_vertex;
    r.degree = a.degree - b.degree;
    r.residues.resize(a.residues.size());
    for (size_t i = 0; i < a.residues.size(); ++i) {
        long long m = snf.diagonal[i];
        r.residues[i] = ((a.residues[i] - b.residues[i]) % m + m) % m;
    }
    return r;
}

/// Order of a degree-0 class in Pic0.
inline long long class_order(const RibbonGraph& g, const PicClass& cls) {
    if (cls.degree != 0) throw DegreeMismatch("class order requires degree 0");
    if (g.vertex_count() == 1) return 1;
    const SnfData& snf = snf_data(g, cls.base_vertex);
    long long ord = 1;
    for (size_t i = 0; i < cls.residues.size(); ++i) {
        long long d = snf.diagonal[i];
        long long k = d / std::gcd(d, cls.residues[i]);
        ord = std::lcm(ord, k);
    }
    return ord;
}

inline bool linearly_equivalent(const RibbonGraph& g, const Divisor& a, const Divisor& b,
                                int q = 0) {
    if (a.degree() != b.degree())
        throw DegreeMismatch("divisors of different degree are never compared");
    return pic_class(g, a, q) == pic_class(g, b, q);
}

inline bool is_principal(const RibbonGraph& g, const Divisor& d, int q = 0) {
    if (d.degree() != 0) return false;
    return pic_class(g, d, q).is_zero();
}

/// Unique split D = D1 + D2 with Di of degree 0 supported on the parts,
/// using the free basis {(v) - (c)}.
inline std::pair<Divisor, Divisor> pic_split(const RibbonGraph& g, const WedgeSplit& split,
                                             const Divisor& d) {
    if (d.degree() != 0) throw DegreeMismatch("pic_split needs a degree-0 divisor");
    if (d.size() != g.vertex_count()) throw InputError("divisor size mismatch");
    auto make_part = [&](const WedgePart& part) {
        Divisor out(part.graph.vertex_count());
        long long sum = 0;
        for (int pv = 0; pv < part.graph.vertex_count(); ++pv) {
            if (pv == part.cut_vertex) continue;
            out[pv] = d[part.vertex_to_g[pv]];
            sum += out[pv];
        }
        out[part.cut_vertex] = -sum;
        return out;
    };
    return {make_part(split.g1), make_part(split.g2)};
}

} // namespace torsor_lab
