#pragma once

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "torsor_lab/bernardi.hpp"
#include "torsor_lab/decompose.hpp"
#include "torsor_lab/divisor.hpp"
#include "torsor_lab/picard.hpp"
#include "torsor_lab/ribbon_graph.hpp"
#include "torsor_lab/rotor.hpp"
#include "torsor_lab/torsor_check.hpp"

namespace torsor_lab {

struct EnumerationSpec {
    int max_vertices = 4;
    int max_edges = 8;
    bool simple_only = true;
    long long rotation_cap = 0; // skip graphs with more rotation systems; 0 = no cap
    int threads = 0;            // 0: TORSOR_LAB_THREADS env or hardware count
    bool lemma_suites = true;   // the per-lemma property checks
    std::string checkpoint_path;
    long long limit_graphs = 0; // process at most this many graphs per call; 0 = all

    bool operator==(const EnumerationSpec& o) const {
        return max_vertices == o.max_vertices && max_edges == o.max_edges &&
               simple_only == o.simple_only && rotation_cap == o.rotation_cap &&
               lemma_suites == o.lemma_suites;
    }
};

/// Which acceptance direction a violation falls under: the theorem itself
/// (agreement directions, classification, witnesses), the lemma-level
/// property suites, or basepoint (in)dependence.
enum class ViolationKind { Theorem, Property, Basepoint };

struct Violation {
    ViolationKind kind = ViolationKind::Theorem;
    std::string message;
};

struct EnumerationSummary {
    bool complete = false;
    long long graphs = 0;
    long long rotation_systems = 0;
    long long planar_agree = 0;
    long long nonplanar_disagree = 0;
    long long multigraph_exempt = 0;
    long long skipped_rotation_cap = 0;
    long long violations = 0;
    long long violations_theorem = 0;
    long long violations_property = 0;
    long long violations_basepoint = 0;
    std::vector<std::string> violation_details; // capped

    // property-suite counters
    long long matrix_tree_checks = 0;
    long long principal_identity_checks = 0;
    long long bijectivity_checks = 0;
    long long basepoint_shift_checks = 0;
    long long cut_decomposition_checks = 0;
    long long pic_split_checks = 0;
    long long lemma5_checks = 0;
    long long basepoint_independence_checks = 0;
    long long witnesses_prop_a = 0;
    long long witnesses_prop_b = 0;

    void add(const EnumerationSummary& o) {
        graphs += o.graphs;
        rotation_systems += o.rotation_systems;
        planar_agree += o.planar_agree;
        nonplanar_disagree += o.nonplanar_disagree;
        multigraph_exempt += o.multigraph_exempt;
        skipped_rotation_cap += o.skipped_rotation_cap;
        violations += o.violations;
        violations_theorem += o.violations_theorem;
        violations_property += o.violations_property;
        violations_basepoint += o.violations_basepoint;
        for (const auto& d : o.violation_details)
            if (violation_details.size() < 32) violation_details.push_back(d);
        matrix_tree_checks += o.matrix_tree_checks;
        principal_identity_checks += o.principal_identity_checks;
        bijectivity_checks += o.bijectivity_checks;
        basepoint_shift_checks += o.basepoint_shift_checks;
        cut_decomposition_checks += o.cut_decomposition_checks;
        pic_split_checks += o.pic_split_checks;
        lemma5_checks += o.lemma5_checks;
        basepoint_independence_checks += o.basepoint_independence_checks;
        witnesses_prop_a += o.witnesses_prop_a;
        witnesses_prop_b += o.witnesses_prop_b;
    }
};

/// One labeled multigraph from the stream: sorted edge list (u <= v allows
/// loops in multigraph mode).
struct GraphCandidate {
    int n = 1;
    std::vector<std::pair<int, int>> edges;
};

namespace detail {

inline bool candidate_connected(const GraphCandidate& c) {
    DisjointSet dsu(c.n);
    int components = c.n;
    for (auto [u, v] : c.edges)
        if (u != v && dsu.unite(u, v)) --components;
    return components == 1;
}

inline void enumerate_simple_graphs(int n, int max_edges, std::vector<GraphCandidate>& out) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    const int m = static_cast<int>(pairs.size());
    if (n == 1) {
        out.push_back(GraphCandidate{1, {}});
        return;
    }
    for (uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) > max_edges) continue;
        GraphCandidate cand;
        cand.n = n;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u) cand.edges.push_back(pairs[i]);
        if (static_cast<int>(cand.edges.size()) < n - 1) continue;
        if (!candidate_connected(cand)) continue;
        out.push_back(std::move(cand));
    }
}

inline void enumerate_multigraphs(int n, int max_edges, std::vector<GraphCandidate>& out) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v) pairs.emplace_back(u, v);
    std::vector<int> mult(pairs.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t idx, int used) {
        if (idx == pairs.size()) {
            GraphCandidate cand;
            cand.n = n;
            for (size_t i = 0; i < pairs.size(); ++i)
                for (int k = 0; k < mult[i]; ++k) cand.edges.push_back(pairs[i]);
            if (static_cast<int>(cand.edges.size()) < n - 1) return;
            if (!candidate_connected(cand)) return;
            out.push_back(std::move(cand));
            return;
        }
        for (int k = 0; used + k <= max_edges; ++k) {
            mult[idx] = k;
            rec(idx + 1, used + k);
        }
        mult[idx] = 0;
    };
    rec(0, 0);
}

inline long long rotation_system_count(const GraphCandidate& c) {
    std::vector<int> deg(c.n, 0);
    for (auto [u, v] : c.edges) {
        deg[u]++;
        deg[v]++;
    }
    long long total = 1;
    for (int v = 0; v < c.n; ++v) {
        for (int i = 2; i < deg[v]; ++i) {
            total *= i;
            if (total > (1ll << 40)) return total; // saturate
        }
    }
    return total;
}

inline std::string candidate_name(const GraphCandidate& c) {
    std::ostringstream os;
    os << "n=" << c.n << " edges=";
    for (auto [u, v] : c.edges) os << "(" << u << "," << v << ")";
    return os.str();
}

} // namespace detail

/// Deterministic graph stream: vertex counts ascending, then edge sets in
/// canonical order. No isomorphism reduction.
inline std::vector<GraphCandidate> enumerate_graphs(const EnumerationSpec& spec) {
    std::vector<GraphCandidate> out;
    for (int n = 1; n <= spec.max_vertices; ++n) {
        if (spec.simple_only)
            detail::enumerate_simple_graphs(n, spec.max_edges, out);
        else
            detail::enumerate_multigraphs(n, spec.max_edges, out);
    }
    return out;
}

namespace detail {

struct RotationOdometer {
    // anchored: first dart at each vertex stays put, the rest permute
    std::vector<std::vector<int>> heads;
    std::vector<std::vector<int>> tails;
    bool first = true;

    explicit RotationOdometer(const GraphCandidate& c) {
        std::vector<std::vector<int>> at(c.n);
        for (int i = 0; i < static_cast<int>(c.edges.size()); ++i) {
            at[c.edges[i].first].push_back(2 * i);
            at[c.edges[i].second].push_back(2 * i + 1);
        }
        heads.resize(c.n);
        tails.resize(c.n);
        for (int v = 0; v < c.n; ++v) {
            if (at[v].empty()) continue;
            heads[v] = {at[v][0]};
            tails[v] = std::vector<int>(at[v].begin() + 1, at[v].end());
        }
    }

    bool next(std::vector<std::vector<int>>& rotations) {
        if (!first) {
            size_t v = 0;
            while (v < tails.size() &&
                   !std::next_permutation(tails[v].begin(), tails[v].end())) {
                std::sort(tails[v].begin(), tails[v].end());
                ++v;
            }
            if (v == tails.size()) return false;
        }
        first = false;
        rotations.assign(heads.size(), {});
        for (size_t v = 0; v < heads.size(); ++v) {
            rotations[v] = heads[v];
            for (int d : tails[v]) rotations[v].push_back(d);
        }
        return true;
    }
};

inline RibbonGraph build_system(const GraphCandidate& c,
                                const std::vector<std::vector<int>>& rotations) {
    std::vector<std::pair<int, int>> alpha;
    for (int i = 0; i < static_cast<int>(c.edges.size()); ++i) alpha.emplace_back(2 * i, 2 * i + 1);
    std::vector<std::string> labels;
    for (int v = 0; v < c.n; ++v) labels.push_back(std::to_string(v));
    return from_rotations(labels, rotations, alpha);
}

using Perm = std::vector<int>;

inline Perm compose(const Perm& f, const Perm& g) { // (f . g)(t) = f[g[t]]
    Perm r(f.size());
    for (size_t t = 0; t < f.size(); ++t) r[t] = f[g[t]];
    return r;
}

inline Perm inverse(const Perm& f) {
    Perm r(f.size());
    for (size_t t = 0; t < f.size(); ++t) r[f[t]] = static_cast<int>(t);
    return r;
}

inline Perm identity_perm(int n) {
    Perm r(n);
    for (int i = 0; i < n; ++i) r[i] = i;
    return r;
}

inline Perm perm_power(Perm base, long long e) {
    Perm acc = identity_perm(static_cast<int>(base.size()));
    while (e > 0) {
        if (e & 1) acc = compose(base, acc);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

struct SystemContext {
    const RibbonGraph& g;
    std::vector<SpanningTree> trees;
    std::unordered_map<uint64_t, int> index_by_mask;
    std::vector<std::vector<Perm>> route; // route[y][x][t] = index of ((x)-(y))_y(trees[t])
    std::vector<std::vector<PicClass>> beta; // beta[y][t], basepoint canonical dart
    std::vector<std::vector<PicClass>> gen;  // gen[x][y] = class of (x)-(y)

    explicit SystemContext(const RibbonGraph& graph) : g(graph) {}

    uint64_t mask_of(const SpanningTree& t) const {
        uint64_t m = 0;
        for (int e : t.edges) m |= 1ull << e;
        return m;
    }

    void build() {
        const int n = g.vertex_count();
        trees = spanning_trees(g);
        for (int i = 0; i < static_cast<int>(trees.size()); ++i)
            index_by_mask.emplace(mask_of(trees[i]), i);
        const int tcount = static_cast<int>(trees.size());

        gen.assign(n, std::vector<PicClass>(n));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                gen[x][y] = pic_class(g, Divisor::unit(n, x) - Divisor::unit(n, y));

        route.assign(n, {});
        beta.assign(n, {});
        for (int y = 0; y < n; ++y) {
            route[y].assign(n, identity_perm(tcount));
            for (int x = 0; x < n; ++x) {
                if (x == y) continue;
                Perm& p = route[y][x];
                for (int t = 0; t < tcount; ++t)
                    p[t] = index_by_mask.at(mask_of(rotor_route(g, trees[t], x, y)));
            }
            if (n > 1) {
                const int e = canonical_dart_at(g, y);
                beta[y].reserve(tcount);
                for (int t = 0; t < tcount; ++t)
                    beta[y].push_back(pic_class(g, bernardi_divisor(g, trees[t], y, e)));
            }
        }
    }
};

} // namespace detail

/// Every per-system check of the verification harness; returns violation
/// messages (empty = clean) and updates the counters.
inline std::vector<Violation> check_rotation_system(const RibbonGraph& g, bool lemma_suites,
                                                    EnumerationSummary& counts) {
    std::vector<Violation> bad;
    if (g.dart_count() > 64) throw InputError("the verification harness handles at most 32 edges");
    const int n = g.vertex_count();
    const bool planar = is_planar_ribbon(g);
    const bool simple = g.simple();

    if (n == 1) {
        // One spanning tree (the empty set); both torsors are trivially equal.
        if (planar)
            counts.planar_agree += 1;
        else
            counts.multigraph_exempt += 1; // loop bouquets are never simple
        return bad;
    }

    detail::SystemContext ctx(g);
    ctx.build();
    const int tcount = static_cast<int>(ctx.trees.size());

    // Matrix-Tree: enumeration count == product of invariant factors.
    counts.matrix_tree_checks += 1;
    if (picard_group_order(g) != tcount) bad.push_back({ViolationKind::Property, "tree count != |Pic0|"});

    // Bijectivity of every Bernardi table (distinct classes per basepoint).
    for (int y = 0; y < n; ++y) {
        counts.bijectivity_checks += 1;
        std::set<PicClass> classes(ctx.beta[y].begin(), ctx.beta[y].end());
        if (static_cast<int>(classes.size()) != tcount)
            bad.push_back({ViolationKind::Property, "Bernardi classes collide at basepoint " + g.label(y)});
    }

    // Agreement via the criterion, per basepoint.
    bool all_agree = true;
    for (int y = 0; y < n; ++y) {
        bool agrees = true;
        for (int x = 0; x < n && agrees; ++x) {
            if (x == y) continue;
            for (int t = 0; t < tcount; ++t) {
                if (class_sub(g, ctx.beta[y][ctx.route[y][x][t]], ctx.beta[y][t]) !=
                    ctx.gen[x][y]) {
                    agrees = false;
                    break;
                }
            }
        }
        all_agree = all_agree && agrees;
    }

    if (planar) {
        if (!all_agree) bad.push_back({ViolationKind::Theorem, "planar system with disagreeing torsors"});
        counts.planar_agree += 1;
    } else if (simple) {
        if (all_agree)
            bad.push_back({ViolationKind::Theorem, "simple non-planar system where all torsors agree"});
        counts.nonplanar_disagree += 1;
        // Classification and a verified witness.
        try {
            HDecomposition dec = classify(g);
            if (dec.kind == HDecomposition::Kind::A) {
                witness_prop_A(g, dec);
                counts.witnesses_prop_a += 1;
            } else {
                witness_prop_B(g, dec);
                counts.witnesses_prop_b += 1;
                counts.lemma5_checks += 1;
                if (!lemma_l5_holds(dec))
                    bad.push_back({ViolationKind::Property, "lemma l5 failed on a simple kind-B G1"});
            }
        } catch (const Error& e) {
            bad.push_back({ViolationKind::Theorem, std::string("classification/witness failed: ") + e.what()});
        }
    } else {
        counts.multigraph_exempt += 1;
    }

    // Basepoint independence (action-level): planar systems must have all
    // rotor and Bernardi actions equal across basepoints; non-planar simple
    // systems must show a differing rotor pair.
    {
        counts.basepoint_independence_checks += 1;
        auto r_action = [&](int v, int x) { // action of (x)-(0) under r_v
            detail::Perm p = detail::identity_perm(tcount);
            if (x != v) p = ctx.route[v][x];
            if (0 != v) p = detail::compose(p, detail::inverse(ctx.route[v][0]));
            return p;
        };
        auto b_action = [&](int v, int x) {
            detail::Perm p(tcount);
            for (int t = 0; t < tcount; ++t) {
                PicClass target = class_add(g, ctx.beta[v][t], ctx.gen[x][0]);
                int found = -1;
                for (int u = 0; u < tcount; ++u)
                    if (ctx.beta[v][u] == target) {
                        found = u;
                        break;
                    }
                p[t] = found;
            }
            return p;
        };
        bool r_all_equal = true;
        for (int x = 1; x < n && r_all_equal; ++x) {
            detail::Perm first = r_action(0, x);
            for (int v = 1; v < n; ++v)
                if (r_action(v, x) != first) {
                    r_all_equal = false;
                    break;
                }
        }
        if (planar) {
            bool b_matches = true;
            for (int x = 1; x < n && b_matches; ++x) {
                detail::Perm first = r_action(0, x);
                for (int v = 0; v < n; ++v)
                    if (b_action(v, x) != first) {
                        b_matches = false;
                        break;
                    }
            }
            if (!r_all_equal || !b_matches)
                bad.push_back({ViolationKind::Basepoint, "planar system with basepoint-dependent actions"});
        } else if (simple && r_all_equal) {
            bad.push_back({ViolationKind::Basepoint, "non-planar system with basepoint-independent rotor actions"});
        }
    }

    if (lemma_suites) {
        // Principal divisors act trivially under both torsors: every firing,
        // every sink, every tree (via the route permutations).
        for (int x = 0; x < n; ++x) {
            Divisor fire = laplacian_column(g, x);
            if (!pic_class(g, fire).is_zero())
                bad.push_back({ViolationKind::Property, "Laplacian column has nonzero class"});
            for (int y = 0; y < n; ++y) {
                counts.principal_identity_checks += 1;
                detail::Perm total = detail::identity_perm(tcount);
                for (int z = 0; z < n; ++z) {
                    if (z == y || fire[z] == 0) continue;
                    long long k = class_order(g, ctx.gen[z][y]);
                    long long m = ((fire[z] % k) + k) % k;
                    total = detail::compose(detail::perm_power(ctx.route[y][z], m), total);
                }
                if (total != detail::identity_perm(tcount))
                    bad.push_back({ViolationKind::Property, "principal divisor acts nontrivially under rotor-routing"});
            }
        }

        // Basepoint-shift identity for every vertex, dart pair, and tree.
        for (int v = 0; v < n; ++v) {
            const auto& darts = g.darts_at(v);
            std::vector<std::vector<PicClass>> tour_cls(darts.size());
            for (size_t i = 0; i < darts.size(); ++i) {
                tour_cls[i].reserve(tcount);
                for (int t = 0; t < tcount; ++t)
                    tour_cls[i].push_back(
                        pic_class(g, bernardi_divisor(g, ctx.trees[t], v, darts[i])));
            }
            for (size_t i = 0; i < darts.size(); ++i)
                for (size_t j = 0; j < darts.size(); ++j) {
                    counts.basepoint_shift_checks += 1;
                    Divisor shift(n);
                    if (i != j)
                        for (int d = darts[i]; d != darts[j]; d = g.sigma(d))
                            shift += boundary(g, d);
                    PicClass shift_cls = pic_class(g, shift);
                    for (int t = 0; t < tcount; ++t) {
                        if (class_sub(g, tour_cls[j][t], tour_cls[i][t]) != shift_cls) {
                            bad.push_back({ViolationKind::Property, "basepoint-shift identity failed"});
                            break;
                        }
                    }
                }
        }
    }

    return bad;
}

/// Graph-level (ribbon-independent) suite: every acyclic partial orientation
/// with principal boundary decomposes into directed cuts, and decompositions
/// imply principal boundaries.
inline std::vector<Violation> check_cut_decomposition(const RibbonGraph& g,
                                                      EnumerationSummary& counts) {
    std::vector<Violation> bad;
    const int e = g.edge_count();
    if (e > 8) return bad;
    const auto& edges = g.edge_ids();
    long long total = 1;
    for (int i = 0; i < e; ++i) total *= 3;
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        std::vector<int> darts;
        for (int i = 0; i < e; ++i) {
            int pick = static_cast<int>(c % 3);
            c /= 3;
            if (pick == 1) darts.push_back(edges[i]);
            if (pick == 2) darts.push_back(g.alpha(edges[i]));
        }
        PartialOrientation b{darts};
        if (has_directed_cycle(g, b)) continue;
        counts.cut_decomposition_checks += 1;
        const bool principal = is_principal(g, sum_boundaries(g, b));
        auto cuts = directed_cut_decomposition(g, b);
        if (principal && !cuts.has_value()) {
            bad.push_back({ViolationKind::Property, "acyclic principal orientation failed to decompose into cuts"});
            break;
        }
        if (cuts.has_value() && !principal) {
            bad.push_back({ViolationKind::Property, "cut decomposition found for a non-principal orientation"});
            break;
        }
    }
    return bad;
}

namespace detail {

inline int resolve_threads(int requested) {
    int threads = requested;
    if (threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (const char* env = std::getenv("TORSOR_LAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) threads = std::min(threads, cap);
    }
    return threads;
}

inline nlohmann::json summary_to_json_impl(const EnumerationSummary& s) {
    nlohmann::json j;
    j["format"] = 1;
    j["complete"] = s.complete;
    j["graphs"] = s.graphs;
    j["rotation_systems"] = s.rotation_systems;
    j["planar_agree"] = s.planar_agree;
    j["nonplanar_disagree"] = s.nonplanar_disagree;
    j["multigraph_exempt"] = s.multigraph_exempt;
    j["skipped_rotation_cap"] = s.skipped_rotation_cap;
    j["violations"] = s.violations;
    j["violations_theorem"] = s.violations_theorem;
    j["violations_property"] = s.violations_property;
    j["violations_basepoint"] = s.violations_basepoint;
    j["violation_details"] = s.violation_details;
    j["checks"] = {{"matrix_tree", s.matrix_tree_checks},
                   {"principal_identity", s.principal_identity_checks},
                   {"bijectivity", s.bijectivity_checks},
                   {"basepoint_shift", s.basepoint_shift_checks},
                   {"cut_decomposition", s.cut_decomposition_checks},
                   {"pic_split", s.pic_split_checks},
                   {"lemma5", s.lemma5_checks},
                   {"basepoint_independence", s.basepoint_independence_checks},
                   {"witness_prop_a", s.witnesses_prop_a},
                   {"witness_prop_b", s.witnesses_prop_b}};
    return j;
}

inline void summary_from_json_impl(const nlohmann::json& j, EnumerationSummary& s) {
    s.complete = j.at("complete").get<bool>();
    s.graphs = j.at("graphs").get<long long>();
    s.rotation_systems = j.at("rotation_systems").get<long long>();
    s.planar_agree = j.at("planar_agree").get<long long>();
    s.nonplanar_disagree = j.at("nonplanar_disagree").get<long long>();
    s.multigraph_exempt = j.at("multigraph_exempt").get<long long>();
    s.skipped_rotation_cap = j.at("skipped_rotation_cap").get<long long>();
    s.violations = j.at("violations").get<long long>();
    s.violations_theorem = j.at("violations_theorem").get<long long>();
    s.violations_property = j.at("violations_property").get<long long>();
    s.violations_basepoint = j.at("violations_basepoint").get<long long>();
    s.violation_details = j.at("violation_details").get<std::vector<std::string>>();
    const auto& c = j.at("checks");
    s.matrix_tree_checks = c.at("matrix_tree").get<long long>();
    s.principal_identity_checks = c.at("principal_identity").get<long long>();
    s.bijectivity_checks = c.at("bijectivity").get<long long>();
    s.basepoint_shift_checks = c.at("basepoint_shift").get<long long>();
    s.cut_decomposition_checks = c.at("cut_decomposition").get<long long>();
    s.pic_split_checks = c.at("pic_split").get<long long>();
    s.lemma5_checks = c.at("lemma5").get<long long>();
    s.basepoint_independence_checks = c.at("basepoint_independence").get<long long>();
    s.witnesses_prop_a = c.at("witness_prop_a").get<long long>();
    s.witnesses_prop_b = c.at("witness_prop_b").get<long long>();
}

inline nlohmann::json spec_fingerprint(const EnumerationSpec& spec) {
    nlohmann::json j;
    j["max_vertices"] = spec.max_vertices;
    j["max_edges"] = spec.max_edges;
    j["simple_only"] = spec.simple_only;
    j["rotation_cap"] = spec.rotation_cap;
    j["lemma_suites"] = spec.lemma_suites;
    return j;
}

} // namespace detail

inline nlohmann::json summary_to_json(const EnumerationSummary& s) {
    return detail::summary_to_json_impl(s);
}

/// One graph's worth of work: all anchored rotation systems plus the
/// graph-level suites.
inline EnumerationSummary process_candidate(const GraphCandidate& cand,
                                            const EnumerationSpec& spec) {
    EnumerationSummary local;
    local.graphs = 1;
    long long count = detail::rotation_system_count(cand);
    if (spec.rotation_cap > 0 && count > spec.rotation_cap) {
        local.skipped_rotation_cap = 1;
        return local;
    }
    detail::RotationOdometer odo(cand);
    std::vector<std::vector<int>> rotations;
    bool first_system = true;
    long long system_index = 0;
    while (odo.next(rotations)) {
        RibbonGraph g = detail::build_system(cand, rotations);
        local.rotation_systems += 1;
        std::vector<Violation> bad;
        try {
            bad = check_rotation_system(g, spec.lemma_suites, local);
        } catch (const Error& e) {
            bad.push_back({ViolationKind::Theorem, std::string("unexpected failure: ") + e.what()});
        }
        if (first_system && spec.lemma_suites) {
            auto more = check_cut_decomposition(g, local);
            bad.insert(bad.end(), more.begin(), more.end());
            first_system = false;
        }
        for (const auto& violation : bad) {
            local.violations += 1;
            switch (violation.kind) {
                case ViolationKind::Theorem: local.violations_theorem += 1; break;
                case ViolationKind::Property: local.violations_property += 1; break;
                case ViolationKind::Basepoint: local.violations_basepoint += 1; break;
            }
            if (local.violation_details.size() < 32)
                local.violation_details.push_back(detail::candidate_name(cand) + " sys#" +
                                                  std::to_string(system_index) + ": " +
                                                  violation.message);
        }
        ++system_index;
    }
    return local;
}

/// Exhaustive verification over the graph stream: deterministic, restartable
/// via a checkpoint file, distributed over worker threads. The reducer merges
/// per-graph results in stream order regardless of completion order.
inline EnumerationSummary enumerate_and_verify(const EnumerationSpec& spec) {
    std::vector<GraphCandidate> graphs = enumerate_graphs(spec);

    long long start_index = 0;
    EnumerationSummary base;
    if (!spec.checkpoint_path.empty()) {
        std::ifstream in(spec.checkpoint_path);
        if (in) {
            try {
                nlohmann::json j = nlohmann::json::parse(in);
                if (j.at("spec") == detail::spec_fingerprint(spec) &&
                    j.at("total_graphs").get<long long>() ==
                        static_cast<long long>(graphs.size())) {
                    start_index = j.at("next_index").get<long long>();
                    detail::summary_from_json_impl(j.at("summary"), base);
                }
            } catch (const nlohmann::json::exception&) {
                // unreadable checkpoint: start over
            }
        }
    }

    long long end_index = static_cast<long long>(graphs.size());
    if (spec.limit_graphs > 0)
        end_index = std::min(end_index, start_index + spec.limit_graphs);

    const int threads = detail::resolve_threads(spec.threads);
    std::vector<EnumerationSummary> results(graphs.size());
    std::vector<char> done(graphs.size(), 0);
    std::mutex progress_mutex;
    long long completions = 0;

    auto write_checkpoint = [&](long long frontier) {
        if (spec.checkpoint_path.empty()) return;
        EnumerationSummary snap = base;
        for (long long i = start_index; i < frontier; ++i) snap.add(results[i]);
        snap.complete = frontier == static_cast<long long>(graphs.size());
        nlohmann::json j;
        j["format"] = 1;
        j["spec"] = detail::spec_fingerprint(spec);
        j["total_graphs"] = static_cast<long long>(graphs.size());
        j["next_index"] = frontier;
        j["summary"] = detail::summary_to_json_impl(snap);
        std::ofstream out(spec.checkpoint_path);
        out << j.dump(2) << "\n";
    };

    std::atomic<long long> next{start_index};
    auto worker = [&]() {
        for (;;) {
            long long i = next.fetch_add(1);
            if (i >= end_index) break;
            results[i] = process_candidate(graphs[i], spec);
            if (!spec.checkpoint_path.empty()) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                done[i] = 1;
                if (++completions % 32 == 0) {
                    long long frontier = start_index;
                    while (frontier < end_index && done[frontier]) ++frontier;
                    write_checkpoint(frontier);
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    EnumerationSummary total = base;
    for (long long i = start_index; i < end_index; ++i) total.add(results[i]);
    total.complete = end_index == static_cast<long long>(graphs.size());
    write_checkpoint(end_index);
    return total;
}

} // namespace torsor_lab
