#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torsor_lab/bernardi.hpp"
#include "torsor_lab/picard.hpp"
#include "torsor_lab/ribbon_graph.hpp"
#include "torsor_lab/rotor.hpp"

namespace torsor_lab {

struct AgreeResult {
    bool agrees = true;
    // First failing (chip vertex, tree) in search order: vertices ascending,
    // trees lexicographic.
    std::optional<std::pair<int, SpanningTree>> counterexample;
};

/// Decides b_y = r_y through the agreement criterion: for every chip vertex x
/// and tree T with T' = ((x)-(y))_y(T), beta_(y,e)(T') - beta_(y,e)(T) must
/// be equivalent to (x)-(y). Checking the generators suffices.
inline AgreeResult torsors_agree_at(const RibbonGraph& g, int y) {
    AgreeResult result;
    const int n = g.vertex_count();
    if (n == 1) return result;
    const int e = canonical_dart_at(g, y);

    std::vector<SpanningTree> trees = spanning_trees(g);
    std::map<SpanningTree, int> index;
    std::vector<PicClass> beta;
    beta.reserve(trees.size());
    for (int i = 0; i < static_cast<int>(trees.size()); ++i) {
        index.emplace(trees[i], i);
        beta.push_back(pic_class(g, bernardi_divisor(g, trees[i], y, e)));
    }

    for (int x = 0; x < n; ++x) {
        if (x == y) continue;
        PicClass gen = pic_class(g, Divisor::unit(n, x) - Divisor::unit(n, y));
        for (int i = 0; i < static_cast<int>(trees.size()); ++i) {
            SpanningTree routed = rotor_route(g, trees[i], x, y);
            int j = index.at(routed);
            if (class_sub(g, beta[j], beta[i]) != gen) {
                result.agrees = false;
                result.counterexample = {x, trees[i]};
                return result;
            }
        }
    }
    return result;
}

struct AgreementReport {
    bool planar = false;
    bool simple = false;
    bool all_agree = true;
    bool theorem_consistent = true;
    std::vector<AgreeResult> per_vertex;
};

/// Runs the per-vertex agreement check and tests the theorem's two
/// directions: planar graphs must agree everywhere; simple non-planar graphs
/// must disagree somewhere.
inline AgreementReport agreement_report(const RibbonGraph& g) {
    AgreementReport report;
    report.planar = is_planar_ribbon(g);
    report.simple = g.simple();
    for (int v = 0; v < g.vertex_count(); ++v) {
        report.per_vertex.push_back(torsors_agree_at(g, v));
        report.all_agree = report.all_agree && report.per_vertex.back().agrees;
    }
    const bool planar_direction = !report.planar || report.all_agree;
    const bool nonplanar_direction = !(!report.planar && report.simple) || !report.all_agree;
    report.theorem_consistent = planar_direction && nonplanar_direction;
    return report;
}

/// A (sink, chip, tree) triple claimed to falsify the agreement criterion.
struct DisagreementWitness {
    enum class Provenance { PropA, PropB_an, PropB_c };
    int sink = 0;
    int chip = 0;
    SpanningTree tree;
    Provenance provenance = Provenance::PropA;
};

inline std::string provenance_name(DisagreementWitness::Provenance p) {
    switch (p) {
        case DisagreementWitness::Provenance::PropA: return "PropA";
        case DisagreementWitness::Provenance::PropB_an: return "PropB-an";
        case DisagreementWitness::Provenance::PropB_c: return "PropB-c";
    }
    return "unknown";
}

/// Recomputes both sides of the agreement criterion for the witness triple.
/// True iff the equivalence fails, i.e. the witness certifies disagreement.
inline bool verify_witness(const RibbonGraph& g, const DisagreementWitness& w) {
    if (w.sink < 0 || w.sink >= g.vertex_count() || w.chip < 0 || w.chip >= g.vertex_count())
        throw InvalidWitnessFields("witness vertex out of range");
    if (!is_spanning_tree(g, w.tree))
        throw InvalidWitnessFields("witness tree is not a spanning tree");
    if (g.vertex_count() == 1) return false;

    const int e = canonical_dart_at(g, w.sink);
    SpanningTree routed = rotor_route(g, w.tree, w.chip, w.sink);
    Divisor diff = bernardi_divisor(g, routed, w.sink, e) -
                   bernardi_divisor(g, w.tree, w.sink, e) -
                   (Divisor::unit(g.vertex_count(), w.chip) -
                    Divisor::unit(g.vertex_count(), w.sink));
    return !pic_class(g, diff).is_zero();
}

} // namespace torsor_lab
