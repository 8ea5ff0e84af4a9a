#include <catch2/catch_amalgamated.hpp>

#include "torsor_lab/bernardi.hpp"
#include "torsor_lab/fixtures.hpp"
#include "torsor_lab/rotor.hpp"
#include "torsor_lab/wedge.hpp"

#include "test_helpers.hpp"

using namespace torsor_lab;
using namespace torsor_lab::testing;

namespace {
SpanningTree fig1_tree(const RibbonGraph& g) {
    return tree_by_labels(g, {{"c", "a"}, {"c", "f"}, {"a", "b"}, {"b", "d"}});
}
SpanningTree fig1_tree_prime(const RibbonGraph& g) {
    return tree_by_labels(g, {{"c", "d"}, {"c", "f"}, {"a", "b"}, {"b", "d"}});
}
} // namespace

TEST_CASE("figure-1 Bernardi goldens") {
    RibbonGraph g = fixtures::g_fig1();
    int d = g.vertex_by_label("d");
    int start = dart_by_labels(g, "d", "c");

    BernardiRecord rec = bernardi_tour(g, fig1_tree(g), d, start);
    REQUIRE(rec.divisor == divisor_of(g, {{"d", 1}, {"b", 1}}));
    REQUIRE(rec.dart_order.size() == static_cast<size_t>(g.dart_count()));

    BernardiRecord rec2 = bernardi_tour(g, fig1_tree_prime(g), d, start);
    REQUIRE(rec2.divisor == divisor_of(g, {{"f", 1}, {"c", 1}}));

    SECTION("chip count equals the nullity") {
        REQUIRE(rec.chip_events.size() == 2);
        REQUIRE(rec.divisor.degree() == g.edge_count() - g.vertex_count() + 1);
    }
    SECTION("starting dart must be at the basepoint") {
        REQUIRE_THROWS_AS(bernardi_tour(g, fig1_tree(g), d, dart_by_labels(g, "c", "a")),
                          DartNotAtBasepoint);
    }
}

TEST_CASE("tree graphs give the zero divisor and a full tour") {
    RibbonGraph p = fixtures::path(4);
    SpanningTree t{p.edge_ids()};
    BernardiRecord rec = bernardi_tour(p, t, 0, p.darts_at(0)[0]);
    REQUIRE(rec.divisor.is_zero());
    REQUIRE(rec.dart_order.size() == static_cast<size_t>(2 * p.edge_count()));
    REQUIRE(rec.chip_events.empty());
}

TEST_CASE("tour visits every dart exactly once on all fixtures") {
    for (const auto& entry : fixtures::all_fixtures()) {
        RibbonGraph g = entry.build();
        if (g.vertex_count() == 1) continue;
        auto trees = spanning_trees(g);
        // first and last tree, every basepoint dart
        for (const auto& t : {trees.front(), trees.back()})
            for (int v = 0; v < g.vertex_count(); ++v)
                for (int e : g.darts_at(v)) {
                    BernardiRecord rec = bernardi_tour(g, t, v, e);
                    std::vector<int> sorted = rec.dart_order;
                    std::sort(sorted.begin(), sorted.end());
                    for (int i = 0; i < g.dart_count(); ++i) REQUIRE(sorted[i] == i);
                }
    }
}

TEST_CASE("bernardi map is a bijection onto classes") {
    SECTION("triangle: three trees, three distinct classes") {
        RibbonGraph g = fixtures::triangle();
        BernardiTable table = bernardi_map(g, 0);
        REQUIRE(table.trees.size() == 3);
    }
    SECTION("figure-1: table size equals the tree count") {
        RibbonGraph g = fixtures::g_fig1();
        BernardiTable table = bernardi_map(g, g.vertex_by_label("d"));
        REQUIRE(table.trees.size() == 12);
    }
    SECTION("single edge: one tree, the unique class") {
        RibbonGraph g = fixtures::single_edge();
        BernardiTable table = bernardi_map(g, 0);
        REQUIRE(table.trees.size() == 1);
    }
}

TEST_CASE("bernardi action") {
    RibbonGraph g = fixtures::g_fig1();
    int d = g.vertex_by_label("d");
    SECTION("zero divisor is the identity") {
        REQUIRE(bernardi_action(g, fig1_tree(g), Divisor(g.vertex_count()), d) == fig1_tree(g));
    }
    SECTION("the figure-1 action golden") {
        Divisor D = divisor_of(g, {{"c", 1}, {"d", -1}, {"f", 1}, {"b", -1}});
        REQUIRE(bernardi_action(g, fig1_tree(g), D, d) == fig1_tree_prime(g));
    }
    SECTION("action composition: [D2] . ([D1] . T) = [D1 + D2] . T") {
        for (const char* name : {"triangle", "g_fig1", "g_ex2"}) {
            RibbonGraph h = fixtures::by_name(name);
            BernardiTable table = bernardi_map(h, 0);
            Divisor d1 = Divisor::unit(h.vertex_count(), 1) - Divisor::unit(h.vertex_count(), 0);
            Divisor d2 = Divisor::unit(h.vertex_count(), h.vertex_count() - 1) -
                         Divisor::unit(h.vertex_count(), 1);
            for (const auto& t : spanning_trees(h)) {
                SpanningTree seq = bernardi_action_with_table(
                    h, table, bernardi_action_with_table(h, table, t, d1), d2);
                INFO(name);
                REQUIRE(seq == bernardi_action_with_table(h, table, t, d1 + d2));
            }
        }
    }
    SECTION("independent of the basepoint dart at a fixed vertex") {
        for (const char* name : {"triangle", "g_fig1", "g_ex2", "g_rem"}) {
            RibbonGraph h = fixtures::by_name(name);
            auto trees = spanning_trees(h);
            for (int v = 0; v < h.vertex_count(); ++v) {
                Divisor D(h.vertex_count());
                int other = (v + 1) % h.vertex_count();
                D[v] = -1;
                D[other] = 1;
                for (int e : h.darts_at(v)) {
                    BernardiTable table = bernardi_map(h, v, e);
                    for (const auto& t : trees) {
                        SpanningTree expected =
                            bernardi_action_with_table(h, bernardi_map(h, v), t, D);
                        REQUIRE(bernardi_action_with_table(h, table, t, D) == expected);
                    }
                }
            }
        }
    }
}

TEST_CASE("basepoint shift") {
    RibbonGraph g = fixtures::g_ex2();
    int c = g.vertex_by_label("c");
    SpanningTree t = tree_by_labels(g, {{"c", "a1"}, {"a1", "a2"}, {"c", "f1"}, {"c", "f2"}});

    SECTION("equal darts shift by zero") {
        int e = dart_by_labels(g, "c", "a1");
        REQUIRE(basepoint_shift(g, c, e, e, t).is_zero());
    }
    SECTION("arc from cf2 to cf1 sums the two intermediate boundaries") {
        int e1 = dart_by_labels(g, "c", "f2");
        int e2 = dart_by_labels(g, "c", "f1");
        Divisor shift = basepoint_shift(g, c, e1, e2, t);
        REQUIRE(shift == boundary(g, dart_by_labels(g, "c", "f2")) +
                             boundary(g, dart_by_labels(g, "c", "a2")));
    }
    SECTION("full rotation sums to a principal divisor") {
        Divisor full(g.vertex_count());
        for (int dart : g.darts_at(c)) full += boundary(g, dart);
        REQUIRE(is_principal(g, full));
    }
    SECTION("identity holds for every dart pair on every fixture tree") {
        for (const char* name : {"triangle", "g_fig1", "g_ex2", "g_rem"}) {
            RibbonGraph h = fixtures::by_name(name);
            auto trees = spanning_trees(h);
            for (int v = 0; v < h.vertex_count(); ++v)
                for (int e1 : h.darts_at(v))
                    for (int e2 : h.darts_at(v))
                        for (const auto& tr : {trees.front(), trees.back()})
                            REQUIRE_NOTHROW(basepoint_shift(h, v, e1, e2, tr));
        }
    }
}

TEST_CASE("wedge tour locality on the example graph") {
    RibbonGraph g = fixtures::g_ex2();
    WedgeSplit split = wedge_split(g, g.vertex_by_label("c"), {dart_by_labels(g, "c", "f2")});
    SpanningTree t = tree_by_labels(g, {{"c", "a1"}, {"a1", "a2"}, {"c", "f1"}, {"c", "f2"}});

    int a2 = g.vertex_by_label("a2");
    BernardiRecord whole = bernardi_tour(g, t, a2, dart_by_labels(g, "a2", "c"));

    for (int which : {1, 2}) {
        const WedgePart& part = split.part(which);
        // entry dart: the first dart of this part the whole tour processes
        int entry_g = -1;
        for (int d : whole.dart_order)
            if (split.dart_part[d] == which) {
                entry_g = d;
                break;
            }
        REQUIRE(entry_g >= 0);
        int entry = split.dart_to_part_id[entry_g];

        // restrict the tree to the part
        std::vector<int> part_edges;
        for (int e : t.edges)
            if (split.dart_part[e] == which)
                part_edges.push_back(part.graph.edge_of(split.dart_to_part_id[e]));
        SpanningTree part_tree{part_edges};

        BernardiRecord local =
            bernardi_tour(part.graph, part_tree, part.graph.vertex_of(entry), entry);

        // chips the whole tour drops in this part == the local tour's chips
        Divisor expected(part.graph.vertex_count());
        for (auto [edge, vertex] : whole.chip_events) {
            if (split.dart_part[edge] != which) continue;
            int pv = -1;
            for (int i = 0; i < part.graph.vertex_count(); ++i)
                if (part.vertex_to_g[i] == vertex) pv = i;
            REQUIRE(pv >= 0);
            expected[pv] += 1;
        }
        REQUIRE(local.divisor == expected);
    }
}
