#include <catch2/catch_amalgamated.hpp>

#include "torsor_lab/divisor.hpp"
#include "torsor_lab/fixtures.hpp"
#include "torsor_lab/integer_matrix.hpp"
#include "torsor_lab/picard.hpp"
#include "torsor_lab/wedge.hpp"

#include <random>
#include <thread>

#include "test_helpers.hpp"

using namespace torsor_lab;
using namespace torsor_lab::testing;

TEST_CASE("boundary of a dart") {
    RibbonGraph g = fixtures::g_ex2();
    int d = dart_by_labels(g, "c", "a1");
    REQUIRE(boundary(g, d) == divisor_of(g, {{"a1", 1}, {"c", -1}}));

    SECTION("loop dart has zero boundary") {
        RibbonGraph loop = from_rotations({"v", "w"}, {{0, 1, 2}, {3}}, {{0, 1}, {2, 3}});
        int loop_dart = -1;
        for (int dd = 0; dd < loop.dart_count(); ++dd)
            if (loop.head(dd) == loop.tail(dd)) loop_dart = dd;
        REQUIRE(loop_dart >= 0);
        REQUIRE(boundary(loop, loop_dart).is_zero());
    }
    SECTION("boundaries telescope around a directed cycle") {
        Divisor sum(g.vertex_count());
        for (auto [t, h] : {std::pair{"c", "a1"}, {"a1", "a2"}, {"a2", "c"}})
            sum += boundary(g, dart_by_labels(g, t, h));
        REQUIRE(sum.is_zero());
    }
}

TEST_CASE("reduced Laplacian") {
    SECTION("single edge") {
        RibbonGraph g = fixtures::single_edge();
        IntMatrix m = reduced_laplacian(g, 0);
        REQUIRE(m.rows == 1);
        REQUIRE(m.at(0, 0) == 1);
    }
    SECTION("triangle") {
        RibbonGraph g = fixtures::triangle();
        IntMatrix m = reduced_laplacian(g, 0);
        REQUIRE(m.at(0, 0) == 2);
        REQUIRE(m.at(0, 1) == -1);
        REQUIRE(m.at(1, 0) == -1);
        REQUIRE(m.at(1, 1) == 2);
        REQUIRE(bareiss_determinant(m) == 3);
    }
    SECTION("figure-1 determinant equals the tree count") {
        RibbonGraph g = fixtures::g_fig1();
        REQUIRE(bareiss_determinant(reduced_laplacian(g, 0)) ==
                static_cast<long long>(spanning_trees(g).size()));
    }
    SECTION("loops are ignored") {
        RibbonGraph loop = from_rotations({"v", "w"}, {{0, 1, 2}, {3}}, {{0, 1}, {2, 3}});
        IntMatrix m = reduced_laplacian(loop, 0);
        REQUIRE(m.rows == 1);
        REQUIRE(m.at(0, 0) == 1);
    }
}

TEST_CASE("smith normal form") {
    SECTION("triangle Laplacian has invariant factors 1, 3") {
        IntMatrix m(2, 2);
        m.at(0, 0) = 2;
        m.at(0, 1) = -1;
        m.at(1, 0) = -1;
        m.at(1, 1) = 2;
        SnfResult r = smith_normal_form(m);
        REQUIRE(r.diagonal == std::vector<BigInt>{1, 3});
        REQUIRE(r.u * m * r.w == r.s);
        REQUIRE(abs(bareiss_determinant(r.u)) == 1);
        REQUIRE(abs(bareiss_determinant(r.w)) == 1);
    }
    SECTION("identity stays the identity") {
        SnfResult r = smith_normal_form(IntMatrix::identity(4));
        REQUIRE(r.diagonal == std::vector<BigInt>(4, 1));
    }
    SECTION("random small matrices satisfy U*M*W = S with a divisibility chain") {
        std::mt19937 rng(12345);
        for (int trial = 0; trial < 60; ++trial) {
            int n = 1 + trial % 4, m2 = 1 + (trial / 4) % 4;
            IntMatrix m(n, m2);
            for (auto& x : m.a) x = static_cast<int>(rng() % 21) - 10;
            SnfResult r = smith_normal_form(m);
            REQUIRE(r.u * m * r.w == r.s);
            REQUIRE(abs(bareiss_determinant(r.u)) == 1);
            REQUIRE(abs(bareiss_determinant(r.w)) == 1);
            for (size_t i = 0; i + 1 < r.diagonal.size(); ++i) {
                REQUIRE(r.diagonal[i] >= 0);
                if (r.diagonal[i] != 0) REQUIRE(r.diagonal[i + 1] % r.diagonal[i] == 0);
                else REQUIRE(r.diagonal[i + 1] == 0);
            }
        }
    }
    SECTION("triangle part of the example graph has Pic0 = Z/3") {
        RibbonGraph g = fixtures::g_ex2();
        WedgeSplit split = wedge_split(g, g.vertex_by_label("c"),
                                       {dart_by_labels(g, "c", "f2")});
        const RibbonGraph& g1 = split.g1.graph;
        const SnfData& snf = snf_data(g1, 0);
        std::vector<long long> nontrivial;
        for (long long d : snf.diagonal)
            if (d != 1) nontrivial.push_back(d);
        REQUIRE(nontrivial == std::vector<long long>{3});
    }
}

TEST_CASE("pic classes and linear equivalence") {
    RibbonGraph g = fixtures::g_ex2();
    SECTION("principal divisors have the zero class") {
        for (int v = 0; v < g.vertex_count(); ++v)
            REQUIRE(pic_class(g, laplacian_column(g, v)).is_zero());
    }
    SECTION("adding a Laplacian column does not change the class") {
        Divisor d = divisor_of(g, {{"a2", 3}, {"f1", -1}, {"c", -2}});
        for (int v = 0; v < g.vertex_count(); ++v)
            REQUIRE(pic_class(g, d) == pic_class(g, d + laplacian_column(g, v)));
    }
    SECTION("(c)-(f2) has order 3 in the triangle part") {
        WedgeSplit split = wedge_split(g, g.vertex_by_label("c"),
                                       {dart_by_labels(g, "c", "f2")});
        const RibbonGraph& g1 = split.g1.graph;
        Divisor d = divisor_of(g1, {{"c", 1}, {"f2", -1}});
        PicClass cls = pic_class(g1, d);
        REQUIRE_FALSE(cls.is_zero());
        REQUIRE(class_order(g1, cls) == 3);
        REQUIRE_FALSE(linearly_equivalent(g1, d, Divisor(g1.vertex_count())));
        REQUIRE(linearly_equivalent(g1, 3 * d, Divisor(g1.vertex_count())));
    }
    SECTION("figure 1: (f)-(b) is not principal") {
        RibbonGraph f1 = fixtures::g_fig1();
        REQUIRE_FALSE(is_principal(f1, divisor_of(f1, {{"f", 1}, {"b", -1}})));
    }
    SECTION("degree mismatch is an error") {
        REQUIRE_THROWS_AS(
            linearly_equivalent(g, divisor_of(g, {{"c", 1}}), Divisor(g.vertex_count())),
            DegreeMismatch);
    }
    SECTION("a divisor is equivalent to itself") {
        Divisor d = divisor_of(g, {{"a1", 2}, {"f2", -2}});
        REQUIRE(linearly_equivalent(g, d, d));
    }
}

TEST_CASE("pic class equality agrees with an independent solver oracle") {
    // All degree-0 divisors supported on two fixed vertices with small
    // coefficients; class equality must coincide with integral solvability
    // of the Laplacian system (Cramer + Bareiss, no Smith form involved).
    for (const char* name : {"triangle", "g_ex2"}) {
        RibbonGraph g = fixtures::by_name(name);
        std::vector<std::pair<Divisor, PicClass>> seen;
        for (int a = -2; a <= 2; ++a)
            for (int b = -2; b <= 2; ++b) {
                Divisor d(g.vertex_count());
                d[0] = a;
                d[1] = b;
                d[g.vertex_count() - 1] = -a - b;
                seen.emplace_back(d, pic_class(g, d));
            }
        for (const auto& [d1, c1] : seen)
            for (const auto& [d2, c2] : seen) {
                INFO(name);
                REQUIRE(equivalent_by_cramer(g, d1, d2) == (c1 == c2));
            }
    }
}

TEST_CASE("sum of boundaries over a partial orientation") {
    RibbonGraph g = fixtures::g_fig1();
    SECTION("B = {b->f} gives (f)-(b)") {
        PartialOrientation b({dart_by_labels(g, "b", "f")});
        REQUIRE(sum_boundaries(g, b) == divisor_of(g, {{"f", 1}, {"b", -1}}));
    }
    SECTION("empty orientation sums to zero") {
        REQUIRE(sum_boundaries(g, PartialOrientation{}).is_zero());
    }
    SECTION("a vertex star matches the Laplacian column") {
        int c = g.vertex_by_label("c");
        std::vector<int> darts = g.darts_at(c);
        REQUIRE(sum_boundaries(g, PartialOrientation{darts}) == -laplacian_column(g, c));
    }
    SECTION("one edge twice is rejected") {
        int d = dart_by_labels(g, "b", "f");
        REQUIRE_THROWS_AS(sum_boundaries(g, PartialOrientation{{d, g.alpha(d)}}), InputError);
    }
}

TEST_CASE("directed cut decomposition") {
    RibbonGraph g = fixtures::g_fig1();
    SECTION("bf alone is not decomposable") {
        auto cuts = directed_cut_decomposition(g, PartialOrientation{{dart_by_labels(g, "b", "f")}});
        REQUIRE_FALSE(cuts.has_value());
    }
    SECTION("all edges out of one vertex form one cut") {
        int c = g.vertex_by_label("c");
        auto cuts = directed_cut_decomposition(g, PartialOrientation{g.darts_at(c)});
        REQUIRE(cuts.has_value());
        REQUIRE(cuts->size() == 1);
        REQUIRE((*cuts)[0].darts.size() == 3);
    }
    SECTION("two star cuts on a path graph decompose into two cuts") {
        RibbonGraph p = fixtures::path(3);
        PartialOrientation b({dart_by_labels(p, "p0", "p1"), dart_by_labels(p, "p2", "p1")});
        auto cuts = directed_cut_decomposition(p, b);
        REQUIRE(cuts.has_value());
        REQUIRE(cuts->size() == 2);
    }
    SECTION("directed cycles are rejected") {
        PartialOrientation cyc({dart_by_labels(g, "c", "a"), dart_by_labels(g, "a", "b"),
                                dart_by_labels(g, "b", "d"), dart_by_labels(g, "d", "c")});
        REQUIRE_THROWS_AS(directed_cut_decomposition(g, cyc), ContainsDirectedCycle);
    }
    SECTION("success implies the boundary sum is principal") {
        RibbonGraph p = fixtures::path(4);
        // every acyclic orientation of a tree decomposes (it should), and its
        // boundary sum is principal
        const int E = p.edge_count();
        std::vector<int> edges = p.edge_ids();
        for (int code = 0; code < 27; ++code) {
            int c0 = code;
            std::vector<int> darts;
            for (int i = 0; i < E; ++i) {
                int pick = c0 % 3;
                c0 /= 3;
                if (pick == 1) darts.push_back(edges[i]);
                if (pick == 2) darts.push_back(p.alpha(edges[i]));
            }
            PartialOrientation b{darts};
            if (has_directed_cycle(p, b)) continue;
            auto cuts = directed_cut_decomposition(p, b);
            if (cuts.has_value()) {
                REQUIRE(is_principal(p, sum_boundaries(p, b)));
                size_t total = 0;
                for (const auto& cut : *cuts) total += cut.darts.size();
                REQUIRE(total == darts.size());
            } else {
                REQUIRE_FALSE(is_principal(p, sum_boundaries(p, b)));
            }
        }
    }
}

TEST_CASE("pic split over the wedge") {
    RibbonGraph g = fixtures::g_ex2();
    WedgeSplit split = wedge_split(g, g.vertex_by_label("c"), {dart_by_labels(g, "c", "f2")});
    const RibbonGraph& g1 = split.g1.graph;
    const RibbonGraph& g2 = split.g2.graph;

    SECTION("basis rewrite example") {
        Divisor d = divisor_of(g, {{"a2", 1}, {"f2", -1}});
        auto [d1, d2] = pic_split(g, split, d);
        REQUIRE(d1 == divisor_of(g1, {{"c", 1}, {"f2", -1}}));
        REQUIRE(d2 == divisor_of(g2, {{"a2", 1}, {"c", -1}}));
    }
    SECTION("divisor supported on one side splits trivially") {
        Divisor d = divisor_of(g, {{"f1", 1}, {"f2", -1}});
        auto [d1, d2] = pic_split(g, split, d);
        REQUIRE(d2.is_zero());
        REQUIRE(d1 == divisor_of(g1, {{"f1", 1}, {"f2", -1}}));
    }
    SECTION("class-zero test agrees with the componentwise test, exhaustively") {
        // all degree-0 divisors with coefficients in [-2, 2]
        const int n = g.vertex_count();
        std::vector<int> coeff(n, -2);
        for (;;) {
            Divisor d(n);
            for (int i = 0; i < n; ++i) d[i] = coeff[i];
            if (d.degree() == 0) {
                auto [d1, d2] = pic_split(g, split, d);
                bool whole = pic_class(g, d).is_zero();
                bool parts = pic_class(g1, d1).is_zero() && pic_class(g2, d2).is_zero();
                REQUIRE(whole == parts);
            }
            int i = 0;
            while (i < n && coeff[i] == 2) coeff[i++] = -2;
            if (i == n) break;
            ++coeff[i];
        }
    }
}

TEST_CASE("tree count equals the product of invariant factors") {
    for (const auto& entry : fixtures::all_fixtures()) {
        RibbonGraph g = entry.build();
        INFO(entry.name);
        REQUIRE(picard_group_order(g) ==
                static_cast<long long>(spanning_trees(g).size()));
    }
}

TEST_CASE("snf memo is safe under concurrent initialization") {
    RibbonGraph g = fixtures::g_fig1();
    Divisor d = divisor_of(g, {{"f", 1}, {"b", -1}});
    std::vector<std::thread> workers;
    std::vector<PicClass> results(8);
    for (int i = 0; i < 8; ++i)
        workers.emplace_back([&, i] { results[i] = pic_class(g, d); });
    for (auto& w : workers) w.join();
    for (int i = 1; i < 8; ++i) REQUIRE(results[i] == results[0]);
}
