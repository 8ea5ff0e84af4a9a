#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "torsor_lab/enumerate.hpp"
#include "torsor_lab/fixtures.hpp"

using namespace torsor_lab;

TEST_CASE("graph stream is deterministic and canonical") {
    EnumerationSpec spec;
    spec.max_vertices = 4;
    spec.max_edges = 6;
    auto a = enumerate_graphs(spec);
    auto b = enumerate_graphs(spec);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].n == b[i].n);
        REQUIRE(a[i].edges == b[i].edges);
    }
    // 1 + 1 + 4 + 38 connected labeled graphs
    REQUIRE(a.size() == 44);
}

TEST_CASE("rotation system count matches the factorial product") {
    EnumerationSpec spec;
    spec.max_vertices = 4;
    spec.max_edges = 6;
    for (const auto& cand : enumerate_graphs(spec)) {
        long long expect = 1;
        std::vector<int> deg(cand.n, 0);
        for (auto [u, v] : cand.edges) {
            deg[u]++;
            deg[v]++;
        }
        for (int v = 0; v < cand.n; ++v)
            for (int i = 2; i < deg[v]; ++i) expect *= i;

        detail::RotationOdometer odo(cand);
        std::vector<std::vector<int>> rotations;
        long long count = 0;
        while (odo.next(rotations)) ++count;
        REQUIRE(count == expect);
    }
}

TEST_CASE("small enumerations verify the theorem with zero violations") {
    SECTION("up to three vertices everything is planar and agrees") {
        EnumerationSpec spec;
        spec.max_vertices = 3;
        spec.max_edges = 3;
        EnumerationSummary s = enumerate_and_verify(spec);
        REQUIRE(s.complete);
        REQUIRE(s.violations == 0);
        REQUIRE(s.nonplanar_disagree == 0);
        REQUIRE(s.planar_agree == s.rotation_systems);
    }
    SECTION("four vertices include non-planar K4 systems, all witnessed") {
        EnumerationSpec spec;
        spec.max_vertices = 4;
        spec.max_edges = 6;
        EnumerationSummary s = enumerate_and_verify(spec);
        REQUIRE(s.complete);
        REQUIRE(s.violations == 0);
        REQUIRE(s.rotation_systems == 93);
        REQUIRE(s.nonplanar_disagree == 26);
        REQUIRE(s.witnesses_prop_a + s.witnesses_prop_b == 26);
    }
    SECTION("multigraph mode exercises the exemption path") {
        EnumerationSpec spec;
        spec.max_vertices = 3;
        spec.max_edges = 4;
        spec.simple_only = false;
        EnumerationSummary s = enumerate_and_verify(spec);
        REQUIRE(s.complete);
        REQUIRE(s.violations == 0);
        REQUIRE(s.multigraph_exempt > 0);
    }
}

TEST_CASE("rotation cap skips oversized graphs") {
    EnumerationSpec spec;
    spec.max_vertices = 4;
    spec.max_edges = 6;
    spec.rotation_cap = 4;
    EnumerationSummary s = enumerate_and_verify(spec);
    REQUIRE(s.skipped_rotation_cap > 0);
    REQUIRE(s.violations == 0);
}

TEST_CASE("checkpointed runs resume and match a one-shot run") {
    EnumerationSpec one_shot;
    one_shot.max_vertices = 4;
    one_shot.max_edges = 5;
    EnumerationSummary reference = enumerate_and_verify(one_shot);
    REQUIRE(reference.complete);

    std::string path =
        (std::filesystem::temp_directory_path() / "torsor_lab_checkpoint_test.json").string();
    std::remove(path.c_str());

    EnumerationSpec partial = one_shot;
    partial.checkpoint_path = path;
    partial.limit_graphs = 7;
    EnumerationSummary first = enumerate_and_verify(partial);
    REQUIRE_FALSE(first.complete);
    REQUIRE(first.graphs == 7);

    EnumerationSpec resume = one_shot;
    resume.checkpoint_path = path;
    EnumerationSummary second = enumerate_and_verify(resume);
    REQUIRE(second.complete);
    REQUIRE(summary_to_json(second) == summary_to_json(reference));
    std::remove(path.c_str());
}

TEST_CASE("thread count does not change the summary") {
    EnumerationSpec spec;
    spec.max_vertices = 4;
    spec.max_edges = 6;
    spec.threads = 1;
    EnumerationSummary single = enumerate_and_verify(spec);
    spec.threads = 4;
    EnumerationSummary multi = enumerate_and_verify(spec);
    REQUIRE(summary_to_json(single) == summary_to_json(multi));
}
