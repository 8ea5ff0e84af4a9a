#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsor_lab/cli.hpp"
#include "torsor_lab/fixtures.hpp"
#include "torsor_lab/graph_io.hpp"

#include "test_helpers.hpp"

using namespace torsor_lab;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

/// Writes the fixtures once for the whole binary.
const std::string& fixture_dir() {
    static std::string dir = [] {
        auto path = std::filesystem::temp_directory_path() / "torsor_lab_cli_fixtures";
        std::filesystem::create_directories(path);
        for (const auto& f : fixtures::all_fixtures()) {
            std::ofstream out(path / (f.name + ".json"));
            out << graph_to_string(f.build());
        }
        return path.string();
    }();
    return dir;
}

std::string fx(const std::string& name) { return fixture_dir() + "/" + name + ".json"; }

} // namespace

TEST_CASE("cli info and genus") {
    CliResult r = run_cli({"info", fx("g_fig1"), "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j["genus"] == 1);
    REQUIRE(j["planar"] == false);
    REQUIRE(j["simple"] == true);
    REQUIRE(j["spanning_trees"] == 12);

    CliResult g = run_cli({"genus", fx("triangle"), "--json"});
    REQUIRE(g.code == 0);
    REQUIRE(Json::parse(g.out)["planar"] == true);
}

TEST_CASE("cli rotor reproduces the figure") {
    CliResult r = run_cli({"rotor", fx("g_fig1"), "--tree", "ca,cf,ab,bd", "--chip", "c",
                           "--sink", "d", "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    RibbonGraph g = fixtures::g_fig1();
    std::vector<int> expect;
    for (auto [a, b] : {std::pair{"c", "d"}, {"c", "f"}, {"a", "b"}, {"b", "d"}})
        expect.push_back(testing::edge_by_labels(g, a, b));
    std::sort(expect.begin(), expect.end());
    REQUIRE(j["tree"].get<std::vector<int>>() == expect);
    REQUIRE(j["steps"] == 1);

    SECTION("trace lines are one JSON object per step") {
        CliResult t = run_cli({"rotor", fx("g_ex2"), "--tree", "ca1,a1a2,cf1,cf2", "--chip", "c",
                               "--sink", "a2", "--trace"});
        REQUIRE(t.code == 0);
        std::istringstream lines(t.out);
        std::string line;
        std::vector<Json> steps;
        while (std::getline(lines, line) && !line.empty() && line[0] == '{')
            steps.push_back(Json::parse(line));
        REQUIRE(steps.size() == 5);
        REQUIRE(steps[0]["chip"] == "f2");
        REQUIRE(steps[0]["changed_vertex"] == "c");
        REQUIRE(steps[4]["chip"] == "a2");
    }
}

TEST_CASE("cli bernardi reproduces the figure divisors") {
    CliResult r = run_cli({"bernardi", fx("g_fig1"), "--tree", "ca,cf,ab,bd", "--vertex", "d",
                           "--edge", "dc", "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j["divisor"] == Json({{"b", 1}, {"d", 1}}));

    CliResult r2 = run_cli({"bernardi", fx("g_fig1"), "--tree", "cd,cf,ab,bd", "--vertex", "d",
                            "--edge", "dc", "--json"});
    REQUIRE(Json::parse(r2.out)["divisor"] == Json({{"c", 1}, {"f", 1}}));
}

TEST_CASE("cli check") {
    SECTION("figure-1 at d disagrees") {
        CliResult r = run_cli({"check", fx("g_fig1"), "--vertex", "d", "--json"});
        REQUIRE(r.code == 0);
        Json j = Json::parse(r.out);
        REQUIRE(j["agrees"] == false);
        REQUIRE(j.contains("counterexample"));
    }
    SECTION("full report is consistent") {
        CliResult r = run_cli({"check", fx("g_fig1")});
        REQUIRE(r.code == 0);
        Json j = Json::parse(r.out);
        REQUIRE(j["planar"] == false);
        REQUIRE(j["theorem_consistent"] == true);
    }
}

TEST_CASE("cli decompose and witness") {
    CliResult d = run_cli({"decompose", fx("g_ex2")});
    REQUIRE(d.code == 0);
    Json jd = Json::parse(d.out);
    REQUIRE(jd["kind"] == "B");
    REQUIRE(jd["h"]["type"] == "II");

    CliResult w = run_cli({"witness", fx("g_ex2")});
    REQUIRE(w.code == 0);
    Json jw = Json::parse(w.out);
    REQUIRE(jw["verified"] == true);
    REQUIRE(jw["provenance"] == "PropB-an");
    REQUIRE(jw["sink"] == "a2");

    CliResult w2 = run_cli({"witness", fx("g_fig1")});
    REQUIRE(Json::parse(w2.out)["provenance"] == "PropA");

    SECTION("planar input is an input error") {
        REQUIRE(run_cli({"decompose", fx("triangle")}).code == 2);
    }
    SECTION("multigraph witness is rejected") {
        REQUIRE(run_cli({"witness", fx("g_rem")}).code == 2);
    }
}

TEST_CASE("cli verify-theorem") {
    SECTION("multigraph exemption") {
        CliResult r = run_cli({"verify-theorem", fx("g_rem")});
        REQUIRE(r.code == 0);
        Json j = Json::parse(r.out);
        REQUIRE(j["theorem_consistent"] == true);
        REQUIRE_FALSE(j.contains("witness"));
    }
    SECTION("simple non-planar graph gets a verified witness") {
        CliResult r = run_cli({"verify-theorem", fx("g_caseB2")});
        REQUIRE(r.code == 0);
        Json j = Json::parse(r.out);
        REQUIRE(j["witness"]["verified"] == true);
    }
}

TEST_CASE("cli enumerate") {
    CliResult r = run_cli({"enumerate", "--max-vertices", "3", "--max-edges", "3", "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j["violations"] == 0);
    REQUIRE(j["complete"] == true);
}

TEST_CASE("cli fixtures") {
    CliResult list = run_cli({"fixtures"});
    REQUIRE(list.code == 0);
    REQUIRE(list.out.find("g_fig1") != std::string::npos);

    auto dir = std::filesystem::temp_directory_path() / "torsor_lab_fixture_out";
    std::filesystem::remove_all(dir);
    CliResult w = run_cli({"fixtures", "--out", dir.string()});
    REQUIRE(w.code == 0);
    RibbonGraph g = load_graph_file((dir / "g_ex2.json").string());
    REQUIRE(g == fixtures::g_ex2());
}

TEST_CASE("cli input errors exit with 2") {
    REQUIRE(run_cli({"info", "/nonexistent/file.json"}).code == 2);
    REQUIRE(run_cli({"rotor", fx("g_fig1"), "--tree", "ca,cf,ab", "--chip", "c", "--sink", "d"})
                .code == 2); // not a spanning tree
    REQUIRE(run_cli({"check", fx("g_fig1"), "--vertex", "zz"}).code == 2);
    REQUIRE(run_cli({"bogus-command"}).code == 2);
}

TEST_CASE("divisor and class serialization") {
    RibbonGraph g = fixtures::g_ex2();
    Divisor d = testing::divisor_of(g, {{"c", 2}, {"a2", -1}, {"f2", -1}});
    Json j = divisor_to_json(g, d);
    REQUIRE(j == Json({{"c", 2}, {"a2", -1}, {"f2", -1}}));
    REQUIRE(divisor_from_json(g, j) == d);
    REQUIRE_THROWS_AS(divisor_from_json(g, Json({{"zz", 1}})), InputError);

    Json cls = pic_class_to_json(g, pic_class(g, d));
    REQUIRE(cls["q"] == "c");
    REQUIRE(cls["residues"].is_array());
}

TEST_CASE("fixture files in the repo match the builders") {
    // The committed corpus must stay in sync with the code.
    std::string repo_dir = "fixtures";
    for (const char* probe : {"../fixtures", "../../fixtures"})
        if (!std::filesystem::exists(repo_dir)) repo_dir = probe;
    if (!std::filesystem::exists(repo_dir)) {
        WARN("fixtures directory not found; run `torsorlab fixtures --out fixtures`");
        return;
    }
    for (const auto& f : fixtures::all_fixtures()) {
        std::ifstream in(repo_dir + "/" + f.name + ".json");
        REQUIRE(in.good());
        std::stringstream buffer;
        buffer << in.rdbuf();
        INFO(f.name);
        REQUIRE(buffer.str() == graph_to_string(f.build()));
    }
}
