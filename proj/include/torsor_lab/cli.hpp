#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torsor_lab/decompose.hpp"
#include "torsor_lab/enumerate.hpp"
#include "torsor_lab/fixtures.hpp"
#include "torsor_lab/graph_io.hpp"

namespace torsor_lab::cli {

namespace detail {

inline int parse_vertex(const RibbonGraph& g, const std::string& name) {
    int v = g.vertex_by_label(name);
    if (v < 0) throw InputError("unknown vertex: " + name);
    return v;
}

/// Edge token: an edge id ("#4" or "4"), "u-v", or two concatenated labels
/// ("ca"). For parallel edges use the id form.
inline int parse_edge_token(const RibbonGraph& g, const std::string& token) {
    std::string t = token;
    if (!t.empty() && t[0] == '#') t.erase(0, 1);
    if (!t.empty() && t.find_first_not_of("0123456789") == std::string::npos) {
        int e = std::stoi(t);
        if (g.edge_index(e) < 0) throw InputError("no edge with id " + t);
        return e;
    }
    auto find_edge = [&](const std::string& a, const std::string& b) -> int {
        int u = g.vertex_by_label(a), v = g.vertex_by_label(b);
        if (u < 0 || v < 0) return -1;
        for (int e : g.edge_ids()) {
            auto [p, q] = g.edge_endpoints(e);
            if ((p == u && q == v) || (p == v && q == u)) return e;
        }
        return -1;
    };
    auto dash = t.find('-');
    if (dash != std::string::npos) {
        int e = find_edge(t.substr(0, dash), t.substr(dash + 1));
        if (e < 0) throw InputError("no edge " + t);
        return e;
    }
    for (size_t cut = 1; cut < t.size(); ++cut) {
        int e = find_edge(t.substr(0, cut), t.substr(cut));
        if (e >= 0) return e;
    }
    throw InputError("cannot parse edge token: " + token);
}

inline SpanningTree parse_tree(const RibbonGraph& g, const std::string& spec) {
    std::vector<int> edges;
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ',')) {
        if (!token.empty()) edges.push_back(parse_edge_token(g, token));
    }
    SpanningTree t{edges};
    if (!is_spanning_tree(g, t)) throw InputError("edge list is not a spanning tree: " + spec);
    return t;
}

/// Dart token "uv" or "u-v": the dart at u toward v.
inline int parse_dart(const RibbonGraph& g, const std::string& token) {
    auto try_pair = [&](const std::string& a, const std::string& b) -> int {
        int u = g.vertex_by_label(a), v = g.vertex_by_label(b);
        if (u < 0 || v < 0) return -1;
        return g.dart_toward(u, v);
    };
    auto dash = token.find('-');
    if (dash != std::string::npos) {
        int d = try_pair(token.substr(0, dash), token.substr(dash + 1));
        if (d < 0) throw InputError("no dart " + token);
        return d;
    }
    for (size_t cut = 1; cut < token.size(); ++cut) {
        int d = try_pair(token.substr(0, cut), token.substr(cut));
        if (d >= 0) return d;
    }
    throw InputError("cannot parse dart token: " + token);
}

inline std::string edge_name(const RibbonGraph& g, int e) {
    auto [u, v] = g.edge_endpoints(e);
    return g.label(u) + "-" + g.label(v) + "#" + std::to_string(e);
}

inline Json tree_json(const SpanningTree& t) {
    Json j = Json::array();
    for (int e : t.edges) j.push_back(e);
    return j;
}

inline std::string tree_human(const RibbonGraph& g, const SpanningTree& t) {
    std::string s;
    for (int e : t.edges) {
        if (!s.empty()) s += " ";
        s += edge_name(g, e);
    }
    return s;
}

inline Json path_json(const RibbonGraph& g, const DartPath& p) {
    Json j = Json::array();
    j.push_back(g.label(path_source(g, p)));
    for (int d : p.darts) j.push_back(g.label(g.head(d)));
    return j;
}

} // namespace detail

/// Runs the command line. Exit codes: 0 success, 1 theorem violation or
/// failed witness, 2 input error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact rotor-routing and Bernardi torsor computations on ribbon graphs"};
    app.require_subcommand(1);

    std::string file, tree_spec, chip, sink, vertex, edge_token, out_dir, checkpoint;
    bool json = false, trace = false, multigraphs = false, no_lemmas = false;
    int limit = 0, max_vertices = 4, max_edges = 8, threads = 0;
    long long rotation_cap = 0, limit_graphs = 0;

    auto add_common = [&](CLI::App* cmd, bool with_file = true) {
        if (with_file) cmd->add_option("file", file, "graph file (JSON or shorthand)")->required();
        cmd->add_flag("--json", json, "emit JSON");
        return cmd;
    };

    auto* cmd_info = add_common(app.add_subcommand("info", "graph overview"));
    auto* cmd_genus = add_common(app.add_subcommand("genus", "faces and surface genus"));
    auto* cmd_trees = add_common(app.add_subcommand("trees", "list spanning trees"));
    cmd_trees->add_option("--limit", limit, "print at most this many");
    auto* cmd_rotor = add_common(app.add_subcommand("rotor", "run the rotor-routing process"));
    cmd_rotor->add_option("--tree", tree_spec, "spanning tree, comma-separated edges")->required();
    cmd_rotor->add_option("--chip", chip, "chip vertex")->required();
    cmd_rotor->add_option("--sink", sink, "sink vertex")->required();
    cmd_rotor->add_flag("--trace", trace, "emit one JSON line per step");
    auto* cmd_bernardi = add_common(app.add_subcommand("bernardi", "run the Bernardi tour"));
    cmd_bernardi->add_option("--tree", tree_spec, "spanning tree")->required();
    cmd_bernardi->add_option("--vertex", vertex, "basepoint vertex")->required();
    cmd_bernardi->add_option("--edge", edge_token, "basepoint dart, e.g. dc (default: canonical)");
    cmd_bernardi->add_flag("--trace", trace, "emit one JSON line per dart");
    auto* cmd_check = add_common(app.add_subcommand("check", "torsor agreement"));
    cmd_check->add_option("--vertex", vertex, "only this basepoint");
    auto* cmd_decompose = add_common(app.add_subcommand("decompose", "type A/B decomposition"));
    auto* cmd_witness = add_common(app.add_subcommand("witness", "disagreement witness"));
    auto* cmd_verify = add_common(
        app.add_subcommand("verify-theorem", "agreement report plus witness when applicable"));
    auto* cmd_enum = add_common(app.add_subcommand("enumerate", "exhaustive verification"), false);
    cmd_enum->add_option("--max-vertices", max_vertices, "vertex bound")->required();
    cmd_enum->add_option("--max-edges", max_edges, "edge bound")->required();
    cmd_enum->add_flag("--multigraphs", multigraphs, "include multigraphs and loops");
    cmd_enum->add_option("--rotation-cap", rotation_cap, "skip graphs with more rotation systems");
    cmd_enum->add_option("--threads", threads, "worker threads (default TORSOR_LAB_THREADS)");
    cmd_enum->add_option("--checkpoint", checkpoint, "checkpoint file for restartable runs");
    cmd_enum->add_option("--limit", limit_graphs, "process at most this many graphs");
    cmd_enum->add_flag("--no-lemma-suites", no_lemmas, "skip the per-lemma property checks");
    auto* cmd_fixtures = add_common(app.add_subcommand("fixtures", "built-in graph corpus"), false);
    cmd_fixtures->add_option("--out", out_dir, "write fixture JSON files to this directory");

    std::vector<const char*> argv = {"torsorlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_info->parsed()) {
            RibbonGraph g = load_graph_file(file);
            Json j;
            j["format"] = 1;
            j["vertices"] = g.labels();
            j["edge_count"] = g.edge_count();
            j["genus"] = surface_genus(g);
            j["planar"] = is_planar_ribbon(g);
            j["simple"] = g.simple();
            Json degrees = Json::object();
            for (int v = 0; v < g.vertex_count(); ++v) degrees[g.label(v)] = g.degree(v);
            j["degrees"] = degrees;
            j["spanning_trees"] = picard_group_order(g).convert_to<long long>();
            std::vector<long long> factors;
            if (g.vertex_count() > 1)
                for (long long d : snf_data(g, 0).diagonal)
                    if (d != 1) factors.push_back(d);
            j["picard_invariant_factors"] = factors;
            if (json) {
                out << j.dump(2) << "\n";
            } else {
                out << "vertices: " << g.vertex_count() << ", edges: " << g.edge_count()
                    << ", genus: " << j["genus"] << (j["planar"].get<bool>() ? " (planar)" : "")
                    << (j["simple"].get<bool>() ? "" : " (multigraph)") << "\n";
                out << "spanning trees: " << j["spanning_trees"] << ", Pic0 =";
                if (factors.empty()) out << " trivial";
                for (long long d : factors) out << " Z/" << d;
                out << "\n";
            }
            return 0;
        }

        if (cmd_genus->parsed()) {
            RibbonGraph g = load_graph_file(file);
            Json j;
            j["format"] = 1;
            j["faces"] = faces(g).size();
            j["genus"] = surface_genus(g);
            j["planar"] = is_planar_ribbon(g);
            if (json)
                out << j.dump(2) << "\n";
            else
                out << "faces: " << j["faces"] << ", genus: " << j["genus"]
                    << (j["planar"].get<bool>() ? " (planar ribbon graph)" : "") << "\n";
            return 0;
        }

        if (cmd_trees->parsed()) {
            RibbonGraph g = load_graph_file(file);
            auto all = spanning_trees(g);
            Json list = Json::array();
            int shown = 0;
            for (const auto& t : all) {
                if (limit > 0 && shown >= limit) break;
                ++shown;
                if (json)
                    list.push_back(detail::tree_json(t));
                else
                    out << detail::tree_human(g, t) << "\n";
            }
            if (json) {
                Json j;
                j["format"] = 1;
                j["count"] = all.size();
                j["trees"] = list;
                out << j.dump(2) << "\n";
            } else {
                out << "total: " << all.size() << "\n";
            }
            return 0;
        }

        if (cmd_rotor->parsed()) {
            RibbonGraph g = load_graph_file(file);
            SpanningTree t = detail::parse_tree(g, tree_spec);
            int x = detail::parse_vertex(g, chip), y = detail::parse_vertex(g, sink);
            std::vector<RotorStepRecord> steps;
            SpanningTree result = rotor_route_traced(g, t, x, y, steps);
            if (trace)
                for (const auto& s : steps) {
                    Json line;
                    line["step"] = s.step;
                    line["chip"] = g.label(s.chip);
                    line["changed_vertex"] = g.label(s.changed_vertex);
                    line["new_rotor_dart"] = s.new_rotor_dart;
                    out << line.dump() << "\n";
                }
            if (json) {
                Json j;
                j["format"] = 1;
                j["tree"] = detail::tree_json(result);
                j["steps"] = steps.size();
                out << j.dump(2) << "\n";
            } else {
                out << detail::tree_human(g, result) << " (" << steps.size() << " steps)\n";
            }
            return 0;
        }

        if (cmd_bernardi->parsed()) {
            RibbonGraph g = load_graph_file(file);
            SpanningTree t = detail::parse_tree(g, tree_spec);
            int v = detail::parse_vertex(g, vertex);
            int e = edge_token.empty() ? canonical_dart_at(g, v) : detail::parse_dart(g, edge_token);
            BernardiRecord rec = bernardi_tour(g, t, v, e);
            if (trace)
                for (const auto& s : rec.steps) {
                    Json line;
                    line["index"] = s.index;
                    line["dart"] = s.dart;
                    line["action"] = s.action == TourStep::Action::Traverse ? "traverse"
                                     : s.action == TourStep::Action::Cut    ? "cut"
                                                                            : "revisit-cut";
                    if (s.chip_at >= 0) line["chip_at"] = g.label(s.chip_at);
                    out << line.dump() << "\n";
                }
            if (json) {
                Json j;
                j["format"] = 1;
                j["divisor"] = divisor_to_json(g, rec.divisor);
                Json chips = Json::array();
                for (auto [edge2, vert] : rec.chip_events)
                    chips.push_back({{"edge", edge2}, {"vertex", g.label(vert)}});
                j["chip_events"] = chips;
                out << j.dump(2) << "\n";
            } else {
                out << "divisor: " << divisor_to_json(g, rec.divisor).dump() << "\n";
            }
            return 0;
        }

        if (cmd_check->parsed()) {
            RibbonGraph g = load_graph_file(file);
            if (!vertex.empty()) {
                int y = detail::parse_vertex(g, vertex);
                AgreeResult res = torsors_agree_at(g, y);
                Json j;
                j["format"] = 1;
                j["vertex"] = g.label(y);
                j["agrees"] = res.agrees;
                if (res.counterexample) {
                    j["counterexample"] = {{"chip", g.label(res.counterexample->first)},
                                           {"tree", detail::tree_json(res.counterexample->second)}};
                }
                if (json)
                    out << j.dump(2) << "\n";
                else
                    out << "b_" << g.label(y) << (res.agrees ? " = r_" : " != r_") << g.label(y)
                        << "\n";
                return 0;
            }
            AgreementReport rep = agreement_report(g);
            out << report_to_json(g, rep).dump(2) << "\n";
            return rep.theorem_consistent ? 0 : 1;
        }

        if (cmd_decompose->parsed() || cmd_witness->parsed()) {
            RibbonGraph g = load_graph_file(file);
            HDecomposition dec = classify(g);
            Json j;
            j["format"] = 1;
            j["kind"] = dec.kind == HDecomposition::Kind::A ? "A" : "B";
            if (std::holds_alternative<TypeISubgraph>(dec.h)) {
                const auto& h = std::get<TypeISubgraph>(dec.h);
                j["h"] = {{"type", "I"},
                          {"c", g.label(h.c)},
                          {"b", g.label(h.b)},
                          {"a_path", detail::path_json(g, h.a_path)},
                          {"d_path", detail::path_json(g, h.d_path)},
                          {"f_path", detail::path_json(g, h.f_path)}};
            } else {
                const auto& h = std::get<TypeIISubgraph>(dec.h);
                j["h"] = {{"type", "II"},
                          {"c", g.label(h.c)},
                          {"a_cycle", detail::path_json(g, h.a_cycle)},
                          {"f_cycle", detail::path_json(g, h.f_cycle)}};
            }
            Json g1e = Json::array(), g2e = Json::array();
            for (int pe : dec.split.g1.graph.edge_ids())
                g1e.push_back(dec.split.g1.edge_to_g(g, pe));
            for (int pe : dec.split.g2.graph.edge_ids())
                g2e.push_back(dec.split.g2.edge_to_g(g, pe));
            j["g1_edges"] = g1e;
            j["g2_edges"] = g2e;
            j["x_darts"] = dec.x_darts;
            j["y_darts"] = dec.y_darts;

            if (cmd_decompose->parsed()) {
                out << j.dump(2) << "\n";
                return 0;
            }
            if (!g.simple()) {
                err << "witness construction needs a simple graph\n";
                return 2;
            }
            DisagreementWitness w = dec.kind == HDecomposition::Kind::A ? witness_prop_A(g, dec)
                                                                        : witness_prop_B(g, dec);
            bool ok = verify_witness(g, w);
            out << witness_to_json(g, w, ok).dump(2) << "\n";
            return ok ? 0 : 1;
        }

        if (cmd_verify->parsed()) {
            RibbonGraph g = load_graph_file(file);
            AgreementReport rep = agreement_report(g);
            Json j = report_to_json(g, rep);
            j["simple"] = g.simple();
            if (!rep.planar && g.simple()) {
                HDecomposition dec = classify(g);
                DisagreementWitness w = dec.kind == HDecomposition::Kind::A
                                            ? witness_prop_A(g, dec)
                                            : witness_prop_B(g, dec);
                j["witness"] = witness_to_json(g, w, verify_witness(g, w));
            }
            out << j.dump(2) << "\n";
            return rep.theorem_consistent ? 0 : 1;
        }

        if (cmd_enum->parsed()) {
            EnumerationSpec spec;
            spec.max_vertices = max_vertices;
            spec.max_edges = max_edges;
            spec.simple_only = !multigraphs;
            spec.rotation_cap = rotation_cap;
            spec.threads = threads;
            spec.lemma_suites = !no_lemmas;
            spec.checkpoint_path = checkpoint;
            spec.limit_graphs = limit_graphs;
            EnumerationSummary summary = enumerate_and_verify(spec);
            if (json) {
                out << summary_to_json(summary).dump(2) << "\n";
            } else {
                out << "graphs: " << summary.graphs << ", rotation systems: "
                    << summary.rotation_systems << "\n";
                out << "planar (all agree): " << summary.planar_agree
                    << ", non-planar with witness: " << summary.nonplanar_disagree
                    << ", multigraph exempt: " << summary.multigraph_exempt << "\n";
                out << "violations: " << summary.violations
                    << (summary.complete ? "" : " (partial run)") << "\n";
                for (const auto& d : summary.violation_details) out << "  " << d << "\n";
            }
            return summary.violations == 0 ? 0 : 1;
        }

        if (cmd_fixtures->parsed()) {
            if (out_dir.empty()) {
                for (const auto& f : fixtures::all_fixtures())
                    out << f.name << ": " << f.description << "\n";
                return 0;
            }
            std::filesystem::create_directories(out_dir);
            for (const auto& f : fixtures::all_fixtures()) {
                std::ofstream file_out(out_dir + "/" + f.name + ".json");
                file_out << graph_to_string(f.build());
            }
            out << "wrote " << fixtures::all_fixtures().size() << " fixtures to " << out_dir
                << "\n";
            return 0;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const WitnessFailed& e) {
        err << "theorem violation: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace torsor_lab::cli
