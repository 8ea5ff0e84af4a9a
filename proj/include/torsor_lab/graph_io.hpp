#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsor_lab/divisor.hpp"
#include "torsor_lab/picard.hpp"
#include "torsor_lab/ribbon_graph.hpp"
#include "torsor_lab/torsor_check.hpp"

namespace torsor_lab {

using Json = nlohmann::json;

/// Canonical graph JSON:
/// {"format":1, "vertices":[...], "rotations":{label:[dart,...]},
///  "alpha":[[d,d'],...]} with alpha pairs sorted by first dart.
inline Json graph_to_json(const RibbonGraph& g) {
    Json j;
    j["format"] = 1;
    j["vertices"] = g.labels();
    Json rot = Json::object();
    for (int v = 0; v < g.vertex_count(); ++v) rot[g.label(v)] = g.darts_at(v);
    j["rotations"] = std::move(rot);
    Json alpha = Json::array();
    for (int e : g.edge_ids()) alpha.push_back({e, g.alpha(e)});
    j["alpha"] = std::move(alpha);
    return j;
}

inline RibbonGraph graph_from_json(const Json& j) {
    try {
        std::vector<std::string> labels = j.at("vertices").get<std::vector<std::string>>();
        const Json& rot = j.at("rotations");
        std::vector<std::vector<int>> rotations;
        rotations.reserve(labels.size());
        for (const auto& label : labels) {
            if (!rot.contains(label)) throw InputError("missing rotation for vertex " + label);
            rotations.push_back(rot.at(label).get<std::vector<int>>());
        }
        std::vector<std::pair<int, int>> alpha_pairs;
        for (const auto& pair : j.at("alpha")) {
            if (!pair.is_array() || pair.size() != 2) throw InputError("alpha entries must be pairs");
            alpha_pairs.emplace_back(pair[0].get<int>(), pair[1].get<int>());
        }
        return from_rotations(labels, rotations, alpha_pairs);
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad graph JSON: ") + e.what());
    }
}

inline std::string graph_to_string(const RibbonGraph& g) {
    return graph_to_json(g).dump(2) + "\n";
}

/// Simple-graph shorthand: one line per vertex, "v: u1 u2 u3" giving the
/// counterclockwise neighbor order at v. Multi-edges and loops are rejected.
inline RibbonGraph graph_from_shorthand(const std::string& text) {
    std::vector<std::string> labels;
    std::vector<std::vector<std::string>> neighbor_names;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw InputError("shorthand line needs 'v: u1 u2 ...'");
        std::istringstream head(line.substr(0, colon));
        std::string v;
        head >> v;
        std::string extra;
        if (v.empty() || (head >> extra)) throw InputError("bad vertex name in shorthand");
        labels.push_back(v);
        neighbor_names.emplace_back();
        std::istringstream restTokens(line.substr(colon + 1));
        std::string u;
        while (restTokens >> u) neighbor_names.back().push_back(u);
    }
    if (labels.empty()) throw InputError("empty graph text");
    std::vector<std::vector<int>> neighbors(labels.size());
    auto index_of = [&](const std::string& name) {
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return static_cast<int>(i);
        throw InputError("unknown vertex in shorthand: " + name);
    };
    for (size_t i = 0; i < labels.size(); ++i)
        for (const auto& name : neighbor_names[i]) neighbors[i].push_back(index_of(name));
    return from_neighbor_lists(labels, neighbors);
}

/// Loads a graph file: JSON when the first non-space byte is '{', shorthand
/// otherwise.
inline RibbonGraph load_graph_text(const std::string& text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) throw InputError("empty graph file");
    if (text[pos] == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception& e) {
            throw InputError(std::string("JSON parse error: ") + e.what());
        }
        return graph_from_json(j);
    }
    return graph_from_shorthand(text);
}

inline RibbonGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_graph_text(buffer.str());
}

/// Divisors serialize as {label: coefficient}, zero entries omitted.
inline Json divisor_to_json(const RibbonGraph& g, const Divisor& d) {
    Json j = Json::object();
    for (int v = 0; v < g.vertex_count(); ++v)
        if (d[v] != 0) j[g.label(v)] = d[v];
    return j;
}

inline Divisor divisor_from_json(const RibbonGraph& g, const Json& j) {
    Divisor d(g.vertex_count());
    for (auto it = j.begin(); it != j.end(); ++it) {
        int v = g.vertex_by_label(it.key());
        if (v < 0) throw InputError("divisor names unknown vertex " + it.key());
        d[v] = it.value().get<long long>();
    }
    return d;
}

inline Json pic_class_to_json(const RibbonGraph& g, const PicClass& cls) {
    Json j;
    j["q"] = g.label(cls.base_vertex);
    j["residues"] = cls.residues;
    return j;
}

inline Json report_to_json(const RibbonGraph& g, const AgreementReport& report) {
    Json j;
    j["format"] = 1;
    j["planar"] = report.planar;
    Json per = Json::object();
    for (int v = 0; v < g.vertex_count(); ++v) {
        Json entry;
        entry["agrees"] = report.per_vertex[v].agrees;
        if (report.per_vertex[v].counterexample) {
            const auto& [x, tree] = *report.per_vertex[v].counterexample;
            entry["counterexample"] = {{"chip", g.label(x)}, {"tree", tree.edges}};
        }
        per[g.label(v)] = std::move(entry);
    }
    j["vertices"] = std::move(per);
    j["theorem_consistent"] = report.theorem_consistent;
    return j;
}

inline Json witness_to_json(const RibbonGraph& g, const DisagreementWitness& w, bool verified) {
    Json j;
    j["format"] = 1;
    j["sink"] = g.label(w.sink);
    j["chip"] = g.label(w.chip);
    j["tree"] = w.tree.edges;
    j["provenance"] = provenance_name(w.provenance);
    j["verified"] = verified;
    return j;
}

} // namespace torsor_lab
