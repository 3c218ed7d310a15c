#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "showdag/graph.hpp"

namespace showdag {

// JSON document schema:
//   { "nodes": [{"id", "role", "controller"?, "label"?}],
//     "edges": [{"from", "to", "kind", "controller"?}],
//     "equivalences": [[a, b]] }

inline std::string role_name(VariableRole r) {
    return r == VariableRole::Generic ? "Generic" : role_id(r);
}

inline VariableRole role_from_name(const std::string& s) {
    static const std::vector<std::pair<std::string, VariableRole>> table = {
        {"X", VariableRole::Input},
        {"Y", VariableRole::TaskLabel},
        {"Yhat", VariableRole::ModelPrediction},
        {"Z", VariableRole::ModelError},
        {"YH", VariableRole::HumanTaskLabel},
        {"YhatH", VariableRole::HumanModelPrediction},
        {"ZH", VariableRole::HumanModelError},
        {"H", VariableRole::Intuition},
        {"E", VariableRole::Explanation},
        {"Generic", VariableRole::Generic},
    };
    for (const auto& [name, role] : table)
        if (name == s) return role;
    throw ConfigError("unknown variable role: " + s);
}

inline std::string edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::Directed: return "directed";
        case EdgeKind::Ambiguous: return "ambiguous";
        case EdgeKind::Correlational: return "correlational";
    }
    return "?";
}

inline EdgeKind edge_kind_from_name(const std::string& s) {
    if (s == "directed") return EdgeKind::Directed;
    if (s == "ambiguous") return EdgeKind::Ambiguous;
    if (s == "correlational") return EdgeKind::Correlational;
    throw ConfigError("unknown edge kind: " + s);
}

inline nlohmann::ordered_json diagram_to_json(const Diagram& d) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const Node& n : d.nodes()) {
        nlohmann::ordered_json jn;
        jn["id"] = n.id;
        jn["role"] = role_name(n.role);
        if (n.controller) jn["controller"] = *n.controller;
        if (!n.label.empty() && n.label != n.id) jn["label"] = n.label;
        j["nodes"].push_back(jn);
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : d.edges()) {
        nlohmann::ordered_json je;
        je["from"] = e.from;
        je["to"] = e.to;
        je["kind"] = edge_kind_name(e.kind);
        if (e.controller) je["controller"] = *e.controller;
        j["edges"].push_back(je);
    }
    j["equivalences"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : d.equivalences()) j["equivalences"].push_back({a, b});
    return j;
}

// Parses a diagram document. Throws ConfigError with the collected violation
// list when the document does not describe a valid diagram.
inline Diagram diagram_from_json(const nlohmann::json& j) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<std::pair<std::string, std::string>> equivalences;
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw ConfigError("diagram document needs a nodes array");
    for (const auto& jn : j["nodes"]) {
        Node n;
        n.id = jn.at("id").get<std::string>();
        n.role = role_from_name(jn.value("role", std::string("Generic")));
        if (jn.contains("controller")) n.controller = jn["controller"].get<std::string>();
        n.label = jn.value("label", n.id);
        nodes.push_back(std::move(n));
    }
    for (const auto& je : j.value("edges", nlohmann::json::array())) {
        Edge e;
        e.from = je.at("from").get<std::string>();
        e.to = je.at("to").get<std::string>();
        e.kind = edge_kind_from_name(je.value("kind", std::string("directed")));
        if (je.contains("controller")) e.controller = je["controller"].get<std::string>();
        if (e.kind != EdgeKind::Directed && e.to < e.from) std::swap(e.from, e.to);
        edges.push_back(std::move(e));
    }
    for (const auto& jq : j.value("equivalences", nlohmann::json::array())) {
        if (!jq.is_array() || jq.size() != 2)
            throw ConfigError("equivalences must be pairs of node ids");
        std::string a = jq[0].get<std::string>();
        std::string b = jq[1].get<std::string>();
        equivalences.emplace_back(std::min(a, b), std::max(a, b));
    }
    Diagram d = Diagram::unchecked(std::move(nodes), std::move(edges), std::move(equivalences));
    std::vector<Violation> violations = d.validate();
    if (!violations.empty()) {
        std::string msg = "invalid diagram:";
        for (const Violation& v : violations) msg += std::string(" [") + to_string(v.kind) + " " + v.detail + "]";
        throw ConfigError(msg);
    }
    return d;
}

}  // namespace showdag
