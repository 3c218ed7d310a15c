#pragma once

#include <map>
#include <sstream>
#include <string>

#include "showdag/graph.hpp"

namespace showdag {

// Graphviz export. Directed links are solid arrows, ambiguous links dashed
// lines without arrowheads, correlational links dashed double arrows. Edge
// controller tags render as edge labels, a node-level controller as a box
// with an arrow into its node; declared-equivalent nodes are drawn merged.
inline std::string diagram_to_dot(const Diagram& d, const std::string& name = "diagram") {
    // union-find over equivalences so merged nodes render once
    std::map<std::string, std::string> rep;
    for (const Node& n : d.nodes()) rep[n.id] = n.id;
    auto find = [&](std::string id) {
        while (rep[id] != id) id = rep[id];
        return id;
    };
    for (const auto& [a, b] : d.equivalences()) rep[find(b)] = find(a);

    std::map<std::string, std::string> merged_label;
    for (const Node& n : d.nodes()) {
        std::string r = find(n.id);
        std::string& label = merged_label[r];
        if (!label.empty()) label += " = ";
        label += n.label.empty() ? n.id : n.label;
    }

    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n";
    os << "  rankdir=LR;\n  node [shape=ellipse];\n";
    for (const auto& [r, label] : merged_label)
        os << "  \"" << r << "\" [label=\"" << label << "\"];\n";
    int tag_counter = 0;
    for (const Node& n : d.nodes()) {
        if (!n.controller) continue;
        std::string box = "tag" + std::to_string(tag_counter++);
        os << "  \"" << box << "\" [label=\"" << *n.controller << "\", shape=box];\n";
        os << "  \"" << box << "\" -> \"" << find(n.id) << "\";\n";
    }
    for (const Edge& e : d.edges()) {
        std::string from = find(e.from);
        std::string to = find(e.to);
        if (from == to) continue;  // collapsed by an equivalence
        os << "  \"" << from << "\" -> \"" << to << "\"";
        std::string attrs;
        switch (e.kind) {
            case EdgeKind::Directed: break;
            case EdgeKind::Ambiguous: attrs = "dir=none, style=dashed"; break;
            case EdgeKind::Correlational: attrs = "dir=both, style=dashed"; break;
        }
        if (e.controller) {
            if (!attrs.empty()) attrs += ", ";
            attrs += "label=\"" + *e.controller + "\"";
        }
        if (!attrs.empty()) os << " [" << attrs << "]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace showdag
