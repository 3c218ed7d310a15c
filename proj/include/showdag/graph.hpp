#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "showdag/errors.hpp"

namespace showdag {

// Variable roles. At most one node per non-Generic role may appear in a
// diagram; Generic nodes are identified by their id alone.
enum class VariableRole {
    Input,                 // X
    TaskLabel,             // Y
    ModelPrediction,       // Yhat
    ModelError,            // Z
    HumanTaskLabel,        // YH
    HumanModelPrediction,  // YhatH
    HumanModelError,       // ZH
    Intuition,             // H
    Explanation,           // E
    Generic,
};

inline const char* role_id(VariableRole r) {
    switch (r) {
        case VariableRole::Input: return "X";
        case VariableRole::TaskLabel: return "Y";
        case VariableRole::ModelPrediction: return "Yhat";
        case VariableRole::ModelError: return "Z";
        case VariableRole::HumanTaskLabel: return "YH";
        case VariableRole::HumanModelPrediction: return "YhatH";
        case VariableRole::HumanModelError: return "ZH";
        case VariableRole::Intuition: return "H";
        case VariableRole::Explanation: return "E";
        case VariableRole::Generic: return "";
    }
    return "";
}

// Function controllers annotating links (or, for a derived node such as the
// explanation, the node itself). They are context tags, not variables.
namespace tags {
inline constexpr const char* task = "f";
inline constexpr const char* model = "g";
inline constexpr const char* error = "z";
inline constexpr const char* human_task = "fH";
inline constexpr const char* human_model = "gH";
inline constexpr const char* human_error = "zH";
}  // namespace tags

inline bool is_standard_tag(const std::string& s) {
    return s == tags::task || s == tags::model || s == tags::error ||
           s == tags::human_task || s == tags::human_model || s == tags::human_error;
}

struct Node {
    std::string id;
    VariableRole role = VariableRole::Generic;
    // Function the node is derived from (used by the explanation node, which
    // has no variable parents but is produced by the model function).
    std::optional<std::string> controller;
    std::string label;  // display label; defaults to id

    friend bool operator==(const Node& a, const Node& b) {
        return a.id == b.id && a.role == b.role && a.controller == b.controller;
    }
};

enum class EdgeKind {
    Directed,       // solid arrow from -> to
    Ambiguous,      // dashed undirected link, direction not assumed
    Correlational,  // dashed bidirected link, possible latent common cause
};

struct Edge {
    std::string from;
    std::string to;
    EdgeKind kind = EdgeKind::Directed;
    std::optional<std::string> controller;

    bool touches(const std::string& id) const { return from == id || to == id; }
    std::string other(const std::string& id) const { return from == id ? to : from; }

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.from == b.from && a.to == b.to && a.kind == b.kind && a.controller == b.controller;
    }
    friend bool operator<(const Edge& a, const Edge& b) {
        auto key = [](const Edge& e) {
            return std::tie(e.kind, e.from, e.to, e.controller);
        };
        return key(a) < key(b);
    }
};

inline Edge directed(std::string from, std::string to, std::optional<std::string> controller = {}) {
    return Edge{std::move(from), std::move(to), EdgeKind::Directed, std::move(controller)};
}

inline Edge ambiguous(std::string a, std::string b, std::optional<std::string> controller = {}) {
    if (b < a) std::swap(a, b);  // unordered pair, stored normalized
    return Edge{std::move(a), std::move(b), EdgeKind::Ambiguous, std::move(controller)};
}

inline Edge correlational(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return Edge{std::move(a), std::move(b), EdgeKind::Correlational, std::nullopt};
}

struct Violation {
    enum class Kind {
        DuplicateNodeId,
        DuplicateRole,
        UnknownEndpoint,
        SelfLoop,
        DirectedCycle,
        BadEquivalence,
    };
    Kind kind;
    std::string detail;
};

inline const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::DuplicateNodeId: return "duplicate-node-id";
        case Violation::Kind::DuplicateRole: return "duplicate-role";
        case Violation::Kind::UnknownEndpoint: return "unknown-endpoint";
        case Violation::Kind::SelfLoop: return "self-loop";
        case Violation::Kind::DirectedCycle: return "directed-cycle";
        case Violation::Kind::BadEquivalence: return "bad-equivalence";
    }
    return "?";
}

// A causal diagram: nodes, three flavors of links, and declared node
// equivalences (a core variable collapsed with its human counterpart).
//
// Diagrams are immutable values; every mutator returns a new diagram, so any
// diagram can be shared freely across threads.
class Diagram {
public:
    Diagram() = default;

    // Builds an edgeless diagram over the given (non-Generic) roles.
    static Diagram from_roles(const std::vector<VariableRole>& roles) {
        Diagram d;
        for (VariableRole r : roles) {
            if (r == VariableRole::Generic)
                throw ConfigError("from_roles: generic nodes need an explicit id, use with_generic");
            if (d.find_role(r))
                throw DuplicateRole(std::string("duplicate role node: ") + role_id(r));
            d.nodes_.push_back(Node{role_id(r), r, std::nullopt, role_id(r)});
        }
        return d;
    }

    // Assembles a diagram without any checking; pair with validate().
    static Diagram unchecked(std::vector<Node> nodes, std::vector<Edge> edges,
                             std::vector<std::pair<std::string, std::string>> equivalences = {}) {
        Diagram d;
        d.nodes_ = std::move(nodes);
        d.edges_ = std::move(edges);
        d.equivalences_ = std::move(equivalences);
        return d;
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::pair<std::string, std::string>>& equivalences() const {
        return equivalences_;
    }

    bool has_node(const std::string& id) const {
        return std::any_of(nodes_.begin(), nodes_.end(), [&](const Node& n) { return n.id == id; });
    }

    const Node* node(const std::string& id) const {
        for (const Node& n : nodes_)
            if (n.id == id) return &n;
        return nullptr;
    }

    std::optional<std::string> find_role(VariableRole r) const {
        for (const Node& n : nodes_)
            if (n.role == r) return n.id;
        return std::nullopt;
    }

    std::vector<Edge> ambiguous_edges() const {
        std::vector<Edge> out;
        for (const Edge& e : edges_)
            if (e.kind == EdgeKind::Ambiguous) out.push_back(e);
        return out;
    }

    bool realized() const { return ambiguous_edges().empty(); }

    Diagram with_node(Node n) const {
        if (has_node(n.id)) throw DuplicateRole("node id already present: " + n.id);
        if (n.role != VariableRole::Generic && find_role(n.role))
            throw DuplicateRole(std::string("duplicate role node: ") + role_id(n.role));
        Diagram d = *this;
        if (n.label.empty()) n.label = n.id;
        d.nodes_.push_back(std::move(n));
        return d;
    }

    Diagram with_generic(const std::string& id, const std::string& label = "") const {
        return with_node(Node{id, VariableRole::Generic, std::nullopt, label.empty() ? id : label});
    }

    Diagram with_edge(const Edge& e) const {
        if (!has_node(e.from)) throw UnknownNode("unknown edge endpoint: " + e.from);
        if (!has_node(e.to)) throw UnknownNode("unknown edge endpoint: " + e.to);
        if (e.from == e.to) throw SelfLoop("self-loop on " + e.from);
        Diagram d = *this;
        Edge copy = e;
        if (copy.kind != EdgeKind::Directed && copy.to < copy.from) std::swap(copy.from, copy.to);
        d.edges_.push_back(std::move(copy));
        if (e.kind == EdgeKind::Directed && d.has_directed_cycle())
            throw CycleIntroduced("edge " + e.from + " -> " + e.to + " creates a directed cycle");
        return d;
    }

    // Wholesale edge replacement used by the graph surgery operators.
    Diagram replacing_edges(std::vector<Edge> edges) const {
        Diagram d = *this;
        d.edges_ = std::move(edges);
        for (const Edge& e : d.edges_) {
            if (!d.has_node(e.from) || !d.has_node(e.to))
                throw UnknownNode("unknown edge endpoint: " + e.from + "/" + e.to);
            if (e.from == e.to) throw SelfLoop("self-loop on " + e.from);
        }
        if (d.has_directed_cycle()) throw CycleIntroduced("edge set contains a directed cycle");
        return d;
    }

    Diagram with_equivalence(const std::string& a, const std::string& b) const {
        if (!has_node(a) || !has_node(b)) throw UnknownNode("unknown equivalence member");
        Diagram d = *this;
        auto pair = std::make_pair(std::min(a, b), std::max(a, b));
        if (std::find(d.equivalences_.begin(), d.equivalences_.end(), pair) ==
            d.equivalences_.end())
            d.equivalences_.push_back(pair);
        return d;
    }

    std::vector<Violation> validate() const {
        std::vector<Violation> out;
        std::set<std::string> ids;
        std::map<VariableRole, int> role_count;
        for (const Node& n : nodes_) {
            if (!ids.insert(n.id).second)
                out.push_back({Violation::Kind::DuplicateNodeId, n.id});
            if (n.role != VariableRole::Generic && ++role_count[n.role] == 2)
                out.push_back({Violation::Kind::DuplicateRole, role_id(n.role)});
        }
        for (const Edge& e : edges_) {
            if (!ids.count(e.from)) out.push_back({Violation::Kind::UnknownEndpoint, e.from});
            if (!ids.count(e.to)) out.push_back({Violation::Kind::UnknownEndpoint, e.to});
            if (e.from == e.to) out.push_back({Violation::Kind::SelfLoop, e.from});
        }
        if (has_directed_cycle())
            out.push_back({Violation::Kind::DirectedCycle, "directed subgraph is cyclic"});
        for (const auto& [a, b] : equivalences_) {
            if (!ids.count(a) || !ids.count(b)) {
                out.push_back({Violation::Kind::BadEquivalence, a + " = " + b});
                continue;
            }
            if (!equivalence_allowed(a, b))
                out.push_back({Violation::Kind::BadEquivalence, a + " = " + b});
        }
        return out;
    }

    // Every assignment of a direction to each ambiguous link that keeps the
    // directed graph acyclic. Correlational links are carried over unchanged.
    std::vector<Diagram> realizations() const {
        std::vector<std::size_t> amb;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].kind == EdgeKind::Ambiguous) amb.push_back(i);
        if (amb.size() > 16) throw TooLarge("too many ambiguous links to enumerate");
        std::vector<Diagram> out;
        for (std::size_t mask = 0; mask < (std::size_t(1) << amb.size()); ++mask) {
            Diagram cand = *this;
            for (std::size_t i = 0; i < amb.size(); ++i) {
                Edge& e = cand.edges_[amb[i]];
                e.kind = EdgeKind::Directed;
                if (mask & (std::size_t(1) << i)) std::swap(e.from, e.to);
            }
            if (!cand.has_directed_cycle()) out.push_back(std::move(cand));
        }
        return out;
    }

    // Structural, order-independent equality.
    friend bool operator==(const Diagram& a, const Diagram& b) {
        return a.normalized_key() == b.normalized_key();
    }
    friend bool operator!=(const Diagram& a, const Diagram& b) { return !(a == b); }

    std::string normalized_key() const {
        std::vector<std::string> parts;
        for (const Node& n : nodes_) {
            std::string role = n.role == VariableRole::Generic ? "generic" : role_id(n.role);
            parts.push_back("n:" + n.id + "/" + role + "/" + n.controller.value_or("-"));
        }
        for (const Edge& e : edges_) {
            const char* k = e.kind == EdgeKind::Directed     ? "d"
                            : e.kind == EdgeKind::Ambiguous ? "a"
                                                            : "c";
            parts.push_back(std::string("e:") + k + ":" + e.from + ">" + e.to + "/" +
                            e.controller.value_or("-"));
        }
        for (const auto& [a, b] : equivalences_) parts.push_back("q:" + a + "=" + b);
        std::sort(parts.begin(), parts.end());
        std::string key;
        for (const std::string& p : parts) {
            key += p;
            key += ';';
        }
        return key;
    }

private:
    static bool core_human_pair(VariableRole a, VariableRole b) {
        return (a == VariableRole::TaskLabel && b == VariableRole::HumanTaskLabel) ||
               (a == VariableRole::ModelPrediction && b == VariableRole::HumanModelPrediction) ||
               (a == VariableRole::ModelError && b == VariableRole::HumanModelError);
    }

    bool equivalence_allowed(const std::string& a, const std::string& b) const {
        const Node* na = node(a);
        const Node* nb = node(b);
        if (!na || !nb) return false;
        return core_human_pair(na->role, nb->role) || core_human_pair(nb->role, na->role);
    }

    bool has_directed_cycle() const {
        // Kahn's algorithm over the directed subgraph
        std::map<std::string, int> indeg;
        std::map<std::string, std::vector<std::string>> children;
        for (const Node& n : nodes_) indeg[n.id] = 0;
        for (const Edge& e : edges_) {
            if (e.kind != EdgeKind::Directed) continue;
            if (!indeg.count(e.from) || !indeg.count(e.to)) continue;
            children[e.from].push_back(e.to);
            ++indeg[e.to];
        }
        std::vector<std::string> ready;
        for (const auto& [id, deg] : indeg)
            if (deg == 0) ready.push_back(id);
        std::size_t seen = 0;
        while (!ready.empty()) {
            std::string id = ready.back();
            ready.pop_back();
            ++seen;
            for (const std::string& c : children[id])
                if (--indeg[c] == 0) ready.push_back(c);
        }
        return seen != indeg.size();
    }

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::pair<std::string, std::string>> equivalences_;
};

}  // namespace showdag
