#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "showdag/graph.hpp"

namespace showdag {

struct SeparationQuery {
    std::vector<std::string> a;
    std::vector<std::string> b;
    std::vector<std::string> given;  // node ids; function tags are accepted and ignored
};

enum class SeparationKind { Separated, Connected };

struct Verdict {
    enum class Kind { Separated, Connected, Ambiguous };
    Kind kind = Kind::Separated;
    // per-realization outcomes, filled only when realizations disagree;
    // keys describe the orientation chosen for each ambiguous link
    std::vector<std::pair<std::string, SeparationKind>> realizations;
    // conditioning entries recognized as function tags (fixed context, no
    // graph effect)
    std::vector<std::string> fixed_tags;

    bool definite() const { return kind != Kind::Ambiguous; }
};

inline const char* to_string(SeparationKind k) {
    return k == SeparationKind::Separated ? "separated" : "connected";
}

inline const char* to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::Separated: return "separated";
        case Verdict::Kind::Connected: return "connected";
        case Verdict::Kind::Ambiguous: return "ambiguous";
    }
    return "?";
}

namespace detail {

// A realized diagram flattened for path analysis: equivalent nodes merged
// into one, every correlational link expanded into a fresh latent common
// cause, ids replaced by dense indices.
struct AnalysisView {
    std::vector<std::string> names;
    std::map<std::string, int> index;           // post-merge name -> index
    std::map<std::string, std::string> resolve;  // original id -> post-merge name
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;

    static AnalysisView build(const Diagram& d) {
        AnalysisView v;
        std::map<std::string, std::string> rep;
        for (const Node& n : d.nodes()) rep[n.id] = n.id;
        auto find = [&](std::string id) {
            while (rep[id] != id) id = rep[id];
            return id;
        };
        for (const auto& [a, b] : d.equivalences()) {
            std::string ra = find(a), rb = find(b);
            if (ra != rb) rep[std::max(ra, rb)] = std::min(ra, rb);
        }
        for (const Node& n : d.nodes()) {
            std::string r = find(n.id);
            v.resolve[n.id] = r;
            if (!v.index.count(r)) {
                v.index[r] = static_cast<int>(v.names.size());
                v.names.push_back(r);
            }
        }
        v.parents.resize(v.names.size());
        v.children.resize(v.names.size());
        int latent_counter = 0;
        auto add_edge = [&](int from, int to) {
            if (from == to) return;  // collapsed by an equivalence
            v.children[from].push_back(to);
            v.parents[to].push_back(from);
        };
        for (const Edge& e : d.edges()) {
            switch (e.kind) {
                case EdgeKind::Directed:
                    add_edge(v.index.at(v.resolve.at(e.from)), v.index.at(v.resolve.at(e.to)));
                    break;
                case EdgeKind::Correlational: {
                    std::string latent = "~L" + std::to_string(latent_counter++);
                    int li = static_cast<int>(v.names.size());
                    v.names.push_back(latent);
                    v.index[latent] = li;
                    v.parents.emplace_back();
                    v.children.emplace_back();
                    add_edge(li, v.index.at(v.resolve.at(e.from)));
                    add_edge(li, v.index.at(v.resolve.at(e.to)));
                    break;
                }
                case EdgeKind::Ambiguous:
                    throw ConfigError("analysis view requires a realized diagram");
            }
        }
        return v;
    }

    std::set<int> resolve_set(const std::vector<std::string>& ids) const {
        std::set<int> out;
        for (const std::string& id : ids) out.insert(index.at(resolve.at(id)));
        return out;
    }
};

// Active-trail reachability with collider handling.
inline bool reachable_connected(const AnalysisView& v, const std::set<int>& a,
                                const std::set<int>& b, const std::set<int>& given) {
    int n = static_cast<int>(v.names.size());
    // nodes that are observed or have an observed descendant
    std::vector<char> anc(n, 0);
    {
        std::vector<int> stack(given.begin(), given.end());
        for (int g : given) anc[g] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int p : v.parents[x])
                if (!anc[p]) {
                    anc[p] = 1;
                    stack.push_back(p);
                }
        }
    }
    // direction 0: trail arrived from a child (moving up); 1: from a parent
    std::vector<std::array<char, 2>> seen(n, {0, 0});
    std::vector<std::pair<int, int>> stack;
    for (int s : a) stack.push_back({s, 0});
    while (!stack.empty()) {
        auto [x, dir] = stack.back();
        stack.pop_back();
        if (seen[x][dir]) continue;
        seen[x][dir] = 1;
        bool observed = given.count(x) > 0;
        if (!observed && b.count(x)) return true;
        if (dir == 0) {
            if (!observed) {
                for (int p : v.parents[x]) stack.push_back({p, 0});
                for (int c : v.children[x]) stack.push_back({c, 1});
            }
        } else {
            if (!observed)
                for (int c : v.children[x]) stack.push_back({c, 1});
            if (anc[x])
                for (int p : v.parents[x]) stack.push_back({p, 0});
        }
    }
    return false;
}

struct PreparedQuery {
    std::set<int> a, b, given;
    std::vector<std::string> fixed_tags;
};

inline PreparedQuery prepare_query(const Diagram& d, const AnalysisView& v,
                                   const SeparationQuery& q) {
    std::set<std::string> known_tags;
    for (const Edge& e : d.edges())
        if (e.controller) known_tags.insert(*e.controller);
    for (const Node& n : d.nodes())
        if (n.controller) known_tags.insert(*n.controller);
    for (const char* t : {tags::task, tags::model, tags::error, tags::human_task,
                          tags::human_model, tags::human_error})
        known_tags.insert(t);

    PreparedQuery p;
    auto resolve_names = [&](const std::vector<std::string>& ids, std::set<int>& out,
                             bool tags_allowed) {
        for (const std::string& id : ids) {
            auto it = v.resolve.find(id);
            if (it != v.resolve.end()) {
                out.insert(v.index.at(it->second));
                continue;
            }
            if (tags_allowed && known_tags.count(id)) {
                p.fixed_tags.push_back(id);
                continue;
            }
            throw UnknownNode("unknown query node: " + id);
        }
    };
    resolve_names(q.a, p.a, false);
    resolve_names(q.b, p.b, false);
    resolve_names(q.given, p.given, true);
    if (p.a.empty() || p.b.empty()) throw UnknownNode("query sets must be non-empty");
    for (int x : p.a)
        if (p.b.count(x) || p.given.count(x))
            throw OverlappingSets("query sets overlap after equivalence merging: " + v.names[x]);
    for (int x : p.b)
        if (p.given.count(x))
            throw OverlappingSets("query sets overlap after equivalence merging: " + v.names[x]);
    return p;
}

inline std::string orientation_label(const Diagram& base, const Diagram& realization) {
    // describe how each ambiguous link of the base diagram was oriented
    std::vector<std::string> parts;
    std::set<std::pair<std::string, std::string>> amb;
    for (const Edge& e : base.edges())
        if (e.kind == EdgeKind::Ambiguous) amb.insert({e.from, e.to});
    for (const Edge& e : realization.edges()) {
        if (e.kind != EdgeKind::Directed) continue;
        if (amb.count({e.from, e.to}) || amb.count({e.to, e.from}))
            parts.push_back(e.from + "->" + e.to);
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const std::string& s : parts) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

}  // namespace detail

// Decides a separation query on a diagram. Equivalent nodes are merged,
// correlational links expand to latent common causes, and function tags in
// the conditioning set are recorded as fixed context with no graph effect.
// On a diagram with ambiguous links, every realization is evaluated: if all
// realizations agree the shared verdict is returned, otherwise Ambiguous
// with the per-realization map.
inline Verdict d_separated(const Diagram& d, const SeparationQuery& q) {
    {
        auto violations = d.validate();
        if (!violations.empty()) throw ConfigError("d_separated requires a valid diagram");
    }
    Verdict out;
    if (d.realized()) {
        detail::AnalysisView v = detail::AnalysisView::build(d);
        detail::PreparedQuery p = detail::prepare_query(d, v, q);
        out.fixed_tags = p.fixed_tags;
        out.kind = detail::reachable_connected(v, p.a, p.b, p.given) ? Verdict::Kind::Connected
                                                                     : Verdict::Kind::Separated;
        return out;
    }
    std::vector<std::pair<std::string, SeparationKind>> results;
    for (const Diagram& r : d.realizations()) {
        detail::AnalysisView v = detail::AnalysisView::build(r);
        detail::PreparedQuery p = detail::prepare_query(r, v, q);
        out.fixed_tags = p.fixed_tags;
        SeparationKind k = detail::reachable_connected(v, p.a, p.b, p.given)
                               ? SeparationKind::Connected
                               : SeparationKind::Separated;
        results.push_back({detail::orientation_label(d, r), k});
    }
    if (results.empty()) throw ConfigError("diagram has no acyclic realization");
    bool all_sep = std::all_of(results.begin(), results.end(),
                               [](const auto& r) { return r.second == SeparationKind::Separated; });
    bool all_con = std::all_of(results.begin(), results.end(),
                               [](const auto& r) { return r.second == SeparationKind::Connected; });
    if (all_sep)
        out.kind = Verdict::Kind::Separated;
    else if (all_con)
        out.kind = Verdict::Kind::Connected;
    else {
        out.kind = Verdict::Kind::Ambiguous;
        out.realizations = std::move(results);
    }
    return out;
}

// Test oracle: enumerates every undirected path between the query sets and
// applies the blocking definition literally. Only for realized diagrams of
// modest size; must agree with d_separated everywhere.
inline SeparationKind brute_force_separated(const Diagram& d, const SeparationQuery& q) {
    if (!d.realized()) throw ConfigError("brute_force_separated requires a realized diagram");
    if (d.nodes().size() > 16) throw TooLarge("brute-force oracle capped at 16 nodes");
    detail::AnalysisView v = detail::AnalysisView::build(d);
    detail::PreparedQuery p = detail::prepare_query(d, v, q);
    int n = static_cast<int>(v.names.size());

    // descendant closure for the collider rule
    std::vector<std::vector<char>> desc(n, std::vector<char>(n, 0));
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack{s};
        desc[s][s] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int c : v.children[x])
                if (!desc[s][c]) {
                    desc[s][c] = 1;
                    stack.push_back(c);
                }
        }
    }
    auto observed_or_observed_descendant = [&](int x) {
        for (int g : p.given)
            if (desc[x][g]) return true;
        return false;
    };

    // step = (neighbor, edge points toward neighbor?)
    std::vector<std::vector<std::pair<int, bool>>> adj(n);
    for (int x = 0; x < n; ++x) {
        for (int c : v.children[x]) adj[x].push_back({c, true});
        for (int par : v.parents[x]) adj[x].push_back({par, false});
    }

    std::vector<int> path;
    std::vector<bool> into;  // into[i]: edge i of the path points at path[i+1]
    std::vector<char> on_path(n, 0);
    bool found_open = false;

    auto path_open = [&]() {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            bool collider = into[i - 1] && !into[i];
            int node = path[i];
            bool observed = p.given.count(node) > 0;
            if (!collider && observed) return false;
            if (collider && !observed_or_observed_descendant(node)) return false;
        }
        return true;
    };

    std::function<void(int)> dfs = [&](int x) {
        if (found_open) return;
        if (p.b.count(x) && path.size() >= 2) {
            if (path_open()) found_open = true;
            return;  // b-nodes end the path; longer extensions revisit them
        }
        for (auto [next, toward] : adj[x]) {
            if (on_path[next]) continue;
            on_path[next] = 1;
            path.push_back(next);
            into.push_back(toward);
            dfs(next);
            into.pop_back();
            path.pop_back();
            on_path[next] = 0;
            if (found_open) return;
        }
    };

    for (int s : p.a) {
        if (found_open) break;
        std::fill(on_path.begin(), on_path.end(), 0);
        on_path[s] = 1;
        path = {s};
        into.clear();
        dfs(s);
    }
    return found_open ? SeparationKind::Connected : SeparationKind::Separated;
}

}  // namespace showdag
