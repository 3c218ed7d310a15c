#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "showdag/graph.hpp"

namespace showdag {

enum class TaskKind { Emulation, Discovery };
enum class PredictionVisibility { Shown, Hidden };
enum class ExplanationVisibility { None, Shown };
enum class IntuitionMode { NoAssumption, ActivatesErrorPrior, ExpandsIntuition };

// Experiment-design knobs selecting one realization family of the base
// diagram: the task assumption, whether the prediction is revealed, and how
// a shown explanation is assumed to interact with intuition.
struct Condition {
    TaskKind task = TaskKind::Discovery;
    PredictionVisibility prediction = PredictionVisibility::Hidden;
    ExplanationVisibility explanation = ExplanationVisibility::None;
    IntuitionMode intuition = IntuitionMode::NoAssumption;

    void check() const {
        if (intuition != IntuitionMode::NoAssumption &&
            explanation != ExplanationVisibility::Shown)
            throw ConfigError("intuition assumptions require the explanation to be shown");
    }
};

// Core side and human side without any assumption about how the human
// approximations relate to each other.
inline Diagram core_pair_diagram() {
    Diagram d = Diagram::from_roles({
        VariableRole::Input, VariableRole::TaskLabel, VariableRole::ModelPrediction,
        VariableRole::ModelError, VariableRole::HumanTaskLabel,
        VariableRole::HumanModelPrediction, VariableRole::HumanModelError,
        VariableRole::Intuition,
    });
    // the task function carries no assumed direction between X and Y
    d = d.with_edge(ambiguous("X", "Y", tags::task));
    d = d.with_edge(directed("X", "Yhat", tags::model));
    d = d.with_edge(directed("Y", "Z", tags::error));
    d = d.with_edge(directed("Yhat", "Z", tags::error));
    d = d.with_edge(directed("X", "YH", tags::human_task));
    d = d.with_edge(directed("X", "YhatH", tags::human_model));
    d = d.with_edge(directed("X", "ZH", tags::human_error));
    d = d.with_edge(directed("H", "YH"));
    d = d.with_edge(directed("H", "YhatH"));
    d = d.with_edge(directed("H", "ZH"));
    return d;
}

// The base diagram: the human approximations additionally joined pairwise by
// ambiguous links, since their generation order inside the human mind is
// unknown.
inline Diagram base_diagram() {
    Diagram d = core_pair_diagram();
    d = d.with_edge(ambiguous("YH", "YhatH"));
    d = d.with_edge(ambiguous("YH", "ZH"));
    d = d.with_edge(ambiguous("YhatH", "ZH"));
    return d;
}

namespace detail {
inline VariableRole human_counterpart(VariableRole r) {
    switch (r) {
        case VariableRole::TaskLabel: return VariableRole::HumanTaskLabel;
        case VariableRole::ModelPrediction: return VariableRole::HumanModelPrediction;
        case VariableRole::ModelError: return VariableRole::HumanModelError;
        default: throw UnknownVariable("no human counterpart for this role");
    }
}
}  // namespace detail

// The show operator: reveals a core variable to the human. Adds the link
// from the core variable to its human counterpart, declares the two
// equivalent, and removes every other influence into the counterpart. An
// ambiguous link touching the counterpart had an unresolved direction; since
// nothing else may point into the counterpart any more, it is disambiguated
// to point outward. Idempotent.
inline Diagram show(const Diagram& d, VariableRole target) {
    if (target != VariableRole::TaskLabel && target != VariableRole::ModelPrediction)
        throw UnknownVariable("show expects the task label or the model prediction");
    auto core = d.find_role(target);
    if (!core) throw UnknownVariable(std::string("diagram lacks node for role ") + role_id(target));
    auto human = d.find_role(detail::human_counterpart(target));
    if (!human) throw MissingCounterpart(std::string(role_id(target)) + " has no human counterpart node");

    std::vector<Edge> edges;
    bool already = false;
    for (const Edge& e : d.edges()) {
        if (e.kind == EdgeKind::Directed && e.from == *core && e.to == *human) {
            already = true;
            edges.push_back(e);
            continue;
        }
        if (e.kind == EdgeKind::Directed && e.to == *human) continue;       // influence removed
        if (e.kind != EdgeKind::Directed && e.touches(*human)) {
            if (e.kind == EdgeKind::Ambiguous) {
                edges.push_back(directed(*human, e.other(*human), e.controller));  // point outward
            }
            // a correlational link into the counterpart is also an influence; drop it
            continue;
        }
        edges.push_back(e);
    }
    if (!already) edges.push_back(directed(*core, *human));
    Diagram out = d.replacing_edges(std::move(edges));
    return out.with_equivalence(*core, *human);
}

// Introduces the explanation node E, derived from the model function g. E
// feeds exactly the human approximations that are still produced by the
// human functions (a revealed counterpart is a copy, not a judgment, so it
// gains no explanation input).
inline Diagram attach_explanation(const Diagram& d, IntuitionMode mode) {
    if (d.find_role(VariableRole::Explanation))
        throw ExplanationAlreadyPresent("diagram already contains an explanation node");
    bool has_model_edge = false;
    for (const Edge& e : d.edges())
        if (e.controller && *e.controller == tags::model) has_model_edge = true;
    if (!has_model_edge) throw ConfigError("attach_explanation needs a g-controlled link");

    Diagram out = d.with_node(Node{"E", VariableRole::Explanation, tags::model, "E"});

    const std::pair<const char*, const char*> human_nodes[] = {
        {"YH", tags::human_task}, {"YhatH", tags::human_model}, {"ZH", tags::human_error}};
    for (const auto& [id, tag] : human_nodes) {
        if (!out.has_node(id)) continue;
        bool still_human_made = false;
        for (const Edge& e : out.edges())
            if (e.kind == EdgeKind::Directed && e.to == id && e.controller && *e.controller == tag)
                still_human_made = true;
        if (still_human_made) out = out.with_edge(directed("E", id));
    }

    switch (mode) {
        case IntuitionMode::NoAssumption:
            break;
        case IntuitionMode::ActivatesErrorPrior: {
            if (!out.has_node("H") || !out.has_node("Z"))
                throw ConfigError("error-prior activation needs H and Z nodes");
            out = out.with_edge(directed("E", "H"));
            out = out.with_edge(correlational("H", "Z"));
            break;
        }
        case IntuitionMode::ExpandsIntuition: {
            out = out.with_generic("Ht1", "H_t+1");
            out = out.with_edge(directed("E", "Ht1"));
            break;
        }
    }
    return out;
}

// Deterministic construction of the diagram for a condition. The operators
// commute on this catalog; the fixed order is task, prediction, explanation.
inline Diagram build(const Condition& cond) {
    cond.check();
    Diagram d = base_diagram();
    if (cond.task == TaskKind::Emulation) d = show(d, VariableRole::TaskLabel);
    if (cond.prediction == PredictionVisibility::Shown) d = show(d, VariableRole::ModelPrediction);
    if (cond.task == TaskKind::Emulation && cond.prediction == PredictionVisibility::Shown)
        d = d.with_edge(correlational("Y", "Yhat"));  // correlation induced by model training
    if (cond.explanation == ExplanationVisibility::Shown) d = attach_explanation(d, cond.intuition);
    return d;
}

// Two-level decision tree over the base diagram: first the task assumption,
// then prediction visibility.
struct DecisionTree {
    Diagram root;
    std::map<TaskKind, Diagram> branches;
    std::map<std::pair<TaskKind, PredictionVisibility>, Diagram> leaves;
};

inline DecisionTree decision_tree() {
    DecisionTree t;
    t.root = base_diagram();
    t.branches[TaskKind::Emulation] = show(t.root, VariableRole::TaskLabel);
    t.branches[TaskKind::Discovery] = t.root;
    for (TaskKind task : {TaskKind::Emulation, TaskKind::Discovery})
        for (PredictionVisibility pred : {PredictionVisibility::Shown, PredictionVisibility::Hidden})
            t.leaves[{task, pred}] = build(Condition{task, pred});
    return t;
}

namespace detail {
inline Diagram explanation_source_diagram() {
    Diagram d = Diagram::from_roles({VariableRole::Input, VariableRole::ModelPrediction});
    d = d.with_edge(directed("X", "Yhat", tags::model));
    return d.with_node(Node{"E", VariableRole::Explanation, tags::model, "E"});
}

inline Diagram prediction_belief_diagram(bool with_explanation) {
    Diagram d = Diagram::from_roles({VariableRole::Input, VariableRole::ModelPrediction,
                                     VariableRole::HumanModelPrediction, VariableRole::Intuition});
    d = d.with_edge(directed("X", "Yhat", tags::model));
    d = d.with_edge(directed("X", "YhatH", tags::human_model));
    d = d.with_edge(directed("H", "YhatH"));
    if (with_explanation) {
        d = d.with_node(Node{"E", VariableRole::Explanation, tags::model, "E"});
        d = d.with_edge(directed("E", "YhatH"));
    }
    return d;
}
}  // namespace detail

// Canonical diagrams addressable by string key, for the CLI and the tests.
inline const std::map<std::string, Diagram>& catalog() {
    static const std::map<std::string, Diagram> instance = [] {
        std::map<std::string, Diagram> m;
        m["fig2"] = core_pair_diagram();
        m["fig3a"] = base_diagram();
        m["fig3b"] = show(base_diagram(), VariableRole::TaskLabel);
        m["fig3c"] = base_diagram();
        m["fig3d"] = build(Condition{TaskKind::Emulation, PredictionVisibility::Shown});
        m["fig3e"] = build(Condition{TaskKind::Emulation, PredictionVisibility::Hidden});
        m["fig3f"] = build(Condition{TaskKind::Discovery, PredictionVisibility::Shown});
        m["fig3g"] = build(Condition{TaskKind::Discovery, PredictionVisibility::Hidden});
        m["fig4a"] = detail::explanation_source_diagram();
        m["fig4b1"] = detail::prediction_belief_diagram(false);
        m["fig4b2"] = detail::prediction_belief_diagram(true);
        m["fig4c1"] = build(Condition{TaskKind::Discovery, PredictionVisibility::Shown,
                                      ExplanationVisibility::Shown, IntuitionMode::NoAssumption});
        m["fig4c2"] = build(Condition{TaskKind::Discovery, PredictionVisibility::Shown,
                                      ExplanationVisibility::Shown,
                                      IntuitionMode::ActivatesErrorPrior});
        m["fig7"] = build(Condition{TaskKind::Discovery, PredictionVisibility::Shown,
                                    ExplanationVisibility::Shown, IntuitionMode::ExpandsIntuition});
        return m;
    }();
    return instance;
}

inline std::optional<Diagram> catalog_lookup(const std::string& key) {
    auto it = catalog().find(key);
    if (it == catalog().end()) return std::nullopt;
    return it->second;
}

}  // namespace showdag
