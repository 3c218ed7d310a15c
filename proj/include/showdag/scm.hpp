#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "showdag/graph.hpp"
#include "showdag/rng.hpp"

namespace showdag {

// A binary threshold over one input axis: value = x[axis] > cut.
struct ThresholdRule {
    int axis = 0;
    double cut = 0.5;
};

// Concrete world bound to a realized diagram. The input is a uniform grid
// over [0,1]^2 (cell centers), labels are binary threshold rules, human
// judgments get flip noise. The defaults give the disagreement band
// 0.5 < x1 <= 0.6, i.e. a model error rate of exactly 0.1.
struct WorldSpec {
    int resolution = 20;
    ThresholdRule task_rule{0, 0.5};         // f, produces Y
    ThresholdRule model_rule{0, 0.6};        // g, produces Yhat
    ThresholdRule human_task_rule{0, 0.5};   // fH base judgment
    ThresholdRule human_model_rule{0, 0.6};  // gH base judgment
    ThresholdRule human_error_rule{0, 0.55};  // zH base judgment
    double unshown_flip = 0.2;  // flip probability of human judgments not revealed
    double shown_flip = 0.0;    // flip probability once a core variable is revealed
    double intuition_prior = 0.5;
    double explanation_prior = 0.5;
    double parent_mix = 0.3;  // strength of auxiliary binary-parent influences
};

inline nlohmann::ordered_json world_to_json(const WorldSpec& w) {
    auto rule = [](const ThresholdRule& r) {
        return nlohmann::ordered_json{{"axis", r.axis}, {"cut", r.cut}};
    };
    return nlohmann::ordered_json{
        {"resolution", w.resolution},
        {"task_rule", rule(w.task_rule)},
        {"model_rule", rule(w.model_rule)},
        {"human_task_rule", rule(w.human_task_rule)},
        {"human_model_rule", rule(w.human_model_rule)},
        {"human_error_rule", rule(w.human_error_rule)},
        {"unshown_flip", w.unshown_flip},
        {"shown_flip", w.shown_flip},
        {"intuition_prior", w.intuition_prior},
        {"explanation_prior", w.explanation_prior},
        {"parent_mix", w.parent_mix},
    };
}

inline WorldSpec world_from_json(const nlohmann::json& j) {
    WorldSpec w;
    auto rule = [&](const char* key, ThresholdRule fallback) {
        if (!j.contains(key)) return fallback;
        ThresholdRule r;
        r.axis = j[key].value("axis", fallback.axis);
        r.cut = j[key].value("cut", fallback.cut);
        return r;
    };
    w.resolution = j.value("resolution", w.resolution);
    w.task_rule = rule("task_rule", w.task_rule);
    w.model_rule = rule("model_rule", w.model_rule);
    w.human_task_rule = rule("human_task_rule", w.human_task_rule);
    w.human_model_rule = rule("human_model_rule", w.human_model_rule);
    w.human_error_rule = rule("human_error_rule", w.human_error_rule);
    w.unshown_flip = j.value("unshown_flip", w.unshown_flip);
    w.shown_flip = j.value("shown_flip", w.shown_flip);
    w.intuition_prior = j.value("intuition_prior", w.intuition_prior);
    w.explanation_prior = j.value("explanation_prior", w.explanation_prior);
    w.parent_mix = j.value("parent_mix", w.parent_mix);
    if (w.resolution < 2) throw ConfigError("world resolution must be at least 2");
    return w;
}

// Column-oriented sample set. The input column holds grid indices, label
// columns hold 0/1.
struct SampleTable {
    std::vector<std::string> names;
    std::vector<std::vector<int>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw UnknownNode("no column named " + name);
    }

    const std::vector<int>& column(const std::string& name) const {
        return columns[column_index(name)];
    }

    std::string to_csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) os << ',';
            os << names[i];
        }
        os << '\n';
        for (std::size_t r = 0; r < rows(); ++r) {
            for (std::size_t c = 0; c < columns.size(); ++c) {
                if (c) os << ',';
                os << columns[c][r];
            }
            os << '\n';
        }
        return os.str();
    }
};

// Structural causal model over a realized diagram: one mechanism per node,
// exogenous noise, seedable and bitwise reproducible sampling. Samples are
// generated with one independently derived stream per row, so any execution
// schedule yields the identical table.
class Scm {
public:
    static Scm instantiate(const Diagram& realized, const WorldSpec& w) {
        if (!realized.realized())
            throw ConfigError("instantiate requires a realized diagram (no ambiguous links)");
        Scm scm;
        scm.world_ = w;
        scm.diagram_ = realized;

        // expand correlational links into latent common causes
        std::vector<std::string> ids;
        std::map<std::string, std::vector<std::string>> parents;
        for (const Node& n : realized.nodes()) ids.push_back(n.id);
        int latent_counter = 0;
        std::vector<std::string> latents;
        for (const Edge& e : realized.edges()) {
            if (e.kind == EdgeKind::Directed) {
                parents[e.to].push_back(e.from);
            } else if (e.kind == EdgeKind::Correlational) {
                std::string latent = "~L" + std::to_string(latent_counter++);
                ids.push_back(latent);
                latents.push_back(latent);
                parents[e.from].push_back(latent);
                parents[e.to].push_back(latent);
            }
        }

        // deterministic topological order (name-ordered Kahn)
        std::map<std::string, int> indegree;
        std::map<std::string, std::vector<std::string>> children;
        for (const std::string& id : ids) indegree[id] = 0;
        for (const auto& [child, ps] : parents)
            for (const std::string& p : ps) {
                children[p].push_back(child);
                ++indegree[child];
            }
        std::set<std::string> ready;
        for (const auto& [id, deg] : indegree)
            if (deg == 0) ready.insert(id);
        while (!ready.empty()) {
            std::string id = *ready.begin();
            ready.erase(ready.begin());
            scm.order_.push_back(id);
            for (const std::string& c : children[id])
                if (--indegree[c] == 0) ready.insert(c);
        }
        if (scm.order_.size() != ids.size()) throw ConfigError("diagram is not acyclic");

        std::map<std::string, int> slot;
        for (std::size_t i = 0; i < scm.order_.size(); ++i) slot[scm.order_[i]] = static_cast<int>(i);
        scm.latent_ = std::set<std::string>(latents.begin(), latents.end());

        std::set<std::string> shown;  // human nodes collapsed with their core variable
        for (const auto& [a, b] : realized.equivalences()) {
            shown.insert(a);
            shown.insert(b);
        }

        for (const std::string& id : scm.order_) {
            Mechanism m;
            m.self = slot[id];
            const Node* node = realized.node(id);
            VariableRole role = node ? node->role : VariableRole::Generic;
            const std::vector<std::string>& ps = parents[id];
            auto parent_slot = [&](const std::string& pid) { return slot.at(pid); };
            auto has_parent = [&](const std::string& pid) {
                return std::find(ps.begin(), ps.end(), pid) != ps.end();
            };
            auto mix_all_binary_parents = [&](std::initializer_list<std::string> except = {}) {
                for (const std::string& p : ps) {
                    if (p == "X") continue;
                    if (std::find(except.begin(), except.end(), p) != except.end()) continue;
                    m.mix_parents.push_back(parent_slot(p));
                }
            };
            if (scm.latent_.count(id)) {
                m.kind = Mechanism::Kind::RootBernoulli;
                m.prior = 0.5;
            } else {
                switch (role) {
                    case VariableRole::Input:
                        if (has_parent("Y")) {
                            m.kind = Mechanism::Kind::InputGivenLabel;
                            m.rule = w.task_rule;
                            m.p1 = parent_slot("Y");
                        } else {
                            m.kind = Mechanism::Kind::InputUniform;
                        }
                        break;
                    case VariableRole::TaskLabel:
                        if (has_parent("X")) {
                            m.kind = Mechanism::Kind::Threshold;
                            m.rule = w.task_rule;
                            m.p1 = parent_slot("X");
                        } else {
                            // reverse-oriented task link: the label is the root
                            m.kind = Mechanism::Kind::RootBernoulli;
                            m.prior = label_fraction(w, w.task_rule);
                        }
                        break;
                    case VariableRole::ModelPrediction:
                        if (!has_parent("X")) throw UnboundNode("prediction node needs the input");
                        m.kind = Mechanism::Kind::Threshold;
                        m.rule = w.model_rule;
                        m.p1 = parent_slot("X");
                        break;
                    case VariableRole::ModelError:
                        if (!has_parent("Y") || !has_parent("Yhat"))
                            throw UnboundNode("error node needs both labels");
                        m.kind = Mechanism::Kind::IndicatorPair;
                        m.p1 = parent_slot("Y");
                        m.p2 = parent_slot("Yhat");
                        m.flip = 0.0;  // the error indicator is exact by definition
                        break;
                    case VariableRole::HumanTaskLabel:
                    case VariableRole::HumanModelPrediction: {
                        const char* core = role == VariableRole::HumanTaskLabel ? "Y" : "Yhat";
                        if (shown.count(id) && has_parent(core)) {
                            m.kind = Mechanism::Kind::Copy;
                            m.p1 = parent_slot(core);
                            m.flip = w.shown_flip;
                        } else {
                            if (!has_parent("X"))
                                throw UnboundNode("human judgment node " + id + " needs the input");
                            m.kind = Mechanism::Kind::Threshold;
                            m.rule = role == VariableRole::HumanTaskLabel ? w.human_task_rule
                                                                          : w.human_model_rule;
                            m.p1 = parent_slot("X");
                            m.flip = w.unshown_flip;
                            mix_all_binary_parents();
                        }
                        break;
                    }
                    case VariableRole::HumanModelError: {
                        const std::string* label_y = nullptr;
                        const std::string* label_yhat = nullptr;
                        static const std::string y_h = "YH", y_c = "Y";
                        static const std::string yh_h = "YhatH", yh_c = "Yhat";
                        if (has_parent(y_h)) label_y = &y_h;
                        else if (has_parent(y_c)) label_y = &y_c;
                        if (has_parent(yh_h)) label_yhat = &yh_h;
                        else if (has_parent(yh_c)) label_yhat = &yh_c;
                        if (label_y && label_yhat) {
                            // the human error judgment compares the two label beliefs
                            m.kind = Mechanism::Kind::IndicatorPair;
                            m.p1 = parent_slot(*label_y);
                            m.p2 = parent_slot(*label_yhat);
                            bool determined = shown.count(*label_y) && shown.count(*label_yhat);
                            m.flip = determined ? w.shown_flip : w.unshown_flip;
                        } else {
                            if (!has_parent("X"))
                                throw UnboundNode("human error node needs the input");
                            m.kind = Mechanism::Kind::Threshold;
                            m.rule = w.human_error_rule;
                            m.p1 = parent_slot("X");
                            m.flip = w.unshown_flip;
                            mix_all_binary_parents();
                        }
                        break;
                    }
                    case VariableRole::Intuition:
                        m.kind = Mechanism::Kind::RootBernoulli;
                        m.prior = w.intuition_prior;
                        mix_all_binary_parents();
                        break;
                    case VariableRole::Explanation:
                        m.kind = Mechanism::Kind::RootBernoulli;
                        m.prior = w.explanation_prior;
                        break;
                    case VariableRole::Generic:
                        m.kind = Mechanism::Kind::RootBernoulli;
                        m.prior = 0.5;
                        mix_all_binary_parents();
                        break;
                }
            }
            m.mix = w.parent_mix;
            scm.mechanisms_.push_back(m);
        }
        return scm;
    }

    SampleTable sample(std::size_t n, std::uint64_t seed) const {
        if (n < 1) throw ConfigError("sample count must be at least 1");
        SampleTable t;
        std::vector<std::size_t> exported;
        for (std::size_t i = 0; i < order_.size(); ++i) {
            if (latent_.count(order_[i])) continue;
            t.names.push_back(order_[i]);
            exported.push_back(i);
        }
        t.columns.assign(t.names.size(), std::vector<int>(n, 0));
        std::vector<int> values(order_.size(), 0);
        for (std::size_t row = 0; row < n; ++row) {
            Rng rng(derive_seed(seed, "row/" + std::to_string(row)));
            for (std::size_t i = 0; i < order_.size(); ++i)
                values[i] = eval(mechanisms_[i], values, rng);
            for (std::size_t c = 0; c < exported.size(); ++c)
                t.columns[c][row] = values[exported[c]];
        }
        return t;
    }

    const WorldSpec& world() const { return world_; }
    const Diagram& diagram() const { return diagram_; }

    double grid_coordinate(int index, int axis) const {
        int r = world_.resolution;
        int cell = axis == 0 ? index / r : index % r;
        return (cell + 0.5) / r;
    }

    // exact fraction of grid cells where the rule fires
    static double label_fraction(const WorldSpec& w, const ThresholdRule& rule) {
        int r = w.resolution;
        int count = 0;
        for (int c = 0; c < r; ++c)
            if ((c + 0.5) / r > rule.cut) ++count;
        return static_cast<double>(count) / r;
    }

private:
    struct Mechanism {
        enum class Kind {
            InputUniform,
            InputGivenLabel,
            Threshold,
            IndicatorPair,
            Copy,
            RootBernoulli,
        };
        Kind kind = Kind::RootBernoulli;
        int self = -1;
        ThresholdRule rule{};
        int p1 = -1, p2 = -1;
        double prior = 0.5;
        double flip = 0.0;
        double mix = 0.3;
        std::vector<int> mix_parents;
    };

    int eval(const Mechanism& m, const std::vector<int>& values, Rng& rng) const {
        int r = world_.resolution;
        auto apply_rule = [&](const ThresholdRule& rule, int x_index) {
            int cell = rule.axis == 0 ? x_index / r : x_index % r;
            return (cell + 0.5) / r > rule.cut ? 1 : 0;
        };
        int v = 0;
        switch (m.kind) {
            case Mechanism::Kind::InputUniform:
                return static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r) * r));
            case Mechanism::Kind::InputGivenLabel: {
                // uniform over the cells consistent with the label value
                int want = values[m.p1];
                for (;;) {
                    int cand = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r) * r));
                    if (apply_rule(m.rule, cand) == want) return cand;
                }
            }
            case Mechanism::Kind::Threshold:
                v = apply_rule(m.rule, values[m.p1]);
                break;
            case Mechanism::Kind::IndicatorPair:
                v = values[m.p1] != values[m.p2] ? 1 : 0;
                break;
            case Mechanism::Kind::Copy:
                v = values[m.p1];
                break;
            case Mechanism::Kind::RootBernoulli:
                v = rng.next_bernoulli(m.prior) ? 1 : 0;
                break;
        }
        for (int p : m.mix_parents) {
            bool active = rng.next_bernoulli(m.mix);  // drawn unconditionally, fixed stream shape
            if (active && values[p]) v ^= 1;
        }
        if (m.flip > 0.0 && rng.next_bernoulli(m.flip)) v ^= 1;
        return v;
    }

    WorldSpec world_;
    Diagram diagram_;
    std::vector<std::string> order_;
    std::set<std::string> latent_;
    std::vector<Mechanism> mechanisms_;
};

}  // namespace showdag
