#include <gtest/gtest.h>

#include <set>

#include "showdag/catalog.hpp"

using namespace showdag;

namespace {

bool has_edge(const Diagram& d, const std::string& from, const std::string& to, EdgeKind kind) {
    for (const Edge& e : d.edges()) {
        if (e.kind != kind) continue;
        if (kind == EdgeKind::Directed) {
            if (e.from == from && e.to == to) return true;
        } else if ((e.from == from && e.to == to) || (e.from == to && e.to == from)) {
            return true;
        }
    }
    return false;
}

int incoming_influences(const Diagram& d, const std::string& id) {
    int count = 0;
    for (const Edge& e : d.edges()) {
        if (e.kind == EdgeKind::Directed && e.to == id) ++count;
        if (e.kind != EdgeKind::Directed && e.touches(id)) ++count;
    }
    return count;
}

bool is_equivalent(const Diagram& d, const std::string& a, const std::string& b) {
    auto pair = std::make_pair(std::min(a, b), std::max(a, b));
    for (const auto& q : d.equivalences())
        if (q == pair) return true;
    return false;
}

}  // namespace

TEST(Catalog, BaseDiagramShape) {
    Diagram base = base_diagram();
    EXPECT_TRUE(base.validate().empty());
    EXPECT_EQ(base.nodes().size(), 8u);
    EXPECT_EQ(base.ambiguous_edges().size(), 4u);  // task link + human triangle
    EXPECT_TRUE(has_edge(base, "YH", "YhatH", EdgeKind::Ambiguous));
    EXPECT_TRUE(has_edge(base, "YH", "ZH", EdgeKind::Ambiguous));
    EXPECT_TRUE(has_edge(base, "YhatH", "ZH", EdgeKind::Ambiguous));
}

TEST(Catalog, ShowTaskLabelClearsCounterpartInputs) {
    Diagram shown = show(base_diagram(), VariableRole::TaskLabel);
    // only the revealed value feeds the counterpart now
    EXPECT_EQ(incoming_influences(shown, "YH"), 1);
    EXPECT_TRUE(has_edge(shown, "Y", "YH", EdgeKind::Directed));
    EXPECT_TRUE(is_equivalent(shown, "Y", "YH"));
    // the formerly ambiguous links now point outward
    EXPECT_TRUE(has_edge(shown, "YH", "YhatH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(shown, "YH", "ZH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(shown, "YhatH", "ZH", EdgeKind::Ambiguous));
}

TEST(Catalog, ShowIsIdempotent) {
    Diagram once = show(base_diagram(), VariableRole::TaskLabel);
    EXPECT_EQ(show(once, VariableRole::TaskLabel), once);
    Diagram pred = show(base_diagram(), VariableRole::ModelPrediction);
    EXPECT_EQ(show(pred, VariableRole::ModelPrediction), pred);
}

TEST(Catalog, ShowOperatorsCommute) {
    Diagram ab = show(show(base_diagram(), VariableRole::TaskLabel), VariableRole::ModelPrediction);
    Diagram ba = show(show(base_diagram(), VariableRole::ModelPrediction), VariableRole::TaskLabel);
    EXPECT_EQ(ab, ba);
}

TEST(Catalog, ShowCommutesWithAttachExplanation) {
    // attaching the explanation first wires it into the prediction belief;
    // revealing the prediction afterwards removes that influence again, so
    // both orders land on the same diagram
    Diagram show_then_attach =
        attach_explanation(show(base_diagram(), VariableRole::ModelPrediction),
                           IntuitionMode::NoAssumption);
    Diagram attach_then_show = show(attach_explanation(base_diagram(), IntuitionMode::NoAssumption),
                                    VariableRole::ModelPrediction);
    EXPECT_EQ(show_then_attach, attach_then_show);
}

TEST(Catalog, HiddenPredictionExplanationFeedsAllThreeBeliefs) {
    Diagram d = attach_explanation(base_diagram(), IntuitionMode::NoAssumption);
    EXPECT_TRUE(has_edge(d, "E", "YH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(d, "E", "YhatH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(d, "E", "ZH", EdgeKind::Directed));
}

TEST(Catalog, ShowDropsCorrelationalLinksIntoCounterpart) {
    Diagram d = base_diagram().with_edge(correlational("Y", "YhatH"));
    Diagram shown = show(d, VariableRole::ModelPrediction);
    EXPECT_FALSE(has_edge(shown, "Y", "YhatH", EdgeKind::Correlational));
    EXPECT_EQ(incoming_influences(shown, "YhatH"), 1);
}

TEST(Catalog, ShowRequiresCounterpart) {
    Diagram d = Diagram::from_roles({VariableRole::Input, VariableRole::TaskLabel});
    EXPECT_THROW(show(d, VariableRole::TaskLabel), MissingCounterpart);
    EXPECT_THROW(show(base_diagram(), VariableRole::Intuition), UnknownVariable);
}

TEST(Catalog, DiscoveryShownKeepsLabelErrorAmbiguity) {
    Diagram f = *catalog_lookup("fig3f");
    EXPECT_TRUE(is_equivalent(f, "Yhat", "YhatH"));
    EXPECT_TRUE(has_edge(f, "YH", "ZH", EdgeKind::Ambiguous));
    EXPECT_TRUE(has_edge(f, "YhatH", "YH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(f, "YhatH", "ZH", EdgeKind::Directed));
}

TEST(Catalog, EmulationShownAddsTrainingCorrelation) {
    Diagram d = *catalog_lookup("fig3d");
    EXPECT_TRUE(has_edge(d, "Y", "Yhat", EdgeKind::Correlational));
    EXPECT_TRUE(is_equivalent(d, "Y", "YH"));
    EXPECT_TRUE(is_equivalent(d, "Yhat", "YhatH"));
    // the error judgment is fed by both revealed labels
    EXPECT_TRUE(has_edge(d, "YH", "ZH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(d, "YhatH", "ZH", EdgeKind::Directed));
    // the correlational link stays out of the other leaves
    EXPECT_FALSE(has_edge(*catalog_lookup("fig3e"), "Y", "Yhat", EdgeKind::Correlational));
    EXPECT_FALSE(has_edge(*catalog_lookup("fig3f"), "Y", "Yhat", EdgeKind::Correlational));
    EXPECT_FALSE(has_edge(*catalog_lookup("fig3g"), "Y", "Yhat", EdgeKind::Correlational));
}

TEST(Catalog, HiddenDiscoveryLeafEqualsBase) {
    EXPECT_EQ(*catalog_lookup("fig3g"), base_diagram());
    EXPECT_EQ(*catalog_lookup("fig3e"), *catalog_lookup("fig3b"));
}

TEST(Catalog, BaseTriangleHasSixOrientations) {
    // the task link doubles the total; the human triangle itself admits six
    // acyclic orientations
    auto rs = catalog_lookup("fig3g")->realizations();
    EXPECT_EQ(rs.size(), 12u);
    std::set<std::string> triangle_orientations;
    for (const Diagram& r : rs) {
        std::string label;
        for (const Edge& e : r.edges()) {
            bool triangle = (e.from == "YH" || e.from == "YhatH" || e.from == "ZH") &&
                            (e.to == "YH" || e.to == "YhatH" || e.to == "ZH");
            if (e.kind == EdgeKind::Directed && triangle) label += e.from + ">" + e.to + ";";
        }
        triangle_orientations.insert(label);
    }
    EXPECT_EQ(triangle_orientations.size(), 6u);
}

TEST(Catalog, DecisionTreeShape) {
    DecisionTree t = decision_tree();
    EXPECT_EQ(t.root, base_diagram());
    EXPECT_EQ(t.branches.size(), 2u);
    EXPECT_EQ(t.leaves.size(), 4u);
    EXPECT_EQ(t.leaves.at({TaskKind::Emulation, PredictionVisibility::Shown}),
              *catalog_lookup("fig3d"));
    EXPECT_TRUE(has_edge(t.leaves.at({TaskKind::Emulation, PredictionVisibility::Hidden}), "YhatH",
                         "ZH", EdgeKind::Ambiguous));
}

TEST(Catalog, AttachExplanationNoAssumption) {
    Diagram c1 = attach_explanation(*catalog_lookup("fig3f"), IntuitionMode::NoAssumption);
    EXPECT_EQ(c1, *catalog_lookup("fig4c1"));
    EXPECT_TRUE(has_edge(c1, "E", "YH", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(c1, "E", "ZH", EdgeKind::Directed));
    // the revealed prediction belief is a copy; no explanation input
    EXPECT_FALSE(has_edge(c1, "E", "YhatH", EdgeKind::Directed));
    const Node* e = c1.node("E");
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->controller.value_or(""), tags::model);
    EXPECT_EQ(incoming_influences(c1, "E"), 0);
}

TEST(Catalog, AttachExplanationErrorPrior) {
    Diagram c2 = *catalog_lookup("fig4c2");
    EXPECT_TRUE(has_edge(c2, "E", "H", EdgeKind::Directed));
    EXPECT_TRUE(has_edge(c2, "H", "Z", EdgeKind::Correlational));
}

TEST(Catalog, AttachExplanationExpandsIntuition) {
    Diagram d = *catalog_lookup("fig7");
    EXPECT_TRUE(d.has_node("Ht1"));
    EXPECT_TRUE(has_edge(d, "E", "Ht1", EdgeKind::Directed));
}

TEST(Catalog, AttachExplanationRejectsSecondExplanation) {
    EXPECT_THROW(attach_explanation(*catalog_lookup("fig4c1"), IntuitionMode::NoAssumption),
                 ExplanationAlreadyPresent);
}

TEST(Catalog, ConditionValidation) {
    Condition bad{TaskKind::Discovery, PredictionVisibility::Shown, ExplanationVisibility::None,
                  IntuitionMode::ActivatesErrorPrior};
    EXPECT_THROW(bad.check(), ConfigError);
}

TEST(Catalog, BuildIsPure) {
    Condition c{TaskKind::Discovery, PredictionVisibility::Shown, ExplanationVisibility::Shown,
                IntuitionMode::NoAssumption};
    EXPECT_EQ(build(c), build(c));
}

TEST(Catalog, AllEntriesValidate) {
    for (const auto& [key, d] : catalog()) {
        EXPECT_TRUE(d.validate().empty()) << key;
    }
    EXPECT_FALSE(catalog_lookup("fig99").has_value());
}
