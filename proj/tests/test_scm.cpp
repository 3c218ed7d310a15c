#include <gtest/gtest.h>

#include <cmath>

#include "showdag/catalog.hpp"
#include "showdag/scm.hpp"

using namespace showdag;

namespace {

Diagram core_world_diagram() {
    // X, Y, Yhat, Z with the task link oriented toward Y
    Diagram d = *catalog_lookup("fig2");
    return d.realizations().front();
}

double column_mean(const SampleTable& t, const std::string& name) {
    const auto& col = t.column(name);
    double total = 0.0;
    for (int v : col) total += v;
    return total / static_cast<double>(col.size());
}

}  // namespace

TEST(Scm, DefaultWorldErrorRateIsOneTenth) {
    Scm scm = Scm::instantiate(core_world_diagram(), WorldSpec{});
    SampleTable t = scm.sample(50000, 11);
    EXPECT_NEAR(column_mean(t, "Z"), 0.10, 0.005);
}

TEST(Scm, PerfectModelNeverErrs) {
    WorldSpec w;
    w.model_rule = w.task_rule;  // identical boundaries
    Scm scm = Scm::instantiate(core_world_diagram(), w);
    SampleTable t = scm.sample(5000, 3);
    EXPECT_EQ(column_mean(t, "Z"), 0.0);
}

TEST(Scm, SamplingIsBitwiseReproducible) {
    Scm scm = Scm::instantiate(*catalog_lookup("fig3d")->realizations().begin(), WorldSpec{});
    SampleTable a = scm.sample(2000, 99);
    SampleTable b = scm.sample(2000, 99);
    EXPECT_EQ(a.to_csv(), b.to_csv());
    SampleTable c = scm.sample(2000, 100);
    EXPECT_NE(a.to_csv(), c.to_csv());
}

TEST(Scm, RejectsZeroSamplesAndUnrealizedDiagrams) {
    Scm scm = Scm::instantiate(core_world_diagram(), WorldSpec{});
    EXPECT_THROW(scm.sample(0, 1), ConfigError);
    EXPECT_THROW(Scm::instantiate(base_diagram(), WorldSpec{}), ConfigError);
}

TEST(Scm, UnboundNodeReported) {
    // a prediction node with no input parent has no rule
    Diagram d = Diagram::from_roles({VariableRole::Input, VariableRole::ModelPrediction});
    EXPECT_THROW(Scm::instantiate(d, WorldSpec{}), UnboundNode);
}

TEST(Scm, EmulationShownWorldIsFullyDetermined) {
    Diagram d = catalog_lookup("fig3d")->realizations().front();
    Scm scm = Scm::instantiate(d, WorldSpec{});
    SampleTable t = scm.sample(20000, 5);
    const auto& y = t.column("Y");
    const auto& yh = t.column("YH");
    const auto& yhat = t.column("Yhat");
    const auto& yhath = t.column("YhatH");
    const auto& z = t.column("Z");
    const auto& zh = t.column("ZH");
    for (std::size_t i = 0; i < t.rows(); ++i) {
        ASSERT_EQ(y[i], yh[i]);
        ASSERT_EQ(yhat[i], yhath[i]);
        ASSERT_EQ(z[i], zh[i]);
    }
}

TEST(Scm, LabelRecoverableFromErrorAndPrediction) {
    for (const Diagram& r : catalog_lookup("fig2")->realizations()) {
        Scm scm = Scm::instantiate(r, WorldSpec{});
        SampleTable t = scm.sample(20000, 17);
        const auto& y = t.column("Y");
        const auto& yhat = t.column("Yhat");
        const auto& z = t.column("Z");
        for (std::size_t i = 0; i < t.rows(); ++i) ASSERT_EQ(y[i], yhat[i] ^ z[i]);
    }
}

TEST(Scm, ReverseTaskOrientationMatchesForwardJoint) {
    auto rs = catalog_lookup("fig2")->realizations();
    ASSERT_EQ(rs.size(), 2u);
    Scm forward = Scm::instantiate(rs[0], WorldSpec{});
    Scm reverse = Scm::instantiate(rs[1], WorldSpec{});
    SampleTable tf = forward.sample(60000, 21);
    SampleTable tr = reverse.sample(60000, 22);
    // the observational joint over (Y, Z) must agree between orientations
    EXPECT_NEAR(column_mean(tf, "Y"), column_mean(tr, "Y"), 0.01);
    EXPECT_NEAR(column_mean(tf, "Z"), column_mean(tr, "Z"), 0.005);
}

TEST(Scm, CsvHasNodeHeaderAndRows) {
    Scm scm = Scm::instantiate(core_world_diagram(), WorldSpec{});
    SampleTable t = scm.sample(3, 1);
    std::string csv = t.to_csv();
    std::string header = csv.substr(0, csv.find('\n'));
    for (const char* name : {"X", "Y", "Yhat", "Z", "YH", "YhatH", "ZH", "H"})
        EXPECT_NE(header.find(name), std::string::npos) << name;
    EXPECT_EQ(header.find("~L"), std::string::npos);  // latents stay internal
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Scm, WorldSpecJsonRoundTrip) {
    WorldSpec w;
    w.resolution = 10;
    w.model_rule.cut = 0.7;
    w.unshown_flip = 0.25;
    WorldSpec back = world_from_json(world_to_json(w));
    EXPECT_EQ(back.resolution, 10);
    EXPECT_DOUBLE_EQ(back.model_rule.cut, 0.7);
    EXPECT_DOUBLE_EQ(back.unshown_flip, 0.25);
    EXPECT_THROW(world_from_json(nlohmann::json{{"resolution", 1}}), ConfigError);
}
