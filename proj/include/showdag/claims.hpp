#pragma once

#include <string>
#include <vector>

#include "showdag/catalog.hpp"
#include "showdag/dsep.hpp"

namespace showdag {

// One separation fact the diagram catalog is expected to entail. The suite
// is the executable ledger of the framework's independence statements.
struct Claim {
    std::string id;
    std::string diagram_key;
    SeparationQuery query;
    Verdict::Kind expected;
    std::string statement;
};

inline std::vector<Claim> claim_suite() {
    std::vector<Claim> claims;
    claims.push_back({"prediction-independent-of-label", "fig2",
                      {{"Yhat"}, {"Y"}, {"X", "g"}},
                      Verdict::Kind::Separated,
                      "the model prediction is separated from the task label given the input "
                      "and the model function"});
    claims.push_back({"error-collider-opens", "fig2",
                      {{"Y"}, {"Yhat"}, {"X", "g", "Z"}},
                      Verdict::Kind::Connected,
                      "conditioning on the error indicator connects label and prediction; with "
                      "the prediction also known, the label is pinned down in the binary case"});
    claims.push_back({"human-side-separated-from-core", "fig2",
                      {{"YH", "YhatH", "ZH"}, {"Y", "Yhat", "Z"}, {"X"}},
                      Verdict::Kind::Separated,
                      "without assumptions on intuition, the human approximations are separated "
                      "from the core variables given the input"});
    claims.push_back({"error-separated-from-input-given-labels", "fig2",
                      {{"X"}, {"Z"}, {"Y", "Yhat"}},
                      Verdict::Kind::Separated,
                      "the error indicator is a function of the two labels only"});
    claims.push_back({"prediction-belief-separated-without-explanation", "fig4b1",
                      {{"Yhat"}, {"YhatH"}, {"X"}},
                      Verdict::Kind::Separated,
                      "with nothing shown, the human belief about the prediction is separated "
                      "from the prediction itself given the input"});
    claims.push_back({"explanation-separated-from-label-and-error", "fig4c1",
                      {{"E"}, {"Y", "Z"}, {"X", "g"}},
                      Verdict::Kind::Separated,
                      "without intuition assumptions the explanation is separated from the task "
                      "label and the model error given the input and the model function"});
    claims.push_back({"error-belief-uninformative-without-intuition", "fig4c1",
                      {{"ZH"}, {"Z"}, {"X", "Yhat", "g"}},
                      Verdict::Kind::Separated,
                      "with no intuition assumption, the human error belief carries nothing "
                      "about the true error beyond the shown prediction and the input"});
    claims.push_back({"error-belief-informative-with-error-prior", "fig4c2",
                      {{"ZH"}, {"Z"}, {"X", "Yhat", "g"}},
                      Verdict::Kind::Connected,
                      "once the explanation activates an intuition correlated with the error "
                      "function, the human error belief may track the true error"});
    // The three pairwise links inside the human-approximation triangle: no
    // conditioning can rule these connections out in the base setting, and
    // the direction of each link differs across realizations.
    for (const char* key : {"fig3a", "fig3g"}) {
        claims.push_back({std::string("triangle-") + key + "-yh-yhath", key,
                          {{"YH"}, {"YhatH"}, {"X", "H"}},
                          Verdict::Kind::Connected,
                          "the link between the human label belief and the human prediction "
                          "belief cannot be ruled out in the base setting"});
        claims.push_back({std::string("triangle-") + key + "-yh-zh", key,
                          {{"YH"}, {"ZH"}, {"X", "H"}},
                          Verdict::Kind::Connected,
                          "the link between the human label belief and the human error belief "
                          "cannot be ruled out in the base setting"});
        claims.push_back({std::string("triangle-") + key + "-yhath-zh", key,
                          {{"YhatH"}, {"ZH"}, {"X", "H"}},
                          Verdict::Kind::Connected,
                          "the link between the human prediction belief and the human error "
                          "belief cannot be ruled out in the base setting"});
    }
    return claims;
}

struct ClaimResult {
    Claim claim;
    Verdict got;
    bool pass = false;
};

inline std::vector<ClaimResult> run_claims() {
    std::vector<ClaimResult> results;
    for (const Claim& c : claim_suite()) {
        ClaimResult r;
        r.claim = c;
        auto d = catalog_lookup(c.diagram_key);
        if (!d) {
            r.pass = false;
            results.push_back(std::move(r));
            continue;
        }
        r.got = d_separated(*d, c.query);
        r.pass = r.got.kind == c.expected;
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace showdag
