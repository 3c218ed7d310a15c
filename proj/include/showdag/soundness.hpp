#pragma once

#include <map>
#include <string>
#include <vector>

#include "showdag/citest.hpp"
#include "showdag/claims.hpp"
#include "showdag/dsep.hpp"
#include "showdag/scm.hpp"

namespace showdag {

// Monte-Carlo soundness: wherever the engine answers Separated, data sampled
// from a compatible world must test independent. Connected verdicts are
// reported but never asserted dependent, since deterministic mechanisms
// create extra independences (faithfulness is not assumed).
struct SoundnessEntry {
    std::string claim_id;
    std::string diagram_key;
    std::string realization;  // orientation label, empty when already realized
    SeparationKind verdict = SeparationKind::Separated;
    bool checked = false;  // true when a CI test ran (Separated verdicts only)
    CiResult ci{};
    bool violation = false;  // separated but measured dependent
};

struct SoundnessReport {
    std::vector<SoundnessEntry> entries;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double alpha = 0.0;
    double alpha_adjusted = 0.0;
    std::size_t n = 0;
    std::size_t permutations = 0;
    std::uint64_t seed = 0;

    bool pass() const { return violations == 0; }
};

// Runs the given queries against one realized world.
inline SoundnessReport soundness_check(const Diagram& realized, const WorldSpec& w,
                                       const std::vector<std::pair<std::string, SeparationQuery>>& queries,
                                       std::size_t n, std::uint64_t seed, double alpha,
                                       std::size_t permutations = 1000) {
    SoundnessReport report;
    report.alpha = alpha;
    report.n = n;
    report.permutations = permutations;
    report.seed = seed;

    std::size_t separated = 0;
    std::vector<Verdict> verdicts;
    for (const auto& [id, q] : queries) {
        Verdict v = d_separated(realized, q);
        verdicts.push_back(v);
        if (v.kind == Verdict::Kind::Separated) ++separated;
    }
    report.alpha_adjusted = separated > 0 ? alpha / static_cast<double>(separated) : alpha;

    Scm scm = Scm::instantiate(realized, w);
    SampleTable table = scm.sample(n, derive_seed(seed, "soundness-samples"));
    for (std::size_t i = 0; i < queries.size(); ++i) {
        SoundnessEntry e;
        e.claim_id = queries[i].first;
        e.verdict = verdicts[i].kind == Verdict::Kind::Separated ? SeparationKind::Separated
                                                                  : SeparationKind::Connected;
        if (verdicts[i].kind == Verdict::Kind::Separated) {
            SeparationQuery q = queries[i].second;
            // tags have no data counterpart; strip them for the CI test
            std::vector<std::string> given;
            for (const std::string& g : q.given)
                if (std::find(verdicts[i].fixed_tags.begin(), verdicts[i].fixed_tags.end(), g) ==
                    verdicts[i].fixed_tags.end())
                    given.push_back(g);
            e.ci = ci_test(table, q.a, q.b, given, report.alpha_adjusted, permutations,
                           derive_seed(seed, "soundness-ci/" + e.claim_id));
            e.checked = true;
            e.violation = e.ci.dependent;
            ++report.checks;
            if (e.violation) ++report.violations;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

// Whole-catalog run: every claim, on every realization of its diagram.
inline SoundnessReport catalog_soundness(std::size_t n, std::uint64_t seed, double alpha = 0.01,
                                         std::size_t permutations = 2000,
                                         const WorldSpec& w = WorldSpec{}) {
    SoundnessReport report;
    report.alpha = alpha;
    report.n = n;
    report.permutations = permutations;
    report.seed = seed;

    struct Unit {
        Claim claim;
        Diagram realization;
        std::string label;
    };
    std::vector<Unit> units;
    std::size_t separated_checks = 0;
    for (const Claim& c : claim_suite()) {
        Diagram d = *catalog_lookup(c.diagram_key);
        for (const Diagram& r : d.realizations()) {
            Unit u{c, r, detail::orientation_label(d, r)};
            Verdict v = d_separated(r, c.query);
            if (v.kind == Verdict::Kind::Separated) ++separated_checks;
            units.push_back(std::move(u));
        }
    }
    report.alpha_adjusted =
        separated_checks > 0 ? alpha / static_cast<double>(separated_checks) : alpha;

    // one sample table per distinct realized structure
    std::map<std::string, SampleTable> tables;
    for (const Unit& u : units) {
        SoundnessEntry e;
        e.claim_id = u.claim.id;
        e.diagram_key = u.claim.diagram_key;
        e.realization = u.label;
        Verdict v = d_separated(u.realization, u.claim.query);
        e.verdict = v.kind == Verdict::Kind::Separated ? SeparationKind::Separated
                                                       : SeparationKind::Connected;
        if (v.kind == Verdict::Kind::Separated) {
            std::string key = u.realization.normalized_key();
            auto it = tables.find(key);
            if (it == tables.end()) {
                Scm scm = Scm::instantiate(u.realization, w);
                it = tables
                         .emplace(key, scm.sample(n, derive_seed(seed, "soundness/" + u.claim.diagram_key +
                                                                           "/" + u.label)))
                         .first;
            }
            std::vector<std::string> given;
            for (const std::string& g : u.claim.query.given)
                if (std::find(v.fixed_tags.begin(), v.fixed_tags.end(), g) == v.fixed_tags.end())
                    given.push_back(g);
            e.ci = ci_test(it->second, u.claim.query.a, u.claim.query.b, given,
                           report.alpha_adjusted, permutations,
                           derive_seed(seed, "ci/" + u.claim.id + "/" + u.label));
            e.checked = true;
            e.violation = e.ci.dependent;
            ++report.checks;
            if (e.violation) ++report.violations;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace showdag
