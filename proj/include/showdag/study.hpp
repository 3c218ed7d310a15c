#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "showdag/agents.hpp"
#include "showdag/instances.hpp"
#include "showdag/rng.hpp"
#include "showdag/stats.hpp"

namespace showdag {

struct Cohort {
    AgentProfile profile;
    int count = 0;
};

// Decision-draw scheme. Balanced uses systematic (cumulative) sampling per
// cohort and identifier: each agent keeps its own agreement probability but
// realized cohort frequencies track the configured means to within one
// count, which is what makes small-N replication runs stable. Iid draws
// every decision independently.
enum class SamplingScheme { Balanced, Iid };

struct StudyConfig {
    std::vector<Cohort> regular;
    std::vector<Cohort> anonymized;
    double alpha = 0.05;
    SamplingScheme sampling = SamplingScheme::Balanced;
    bool welch = false;
    bool expect_h1 = true;
    bool expect_h2a = true;
    bool expect_h2b = true;
    bool expect_h2c = true;

    void check() const {
        int n_reg = 0, n_anon = 0;
        for (const Cohort& c : regular) n_reg += c.count;
        for (const Cohort& c : anonymized) n_anon += c.count;
        if (n_reg < 2 || n_anon < 2) throw ConfigError("each arm needs at least 2 agents");
        if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("alpha must lie in (0,1)");
    }
};

// Calibrated default: one cohort holding the assumed intuitions, one cohort
// of regular participants without them, and an anonymized arm that can only
// follow or reject the shown prediction.
inline StudyConfig default_study_config() {
    StudyConfig cfg;
    cfg.regular.push_back({assumed_intuition_profile(), 70});
    cfg.regular.push_back({no_intuition_profile(0.5322, "weak-intuitions"), 66});
    cfg.anonymized.push_back({no_intuition_profile(0.7064, "anonymized"), 106});
    return cfg;
}

struct TrialRecord {
    int agent = 0;
    std::string arm;
    std::string cohort;
    std::string identifier;  // e.g. "A1"
    int position = 0;        // presentation order within the agent's session
    IncomeLabel decision = IncomeLabel::Over50K;
    bool agree = false;

    friend bool operator==(const TrialRecord& a, const TrialRecord& b) {
        return a.agent == b.agent && a.arm == b.arm && a.cohort == b.cohort &&
               a.identifier == b.identifier && a.position == b.position &&
               a.decision == b.decision && a.agree == b.agree;
    }
};

struct HypothesisOutcome {
    std::string id;
    std::string description;
    double lhs = 0.0;
    double rhs = 0.0;
    TestResult test;
    bool supported = false;  // direction holds and p < alpha

    friend bool operator==(const HypothesisOutcome& a, const HypothesisOutcome& b) {
        return a.id == b.id && a.description == b.description && a.lhs == b.lhs && a.rhs == b.rhs &&
               a.test.t == b.test.t && a.test.df == b.test.df && a.test.p == b.test.p &&
               a.supported == b.supported;
    }
};

struct StudyResult {
    std::uint64_t seed = 0;
    std::string config_hash;
    int n_regular = 0;
    int n_anonymized = 0;
    int n_holders = 0;  // regular agents passing the assumed-intuition filter
    double mean_regular = 0.0;
    double mean_anonymized = 0.0;
    // per-identifier agreement; the regular column follows the holders
    // convention of the within-subject analyses
    std::map<char, double> agreement_anonymized;
    std::map<char, double> agreement_regular;
    std::map<char, double> agreement_regular_all;
    HypothesisOutcome h1, h2a, h2b, h2c;
    bool matches_expectations = false;
    std::vector<TrialRecord> records;

    friend bool operator==(const StudyResult& a, const StudyResult& b) {
        return a.seed == b.seed && a.config_hash == b.config_hash && a.n_regular == b.n_regular &&
               a.n_anonymized == b.n_anonymized && a.n_holders == b.n_holders &&
               a.mean_regular == b.mean_regular && a.mean_anonymized == b.mean_anonymized &&
               a.agreement_anonymized == b.agreement_anonymized &&
               a.agreement_regular == b.agreement_regular &&
               a.agreement_regular_all == b.agreement_regular_all && a.h1 == b.h1 &&
               a.h2a == b.h2a && a.h2b == b.h2b && a.h2c == b.h2c &&
               a.matches_expectations == b.matches_expectations && a.records == b.records;
    }
};

namespace detail {

struct RosterEntry {
    int id = 0;
    const AgentProfile* profile = nullptr;
    std::string arm;
    std::string cohort;
    double delta = 0.0;
    int data_group = 1;  // which age variant of each identifier the agent sees
    std::array<bool, 8> agree{};
    std::array<IncomeLabel, 8> decision{};
};

inline double probit(double p) {
    static const boost::math::normal dist;
    return boost::math::quantile(dist, p);
}

}  // namespace detail

inline std::string study_config_hash(const StudyConfig& cfg);  // defined with the JSON io below

// Runs the two-arm income-prediction study: every agent sees the eight
// identifiers of its data group in a per-agent random order, decisions are
// aggregated per identifier, and the four hypothesis tests are run. Fully
// reproducible from the seed.
inline StudyResult run_study(const StudyConfig& cfg, std::uint64_t seed) {
    cfg.check();
    static const std::string letters = "ABCDEFGH";

    StudyResult result;
    result.seed = seed;
    result.config_hash = study_config_hash(cfg);

    // --- roster -----------------------------------------------------------
    std::vector<detail::RosterEntry> roster;
    int next_id = 0;
    auto add_arm = [&](const std::vector<Cohort>& cohorts, const std::string& arm) {
        for (std::size_t ci = 0; ci < cohorts.size(); ++ci) {
            const Cohort& cohort = cohorts[ci];
            std::string scope = "delta/" + arm + "/" + std::to_string(ci);
            Rng rng(derive_seed(seed, scope));
            double tau = cohort.profile.response.heterogeneity;
            std::vector<double> deltas(cohort.count, 0.0);
            if (tau > 0.0) {
                if (cfg.sampling == SamplingScheme::Balanced) {
                    // stratified normal quantiles, randomly assigned
                    std::vector<std::size_t> ranks = rng.permutation(cohort.count);
                    for (int i = 0; i < cohort.count; ++i)
                        deltas[i] = tau * detail::probit((static_cast<double>(ranks[i]) + 0.5) /
                                                         cohort.count);
                } else {
                    for (int i = 0; i < cohort.count; ++i) deltas[i] = tau * rng.next_normal();
                }
            }
            for (int i = 0; i < cohort.count; ++i) {
                detail::RosterEntry e;
                e.id = next_id++;
                e.profile = &cohort.profile;
                e.arm = arm;
                e.cohort = cohort.profile.name;
                e.delta = deltas[i];
                roster.push_back(e);
            }
        }
    };
    add_arm(cfg.regular, "regular");
    add_arm(cfg.anonymized, "anonymized");

    // --- data groups: age-balanced halves per arm --------------------------
    for (const std::string& arm : {std::string("regular"), std::string("anonymized")}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < roster.size(); ++i)
            if (roster[i].arm == arm) members.push_back(i);
        Rng rng(derive_seed(seed, "data-group/" + arm));
        rng.shuffle(members);
        for (std::size_t k = 0; k < members.size(); ++k)
            roster[members[k]].data_group = k < (members.size() + 1) / 2 ? 1 : 2;
    }

    // --- decisions ----------------------------------------------------------
    auto run_cell = [&](std::vector<std::size_t>& members, const std::string& scope,
                        std::size_t letter_index) {
        char letter = letters[letter_index];
        bool anonymized_arm = roster[members.front()].arm == "anonymized";
        Presentation pres{anonymized_arm, true};
        std::vector<double> probs(members.size());
        for (std::size_t k = 0; k < members.size(); ++k) {
            const detail::RosterEntry& e = roster[members[k]];
            const Instance& inst = data_group_instance(e.data_group, letter);
            Instance viewed = anonymized_arm ? anonymize(inst) : inst;
            probs[k] = agreement_probability(*e.profile, viewed, pres, e.delta);
        }
        Rng rng(derive_seed(seed, scope + "/" + letter));
        if (cfg.sampling == SamplingScheme::Balanced) {
            std::vector<std::size_t> order = rng.permutation(members.size());
            double walk = rng.next_u01();
            for (std::size_t k : order) {
                double next = walk + probs[k];
                bool agree = std::floor(next) > std::floor(walk);
                walk = next;
                detail::RosterEntry& e = roster[members[k]];
                e.agree[letter_index] = agree;
                const Instance& inst = data_group_instance(e.data_group, letter);
                e.decision[letter_index] = agree ? inst.prediction : flip(inst.prediction);
            }
        } else {
            for (std::size_t k = 0; k < members.size(); ++k) {
                detail::RosterEntry& e = roster[members[k]];
                bool agree = rng.next_u01() < probs[k];
                e.agree[letter_index] = agree;
                const Instance& inst = data_group_instance(e.data_group, letter);
                e.decision[letter_index] = agree ? inst.prediction : flip(inst.prediction);
            }
        }
    };
    {
        // group roster rows by (arm, cohort) preserving construction order
        std::vector<std::pair<std::string, std::vector<std::size_t>>> cells;
        for (std::size_t i = 0; i < roster.size(); ++i) {
            std::string key = roster[i].arm + "/" + roster[i].cohort;
            if (cells.empty() || cells.back().first != key) cells.push_back({key, {}});
            cells.back().second.push_back(i);
        }
        for (auto& [key, members] : cells)
            for (std::size_t li = 0; li < letters.size(); ++li)
                run_cell(members, "draw/" + key, li);
    }

    // --- records with per-agent presentation order --------------------------
    for (detail::RosterEntry& e : roster) {
        Rng rng(derive_seed(seed, "order/" + std::to_string(e.id)));
        std::vector<std::size_t> order = rng.permutation(letters.size());
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            std::size_t li = order[pos];
            TrialRecord rec;
            rec.agent = e.id;
            rec.arm = e.arm;
            rec.cohort = e.cohort;
            rec.identifier = std::string(1, letters[li]) +
                             std::to_string(data_group_variant(e.data_group, letters[li]));
            rec.position = static_cast<int>(pos);
            rec.decision = e.decision[li];
            rec.agree = e.agree[li];
            result.records.push_back(std::move(rec));
        }
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                  return a.agent != b.agent ? a.agent < b.agent : a.position < b.position;
              });

    // --- aggregation ---------------------------------------------------------
    auto letter_mean = [&](const std::vector<std::size_t>& members, std::size_t li) {
        double total = 0.0;
        for (std::size_t m : members) total += roster[m].agree[li] ? 1.0 : 0.0;
        return members.empty() ? 0.0 : total / static_cast<double>(members.size());
    };
    std::vector<std::size_t> regular_members, anonymized_members, holders;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (roster[i].arm == "regular") {
            regular_members.push_back(i);
            if (roster[i].profile->holds_assumed_intuitions()) holders.push_back(i);
        } else {
            anonymized_members.push_back(i);
        }
    }
    result.n_regular = static_cast<int>(regular_members.size());
    result.n_anonymized = static_cast<int>(anonymized_members.size());
    result.n_holders = static_cast<int>(holders.size());
    for (std::size_t li = 0; li < letters.size(); ++li) {
        result.agreement_anonymized[letters[li]] = letter_mean(anonymized_members, li);
        result.agreement_regular[letters[li]] = letter_mean(holders, li);
        result.agreement_regular_all[letters[li]] = letter_mean(regular_members, li);
    }

    auto user_agreement = [&](std::size_t i) {
        double total = 0.0;
        for (std::size_t li = 0; li < letters.size(); ++li)
            total += roster[i].agree[li] ? 1.0 : 0.0;
        return total / static_cast<double>(letters.size());
    };
    std::vector<double> regular_users, anonymized_users;
    for (std::size_t i : regular_members) regular_users.push_back(user_agreement(i));
    for (std::size_t i : anonymized_members) anonymized_users.push_back(user_agreement(i));
    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    result.mean_regular = mean_of(regular_users);
    result.mean_anonymized = mean_of(anonymized_users);

    // --- hypothesis tests ----------------------------------------------------
    result.h1.id = "H1";
    result.h1.description = "anonymized agreement > regular agreement (independent t)";
    result.h1.lhs = result.mean_anonymized;
    result.h1.rhs = result.mean_regular;
    result.h1.test = cfg.welch ? t_welch(anonymized_users, regular_users)
                               : t_independent(anonymized_users, regular_users);
    result.h1.supported = result.h1.lhs > result.h1.rhs && result.h1.test.p < cfg.alpha;

    auto pair_mean = [&](std::size_t i, std::size_t first) {
        return 0.5 * ((roster[i].agree[first] ? 1.0 : 0.0) + (roster[i].agree[first + 1] ? 1.0 : 0.0));
    };
    auto paired_hypothesis = [&](const std::string& id, const std::string& desc,
                                 std::size_t rhs_first) {
        HypothesisOutcome h;
        h.id = id;
        h.description = desc;
        if (holders.size() < 2) {
            // the within-subject contrasts are defined only on agents holding
            // the assumed intuitions
            h.description += " [skipped: fewer than 2 qualifying agents]";
            h.test.kind = TestResult::Kind::Paired;
            h.test.degenerate = true;
            return h;
        }
        std::vector<double> lhs, rhs;
        for (std::size_t i : holders) {
            lhs.push_back(pair_mean(i, 0));  // identifiers A and B
            rhs.push_back(pair_mean(i, rhs_first));
        }
        h.lhs = mean_of(lhs);
        h.rhs = mean_of(rhs);
        h.test = t_paired(lhs, rhs);
        h.supported = h.lhs > h.rhs && h.test.p < cfg.alpha;
        return h;
    };
    result.h2a = paired_hypothesis("H2a", "AB agreement > CD agreement (paired t, holders)", 2);
    result.h2b = paired_hypothesis("H2b", "AB agreement > EF agreement (paired t, holders)", 4);
    result.h2c = paired_hypothesis("H2c", "AB agreement > GH agreement (paired t, holders)", 6);

    result.matches_expectations =
        result.h1.supported == cfg.expect_h1 && result.h2a.supported == cfg.expect_h2a &&
        result.h2b.supported == cfg.expect_h2b && result.h2c.supported == cfg.expect_h2c;
    return result;
}

// ---------------------------------------------------------------------------
// config and result serialization
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json profile_to_json(const AgentProfile& p) {
    nlohmann::ordered_json j;
    j["name"] = p.name;
    if (p.relevance)
        j["relevance"] = *p.relevance == Relevance::EducationOverAge ? "education-over-age"
                                                                     : "age-over-education";
    else
        j["relevance"] = nullptr;
    j["mechanism_education"] = p.mechanism_education;
    j["mechanism_age"] = p.mechanism_age;
    j["follow_rate_no_intuition"] = p.follow_rate_no_intuition;
    const ResponseModel& r = p.response;
    j["response"] = nlohmann::ordered_json{
        {"match_consistent_low", r.match_consistent_low},
        {"match_consistent_high", r.match_consistent_high},
        {"match_inconsistent_low", r.match_inconsistent_low},
        {"match_inconsistent_high", r.match_inconsistent_high},
        {"conflict_relevance_low", r.conflict_relevance_low},
        {"conflict_relevance_high", r.conflict_relevance_high},
        {"conflict_mechanism_low", r.conflict_mechanism_low},
        {"conflict_mechanism_high", r.conflict_mechanism_high},
        {"heterogeneity", r.heterogeneity},
    };
    return j;
}

inline AgentProfile profile_from_json(const nlohmann::json& j) {
    AgentProfile p;
    p.name = j.value("name", std::string("agent"));
    if (j.contains("relevance") && !j["relevance"].is_null()) {
        std::string r = j["relevance"].get<std::string>();
        if (r == "education-over-age")
            p.relevance = Relevance::EducationOverAge;
        else if (r == "age-over-education")
            p.relevance = Relevance::AgeOverEducation;
        else
            throw ConfigError("unknown relevance ranking: " + r);
    }
    p.mechanism_education = j.value("mechanism_education", 0);
    p.mechanism_age = j.value("mechanism_age", 0);
    p.follow_rate_no_intuition = j.value("follow_rate_no_intuition", 0.5);
    if (j.contains("response")) {
        const auto& jr = j["response"];
        ResponseModel r;
        r.match_consistent_low = jr.value("match_consistent_low", r.match_consistent_low);
        r.match_consistent_high = jr.value("match_consistent_high", r.match_consistent_high);
        r.match_inconsistent_low = jr.value("match_inconsistent_low", r.match_inconsistent_low);
        r.match_inconsistent_high = jr.value("match_inconsistent_high", r.match_inconsistent_high);
        r.conflict_relevance_low = jr.value("conflict_relevance_low", r.conflict_relevance_low);
        r.conflict_relevance_high = jr.value("conflict_relevance_high", r.conflict_relevance_high);
        r.conflict_mechanism_low = jr.value("conflict_mechanism_low", r.conflict_mechanism_low);
        r.conflict_mechanism_high = jr.value("conflict_mechanism_high", r.conflict_mechanism_high);
        r.heterogeneity = jr.value("heterogeneity", r.heterogeneity);
        p.response = r;
    }
    return p;
}

inline nlohmann::ordered_json study_config_to_json(const StudyConfig& cfg) {
    nlohmann::ordered_json j;
    j["alpha"] = cfg.alpha;
    j["sampling"] = cfg.sampling == SamplingScheme::Balanced ? "balanced" : "iid";
    j["welch"] = cfg.welch;
    auto arm = [](const std::vector<Cohort>& cohorts) {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const Cohort& c : cohorts)
            out.push_back({{"count", c.count}, {"profile", profile_to_json(c.profile)}});
        return out;
    };
    j["regular"] = arm(cfg.regular);
    j["anonymized"] = arm(cfg.anonymized);
    j["expect"] = nlohmann::ordered_json{{"h1", cfg.expect_h1},
                                         {"h2a", cfg.expect_h2a},
                                         {"h2b", cfg.expect_h2b},
                                         {"h2c", cfg.expect_h2c}};
    return j;
}

inline StudyConfig study_config_from_json(const nlohmann::json& j) {
    StudyConfig cfg;
    cfg.regular.clear();
    cfg.anonymized.clear();
    cfg.alpha = j.value("alpha", cfg.alpha);
    std::string sampling = j.value("sampling", std::string("balanced"));
    if (sampling == "balanced")
        cfg.sampling = SamplingScheme::Balanced;
    else if (sampling == "iid")
        cfg.sampling = SamplingScheme::Iid;
    else
        throw ConfigError("unknown sampling scheme: " + sampling);
    cfg.welch = j.value("welch", false);
    auto arm = [](const nlohmann::json& ja) {
        std::vector<Cohort> out;
        for (const auto& jc : ja)
            out.push_back({profile_from_json(jc.at("profile")), jc.at("count").get<int>()});
        return out;
    };
    if (j.contains("regular")) cfg.regular = arm(j["regular"]);
    if (j.contains("anonymized")) cfg.anonymized = arm(j["anonymized"]);
    if (j.contains("expect")) {
        cfg.expect_h1 = j["expect"].value("h1", true);
        cfg.expect_h2a = j["expect"].value("h2a", true);
        cfg.expect_h2b = j["expect"].value("h2b", true);
        cfg.expect_h2c = j["expect"].value("h2c", true);
    }
    cfg.check();
    return cfg;
}

inline std::string study_config_hash(const StudyConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(study_config_to_json(cfg).dump())));
    return buf;
}

}  // namespace showdag
