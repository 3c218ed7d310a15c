#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "showdag/errors.hpp"
#include "showdag/instances.hpp"
#include "showdag/rng.hpp"

namespace showdag {

// Relevance intuition: which feature matters more.
enum class Relevance { EducationOverAge, AgeOverEducation };

// Alignment of the shown explanation with the relevance intuition that
// education matters more: supported exactly when education is highlighted.
inline bool alignment_relevance(const Instance& inst) {
    if (inst.anonymized)
        throw AnonymizedInstance("relevance cannot be judged on an anonymized profile");
    return inst.explanation == Highlight::Education;
}

// Alignment of prediction and highlighted feature with the positive-income
// mechanism intuition: a high highlighted value should come with a high
// prediction, a low value with a low one.
inline bool alignment_mechanism(const Instance& inst) {
    if (inst.anonymized)
        throw AnonymizedInstance("mechanism cannot be judged on an anonymized profile");
    bool high = highlighted_value_high(inst);
    return high == (inst.prediction == IncomeLabel::Over50K);
}

namespace detail {

inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// E[sigmoid(l + delta)] for delta ~ N(0, tau^2), midpoint quadrature on +-6 tau.
inline double marginal_agreement(double l, double tau) {
    if (tau <= 0.0) return sigmoid(l);
    static const int kPoints = 201;
    double total = 0.0, wsum = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        double x = -6.0 + 12.0 * (i + 0.5) / kPoints;
        double w = std::exp(-0.5 * x * x);
        total += w * sigmoid(l + tau * x);
        wsum += w;
    }
    return total / wsum;
}

inline double solve_logit_for_target(double target, double tau) {
    if (target <= 0.0 || target >= 1.0)
        throw ConfigError("agreement targets must lie strictly inside (0,1)");
    struct Key {
        double target, tau;
        bool operator<(const Key& o) const {
            return target != o.target ? target < o.target : tau < o.tau;
        }
    };
    static std::map<Key, double> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({target, tau});
        if (it != cache.end()) return it->second;
    }
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (marginal_agreement(mid, tau) < target)
            lo = mid;
        else
            hi = mid;
    }
    double solved = 0.5 * (lo + hi);
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(Key{target, tau}, solved);
    return solved;
}

}  // namespace detail

// Context of one decision, as seen through the agent's intuitions.
enum class ResponseCase {
    FollowOnly,           // no usable intuition: prediction is all there is
    MatchConsistent,      // prediction matches intuition, explanation supports R and M
    MatchInconsistent,    // prediction matches intuition, explanation violates R and M
    ConflictRelevance,    // prediction conflicts, explanation violates relevance only
    ConflictMechanism,    // prediction conflicts, explanation violates mechanism only
    ConflictOther,        // prediction conflicts, remaining combinations
};

// Population-level agreement probabilities per decision context, split by the
// direction of the shown prediction (people lean differently on low- and
// high-income calls). Values are marginal over the per-agent offset delta ~
// N(0, heterogeneity^2); the internal logits are solved at construction.
struct ResponseModel {
    double match_consistent_low = 0.9571;
    double match_consistent_high = 0.8571;
    double match_inconsistent_low = 0.9286;
    double match_inconsistent_high = 0.7429;
    double conflict_relevance_low = 0.3286;
    double conflict_relevance_high = 0.1714;
    double conflict_mechanism_low = 0.2857;
    double conflict_mechanism_high = 0.1571;
    double heterogeneity = 3.0;

    double target(ResponseCase c, IncomeLabel prediction) const {
        bool low = prediction == IncomeLabel::Under50K;
        switch (c) {
            case ResponseCase::MatchConsistent:
                return low ? match_consistent_low : match_consistent_high;
            case ResponseCase::MatchInconsistent:
                return low ? match_inconsistent_low : match_inconsistent_high;
            case ResponseCase::ConflictRelevance:
                return low ? conflict_relevance_low : conflict_relevance_high;
            case ResponseCase::ConflictMechanism:
                return low ? conflict_mechanism_low : conflict_mechanism_high;
            case ResponseCase::ConflictOther:
                return 0.5 * (low ? conflict_relevance_low + conflict_mechanism_low
                                  : conflict_relevance_high + conflict_mechanism_high);
            case ResponseCase::FollowOnly:
                break;
        }
        throw ConfigError("no response target for this case");
    }
};

// The compact three-parameter family: a base agreement probability when the
// prediction matches intuition, a conflict probability otherwise, and an
// explanation weight that boosts agreement when the explanation supports
// both intuitions and the prediction matches. No direction lean.
inline ResponseModel make_response(double q_base, double q_conflict, double explanation_weight,
                                   double heterogeneity = 0.0) {
    if (q_base < 0 || q_base > 1 || q_conflict < 0 || q_conflict > 1 || explanation_weight < 0 ||
        explanation_weight > 1)
        throw ConfigError("response probabilities must lie in [0,1]");
    ResponseModel m;
    double boosted = q_base + (1.0 - q_base) * explanation_weight;
    m.match_consistent_low = m.match_consistent_high = boosted;
    m.match_inconsistent_low = m.match_inconsistent_high = q_base;
    m.conflict_relevance_low = m.conflict_relevance_high = q_conflict;
    m.conflict_mechanism_low = m.conflict_mechanism_high = q_conflict;
    m.heterogeneity = heterogeneity;
    return m;
}

// A simulated participant's task-specific intuitions and decision policy.
struct AgentProfile {
    std::string name = "agent";
    std::optional<Relevance> relevance;
    int mechanism_education = 0;  // +1 positive, -1 negative, 0 none
    int mechanism_age = 0;
    double follow_rate_no_intuition = 0.5;
    ResponseModel response;

    bool has_intuition() const {
        return relevance.has_value() && (mechanism_education != 0 || mechanism_age != 0);
    }

    // the filter used for the within-subject analyses
    bool holds_assumed_intuitions() const {
        return relevance == Relevance::EducationOverAge && mechanism_education > 0 &&
               mechanism_age > 0;
    }
};

inline AgentProfile assumed_intuition_profile() {
    AgentProfile p;
    p.name = "assumed-intuitions";
    p.relevance = Relevance::EducationOverAge;
    p.mechanism_education = +1;
    p.mechanism_age = +1;
    p.follow_rate_no_intuition = 0.7064;
    p.response = ResponseModel{};
    return p;
}

inline AgentProfile no_intuition_profile(double follow_rate, const std::string& name) {
    AgentProfile p;
    p.name = name;
    p.follow_rate_no_intuition = follow_rate;
    p.response.heterogeneity = 3.0;
    return p;
}

// The label the agent would give on its own: the top-ranked feature's value
// combined with the mechanism sign for that feature.
inline IncomeLabel intuitive_label(const AgentProfile& p, const Instance& inst) {
    if (inst.anonymized) throw AnonymizedInstance("no feature intuitions on anonymized profiles");
    if (!p.relevance) throw NoIntuition("profile has no relevance ranking");
    bool value_high;
    int sign;
    if (*p.relevance == Relevance::EducationOverAge) {
        value_high = education_is_high(inst.education);
        sign = p.mechanism_education;
    } else {
        value_high = age_is_high(inst.age);
        sign = p.mechanism_age;
    }
    if (sign == 0) throw NoIntuition("no mechanism sign for the top-ranked feature");
    bool predict_high = sign > 0 ? value_high : !value_high;
    return predict_high ? IncomeLabel::Over50K : IncomeLabel::Under50K;
}

struct Presentation {
    bool anonymized = false;
    bool explanation_shown = true;
};

inline ResponseCase classify_response(const AgentProfile& p, const Instance& inst,
                                      const Presentation& pres) {
    if (pres.anonymized || !p.relevance || !p.has_intuition()) return ResponseCase::FollowOnly;
    IncomeLabel own = intuitive_label(p, inst);
    bool match = own == inst.prediction;
    if (!pres.explanation_shown)
        return match ? ResponseCase::MatchInconsistent : ResponseCase::ConflictOther;
    bool rel = alignment_relevance(inst);
    bool mech = alignment_mechanism(inst);
    if (match) return rel && mech ? ResponseCase::MatchConsistent : ResponseCase::MatchInconsistent;
    if (!rel && mech) return ResponseCase::ConflictRelevance;
    if (rel && !mech) return ResponseCase::ConflictMechanism;
    return ResponseCase::ConflictOther;
}

// Per-decision agreement probability for an agent with offset delta.
inline double agreement_probability(const AgentProfile& p, const Instance& inst,
                                    const Presentation& pres, double delta) {
    ResponseCase c = classify_response(p, inst, pres);
    double tau = p.response.heterogeneity;
    double target = c == ResponseCase::FollowOnly ? p.follow_rate_no_intuition
                                                  : p.response.target(c, inst.prediction);
    if (target <= 0.0) return 0.0;  // boundary rates are deterministic
    if (target >= 1.0) return 1.0;
    return detail::sigmoid(detail::solve_logit_for_target(target, tau) + delta);
}

struct Decision {
    IncomeLabel predicted = IncomeLabel::Over50K;  // the agent's final call
    bool agree = false;                            // equals the shown prediction
};

// Decision from an explicit uniform draw; deterministic given its inputs.
inline Decision decide_with_uniform(const AgentProfile& p, const Instance& inst,
                                    const Presentation& pres, double delta, double uniform) {
    Decision d;
    Instance viewed = pres.anonymized ? anonymize(inst) : inst;
    double prob = agreement_probability(p, viewed, pres, delta);
    d.agree = uniform < prob;
    d.predicted = d.agree ? inst.prediction : flip(inst.prediction);
    return d;
}

// Convenience seeded form: the agent offset and the decision draw both come
// from the seed.
inline Decision decide(const AgentProfile& p, const Instance& inst, bool anonymized,
                       std::uint64_t seed) {
    Rng rng(derive_seed(seed, "decide"));
    double delta = p.response.heterogeneity > 0 ? p.response.heterogeneity * rng.next_normal() : 0.0;
    return decide_with_uniform(p, inst, Presentation{anonymized, true}, delta, rng.next_u01());
}

}  // namespace showdag
