#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "showdag/study.hpp"

namespace showdag {

namespace detail {
inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}
inline std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}
}  // namespace detail

inline std::string hypothesis_line(const HypothesisOutcome& h) {
    std::ostringstream os;
    os << h.id << "  " << h.description << ": " << detail::fixed(100.0 * h.lhs, 2) << "% vs "
       << detail::fixed(100.0 * h.rhs, 2) << "%  t=" << detail::fixed(h.test.t, 3)
       << " df=" << detail::fixed(h.test.df, 0) << " p=" << detail::sci(h.test.p)
       << (h.supported ? "  supported" : "  not supported");
    return os.str();
}

inline std::string report_text(const StudyResult& r) {
    std::ostringstream os;
    os << "income-prediction study report\n";
    os << "seed: " << r.seed << "\n";
    os << "config: " << r.config_hash << "\n";
    os << "arms: anonymized n=" << r.n_anonymized << " mean agreement "
       << detail::fixed(100.0 * r.mean_anonymized, 2) << "%; regular n=" << r.n_regular
       << " mean agreement " << detail::fixed(100.0 * r.mean_regular, 2) << "% ("
       << r.n_holders << " hold the assumed intuitions)\n";
    os << "\nper-identifier agreement (%)\n";
    os << "identifier  anonymized  regular(holders)  regular(all)\n";
    for (char c = 'A'; c <= 'H'; ++c) {
        os << c << "           " << detail::fixed(100.0 * r.agreement_anonymized.at(c), 2)
           << "       " << detail::fixed(100.0 * r.agreement_regular.at(c), 2) << "             "
           << detail::fixed(100.0 * r.agreement_regular_all.at(c), 2) << "\n";
    }
    os << "\nhypotheses\n";
    os << hypothesis_line(r.h1) << "\n";
    os << hypothesis_line(r.h2a) << "\n";
    os << hypothesis_line(r.h2b) << "\n";
    os << hypothesis_line(r.h2c) << "\n";
    os << "\nverdicts match expectations: " << (r.matches_expectations ? "yes" : "no") << "\n";
    return os.str();
}

// identifier table only: 8 rows, one column per arm
inline std::string report_csv(const StudyResult& r) {
    std::ostringstream os;
    os << "identifier,anonymized,regular\n";
    for (char c = 'A'; c <= 'H'; ++c)
        os << c << ',' << detail::fixed(100.0 * r.agreement_anonymized.at(c), 4) << ','
           << detail::fixed(100.0 * r.agreement_regular.at(c), 4) << "\n";
    return os.str();
}

inline std::string records_csv(const StudyResult& r) {
    std::ostringstream os;
    os << "agent,arm,cohort,identifier,position,decision,agree\n";
    for (const TrialRecord& rec : r.records)
        os << rec.agent << ',' << rec.arm << ',' << rec.cohort << ',' << rec.identifier << ','
           << rec.position << ',' << to_string(rec.decision) << ',' << (rec.agree ? 1 : 0)
           << "\n";
    return os.str();
}

inline nlohmann::ordered_json hypothesis_to_json(const HypothesisOutcome& h) {
    return nlohmann::ordered_json{
        {"id", h.id},
        {"description", h.description},
        {"lhs", h.lhs},
        {"rhs", h.rhs},
        {"t", h.test.t},
        {"df", h.test.df},
        {"p", h.test.p},
        {"supported", h.supported},
    };
}

inline HypothesisOutcome hypothesis_from_json(const nlohmann::json& j) {
    HypothesisOutcome h;
    h.id = j.at("id").get<std::string>();
    h.description = j.at("description").get<std::string>();
    h.lhs = j.at("lhs").get<double>();
    h.rhs = j.at("rhs").get<double>();
    h.test.t = j.at("t").get<double>();
    h.test.df = j.at("df").get<double>();
    h.test.p = j.at("p").get<double>();
    h.supported = j.at("supported").get<bool>();
    return h;
}

inline nlohmann::ordered_json report_json(const StudyResult& r) {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["config"] = r.config_hash;
    j["n_regular"] = r.n_regular;
    j["n_anonymized"] = r.n_anonymized;
    j["n_holders"] = r.n_holders;
    j["mean_regular"] = r.mean_regular;
    j["mean_anonymized"] = r.mean_anonymized;
    auto table = [](const std::map<char, double>& m) {
        nlohmann::ordered_json out;
        for (const auto& [c, v] : m) out[std::string(1, c)] = v;
        return out;
    };
    j["agreement_anonymized"] = table(r.agreement_anonymized);
    j["agreement_regular"] = table(r.agreement_regular);
    j["agreement_regular_all"] = table(r.agreement_regular_all);
    j["hypotheses"] = nlohmann::ordered_json::array(
        {hypothesis_to_json(r.h1), hypothesis_to_json(r.h2a), hypothesis_to_json(r.h2b),
         hypothesis_to_json(r.h2c)});
    j["matches_expectations"] = r.matches_expectations;
    j["records"] = nlohmann::ordered_json::array();
    for (const TrialRecord& rec : r.records)
        j["records"].push_back(nlohmann::ordered_json{
            {"agent", rec.agent},
            {"arm", rec.arm},
            {"cohort", rec.cohort},
            {"identifier", rec.identifier},
            {"position", rec.position},
            {"decision", rec.decision == IncomeLabel::Over50K ? ">50K" : "<50K"},
            {"agree", rec.agree},
        });
    return j;
}

// Format dispatcher for the study report.
inline std::string render_report(const StudyResult& r, const std::string& format) {
    if (format == "text") return report_text(r);
    if (format == "csv") return report_csv(r);
    if (format == "json") return report_json(r).dump(2) + "\n";
    throw UnsupportedFormat("unsupported report format: " + format);
}

inline StudyResult result_from_json(const nlohmann::json& j) {
    StudyResult r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_hash = j.at("config").get<std::string>();
    r.n_regular = j.at("n_regular").get<int>();
    r.n_anonymized = j.at("n_anonymized").get<int>();
    r.n_holders = j.at("n_holders").get<int>();
    r.mean_regular = j.at("mean_regular").get<double>();
    r.mean_anonymized = j.at("mean_anonymized").get<double>();
    auto table = [](const nlohmann::json& jm) {
        std::map<char, double> out;
        for (auto it = jm.begin(); it != jm.end(); ++it)
            out[it.key().at(0)] = it.value().get<double>();
        return out;
    };
    r.agreement_anonymized = table(j.at("agreement_anonymized"));
    r.agreement_regular = table(j.at("agreement_regular"));
    r.agreement_regular_all = table(j.at("agreement_regular_all"));
    r.h1 = hypothesis_from_json(j.at("hypotheses")[0]);
    r.h2a = hypothesis_from_json(j.at("hypotheses")[1]);
    r.h2b = hypothesis_from_json(j.at("hypotheses")[2]);
    r.h2c = hypothesis_from_json(j.at("hypotheses")[3]);
    r.matches_expectations = j.at("matches_expectations").get<bool>();
    for (const auto& jr : j.at("records")) {
        TrialRecord rec;
        rec.agent = jr.at("agent").get<int>();
        rec.arm = jr.at("arm").get<std::string>();
        rec.cohort = jr.at("cohort").get<std::string>();
        rec.identifier = jr.at("identifier").get<std::string>();
        rec.position = jr.at("position").get<int>();
        rec.decision = jr.at("decision").get<std::string>() == ">50K" ? IncomeLabel::Over50K
                                                                      : IncomeLabel::Under50K;
        rec.agree = jr.at("agree").get<bool>();
        r.records.push_back(std::move(rec));
    }
    return r;
}

}  // namespace showdag
