// Command-line front end: diagram export, separation queries, claim and
// soundness verification, world simulation, and the income-prediction study.
//
// Exit codes: 0 success, 1 assertion or verdict failure, 2 unknown resource,
// 3 invalid input.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "showdag/showdag.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInvalid = 3;

struct CliError {
    int code;
    std::string message;
};

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

showdag::Diagram load_diagram(const std::string& key_or_file) {
    namespace fs = std::filesystem;
    if (fs::exists(key_or_file) && fs::is_regular_file(key_or_file)) {
        std::ifstream in(key_or_file);
        nlohmann::json j;
        try {
            in >> j;
            return showdag::diagram_from_json(j);
        } catch (const std::exception& e) {
            throw CliError{kExitInvalid, std::string("invalid diagram file: ") + e.what()};
        }
    }
    auto d = showdag::catalog_lookup(key_or_file);
    if (!d) throw CliError{kExitUnknown, "unknown diagram key: " + key_or_file};
    return *d;
}

// Relative output paths resolve against SHOWDAG_OUTPUT_DIR when it is set.
void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (!path || path->empty() || *path == "-") {
        std::cout << content;
        return;
    }
    std::filesystem::path target = *path;
    if (target.is_relative()) {
        if (const char* dir = std::getenv("SHOWDAG_OUTPUT_DIR"); dir && *dir)
            target = std::filesystem::path(dir) / target;
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) throw CliError{kExitInvalid, "cannot open output file: " + target.string()};
    out << content;
}

std::string verdict_json(const showdag::Verdict& v) {
    nlohmann::ordered_json j;
    j["verdict"] = showdag::to_string(v.kind);
    if (!v.fixed_tags.empty()) j["fixed_tags"] = v.fixed_tags;
    if (v.kind == showdag::Verdict::Kind::Ambiguous) {
        j["realizations"] = nlohmann::ordered_json::object();
        for (const auto& [label, kind] : v.realizations)
            j["realizations"][label] = showdag::to_string(kind);
    }
    return j.dump(2) + "\n";
}

std::string claims_report() {
    std::ostringstream os;
    os << "claim suite\n";
    std::size_t passed = 0;
    auto results = showdag::run_claims();
    for (const auto& r : results) {
        os << (r.pass ? "PASS " : "FAIL ") << r.claim.id << " [" << r.claim.diagram_key << "] ";
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& x : v) {
                if (!s.empty()) s += ",";
                s += x;
            }
            return s;
        };
        os << join(r.claim.query.a) << " _||_ " << join(r.claim.query.b);
        if (!r.claim.query.given.empty()) os << " | " << join(r.claim.query.given);
        os << " -> " << showdag::to_string(r.got.kind) << " (expected "
           << showdag::to_string(r.claim.expected) << ")\n";
        os << "      " << r.claim.statement << "\n";
        if (r.pass) ++passed;
    }
    os << "claims: " << passed << "/" << results.size() << " passed\n";
    return os.str();
}

bool claims_pass() {
    for (const auto& r : showdag::run_claims())
        if (!r.pass) return false;
    return true;
}

std::string soundness_report_text(const showdag::SoundnessReport& report) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line,
                  "soundness (n=%zu, alpha=%.4f, adjusted=%.6f, permutations=%zu, seed=%llu)\n",
                  report.n, report.alpha, report.alpha_adjusted, report.permutations,
                  static_cast<unsigned long long>(report.seed));
    os << line;
    for (const auto& e : report.entries) {
        if (!e.checked) {
            os << "  --   " << e.claim_id << " [" << e.diagram_key;
            if (!e.realization.empty()) os << " @ " << e.realization;
            os << "] connected; not asserted (faithfulness not assumed)\n";
            continue;
        }
        std::snprintf(line, sizeof line, "  %s %s [%s%s%s] separated; cmi=%.6f bits p=%.6f\n",
                      e.violation ? "FAIL" : "PASS", e.claim_id.c_str(), e.diagram_key.c_str(),
                      e.realization.empty() ? "" : " @ ", e.realization.c_str(), e.ci.cmi_bits,
                      e.ci.p_value);
        os << line;
    }
    os << "soundness: " << report.checks << " checks, " << report.violations << " violations\n";
    return os.str();
}

int cmd_diagram(const std::string& key_or_file, const std::optional<std::string>& dot_path,
                const std::optional<std::string>& json_path,
                const std::optional<std::string>& output, const std::string& format) {
    showdag::Diagram d = load_diagram(key_or_file);
    if (dot_path) write_output(dot_path, showdag::diagram_to_dot(d, key_or_file));
    if (json_path) write_output(json_path, showdag::diagram_to_json(d).dump(2) + "\n");
    if (!dot_path && !json_path) {
        if (format == "json")
            write_output(output, showdag::diagram_to_json(d).dump(2) + "\n");
        else
            write_output(output, showdag::diagram_to_dot(d, key_or_file));
    }
    return kExitOk;
}

int cmd_dsep(const std::string& diagram, const std::string& a, const std::string& b,
             const std::string& given, const std::string& format,
             const std::optional<std::string>& output) {
    showdag::Diagram d = load_diagram(diagram);
    showdag::SeparationQuery q{split_list(a), split_list(b), split_list(given)};
    showdag::Verdict v;
    try {
        v = showdag::d_separated(d, q);
    } catch (const showdag::UnknownNode& e) {
        throw CliError{kExitUnknown, e.what()};
    } catch (const showdag::Error& e) {
        throw CliError{kExitInvalid, e.what()};
    }
    if (format == "json") {
        write_output(output, verdict_json(v));
    } else {
        std::ostringstream os;
        os << showdag::to_string(v.kind) << "\n";
        for (const auto& [label, kind] : v.realizations)
            os << "  " << label << ": " << showdag::to_string(kind) << "\n";
        write_output(output, os.str());
    }
    return kExitOk;
}

nlohmann::ordered_json claims_json() {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : showdag::run_claims()) {
        arr.push_back(nlohmann::ordered_json{
            {"id", r.claim.id},
            {"diagram", r.claim.diagram_key},
            {"a", r.claim.query.a},
            {"b", r.claim.query.b},
            {"given", r.claim.query.given},
            {"expected", showdag::to_string(r.claim.expected)},
            {"got", showdag::to_string(r.got.kind)},
            {"statement", r.claim.statement},
            {"pass", r.pass},
        });
    }
    return arr;
}

nlohmann::ordered_json soundness_json(const showdag::SoundnessReport& report) {
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["alpha"] = report.alpha;
    j["alpha_adjusted"] = report.alpha_adjusted;
    j["permutations"] = report.permutations;
    j["seed"] = report.seed;
    j["checks"] = report.checks;
    j["violations"] = report.violations;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json je{
            {"claim", e.claim_id},
            {"diagram", e.diagram_key},
            {"realization", e.realization},
            {"verdict", showdag::to_string(e.verdict)},
            {"checked", e.checked},
        };
        if (e.checked) {
            je["cmi_bits"] = e.ci.cmi_bits;
            je["p"] = e.ci.p_value;
            je["violation"] = e.violation;
        }
        j["entries"].push_back(je);
    }
    return j;
}

int cmd_verify(const std::string& suite, std::size_t n, std::uint64_t seed,
               std::size_t permutations, const std::string& format,
               const std::optional<std::string>& output) {
    bool ok = true;
    bool want_claims = suite == "claims" || suite == "all";
    bool want_soundness = suite == "soundness" || suite == "all";
    if (!want_claims && !want_soundness)
        throw CliError{kExitInvalid, "unknown suite: " + suite};
    std::optional<showdag::SoundnessReport> soundness;
    if (want_claims) ok = ok && claims_pass();
    if (want_soundness) {
        soundness = showdag::catalog_soundness(n, seed, 0.01, permutations);
        ok = ok && soundness->pass();
    }
    if (format == "json") {
        nlohmann::ordered_json j;
        if (want_claims) j["claims"] = claims_json();
        if (soundness) j["soundness"] = soundness_json(*soundness);
        j["overall"] = ok ? "PASS" : "FAIL";
        write_output(output, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        if (want_claims) os << claims_report();
        if (want_claims && soundness) os << "\n";
        if (soundness) os << soundness_report_text(*soundness);
        os << "overall: " << (ok ? "PASS" : "FAIL") << "\n";
        write_output(output, os.str());
    }
    return ok ? kExitOk : kExitFailure;
}

int cmd_simulate(const std::string& diagram, const std::optional<std::string>& world_path,
                 std::size_t n, std::uint64_t seed, int realization,
                 const std::optional<std::string>& output, bool dump_world) {
    if (dump_world) {
        write_output(output, showdag::world_to_json(showdag::WorldSpec{}).dump(2) + "\n");
        return kExitOk;
    }
    showdag::Diagram d = load_diagram(diagram);
    showdag::WorldSpec w;
    if (world_path) {
        std::ifstream in(*world_path);
        if (!in) throw CliError{kExitUnknown, "cannot open world file: " + *world_path};
        nlohmann::json j;
        try {
            in >> j;
            w = showdag::world_from_json(j);
        } catch (const std::exception& e) {
            throw CliError{kExitInvalid, std::string("invalid world file: ") + e.what()};
        }
    }
    if (!d.realized()) {
        auto all = d.realizations();
        if (realization < 0 || static_cast<std::size_t>(realization) >= all.size())
            throw CliError{kExitInvalid, "realization index out of range (have " +
                                             std::to_string(all.size()) + ")"};
        d = all[static_cast<std::size_t>(realization)];
    }
    try {
        showdag::Scm scm = showdag::Scm::instantiate(d, w);
        showdag::SampleTable t = scm.sample(n, seed);
        write_output(output, t.to_csv());
    } catch (const showdag::Error& e) {
        throw CliError{kExitInvalid, e.what()};
    }
    return kExitOk;
}

int cmd_study(const std::optional<std::string>& config_path, std::uint64_t seed,
              const std::optional<std::string>& report_path,
              const std::optional<std::string>& records_path, const std::string& format,
              bool dump_config) {
    if (dump_config) {
        write_output(report_path, showdag::study_config_to_json(showdag::default_study_config())
                                          .dump(2) +
                                      "\n");
        return kExitOk;
    }
    showdag::StudyConfig cfg;
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw CliError{kExitUnknown, "cannot open config file: " + *config_path};
        nlohmann::json j;
        try {
            in >> j;
            cfg = showdag::study_config_from_json(j);
        } catch (const std::exception& e) {
            throw CliError{kExitInvalid, std::string("invalid study config: ") + e.what()};
        }
    } else {
        cfg = showdag::default_study_config();
    }
    showdag::StudyResult result = showdag::run_study(cfg, seed);
    write_output(report_path, showdag::render_report(result, format));
    if (records_path) write_output(records_path, showdag::records_csv(result));
    return result.matches_expectations ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal-diagram engine for human-AI decision studies"};
    app.require_subcommand(1);

    std::string format = "text";
    std::optional<std::string> output;
    app.add_option("--format", format, "output format: text|json|csv")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--output", output, "output file (default stdout)");

    // diagram
    auto* diagram_cmd = app.add_subcommand("diagram", "export a catalog or file diagram");
    std::string diagram_key;
    std::optional<std::string> dot_path, json_path;
    diagram_cmd->add_option("key", diagram_key, "catalog key or diagram JSON file")->required();
    diagram_cmd->add_option("--dot", dot_path, "write Graphviz DOT to this file");
    diagram_cmd->add_option("--json", json_path, "write diagram JSON to this file");

    // dsep
    auto* dsep_cmd = app.add_subcommand("dsep", "decide a separation query");
    std::string dsep_diagram, set_a, set_b, set_given;
    dsep_cmd->add_option("--diagram", dsep_diagram, "catalog key or diagram JSON file")->required();
    dsep_cmd->add_option("--a", set_a, "first node set, comma separated")->required();
    dsep_cmd->add_option("--b", set_b, "second node set, comma separated")->required();
    dsep_cmd->add_option("--given", set_given, "conditioning set; function tags allowed");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the claim and soundness suites");
    std::string suite = "all";
    std::size_t verify_n = 50000;
    std::size_t permutations = 2000;
    std::uint64_t verify_seed = 7;
    verify_cmd->add_option("--suite", suite, "claims|soundness|all")->capture_default_str();
    verify_cmd->add_option("--n", verify_n, "Monte Carlo sample count")->capture_default_str();
    verify_cmd->add_option("--permutations", permutations, "permutation count")
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed, "master seed")->capture_default_str();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "sample a world into CSV");
    std::string sim_diagram = "fig2";
    std::optional<std::string> world_path;
    std::size_t sim_n = 1000;
    std::uint64_t sim_seed = 0;
    int realization = 0;
    sim_cmd->add_option("--diagram", sim_diagram, "catalog key or diagram JSON file")
        ->capture_default_str();
    sim_cmd->add_option("--world", world_path, "world spec JSON file");
    sim_cmd->add_option("--n", sim_n, "sample count")->capture_default_str();
    auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "master seed");
    sim_cmd->add_option("--realization", realization,
                        "which realization to bind when the diagram has ambiguous links")
        ->capture_default_str();
    bool dump_world = false;
    sim_cmd->add_flag("--dump-world", dump_world, "print the default world spec and exit");

    // study
    auto* study_cmd = app.add_subcommand("study", "replicate the income-prediction study");
    std::optional<std::string> config_path, report_path, records_path;
    std::uint64_t study_seed = 0;
    study_cmd->add_option("--config", config_path, "study config JSON (defaults built in)");
    auto* study_seed_opt = study_cmd->add_option("--seed", study_seed, "master seed");
    study_cmd->add_option("--report", report_path, "report output file (default stdout)");
    study_cmd->add_option("--records", records_path, "trial record CSV output file");
    bool dump_config = false;
    study_cmd->add_flag("--dump-config", dump_config, "print the default study config and exit");

    for (CLI::App* sub : {diagram_cmd, dsep_cmd, verify_cmd, sim_cmd, study_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (diagram_cmd->parsed())
            return cmd_diagram(diagram_key, dot_path, json_path, output, format);
        if (dsep_cmd->parsed())
            return cmd_dsep(dsep_diagram, set_a, set_b, set_given, format, output);
        if (verify_cmd->parsed())
            return cmd_verify(suite, verify_n, verify_seed, permutations, format, output);
        if (sim_cmd->parsed()) {
            if (!dump_world && sim_seed_opt->count() == 0)
                throw CliError{kExitInvalid, "simulate requires --seed"};
            return cmd_simulate(sim_diagram, world_path, sim_n, sim_seed, realization, output,
                                dump_world);
        }
        if (study_cmd->parsed()) {
            if (!dump_config && study_seed_opt->count() == 0)
                throw CliError{kExitInvalid, "study requires --seed"};
            return cmd_study(config_path, study_seed, report_path, records_path, format,
                             dump_config);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const showdag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
