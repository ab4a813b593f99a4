#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace morrey {

inline constexpr const char* kToolName = "morreylab";
inline constexpr const char* kToolVersion = "1.0.0";

// PASS / FAIL / INCONCLUSIVE / INFO / SKIPPED — the status vocabulary shared
// with the per-module reports.
bool status_is_valid(const std::string& s);

struct Assertion {
    std::string id;  // self-describing: names the measured quantity and its gate
    std::string status;
    double measured = 0.0;
    std::string detail;
};

// Parsed experiment configuration. JSON layout:
//   { "experiment": "...", "seed": 42, "out": "path.json",
//     "params": {"m": 4096, ...}, "options": {"weight": "power", ...} }
// Unknown top-level keys are rejected; params are numbers, options strings.
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, double> params;
    std::map<std::string, std::string> options;
    std::optional<std::uint64_t> seed;
    std::string out_path;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);

    double param(const std::string& key, double fallback) const;
    std::string option(const std::string& key, const std::string& fallback) const;
};

struct Report {
    std::string experiment;
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string timestamp;  // the only non-deterministic field; one isolated line in the JSON
    ExperimentConfig config;
    std::vector<std::pair<std::string, double>> constants;  // measured values, insertion order
    std::vector<Assertion> assertions;

    void add(Assertion a);  // rejects unknown statuses
    void constant(const std::string& name, double value);
    bool any_fail() const;
    std::string overall() const;  // FAIL > INCONCLUSIVE > PASS

    // Deterministic given the config when with_timestamp is false; with the
    // timestamp the output differs in exactly one line.
    std::string to_json(bool with_timestamp = true) const;
    std::string to_csv() const;
    void save(const std::string& path) const;  // JSON
    void save_csv(const std::string& path) const;
};

struct ExperimentInfo {
    std::string name;      // equals the CLI subcommand
    std::string summary;
    std::string criteria;  // acceptance-criteria ids exercised ("" = supporting tool)
    std::string runtime_hint;
    bool randomized = false;  // randomized experiments refuse to run without a seed
};

// Stable-ordered registry backing the CLI; one entry per runnable subcommand.
const std::vector<ExperimentInfo>& list_experiments();
std::string registry_table();  // fixed-width text rendering of the registry

// Dispatch by config.experiment. Throws std::invalid_argument for an unknown
// name or a missing seed on a randomized experiment.
Report run(const ExperimentConfig& config);

}  // namespace morrey
