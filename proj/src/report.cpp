#include "morrey/report.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace morrey {

using ordered_json = nlohmann::ordered_json;

bool status_is_valid(const std::string& s) {
    return s == "PASS" || s == "FAIL" || s == "INCONCLUSIVE" || s == "INFO" || s == "SKIPPED";
}

// ---- configuration -----------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "experiment") {
            if (!val.is_string())
                throw std::invalid_argument("config field 'experiment' must be a string");
            c.experiment = val.get<std::string>();
        } else if (key == "seed") {
            if (val.is_null()) continue;  // serialized configs write null for "no seed"
            if (!val.is_number_integer() && !val.is_number_unsigned())
                throw std::invalid_argument("config field 'seed' must be an integer");
            if (val.is_number_integer() && val.get<long long>() < 0)
                throw std::invalid_argument("config field 'seed' must be nonnegative");
            c.seed = val.get<std::uint64_t>();
        } else if (key == "out") {
            if (!val.is_string()) throw std::invalid_argument("config field 'out' must be a string");
            c.out_path = val.get<std::string>();
        } else if (key == "params") {
            if (!val.is_object())
                throw std::invalid_argument("config field 'params' must be an object");
            for (const auto& [pk, pv] : val.items()) {
                if (!pv.is_number())
                    throw std::invalid_argument("param '" + pk + "' must be a number");
                c.params[pk] = pv.get<double>();
            }
        } else if (key == "options") {
            if (!val.is_object())
                throw std::invalid_argument("config field 'options' must be an object");
            for (const auto& [ok, ov] : val.items()) {
                if (!ov.is_string())
                    throw std::invalid_argument("option '" + ok + "' must be a string");
                c.options[ok] = ov.get<std::string>();
            }
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    if (c.experiment.empty()) throw std::invalid_argument("config needs an 'experiment' name");
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::string ExperimentConfig::option(const std::string& key, const std::string& fallback) const {
    auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

// ---- report ------------------------------------------------------------------

void Report::add(Assertion a) {
    if (!status_is_valid(a.status))
        throw std::logic_error("invalid assertion status: " + a.status);
    assertions.push_back(std::move(a));
}

void Report::constant(const std::string& name, double value) {
    constants.emplace_back(name, value);
}

bool Report::any_fail() const {
    for (const auto& a : assertions)
        if (a.status == "FAIL") return true;
    return false;
}

std::string Report::overall() const {
    if (any_fail()) return "FAIL";
    for (const auto& a : assertions)
        if (a.status == "INCONCLUSIVE") return "INCONCLUSIVE";
    return "PASS";
}

static ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["experiment"] = c.experiment;
    if (c.seed)
        j["seed"] = *c.seed;
    else
        j["seed"] = nullptr;
    j["params"] = ordered_json::object();
    for (const auto& [k, v] : c.params) j["params"][k] = v;
    j["options"] = ordered_json::object();
    for (const auto& [k, v] : c.options) j["options"][k] = v;
    j["out"] = c.out_path;
    return j;
}

std::string Report::to_json(bool with_timestamp) const {
    ordered_json j;
    j["tool"] = tool;
    j["version"] = version;
    j["experiment"] = experiment;
    if (with_timestamp) j["timestamp"] = timestamp;
    j["config"] = config_json(config);
    j["overall"] = overall();
    j["constants"] = ordered_json::object();
    for (const auto& [k, v] : constants) j["constants"][k] = v;
    j["assertions"] = ordered_json::array();
    for (const auto& a : assertions) {
        ordered_json item;
        item["id"] = a.id;
        item["status"] = a.status;
        item["measured"] = a.measured;
        item["detail"] = a.detail;
        j["assertions"].push_back(item);
    }
    return j.dump(2) + "\n";
}

static std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

static std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "kind,id,status,measured,detail\n";
    for (const auto& [k, v] : constants)
        os << "constant," << csv_escape(k) << ",INFO," << num17(v) << ",\n";
    for (const auto& a : assertions)
        os << "assertion," << csv_escape(a.id) << "," << a.status << "," << num17(a.measured)
           << "," << csv_escape(a.detail) << "\n";
    return os.str();
}

static void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void Report::save(const std::string& path) const { write_text(path, to_json()); }
void Report::save_csv(const std::string& path) const { write_text(path, to_csv()); }

// ---- dispatch ----------------------------------------------------------------

static std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Defined in experiments.cpp.
struct ExperimentEntry {
    ExperimentInfo info;
    Report (*fn)(const ExperimentConfig&);
};
const std::vector<ExperimentEntry>& experiment_entries();

const std::vector<ExperimentInfo>& list_experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& e : experiment_entries()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

std::string registry_table() {
    std::size_t name_w = 4, crit_w = 8, time_w = 7;
    for (const auto& e : list_experiments()) {
        name_w = std::max(name_w, e.name.size());
        crit_w = std::max(crit_w, e.criteria.size());
        time_w = std::max(time_w, e.runtime_hint.size());
    }
    std::ostringstream os;
    auto row = [&](const std::string& n, const std::string& c, const std::string& t,
                   const std::string& r, const std::string& s) {
        os << n << std::string(name_w - n.size() + 2, ' ') << c
           << std::string(crit_w - c.size() + 2, ' ') << t
           << std::string(time_w - t.size() + 2, ' ') << r << "  " << s << "\n";
    };
    row("name", "criteria", "runtime", "seed", "summary");
    for (const auto& e : list_experiments())
        row(e.name, e.criteria.empty() ? "-" : e.criteria, e.runtime_hint,
            e.randomized ? "yes " : "no  ", e.summary);
    return os.str();
}

Report run(const ExperimentConfig& config) {
    for (const auto& e : experiment_entries()) {
        if (e.info.name != config.experiment) continue;
        if (e.info.randomized && !config.seed)
            throw std::invalid_argument("experiment '" + config.experiment +
                                        "' draws random samples: a seed is required");
        Report rep = e.fn(config);
        rep.experiment = config.experiment;
        rep.config = config;
        rep.timestamp = utc_now();
        return rep;
    }
    throw std::invalid_argument("unknown experiment: " + config.experiment +
                                " (run 'list' for the registry)");
}

}  // namespace morrey
