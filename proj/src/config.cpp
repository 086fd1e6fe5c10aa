#include "eidlab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "eidlab/csv.hpp"
#include "eidlab/error.hpp"

namespace eidlab {

namespace {

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys{
        "experiment",
        "axioms.trials", "axioms.p", "axioms.graphs", "axioms.vertices", "axioms.extra_edges",
        "scalar.points", "scalar.cantor_level",
        "planar.base", "planar.levels",
        "approx.count", "approx.rungs",
        "cones.curves", "cones.directions", "cones.steps",
        "currents.graphs", "currents.vertices",
        "preiss.count",
        "gasket.level", "gasket.alpha", "gasket.d_h", "gasket.singletons", "gasket.threshold",
    };
    return keys;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ValidationError("config key " + key + ": not a number: " + value);
    return v;
}

void validate_ranges(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "experiment") continue;
        const double v = parse_number(key, value);
        const std::string leaf = key.substr(key.find('.') + 1);
        if (leaf == "p" && !(v > 1.0))
            throw ValidationError("config key " + key + ": p must exceed 1, got " + value);
        if (key == "gasket.level") {
            if (v != std::floor(v) || v < 1)
                throw ValidationError("config key " + key + ": level must be a positive integer");
            if (v > 9)
                throw ValidationError("config key " + key +
                                      ": level exceeds the resource cap of 9");
        }
        if (key == "gasket.alpha" && !(v > 0.0 && v <= 1.0))
            throw ValidationError("config key " + key + ": alpha must lie in (0, 1]");
        if (key == "gasket.d_h" && !(v > 0.0))
            throw ValidationError("config key " + key + ": d_h must be positive");
        if (key == "gasket.threshold" && !(v > 0.0 && v < 1.0))
            throw ValidationError("config key " + key + ": threshold must lie in (0, 1)");
        if ((leaf == "trials" || leaf == "graphs" || leaf == "vertices" || leaf == "points" ||
             leaf == "count" || leaf == "curves" || leaf == "directions" || leaf == "steps" ||
             leaf == "rungs" || leaf == "levels" || leaf == "base" || leaf == "singletons" ||
             leaf == "cantor_level" || leaf == "extra_edges") &&
            !(v >= 1.0 && v == std::floor(v)))
            throw ValidationError("config key " + key + ": expected a positive integer, got " +
                                  value);
    }
}

}  // namespace

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return parse_number(key, it->second);
}

long ExperimentConfig::get_long(const std::string& key, long fallback) const {
    return static_cast<long>(get_double(key, static_cast<double>(fallback)));
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("config: unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ParseError("config: empty section name", lineno);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: expected key = value", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("config: empty key", lineno);
        if (value.empty()) throw ParseError("config: empty value for key " + key, lineno);
        const std::string full = section.empty() ? key : section + "." + key;
        if (!allowed_keys().count(full))
            throw ValidationError("config: unknown key " + full);
        if (cfg.kv_.count(full))
            throw ParseError("config: duplicate key " + full, lineno);
        cfg.kv_[full] = value;
    }
    validate_ranges(cfg.kv_);
    auto it = cfg.kv_.find("experiment");
    if (it != cfg.kv_.end()) cfg.experiment_ = it->second;
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    try {
        return parse_config_text(read_text_file(path));
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        // An unreadable config file is a usage problem, not a runtime failure.
        throw ValidationError(e.what());
    }
}

}  // namespace eidlab
