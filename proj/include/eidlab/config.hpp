#pragma once

#include <map>
#include <string>

namespace eidlab {

// Flat key = value configuration with [section] headers; keys are stored as
// "section.key" ("" section for the preamble). parse_config validates every
// key against the experiment schema, so typos fail loudly with the full key
// path, and range rules (p > 1, gasket level cap) are enforced at parse time.
class ExperimentConfig {
public:
    const std::string& experiment() const { return experiment_; }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    const std::map<std::string, std::string>& raw() const { return kv_; }

private:
    friend ExperimentConfig parse_config(const std::string& path);
    friend ExperimentConfig parse_config_text(const std::string& text);
    std::string experiment_;
    std::map<std::string, std::string> kv_;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace eidlab
