// config.cpp — key-value config parsing and resolution

#include "dynss/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dynss/errors.hpp"

namespace dynss {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, const std::string& range) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        throw ConfigError(key + ": cannot parse '" + v + "' as a number (accepted: " + range + ")");
    return out;
}

int to_int(const std::string& key, const std::string& v, const std::string& range) {
    int out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end)
        throw ConfigError(key + ": cannot parse '" + v + "' as an integer (accepted: " + range + ")");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

void require(bool ok, const std::string& key, const std::string& range, double got) {
    if (!ok) {
        std::ostringstream msg;
        msg << key << ": value " << got << " out of range (accepted: " << range << ")";
        throw ConfigError(msg.str());
    }
}

void apply(SweepConfig& c, const std::string& key, const std::string& v) {
    if (key == "delta") {
        c.dqd.tunneling = to_double(key, v, "> 0");
        require(c.dqd.tunneling > 0.0, key, "> 0", c.dqd.tunneling);
    } else if (key == "delta-angle") {
        c.dqd.drive_angle = to_double(key, v, "any finite angle in radians");
    } else if (key == "drive") {
        c.dqd.drive_amplitude = to_double(key, v, ">= 0");
        require(c.dqd.drive_amplitude >= 0.0, key, ">= 0", c.dqd.drive_amplitude);
    } else if (key == "coupling") {
        c.bath.coupling = to_double(key, v, ">= 0");
        require(c.bath.coupling >= 0.0, key, ">= 0", c.bath.coupling);
    } else if (key == "d-star") {
        c.bath.separation = to_double(key, v, "> 0");
        require(c.bath.separation > 0.0, key, "> 0", c.bath.separation);
    } else if (key == "omega-c") {
        c.bath.cutoff = to_double(key, v, "> 0");
        require(c.bath.cutoff > 0.0, key, "> 0", c.bath.cutoff);
    } else if (key == "quad-tol") {
        c.bath.quadrature_tolerance = to_double(key, v, "> 0");
        require(c.bath.quadrature_tolerance > 0.0, key, "> 0", c.bath.quadrature_tolerance);
    } else if (key == "bias-min") {
        c.bias_min = to_double(key, v, "finite, < bias-max");
    } else if (key == "bias-max") {
        c.bias_max = to_double(key, v, "finite, > bias-min");
    } else if (key == "steps") {
        c.steps = to_int(key, v, ">= 2");
        require(c.steps >= 2, key, ">= 2", c.steps);
    } else if (key == "mode") {
        c.mode = parse_mode(v);
    } else if (key == "tol") {
        c.tol = to_double(key, v, "> 0");
        require(c.tol > 0.0, key, "> 0", c.tol);
    } else if (key == "threads") {
        c.threads = to_int(key, v, ">= 1");
        require(c.threads >= 1, key, ">= 1", c.threads);
    } else if (key == "output") {
        c.output = v;
    } else if (key == "explicit-dressing") {
        c.explicit_dressing = to_bool(key, v);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

} // namespace

const std::map<std::string, std::string>& config_keys() {
    static const std::map<std::string, std::string> keys = {
        {"delta", "tunneling Delta* (default 0.3)"},
        {"delta-angle", "drive angle delta in radians (default pi/2)"},
        {"drive", "drive amplitude Omega0* (default 0.2)"},
        {"coupling", "phonon coupling P (default 0.2)"},
        {"d-star", "dot separation d* (default 20)"},
        {"omega-c", "cutoff omega_c* (default 2)"},
        {"quad-tol", "absolute tolerance for F (default 1e-9)"},
        {"bias-min", "first bias point (default 0.7)"},
        {"bias-max", "last bias point (default 1.2)"},
        {"steps", "number of bias points (default 400)"},
        {"mode", "full | bare-dynamical | markov | no-drive | all (default full)"},
        {"tol", "renormalization residual tolerance (default 1e-10)"},
        {"threads", "worker threads (default 1)"},
        {"output", "CSV path (default stdout)"},
        {"explicit-dressing", "keep h - f mismatch in bare-dynamical mode (default false)"},
    };
    return keys;
}

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!config_keys().count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_key_values(in, path);
}

SweepConfig resolve_config(const KeyValues& file, const KeyValues& flags) {
    SweepConfig c;
    for (const auto& [k, v] : file) apply(c, k, v);
    for (const auto& [k, v] : flags) apply(c, k, v);
    c.validate();
    return c;
}

} // namespace dynss
