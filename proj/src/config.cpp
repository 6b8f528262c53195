#include "ibshell/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "ibshell/errors.hpp"

namespace ibshell {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw InvalidParameter("not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& v) {
    int x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw InvalidParameter("not an integer: '" + v + "'");
    return x;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidParameter("not a boolean: '" + v + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    const char* key;
    std::function<void(ModelConfig&, const std::string&)> set;
    std::function<std::string(const ModelConfig&)> get;
};

#define IB_DOUBLE(name) \
    Entry{#name, [](ModelConfig& c, const std::string& v) { c.name = to_double(v); }, [](const ModelConfig& c) { return fmt(c.name); }}
#define IB_INT(name) \
    Entry{#name, [](ModelConfig& c, const std::string& v) { c.name = to_int(v); }, [](const ModelConfig& c) { return std::to_string(c.name); }}
#define IB_BOOL(name)                                                                      \
    Entry{#name, [](ModelConfig& c, const std::string& v) { c.name = to_bool(v); }, \
          [](const ModelConfig& c) { return std::string(c.name ? "true" : "false"); }}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        IB_INT(N),
        IB_DOUBLE(a),
        IB_DOUBLE(rho),
        IB_DOUBLE(mu_f),
        IB_DOUBLE(dt),
        IB_BOOL(advection),
        IB_DOUBLE(L),
        IB_DOUBLE(L_BM),
        IB_DOUBLE(w0),
        IB_DOUBLE(w1),
        IB_DOUBLE(alpha),
        IB_DOUBLE(R),
        IB_DOUBLE(H),
        IB_INT(n1),
        IB_INT(n2),
        Entry{"grid_origin", [](ModelConfig& c, const std::string& v) { c.grid_origin = parse_grid_origin(v); },
              [](const ModelConfig& c) { return to_string(c.grid_origin); }},
        IB_BOOL(center_shell),
        IB_DOUBLE(lambda),
        IB_DOUBLE(mu),
        Entry{"thickness_law", [](ModelConfig& c, const std::string& v) { c.thickness_law = parse_thickness_law(v); },
              [](const ModelConfig& c) { return to_string(c.thickness_law); }},
        Entry{"coefficient_order",
              [](ModelConfig& c, const std::string& v) { c.coefficient_order = parse_closure_order(v); },
              [](const ModelConfig& c) { return to_string(c.coefficient_order); }},
        IB_DOUBLE(k_clamp),
        IB_BOOL(impulse),
        IB_DOUBLE(impulse_z),
        IB_DOUBLE(impulse_density),
        IB_DOUBLE(impulse_duration),
        IB_DOUBLE(T0),
        IB_INT(snapshot_every),
    };
    return table;
}

#undef IB_DOUBLE
#undef IB_INT
#undef IB_BOOL

}  // namespace

ModelConfig parse_config(const std::string& text, ModelConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Entry* e = nullptr;
        for (const Entry& cand : entries())
            if (key == cand.key) e = &cand;
        if (!e) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            e->set(base, value);
        } catch (const InvalidParameter& err) {
            throw ConfigError("config line " + std::to_string(lineno) + " (" + key + "): " + err.what());
        }
    }
    return base;
}

ModelConfig load_config(const std::string& path, ModelConfig base) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    try {
        return parse_config(ss.str(), base);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string format_config(const ModelConfig& cfg) {
    std::string out;
    for (const Entry& e : entries()) out += std::string(e.key) + " = " + e.get(cfg) + "\n";
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> k;
    for (const Entry& e : entries()) k.emplace_back(e.key);
    return k;
}

}  // namespace ibshell
