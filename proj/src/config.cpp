// SPDX-License-Identifier: Apache-2.0
#include "fhedse/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fhedse/errors.hpp"

namespace fhedse {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw InvariantViolation("config line " + std::to_string(lineno) +
                                     " is not key=value: " + t);
        }
        cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

ConfigMap ConfigMap::load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw InvariantViolation("empty config key");
    entries_[key] = value;
}

void ConfigMap::set_line(const std::string& line) {
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
        throw InvariantViolation("override is not key=value: " + line);
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

bool ConfigMap::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string ConfigMap::get_str(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string ConfigMap::require_str(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw InvariantViolation("missing required config key: " + key);
    return it->second;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw InvariantViolation("config key " + key + " is not an unsigned integer: " +
                                 it->second);
    }
}

std::int64_t ConfigMap::get_i64(const std::string& key, std::int64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw InvariantViolation("config key " + key + " is not an integer: " + it->second);
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw InvariantViolation("config key " + key + " is not a number: " + it->second);
    }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvariantViolation("config key " + key + " is not a boolean: " + v);
}

std::vector<std::string> ConfigMap::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    }
    return out;
}

std::vector<std::uint64_t> parse_range(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::size_t dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            std::uint64_t lo = std::stoull(text.substr(0, dots));
            std::uint64_t hi = std::stoull(text.substr(dots + 2));
            for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
            return out;
        }
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (!item.empty()) out.push_back(std::stoull(item));
        }
    } catch (const std::exception&) {
        throw InvariantViolation("bad range syntax: " + text);
    }
    return out;
}

}  // namespace fhedse
