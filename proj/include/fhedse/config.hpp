// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fhedse {

/// Flat key-value configuration with dotted paths, e.g.
///
///     # comment
///     group.r=256
///     latency.t_butterfly=22
///     job.0.name=lola
///
/// Values are plain strings; accessors convert on demand. Command-line
/// overrides reuse the same `key=value` syntax.
class ConfigMap {
public:
    ConfigMap() = default;

    static ConfigMap parse(const std::string& text);
    static ConfigMap load_file(const std::string& path);  // IoError if unreadable

    void set(const std::string& key, const std::string& value);
    /// Applies one "key=value" override line.
    void set_line(const std::string& line);

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    std::string require_str(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::int64_t get_i64(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Keys beginning with `prefix`, in insertion-independent sorted order.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

/// Sweep range syntax: "1..16" (inclusive), "1,2,4,8", or a single value.
std::vector<std::uint64_t> parse_range(const std::string& text);

}  // namespace fhedse
