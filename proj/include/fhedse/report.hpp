// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace fhedse {

using ReportValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// Numeric rendering shared by the CSV and JSON writers, so both formats
/// carry byte-identical numeric content.
std::string format_report_value(const ReportValue& v);

struct ReportRow {
    std::vector<std::pair<std::string, ReportValue>> fields;

    void add(const std::string& key, ReportValue value) {
        fields.emplace_back(key, std::move(value));
    }
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);  // "csv" | "json"

/// CSV: `# key=value` meta comment lines, a mandatory header row, one data
/// row per ReportRow. Columns are the union of row fields in first-seen
/// order; absent fields render empty.
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows,
               const std::vector<std::pair<std::string, std::string>>& meta);

/// JSON-lines: one `{"meta": {...}}` header object, then one object per row.
void write_jsonl(std::ostream& out, const std::vector<ReportRow>& rows,
                 const std::vector<std::pair<std::string, std::string>>& meta);

void write_report(std::ostream& out, ReportFormat format, const std::vector<ReportRow>& rows,
                  const std::vector<std::pair<std::string, std::string>>& meta);

}  // namespace fhedse
