// SPDX-License-Identifier: Apache-2.0
#include "fhedse/report.hpp"

#include <algorithm>
#include <cstdio>

#include "fhedse/errors.hpp"

namespace fhedse {

std::string format_report_value(const ReportValue& v) {
    if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
    if (std::holds_alternative<std::uint64_t>(v)) {
        return std::to_string(std::get<std::uint64_t>(v));
    }
    if (std::holds_alternative<double>(v)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v));
        return buf;
    }
    return std::get<std::string>(v);
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw InvariantViolation("unknown report format: " + name);
}

namespace {

bool is_string(const ReportValue& v) { return std::holds_alternative<std::string>(v); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::vector<std::string> union_columns(const std::vector<ReportRow>& rows) {
    std::vector<std::string> cols;
    for (const ReportRow& row : rows) {
        for (const auto& [k, v] : row.fields) {
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        }
    }
    return cols;
}

const ReportValue* find_field(const ReportRow& row, const std::string& key) {
    for (const auto& [k, v] : row.fields) {
        if (k == key) return &v;
    }
    return nullptr;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows,
               const std::vector<std::pair<std::string, std::string>>& meta) {
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
    const auto cols = union_columns(rows);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << csv_escape(cols[i]);
    }
    out << "\n";
    for (const ReportRow& row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ",";
            if (const ReportValue* v = find_field(row, cols[i])) {
                out << csv_escape(format_report_value(*v));
            }
        }
        out << "\n";
    }
}

void write_jsonl(std::ostream& out, const std::vector<ReportRow>& rows,
                 const std::vector<std::pair<std::string, std::string>>& meta) {
    out << "{\"meta\":{";
    for (std::size_t i = 0; i < meta.size(); ++i) {
        out << (i ? "," : "") << json_quote(meta[i].first) << ":" << json_quote(meta[i].second);
    }
    out << "}}\n";
    for (const ReportRow& row : rows) {
        out << "{";
        for (std::size_t i = 0; i < row.fields.size(); ++i) {
            const auto& [k, v] = row.fields[i];
            out << (i ? "," : "") << json_quote(k) << ":";
            if (is_string(v)) {
                out << json_quote(std::get<std::string>(v));
            } else {
                out << format_report_value(v);
            }
        }
        out << "}\n";
    }
}

void write_report(std::ostream& out, ReportFormat format, const std::vector<ReportRow>& rows,
                  const std::vector<std::pair<std::string, std::string>>& meta) {
    if (format == ReportFormat::csv) {
        write_csv(out, rows, meta);
    } else {
        write_jsonl(out, rows, meta);
    }
}

}  // namespace fhedse
