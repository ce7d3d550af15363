#include "ropelab/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ropelab::io {

namespace {

constexpr const char* kFreqsHeader =
    "dim,theta_base,theta_scaled,wavelength_base,wavelength_scaled,rotations_at_L,gamma,mscale";
constexpr const char* kCompareHeader = "dim,thetaA,thetaB,ratio,abs_log_ratio";
constexpr const char* kEntropyHeader = "length,mean_entropy,uniform_bound,mscale";

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::runtime_error("malformed number: '" + text + "'");
    }
    return value;
}

}  // namespace

std::string format_float(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::vector<FreqRow> freq_rows(const FrequencyTable& table) {
    std::vector<FreqRow> rows;
    rows.reserve(table.entries.size());
    for (const FrequencyEntry& entry : table.entries) {
        FreqRow row;
        row.dim = entry.dim_index;
        row.theta_base = entry.theta_base;
        row.theta_scaled = entry.theta_scaled;
        row.wavelength_base = entry.wavelength;
        row.wavelength_scaled = 2.0 * std::numbers::pi / entry.theta_scaled;
        row.rotations_at_trained =
            static_cast<double>(table.params.trained_context) / entry.wavelength;
        row.gamma = entry.ramp_gamma;
        row.mscale = table.mscale;
        rows.push_back(row);
    }
    return rows;
}

std::string freqs_csv(const FrequencyTable& table) {
    std::string out = kFreqsHeader;
    out += '\n';
    for (const FreqRow& row : freq_rows(table)) {
        out += std::to_string(row.dim);
        out += ',';
        out += format_float(row.theta_base);
        out += ',';
        out += format_float(row.theta_scaled);
        out += ',';
        out += format_float(row.wavelength_base);
        out += ',';
        out += format_float(row.wavelength_scaled);
        out += ',';
        out += format_float(row.rotations_at_trained);
        out += ',';
        out += format_float(row.gamma);
        out += ',';
        out += format_float(row.mscale);
        out += '\n';
    }
    return out;
}

std::vector<FreqRow> parse_freqs_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line) || line != kFreqsHeader) {
        throw std::runtime_error("missing or unexpected frequency table header");
    }
    std::vector<FreqRow> rows;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != 8) {
            throw std::runtime_error("expected 8 fields, got " +
                                     std::to_string(fields.size()));
        }
        FreqRow row;
        row.dim = static_cast<int>(parse_double(fields[0]));
        row.theta_base = parse_double(fields[1]);
        row.theta_scaled = parse_double(fields[2]);
        row.wavelength_base = parse_double(fields[3]);
        row.wavelength_scaled = parse_double(fields[4]);
        row.rotations_at_trained = parse_double(fields[5]);
        row.gamma = parse_double(fields[6]);
        row.mscale = parse_double(fields[7]);
        rows.push_back(row);
    }
    return rows;
}

std::string freqs_json(const FrequencyTable& table) {
    nlohmann::ordered_json doc;
    doc["scheme"] = table.scheme_tag;
    doc["params"] = {{"base", table.params.base},
                     {"head_dim", table.params.head_dim},
                     {"trained_context", table.params.trained_context}};
    doc["mscale"] = table.mscale;
    doc["entries"] = nlohmann::ordered_json::array();
    for (const FreqRow& row : freq_rows(table)) {
        doc["entries"].push_back({{"dim", row.dim},
                                  {"theta_base", row.theta_base},
                                  {"theta_scaled", row.theta_scaled},
                                  {"wavelength_base", row.wavelength_base},
                                  {"wavelength_scaled", row.wavelength_scaled},
                                  {"rotations_at_L", row.rotations_at_trained},
                                  {"gamma", row.gamma}});
    }
    return doc.dump(2) + "\n";
}

FrequencyTable parse_freqs_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    FrequencyTable table;
    table.scheme_tag = doc.at("scheme").get<std::string>();
    table.params.base = doc.at("params").at("base").get<double>();
    table.params.head_dim = doc.at("params").at("head_dim").get<int>();
    table.params.trained_context = doc.at("params").at("trained_context").get<std::int64_t>();
    table.mscale = doc.at("mscale").get<double>();
    for (const auto& item : doc.at("entries")) {
        FrequencyEntry entry;
        entry.dim_index = item.at("dim").get<int>();
        entry.theta_base = item.at("theta_base").get<double>();
        entry.theta_scaled = item.at("theta_scaled").get<double>();
        entry.wavelength = item.at("wavelength_base").get<double>();
        entry.ramp_gamma = item.at("gamma").get<double>();
        table.entries.push_back(entry);
    }
    return table;
}

CompareReport compare_tables(const FrequencyTable& a, const FrequencyTable& b) {
    if (a.params.head_dim != b.params.head_dim) {
        throw std::invalid_argument("tables have different head_dim");
    }
    if (a.params.base != b.params.base ||
        a.params.trained_context != b.params.trained_context) {
        throw std::invalid_argument("tables were built from different RopeParams");
    }
    CompareReport report;
    report.rows.reserve(a.entries.size());
    for (std::size_t d = 0; d < a.entries.size(); ++d) {
        CompareRow row;
        row.dim = a.entries[d].dim_index;
        row.theta_a = a.entries[d].theta_scaled;
        row.theta_b = b.entries[d].theta_scaled;
        row.ratio = row.theta_b / row.theta_a;
        row.abs_log_ratio = std::abs(std::log(row.ratio));
        report.max_abs_log_ratio = std::max(report.max_abs_log_ratio, row.abs_log_ratio);
        report.rows.push_back(row);
    }
    return report;
}

std::string compare_csv(const CompareReport& report) {
    std::string out = kCompareHeader;
    out += '\n';
    for (const CompareRow& row : report.rows) {
        out += std::to_string(row.dim);
        out += ',';
        out += format_float(row.theta_a);
        out += ',';
        out += format_float(row.theta_b);
        out += ',';
        out += format_float(row.ratio);
        out += ',';
        out += format_float(row.abs_log_ratio);
        out += '\n';
    }
    out += "summary,,,,";
    out += format_float(report.max_abs_log_ratio);
    out += '\n';
    return out;
}

std::string compare_json(const CompareReport& report) {
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const CompareRow& row : report.rows) {
        doc["rows"].push_back({{"dim", row.dim},
                               {"thetaA", row.theta_a},
                               {"thetaB", row.theta_b},
                               {"ratio", row.ratio},
                               {"abs_log_ratio", row.abs_log_ratio}});
    }
    doc["max_abs_log_ratio"] = report.max_abs_log_ratio;
    return doc.dump(2) + "\n";
}

std::vector<EntropyRecord> entropy_records(const std::vector<AttentionDiagnostics>& cells) {
    std::vector<EntropyRecord> records;
    records.reserve(cells.size());
    for (const AttentionDiagnostics& cell : cells) {
        EntropyRecord record;
        record.length = cell.context_length;
        record.mean_entropy = cell.mean_entropy;
        record.uniform_bound = std::log(static_cast<double>(cell.context_length));
        record.mscale = std::sqrt(cell.temperature);
        records.push_back(record);
    }
    return records;
}

std::string entropy_csv(const std::vector<EntropyRecord>& records) {
    std::string out = kEntropyHeader;
    out += '\n';
    for (const EntropyRecord& record : records) {
        out += std::to_string(record.length);
        out += ',';
        out += format_float(record.mean_entropy);
        out += ',';
        out += format_float(record.uniform_bound);
        out += ',';
        out += format_float(record.mscale);
        out += '\n';
    }
    return out;
}

std::string entropy_json(const std::vector<EntropyRecord>& records) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const EntropyRecord& record : records) {
        doc.push_back({{"length", record.length},
                       {"mean_entropy", record.mean_entropy},
                       {"uniform_bound", record.uniform_bound},
                       {"mscale", record.mscale}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace ropelab::io
