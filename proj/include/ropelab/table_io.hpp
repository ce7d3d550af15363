#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ropelab/attention_lab.hpp"
#include "ropelab/frequency_table.hpp"

namespace ropelab::io {

// Shortest decimal with 17 significant digits; round-trips any double exactly.
std::string format_float(double v);

// One emitted row per dimension pair. Column order matches the CSV schema:
// dim,theta_base,theta_scaled,wavelength_base,wavelength_scaled,rotations_at_L,gamma,mscale
struct FreqRow {
    int dim = 0;
    double theta_base = 0.0;
    double theta_scaled = 0.0;
    double wavelength_base = 0.0;
    double wavelength_scaled = 0.0;  // 2*pi / theta_scaled
    double rotations_at_trained = 0.0;
    double gamma = 0.0;
    double mscale = 1.0;

    bool operator==(const FreqRow&) const = default;
};

std::vector<FreqRow> freq_rows(const FrequencyTable& table);
std::string freqs_csv(const FrequencyTable& table);
std::string freqs_json(const FrequencyTable& table);

// Parsers invert the emitters bit-exactly. CSV restores the rows; JSON
// restores the full table. Both throw std::runtime_error on malformed input.
std::vector<FreqRow> parse_freqs_csv(const std::string& text);
FrequencyTable parse_freqs_json(const std::string& text);

// Per-dim frequency comparison of two tables over the same RopeParams:
// ratio = theta_b / theta_a on the scaled frequencies.
struct CompareRow {
    int dim = 0;
    double theta_a = 0.0;
    double theta_b = 0.0;
    double ratio = 0.0;
    double abs_log_ratio = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double max_abs_log_ratio = 0.0;
};

// Throws std::invalid_argument on mismatched head_dim.
CompareReport compare_tables(const FrequencyTable& a, const FrequencyTable& b);
std::string compare_csv(const CompareReport& report);
std::string compare_json(const CompareReport& report);

// Entropy sweep file schema: length,mean_entropy,uniform_bound,mscale.
struct EntropyRecord {
    std::int64_t length = 0;
    double mean_entropy = 0.0;
    double uniform_bound = 0.0;  // ln(length)
    double mscale = 1.0;
};

std::vector<EntropyRecord> entropy_records(const std::vector<AttentionDiagnostics>& cells);
std::string entropy_csv(const std::vector<EntropyRecord>& records);
std::string entropy_json(const std::vector<EntropyRecord>& records);

}  // namespace ropelab::io
