#pragma once

// Throughput and energy model of a block-cipher engine:
//   Thr  = F_max * B / L
//   Thr* = F_RF  * B / L
//   E    = P * L / F_RF,   E/bit = E / B
// Units are SI throughout (Hz, bits, cycles, W, J, bit/s).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aesimc {

inline constexpr double kRfidFrequencyHz = 13.56e6;
inline constexpr double kMbps = 1e6;

struct PerfParams {
  double f_max_hz = 0;
  double f_rf_hz = kRfidFrequencyHz;
  double b_size_bits = 128;
  double latency_cycles = 0;
  double power_w = 0;
};

struct PerfReport {
  double thr_bps = 0;
  double thr_rf_bps = 0;
  double energy_per_block_j = 0;
  double energy_per_bit_j = 0;
};

struct BlockEnergy {
  double per_block_j = 0;
  double per_bit_j = 0;
};

// All throw std::domain_error on a non-positive frequency, block size or
// latency, or a negative power.
double throughput(const PerfParams& p);
double throughput_rf(const PerfParams& p);
BlockEnergy energy_per_block(const PerfParams& p);
PerfReport evaluate(const PerfParams& p);

// Single-frequency comparison row: throughput and energy both taken at
// f_max (the RF frequency is ignored).
PerfReport table_iv_row(const PerfParams& p);

// Aggregate data processing rate of n identical engines, in bytes/s.
double aggregate_dpr(double per_engine_bps, std::size_t n_engines);
// Smallest engine count whose aggregate rate reaches `target_bytes_per_s`.
std::size_t engines_for_dpr(double target_bytes_per_s, double per_engine_bps);

// --- parameter files and reports -------------------------------------------

inline constexpr double kCheckTolerance = 0.005;

struct PrintedValues {
  std::optional<double> thr_bps;
  std::optional<double> thr_rf_bps;
  std::optional<double> e_j;
  std::optional<double> e_per_bit_j;
};

struct MetricsRow {
  std::string design;
  PerfParams params;
  bool has_power = false;
  PrintedValues printed;
  // Columns outside the schema, echoed untouched.
  std::vector<std::pair<std::string, std::string>> metadata;
  std::size_t line = 0;
};

struct Mismatch {
  std::string field;
  double printed = 0;
  double computed = 0;
  double relative_error = 0;
};

struct MetricsResult {
  MetricsRow row;
  PerfReport report;
  std::vector<Mismatch> mismatches;
};

// Header-driven CSV. Required columns: design, f_max_hz, l_cycles, b_bits.
// Optional: p_w, f_rf_hz and the printed result columns thr_bps, thr_rf_bps,
// e_j, e_per_bit_j. Blank cells mean "not given". Lines starting with '#'
// are skipped. Errors name the offending line.
std::vector<MetricsRow> parse_metrics_csv(std::string_view text);
std::vector<MetricsRow> load_metrics_csv(const std::string& path);

// Computes every row and, for each printed value present, flags relative
// deviations above `tolerance`.
std::vector<MetricsResult> run_metrics(const std::vector<MetricsRow>& rows,
                                       double tolerance = kCheckTolerance);

// Header: design,f_max_hz,l_cycles,b_bits,p_w,thr_bps,thr_rf_bps,e_j,e_per_bit_j
// (plus a trailing "check" column when with_check is set).
std::string emit_csv(const std::vector<MetricsResult>& results, bool with_check = false);
std::string emit_json(const std::vector<MetricsResult>& results, bool with_check = false);

}  // namespace aesimc
