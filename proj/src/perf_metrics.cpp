#include "aesimc/perf_metrics.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "aesimc/error.hpp"
#include "json.hpp"

namespace aesimc {

namespace {

void check_params(const PerfParams& p) {
  if (!(p.f_max_hz > 0)) throw std::domain_error("f_max must be positive");
  if (!(p.f_rf_hz > 0)) throw std::domain_error("f_rf must be positive");
  if (!(p.b_size_bits > 0)) throw std::domain_error("block size must be positive");
  if (!(p.latency_cycles > 0)) throw std::domain_error("latency must be positive");
  if (!(p.power_w >= 0)) throw std::domain_error("power must be non-negative");
}

}  // namespace

double throughput(const PerfParams& p) {
  check_params(p);
  return p.f_max_hz * p.b_size_bits / p.latency_cycles;
}

double throughput_rf(const PerfParams& p) {
  check_params(p);
  return p.f_rf_hz * p.b_size_bits / p.latency_cycles;
}

BlockEnergy energy_per_block(const PerfParams& p) {
  check_params(p);
  const double e = p.power_w * p.latency_cycles / p.f_rf_hz;
  return {e, e / p.b_size_bits};
}

PerfReport evaluate(const PerfParams& p) {
  const auto e = energy_per_block(p);
  return {throughput(p), throughput_rf(p), e.per_block_j, e.per_bit_j};
}

PerfReport table_iv_row(const PerfParams& p) {
  PerfParams at_fmax = p;
  at_fmax.f_rf_hz = p.f_max_hz;
  return evaluate(at_fmax);
}

double aggregate_dpr(double per_engine_bps, std::size_t n_engines) {
  if (n_engines == 0) throw std::domain_error("engine count must be at least 1");
  if (!(per_engine_bps >= 0)) throw std::domain_error("per-engine throughput must be >= 0");
  return static_cast<double>(n_engines) * per_engine_bps / 8.0;
}

std::size_t engines_for_dpr(double target_bytes_per_s, double per_engine_bps) {
  if (!(per_engine_bps > 0)) throw std::domain_error("per-engine throughput must be positive");
  if (!(target_bytes_per_s > 0)) return 1;
  auto n = static_cast<std::size_t>(std::ceil(target_bytes_per_s * 8.0 / per_engine_bps));
  // Guard against the quotient landing a hair under an integer.
  while (aggregate_dpr(per_engine_bps, n) < target_bytes_per_s) ++n;
  return std::max<std::size_t>(n, 1);
}

// --- CSV -------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw InputError(
        fmt::format("line {}: column {} is not a number: '{}'", line, column, text));
  }
  return value;
}

const std::vector<std::string>& schema_columns() {
  static const std::vector<std::string> cols = {
      "design", "f_max_hz", "l_cycles", "b_bits",     "p_w",
      "thr_bps", "thr_rf_bps", "e_j",   "e_per_bit_j"};
  return cols;
}

std::string number(double v) { return fmt::format("{:.12g}", v); }

}  // namespace

std::vector<MetricsRow> parse_metrics_csv(std::string_view text) {
  std::vector<MetricsRow> rows;
  std::vector<std::string> header;
  std::map<std::string, std::size_t> index;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_fields(line);
    if (header.empty()) {
      header = fields;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (!index.emplace(header[i], i).second) {
          throw InputError(fmt::format("line {}: duplicate column '{}'", line_no, header[i]));
        }
      }
      for (const char* required : {"design", "f_max_hz", "l_cycles", "b_bits"}) {
        if (!index.count(required)) {
          throw InputError(
              fmt::format("line {}: header lacks required column '{}'", line_no, required));
        }
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw InputError(fmt::format("line {}: expected {} fields, got {}", line_no,
                                   header.size(), fields.size()));
    }

    auto cell = [&](const std::string& name) -> std::optional<std::string> {
      const auto it = index.find(name);
      if (it == index.end() || fields[it->second].empty()) return std::nullopt;
      return fields[it->second];
    };
    auto required_number = [&](const std::string& name) {
      const auto v = cell(name);
      if (!v) throw InputError(fmt::format("line {}: column {} is empty", line_no, name));
      return parse_number(*v, line_no, name);
    };
    auto optional_number = [&](const std::string& name) -> std::optional<double> {
      const auto v = cell(name);
      if (!v) return std::nullopt;
      return parse_number(*v, line_no, name);
    };

    MetricsRow row;
    row.line = line_no;
    row.design = cell("design").value_or("");
    row.params.f_max_hz = required_number("f_max_hz");
    row.params.latency_cycles = required_number("l_cycles");
    row.params.b_size_bits = required_number("b_bits");
    if (auto f_rf = optional_number("f_rf_hz")) row.params.f_rf_hz = *f_rf;
    if (auto p = optional_number("p_w")) {
      row.params.power_w = *p;
      row.has_power = true;
    }
    row.printed.thr_bps = optional_number("thr_bps");
    row.printed.thr_rf_bps = optional_number("thr_rf_bps");
    row.printed.e_j = optional_number("e_j");
    row.printed.e_per_bit_j = optional_number("e_per_bit_j");

    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "f_rf_hz") continue;
      bool in_schema = false;
      for (const auto& c : schema_columns()) in_schema = in_schema || c == header[i];
      if (!in_schema) row.metadata.emplace_back(header[i], fields[i]);
    }

    try {
      evaluate(row.params);
    } catch (const std::domain_error& e) {
      throw InputError(fmt::format("line {}: {}", line_no, e.what()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MetricsRow> load_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open parameter file '{}'", path));
  std::stringstream text;
  text << in.rdbuf();
  return parse_metrics_csv(text.str());
}

std::vector<MetricsResult> run_metrics(const std::vector<MetricsRow>& rows, double tolerance) {
  std::vector<MetricsResult> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    MetricsResult r{row, evaluate(row.params), {}};
    auto compare = [&](const char* field, const std::optional<double>& printed,
                       double computed) {
      if (!printed) return;
      const double rel = *printed == 0 ? (computed == 0 ? 0.0 : HUGE_VAL)
                                       : std::abs(computed - *printed) / std::abs(*printed);
      if (rel > tolerance) {
        r.mismatches.push_back({field, *printed, computed, rel});
      }
    };
    compare("thr_bps", row.printed.thr_bps, r.report.thr_bps);
    compare("thr_rf_bps", row.printed.thr_rf_bps, r.report.thr_rf_bps);
    if (row.has_power) {
      compare("e_j", row.printed.e_j, r.report.energy_per_block_j);
      compare("e_per_bit_j", row.printed.e_per_bit_j, r.report.energy_per_bit_j);
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string describe(const std::vector<Mismatch>& mismatches) {
  if (mismatches.empty()) return "ok";
  std::string s = "mismatch";
  for (const auto& m : mismatches) {
    s += fmt::format(" {}(printed={} computed={})", m.field, number(m.printed),
                     number(m.computed));
  }
  return s;
}

}  // namespace

std::string emit_csv(const std::vector<MetricsResult>& results, bool with_check) {
  std::string out = "design,f_max_hz,l_cycles,b_bits,p_w,thr_bps,thr_rf_bps,e_j,e_per_bit_j";
  out += with_check ? ",check\n" : "\n";
  for (const auto& r : results) {
    const auto& p = r.row.params;
    out += fmt::format("{},{},{},{},", r.row.design, number(p.f_max_hz),
                       number(p.latency_cycles), number(p.b_size_bits));
    out += r.row.has_power ? number(p.power_w) : "";
    out += fmt::format(",{},{},", number(r.report.thr_bps), number(r.report.thr_rf_bps));
    if (r.row.has_power) {
      out += fmt::format("{},{}", number(r.report.energy_per_block_j),
                         number(r.report.energy_per_bit_j));
    } else {
      out += ",";
    }
    if (with_check) out += "," + describe(r.mismatches);
    out += '\n';
  }
  return out;
}

std::string emit_json(const std::vector<MetricsResult>& results, bool with_check) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  std::size_t mismatch_count = 0;
  for (const auto& r : results) {
    const auto& p = r.row.params;
    nlohmann::ordered_json row;
    row["design"] = r.row.design;
    row["f_max_hz"] = p.f_max_hz;
    row["f_rf_hz"] = p.f_rf_hz;
    row["l_cycles"] = p.latency_cycles;
    row["b_bits"] = p.b_size_bits;
    row["p_w"] = r.row.has_power ? nlohmann::ordered_json(p.power_w) : nullptr;
    row["thr_bps"] = r.report.thr_bps;
    row["thr_rf_bps"] = r.report.thr_rf_bps;
    row["e_j"] = r.row.has_power ? nlohmann::ordered_json(r.report.energy_per_block_j) : nullptr;
    row["e_per_bit_j"] =
        r.row.has_power ? nlohmann::ordered_json(r.report.energy_per_bit_j) : nullptr;

    nlohmann::ordered_json display;
    display["thr_mbps"] = fmt::format("{:.2f}", r.report.thr_bps / kMbps);
    display["thr_rf_mbps"] = fmt::format("{:.2f}", r.report.thr_rf_bps / kMbps);
    if (r.row.has_power) {
      display["e_uj"] = fmt::format("{:.2f}", r.report.energy_per_block_j * 1e6);
      display["e_per_bit_nj"] = fmt::format("{:.2f}", r.report.energy_per_bit_j * 1e9);
    }
    row["display"] = std::move(display);

    if (!r.row.metadata.empty()) {
      nlohmann::ordered_json meta;
      for (const auto& [k, v] : r.row.metadata) meta[k] = v;
      row["metadata"] = std::move(meta);
    }
    if (with_check) {
      nlohmann::ordered_json mm = nlohmann::ordered_json::array();
      for (const auto& m : r.mismatches) {
        mm.push_back({{"field", m.field},
                      {"printed", m.printed},
                      {"computed", m.computed},
                      {"relative_error", m.relative_error}});
      }
      row["mismatches"] = std::move(mm);
      mismatch_count += r.mismatches.size();
    }
    doc["rows"].push_back(std::move(row));
  }
  if (with_check) {
    doc["tolerance"] = kCheckTolerance;
    doc["mismatch_count"] = mismatch_count;
  }
  return doc.dump(2) + "\n";
}

}  // namespace aesimc
