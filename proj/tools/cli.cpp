#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "aesimc/error.hpp"
#include "aesimc/imc_transforms.hpp"
#include "aesimc/perf_metrics.hpp"
#include "aesimc/pipeline.hpp"
#include "aesimc/reference_aes.hpp"
#include "aesimc/schedule.hpp"

namespace aesimc::cli {

namespace {

struct EncryptOptions {
  std::string key;
  std::string input;
  std::string trace_path;
  std::string out_path;
  std::string schedule = "default";
  std::size_t m2_par = 4;
  bool overlap = false;
};

struct VerifyOptions {
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string schedule = "default";
  std::size_t m2_par = 4;
  bool corrupt_sbox = false;
};

struct MetricsOptions {
  std::string params;
  bool check = false;
  std::string format = "csv";
};

// Error whose message is already prefixed with the offending field.
struct FieldError : Error {
  FieldError(const std::string& field, const std::string& what)
      : Error(fmt::format("{}: {}", field, what)) {}
};

template <typename Fn>
auto field(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const FieldError&) {
    throw;
  } catch (const std::exception& e) {
    throw FieldError(name, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path));
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

CycleSchedule schedule_from(const std::string& spec) {
  return spec == "default" ? CycleSchedule::standard() : load_schedule_file(spec);
}

std::vector<Block> to_blocks(const std::vector<Byte>& bytes) {
  if (bytes.size() % 16 != 0) {
    throw InputError(
        fmt::format("input length {} bytes is not a multiple of 16", bytes.size()));
  }
  std::vector<Block> blocks(bytes.size() / 16);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(16 * i), 16, blocks[i].begin());
  }
  return blocks;
}

int cmd_encrypt(const EncryptOptions& opt, std::ostream& out) {
  const auto key = field("--key", [&] {
    const auto bytes = parse_hex(opt.key);
    if (bytes.size() != 16) {
      throw InputError(fmt::format("key must be 16 bytes, got {}", bytes.size()));
    }
    return bytes;
  });
  const auto blocks = field("--in", [&] {
    const bool is_file = std::filesystem::is_regular_file(opt.input);
    return to_blocks(parse_hex(is_file ? read_file(opt.input) : opt.input));
  });
  const auto schedule = field("--schedule", [&] {
    auto s = schedule_from(opt.schedule);
    const auto diag = validate_schedule(s);
    if (!diag.ok()) throw ScheduleError(fmt::format("{}", fmt::join(diag.problems, "; ")));
    return s;
  });
  if (opt.m2_par == 0) throw FieldError("--m2-par", "must be at least 1");

  EngineConfig config;
  config.m2_parallelism = opt.m2_par;
  const auto result = run_stream(blocks, key, schedule, opt.overlap ? Overlap::on : Overlap::off,
                                 config);

  std::ofstream file;
  if (!opt.out_path.empty()) {
    file.open(opt.out_path);
    if (!file) throw FieldError("--out", fmt::format("cannot write '{}'", opt.out_path));
  }
  std::ostream& data = opt.out_path.empty() ? out : file;
  for (const auto& c : result.ciphertexts) data << to_hex(c) << '\n';

  if (!opt.trace_path.empty()) {
    std::ofstream trace(opt.trace_path);
    if (!trace) throw FieldError("--trace", fmt::format("cannot write '{}'", opt.trace_path));
    result.trace.write(trace);
  }
  return kOk;
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.trials == 0) throw FieldError("--trials", "must be at least 1");
  if (opt.m2_par == 0) throw FieldError("--m2-par", "must be at least 1");
  EngineConfig config;
  config.schedule = field("--schedule", [&] { return schedule_from(opt.schedule); });
  config.m2_parallelism = opt.m2_par;
  ImcEngine engine(config);
  if (opt.corrupt_sbox) {
    // Flip the low bit of every low-nibble cell on the S-box row for high
    // nibble 0, in both units.
    for (std::size_t u = 0; u < 2; ++u) {
      auto& unit = engine.unit(u);
      const std::size_t row = unit.layout().sbox_rows[0];
      for (std::size_t c = 1; c < kLutCols; c += 2) {
        unit.array().write_cell(row, c, unit.array().peek(row, c) ^ 1);
      }
    }
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> byte(0, 255);
  std::size_t passed = 0;
  bool reported = false;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Block key{};
    Block plain{};
    for (auto& b : key) b = static_cast<Byte>(byte(rng));
    for (auto& b : plain) b = static_cast<Byte>(byte(rng));
    const RoundKeySet keys = expand_key(key);
    engine.load_keys(keys);
    const Block got = engine.encrypt(plain).ciphertext;
    const Block want = aes128_encrypt(plain, keys);
    if (got == want) {
      ++passed;
    } else if (!reported) {
      err << fmt::format(
          "divergence at trial {}: key={} plain={} imc={} reference={}\n", t + 1, to_hex(key),
          to_hex(plain), to_hex(got), to_hex(want));
      reported = true;
    }
  }
  const std::string summary = fmt::format("{}/{} pass", passed, opt.trials);
  out << summary << '\n';
  if (passed != opt.trials) {
    err << fmt::format("verify failed: {}\n", summary);
    return kError;
  }
  return kOk;
}

int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err) {
  const auto rows = field("--params", [&] { return load_metrics_csv(opt.params); });
  const auto results = run_metrics(rows);
  out << (opt.format == "json" ? emit_json(results, opt.check) : emit_csv(results, opt.check));
  if (!opt.check) return kOk;

  std::size_t mismatches = 0;
  for (const auto& r : results) {
    for (const auto& m : r.mismatches) {
      ++mismatches;
      err << fmt::format("check: line {} {}: {} printed {:.6g}, computed {:.6g} ({:.1f}% off)\n",
                         r.row.line, r.row.design, m.field, m.printed, m.computed,
                         100.0 * m.relative_error);
    }
  }
  return mismatches == 0 ? kOk : kCheckMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle-level simulator of an in-memory AES-128 engine"};
  app.require_subcommand(1);

  EncryptOptions enc;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt hex blocks on the in-memory engine");
  encrypt->add_option("--key", enc.key, "128-bit key as 32 hex digits")->required();
  encrypt->add_option("--in", enc.input, "Hex plaintext, or a file holding hex text")
      ->required();
  encrypt->add_option("--trace", enc.trace_path, "Write the cycle trace to this file");
  encrypt->add_option("--out", enc.out_path, "Write ciphertext lines here instead of stdout");
  encrypt->add_option("--schedule", enc.schedule, "Schedule JSON file, or 'default'");
  encrypt->add_option("--m2-par", enc.m2_par, "Parallel M-2 LUT instances per unit");
  encrypt->add_flag("--overlap", enc.overlap, "Start blocks every initiation interval");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Compare the engine against software AES");
  verify->add_option("--trials", ver.trials, "Random (key, plaintext) pairs")->required();
  verify->add_option("--seed", ver.seed, "RNG seed");
  verify->add_option("--schedule", ver.schedule, "Schedule JSON file, or 'default'");
  verify->add_option("--m2-par", ver.m2_par, "Parallel M-2 LUT instances per unit");
  verify->add_flag("--corrupt-sbox", ver.corrupt_sbox, "Debug: damage one S-box LUT row");

  MetricsOptions met;
  auto* metrics = app.add_subcommand("metrics", "Throughput/energy report from a parameter CSV");
  metrics->add_option("--params", met.params, "Parameter CSV")->required();
  metrics->add_flag("--check", met.check, "Compare against printed columns (0.5% tolerance)");
  metrics->add_option("--format", met.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help lands here with a success code.
    // Help and version requests exit 0; every usage error maps to kError.
    const int code = app.exit(e, e.get_exit_code() == 0 ? out : err, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*encrypt) return cmd_encrypt(enc, out);
    if (*verify) return cmd_verify(ver, out, err);
    if (*metrics) return cmd_metrics(met, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace aesimc::cli
