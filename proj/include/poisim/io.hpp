#pragma once
// File formats: dataset / model / sweep / trace CSVs and the run
// manifest. All numeric text is locale-independent and round-trip exact.

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poisim/core.hpp"
#include "poisim/experiment.hpp"
#include "poisim/model.hpp"

namespace poisim::io {

/// Malformed file content (bad header, bad field). Distinct from plain
/// runtime_error so the CLI can report it as a usage problem.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decimal text with 17 significant digits, '.' separator, no locale
/// influence; parses back to the identical double.
std::string fmt17(double v);

/// Fixed-point text with the given number of decimals (plot coordinates).
std::string fmt_fixed(double v, int decimals);

/// Strict full-string parses; throw SchemaError on any leftover or error.
double parse_double(std::string_view s);
long parse_long(std::string_view s);

std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, std::string_view text);

/// Header `x,y,provenance`, one row per sample in insertion order.
std::string dataset_csv(const Dataset& d);
void write_dataset_csv(const std::filesystem::path& p, const Dataset& d);
Dataset read_dataset_csv(const std::filesystem::path& p);

/// One model per line: `degree,beta0,beta1[,beta2]`, no header.
std::string model_csv_line(const model::LogisticModel& m);
model::LogisticModel parse_model_csv_line(std::string_view line);
std::string models_csv(std::span<const model::LogisticModel> ms);
void write_models_csv(const std::filesystem::path& p,
                      std::span<const model::LogisticModel> ms);
std::vector<model::LogisticModel> read_models_csv(const std::filesystem::path& p);

inline constexpr std::string_view kSweepHeader =
    "target_x,model_degree,attack,poison_count,poison_pct,flipped,"
    "censored_at,clean_p_target";
inline constexpr std::string_view kDatasetHeader = "x,y,provenance";
inline constexpr std::string_view kTraceHeader = "t,poison_total,p_target";

/// Sweep row as read back from disk. Count fields are absent when the row
/// does not carry them (censored rows have no poison_count, flipped rows
/// no censored_at, failed rows neither).
struct SweepRecord {
  double target_x = 0.0;
  int model_degree = 1;
  std::string attack;
  std::optional<long> poison_count;
  std::optional<double> poison_pct;
  bool flipped = false;
  std::optional<long> censored_at;
  std::optional<double> clean_p_target;
};

std::string sweep_csv(std::span<const experiment::SweepRow> rows);
void write_sweep_csv(const std::filesystem::path& p,
                     std::span<const experiment::SweepRow> rows);
std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& p);

std::string trace_csv(std::span<const experiment::TraceEntry> trace);
void write_trace_csv(const std::filesystem::path& p,
                     std::span<const experiment::TraceEntry> trace);

/// The flip command's stdout row, same column layout as the sweep CSV.
std::string flip_row(double target_x, int degree, std::string_view attack,
                     const experiment::FlipResult& r);

/// Ordered key-value pairs. Rendered as `key = value` lines, loadable as
/// a config file; entries with an empty key become `# value` comments.
using Manifest = std::vector<std::pair<std::string, std::string>>;

std::string manifest_text(const Manifest& m);
void write_manifest(const std::filesystem::path& p, const Manifest& m);
/// Parses key-value lines back; comment and blank lines are skipped.
Manifest read_manifest(const std::filesystem::path& p);

}  // namespace poisim::io
