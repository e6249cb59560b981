#include "poisim/io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace poisim::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Lines of the file without trailing newlines; a trailing empty line is
// dropped so files with and without a final newline read the same.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> ls = split(text, '\n');
  for (std::string_view& l : ls) {
    if (!l.empty() && l.back() == '\r') {
      l.remove_suffix(1);
    }
  }
  if (!ls.empty() && ls.back().empty()) {
    ls.pop_back();
  }
  return ls;
}

[[noreturn]] void bad_field(std::string_view what, std::string_view got) {
  throw SchemaError("bad " + std::string(what) + ": '" + std::string(got) + "'");
}

void expect_header(std::string_view got, std::string_view want,
                   std::string_view kind) {
  if (got != want) {
    throw SchemaError(std::string(kind) + " header mismatch: expected '" +
                      std::string(want) + "', got '" + std::string(got) + "'");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
std::optional<T> opt_of(bool present, T value) {
  return present ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    bad_field("number", s);
  }
  return v;
}

long parse_long(std::string_view s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    bad_field("integer", s);
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + p.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw std::runtime_error("failed reading " + p.string());
  }
  return text;
}

void write_text_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + p.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing " + p.string());
  }
}

std::string dataset_csv(const Dataset& d) {
  std::string out(kDatasetHeader);
  out.push_back('\n');
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += fmt17(d.x(i));
    out.push_back(',');
    out.push_back(d.y(i) == Label::fake_news ? '1' : '0');
    out += d.provenance(i) == Provenance::organic ? ",organic\n" : ",poison\n";
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& p, const Dataset& d) {
  write_text_file(p, dataset_csv(d));
}

Dataset read_dataset_csv(const std::filesystem::path& p) {
  const std::string text = read_text_file(p);
  const auto ls = lines_of(text);
  if (ls.empty()) {
    throw SchemaError("dataset file is empty: " + p.string());
  }
  expect_header(ls[0], kDatasetHeader, "dataset");
  Dataset d;
  d.reserve(ls.size() - 1);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = split(ls[i], ',');
    if (f.size() != 3) {
      bad_field("dataset row", ls[i]);
    }
    Provenance prov;
    if (f[2] == "organic") {
      prov = Provenance::organic;
    } else if (f[2] == "poison") {
      prov = Provenance::poison;
    } else {
      bad_field("provenance", f[2]);
    }
    d.append(Sample{parse_double(f[0]),
                    label_from_int(static_cast<int>(parse_long(f[1]))), prov});
  }
  return d;
}

std::string model_csv_line(const model::LogisticModel& m) {
  std::string out = std::to_string(m.feature_map.degree);
  for (Eigen::Index i = 0; i < m.beta.size(); ++i) {
    out.push_back(',');
    out += fmt17(m.beta[i]);
  }
  return out;
}

model::LogisticModel parse_model_csv_line(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() < 3) {
    bad_field("model line", line);
  }
  const long degree = parse_long(f[0]);
  if (degree < 1 || degree > 2 || f.size() != static_cast<std::size_t>(degree) + 2) {
    bad_field("model line", line);
  }
  model::LogisticModel m{model::FeatureMap{static_cast<int>(degree)},
                         Eigen::VectorXd(degree + 1)};
  for (long i = 0; i <= degree; ++i) {
    m.beta[i] = parse_double(f[static_cast<std::size_t>(i) + 1]);
  }
  model::validate_model(m);
  return m;
}

std::string models_csv(std::span<const model::LogisticModel> ms) {
  std::string out;
  for (const model::LogisticModel& m : ms) {
    out += model_csv_line(m);
    out.push_back('\n');
  }
  return out;
}

void write_models_csv(const std::filesystem::path& p,
                      std::span<const model::LogisticModel> ms) {
  write_text_file(p, models_csv(ms));
}

std::vector<model::LogisticModel> read_models_csv(const std::filesystem::path& p) {
  const std::string text = read_text_file(p);
  std::vector<model::LogisticModel> out;
  for (const std::string_view line : lines_of(text)) {
    out.push_back(parse_model_csv_line(line));
  }
  if (out.empty()) {
    throw SchemaError("model file has no lines: " + p.string());
  }
  return out;
}

namespace {

void append_flip_fields(std::string& out, const experiment::FlipResult& r,
                        bool failed) {
  if (failed) {
    out += ",,,false,,";
    return;
  }
  if (r.flipped) {
    out.push_back(',');
    out += std::to_string(r.poison_count);
    out.push_back(',');
    out += fmt17(r.poison_pct);
    out += ",true,";
  } else {
    out += ",,,false,";
    out += std::to_string(r.censored_at);
  }
  out.push_back(',');
  out += fmt17(r.clean_p_target);
}

}  // namespace

std::string flip_row(double target_x, int degree, std::string_view attack,
                     const experiment::FlipResult& r) {
  std::string out = fmt17(target_x);
  out.push_back(',');
  out += std::to_string(degree);
  out.push_back(',');
  out += attack;
  append_flip_fields(out, r, false);
  return out;
}

std::string sweep_csv(std::span<const experiment::SweepRow> rows) {
  std::string out(kSweepHeader);
  out.push_back('\n');
  for (const experiment::SweepRow& row : rows) {
    out += fmt17(row.target_x);
    out.push_back(',');
    out += std::to_string(row.model_degree);
    out.push_back(',');
    out += attack::kind_name(row.attack);
    append_flip_fields(out, row.result, !row.error.empty());
    out.push_back('\n');
  }
  return out;
}

void write_sweep_csv(const std::filesystem::path& p,
                     std::span<const experiment::SweepRow> rows) {
  write_text_file(p, sweep_csv(rows));
}

std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& p) {
  const std::string text = read_text_file(p);
  const auto ls = lines_of(text);
  if (ls.empty()) {
    throw SchemaError("sweep file is empty: " + p.string());
  }
  expect_header(ls[0], kSweepHeader, "sweep");
  std::vector<SweepRecord> out;
  out.reserve(ls.size() - 1);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = split(ls[i], ',');
    if (f.size() != 8) {
      bad_field("sweep row", ls[i]);
    }
    SweepRecord rec;
    rec.target_x = parse_double(f[0]);
    rec.model_degree = static_cast<int>(parse_long(f[1]));
    rec.attack = std::string(f[2]);
    rec.poison_count = opt_of(!f[3].empty(), f[3].empty() ? 0 : parse_long(f[3]));
    rec.poison_pct =
        opt_of(!f[4].empty(), f[4].empty() ? 0.0 : parse_double(f[4]));
    if (f[5] == "true") {
      rec.flipped = true;
    } else if (f[5] == "false") {
      rec.flipped = false;
    } else {
      bad_field("flipped flag", f[5]);
    }
    rec.censored_at = opt_of(!f[6].empty(), f[6].empty() ? 0 : parse_long(f[6]));
    rec.clean_p_target =
        opt_of(!f[7].empty(), f[7].empty() ? 0.0 : parse_double(f[7]));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string trace_csv(std::span<const experiment::TraceEntry> trace) {
  std::string out(kTraceHeader);
  out.push_back('\n');
  for (const experiment::TraceEntry& e : trace) {
    out += std::to_string(e.t);
    out.push_back(',');
    out += std::to_string(e.poison_total);
    out.push_back(',');
    out += fmt17(e.p_target);
    out.push_back('\n');
  }
  return out;
}

void write_trace_csv(const std::filesystem::path& p,
                     std::span<const experiment::TraceEntry> trace) {
  write_text_file(p, trace_csv(trace));
}

std::string manifest_text(const Manifest& m) {
  std::string out;
  for (const auto& [key, value] : m) {
    if (key.empty()) {
      out += "# ";
      out += value;
    } else {
      out += key;
      out += " = ";
      out += value;
    }
    out.push_back('\n');
  }
  return out;
}

void write_manifest(const std::filesystem::path& p, const Manifest& m) {
  write_text_file(p, manifest_text(m));
}

Manifest read_manifest(const std::filesystem::path& p) {
  const std::string text = read_text_file(p);
  Manifest m;
  for (const std::string_view line : lines_of(text)) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw SchemaError("manifest line without '=': " + std::string(line));
    }
    m.emplace_back(std::string(trim(t.substr(0, eq))),
                   std::string(trim(t.substr(eq + 1))));
  }
  return m;
}

}  // namespace poisim::io
