// poisim: command-line front end. Subcommands: generate, flip, sweep,
// snapshot, plot. Every command writes a manifest next to its output that
// doubles as a --config file for byte-identical replay.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage or schema error,
// 3 a model fit hit its iteration cap during the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poisim/attack.hpp"
#include "poisim/core.hpp"
#include "poisim/experiment.hpp"
#include "poisim/io.hpp"
#include "poisim/model.hpp"
#include "poisim/stream.hpp"
#include "poisim/svg.hpp"
#include "poisim/version.hpp"

namespace {

using namespace poisim;

const CLI::Validator OpenUnit(
    [](std::string& s) {
      try {
        const double v = io::parse_double(s);
        if (v > 0.0 && v < 1.0) {
          return std::string();
        }
      } catch (const std::exception&) {
      }
      return std::string("must be a number strictly between 0 and 1");
    },
    "(0,1)");

const CLI::Validator ClosedUnit(
    [](std::string& s) {
      try {
        const double v = io::parse_double(s);
        if (v >= 0.0 && v <= 1.0) {
          return std::string();
        }
      } catch (const std::exception&) {
      }
      return std::string("must be a number in [0,1]");
    },
    "[0,1]");

struct DataFlags {
  std::size_t n = 10000;
  double sep = 0.5;
  std::uint64_t gen_seed = 42;
  std::string rule = "above_is_fake";
};

struct TrainFlags {
  double lambda = 1e-4;
  double grad_tol = 1e-8;
  long max_iters = 100000;
  std::string solver = "newton";
};

struct StreamFlags {
  std::string policy = "all";
  double fraction = 1.0;
  std::string mode = "static";
  std::size_t drift_batch = 100;
  std::uint64_t seed = 42;
};

struct AttackFlags {
  std::string model = "linear";
  std::string attack = "tlf";
  long batch = 1;
  double budget_pct = 400.0;
  long gradmax_grid = 101;
};

void add_data_flags(CLI::App* cmd, DataFlags& d, const char* seed_name) {
  cmd->add_option("--n", d.n, "organic pool size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sep", d.sep, "class separation threshold on x")
      ->capture_default_str()
      ->check(OpenUnit);
  cmd->add_option(seed_name, d.gen_seed, "data generator seed")
      ->capture_default_str();
  cmd->add_option("--label-rule", d.rule, "which side of sep is fake")
      ->capture_default_str()
      ->check(CLI::IsMember({"above_is_fake", "above_is_real"}));
}

void add_train_flags(CLI::App* cmd, TrainFlags& t) {
  cmd->add_option("--lambda", t.lambda, "L2 penalty on non-intercept terms")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--grad-tol", t.grad_tol, "gradient infinity-norm stop")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", t.max_iters, "fit iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--solver", t.solver, "fit algorithm")
      ->capture_default_str()
      ->check(CLI::IsMember({"newton", "gd"}));
}

void add_stream_flags(CLI::App* cmd, StreamFlags& s) {
  cmd->add_option("--policy", s.policy, "per-round data collection")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "fraction"}));
  cmd->add_option("--fraction", s.fraction, "kept fraction under --policy fraction")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--mode", s.mode, "organic stream behavior")
      ->capture_default_str()
      ->check(CLI::IsMember({"static", "drifting"}));
  cmd->add_option("--drift-batch", s.drift_batch,
                  "organic samples per round in drifting mode")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", s.seed, "experiment seed (collection subsampling)")
      ->capture_default_str();
}

void add_attack_flags(CLI::App* cmd, AttackFlags& a) {
  cmd->add_option("--model", a.model, "victim model")
      ->capture_default_str()
      ->check(CLI::IsMember({"linear", "quadratic"}));
  cmd->add_option("--attack", a.attack, "poison strategy")
      ->capture_default_str()
      ->check(CLI::IsMember({"mcm", "tlf", "gradmax"}));
  cmd->add_option("--batch", a.batch, "poison samples injected per round")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--budget-pct", a.budget_pct,
                  "poison budget as percent of the organic pool")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gradmax-grid", a.gradmax_grid,
                  "candidate grid size for the gradmax attack")
      ->capture_default_str()
      ->check(CLI::Range(2l, 1000000l));
}

int degree_of(const std::string& model_name) {
  return model_name == "quadratic" ? 2 : 1;
}

stream::GeneratorConfig to_generator(const DataFlags& d) {
  return stream::GeneratorConfig{d.n, d.sep, d.gen_seed,
                                 d.rule == "above_is_real"
                                     ? stream::LabelRule::above_is_real
                                     : stream::LabelRule::above_is_fake};
}

model::TrainConfig to_train(const TrainFlags& t) {
  return model::TrainConfig{t.lambda, t.max_iters, t.grad_tol,
                            t.solver == "gd" ? model::Solver::gradient_descent
                                             : model::Solver::newton};
}

stream::CollectionPolicy to_policy(const StreamFlags& s) {
  return stream::CollectionPolicy{s.policy == "fraction"
                                      ? stream::CollectionPolicy::Mode::fraction
                                      : stream::CollectionPolicy::Mode::all,
                                  s.fraction};
}

long budget_from_pct(double pct, std::size_t organic_n, long batch) {
  const long budget = std::llround(pct / 100.0 * static_cast<double>(organic_n));
  if (budget < 1) {
    throw std::invalid_argument("--budget-pct: budget rounds to zero samples");
  }
  if (budget < batch) {
    throw std::invalid_argument(
        "--budget-pct: budget is smaller than one --batch injection");
  }
  return budget;
}

// Expand `--config file` into explicit `--key value` tokens for every
// manifest key not already present on the command line. Doing this before
// CLI11 sees the arguments gives exact flag-over-config precedence and
// keeps manifests plain flat key-value files.
std::vector<std::string> merge_config_args(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw std::invalid_argument("--config: needs a file path");
      }
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (config_path.empty()) {
    return args;
  }

  std::vector<std::string> given;
  for (const std::string& a : args) {
    if (a.rfind("--", 0) == 0) {
      given.push_back(a.substr(2, a.find('=') - 2));
    }
  }
  for (const auto& [key, value] : io::read_manifest(config_path)) {
    if (key == "config" ||
        std::find(given.begin(), given.end(), key) != given.end()) {
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

io::Manifest manifest_head(const std::string& command) {
  io::Manifest m;
  m.push_back({"", "poisim " + command + " manifest"});
  m.push_back({"", "version = " + std::string(kVersion)});
  m.push_back({"", "replay: poisim " + command + " --config <this file>"});
  return m;
}

void put(io::Manifest& m, std::string key, std::string value) {
  m.emplace_back(std::move(key), std::move(value));
}

void put_data(io::Manifest& m, const DataFlags& d, const char* seed_key) {
  put(m, "n", std::to_string(d.n));
  put(m, "sep", io::fmt17(d.sep));
  put(m, seed_key, std::to_string(d.gen_seed));
  put(m, "label-rule", d.rule);
}

void put_train(io::Manifest& m, const TrainFlags& t) {
  put(m, "lambda", io::fmt17(t.lambda));
  put(m, "grad-tol", io::fmt17(t.grad_tol));
  put(m, "max-iters", std::to_string(t.max_iters));
  put(m, "solver", t.solver);
}

void put_stream(io::Manifest& m, const StreamFlags& s) {
  put(m, "policy", s.policy);
  put(m, "fraction", io::fmt17(s.fraction));
  put(m, "mode", s.mode);
  put(m, "drift-batch", std::to_string(s.drift_batch));
  put(m, "seed", std::to_string(s.seed));
}

void put_attack(io::Manifest& m, const AttackFlags& a) {
  put(m, "model", a.model);
  put(m, "attack", a.attack);
  put(m, "batch", std::to_string(a.batch));
  put(m, "budget-pct", io::fmt17(a.budget_pct));
  put(m, "gradmax-grid", std::to_string(a.gradmax_grid));
}

// ---- generate ----

struct GenerateArgs {
  DataFlags data;
  std::string out = "data.csv";
};

int run_generate(const GenerateArgs& a) {
  const Dataset d = stream::generate_synthetic(to_generator(a.data));
  io::write_dataset_csv(a.out, d);
  io::Manifest m = manifest_head("generate");
  put_data(m, a.data, "seed");
  put(m, "out", a.out);
  io::write_manifest(a.out + ".manifest", m);
  return 0;
}

// ---- flip ----

struct FlipArgs {
  DataFlags data;
  TrainFlags train;
  StreamFlags stream;
  AttackFlags attack;
  double target_x = 0.0;
  int target_y = -1;  // -1: derive from the label rule
  std::string trace_path;
  std::string manifest_path = "flip.manifest";
};

experiment::ExperimentConfig build_config(const DataFlags& data,
                                          const TrainFlags& train,
                                          const StreamFlags& str,
                                          const AttackFlags& att,
                                          double target_x, int target_y) {
  experiment::ExperimentConfig cfg;
  cfg.generator = to_generator(data);
  cfg.feature_map.degree = degree_of(att.model);
  cfg.train = to_train(train);
  cfg.attack.kind = attack::kind_from_name(att.attack);
  cfg.attack.batch_size = att.batch;
  cfg.attack.budget = budget_from_pct(att.budget_pct, data.n, att.batch);
  cfg.target = experiment::target_for(cfg.generator, target_x);
  if (target_y >= 0) {
    cfg.target.y_true = label_from_int(target_y);
  }
  cfg.policy = to_policy(str);
  cfg.base_seed = str.seed;
  cfg.mode = str.mode == "drifting" ? experiment::StreamMode::drifting
                                    : experiment::StreamMode::static_pool;
  cfg.drift_batch = str.drift_batch;
  cfg.gradmax_grid = att.gradmax_grid;
  return cfg;
}

int run_flip(const FlipArgs& a) {
  const experiment::ExperimentConfig cfg =
      build_config(a.data, a.train, a.stream, a.attack, a.target_x, a.target_y);
  const experiment::FlipResult r = experiment::samples_to_flip(cfg);
  std::cout << io::flip_row(a.target_x, cfg.feature_map.degree, a.attack.attack, r)
            << "\n";
  if (!a.trace_path.empty()) {
    io::write_trace_csv(a.trace_path, r.trace);
  }
  io::Manifest m = manifest_head("flip");
  put_attack(m, a.attack);
  put(m, "target-x", io::fmt17(a.target_x));
  put(m, "target-y", std::to_string(label_value(cfg.target.y_true)));
  put_data(m, a.data, "gen-seed");
  put_train(m, a.train);
  put_stream(m, a.stream);
  if (!a.trace_path.empty()) {
    put(m, "trace", a.trace_path);
  }
  put(m, "manifest", a.manifest_path);
  io::write_manifest(a.manifest_path, m);
  return r.fit_flagged ? 3 : 0;
}

// ---- sweep ----

struct SweepArgs {
  DataFlags data;
  TrainFlags train;
  StreamFlags stream;
  AttackFlags attack;  // model/attack fields unused, lists below instead
  std::vector<std::string> models{"linear", "quadratic"};
  std::vector<std::string> attacks{"mcm", "tlf"};
  std::size_t grid = 39;
  unsigned jobs = 1;
  std::string out = "sweep.csv";
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) {
    if (!out.empty()) {
      out.push_back(',');
    }
    out += s;
  }
  return out;
}

int run_sweep(const SweepArgs& a) {
  std::vector<int> degrees;
  for (const std::string& name : a.models) {
    degrees.push_back(degree_of(name));
  }
  std::vector<attack::Kind> kinds;
  for (const std::string& name : a.attacks) {
    kinds.push_back(attack::kind_from_name(name));
  }
  const std::vector<double> grid = experiment::default_grid(a.grid);

  experiment::ExperimentConfig base = build_config(
      a.data, a.train, a.stream, a.attack, grid.front(), /*target_y=*/-1);
  const std::vector<experiment::SweepRow> rows =
      experiment::sweep_matrix(base, grid, degrees, kinds, a.jobs);

  std::size_t failed = 0;
  for (const experiment::SweepRow& row : rows) {
    if (!row.error.empty()) {
      ++failed;
      std::cerr << "[poisim] sweep point x=" << io::fmt17(row.target_x)
                << " degree=" << row.model_degree
                << " attack=" << attack::kind_name(row.attack)
                << " failed: " << row.error << "\n";
    }
  }
  io::write_sweep_csv(a.out, rows);

  io::Manifest m = manifest_head("sweep");
  put(m, "models", join(a.models));
  put(m, "attacks", join(a.attacks));
  put(m, "grid", std::to_string(a.grid));
  put(m, "jobs", std::to_string(a.jobs));
  put(m, "batch", std::to_string(a.attack.batch));
  put(m, "budget-pct", io::fmt17(a.attack.budget_pct));
  put(m, "gradmax-grid", std::to_string(a.attack.gradmax_grid));
  put_data(m, a.data, "gen-seed");
  put_train(m, a.train);
  put_stream(m, a.stream);
  put(m, "out", a.out);
  io::write_manifest(a.out + ".manifest", m);
  return failed == rows.size() ? 1 : 0;
}

// ---- snapshot ----

struct SnapshotArgs {
  DataFlags data;
  TrainFlags train;
  StreamFlags stream;
  AttackFlags attack;
  double target_x = 0.0;
  int target_y = -1;
  long poison = 1000;
  std::string prefix = "snapshot";
};

int run_snapshot(const SnapshotArgs& a) {
  AttackFlags att = a.attack;
  att.batch = a.poison;  // one injection round of exactly --poison samples
  att.budget_pct = static_cast<double>(a.poison) /
                   static_cast<double>(a.data.n) * 100.0;
  experiment::ExperimentConfig cfg =
      build_config(a.data, a.train, a.stream, att, a.target_x, a.target_y);
  const experiment::Snapshot snap = experiment::snapshot_run(cfg, a.poison);

  io::write_dataset_csv(a.prefix + ".data.csv", snap.data);
  const model::LogisticModel models[] = {snap.linear, snap.quadratic};
  io::write_models_csv(a.prefix + ".models.csv", models);

  io::Manifest m = manifest_head("snapshot");
  put(m, "model", a.attack.model);
  put(m, "attack", a.attack.attack);
  put(m, "target-x", io::fmt17(a.target_x));
  put(m, "target-y", std::to_string(label_value(cfg.target.y_true)));
  put(m, "poison", std::to_string(a.poison));
  put(m, "gradmax-grid", std::to_string(a.attack.gradmax_grid));
  put_data(m, a.data, "gen-seed");
  put_train(m, a.train);
  put_stream(m, a.stream);
  put(m, "out-prefix", a.prefix);
  io::write_manifest(a.prefix + ".manifest", m);
  return snap.fit_flagged ? 3 : 0;
}

// ---- plot ----

struct PlotArgs {
  std::string in;
  std::string out = "plot.svg";
  std::string models_path;
  double target_x = 0.0;
  bool target_x_set = false;
  int target_y = 0;
};

int run_plot(const PlotArgs& a) {
  const std::string text = io::read_text_file(a.in);
  const std::string_view head(text.data(),
                              std::min(text.find('\n'), text.size()));

  std::string rendered;
  if (head == io::kSweepHeader) {
    const std::vector<io::SweepRecord> rows = io::read_sweep_csv(a.in);
    if (rows.empty()) {
      throw io::SchemaError("sweep CSV has a header but no data rows: " + a.in);
    }
    rendered = svg::sweep_plot(rows);
  } else if (head == io::kDatasetHeader) {
    if (a.models_path.empty() || !a.target_x_set) {
      throw io::SchemaError(
          "dataset input needs --models and --target-x for a snapshot plot");
    }
    const Dataset data = io::read_dataset_csv(a.in);
    const std::vector<model::LogisticModel> ms =
        io::read_models_csv(a.models_path);
    const model::LogisticModel* lin = nullptr;
    const model::LogisticModel* quad = nullptr;
    for (const model::LogisticModel& m : ms) {
      (m.feature_map.degree == 1 ? lin : quad) = &m;
    }
    if (lin == nullptr || quad == nullptr) {
      throw io::SchemaError(
          "snapshot plot needs one degree-1 and one degree-2 model line");
    }
    rendered = svg::snapshot_plot(
        data, *lin, *quad, TargetSpec{a.target_x, label_from_int(a.target_y)});
  } else {
    throw io::SchemaError("unrecognized CSV header in " + a.in);
  }

  io::write_text_file(a.out, rendered);
  io::Manifest m = manifest_head("plot");
  put(m, "in", a.in);
  if (!a.models_path.empty()) {
    put(m, "models", a.models_path);
  }
  if (a.target_x_set) {
    put(m, "target-x", io::fmt17(a.target_x));
    put(m, "target-y", std::to_string(a.target_y));
  }
  put(m, "out", a.out);
  io::write_manifest(a.out + ".manifest", m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"targeted data-poisoning simulator for an online news classifier"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // --config is expanded by merge_config_args before CLI11 parses; the
  // options below only document it in --help.
  std::string config_doc;
  const auto add_config_doc = [&config_doc](CLI::App* cmd) {
    cmd->add_option("--config", config_doc,
                    "key-value file of defaults; explicit flags win");
  };

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  add_config_doc(gen);
  add_data_flags(gen, gen_args.data, "--seed");
  gen->add_option("--out", gen_args.out, "output CSV path")->capture_default_str();

  FlipArgs flip_args;
  CLI::App* flip = app.add_subcommand(
      "flip", "poison until the target flips; print the result row");
  add_config_doc(flip);
  add_attack_flags(flip, flip_args.attack);
  flip->add_option("--target-x", flip_args.target_x, "target feature value")
      ->required()
      ->check(ClosedUnit);
  flip->add_option("--target-y", flip_args.target_y,
                   "target true label (default: from the label rule)")
      ->check(CLI::Range(0, 1));
  add_data_flags(flip, flip_args.data, "--gen-seed");
  add_train_flags(flip, flip_args.train);
  add_stream_flags(flip, flip_args.stream);
  flip->add_option("--trace", flip_args.trace_path, "write per-round trace CSV");
  flip->add_option("--manifest", flip_args.manifest_path, "manifest path")
      ->capture_default_str();

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "samples-to-flip across a grid of targets");
  add_config_doc(sweep);
  sweep->add_option("--models", sweep_args.models, "model list")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"linear", "quadratic"}));
  sweep->add_option("--attacks", sweep_args.attacks, "attack list")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"mcm", "tlf", "gradmax"}));
  sweep->add_option("--grid", sweep_args.grid, "number of interior grid points")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sweep_args.jobs, "worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--batch", sweep_args.attack.batch,
                    "poison samples injected per round")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--budget-pct", sweep_args.attack.budget_pct,
                    "poison budget as percent of the organic pool")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--gradmax-grid", sweep_args.attack.gradmax_grid,
                    "candidate grid size for the gradmax attack")
      ->capture_default_str()
      ->check(CLI::Range(2l, 1000000l));
  add_data_flags(sweep, sweep_args.data, "--gen-seed");
  add_train_flags(sweep, sweep_args.train);
  add_stream_flags(sweep, sweep_args.stream);
  sweep->add_option("--out", sweep_args.out, "output CSV path")
      ->capture_default_str();

  SnapshotArgs snap_args;
  CLI::App* snap = app.add_subcommand(
      "snapshot", "inject a fixed poison volume and dump data plus fits");
  add_config_doc(snap);
  add_attack_flags(snap, snap_args.attack);
  snap->add_option("--target-x", snap_args.target_x, "target feature value")
      ->required()
      ->check(ClosedUnit);
  snap->add_option("--target-y", snap_args.target_y,
                   "target true label (default: from the label rule)")
      ->check(CLI::Range(0, 1));
  snap->add_option("--poison", snap_args.poison, "total poison samples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_data_flags(snap, snap_args.data, "--gen-seed");
  add_train_flags(snap, snap_args.train);
  add_stream_flags(snap, snap_args.stream);
  snap->add_option("--out-prefix", snap_args.prefix, "output path prefix")
      ->capture_default_str();

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "render a CSV to a standalone SVG");
  add_config_doc(plot);
  plot->add_option("--in", plot_args.in, "sweep or dataset CSV")->required();
  plot->add_option("--out", plot_args.out, "output SVG path")
      ->capture_default_str();
  plot->add_option("--models", plot_args.models_path,
                   "models CSV (snapshot plots)");
  CLI::Option* ptx =
      plot->add_option("--target-x", plot_args.target_x,
                       "target marker position (snapshot plots)")
          ->check(ClosedUnit);
  plot->add_option("--target-y", plot_args.target_y,
                   "target true label shown in the marker text")
      ->check(CLI::Range(0, 1));

  try {
    std::vector<std::string> args =
        merge_config_args(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());  // CLI11's vector parse wants this
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const io::SchemaError& e) {
    std::cerr << "error: --config: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  plot_args.target_x_set = ptx->count() > 0;

  const char* name = "";
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (gen->parsed()) {
      name = "generate";
      code = run_generate(gen_args);
    } else if (flip->parsed()) {
      name = "flip";
      code = run_flip(flip_args);
    } else if (sweep->parsed()) {
      name = "sweep";
      code = run_sweep(sweep_args);
    } else if (snap->parsed()) {
      name = "snapshot";
      code = run_snapshot(snap_args);
    } else {
      name = "plot";
      code = run_plot(plot_args);
    }
  } catch (const io::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::cerr << "[poisim] " << name << " finished in " << ms << " ms\n";
  return code;
}
