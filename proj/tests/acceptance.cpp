// Acceptance gate for the poisoning simulator. Runs ten end-to-end checks
// and prints exactly one line per criterion:
//
//   PASS criterion N (tag): measurements
//   FAIL criterion N (tag): measurements
//
// Exit status is the number of failed criteria. Tolerances, budgets, and
// golden values are pinned here in code. Criterion 4 states the expected
// cost ordering between the two attacks on the linear victim; see the
// README's design notes for what the measured ordering actually is.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "poisim/attack.hpp"
#include "poisim/core.hpp"
#include "poisim/experiment.hpp"
#include "poisim/io.hpp"
#include "poisim/model.hpp"
#include "poisim/stream.hpp"

namespace {

using namespace poisim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

int g_failures = 0;

void report(int id, const char* tag, bool pass, const std::string& detail) {
  std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, tag,
              detail.c_str());
  std::fflush(stdout);
  g_failures += pass ? 0 : 1;
}

double correct_prob(double p_fake, Label y_true) {
  return y_true == Label::fake_news ? p_fake : 1.0 - p_fake;
}

// Results shared between criteria so the expensive sweeps run once.
struct Shared {
  std::vector<experiment::SweepRow> ordering_rows;   // criterion 4
  std::vector<experiment::SweepRow> resilience_rows; // criterion 5
  struct GoldenRun {
    double x;
    Label y_true;
    int degree;
    experiment::FlipResult result;
  };
  std::vector<GoldenRun> golden_runs;                // criterion 6
};

experiment::ExperimentConfig default_config() {
  experiment::ExperimentConfig cfg;  // n=10000, sep 0.5, seed 42, tlf
  cfg.attack.batch_size = 1;
  cfg.attack.budget = 40000;  // 400 percent of the organic pool
  return cfg;
}

// ---- criterion 1: the clean fit is sane and beats a grid search ----

void criterion_clean_fit() {
  const auto t0 = Clock::now();
  const experiment::ExperimentConfig cfg = default_config();
  const Dataset d = stream::generate_synthetic(cfg.generator);
  const auto g = model::GroupedCounts::from_dataset(d);

  const auto lin = model::fit_grouped(g, model::FeatureMap{1}, cfg.train);
  const auto quad = model::fit_grouped(g, model::FeatureMap{2}, cfg.train);
  const double acc1 = model::training_accuracy(lin.model, d);
  const double acc2 = model::training_accuracy(quad.model, d);
  const double boundary = -lin.model.beta[0] / lin.model.beta[1];

  // Independent oracle: coarse grid over the linear coefficients, scored
  // with the same penalized loss. The optimizer must do at least as well.
  double grid_best = std::numeric_limits<double>::infinity();
  model::LogisticModel probe{model::FeatureMap{1}, Eigen::VectorXd(2)};
  for (double b1 = 0.0; b1 <= 120.0; b1 += 2.0) {
    for (double b0 = -80.0; b0 <= 10.0; b0 += 1.0) {
      probe.beta << b0, b1;
      grid_best = std::min(grid_best, model::loss_grouped(probe, g, cfg.train));
    }
  }
  const double fit_loss = model::loss_grouped(lin.model, g, cfg.train);

  const double elapsed = seconds_since(t0);
  const bool pass = lin.report.converged && quad.report.converged &&
                    acc1 >= 0.99 && acc2 >= 0.99 && boundary >= 0.48 &&
                    boundary <= 0.52 && fit_loss <= grid_best + 1e-12 &&
                    elapsed < 5.0;
  report(1, "clean fit", pass,
         fmt("accuracy %.4f/%.4f (need 0.99), boundary %.4f (need [0.48,0.52]), "
             "fit loss %.6f vs grid best %.6f, %.2fs (budget 5s)",
             acc1, acc2, boundary, fit_loss, grid_best, elapsed));
}

// ---- criterion 2: analytic gradient vs central differences ----

void criterion_gradient() {
  const auto t0 = Clock::now();
  const double h = 1e-6;
  double worst = 0.0;
  long checked = 0;

  for (int degree = 1; degree <= 2; ++degree) {
    const model::FeatureMap fm{degree};
    for (int trial = 0; trial < 20; ++trial) {
      std::mt19937_64 rng(9000 + degree * 100 + trial);
      const auto u = [&rng] {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
      };
      model::LogisticModel m{fm, Eigen::VectorXd(fm.dim())};
      for (int i = 0; i < fm.dim(); ++i) {
        m.beta[i] = (u() - 0.5) * 6.0;
      }
      Dataset d;
      for (int i = 0; i < 60; ++i) {
        d.append(Sample{u(), u() < 0.5 ? Label::real_news : Label::fake_news,
                        Provenance::organic});
      }
      model::TrainConfig tc;
      const Eigen::VectorXd grad = model::gradient(m, d, tc);
      for (int i = 0; i < fm.dim(); ++i) {
        model::LogisticModel lo = m;
        model::LogisticModel hi = m;
        lo.beta[i] -= h;
        hi.beta[i] += h;
        const double fd =
            (model::loss(hi, d, tc) - model::loss(lo, d, tc)) / (2.0 * h);
        worst = std::max(worst,
                         std::abs(grad[i] - fd) / std::max(std::abs(fd), 1e-3));
        ++checked;
      }
    }
  }

  const double elapsed = seconds_since(t0);
  const bool pass = worst <= 1e-6 && elapsed < 1.0;
  report(2, "gradient check", pass,
         fmt("%ld coordinates over 20 pairs per degree, worst relative error "
             "%.3e (need 1e-6), %.3fs (budget 1s)",
             checked, worst, elapsed));
}

// ---- criterion 3: link-function identities ----

void criterion_links() {
  double worst_inverse = 0.0;
  for (const double p : {1e-6, 0.3, 0.5, 0.9, 1.0 - 1e-6}) {
    worst_inverse =
        std::max(worst_inverse, std::abs(model::sigmoid(model::logit(p)) - p));
  }
  const bool half_exact = model::sigmoid(0.0) == 0.5;
  const double ln3_err = std::abs(model::logit(0.75) - std::log(3.0));

  const bool pass = worst_inverse <= 1e-12 && half_exact && ln3_err <= 1e-15;
  report(3, "link identities", pass,
         fmt("sigmoid(logit(p)) off by %.3e (need 1e-12), sigmoid(0)==0.5 %s, "
             "logit(0.75) vs ln 3 off by %.3e (need 1e-15)",
             worst_inverse, half_exact ? "exact" : "INEXACT", ln3_err));
}

// ---- criterion 4: attack cost ordering on the linear victim ----

void criterion_cost_ordering(Shared& shared) {
  const auto t0 = Clock::now();
  const experiment::ExperimentConfig base = default_config();
  const std::vector<double> grid = experiment::default_grid(39);
  const std::vector<int> degrees{1};
  const std::vector<attack::Kind> kinds{attack::Kind::mcm, attack::Kind::tlf};
  shared.ordering_rows = experiment::sweep_matrix(base, grid, degrees, kinds, 1);

  long both_flipped = 0;
  long mcm_cheaper = 0;
  long errors = 0;
  for (std::size_t i = 0; i + 1 < shared.ordering_rows.size(); i += 2) {
    const auto& mcm = shared.ordering_rows[i];
    const auto& tlf = shared.ordering_rows[i + 1];
    if (!mcm.error.empty() || !tlf.error.empty()) {
      ++errors;
      continue;
    }
    if (mcm.result.flipped && tlf.result.flipped) {
      ++both_flipped;
      mcm_cheaper += mcm.result.poison_count <= tlf.result.poison_count;
    }
  }

  const double elapsed = seconds_since(t0);
  const double frac =
      both_flipped > 0 ? static_cast<double>(mcm_cheaper) /
                             static_cast<double>(both_flipped)
                       : 0.0;
  const bool pass = errors == 0 && both_flipped > 0 && frac >= 0.8 &&
                    elapsed < 600.0;
  report(4, "attack cost ordering", pass,
         fmt("mcm needed <= tlf on %ld of %ld co-flipped targets (%.1f%%, "
             "need 80%%), %ld errors, %.1fs single-threaded (budget 600s)",
             mcm_cheaper, both_flipped, frac * 100.0, errors, elapsed));
}

// ---- criterion 5: the quadratic victim resists mcm at a fixed volume ----

void criterion_quadratic_resilience(Shared& shared) {
  const auto t0 = Clock::now();
  experiment::ExperimentConfig base = default_config();
  base.attack.budget = 1000;
  const std::vector<double> grid = experiment::default_grid(39);
  const std::vector<int> degrees{1, 2};
  const std::vector<attack::Kind> kinds{attack::Kind::mcm, attack::Kind::tlf};
  shared.resilience_rows =
      experiment::sweep_matrix(base, grid, degrees, kinds, 1);

  // Go through the CSV on disk so the check covers what a reader of the
  // sweep output would see, not just in-memory state.
  const fs::path dir =
      fs::temp_directory_path() / ("poisim_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path csv = dir / "resilience_sweep.csv";
  io::write_sweep_csv(csv, shared.resilience_rows);
  const std::vector<io::SweepRecord> recs = io::read_sweep_csv(csv);

  std::optional<double> found_x;
  for (const double x : grid) {
    bool tlf_lin = false, tlf_quad = false, mcm_quad_flipped = true;
    for (const io::SweepRecord& r : recs) {
      if (r.target_x != x) {
        continue;
      }
      if (r.attack == "tlf" && r.model_degree == 1) {
        tlf_lin = r.flipped;
      } else if (r.attack == "tlf" && r.model_degree == 2) {
        tlf_quad = r.flipped;
      } else if (r.attack == "mcm" && r.model_degree == 2) {
        mcm_quad_flipped = r.flipped;
      }
    }
    if (tlf_lin && tlf_quad && !mcm_quad_flipped) {
      found_x = x;
      break;
    }
  }

  bool snapshot_ok = false;
  if (found_x) {
    experiment::ExperimentConfig cfg = default_config();
    cfg.attack.kind = attack::Kind::mcm;
    cfg.target = experiment::target_for(cfg.generator, *found_x);
    const experiment::Snapshot snap = experiment::snapshot_run(cfg, 1000);
    snapshot_ok =
        model::predicted_label(snap.quadratic, *found_x) == cfg.target.y_true &&
        !snap.fit_flagged;
  }
  fs::remove_all(dir);

  const double elapsed = seconds_since(t0);
  const bool pass = found_x.has_value() && snapshot_ok && elapsed < 120.0;
  report(5, "quadratic resilience", pass,
         found_x ? fmt("at x=%.3f, 1000 tlf samples flip both models while "
                       "1000 mcm samples leave the quadratic correct "
                       "(snapshot %s), %.1fs (budget 120s)",
                       *found_x, snapshot_ok ? "confirms" : "CONTRADICTS",
                       elapsed)
                 : fmt("no qualifying grid point found, %.1fs", elapsed));
}

// ---- criterion 6: frozen flip counts, confirmed by an independent oracle ----

// The pool after t rounds of the copy attack is a pure function of t, so
// the first flipping round equals the smallest one-shot copy count whose
// cold refit misclassifies the target. That gives a sequential-free oracle:
// confirm 4x the pool flips, then bisect for the minimum.
bool oneshot_flips(const model::GroupedCounts& organic,
                   const experiment::ExperimentConfig& cfg, long copies) {
  model::GroupedCounts g = organic;
  if (copies > 0) {
    g.add(cfg.target.x_target, flip(cfg.target.y_true),
          static_cast<double>(copies));
  }
  const auto fit = model::fit_grouped(g, cfg.feature_map, cfg.train);
  return model::predicted_label(fit.model, cfg.target.x_target) !=
         cfg.target.y_true;
}

void criterion_frozen_counts(Shared& shared) {
  const auto t0 = Clock::now();
  struct Golden {
    double x;
    int degree;
    long count;
  };
  // Measured once with the oracle below, frozen thereafter. A mismatch
  // means the data pipeline or the optimizer changed behavior.
  const Golden goldens[] = {
      {0.25, 1, 4203}, {0.25, 2, 4337}, {0.75, 1, 4382}, {0.75, 2, 4385}};

  std::string detail;
  bool pass = true;
  for (const Golden& gold : goldens) {
    experiment::ExperimentConfig cfg = default_config();
    cfg.feature_map.degree = gold.degree;
    cfg.target = experiment::target_for(cfg.generator, gold.x);

    const experiment::FlipResult r = experiment::samples_to_flip(cfg);
    shared.golden_runs.push_back(
        {gold.x, cfg.target.y_true, gold.degree, r});

    const Dataset organic = stream::generate_synthetic(cfg.generator);
    const auto g = model::GroupedCounts::from_dataset(organic);
    const bool brute_ok = oneshot_flips(g, cfg, 4 * 10000);
    long lo = 0, hi = 4 * 10000;  // clean model correct, 4x pool flips
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (oneshot_flips(g, cfg, mid) ? hi : lo) = mid;
    }

    const bool ok =
        r.flipped && brute_ok && r.poison_count == gold.count && hi == gold.count;
    pass = pass && ok;
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += fmt("x=%.2f deg%d: run %ld, oracle %ld, golden %ld%s", gold.x,
                  gold.degree, r.poison_count, hi, gold.count,
                  ok ? "" : " MISMATCH");
  }
  detail += fmt("; %.1fs", seconds_since(t0));
  report(6, "frozen flip counts", pass, detail);
}

// ---- criterion 7: tlf traces never help the target ----

void criterion_trace_monotonicity(const Shared& shared) {
  double worst_rise = 0.0;
  long traces = 0;
  const stream::GeneratorConfig gen;  // targets' true labels come from here

  const auto scan = [&](const experiment::FlipResult& r, Label y_true) {
    ++traces;
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      const double rise = correct_prob(r.trace[i].p_target, y_true) -
                          correct_prob(r.trace[i - 1].p_target, y_true);
      worst_rise = std::max(worst_rise, rise);
    }
  };

  for (const auto* rows : {&shared.ordering_rows, &shared.resilience_rows}) {
    for (const experiment::SweepRow& row : *rows) {
      if (row.attack == attack::Kind::tlf && row.error.empty()) {
        scan(row.result, experiment::target_for(gen, row.target_x).y_true);
      }
    }
  }
  for (const Shared::GoldenRun& run : shared.golden_runs) {
    scan(run.result, run.y_true);
  }

  const bool pass = traces > 0 && worst_rise <= 1e-6;
  report(7, "trace monotonicity", pass,
         fmt("%ld tlf traces, worst per-step rise in the target's "
             "correct-class probability %.3e (need <= 1e-6)",
             traces, worst_rise));
}

// ---- criterion 8: command line reruns are byte-identical ----

struct CommandResult {
  int code = -1;
  std::string out;
};

CommandResult run_cli(const std::string& bin, const std::string& args) {
  CommandResult r;
  FILE* pipe = ::popen((bin + " " + args + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    r.out.append(buf, got);
  }
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void criterion_determinism() {
  const auto t0 = Clock::now();
  const char* bin = std::getenv("POISIM_BIN");
  if (bin == nullptr) {
    report(8, "determinism", false, "POISIM_BIN is not set");
    return;
  }

  const fs::path dir = fs::temp_directory_path() /
                       ("poisim_accept_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto p = [&dir](const char* name) { return (dir / name).string(); };

  const std::string small = "--n 300 --gen-seed 7";
  struct Step {
    std::string args;
    std::vector<std::string> outputs;
    std::string stdout_first;  // filled on the first run
  };
  std::vector<Step> steps;
  steps.push_back({"generate --n 300 --seed 7 --out " + p("g.csv"),
                   {p("g.csv"), p("g.csv.manifest")}});
  steps.push_back({"flip --target-x 0.3 --attack tlf " + small + " --trace " +
                       p("t.csv") + " --manifest " + p("f.manifest"),
                   {p("t.csv"), p("f.manifest")}});
  steps.push_back({"sweep --grid 3 --models linear,quadratic --attacks mcm,tlf "
                   "--budget-pct 400 " +
                       small + " --jobs 1 --out " + p("s.csv"),
                   {p("s.csv"), p("s.csv.manifest")}});
  steps.push_back({"snapshot --target-x 0.3 --poison 50 " + small +
                       " --out-prefix " + p("snap"),
                   {p("snap.data.csv"), p("snap.models.csv"), p("snap.manifest")}});
  steps.push_back({"plot --in " + p("s.csv") + " --out " + p("s.svg"),
                   {p("s.svg"), p("s.svg.manifest")}});
  steps.push_back({"plot --in " + p("snap.data.csv") + " --models " +
                       p("snap.models.csv") + " --target-x 0.3 --out " +
                       p("snap.svg"),
                   {p("snap.svg")}});

  bool pass = true;
  std::string detail;
  long files_compared = 0;
  for (Step& step : steps) {
    std::vector<std::string> first_bytes;
    for (int run = 0; run < 2 && pass; ++run) {
      const CommandResult r = run_cli(bin, step.args);
      if (r.code != 0) {
        pass = false;
        detail = fmt("'%s' exited %d", step.args.c_str(), r.code);
        break;
      }
      if (run == 0) {
        step.stdout_first = r.out;
        for (const std::string& f : step.outputs) {
          first_bytes.push_back(io::read_text_file(f));
        }
      } else {
        if (r.out != step.stdout_first) {
          pass = false;
          detail = fmt("stdout differs across reruns of '%s'", step.args.c_str());
        }
        for (std::size_t i = 0; i < step.outputs.size() && pass; ++i) {
          ++files_compared;
          if (io::read_text_file(step.outputs[i]) != first_bytes[i]) {
            pass = false;
            detail = fmt("%s differs across reruns", step.outputs[i].c_str());
          }
        }
      }
    }
    if (!pass) {
      break;
    }
  }

  // Worker count must not leak into the sweep output.
  if (pass) {
    const std::string sweep8 =
        "sweep --grid 3 --models linear,quadratic --attacks mcm,tlf "
        "--budget-pct 400 " +
        small + " --jobs 8 --out " + p("s8.csv");
    const CommandResult r = run_cli(bin, sweep8);
    if (r.code != 0) {
      pass = false;
      detail = fmt("jobs-8 sweep exited %d", r.code);
    } else if (io::read_text_file(p("s8.csv")) !=
               io::read_text_file(p("s.csv"))) {
      pass = false;
      detail = "sweep CSV differs between --jobs 1 and --jobs 8";
    } else {
      ++files_compared;
    }
  }

  fs::remove_all(dir);
  if (pass) {
    detail = fmt("%zu commands rerun, %ld output files byte-identical, "
                 "jobs 1 vs 8 sweep identical, %.1fs",
                 steps.size(), files_compared, seconds_since(t0));
  }
  report(8, "determinism", pass, detail);
}

// ---- criterion 9: nothing already in the training data ever changes ----

void criterion_immutability() {
  stream::GeneratorConfig gen;
  gen.n = 500;
  const Dataset d0 = stream::generate_synthetic(gen);
  const TargetSpec target = experiment::target_for(gen, 0.3);
  const TargetSpec target_before = target;
  const stream::CollectionPolicy policy;

  stream::RoundState st =
      stream::init_round(d0, model::FeatureMap{1}, model::TrainConfig{});
  std::vector<Sample> prev = to_samples(st.pool);

  bool pass = true;
  std::string detail;
  for (long t = 1; t <= 60 && pass; ++t) {
    const std::vector<Sample> poison = attack::tlf_generate(target, 1);
    st = stream::step(std::move(st), {}, poison, policy);
    const std::vector<Sample> pool = to_samples(st.pool);
    if (pool.size() != prev.size() + 1) {
      pass = false;
      detail = fmt("round %ld: pool grew by %zu, expected 1", t,
                   pool.size() - prev.size());
      break;
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (!(pool[i] == prev[i])) {
        pass = false;
        detail = fmt("round %ld: record %zu changed after insertion", t, i);
        break;
      }
    }
    const Sample& added = pool.back();
    if (pass && !(added.x == target.x_target && added.y == flip(target.y_true) &&
                  added.provenance == Provenance::poison)) {
      pass = false;
      detail = fmt("round %ld: appended poison record is wrong", t);
    }
    if (pass && (st.pool.organic_count() != 500 ||
                 st.pool.poison_count() != static_cast<std::size_t>(t))) {
      pass = false;
      detail = fmt("round %ld: provenance counts drifted", t);
    }
    prev = pool;
  }
  if (pass && !(target == target_before)) {
    pass = false;
    detail = "target spec changed during the run";
  }
  if (pass) {
    detail = "60 rounds: every earlier record bit-identical, provenance "
             "counts conserved, target spec untouched";
  }
  report(9, "immutability", pass, detail);
}

// ---- criterion 10: reported counts are exact minima per round budget ----

void criterion_count_exactness(const Shared& shared) {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;

  for (const attack::Kind kind :
       {attack::Kind::mcm, attack::Kind::tlf, attack::Kind::gradmax}) {
    experiment::ExperimentConfig cfg = default_config();
    cfg.attack.kind = kind;
    cfg.target = experiment::target_for(cfg.generator, 0.25);

    // The tlf run at this target already exists from the golden criterion.
    std::optional<experiment::FlipResult> first;
    if (kind == attack::Kind::tlf) {
      for (const Shared::GoldenRun& run : shared.golden_runs) {
        if (run.x == 0.25 && run.degree == 1) {
          first = run.result;
        }
      }
    }
    if (!first) {
      first = experiment::samples_to_flip(cfg);
    }
    if (!first->flipped || first->poison_count < 2) {
      pass = false;
      detail +=
          fmt("%s did not flip within budget; ", attack::kind_name(kind).c_str());
      continue;
    }

    experiment::ExperimentConfig tight = cfg;
    tight.attack.budget = first->poison_count - 1;
    const experiment::FlipResult rerun = experiment::samples_to_flip(tight);
    const bool ok =
        !rerun.flipped && rerun.censored_at == first->poison_count - 1;
    pass = pass && ok;
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += fmt("%s: %ld flips, %ld does not%s",
                  attack::kind_name(kind).c_str(), first->poison_count,
                  first->poison_count - 1, ok ? "" : " VIOLATED");
  }
  detail += fmt("; %.1fs", seconds_since(t0));
  report(10, "count exactness", pass, detail);
}

}  // namespace

int main() {
  Shared shared;
  criterion_clean_fit();
  criterion_gradient();
  criterion_links();
  criterion_cost_ordering(shared);
  criterion_quadratic_resilience(shared);
  criterion_frozen_counts(shared);
  criterion_trace_monotonicity(shared);
  criterion_determinism();
  criterion_immutability();
  criterion_count_exactness(shared);
  return g_failures;
}
