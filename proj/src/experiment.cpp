#include "poisim/experiment.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <utility>

namespace poisim::experiment {

void validate_config(const ExperimentConfig& cfg) {
  stream::validate_generator_config(cfg.generator);
  model::validate_feature_map(cfg.feature_map);
  model::validate_train_config(cfg.train);
  attack::validate_attack_spec(cfg.attack);
  validate_target(cfg.target);
  stream::validate_policy(cfg.policy);
  if (cfg.mode == StreamMode::drifting && cfg.drift_batch < 1) {
    throw std::invalid_argument("drifting mode needs a per-round batch of at least 1");
  }
  if (cfg.attack.kind == attack::Kind::gradmax && cfg.gradmax_grid < 2) {
    throw std::invalid_argument("gradmax grid must have at least 2 points");
  }
}

TargetSpec target_for(const stream::GeneratorConfig& gen, double x) {
  return TargetSpec{x, stream::rule_label(gen.rule, x, gen.separation)};
}

namespace {

std::vector<Sample> make_poison(const ExperimentConfig& cfg,
                                const stream::RoundState& s, long k) {
  switch (cfg.attack.kind) {
    case attack::Kind::mcm:
      return attack::mcm_generate(s.model, s.pool, k);
    case attack::Kind::tlf:
      return attack::tlf_generate(cfg.target, k);
    case attack::Kind::gradmax:
      return attack::gradmax_generate(s.model, cfg.target, k, cfg.gradmax_grid);
  }
  throw std::invalid_argument("unknown attack kind");
}

bool misclassified(const model::LogisticModel& m, const TargetSpec& target) {
  return model::predicted_label(m, target.x_target) != target.y_true;
}

}  // namespace

FlipResult samples_to_flip(const ExperimentConfig& cfg) {
  validate_config(cfg);

  const Dataset pool0 = stream::generate_synthetic(cfg.generator);
  const auto organic = static_cast<double>(pool0.organic_count());
  stream::RoundState s =
      stream::init_round(pool0, cfg.feature_map, cfg.train, cfg.base_seed);

  FlipResult out;
  out.clean_p_target = model::predict_proba(s.model, cfg.target.x_target);
  out.trace.push_back(TraceEntry{0, 0, out.clean_p_target});
  if (misclassified(s.model, cfg.target)) {
    out.flipped = true;  // nothing to inject, the clean model already errs
    return out;
  }

  long cum = 0;
  while (cum < cfg.attack.budget) {
    const long k = std::min(cfg.attack.batch_size, cfg.attack.budget - cum);
    const std::vector<Sample> poison = make_poison(cfg, s, k);
    std::vector<Sample> incoming;
    if (cfg.mode == StreamMode::drifting) {
      stream::GeneratorConfig gen = cfg.generator;
      gen.n = cfg.drift_batch;
      incoming = to_samples(
          stream::synthetic_batch(gen, static_cast<std::uint64_t>(s.t) + 1));
    }
    s = stream::step(std::move(s), incoming, poison, cfg.policy);
    cum += k;
    out.trace.push_back(
        TraceEntry{s.t, cum, model::predict_proba(s.model, cfg.target.x_target)});
    if (misclassified(s.model, cfg.target)) {
      out.flipped = true;
      out.poison_count = cum;
      out.poison_pct = static_cast<double>(cum) / organic * 100.0;
      break;
    }
  }
  if (!out.flipped) {
    out.censored_at = cfg.attack.budget;
  }
  out.fit_flagged = s.any_unconverged_fit;
  return out;
}

std::vector<double> default_grid(std::size_t k) {
  std::vector<double> g(k);
  for (std::size_t i = 0; i < k; ++i) {
    g[i] = static_cast<double>(i + 1) / static_cast<double>(k + 1);
  }
  return g;
}

namespace {

SweepRow run_point(const ExperimentConfig& base, double x, int degree,
                   attack::Kind kind, std::uint64_t child_seed) {
  SweepRow row;
  row.target_x = x;
  row.model_degree = degree;
  row.attack = kind;
  try {
    ExperimentConfig cfg = base;
    cfg.feature_map.degree = degree;
    cfg.attack.kind = kind;
    cfg.target = target_for(base.generator, x);
    cfg.base_seed = child_seed;
    row.result = samples_to_flip(cfg);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_matrix(const ExperimentConfig& base,
                                   std::span<const double> grid,
                                   std::span<const int> degrees,
                                   std::span<const attack::Kind> attacks,
                                   unsigned jobs) {
  if (grid.empty() || degrees.empty() || attacks.empty()) {
    throw std::invalid_argument("sweep needs a non-empty grid, degrees, and attacks");
  }
  for (const double x : grid) {
    validate_target(TargetSpec{x, Label::real_news});
  }

  struct Job {
    double x;
    int degree;
    attack::Kind kind;
    std::uint64_t seed;
  };
  std::vector<Job> todo;
  todo.reserve(grid.size() * degrees.size() * attacks.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t child = stream::derive_seed(base.base_seed, i);
    for (const int degree : degrees) {
      for (const attack::Kind kind : attacks) {
        todo.push_back(Job{grid[i], degree, kind, child});
      }
    }
  }

  std::vector<SweepRow> rows(todo.size());
  const auto run_range = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next.fetch_add(1); i < todo.size();
         i = next.fetch_add(1)) {
      const Job& j = todo[i];
      rows[i] = run_point(base, j.x, j.degree, j.kind, j.seed);
    }
  };

  std::atomic<std::size_t> next{0};
  if (jobs <= 1) {
    run_range(next);
  } else {
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::size_t>(jobs, todo.size());
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&] { run_range(next); });
    }
    for (std::thread& th : pool) {
      th.join();
    }
  }
  return rows;
}

std::vector<FlipResult> sweep_targets(const ExperimentConfig& base,
                                      std::span<const double> grid) {
  const int degrees[] = {base.feature_map.degree};
  const attack::Kind attacks[] = {base.attack.kind};
  std::vector<FlipResult> out;
  out.reserve(grid.size());
  for (SweepRow& row : sweep_matrix(base, grid, degrees, attacks, 1)) {
    if (!row.error.empty()) {
      throw std::runtime_error("sweep point failed: " + row.error);
    }
    out.push_back(std::move(row.result));
  }
  return out;
}

Snapshot snapshot_run(const ExperimentConfig& cfg, long poison_total) {
  validate_config(cfg);
  if (poison_total < 1) {
    throw std::invalid_argument("snapshot poison total must be at least 1");
  }

  const Dataset pool0 = stream::generate_synthetic(cfg.generator);
  stream::RoundState s =
      stream::init_round(pool0, cfg.feature_map, cfg.train, cfg.base_seed);
  ExperimentConfig batch_cfg = cfg;
  batch_cfg.attack.batch_size = poison_total;
  batch_cfg.attack.budget = poison_total;
  const std::vector<Sample> poison = make_poison(batch_cfg, s, poison_total);
  s = stream::step(std::move(s), {}, poison, cfg.policy);

  Snapshot snap;
  snap.data = std::move(s.collected);
  snap.target = cfg.target;
  auto lin = model::fit(snap.data, model::FeatureMap{1}, cfg.train);
  auto quad = model::fit(snap.data, model::FeatureMap{2}, cfg.train);
  snap.fit_flagged = s.any_unconverged_fit || !lin.report.converged ||
                     !quad.report.converged;
  snap.linear = std::move(lin.model);
  snap.quadratic = std::move(quad.model);
  return snap;
}

}  // namespace poisim::experiment
