#pragma once
// Samples-to-flip measurement for a single target, target sweeps over a
// grid, and fixed-volume snapshot runs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "poisim/attack.hpp"
#include "poisim/core.hpp"
#include "poisim/model.hpp"
#include "poisim/stream.hpp"

namespace poisim::experiment {

/// static_pool: one organic batch up front, then poison-only rounds (the
/// default; matches a platform retraining on a fixed corpus). drifting:
/// every round also brings a fresh organic batch.
enum class StreamMode : std::uint8_t { static_pool, drifting };

struct ExperimentConfig {
  stream::GeneratorConfig generator;
  model::FeatureMap feature_map{1};
  model::TrainConfig train;
  attack::AttackSpec attack{attack::Kind::tlf, 1, 40000};
  TargetSpec target{0.25, Label::real_news};
  stream::CollectionPolicy policy;
  std::uint64_t base_seed = 42;
  StreamMode mode = StreamMode::static_pool;
  std::size_t drift_batch = 100;  // organic samples per round in drifting mode
  long gradmax_grid = 101;        // candidate grid for the gradmax attack
};

void validate_config(const ExperimentConfig& cfg);

/// Target at x with the true label the generator's rule assigns there.
TargetSpec target_for(const stream::GeneratorConfig& gen, double x);

struct TraceEntry {
  long t = 0;
  long poison_total = 0;
  double p_target = 0.0;  // model's P(fake) at the target after round t
};

struct FlipResult {
  bool flipped = false;
  long poison_count = 0;    // meaningful iff flipped
  double poison_pct = 0.0;  // poison_count / organic_count * 100
  long censored_at = 0;     // exhausted budget, meaningful iff !flipped
  double clean_p_target = 0.0;  // P(fake) at the target before any poison
  bool fit_flagged = false;     // some refit hit max_iters
  std::vector<TraceEntry> trace;
};

/// Run the online loop injecting cfg.attack's poison each round until the
/// model misclassifies the target (reporting the cumulative poison count)
/// or the budget runs out (censored). A target the clean model already
/// misclassifies reports count 0. With batch size 1 the count is exact;
/// with batch size k it is exact to within k-1.
FlipResult samples_to_flip(const ExperimentConfig& cfg);

/// samples_to_flip at each grid x in order, target label from the
/// generator rule, per-point seed derived from (base_seed, grid index).
std::vector<FlipResult> sweep_targets(const ExperimentConfig& base,
                                      std::span<const double> grid);

/// The default sweep grid: k interior points i/(k+1), i = 1..k.
std::vector<double> default_grid(std::size_t k);

/// One sweep CSV row. `error` is empty unless the point failed outright;
/// a failed point never aborts the rest of the sweep.
struct SweepRow {
  double target_x = 0.0;
  int model_degree = 1;
  attack::Kind attack = attack::Kind::tlf;
  FlipResult result;
  std::string error;
};

/// Full sweep over grid x degrees x attacks, rows in exactly that nesting
/// order. Each point is a pure function of (base config, x, degree,
/// attack, derived seed), so `jobs` worker threads change nothing but
/// wall-clock time.
std::vector<SweepRow> sweep_matrix(const ExperimentConfig& base,
                                   std::span<const double> grid,
                                   std::span<const int> degrees,
                                   std::span<const attack::Kind> attacks,
                                   unsigned jobs);

struct Snapshot {
  model::LogisticModel linear;
  model::LogisticModel quadratic;
  Dataset data;  // the poisoned training set both models saw
  TargetSpec target;
  bool fit_flagged = false;
};

/// Inject exactly poison_total samples in one round against a victim of
/// cfg's degree, then fit both degrees from zeros on the identical
/// poisoned data for side-by-side plotting.
Snapshot snapshot_run(const ExperimentConfig& cfg, long poison_total);

}  // namespace poisim::experiment
