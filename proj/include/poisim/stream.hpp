#pragma once
// Synthetic news generation and the online-learning loop: each round new
// samples arrive (A), poison is injected (B), a subset is collected into
// the training data (C), and the model is refit (D).

#include <cstdint>
#include <random>
#include <span>

#include "poisim/core.hpp"
#include "poisim/model.hpp"

namespace poisim::stream {

/// Which side of the separation threshold carries the fake label.
/// above_is_fake: y = 1 iff x > separation. above_is_real: y = 1 iff
/// x <= separation. The boundary sample itself always gets label 0's side
/// under above_is_fake, making the threshold strict.
enum class LabelRule : std::uint8_t { above_is_fake, above_is_real };

Label rule_label(LabelRule rule, double x, double separation);

struct GeneratorConfig {
  std::size_t n = 10000;
  double separation = 0.5;
  std::uint64_t seed = 42;
  LabelRule rule = LabelRule::above_is_fake;
};

void validate_generator_config(const GeneratorConfig& cfg);

/// Uniform draw on [0, 1) from the top 53 bits of the generator output.
/// Pinned here rather than delegated to the standard library so that the
/// sampled values are identical across compilers.
double uniform01(std::mt19937_64& rng);

/// Child seed for stream index `index`, splitmix64-style. Distinct indices
/// give statistically independent generators even for adjacent bases.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// n organic samples, x ~ U[0,1) i.i.d. from the seeded generator, labeled
/// by the threshold rule.
Dataset generate_synthetic(const GeneratorConfig& cfg);

/// Round-t organic batch for the drifting-stream mode: same generator
/// settings, seed derived from (cfg.seed, t).
Dataset synthetic_batch(const GeneratorConfig& cfg, std::uint64_t t);

/// How much of each round's arriving data the platform keeps for training.
struct CollectionPolicy {
  enum class Mode : std::uint8_t { all, fraction };
  Mode mode = Mode::all;
  double q = 1.0;  // kept fraction, used only in fraction mode
};

void validate_policy(const CollectionPolicy& policy);

/// State of the loop at round t. `pool` is everything that has arrived,
/// `collected` the subset kept for training; under the all policy they
/// coincide. `groups` mirrors `collected` as multiplicity counts so each
/// refit costs O(distinct x) rather than O(samples).
struct RoundState {
  long t = 0;
  Dataset pool;
  Dataset collected;
  model::LogisticModel model;
  model::TrainConfig train;
  model::GroupedCounts groups;
  model::FitReport last_fit;
  std::mt19937_64 rng;  // consumed only by the fraction policy
  bool any_unconverged_fit = false;
};

/// Round 0: pool = collected = d0, model fit from zeros.
/// `stream_seed` seeds the subsampling generator.
RoundState init_round(const Dataset& d0, const model::FeatureMap& fm,
                      const model::TrainConfig& cfg,
                      std::uint64_t stream_seed = 0);

/// One round: append incoming then poison to the pool, collect the policy
/// subset of that batch into the training data, refit warm-started from
/// the previous coefficients. Incoming samples must carry organic
/// provenance and poison samples poison provenance.
RoundState step(RoundState s, std::span<const Sample> incoming,
                std::span<const Sample> poison,
                const CollectionPolicy& policy);

}  // namespace poisim::stream
