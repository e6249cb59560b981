#include "poisim/stream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace poisim::stream {

Label rule_label(LabelRule rule, double x, double separation) {
  const bool above = x > separation;
  const bool fake = rule == LabelRule::above_is_fake ? above : !above;
  return fake ? Label::fake_news : Label::real_news;
}

void validate_generator_config(const GeneratorConfig& cfg) {
  if (cfg.n < 1) {
    throw std::invalid_argument("generator n must be at least 1");
  }
  if (!(cfg.separation > 0.0) || !(cfg.separation < 1.0)) {
    throw std::invalid_argument("separation must lie strictly inside (0, 1)");
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Dataset generate_synthetic(const GeneratorConfig& cfg) {
  validate_generator_config(cfg);
  std::mt19937_64 rng(cfg.seed);
  Dataset d;
  d.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double x = uniform01(rng);
    d.append(Sample{x, rule_label(cfg.rule, x, cfg.separation),
                    Provenance::organic});
  }
  return d;
}

Dataset synthetic_batch(const GeneratorConfig& cfg, std::uint64_t t) {
  GeneratorConfig child = cfg;
  child.seed = derive_seed(cfg.seed, t);
  return generate_synthetic(child);
}

void validate_policy(const CollectionPolicy& policy) {
  if (policy.mode == CollectionPolicy::Mode::fraction &&
      (!(policy.q > 0.0) || !(policy.q <= 1.0))) {
    throw std::invalid_argument("collection fraction must lie in (0, 1]");
  }
}

RoundState init_round(const Dataset& d0, const model::FeatureMap& fm,
                      const model::TrainConfig& cfg, std::uint64_t stream_seed) {
  RoundState s;
  s.pool = d0;
  s.collected = d0;
  s.groups = model::GroupedCounts::from_dataset(d0);
  auto fitted = model::fit_grouped(s.groups, fm, cfg);
  s.model = std::move(fitted.model);
  s.last_fit = std::move(fitted.report);
  s.any_unconverged_fit = !s.last_fit.converged;
  s.train = cfg;
  s.rng.seed(stream_seed);
  return s;
}

namespace {

// Indices of the kept subset of an m-sample batch, ascending. The all
// policy keeps everything without touching the generator; fraction keeps
// floor(q*m) drawn uniformly without replacement (partial Fisher-Yates).
std::vector<std::size_t> collect_indices(const CollectionPolicy& policy,
                                         std::size_t m,
                                         std::mt19937_64& rng) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (policy.mode == CollectionPolicy::Mode::all || m == 0) {
    return idx;
  }
  const auto keep =
      static_cast<std::size_t>(std::floor(policy.q * static_cast<double>(m)));
  for (std::size_t i = 0; i < keep; ++i) {
    // Bounded draw via rejection keeps the distribution exact and the
    // stream identical on every platform.
    const std::uint64_t span = m - i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(idx[i], idx[i + r % span]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

RoundState step(RoundState s, std::span<const Sample> incoming,
                std::span<const Sample> poison,
                const CollectionPolicy& policy) {
  validate_policy(policy);
  for (const Sample& smp : incoming) {
    if (smp.provenance != Provenance::organic) {
      throw std::invalid_argument("step: incoming sample not marked organic");
    }
  }
  for (const Sample& smp : poison) {
    if (smp.provenance != Provenance::poison) {
      throw std::invalid_argument("step: poison sample not marked poison");
    }
  }

  s.pool.append(incoming);
  s.pool.append(poison);

  const std::size_t m = incoming.size() + poison.size();
  const auto batch_at = [&](std::size_t i) -> const Sample& {
    return i < incoming.size() ? incoming[i] : poison[i - incoming.size()];
  };
  for (const std::size_t i : collect_indices(policy, m, s.rng)) {
    const Sample& smp = batch_at(i);
    s.collected.append(smp);
    s.groups.add(smp.x, smp.y);
  }

  auto fitted = model::fit_grouped(s.groups, s.model.feature_map, s.train,
                                   s.model.beta);
  s.model = std::move(fitted.model);
  s.last_fit = std::move(fitted.report);
  s.any_unconverged_fit = s.any_unconverged_fit || !s.last_fit.converged;
  ++s.t;
  return s;
}

}  // namespace poisim::stream
