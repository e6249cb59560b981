#pragma once
// Poison generators. Each returns the batch injected in one round; none
// ever touches the target sample itself.

#include <cstdint>
#include <string>
#include <vector>

#include "poisim/core.hpp"
#include "poisim/model.hpp"

namespace poisim::attack {

enum class Kind : std::uint8_t { mcm, tlf, gradmax };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);  // rejects unknown names

struct AttackSpec {
  Kind kind = Kind::tlf;
  long batch_size = 1;  // poison samples injected per round
  long budget = 1;      // max total poison over a run
};

void validate_attack_spec(const AttackSpec& spec);  // sizes >= 1, budget >= batch

/// Most Confidence Mislabeling: copy the organic sample the current model
/// classifies most confidently and emit k copies labeled opposite to the
/// model's prediction on it. Ties broken toward smaller x, then earlier
/// insertion index. Re-run against each round's model, the attack adapts
/// as the victim retrains.
std::vector<Sample> mcm_generate(const model::LogisticModel& m,
                                 const Dataset& d, long k);

/// Target Label Flipping: k copies of the target's feature value with the
/// flipped true label.
std::vector<Sample> tlf_generate(const TargetSpec& target, long k);

/// Gradient-guided variant: over candidates (x, y) on a uniform grid of
/// grid_size points crossed with both labels, pick the one whose
/// per-sample training gradient (p(x) - y) * phi(x) has the largest inner
/// product with the gradient of the target's misclassification loss
/// -ln(1 - p_correct(x_target)), both at the current model. Ties toward
/// smaller x, then label 0. Emits k copies.
std::vector<Sample> gradmax_generate(const model::LogisticModel& m,
                                     const TargetSpec& target, long k,
                                     long grid_size);

}  // namespace poisim::attack
