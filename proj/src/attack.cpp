#include "poisim/attack.hpp"

#include <stdexcept>

namespace poisim::attack {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::mcm: return "mcm";
    case Kind::tlf: return "tlf";
    case Kind::gradmax: return "gradmax";
  }
  throw std::invalid_argument("unknown attack kind");
}

Kind kind_from_name(const std::string& name) {
  if (name == "mcm") return Kind::mcm;
  if (name == "tlf") return Kind::tlf;
  if (name == "gradmax") return Kind::gradmax;
  throw std::invalid_argument("unknown attack name: " + name);
}

void validate_attack_spec(const AttackSpec& spec) {
  if (spec.batch_size < 1) {
    throw std::invalid_argument("attack batch size must be at least 1");
  }
  if (spec.budget < spec.batch_size) {
    throw std::invalid_argument("attack budget must be at least the batch size");
  }
}

namespace {

void require_positive_count(long k) {
  if (k < 1) {
    throw std::invalid_argument("poison batch count must be at least 1");
  }
}

std::vector<Sample> copies(double x, Label y, long k) {
  return std::vector<Sample>(static_cast<std::size_t>(k),
                             Sample{x, y, Provenance::poison});
}

}  // namespace

std::vector<Sample> mcm_generate(const model::LogisticModel& m,
                                 const Dataset& d, long k) {
  model::validate_model(m);
  require_positive_count(k);

  bool found = false;
  double best_conf = -1.0;
  double best_x = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.provenance(i) != Provenance::organic) {
      continue;
    }
    const double c = model::confidence(m, d.x(i));
    // Strict comparisons keep the earliest sample among exact ties.
    if (!found || c > best_conf || (c == best_conf && d.x(i) < best_x)) {
      found = true;
      best_conf = c;
      best_x = d.x(i);
    }
  }
  if (!found) {
    throw std::invalid_argument("mcm_generate: dataset has no organic samples");
  }
  return copies(best_x, flip(model::predicted_label(m, best_x)), k);
}

std::vector<Sample> tlf_generate(const TargetSpec& target, long k) {
  validate_target(target);
  require_positive_count(k);
  return copies(target.x_target, flip(target.y_true), k);
}

std::vector<Sample> gradmax_generate(const model::LogisticModel& m,
                                     const TargetSpec& target, long k,
                                     long grid_size) {
  model::validate_model(m);
  validate_target(target);
  require_positive_count(k);
  if (grid_size < 2) {
    throw std::invalid_argument("gradmax grid size must be at least 2");
  }

  // Direction that increases the target's misclassification loss
  // -ln(1 - p_correct): the training gradient the target would emit if it
  // carried the wrong label.
  const double wrong = 1.0 - label_value(target.y_true);
  const Eigen::VectorXd dir =
      (model::predict_proba(m, target.x_target) - wrong) *
      model::features(m.feature_map, target.x_target);

  bool found = false;
  double best_score = 0.0;
  double best_x = 0.0;
  Label best_y = Label::real_news;
  for (long j = 0; j < grid_size; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid_size - 1);
    const Eigen::VectorXd phi = model::features(m.feature_map, x);
    const double p = model::predict_proba(m, x);
    for (int yv = 0; yv <= 1; ++yv) {
      const double score = (p - yv) * phi.dot(dir);
      // Scan order is ascending x with label 0 first, so strict
      // improvement implements the tie-break.
      if (!found || score > best_score) {
        found = true;
        best_score = score;
        best_x = x;
        best_y = label_from_int(yv);
      }
    }
  }
  return copies(best_x, best_y, k);
}

}  // namespace poisim::attack
