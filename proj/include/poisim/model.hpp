#pragma once
// Polynomial-logit logistic regression: feature maps, prediction, convex
// loss, analytic gradient, and deterministic full-batch fitting.

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "poisim/core.hpp"

namespace poisim::model {

/// Polynomial basis of the logit. Degree 1 maps x to (1, x),
/// degree 2 maps x to (1, x, x^2).
struct FeatureMap {
  int degree = 1;

  int dim() const { return degree + 1; }
  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

void validate_feature_map(const FeatureMap& fm);  // degree must be 1 or 2

/// Logistic-regression model: logit(P(fake)) = beta . phi(x).
struct LogisticModel {
  FeatureMap feature_map;
  Eigen::VectorXd beta;
};

void validate_model(const LogisticModel& m);

enum class Solver {
  newton,            // damped Newton, default (see fit)
  gradient_descent,  // plain full-batch descent, same line search
};

struct TrainConfig {
  double l2_lambda = 1e-4;  // mean-loss-scale penalty on non-intercept terms
  long max_iters = 100000;
  double grad_tol = 1e-8;  // infinity-norm stopping threshold
  Solver solver = Solver::newton;
};

void validate_train_config(const TrainConfig& cfg);

struct FitReport {
  long iterations = 0;       // accepted update steps
  double grad_inf_norm = 0;  // at termination
  bool converged = false;    // grad_inf_norm < grad_tol reached
  std::vector<double> loss_trace;  // loss at init and after each accepted step
};

struct FitResult {
  LogisticModel model;
  FitReport report;
};

/// Numerically stable logistic function, exact to |z| far beyond 700.
double sigmoid(double z);

/// ln(p / (1 - p)). Rejects p outside (0, 1).
double logit(double p);

/// Basis vector phi(x) for the given map.
Eigen::VectorXd features(const FeatureMap& fm, double x);

/// beta . phi(x) without allocating.
double logit_value(const LogisticModel& m, double x);

/// P(fake | x) = sigmoid(beta . phi(x)).
double predict_proba(const LogisticModel& m, double x);

/// Class 1 iff P(fake) > 0.5; an exact 0.5 classifies as class 0.
Label predicted_label(const LogisticModel& m, double x);

/// |P(fake|x) - 0.5|, in [0, 0.5]. The selection score used by MCM.
double confidence(const LogisticModel& m, double x);

/// Fraction of samples whose predicted label matches their recorded label.
double training_accuracy(const LogisticModel& m, const Dataset& d);

/// Multiplicity view of a dataset: one row per distinct feature value with
/// per-label counts, in first-occurrence order. Poisoning injects many
/// copies of few feature values, so training cost stays O(distinct x)
/// regardless of poison volume. Row order is a function of dataset order,
/// which keeps every evaluation bit-reproducible.
class GroupedCounts {
 public:
  static GroupedCounts from_dataset(const Dataset& d);

  void add(double x, Label y, double count = 1.0);

  std::size_t groups() const { return x_.size(); }
  double total() const { return total_; }

  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& xsq() const { return x2_; }
  const std::vector<double>& pos_counts() const { return npos_; }
  const std::vector<double>& neg_counts() const { return nneg_; }
  const std::vector<double>& counts() const { return cnt_; }

 private:
  std::vector<double> x_, x2_, npos_, nneg_, cnt_;
  std::unordered_map<double, std::size_t> index_;
  double total_ = 0.0;
};

/// Mean negative log-likelihood plus (l2_lambda/2)*||beta||^2 taken over
/// the non-intercept coefficients, evaluated in log-sum-exp form.
/// Rejects empty data.
double loss(const LogisticModel& m, const Dataset& d, const TrainConfig& cfg);
double loss_grouped(const LogisticModel& m, const GroupedCounts& g,
                    const TrainConfig& cfg);

/// Analytic gradient of `loss` with respect to beta.
Eigen::VectorXd gradient(const LogisticModel& m, const Dataset& d,
                         const TrainConfig& cfg);
Eigen::VectorXd gradient_grouped(const LogisticModel& m, const GroupedCounts& g,
                                 const TrainConfig& cfg);

/// Deterministic full-batch minimization of `loss`.
///
/// Both solvers use the same backtracking line search: start at step 1.0
/// and halve until the loss strictly decreases, also accepting a step
/// whose loss ties within summation rounding noise if it at least halves
/// the gradient (otherwise fits whose last needed step shrinks the loss
/// by less than one ulp would stall just above tolerance). Termination:
/// gradient infinity-norm below cfg.grad_tol (converged) or cfg.max_iters
/// accepted steps (flagged in the report, result still usable). The
/// returned model's loss never exceeds the initial loss beyond that noise.
///
/// Solver::newton damps the step through the same line search and reaches
/// the same unique optimum as plain descent (the penalized loss is
/// strictly convex for l2_lambda > 0); it is the default because descent
/// needs thousands of iterations per refit on this loss, which makes
/// per-round online updates impractical.
FitResult fit(const Dataset& d, const FeatureMap& fm, const TrainConfig& cfg,
              const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);
FitResult fit_grouped(const GroupedCounts& g, const FeatureMap& fm,
                      const TrainConfig& cfg,
                      const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

}  // namespace poisim::model
