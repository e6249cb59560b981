#include "poisim/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace poisim::model {

namespace {

using Eigen::ArrayXd;
using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Map<const ArrayXd> as_array(const std::vector<double>& v) {
  return Map<const ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Per-fit scratch so the solver loop never allocates. Sized to the group
// count once per call; safe under concurrent fits since nothing is shared.
struct Workspace {
  ArrayXd z, e, p, gz, w, wx;

  void resize(Eigen::Index n) {
    z.resize(n);
    e.resize(n);
    p.resize(n);
    gz.resize(n);
    w.resize(n);
    wx.resize(n);
  }
};

void logits_into(const GroupedCounts& g, const VectorXd& beta, ArrayXd& z) {
  auto x = as_array(g.xs());
  if (beta.size() == 2) {
    z = beta[0] + beta[1] * x;
  } else {
    z = beta[0] + beta[1] * x + beta[2] * as_array(g.xsq());
  }
}

// Mean NLL + ridge on non-intercept terms, in overflow-safe form:
// per-sample loss is max(z,0) - y z + log1p(exp(-|z|)).
double loss_at(const GroupedCounts& g, const VectorXd& beta, double lambda,
               Workspace& ws) {
  logits_into(g, beta, ws.z);
  ws.e = (-ws.z.abs()).exp().log1p();  // log1p(exp(-|z|)) term, shared by both classes
  const double data =
      (as_array(g.pos_counts()) * ((-ws.z).max(0.0) + ws.e) +
       as_array(g.neg_counts()) * (ws.z.max(0.0) + ws.e))
          .sum();
  return data / g.total() +
         0.5 * lambda * beta.tail(beta.size() - 1).squaredNorm();
}

struct GradOut {
  VectorXd grad;
  MatrixXd hess;  // filled only when requested
};

void grad_at(const GroupedCounts& g, const VectorXd& beta, double lambda,
             bool want_hess, Workspace& ws, GradOut& out) {
  const auto dim = beta.size();
  const double n = g.total();
  auto x = as_array(g.xs());
  auto x2 = as_array(g.xsq());

  logits_into(g, beta, ws.z);
  ws.e = (-ws.z.abs()).exp();
  ws.p = (ws.z >= 0.0).select(1.0, ws.e) / (1.0 + ws.e);  // sigmoid(z)

  // d(mean NLL)/dz aggregated per group: n_pos (p - 1) + n_neg p.
  ws.gz = as_array(g.pos_counts()) * (ws.p - 1.0) + as_array(g.neg_counts()) * ws.p;

  out.grad.resize(dim);
  out.grad[0] = ws.gz.sum() / n;
  out.grad[1] = ws.gz.matrix().dot(x.matrix()) / n + lambda * beta[1];
  if (dim == 3) {
    out.grad[2] = ws.gz.matrix().dot(x2.matrix()) / n + lambda * beta[2];
  }

  if (!want_hess) {
    return;
  }
  ws.w = as_array(g.counts()) * ws.p * (1.0 - ws.p);
  const double s0 = ws.w.sum() / n;
  const double s1 = ws.w.matrix().dot(x.matrix()) / n;
  const double s2 = ws.w.matrix().dot(x2.matrix()) / n;
  out.hess.resize(dim, dim);
  if (dim == 2) {
    out.hess << s0, s1, s1, s2 + lambda;
  } else {
    ws.wx = ws.w * x;
    const double s3 = ws.wx.matrix().dot(x2.matrix()) / n;
    ws.wx = ws.w * x2;
    const double s4 = ws.wx.matrix().dot(x2.matrix()) / n;
    out.hess << s0, s1, s2, s1, s2 + lambda, s3, s2, s3, s4 + lambda;
  }
}

FitResult run_fit(const GroupedCounts& g, const FeatureMap& fm,
                  const TrainConfig& cfg,
                  const std::optional<VectorXd>& warm_start) {
  validate_feature_map(fm);
  validate_train_config(cfg);
  if (g.groups() == 0) {
    throw std::invalid_argument("fit: empty dataset");
  }

  const auto dim = static_cast<Eigen::Index>(fm.dim());
  VectorXd beta = VectorXd::Zero(dim);
  if (warm_start) {
    if (warm_start->size() != dim || !warm_start->allFinite()) {
      throw std::invalid_argument("fit: warm start does not match feature map");
    }
    beta = *warm_start;
  }

  Workspace ws;
  ws.resize(static_cast<Eigen::Index>(g.groups()));
  GradOut go, trial;
  VectorXd dir(dim), cand(dim);

  FitReport report;
  double cur = loss_at(g, beta, cfg.l2_lambda, ws);
  report.loss_trace.push_back(cur);

  const bool newton = cfg.solver == Solver::newton;
  while (true) {
    grad_at(g, beta, cfg.l2_lambda, newton, ws, go);
    report.grad_inf_norm = go.grad.lpNorm<Eigen::Infinity>();
    if (report.grad_inf_norm < cfg.grad_tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= cfg.max_iters) {
      break;
    }

    if (newton) {
      dir = go.hess.ldlt().solve(-go.grad);
      // The penalized Hessian is positive definite, so this solve should
      // always yield a descent direction; fall back to steepest descent
      // if rounding ever says otherwise.
      if (!dir.allFinite() || dir.dot(go.grad) >= 0.0) {
        dir = -go.grad;
      }
    } else {
      dir = -go.grad;
    }

    // Backtracking: halve from a unit step until the loss strictly drops.
    // Near the optimum the true decrease can fall below the rounding noise
    // of the loss sum while the gradient still sits a hair above tolerance.
    // A step whose measured loss is within that noise is still accepted when
    // it at least halves the gradient, which a Newton step near the optimum
    // does by orders of magnitude; plain noise never passes that bar.
    const double f_slack =
        16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(cur));
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-18) {
      cand = beta + step * dir;
      const double next = loss_at(g, cand, cfg.l2_lambda, ws);
      if (next < cur) {
        cur = next;
        accepted = true;
        break;
      }
      if (next <= cur + f_slack) {
        grad_at(g, cand, cfg.l2_lambda, false, ws, trial);
        if (trial.grad.lpNorm<Eigen::Infinity>() <=
            0.5 * report.grad_inf_norm) {
          cur = next;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;  // at numerical floor; report carries the residual gradient
    }
    beta = cand;
    ++report.iterations;
    report.loss_trace.push_back(cur);
  }

  return FitResult{LogisticModel{fm, std::move(beta)}, std::move(report)};
}

}  // namespace

void validate_feature_map(const FeatureMap& fm) {
  if (fm.degree != 1 && fm.degree != 2) {
    throw std::invalid_argument("feature map degree must be 1 or 2, got " +
                                std::to_string(fm.degree));
  }
}

void validate_model(const LogisticModel& m) {
  validate_feature_map(m.feature_map);
  if (m.beta.size() != m.feature_map.dim() || !m.beta.allFinite()) {
    throw std::invalid_argument("model coefficients do not match feature map");
  }
}

void validate_train_config(const TrainConfig& cfg) {
  if (!(cfg.l2_lambda >= 0.0) || !std::isfinite(cfg.l2_lambda)) {
    throw std::invalid_argument("l2_lambda must be finite and non-negative");
  }
  if (cfg.max_iters < 1) {
    throw std::invalid_argument("max_iters must be at least 1");
  }
  if (!(cfg.grad_tol > 0.0) || !std::isfinite(cfg.grad_tol)) {
    throw std::invalid_argument("grad_tol must be finite and positive");
  }
}

double sigmoid(double z) {
  const double e = std::exp(-std::abs(z));
  return (z >= 0.0 ? 1.0 : e) / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("logit requires p in (0, 1)");
  }
  return std::log(p / (1.0 - p));
}

Eigen::VectorXd features(const FeatureMap& fm, double x) {
  validate_feature_map(fm);
  Eigen::VectorXd phi(fm.dim());
  phi[0] = 1.0;
  phi[1] = x;
  if (fm.degree == 2) {
    phi[2] = x * x;
  }
  return phi;
}

double logit_value(const LogisticModel& m, double x) {
  double z = m.beta[0] + m.beta[1] * x;
  if (m.feature_map.degree == 2) {
    z += m.beta[2] * (x * x);
  }
  return z;
}

double predict_proba(const LogisticModel& m, double x) {
  return sigmoid(logit_value(m, x));
}

Label predicted_label(const LogisticModel& m, double x) {
  return predict_proba(m, x) > 0.5 ? Label::fake_news : Label::real_news;
}

double confidence(const LogisticModel& m, double x) {
  return std::abs(predict_proba(m, x) - 0.5);
}

double training_accuracy(const LogisticModel& m, const Dataset& d) {
  validate_model(m);
  if (d.empty()) {
    throw std::invalid_argument("training_accuracy: empty dataset");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    hits += predicted_label(m, d.x(i)) == d.y(i);
  }
  return static_cast<double>(hits) / static_cast<double>(d.size());
}

GroupedCounts GroupedCounts::from_dataset(const Dataset& d) {
  GroupedCounts g;
  g.x_.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    g.add(d.x(i), d.y(i));
  }
  return g;
}

void GroupedCounts::add(double x, Label y, double count) {
  if (!std::isfinite(x) || !(count > 0.0) || !std::isfinite(count)) {
    throw std::invalid_argument("GroupedCounts::add: bad value or count");
  }
  auto [it, inserted] = index_.try_emplace(x, x_.size());
  if (inserted) {
    x_.push_back(x);
    x2_.push_back(x * x);
    npos_.push_back(0.0);
    nneg_.push_back(0.0);
    cnt_.push_back(0.0);
  }
  const std::size_t i = it->second;
  (y == Label::fake_news ? npos_ : nneg_)[i] += count;
  cnt_[i] += count;
  total_ += count;
}

double loss(const LogisticModel& m, const Dataset& d, const TrainConfig& cfg) {
  return loss_grouped(m, GroupedCounts::from_dataset(d), cfg);
}

double loss_grouped(const LogisticModel& m, const GroupedCounts& g,
                    const TrainConfig& cfg) {
  validate_model(m);
  validate_train_config(cfg);
  if (g.groups() == 0) {
    throw std::invalid_argument("loss: empty dataset");
  }
  Workspace ws;
  ws.resize(static_cast<Eigen::Index>(g.groups()));
  return loss_at(g, m.beta, cfg.l2_lambda, ws);
}

Eigen::VectorXd gradient(const LogisticModel& m, const Dataset& d,
                         const TrainConfig& cfg) {
  return gradient_grouped(m, GroupedCounts::from_dataset(d), cfg);
}

Eigen::VectorXd gradient_grouped(const LogisticModel& m, const GroupedCounts& g,
                                 const TrainConfig& cfg) {
  validate_model(m);
  validate_train_config(cfg);
  if (g.groups() == 0) {
    throw std::invalid_argument("gradient: empty dataset");
  }
  Workspace ws;
  ws.resize(static_cast<Eigen::Index>(g.groups()));
  GradOut go;
  grad_at(g, m.beta, cfg.l2_lambda, false, ws, go);
  return std::move(go.grad);
}

FitResult fit(const Dataset& d, const FeatureMap& fm, const TrainConfig& cfg,
              const std::optional<Eigen::VectorXd>& warm_start) {
  if (d.empty()) {
    throw std::invalid_argument("fit: empty dataset");
  }
  return run_fit(GroupedCounts::from_dataset(d), fm, cfg, warm_start);
}

FitResult fit_grouped(const GroupedCounts& g, const FeatureMap& fm,
                      const TrainConfig& cfg,
                      const std::optional<Eigen::VectorXd>& warm_start) {
  return run_fit(g, fm, cfg, warm_start);
}

}  // namespace poisim::model
