/*
 * Copyright 2026 The SMLM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/likelihood_model.hpp"
#include "smlm/loss_augmented_inference.hpp"
#include "smlm/sharded_gradient.hpp"

namespace smlm {

struct TrainConfig {
  LossKind loss_kind = LossKind::kFScore;
  double C = 1.0;
  // Constant step size. Unset means default_step_size(data, C).
  std::optional<double> L;
  double epsilon = 1e-8;
  std::size_t max_iter = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t shards = 1;
  std::size_t workers = 1;

  void validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("C must be > 0");
    if (L && (!(*L > 0.0) || !std::isfinite(*L))) {
      throw ConfigError("L must be > 0");
    }
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (!(tol >= 0.0)) throw ConfigError("tol must be >= 0");
    if (shards < 1) throw ConfigError("shards must be >= 1");
  }
};

// max(C, 1) * sum_i |x_i|^2. The gradient of the data term is Lipschitz with
// constant at most C * sum_i |x_i|^2 / 2; the floor at C = 1 keeps the
// reweighted L1 step (magnitude 1 / L per coordinate) small when C is small.
inline double default_step_size(const Dataset& data, double C) {
  double sq = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.features(i);
    sq += dot(x, x);
  }
  return std::max(C, 1.0) * (sq > 0.0 ? sq : 1.0);
}

// Diagonal of the reweighting matrix that turns |w|_1 into w'Lw:
// 1 / max(|w_j|, epsilon).
inline Vector lambda_diag(std::span<const double> w, double epsilon) {
  Vector lam(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    lam[j] = 1.0 / std::max(std::abs(w[j]), epsilon);
  }
  return lam;
}

inline double half_quadratic(std::span<const double> w,
                             std::span<const double> lambda) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += lambda[j] * w[j] * w[j];
  return 0.5 * s;
}

// Lw + C * sum_i [y''_i x_i s(-y''_i s_i) - y_i x_i s(-y_i s_i)], with L and
// y'' held fixed.
inline Vector subgradient(std::span<const double> w, const Dataset& data,
                          const LabelTuple& most_violated,
                          std::span<const double> lambda, double C,
                          const ShardPlan& plan, std::size_t workers = 1) {
  detail::require_same_length("lambda diagonal", w.size(), lambda.size());
  Vector g = sharded_data_gradient(data, most_violated, w, plan, workers);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = lambda[j] * w[j] + C * g[j];
  return g;
}

inline Vector subgradient(std::span<const double> w, const Dataset& data,
                          const LabelTuple& most_violated,
                          std::span<const double> lambda, double C) {
  return subgradient(w, data, most_violated, lambda, C,
                     ShardPlan::contiguous(data.size(), 1));
}

// Minimizer of (L/2)|u - (w_prev - grad/L)|^2.
inline Vector search_point(std::span<const double> w_prev,
                           std::span<const double> grad, double L) {
  detail::require_same_length("gradient", w_prev.size(), grad.size());
  if (!(L > 0.0)) throw ConfigError("step size L must be > 0");
  Vector u(w_prev.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = w_prev[j] - grad[j] / L;
  return u;
}

inline double momentum_factor(double tau_prev) {
  return (1.0 + std::sqrt(1.0 + 4.0 * tau_prev * tau_prev)) / 2.0;
}

// w = u_cur + ((tau_prev - 1) / tau_cur) (u_cur - u_prev)
inline Vector solution_update(std::span<const double> u_cur,
                              std::span<const double> u_prev, double tau_cur,
                              double tau_prev) {
  detail::require_same_length("previous search point", u_cur.size(),
                              u_prev.size());
  const double beta = (tau_prev - 1.0) / tau_cur;
  Vector w(u_cur.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = u_cur[j] + beta * (u_cur[j] - u_prev[j]);
  }
  return w;
}

// Same update written as an affine combination of the two search points.
inline Vector solution_update_affine(std::span<const double> u_cur,
                                     std::span<const double> u_prev,
                                     double tau_cur, double tau_prev) {
  detail::require_same_length("previous search point", u_cur.size(),
                              u_prev.size());
  const double c_cur = (tau_cur + tau_prev - 1.0) / tau_cur;
  const double c_prev = (tau_prev - 1.0) / tau_cur;
  Vector w(u_cur.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = c_cur * u_cur[j] - c_prev * u_prev[j];
  }
  return w;
}

// (1/2) w'L(w)w + C * upper_bound_value(scores(w)).
inline double objective(std::span<const double> w, const Dataset& data,
                        LossKind kind, double C, double epsilon) {
  const auto scores = compute_scores(data, w);
  return half_quadratic(w, lambda_diag(w, epsilon)) +
         C * upper_bound_value(scores, data.labels(), kind);
}

struct TrainerState {
  Vector w_cur;
  Vector w_prev;
  Vector u_cur;
  Vector u_prev;
  double tau_cur = 1.0;
  double tau_prev = 1.0;
  std::size_t k = 0;
  // objective_trace[t] is the objective at the t-th iterate, starting from
  // the zero vector.
  std::vector<double> objective_trace;
  std::vector<double> tau_trace;
};

struct TrainResult {
  Model model;
  std::vector<double> objective_trace;
  std::vector<double> tau_trace;
  bool converged = false;
};

// Accelerated iteration with a constant step size. Each step refreshes the
// reweighting diagonal and the most violated tuple at the current iterate,
// takes a gradient step to the search point, advances the momentum factor
// and extrapolates the next iterate from the last two search points.
class Trainer {
 public:
  Trainer(const Dataset& data, TrainConfig config)
      : data_(data), config_(std::move(config)),
        plan_(ShardPlan::contiguous(data.size(),
                                    std::min(config_.shards, data.size()))) {
    config_.validate();
    step_size_ = config_.L ? *config_.L : default_step_size(data_, config_.C);
    const Vector zero(data_.dim(), 0.0);
    state_.w_cur = zero;
    state_.w_prev = zero;
    state_.u_cur = zero;
    state_.u_prev = zero;
    state_.tau_cur = 1.0;
    state_.tau_prev = 1.0;
    state_.tau_trace.push_back(1.0);
  }

  const TrainerState& state() const { return state_; }
  const TrainConfig& config() const { return config_; }
  double step_size() const { return step_size_; }

  // One full iteration. Returns the Euclidean length of the iterate change.
  double step() {
    const Vector& w = state_.w_cur;
    const Vector lam = lambda_diag(w, config_.epsilon);
    const auto scores = compute_scores(data_, w);
    const auto inf = find_most_violated(scores, data_.labels(),
                                        config_.loss_kind);
    state_.objective_trace.push_back(
        half_quadratic(w, lam) +
        config_.C * surrogate_value(scores, data_.labels(), inf.most_violated,
                                    config_.loss_kind));

    const Vector grad = subgradient(w, data_, inf.most_violated, lam, config_.C,
                                    plan_, config_.workers);
    Vector u = search_point(w, grad, step_size_);
    const double tau_prev = state_.tau_cur;
    const double tau = momentum_factor(tau_prev);
    Vector w_next = solution_update(u, state_.u_cur, tau, tau_prev);
    ++state_.k;
    check_finite(w_next);

    double change = 0.0;
    for (std::size_t j = 0; j < w_next.size(); ++j) {
      change += (w_next[j] - w[j]) * (w_next[j] - w[j]);
    }
    state_.u_prev = std::move(state_.u_cur);
    state_.u_cur = std::move(u);
    state_.tau_prev = tau_prev;
    state_.tau_cur = tau;
    state_.tau_trace.push_back(tau);
    state_.w_prev = std::move(state_.w_cur);
    state_.w_cur = std::move(w_next);
    return std::sqrt(change);
  }

  TrainResult run() {
    bool converged = false;
    while (state_.k < config_.max_iter) {
      if (step() <= config_.tol) {
        converged = true;
        break;
      }
    }
    const double final_obj = objective(state_.w_cur, data_, config_.loss_kind,
                                       config_.C, config_.epsilon);
    state_.objective_trace.push_back(final_obj);

    TrainResult r;
    r.model.w = state_.w_cur;
    r.model.loss_kind = config_.loss_kind;
    r.model.train_meta = {config_.C, step_size_, config_.epsilon, state_.k,
                          final_obj};
    r.objective_trace = state_.objective_trace;
    r.tau_trace = state_.tau_trace;
    r.converged = converged;
    return r;
  }

 private:
  void check_finite(std::span<const double> w) const {
    for (double v : w) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite iterate at iteration " << state_.k
            << "; step size L=" << step_size_
            << " is likely too small for the data scale, try a larger L";
        throw NumericalError(msg.str());
      }
    }
  }

  const Dataset& data_;
  TrainConfig config_;
  ShardPlan plan_;
  double step_size_ = 0.0;
  TrainerState state_;
};

inline TrainResult fit(const Dataset& data, const TrainConfig& config) {
  return Trainer(data, config).run();
}

inline Model train(const Dataset& data, const TrainConfig& config) {
  return fit(data, config).model;
}

}  // namespace smlm
