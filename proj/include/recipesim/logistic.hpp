#pragma once

#include <cstddef>
#include <span>

#include "recipesim/dataset.hpp"

namespace recipesim {

struct LogisticConfig {
  // Penalty (l2_strength / 2) * |w|^2 on the coefficients, not the intercept.
  double l2_strength = 1.0;
  std::size_t max_iter = 100;
  // Convergence threshold on the Euclidean norm of the objective's gradient.
  double tolerance = 1e-8;
};

struct LogisticModel {
  Features coefficients{};
  double intercept = 0.0;

  std::size_t iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

// Minimizes the L2-regularized log-loss with damped Newton steps on the raw
// (unstandardized) features. Throws InputError when fewer than 10 rows or
// only one class is present.
LogisticModel train_logistic(std::span<const LabeledPair> data, const LogisticConfig& config = {});

double predict_probability(const LogisticModel& model, const Features& x);
// 1 when the probability exceeds 0.5.
int predict_label(const LogisticModel& model, const Features& x);

}  // namespace recipesim
