#include "recipesim/logistic.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "recipesim/error.hpp"

namespace recipesim {

namespace {

constexpr std::size_t kParams = kFeatureCount + 1;  // coefficients, then intercept
using Vec = std::array<double, kParams>;
using Mat = std::array<Vec, kParams>;

double linear_score(const Vec& theta, const Features& x) {
  double z = theta[kFeatureCount];
  for (std::size_t j = 0; j < kFeatureCount; ++j) z += theta[j] * x[j];
  return z;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) - y z without overflow.
double log_loss(double z, int y) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - (y == 1 ? z : 0.0);
}

double objective(const Vec& theta, std::span<const LabeledPair> data, double l2) {
  double f = 0.0;
  for (const auto& row : data) f += log_loss(linear_score(theta, row.features), row.label);
  for (std::size_t j = 0; j < kFeatureCount; ++j) f += 0.5 * l2 * theta[j] * theta[j];
  return f;
}

// Solves a * x = b by Gaussian elimination with partial pivoting.
bool solve(Mat a, Vec b, Vec& x) {
  for (std::size_t col = 0; col < kParams; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < kParams; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < kParams; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < kParams; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = kParams; i-- > 0;) {
    double sum = b[i];
    for (std::size_t c = i + 1; c < kParams; ++c) sum -= a[i][c] * x[c];
    x[i] = sum / a[i][i];
  }
  return true;
}

}  // namespace

LogisticModel train_logistic(std::span<const LabeledPair> data, const LogisticConfig& config) {
  if (data.size() < 10) throw InputError("train_logistic needs at least 10 rows");
  std::size_t positives = 0;
  for (const auto& row : data) positives += row.label == 1 ? 1 : 0;
  if (positives == 0 || positives == data.size()) {
    throw InputError("train_logistic needs both classes present");
  }
  if (config.l2_strength < 0.0) throw InputError("l2_strength must be nonnegative");

  const double l2 = config.l2_strength;
  Vec theta{};
  LogisticModel model;
  double f = objective(theta, data, l2);

  for (std::size_t iter = 0;; ++iter) {
    Vec grad{};
    Mat hess{};
    for (const auto& row : data) {
      const double p = sigmoid(linear_score(theta, row.features));
      const double w = p * (1.0 - p);
      Vec xt{};
      for (std::size_t j = 0; j < kFeatureCount; ++j) xt[j] = row.features[j];
      xt[kFeatureCount] = 1.0;
      for (std::size_t a = 0; a < kParams; ++a) {
        grad[a] += (p - row.label) * xt[a];
        for (std::size_t b = 0; b < kParams; ++b) hess[a][b] += w * xt[a] * xt[b];
      }
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      grad[j] += l2 * theta[j];
      hess[j][j] += l2;
    }
    double gnorm = 0.0;
    for (double g : grad) gnorm += g * g;
    model.gradient_norm = std::sqrt(gnorm);
    model.iterations = iter;
    if (model.gradient_norm < config.tolerance) {
      model.converged = true;
      break;
    }
    if (iter >= config.max_iter) break;

    Vec step{};
    if (!solve(hess, grad, step)) step = grad;  // singular Hessian: fall back to gradient

    // Backtracking keeps every step a descent step.
    double t = 1.0;
    Vec candidate{};
    double f_new = f;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      for (std::size_t a = 0; a < kParams; ++a) candidate[a] = theta[a] - t * step[a];
      f_new = objective(candidate, data, l2);
      if (f_new <= f) break;
    }
    if (!(f_new <= f)) break;  // no progress possible in floating point
    theta = candidate;
    f = f_new;
  }

  for (std::size_t j = 0; j < kFeatureCount; ++j) model.coefficients[j] = theta[j];
  model.intercept = theta[kFeatureCount];
  return model;
}

double predict_probability(const LogisticModel& model, const Features& x) {
  double z = model.intercept;
  for (std::size_t j = 0; j < kFeatureCount; ++j) z += model.coefficients[j] * x[j];
  return sigmoid(z);
}

int predict_label(const LogisticModel& model, const Features& x) {
  return predict_probability(model, x) > 0.5 ? 1 : 0;
}

}  // namespace recipesim
