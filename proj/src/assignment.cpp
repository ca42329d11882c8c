#include "recipesim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "recipesim/error.hpp"

namespace recipesim {

namespace {

void check_entry(double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw InputError("similarity entry " + std::to_string(value) + " outside [0, 1]");
  }
}

struct Potentials {
  std::vector<double> row;        // u
  std::vector<double> col;        // v
  std::vector<std::size_t> match; // row -> col
};

// Shortest augmenting path Hungarian (e-maxx formulation) minimizing
// sum cost(i, match[i]), with cost = 1 - similarity.
Potentials solve_min_cost(const SimilarityMatrix& m) {
  const std::size_t n = m.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (1.0 - m(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Potentials out;
  out.row.assign(u.begin() + 1, u.end());
  out.col.assign(v.begin() + 1, v.end());
  out.match.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.match[p[j] - 1] = j - 1;
  return out;
}

// Perfect matchings of the tight-edge graph are exactly the optimal
// assignments (complementary slackness). Starting from one such matching,
// fix rows in order and move each to its smallest feasible column.
class LexicographicMatcher {
 public:
  LexicographicMatcher(std::vector<std::vector<char>> tight, std::vector<std::size_t> match)
      : n_(tight.size()), tight_(std::move(tight)), row_to_col_(std::move(match)),
        col_to_row_(n_, 0), locked_col_(n_, 0) {
    for (std::size_t r = 0; r < n_; ++r) col_to_row_[row_to_col_[r]] = r;
  }

  std::vector<std::size_t> run() {
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t c = 0; c < row_to_col_[r]; ++c) {
        if (!tight_[r][c] || locked_col_[c]) continue;
        if (try_reassign(r, c)) break;
      }
      locked_col_[row_to_col_[r]] = 1;
    }
    return row_to_col_;
  }

 private:
  // Move row r onto column c; the row displaced from c must find another
  // column through an alternating path over rows > r that ends on r's
  // old column.
  bool try_reassign(std::size_t r, std::size_t c) {
    const std::size_t displaced = col_to_row_[c];
    const std::size_t freed = row_to_col_[r];
    std::vector<std::size_t> saved_r2c = row_to_col_, saved_c2r = col_to_row_;

    row_to_col_[r] = c;
    col_to_row_[c] = r;
    locked_col_[c] = 1;
    col_to_row_[freed] = n_;  // free

    visited_.assign(n_, 0);
    const bool ok = augment(displaced, r);
    locked_col_[c] = 0;
    if (!ok) {
      row_to_col_ = std::move(saved_r2c);
      col_to_row_ = std::move(saved_c2r);
    }
    return ok;
  }

  bool augment(std::size_t row, std::size_t fixed_row) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (!tight_[row][c] || locked_col_[c] || visited_[c]) continue;
      visited_[c] = 1;
      const std::size_t owner = col_to_row_[c];
      if (owner == n_ || (owner != fixed_row && augment(owner, fixed_row))) {
        row_to_col_[row] = c;
        col_to_row_[c] = row;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<char>> tight_;
  std::vector<std::size_t> row_to_col_;
  std::vector<std::size_t> col_to_row_;
  std::vector<char> locked_col_;
  std::vector<char> visited_;
};

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw InputError("similarity matrix expects " + std::to_string(rows_ * cols_) +
                     " entries, got " + std::to_string(entries_.size()));
  }
  for (double e : entries_) check_entry(e);
}

void SimilarityMatrix::set(std::size_t r, std::size_t c, double value) {
  check_entry(value);
  entries_[r * cols_ + c] = value;
}

SimilarityMatrix SimilarityMatrix::transposed() const {
  SimilarityMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t.entries_[c * rows_ + r] = (*this)(r, c);
  }
  return t;
}

SimilarityMatrix pad_square(const SimilarityMatrix& m) {
  const std::size_t n = std::max(m.rows(), m.cols());
  if (m.rows() == n && m.cols() == n) return m;
  SimilarityMatrix out(n, n);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.set(r, c, m(r, c));
  }
  return out;
}

Assignment optimal_assignment(const SimilarityMatrix& m) {
  if (!m.square()) {
    throw InputError("optimal_assignment needs a square matrix, got " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  Assignment result;
  if (n == 0) return result;

  const Potentials pot = solve_min_cost(m);

  // Reduced costs of optimal edges are zero up to accumulated rounding.
  const double eps = 1e-10 * static_cast<double>(n);
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double reduced = (1.0 - m(r, c)) - pot.row[r] - pot.col[c];
      tight[r][c] = std::abs(reduced) <= eps ? 1 : 0;
    }
    tight[r][pot.match[r]] = 1;
  }

  const std::vector<std::size_t> match = LexicographicMatcher(std::move(tight), pot.match).run();
  result.pairs.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    result.pairs.emplace_back(r, match[r]);
    result.total += m(r, match[r]);
  }
  return result;
}

double matched_mean(const SimilarityMatrix& m) {
  const Assignment best = optimal_assignment(m);
  if (best.pairs.empty()) return 0.0;
  std::vector<double> values;
  values.reserve(best.pairs.size());
  for (const auto& [r, c] : best.pairs) values.push_back(m(r, c));
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return std::clamp(total / static_cast<double>(values.size()), 0.0, 1.0);
}

}  // namespace recipesim
