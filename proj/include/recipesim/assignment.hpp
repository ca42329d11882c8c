#pragma once

// Maximum-weight one-to-one matching on similarity matrices.

#include <cstddef>
#include <utility>
#include <vector>

namespace recipesim {

// Dense row-major matrix with every entry finite and inside [0, 1].
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  SimilarityMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  // Throws InputError when value is outside [0, 1] or not finite.
  void set(std::size_t r, std::size_t c, double value);

  SimilarityMatrix transposed() const;
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

struct Assignment {
  // (row, col) pairs sorted by row.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // Sum of matched entries, accumulated in row order.
  double total = 0.0;
};

// Appends zero rows or columns until the matrix is max(rows, cols) square.
SimilarityMatrix pad_square(const SimilarityMatrix& m);

// Hungarian algorithm on the cost matrix (1 - m), O(n^3). Among all
// optimal permutations the lexicographically smallest pair sequence is
// returned. Throws InputError when m is not square.
Assignment optimal_assignment(const SimilarityMatrix& m);

// Mean matched similarity of optimal_assignment(m) over the n rows of the
// square matrix m. Matched values are summed in ascending order so that m
// and its transpose give bit-identical results whenever their optimal
// matched value multisets coincide.
double matched_mean(const SimilarityMatrix& m);

}  // namespace recipesim
