#pragma once

#include <cstddef>
#include <vector>

namespace protorecon {

/// Dense row-major square cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::size_t> row_to_col;  // permutation pi: row i -> column pi(i)
  double total = 0.0;
};

/// Exact minimum-cost perfect matching (Hungarian method with potentials,
/// O(n^3)). Throws std::invalid_argument for a non-square matrix or any
/// non-finite entry.
Assignment assign_min_cost(const CostMatrix& cost);

}  // namespace protorecon
