// Copyright 2026 The EdgeSpec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edgespec/errors.hpp"
#include "edgespec/kernels.hpp"

namespace edgespec {

using Vector = std::vector<double>;

// Row-major dense matrix. Plain value type; equality is element-wise.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  // out = this * x
  void apply(std::span<const double> x, std::span<double> out) const {
    kernels::gemv(data_, rows_, cols_, x, out);
  }

  // out += this^T * g, accumulated row by row in index order.
  void apply_transpose_add(std::span<const double> g, std::span<double> out) const {
    if (g.size() != rows_ || out.size() != cols_) {
      throw ContractViolation("apply_transpose_add: shape mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) kernels::axpy(g[r], row(r), out);
  }

  // this += scale * a b^T
  void add_outer(double scale, std::span<const double> a, std::span<const double> b) {
    if (a.size() != rows_ || b.size() != cols_) throw ContractViolation("add_outer: shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r) kernels::axpy(scale * a[r], b, row(r));
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace edgespec
