// Copyright 2026 The Lexseq Authors.
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

#ifndef LEXSEQ_NN_TENSOR_H_
#define LEXSEQ_NN_TENSOR_H_

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace lexseq {

template <typename T>
using RowMajorMatrix =
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense row-major matrix. Vectors are stored as (n x 1).
template <typename T>
class Tensor2D {
 public:
  Tensor2D() = default;
  Tensor2D(size_t rows, size_t cols) : rows_(rows), cols_(cols),
                                       data_(rows * cols, T(0)) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  T operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  T& operator[](size_t i) { return data_[i]; }
  T operator[](size_t i) const { return data_[i]; }

  std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Eigen::Map<RowMajorMatrix<T>> matrix() {
    return {data_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }
  Eigen::Map<const RowMajorMatrix<T>> matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }

  void SetZero() { std::fill(data_.begin(), data_.end(), T(0)); }

  template <typename U>
  Tensor2D<U> Cast() const {
    Tensor2D<U> out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
    return out;
  }

  bool SameShape(const Tensor2D& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool operator==(const Tensor2D& other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace lexseq

#endif  // LEXSEQ_NN_TENSOR_H_
