#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "asrnn/errors.hpp"

namespace asrnn {

// Dense row-major tensor of 64-bit reals. Rank 1 vectors and rank 2
// matrices cover everything this library needs; the shape is kept general
// so scalars ({1}) and stacked scale rows ({J, n}) fit the same type.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {}

  static Tensor zeros(std::vector<std::size_t> s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return Tensor(std::move(s), std::vector<double>(n, 0.0));
  }
  static Tensor scalar(double v) { return Tensor({1}, {v}); }
  static Tensor vec(std::vector<double> d) {
    std::size_t n = d.size();
    return Tensor({n}, std::move(d));
  }
  static Tensor matrix(std::size_t r, std::size_t c, std::vector<double> d) {
    return Tensor({r, c}, std::move(d));
  }
  static Tensor one_hot(std::size_t n, std::size_t index) {
    Tensor t = zeros({n});
    t.data[index] = 1.0;
    return t;
  }

  std::size_t rank() const { return shape.size(); }
  std::size_t numel() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return rank() < 2 ? 1 : shape[1]; }

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void fill(double v) {
    for (double& x : data) x = v;
  }

  std::string shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(shape[i]);
    }
    return s + "]";
  }
};

inline bool operator==(const Tensor& a, const Tensor& b) {
  return a.shape == b.shape && a.data == b.data;
}

}  // namespace asrnn
