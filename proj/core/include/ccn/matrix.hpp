#pragma once

#include <vector>

#include "ccn/error.hpp"

namespace ccn {

/// Dense row-major matrix. Small and deliberately minimal: the library deals
/// in block-structured maps whose structure lives elsewhere.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  bool operator==(const Matrix& other) const {
    return rows == other.rows && cols == other.cols && data == other.data;
  }
};

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) fail(Errc::shape_mismatch, "matrix product shapes disagree");
  Matrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      double v = a.at(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) {
        out.at(i, j) += v * b.at(k, j);
      }
    }
  }
  return out;
}

inline std::vector<double> multiply(const Matrix& a, const std::vector<double>& x) {
  if (a.cols != static_cast<int>(x.size())) {
    fail(Errc::shape_mismatch, "matrix-vector shapes disagree");
  }
  std::vector<double> out(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (int j = 0; j < a.cols; ++j) acc += a.at(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace ccn
