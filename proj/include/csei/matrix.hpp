#pragma once

#include <cstddef>
#include <vector>

#include "csei/errors.hpp"

namespace csei {

// Dense row-major matrix; just enough linear algebra for this pipeline.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  bool empty() const { return rows == 0 || cols == 0; }
};

inline std::vector<double> column_means(const Matrix& m) {
  std::vector<double> means(m.cols, 0.0);
  if (m.rows == 0) return means;
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) means[c] += m.at(r, c);
  }
  for (double& v : means) v /= static_cast<double>(m.rows);
  return means;
}

// Sample covariance (n-1 denominator).
inline Matrix covariance_matrix(const Matrix& m) {
  if (m.rows < 2) {
    throw Error(ErrorKind::dimension,
                "covariance needs at least 2 rows, got " +
                    std::to_string(m.rows));
  }
  const std::vector<double> means = column_means(m);
  Matrix cov(m.cols, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t i = 0; i < m.cols; ++i) {
      const double di = m.at(r, i) - means[i];
      for (std::size_t j = i; j < m.cols; ++j) {
        cov.at(i, j) += di * (m.at(r, j) - means[j]);
      }
    }
  }
  const double denom = static_cast<double>(m.rows - 1);
  for (std::size_t i = 0; i < m.cols; ++i) {
    for (std::size_t j = i; j < m.cols; ++j) {
      cov.at(i, j) /= denom;
      cov.at(j, i) = cov.at(i, j);
    }
  }
  return cov;
}

}  // namespace csei
