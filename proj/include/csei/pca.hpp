#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "csei/errors.hpp"
#include "csei/matrix.hpp"

namespace csei {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (i != j) sum += a.at(i, j) * a.at(i, j);
    }
  }
  return std::sqrt(sum);
}

inline double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.values) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace detail

// Cyclic Jacobi sweeps on a symmetric matrix. The stopping tolerance is
// relative to the input's Frobenius norm: raw covariance matrices carry
// values around 1e8, where an absolute 1e-12 off-diagonal norm is below
// representable rounding and the sweep would never terminate.
inline EigenDecomposition jacobi_eigen(Matrix a) {
  if (a.rows != a.cols || a.rows == 0) {
    throw Error(ErrorKind::dimension, "jacobi_eigen needs a square matrix");
  }
  const std::size_t n = a.rows;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

  const double tol = 1e-12 * std::max(1.0, detail::frobenius_norm(a));
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) < tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) {
                     return a.at(i, i) > a.at(j, j);
                   });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a.at(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) {
      out.eigenvectors.at(i, j) = v.at(i, order[j]);
    }
  }
  return out;
}

// Orients one eigenvector column in place: largest-magnitude component
// positive, earliest such component deciding ties. Thresholded projections
// downstream make the sign normative, not cosmetic.
inline void orient_axis(Matrix& vectors, std::size_t column) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < vectors.rows; ++i) {
    const double mag = std::abs(vectors.at(i, column));
    if (mag > best) {
      best = mag;
      arg = i;
    }
  }
  if (vectors.at(arg, column) < 0.0) {
    for (std::size_t i = 0; i < vectors.rows; ++i) {
      vectors.at(i, column) = -vectors.at(i, column);
    }
  }
}

struct Pc1Result {
  std::vector<double> loadings;  // signed, unit norm, oriented
  double eigenvalue = 0.0;
  double explained_variance_ratio = 0.0;
};

// First principal axis of the column covariance.
inline Pc1Result pc1_loadings(const Matrix& data) {
  if (data.cols == 0) {
    throw Error(ErrorKind::dimension, "pc1_loadings needs at least 1 column");
  }
  Matrix cov = covariance_matrix(data);  // throws when rows < 2
  double scale = 0.0;
  for (double x : cov.values) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) {
    throw Error(ErrorKind::degenerate,
                "covariance is all zero; no variance direction exists");
  }
  EigenDecomposition eig = jacobi_eigen(std::move(cov));
  orient_axis(eig.eigenvectors, 0);

  Pc1Result out;
  out.eigenvalue = eig.eigenvalues[0];
  out.loadings.resize(data.cols);
  for (std::size_t i = 0; i < data.cols; ++i) {
    out.loadings[i] = eig.eigenvectors.at(i, 0);
  }
  double trace = 0.0;
  for (double lambda : eig.eigenvalues) trace += lambda;
  out.explained_variance_ratio =
      trace > 0.0 ? std::clamp(eig.eigenvalues[0] / trace, 0.0, 1.0) : 0.0;
  return out;
}

struct PrincipalAxes {
  std::vector<double> means;        // column means of the fitted data
  Matrix axes;                      // cols x k, oriented
  std::vector<double> eigenvalues;  // first k, descending
};

// Top-k principal axes of the raw (un-normalized) matrix, for projecting
// rows to component scores.
inline PrincipalAxes principal_axes(const Matrix& data, std::size_t k) {
  if (k == 0 || k > data.cols) {
    throw Error(ErrorKind::dimension, "principal_axes: bad component count");
  }
  PrincipalAxes out;
  out.means = column_means(data);
  EigenDecomposition eig = jacobi_eigen(covariance_matrix(data));
  out.axes = Matrix(data.cols, k);
  out.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + k);
  for (std::size_t j = 0; j < k; ++j) {
    orient_axis(eig.eigenvectors, j);
    for (std::size_t i = 0; i < data.cols; ++i) {
      out.axes.at(i, j) = eig.eigenvectors.at(i, j);
    }
  }
  return out;
}

// Projects rows onto the fitted axes: score(r, j) = (row_r - mean) . axis_j.
inline Matrix project_scores(const Matrix& data, const PrincipalAxes& axes) {
  if (data.cols != axes.axes.rows) {
    throw Error(ErrorKind::dimension, "project_scores: column count mismatch");
  }
  Matrix scores(data.rows, axes.axes.cols);
  for (std::size_t r = 0; r < data.rows; ++r) {
    for (std::size_t j = 0; j < axes.axes.cols; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < data.cols; ++c) {
        dot += (data.at(r, c) - axes.means[c]) * axes.axes.at(c, j);
      }
      scores.at(r, j) = dot;
    }
  }
  return scores;
}

}  // namespace csei
