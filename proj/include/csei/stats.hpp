#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "csei/errors.hpp"
#include "csei/matrix.hpp"

namespace csei {

namespace detail {

// Continued fraction for the regularized incomplete beta (Lentz's method).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTol = 1e-12;
  constexpr double kTiny = 1e-300;
  constexpr int kMaxIter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kTol) return h;
  }
  throw Error(ErrorKind::degenerate,
              "incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) {
    throw Error(ErrorKind::config, "incomplete beta needs a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Two-sided p-value of a t statistic with nu degrees of freedom:
// p = I_{nu/(nu+t^2)}(nu/2, 1/2).
inline double student_t_two_sided_p(double t, double nu) {
  if (nu <= 0.0) {
    throw Error(ErrorKind::config, "t test needs positive degrees of freedom");
  }
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t dof = 0;
};

inline CorrelationResult pearson(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::dimension, "pearson inputs differ in length");
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw Error(ErrorKind::dimension, "pearson needs at least 3 samples");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::degenerate,
                "pearson is undefined for a constant input");
  }
  CorrelationResult out;
  out.n = n;
  out.dof = n - 2;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double r2 = out.r * out.r;
  if (r2 >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double nu = static_cast<double>(out.dof);
    const double t = out.r * std::sqrt(nu / (1.0 - r2));
    out.p_value = std::clamp(student_t_two_sided_p(t, nu), 0.0, 1.0);
  }
  return out;
}

struct CorrelationMatrix {
  std::size_t cols = 0;
  Matrix r;
  Matrix p;
  std::vector<bool> defined;  // false where a constant column makes r moot

  bool cell_defined(std::size_t i, std::size_t j) const {
    return defined[i * cols + j];
  }
};

// Pairwise Pearson over columns. Cells touching a constant column are
// flagged undefined instead of raising.
inline CorrelationMatrix correlation_matrix(const Matrix& m) {
  if (m.rows < 3) {
    throw Error(ErrorKind::dimension, "correlation matrix needs >= 3 rows");
  }
  CorrelationMatrix out;
  out.cols = m.cols;
  out.r = Matrix(m.cols, m.cols);
  out.p = Matrix(m.cols, m.cols);
  out.defined.assign(m.cols * m.cols, false);

  std::vector<bool> constant(m.cols, true);
  std::vector<std::vector<double>> columns(m.cols,
                                           std::vector<double>(m.rows));
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (std::size_t r = 0; r < m.rows; ++r) {
      columns[c][r] = m.at(r, c);
      if (m.at(r, c) != m.at(0, c)) constant[c] = false;
    }
  }
  for (std::size_t i = 0; i < m.cols; ++i) {
    for (std::size_t j = i; j < m.cols; ++j) {
      if (constant[i] || constant[j]) continue;
      CorrelationResult cell;
      if (i == j) {
        cell.r = 1.0;
        cell.p_value = 0.0;
      } else {
        cell = pearson(columns[i], columns[j]);
      }
      out.r.at(i, j) = out.r.at(j, i) = cell.r;
      out.p.at(i, j) = out.p.at(j, i) = cell.p_value;
      out.defined[i * m.cols + j] = out.defined[j * m.cols + i] = true;
    }
  }
  return out;
}

}  // namespace csei
