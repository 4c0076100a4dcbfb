#pragma once

// Shared helpers for the test suite: seeded random matrices and independent
// numeric oracles (RK4 integration, direct distance computations). These stay
// independent of the implementation paths they are used to check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "semantica/matrix.hpp"

namespace testutil {

inline semantica::Matrix random_matrix(std::size_t rows, std::size_t cols,
                                       unsigned seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  semantica::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(gen);
  return m;
}

inline semantica::Matrix random_symmetric(std::size_t n, unsigned seed,
                                          double scale = 1.0) {
  semantica::Matrix m = random_matrix(n, n, seed, scale);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// Orthonormal columns via Gram-Schmidt of a random Gaussian matrix.
inline semantica::Matrix random_orthonormal(std::size_t rows, std::size_t cols,
                                            unsigned seed) {
  semantica::Matrix g = random_matrix(rows, cols, seed);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double proj = 0.0;
      for (std::size_t i = 0; i < rows; ++i) proj += g(i, k) * g(i, j);
      for (std::size_t i = 0; i < rows; ++i) g(i, j) -= proj * g(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) nrm += g(i, j) * g(i, j);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < rows; ++i) g(i, j) /= nrm;
  }
  return g;
}

// Classic fixed-step RK4 for scalar ODEs; integrator of record for checking
// the closed-form trajectories.
inline double rk4(std::function<double(double, double)> f, double y0, double t0,
                  double t1, int steps) {
  double y = y0, t = t0;
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

inline double max_offdiag_identity_dev(const semantica::Matrix& gram) {
  double worst = 0.0;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(gram(i, j) - target));
    }
  return worst;
}

// Pairwise Euclidean distance matrix of row vectors.
inline semantica::Matrix pairwise_distances(const semantica::Matrix& pts) {
  semantica::Matrix d(pts.rows(), pts.rows());
  for (std::size_t i = 0; i < pts.rows(); ++i)
    for (std::size_t j = 0; j < pts.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < pts.cols(); ++k) {
        const double diff = pts(i, k) - pts(j, k);
        s += diff * diff;
      }
      d(i, j) = std::sqrt(s);
    }
  return d;
}

}  // namespace testutil
