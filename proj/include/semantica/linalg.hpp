#pragma once

// Dense real linear algebra used by every other module: SVD (one-sided
// Jacobi), symmetric eigendecomposition (Householder tridiagonalization +
// implicit-shift QL), a partial top-k eigensolver for large Gram matrices,
// classical MDS, orthogonal Procrustes and Cholesky. No external dependency;
// everything here is O(n^3) on matrices up to ~2000^2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "semantica/matrix.hpp"

namespace semantica {

// Default tolerances. The invariants asserted by the test suite are stated
// against these values.
namespace tol {
inline constexpr double kOrtho = 1e-10;        // max-abs deviation of U^T U from I
inline constexpr double kReconstruct = 1e-8;   // relative Frobenius reconstruction
inline constexpr double kSymmetry = 1e-10;     // symmetry check in sym_eig
inline constexpr double kMdsNegative = 1e-9;   // relative clamp threshold in MDS
inline constexpr double kJacobiSweep = 5e-15;  // one-sided Jacobi convergence
}  // namespace tol

struct SvdResult {
  Matrix u;               // rows x r, orthonormal columns
  std::vector<double> s;  // length r, descending, non-negative
  Matrix v;               // cols x r, orthonormal columns
};

struct EigResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns are unit eigenvectors
};

namespace detail {

// Flip column j of (u, v) so the entry of v with largest absolute value is
// positive; ties broken by lowest index. Makes outputs deterministic across
// runs and platforms.
inline void fix_sign(Matrix& u, Matrix& v, std::size_t j) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double a = std::abs(v(i, j));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v(best, j) < 0.0) {
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
    for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
  }
}

inline void fix_sign_single(Matrix& vecs, std::size_t j) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < vecs.rows(); ++i) {
    const double a = std::abs(vecs(i, j));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (vecs(best, j) < 0.0)
    for (std::size_t i = 0; i < vecs.rows(); ++i) vecs(i, j) = -vecs(i, j);
}

// Householder reduction to tridiagonal form, NR/EISPACK tred2 lineage.
// On return `a` holds the accumulated orthogonal Q with Q^T A Q = tri(d, e).
inline void tred2(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(a.rows());
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
        for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) {
      a(j, i) = 0.0;
      a(i, j) = 0.0;
    }
  }
}

// Variant that keeps the Householder reflectors instead of accumulating Q.
// Row i of `a` (entries 0..i-1) holds the reflector vector u_i; hcoef[i] its
// normalization, so P_i = I - u_i u_i^T / hcoef[i]. Q = P_{n-1} ... P_2.
inline void tred2_keep(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                       std::vector<double>& hcoef) {
  const int n = static_cast<int>(a.rows());
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  hcoef.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    hcoef[i] = h;
  }
  for (int i = 0; i < n; ++i) d[i] = a(i, i);
  e[0] = 0.0;
}

// x <- Q x with Q from tred2_keep.
inline void apply_q(const Matrix& house, const std::vector<double>& hcoef,
                    std::vector<double>& x) {
  const int n = static_cast<int>(house.rows());
  for (int i = 2; i < n; ++i) {
    if (hcoef[i] == 0.0) continue;
    const double* u = house.row_ptr(i);
    double g = 0.0;
    for (int k = 0; k < i; ++k) g += u[k] * x[k];
    g /= hcoef[i];
    for (int k = 0; k < i; ++k) x[k] -= g * u[k];
  }
}

// Implicit-shift QL on tri(d, e). Rotations are accumulated into the columns
// of *z when z is non-null (eigenvector k of the tridiagonal ends in column k).
inline void tql2(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tql2: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (std::size_t k = 0; k < z->rows(); ++k) {
              f = (*z)(k, i + 1);
              (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
              (*z)(k, i) = c * (*z)(k, i) - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Solve (T - lambda I) x = b in place on the tridiagonal (d, e[1..n-1]),
// Gaussian elimination with partial pivoting. Used by inverse iteration.
inline void tridiag_shifted_solve(const std::vector<double>& d,
                                  const std::vector<double>& e, double lambda,
                                  std::vector<double>& x) {
  const int n = static_cast<int>(d.size());
  std::vector<double> diag(n), sup1(n, 0.0), sup2(n, 0.0), sub(n, 0.0);
  for (int i = 0; i < n; ++i) diag[i] = d[i] - lambda;
  for (int i = 1; i < n; ++i) {
    sub[i] = e[i];
    sup1[i - 1] = e[i];
  }
  const double tiny = std::numeric_limits<double>::min() * 4.0;
  for (int i = 0; i < n - 1; ++i) {
    if (std::abs(sub[i + 1]) > std::abs(diag[i])) {
      std::swap(diag[i], sub[i + 1]);
      std::swap(sup1[i], diag[i + 1]);
      std::swap(sup2[i], sup1[i + 1]);
      std::swap(x[i], x[i + 1]);
    }
    if (std::abs(diag[i]) < tiny) diag[i] = std::copysign(tiny, diag[i]);
    const double mult = sub[i + 1] / diag[i];
    diag[i + 1] -= mult * sup1[i];
    sup1[i + 1] -= mult * sup2[i];
    x[i + 1] -= mult * x[i];
  }
  if (std::abs(diag[n - 1]) < tiny) diag[n - 1] = std::copysign(tiny, diag[n - 1]);
  x[n - 1] /= diag[n - 1];
  if (n >= 2) {
    x[n - 2] = (x[n - 2] - sup1[n - 2] * x[n - 1]) / diag[n - 2];
    for (int i = n - 3; i >= 0; --i)
      x[i] = (x[i] - sup1[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
  }
}

inline void sort_desc_with_columns(std::vector<double>& vals, Matrix& vecs) {
  const std::size_t n = vals.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  std::vector<double> sv(n);
  Matrix sorted(vecs.rows(), n);
  for (std::size_t j = 0; j < n; ++j) {
    sv[j] = vals[order[j]];
    for (std::size_t i = 0; i < vecs.rows(); ++i) sorted(i, j) = vecs(i, order[j]);
  }
  vals = std::move(sv);
  vecs = std::move(sorted);
}

}  // namespace detail

// Symmetric eigendecomposition, eigenvalues descending, orthonormal columns.
inline EigResult sym_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: not square");
  if (!m.all_finite()) throw std::invalid_argument("sym_eig: non-finite input");
  const double scale = std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol::kSymmetry * scale)
        throw std::invalid_argument("sym_eig: input not symmetric");

  Matrix z = m;
  std::vector<double> d, e;
  detail::tred2(z, d, e);
  detail::tql2(d, e, &z);
  detail::sort_desc_with_columns(d, z);
  for (std::size_t j = 0; j < z.cols(); ++j) detail::fix_sign_single(z, j);
  return {std::move(d), std::move(z)};
}

// Top-k eigenpairs of a symmetric matrix: tridiagonalize, find all
// eigenvalues (no vectors), then inverse iteration for the k largest with
// re-orthogonalization inside near-degenerate clusters. Much cheaper than
// the full decomposition when k << n; used on the big planted-category Grams.
inline EigResult sym_eig_top(const Matrix& m, std::size_t k) {
  const std::size_t n = m.rows();
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig_top: not square");
  k = std::min(k, n);
  if (n <= 3 || k >= n / 2) {
    EigResult full = sym_eig(m);
    full.values.resize(k);
    Matrix vk(n, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) vk(i, j) = full.vectors(i, j);
    full.vectors = std::move(vk);
    return full;
  }

  Matrix house = m;
  std::vector<double> d, e, hcoef;
  detail::tred2_keep(house, d, e, hcoef);
  std::vector<double> dw = d, ew = e;
  detail::tql2(dw, ew, nullptr);
  std::sort(dw.begin(), dw.end(), std::greater<double>());

  const double mat_scale = std::max(1.0, std::abs(dw.front()));
  const double cluster_tol = 1e-7 * mat_scale;

  Matrix vecs(n, k);
  std::vector<std::vector<double>> found;
  std::uint64_t rng_state = 0x9e3779b97f4a7c15ull;
  auto next_rand = [&rng_state]() {
    rng_state ^= rng_state << 13;
    rng_state ^= rng_state >> 7;
    rng_state ^= rng_state << 17;
    return static_cast<double>(rng_state >> 11) / 9007199254740992.0 - 0.5;
  };

  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> x(n);
    for (auto& v : x) v = next_rand();
    for (int iter = 0; iter < 4; ++iter) {
      // Orthogonalize against earlier vectors of the same cluster.
      for (std::size_t p = 0; p < j; ++p) {
        if (std::abs(dw[p] - dw[j]) > cluster_tol) continue;
        const double proj = dot(x, found[p]);
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * found[p][i];
      }
      const double nx = norm2(x);
      if (nx == 0.0) {
        for (auto& v : x) v = next_rand();
        continue;
      }
      for (auto& v : x) v /= nx;
      detail::tridiag_shifted_solve(d, e, dw[j], x);
      const double ns = norm2(x);
      for (auto& v : x) v /= ns;
      if (ns > 1.0 / (1e-12 * mat_scale) && iter >= 1) break;
    }
    for (std::size_t p = 0; p < j; ++p) {
      if (std::abs(dw[p] - dw[j]) > cluster_tol) continue;
      const double proj = dot(x, found[p]);
      for (std::size_t i = 0; i < n; ++i) x[i] -= proj * found[p][i];
    }
    const double nx = norm2(x);
    for (auto& v : x) v /= nx;
    found.push_back(x);
    detail::apply_q(house, hcoef, x);
    const double nq = norm2(x);
    for (std::size_t i = 0; i < n; ++i) vecs(i, j) = x[i] / nq;
  }
  dw.resize(k);
  for (std::size_t j = 0; j < k; ++j) detail::fix_sign_single(vecs, j);
  return {std::move(dw), std::move(vecs)};
}

// Thin SVD via one-sided Jacobi on the smaller dimension. Deterministic sign
// convention: the entry of each right singular vector with largest absolute
// value is made positive (ties broken by lowest index).
inline SvdResult svd(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("svd: empty");
  if (!m.all_finite()) throw std::invalid_argument("svd: non-finite input");
  if (m.rows() < m.cols()) {
    SvdResult t = svd(m.transposed());
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
  }
  const std::size_t rows = m.rows(), n = m.cols();

  // Work on transposes so that columns of A and V are contiguous rows here.
  Matrix at = m.transposed();           // n x rows; row j = column j of A
  Matrix vt = Matrix::identity(n);      // row j = column j of V

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* ap = at.row_ptr(p);
        double* aq = at.row_ptr(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += ap[i] * ap[i];
          beta += aq[i] * aq[i];
          gamma += ap[i] * aq[i];
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol::kJacobiSweep * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double x = ap[i], y = aq[i];
          ap[i] = c * x - s * y;
          aq[i] = s * x + c * y;
        }
        double* vp = vt.row_ptr(p);
        double* vq = vt.row_ptr(q);
        for (std::size_t i = 0; i < n; ++i) {
          const double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* aj = at.row_ptr(j);
    double nrm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) nrm += aj[i] * aj[i];
    s[j] = std::sqrt(nrm);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  Matrix u(rows, n), v(n, n);
  std::vector<double> s_sorted(n);
  const double s_max = s[order[0]];
  const double zero_tol = std::max(rows, n) *
                          std::numeric_limits<double>::epsilon() * s_max;
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    s_sorted[j] = s[src];
    for (std::size_t i = 0; i < n; ++i) v(i, j) = vt(src, i);
    if (s[src] > zero_tol) {
      const double* aj = at.row_ptr(src);
      for (std::size_t i = 0; i < rows; ++i) u(i, j) = aj[i] / s[src];
    } else {
      missing.push_back(j);
    }
  }

  // Complete an orthonormal basis for null columns (rank-deficient input):
  // pick the coordinate vector with the largest residual after projecting
  // out the existing columns.
  for (std::size_t j : missing) {
    std::vector<double> best_res;
    double best_norm = -1.0;
    for (std::size_t cand = 0; cand < rows; ++cand) {
      std::vector<double> r(rows, 0.0);
      r[cand] = 1.0;
      for (std::size_t col = 0; col < n; ++col) {
        if (col == j) continue;
        bool is_missing = std::find(missing.begin(), missing.end(), col) != missing.end() &&
                          col > j;
        if (is_missing) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) proj += u(i, col) * r[i];
        for (std::size_t i = 0; i < rows; ++i) r[i] -= proj * u(i, col);
      }
      const double nr = norm2(r);
      if (nr > best_norm) {
        best_norm = nr;
        best_res = std::move(r);
      }
      if (best_norm > 0.9) break;
    }
    // One re-orthogonalization pass for numerical cleanliness.
    for (std::size_t col = 0; col < n; ++col) {
      if (col == j) continue;
      double proj = 0.0;
      for (std::size_t i = 0; i < rows; ++i) proj += u(i, col) * best_res[i];
      for (std::size_t i = 0; i < rows; ++i) best_res[i] -= proj * u(i, col);
    }
    const double nr = norm2(best_res);
    for (std::size_t i = 0; i < rows; ++i) u(i, j) = best_res[i] / nr;
  }

  for (std::size_t j = 0; j < n; ++j) detail::fix_sign(u, v, j);
  return {std::move(u), std::move(s_sorted), std::move(v)};
}

// Classical MDS on a similarity (Gram) matrix: double-center, eigendecompose,
// return the top-`dim` coordinates. Negative eigenvalues beyond tolerance are
// clamped to zero; the count of clamped modes is reported through
// *negative_clamped when provided.
inline Matrix classical_mds(const Matrix& gram, std::size_t dim,
                            std::size_t* negative_clamped = nullptr) {
  const std::size_t n = gram.rows();
  if (gram.rows() != gram.cols())
    throw std::invalid_argument("classical_mds: gram not square");
  if (dim > n) throw std::invalid_argument("classical_mds: dim > rows");

  // B = J G J with J = I - 11^T/n.
  std::vector<double> row_mean(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += gram(i, j);
    total += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  total /= static_cast<double>(n * n);
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b(i, j) = gram(i, j) - row_mean[i] - row_mean[j] + total;
  // Symmetrize roundoff before the eigensolve.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = v;
      b(j, i) = v;
    }

  EigResult eig = sym_eig(b);
  const double top = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.front());
  std::size_t clamped = 0;
  Matrix coords(n, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double lam = eig.values[k];
    if (lam < 0.0) {
      if (lam < -tol::kMdsNegative * std::max(1.0, top)) ++clamped;
      lam = 0.0;
    }
    const double f = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i) coords(i, k) = f * eig.vectors(i, k);
  }
  if (negative_clamped) *negative_clamped = clamped;
  return coords;
}

// Orthogonal Procrustes: returns a * R with R = argmin ||a R - ref||_F over
// orthogonal R. Used to stabilize MDS frames across timepoints.
inline Matrix procrustes_align(const Matrix& a, const Matrix& ref) {
  if (a.rows() != ref.rows() || a.cols() != ref.cols())
    throw std::invalid_argument("procrustes_align: shape mismatch");
  const Matrix cross = at_mul(a, ref);  // a^T ref
  SvdResult f = svd(cross);
  const Matrix r = mul_bt(f.u, f.v);  // U V^T
  return a * r;
}

// Cholesky factor (lower) of a symmetric positive definite matrix.
inline Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: not square");
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

// Solve A X = B for SPD A via Cholesky.
inline Matrix spd_solve(const Matrix& a, const Matrix& b) {
  const Matrix l = cholesky(a);
  const std::size_t n = a.rows(), m = b.cols();
  Matrix x = b;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  }
  return x;
}

}  // namespace semantica
