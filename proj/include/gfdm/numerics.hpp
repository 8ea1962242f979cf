#pragma once

// Complex linear algebra and Fourier primitives shared by the rest of the
// library. Matrices are dense Eigen objects; D stays small enough (<= 4096)
// that no sparse path is needed.

#include <gfdm/errors.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace gfdm {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace numerics {

/// Condition estimates above this are treated as numerically singular.
inline constexpr double kMaxCondition = 1e12;

inline bool all_finite(const ComplexMatrix &m) { return m.allFinite(); }

/// Normalized q-point DFT matrix, entry (m,n) = exp(-j2*pi*m*n/q)/sqrt(q).
inline ComplexMatrix dft_matrix(Index q) {
  if (q < 1)
    throw InvalidDimension("dft_matrix: size must be >= 1");
  ComplexMatrix w(q, q);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  for (Index m = 0; m < q; ++m)
    for (Index n = 0; n < q; ++n) {
      // reduce m*n mod q first so large products keep full phase accuracy
      const auto k = static_cast<double>((m * n) % q);
      w(m, n) = std::polar(scale, -2.0 * std::numbers::pi * k / static_cast<double>(q));
    }
  return w;
}

/// First n columns of sqrt(D)*W_D: entry (m,k) = exp(-j2*pi*m*k/D).
inline ComplexMatrix partial_fourier(Index d, Index n) {
  if (d < 1 || n < 1 || n > d)
    throw InvalidDimension("partial_fourier: need 1 <= N <= D (N=" + std::to_string(n) +
                           ", D=" + std::to_string(d) + ")");
  ComplexMatrix f(d, n);
  for (Index m = 0; m < d; ++m)
    for (Index k = 0; k < n; ++k) {
      const auto r = static_cast<double>((m * k) % d);
      f(m, k) = std::polar(1.0, -2.0 * std::numbers::pi * r / static_cast<double>(d));
    }
  return f;
}

/// Circulant matrix whose first column is `first_column` zero-padded to d.
inline ComplexMatrix circulant(const ComplexVector &first_column, Index d) {
  if (first_column.size() > d)
    throw InvalidDimension("circulant: first column longer than D");
  ComplexVector c = ComplexVector::Zero(d);
  c.head(first_column.size()) = first_column;
  ComplexMatrix h(d, d);
  for (Index col = 0; col < d; ++col)
    for (Index row = 0; row < d; ++row)
      h(row, col) = c((row - col + d) % d);
  return h;
}

namespace detail {

inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform with sign -1 (forward) or +1 (inverse);
// no normalization.
inline void fft_radix2(cdouble *a, Index n, int sign) {
  for (Index i = 1, j = 0; i < n; ++i) {
    Index bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }
  for (Index len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Index half = len / 2;
    for (Index k = 0; k < half; ++k) {
      const cdouble w = std::polar(1.0, ang * static_cast<double>(k));
      for (Index i = k; i < n; i += len) {
        const cdouble u = a[i];
        const cdouble v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

inline void dft_naive(cdouble *a, Index n, int sign) {
  std::vector<cdouble> out(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    cdouble acc = 0.0;
    for (Index k = 0; k < n; ++k) {
      const auto r = static_cast<double>((m * k) % n);
      acc += a[k] * std::polar(1.0, sign * 2.0 * std::numbers::pi * r / static_cast<double>(n));
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  std::copy(out.begin(), out.end(), a);
}

inline void transform(cdouble *a, Index n, int sign) {
  if (is_power_of_two(n))
    fft_radix2(a, n, sign);
  else
    dft_naive(a, n, sign);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i)
    a[i] *= scale;
}

} // namespace detail

/// W_D * x, via radix-2 FFT for power-of-two lengths.
inline ComplexVector dft(const ComplexVector &x) {
  ComplexVector y = x;
  if (y.size() > 0)
    detail::transform(y.data(), y.size(), -1);
  return y;
}

/// W_D^H * x.
inline ComplexVector idft(const ComplexVector &x) {
  ComplexVector y = x;
  if (y.size() > 0)
    detail::transform(y.data(), y.size(), +1);
  return y;
}

/// W_D * M applied column by column.
inline ComplexMatrix dft_columns(const ComplexMatrix &m) {
  ComplexMatrix out = m;
  for (Index c = 0; c < out.cols(); ++c)
    detail::transform(out.col(c).data(), out.rows(), -1);
  return out;
}

/// Pivoted-LU solver that keeps its factorization for repeated right-hand sides.
namespace detail {

// rcond() degrades to NaN arithmetic on an exact zero pivot and can report 1.
inline double lu_condition(const Eigen::PartialPivLU<ComplexMatrix> &lu) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  for (Index i = 0; i < pivots.size(); ++i)
    if (!(pivots(i) > 0.0) || !std::isfinite(pivots(i)))
      return std::numeric_limits<double>::infinity();
  const double rc = lu.rcond();
  return rc > 0.0 && std::isfinite(rc) ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

} // namespace detail

class LinearSolver {
public:
  LinearSolver() = default;

  explicit LinearSolver(const ComplexMatrix &a, std::string what = "solve") {
    if (a.rows() != a.cols())
      throw InvalidDimension(what + ": matrix must be square");
    lu_.compute(a);
    condition_ = a.size() == 0 ? 1.0 : detail::lu_condition(lu_);
    if (!(condition_ <= kMaxCondition))
      throw SingularMatrix(what + ": matrix is singular or ill-conditioned", condition_);
  }

  Index size() const { return lu_.rows(); }

  /// 1-norm condition estimate of the factored matrix.
  double condition() const { return condition_; }

  template <typename Rhs> auto solve(const Eigen::MatrixBase<Rhs> &b) const {
    if (b.rows() != lu_.rows())
      throw InvalidDimension("solve: right-hand side has wrong row count");
    using Result = Eigen::Matrix<cdouble, Rhs::RowsAtCompileTime, Rhs::ColsAtCompileTime>;
    return Result(lu_.solve(b));
  }

private:
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  double condition_ = 1.0;
};

/// Solves a*x = b for a vector or a matrix right-hand side.
template <typename Rhs> auto solve(const ComplexMatrix &a, const Eigen::MatrixBase<Rhs> &b) {
  if (a.rows() != b.rows())
    throw InvalidDimension("solve: dimension mismatch");
  return LinearSolver(a).solve(b);
}

/// Condition estimate of a square matrix without keeping the factorization.
inline double condition_estimate(const ComplexMatrix &a) {
  if (a.rows() != a.cols())
    throw InvalidDimension("condition_estimate: matrix must be square");
  if (a.size() == 0)
    return 1.0;
  return detail::lu_condition(Eigen::PartialPivLU<ComplexMatrix>(a));
}

/// Solves a*x = b for Hermitian positive-definite a (Cholesky).
inline ComplexMatrix hermitian_solve(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw InvalidDimension("hermitian_solve: dimension mismatch");
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw SingularMatrix("hermitian_solve: matrix is not positive definite",
                         std::numeric_limits<double>::infinity());
  const double rc = llt.rcond();
  const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxCondition))
    throw SingularMatrix("hermitian_solve: matrix is ill-conditioned", cond);
  return llt.solve(b);
}

/// Frobenius distance ||a - b|| relative to ||ref||.
inline double relative_error(const ComplexMatrix &a, const ComplexMatrix &b,
                             const ComplexMatrix &ref) {
  return (a - b).norm() / ref.norm();
}

/// Frobenius norm of a^H a - I.
inline double unitarity_defect(const ComplexMatrix &a) {
  return (a.adjoint() * a - ComplexMatrix::Identity(a.cols(), a.cols())).norm();
}

} // namespace numerics
} // namespace gfdm
