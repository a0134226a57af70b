#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subpert/core.hpp"

namespace subpert {

/// An n x q complex matrix with orthonormal columns, representing a point of
/// the Grassmannian Gr(q, C^n). Construction validates orthonormality; it
/// never silently repairs the input (use orthonormalize() for that).
class OrthonormalFrame {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit OrthonormalFrame(CMatrix columns) : columns_(std::move(columns)) {
    const auto n = columns_.rows();
    const auto q = columns_.cols();
    if (q < 1 || q > n) {
      throw Error(ErrorCode::InvalidArgument,
                  "frame needs 1 <= q <= n, got n=" + std::to_string(n) +
                      " q=" + std::to_string(q));
    }
    const double defect =
        (columns_.adjoint() * columns_ - CMatrix::Identity(q, q)).norm();
    if (!(defect <= kTolerance * std::sqrt(static_cast<double>(q)))) {
      throw Error(ErrorCode::NotOrthonormal,
                  "||X^H X - I||_F = " + std::to_string(defect), defect);
    }
  }

  template <typename Derived>
  static OrthonormalFrame from(const Eigen::MatrixBase<Derived>& m) {
    return OrthonormalFrame(to_complex(m));
  }

  Eigen::Index n() const { return columns_.rows(); }
  Eigen::Index q() const { return columns_.cols(); }
  const CMatrix& matrix() const { return columns_; }

  /// Orthogonal projector X X^H.
  CMatrix projector() const { return columns_ * columns_.adjoint(); }

 private:
  CMatrix columns_;
};

namespace detail {

// Two passes of classical Gram-Schmidt against `basis` columns [0, count).
inline void project_out(CVector& v, const CMatrix& basis, Eigen::Index count) {
  if (count == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const CVector coeff = basis.leftCols(count).adjoint() * v;
    v -= basis.leftCols(count) * coeff;
  }
}

}  // namespace detail

/// Gram-Schmidt (with reorthogonalization) over the columns of `raw`.
/// Throws RankDeficient when a column's residual falls below tol * ||raw||_F.
template <typename Derived>
OrthonormalFrame orthonormalize(const Eigen::MatrixBase<Derived>& raw,
                                double tol = 1e-10) {
  CMatrix a = to_complex(raw);
  const auto n = a.rows();
  const auto q = a.cols();
  if (q < 1 || q > n) {
    throw Error(ErrorCode::InvalidArgument, "orthonormalize needs 1 <= q <= n");
  }
  const double scale = a.norm();
  CMatrix out(n, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    CVector v = a.col(k);
    detail::project_out(v, out, k);
    const double r = v.norm();
    if (!(r >= tol * scale) || r == 0.0) {
      throw Error(ErrorCode::RankDeficient,
                  "column " + std::to_string(k) + " residual " +
                      std::to_string(r),
                  r);
    }
    out.col(k) = v / r;
  }
  return OrthonormalFrame(std::move(out));
}

/// Basis of the orthogonal complement, completed greedily from the standard
/// basis vector with the largest residual at each step.
inline OrthonormalFrame complement_frame(const OrthonormalFrame& x) {
  const auto n = x.n();
  const auto q = x.q();
  if (q == n) {
    throw Error(ErrorCode::FullSpace, "frame already spans C^n");
  }
  CMatrix basis(n, n);
  basis.leftCols(q) = x.matrix();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = q; k < n; ++k) {
    double best_norm = -1.0;
    CVector best;
    Eigen::Index best_idx = -1;
    for (Eigen::Index e = 0; e < n; ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      CVector v = CVector::Unit(n, e);
      detail::project_out(v, basis, k);
      const double r = v.norm();
      if (r > best_norm) {
        best_norm = r;
        best = std::move(v);
        best_idx = e;
      }
    }
    used[static_cast<std::size_t>(best_idx)] = true;
    // One more pass keeps the new column orthogonal to machine precision.
    detail::project_out(best, basis, k);
    basis.col(k) = best / best.norm();
  }
  return OrthonormalFrame(basis.rightCols(n - q));
}

namespace detail {

inline void require_same_shape(const OrthonormalFrame& x,
                               const OrthonormalFrame& y) {
  if (x.n() != y.n() || x.q() != y.q()) {
    throw Error(ErrorCode::DimensionMismatch,
                "frames are " + std::to_string(x.n()) + "x" +
                    std::to_string(x.q()) + " and " + std::to_string(y.n()) +
                    "x" + std::to_string(y.q()));
  }
}

}  // namespace detail

/// d_sp(X, Y) = ||X X^H - Y Y^H||_F / sqrt(2q).
inline double dsp_projector(const OrthonormalFrame& x,
                            const OrthonormalFrame& y) {
  detail::require_same_shape(x, y);
  const double q = static_cast<double>(x.q());
  return (x.projector() - y.projector()).norm() / std::sqrt(2.0 * q);
}

/// d_sp(X, Y) = sqrt(1 - ||X^H Y||_F^2 / q).
inline double dsp_overlap(const OrthonormalFrame& x,
                          const OrthonormalFrame& y) {
  detail::require_same_shape(x, y);
  const double q = static_cast<double>(x.q());
  const double radicand =
      1.0 - (x.matrix().adjoint() * y.matrix()).squaredNorm() / q;
  return std::sqrt(std::clamp(radicand, 0.0, 1.0));
}

/// d_sp(X, Y) = sqrt(||Xperp^H Y||_F^2 / q), given a basis of X's complement.
inline double dsp_complement(const OrthonormalFrame& x_perp,
                             const OrthonormalFrame& y) {
  if (x_perp.n() != y.n() || x_perp.q() != y.n() - y.q()) {
    throw Error(ErrorCode::DimensionMismatch,
                "complement frame must be n x (n - q)");
  }
  const double q = static_cast<double>(y.q());
  return std::sqrt((x_perp.matrix().adjoint() * y.matrix()).squaredNorm() / q);
}

}  // namespace subpert
