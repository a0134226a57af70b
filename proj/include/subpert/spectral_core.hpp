#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "subpert/core.hpp"
#include "subpert/set_geometry.hpp"
#include "subpert/subspace_metric.hpp"

namespace subpert {

/// Eigenvalues and a unitary eigenvector matrix of one normal matrix.
/// Eigenpairs are sorted lexicographically by (real, imag) of the eigenvalue.
/// Inside a degenerate eigenspace the basis is arbitrary; only subspaces and
/// basis-invariant quantities are meaningful.
struct NormalEigenSystem {
  Eigen::Index n = 0;
  PointMultiset eigenvalues;
  OrthonormalFrame eigenvectors;
  double source_norm = 0.0;   ///< ||M||_2
  double max_residual = 0.0;  ///< max_j ||M u_j - lambda_j u_j||_2
  bool hermitian = false;

  Complex lambda(Eigen::Index j) const {
    return eigenvalues[static_cast<std::size_t>(j)];
  }
  auto u(Eigen::Index j) const { return eigenvectors.matrix().col(j); }
  const CMatrix& U() const { return eigenvectors.matrix(); }

  /// Reconstruction invariant: every residual within 1e-8 ||M||_2.
  bool residual_ok() const {
    return max_residual <= 1e-8 * std::max(source_norm, 1e-300);
  }
};

/// Default normality tolerance, relative to max(1, ||M||_F^2).
inline constexpr double kNormalityTol = 1e-8;

namespace detail {

inline NormalEigenSystem assemble(const CMatrix& m, CVector values,
                                  CMatrix vectors, bool hermitian) {
  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     const Complex x = values(a), y = values(b);
                     if (x.real() != y.real()) return x.real() < y.real();
                     return x.imag() < y.imag();
                   });
  std::vector<Complex> sorted_values;
  CMatrix sorted_vectors(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    sorted_values.push_back(values(src));
    sorted_vectors.col(k) = vectors.col(src);
  }
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector r = m * sorted_vectors.col(k) -
                      sorted_values[static_cast<std::size_t>(k)] *
                          sorted_vectors.col(k);
    worst = std::max(worst, r.norm());
  }
  return NormalEigenSystem{n,
                           PointMultiset(std::move(sorted_values)),
                           OrthonormalFrame(std::move(sorted_vectors)),
                           norm2(m),
                           worst,
                           hermitian};
}

}  // namespace detail

/// Unitary eigendecomposition of a normal matrix. Hermitian input goes
/// through the self-adjoint solver; other normal input through a complex
/// Schur factorization, whose Schur vectors are eigenvectors when M is normal.
template <typename Derived>
NormalEigenSystem decompose_normal(const Eigen::MatrixBase<Derived>& matrix,
                                   double tol = kNormalityTol) {
  const CMatrix m = to_complex(matrix);
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare, "matrix is " + std::to_string(m.rows()) +
                                          "x" + std::to_string(m.cols()));
  }
  if (m.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "empty matrix");
  }
  const double fro = m.norm();
  const double commutator = (m * m.adjoint() - m.adjoint() * m).norm();
  if (!(commutator <= tol * std::max(1.0, fro * fro))) {
    throw Error(ErrorCode::NotNormal,
                "||M M^H - M^H M||_F = " + std::to_string(commutator),
                commutator);
  }
  const double skew = (m - m.adjoint()).norm();
  if (skew <= 1e-12 * std::max(1.0, fro)) {
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::InvalidArgument, "self-adjoint solver failed");
    }
    return detail::assemble(m, solver.eigenvalues().cast<Complex>(),
                            solver.eigenvectors(), true);
  }
  Eigen::ComplexSchur<CMatrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "Schur factorization failed");
  }
  return detail::assemble(m, schur.matrixT().diagonal(), schur.matrixU(),
                          false);
}

namespace detail {

inline void require_same_n(const NormalEigenSystem& a,
                           const NormalEigenSystem& b, const CMatrix* diff) {
  if (a.n != b.n || (diff && (diff->rows() != a.n || diff->cols() != a.n))) {
    throw Error(ErrorCode::DimensionMismatch,
                "eigen systems and difference matrix disagree on n");
  }
}

// Round-off allowance for identities that mix two independently computed
// eigendecompositions.
inline double roundoff_allowance(const NormalEigenSystem& a,
                                 const NormalEigenSystem& b) {
  return 16.0 * static_cast<double>(a.n) *
         std::numeric_limits<double>::epsilon() *
         (a.source_norm + b.source_norm);
}

}  // namespace detail

struct CouplingMatrixResult {
  CMatrix d;                 ///< D_{jj'} = (lt_{j'} - l_j) u_j^H ut_{j'}
  double max_deviation = 0;  ///< max |D - U^H (Mt - M) Ut| elementwise
  double tolerance = 0;
  bool self_check_ok = false;
};

inline CouplingMatrixResult coupling_matrix(const NormalEigenSystem& sys,
                                            const NormalEigenSystem& sys_t,
                                            const CMatrix& mdiff) {
  detail::require_same_n(sys, sys_t, &mdiff);
  const auto n = sys.n;
  const CMatrix overlaps = sys.U().adjoint() * sys_t.U();
  CouplingMatrixResult out;
  out.d.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index jp = 0; jp < n; ++jp)
      out.d(j, jp) = (sys_t.lambda(jp) - sys.lambda(j)) * overlaps(j, jp);
  const CMatrix direct = sys.U().adjoint() * mdiff * sys_t.U();
  out.max_deviation = (out.d - direct).cwiseAbs().maxCoeff();
  out.tolerance =
      1e-9 * mdiff.norm() + detail::roundoff_allowance(sys, sys_t);
  out.self_check_ok = out.max_deviation <= out.tolerance;
  return out;
}

struct ResidualNorms {
  std::vector<double> per_base_vector;       ///< ||(Mt - M) u_j||_2
  std::vector<double> per_perturbed_vector;  ///< ||(Mt - M) ut_{j'}||_2
  std::vector<double> base_sum_formula;      ///< same, from eigen-overlaps
  std::vector<double> perturbed_sum_formula;
  double op_norm = 0.0;
  double frob_norm = 0.0;
  double max_deviation = 0.0;  ///< worst |direct^2 - sum formula| / scale
  bool self_check_ok = false;
};

inline ResidualNorms residual_norms(const NormalEigenSystem& sys,
                                    const NormalEigenSystem& sys_t,
                                    const CMatrix& mdiff) {
  detail::require_same_n(sys, sys_t, &mdiff);
  const auto n = sys.n;
  ResidualNorms out;
  out.op_norm = norm2(mdiff);
  out.frob_norm = mdiff.norm();
  const CMatrix base = mdiff * sys.U();
  const CMatrix pert = mdiff * sys_t.U();
  const RMatrix weights = (sys.U().adjoint() * sys_t.U()).cwiseAbs2();
  const double allowance = detail::roundoff_allowance(sys, sys_t);
  bool ok = true;
  double worst = 0.0;
  auto check = [&](double direct, double formula) {
    // Both quantities are squared norms; compare at the squared level.
    const double scale = std::max(direct, formula);
    const double dev = std::abs(direct - formula);
    const double tol = 1e-9 * scale + allowance * (out.op_norm + allowance);
    worst = std::max(worst, scale > 0 ? dev / scale : dev);
    if (dev > tol) ok = false;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Eigen::Index jp = 0; jp < n; ++jp)
      s += std::norm(sys_t.lambda(jp) - sys.lambda(j)) * weights(j, jp);
    const double direct = base.col(j).squaredNorm();
    check(direct, s);
    out.per_base_vector.push_back(std::sqrt(direct));
    out.base_sum_formula.push_back(std::sqrt(s));
  }
  for (Eigen::Index jp = 0; jp < n; ++jp) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      s += std::norm(sys_t.lambda(jp) - sys.lambda(j)) * weights(j, jp);
    const double direct = pert.col(jp).squaredNorm();
    check(direct, s);
    out.per_perturbed_vector.push_back(std::sqrt(direct));
    out.perturbed_sum_formula.push_back(std::sqrt(s));
  }
  out.max_deviation = worst;
  out.self_check_ok = ok;
  return out;
}

/// max_j min_{j'} |lt_{j'} - l_j|; bounded above by ||Mt - M||_2 for normal
/// pairs.
inline double bauer_fike_gap(const NormalEigenSystem& sys,
                             const NormalEigenSystem& sys_t) {
  detail::require_same_n(sys, sys_t, nullptr);
  return directed_hausdorff(sys.eigenvalues, sys_t.eigenvalues);
}

}  // namespace subpert
