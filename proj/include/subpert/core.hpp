#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace subpert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotOrthonormal,
  RankDeficient,
  FullSpace,
  EmptySet,
  ConditionViolated,
  NotSquare,
  NotNormal,
  SizeMismatch,
  KappaOutOfRange,
  GapConditionViolated,
  SearchSpaceTooLarge,
  InvalidGraph,
  EmptyCluster,
  NotAnEdgeSuperset,
  ZeroGap,
  MedConditionViolated,
  Unsatisfiable,
  NotEnoughCrossPairs,
  Format,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::FullSpace: return "FullSpace";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::KappaOutOfRange: return "KappaOutOfRange";
    case ErrorCode::GapConditionViolated: return "GapConditionViolated";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::NotAnEdgeSuperset: return "NotAnEdgeSuperset";
    case ErrorCode::ZeroGap: return "ZeroGap";
    case ErrorCode::MedConditionViolated: return "MedConditionViolated";
    case ErrorCode::Unsatisfiable: return "Unsatisfiable";
    case ErrorCode::NotEnoughCrossPairs: return "NotEnoughCrossPairs";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Library error. `value()` carries the quantity that tripped the check
/// (a margin, a commutator norm, a count) when there is one, NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

/// Largest singular value.
template <typename Derived>
double norm2(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  Eigen::BDCSVD<Plain> svd(m.eval());
  return svd.singularValues()(0);
}

template <typename Derived>
double frobenius(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

/// Promote any real or complex dense expression to a complex matrix.
template <typename Derived>
CMatrix to_complex(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<Complex>();
}

inline std::size_t binomial_saturating(std::size_t n, std::size_t k,
                                       std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // C(n, i) = C(n, i-1) * (n-i+1) / i stays integral at every step.
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::size_t>(acc);
}

}  // namespace subpert
