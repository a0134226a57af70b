#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "subpert/core.hpp"
#include "subpert/subspace_metric.hpp"

namespace subpert {

/// splitmix64 step; also used to derive xoshiro state from a 64-bit seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through splitmix64.
///
/// Streams: Rng::stream(seed, phase) seeds with
/// splitmix64(seed + phase * 0x9E3779B97F4A7C15), so every phase of a
/// pipeline (cluster sizes, intra edges, inter edges, k-means, ...) draws
/// from its own sequence and adding draws to one phase leaves the others
/// untouched. Uniform doubles take the top 53 bits; normals use Box-Muller
/// without caching. Everything is integer or IEEE-exact arithmetic plus
/// std::log/std::cos/std::sin, so ports replaying the same recipe line up.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t phase) {
    std::uint64_t sm = seed + phase * 0x9E3779B97F4A7C15ULL;
    return Rng(splitmix64(sm));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    while (true) {
      const std::uint64_t x = next();
      if (x >= limit) return x % bound;
    }
  }

  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    return {normal() / std::numbers::sqrt2, normal() / std::numbers::sqrt2};
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
  return m;
}

inline OrthonormalFrame random_frame(Eigen::Index n, Eigen::Index q, Rng& rng) {
  return orthonormalize(random_gaussian(n, q, rng));
}

inline CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  return random_frame(n, n, rng).matrix();
}

/// Hermitian matrix with i.i.d. complex Gaussian entries, scaled so that
/// ||E||_F is about `scale`.
inline CMatrix random_hermitian(Eigen::Index n, double scale, Rng& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  CMatrix h = 0.5 * (g + g.adjoint());
  const double f = h.norm();
  if (f > 0) h *= scale / f;
  return h;
}

/// exp(i H) for Hermitian H, through its eigendecomposition.
inline CMatrix unitary_exp(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  CVector phase(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phase(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace subpert
