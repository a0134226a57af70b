#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"

using namespace subpert;
using namespace std::complex_literals;

TEST(SetDistances, Sep) {
  EXPECT_DOUBLE_EQ(sep({0, 1}, {3, 5}), 2.0);
  EXPECT_DOUBLE_EQ(sep({0, 2}, {2, 9}), 0.0);
  EXPECT_DOUBLE_EQ(sep({1i}, {-1i}), 2.0);
}

TEST(SetDistances, Hausdorff) {
  EXPECT_DOUBLE_EQ(hausdorff({1, 2i}, {1, 2i}), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff({0, 1}, {3, 5}), 4.0);
  EXPECT_DOUBLE_EQ(hausdorff({0}, {0, 7}), 7.0);
}

TEST(SetDistances, Diam) {
  EXPECT_DOUBLE_EQ(diam({3.0 + 1i}), 0.0);
  EXPECT_DOUBLE_EQ(diam({0, 3, 4i}), 5.0);
  EXPECT_DOUBLE_EQ(diam({1.0 + 1i, 1.0 + 1i}), 0.0);
}

TEST(SetDistances, EmptySetThrows) {
  try {
    sep({}, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySet);
  }
  EXPECT_THROW(hausdorff({1}, {}), Error);
  EXPECT_THROW(diam({}), Error);
}

TEST(SepPreserving, CheckExamples) {
  const auto a = sep_preserving_check({0}, {10}, {0.5, 9.5});
  EXPECT_TRUE(a.holds_full);
  EXPECT_DOUBLE_EQ(a.margin, 9.0);
  const auto b = sep_preserving_check({0}, {1}, {0.5});
  EXPECT_FALSE(b.holds_full);
  EXPECT_DOUBLE_EQ(b.margin, 0.0);
  const auto c = sep_preserving_check({0, 2i}, {5, 6}, {0, 2i, 5, 6});
  EXPECT_TRUE(c.holds_full);
  EXPECT_TRUE(c.holds_simple);
}

TEST(SepPreserving, PartitionExamples) {
  const auto a = sep_preserving_partition({0}, {10}, {0.5, 9.5});
  EXPECT_EQ(a.p_tilde, (std::vector<std::size_t>{0}));
  EXPECT_EQ(a.q_tilde, (std::vector<std::size_t>{1}));
  EXPECT_DOUBLE_EQ(a.new_sep_lower_bound, 9.0);

  const PointMultiset p{0, 1}, q{8, 9};
  const auto b = sep_preserving_partition(p, q, p + q);
  EXPECT_EQ(b.p_tilde, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(b.q_tilde, (std::vector<std::size_t>{2, 3}));

  const auto c = sep_preserving_partition({0, 1}, {8, 9}, {0.2, 1.1, 7.9, 9.3});
  EXPECT_EQ(c.p_tilde, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(c.q_tilde, (std::vector<std::size_t>{2, 3}));
}

TEST(SepPreserving, RefusesWhenConditionFails) {
  try {
    sep_preserving_partition({0}, {1}, {0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConditionViolated);
    EXPECT_DOUBLE_EQ(e.value(), 0.0);
  }
}

namespace {

PointMultiset random_set(Rng& rng, Complex centre, double spread, int max_size) {
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
  PointMultiset s;
  for (int i = 0; i < k; ++i)
    s.push_back(centre + spread * Complex(rng.normal(), rng.normal()));
  return s;
}

}  // namespace

TEST(SetGeometryProperties, SepDiamTriangleAndHausdorffShift) {
  Rng rng(99);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_set(rng, 0, 3, 6);
    const auto q = random_set(rng, 5, 3, 6);
    const auto r = random_set(rng, 2, 3, 6);
    EXPECT_LE(sep(p, q), sep(p, r) + sep(r, q) + diam(r) + 1e-12);
    EXPECT_LE(sep(p, q), sep(p, r) + hausdorff(r, q) + 1e-12);
  }
}

TEST(SetGeometryProperties, PartitionMatchesBruteForceProperties) {
  Rng rng(5);
  int produced = 0;
  for (int t = 0; t < 400; ++t) {
    const auto p = random_set(rng, 0, 1, 5);
    const auto q = random_set(rng, 12, 1, 5);
    PointMultiset r;
    for (const auto& z : p + q)
      r.push_back(z + 0.3 * Complex(rng.normal(), rng.normal()));
    if (!sep_preserving_check(p, q, r).holds_full) continue;
    ++produced;
    const auto part = sep_preserving_partition(p, q, r);
    const auto pt = select(r, part.p_tilde);
    const auto qt = select(r, part.q_tilde);
    EXPECT_EQ(part.p_tilde.size() + part.q_tilde.size(), r.size());
    for (const auto& z : pt) EXPECT_LE(distance_to_set(z, p), distance_to_set(z, q));
    for (const auto& z : qt) EXPECT_LT(distance_to_set(z, q), distance_to_set(z, p));
    if (!pt.empty() && !qt.empty()) {
      EXPECT_GE(sep(pt, qt), part.new_sep_lower_bound - 1e-12);
      EXPECT_NEAR(std::max(hausdorff(p, pt), hausdorff(q, qt)),
                  hausdorff(p + q, r), 1e-12);
    }
  }
  EXPECT_GT(produced, 100);
}
