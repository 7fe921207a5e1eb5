#include "tukey/oracle.hpp"

#include <gtest/gtest.h>

#include "support/test_support.hpp"
#include "tukey/bivariate.hpp"

using namespace tukey;

namespace {

const std::vector<std::vector<double>> kSimplex{
    {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

std::int32_t recount(const PointCloud& cloud, std::span<const double> u, const Tolerance& tol) {
  std::int32_t c = 0;
  for (std::int32_t i = 0; i < cloud.rows(); ++i) {
    if (tol.sign(dot(u, cloud.row(i)), cloud.row_norm(i)) <= 0) ++c;
  }
  return c + cloud.zero_count();
}

}  // namespace

TEST(DepthCritical, MatchesBivariateInThePlane) {
  Rng rng(0x0a11);
  for (int t = 0; t < 60; ++t) {
    const std::int32_t n = 3 + static_cast<std::int32_t>(rng.below(40));
    std::vector<double> y(2 * static_cast<std::size_t>(n));
    for (auto& v : y) v = rng.normal();
    PointCloud cloud = center_at(y, std::vector<double>{0.0, 0.0});
    EXPECT_EQ(depth_critical(cloud).numerator, sweep_brute_check(y));
    EXPECT_EQ(depth_critical(cloud).numerator, depth2_origin(y).numerator);
  }
}

TEST(DepthCritical, PlanarTriangleExample) {
  const std::vector<double> y{1, 0, 0, 1, -1, -1};
  PointCloud cloud = center_at(y, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(depth_critical(cloud).numerator, 1);
  EXPECT_EQ(depth_critical(cloud).numerator, sweep_brute_check(y));
}

TEST(DepthCritical, SimplexCenter) {
  PointCloud cloud = test::make_cloud(kSimplex);
  DepthResult r = depth_critical(cloud);
  EXPECT_EQ(r.numerator, 1);
  EXPECT_EQ(r.n, 4);
  EXPECT_DOUBLE_EQ(r.depth(), 0.25);
}

TEST(DepthCritical, QueryOutsideHullHasDepthZero) {
  PointCloud cloud = center_at(
      std::vector<double>{1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1, 0.3, 0.2, 0.1},
      std::vector<double>{100, 100, 100});
  EXPECT_EQ(depth_critical(cloud).numerator, 0);
}

TEST(DepthCritical, WitnessRecountsToNumerator) {
  Rng rng(0xde71);
  const Tolerance tol;
  for (int t = 0; t < 30; ++t) {
    const std::int32_t p = 3 + static_cast<std::int32_t>(rng.below(2));
    const std::int32_t n = p + 3 + static_cast<std::int32_t>(rng.below(20));
    PointCloud cloud = test::normal_instance(n, p, 0.4, rng.next_u64());
    DepthResult r = depth_critical(cloud, tol);
    EXPECT_EQ(recount(cloud, r.witness_direction, tol), r.numerator);
    EXPECT_NEAR(norm(r.witness_direction), 1.0, 1e-12);
  }
}

TEST(DepthCritical, PermutationAndRotationInvariant) {
  Rng rng(0x5a5a);
  Table data = gen_normal(14, 3, 77);
  PointCloud cloud = center_at(data.values, std::vector<double>(3, 0.0));
  const std::int32_t base = depth_critical(cloud).numerator;

  for (int t = 0; t < 10; ++t) {
    // permutation
    std::vector<std::int32_t> order(14);
    for (std::int32_t i = 0; i < 14; ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<double> shuffled;
    for (std::int32_t idx : order) {
      auto row = data.row(idx);
      shuffled.insert(shuffled.end(), row.begin(), row.end());
    }
    PointCloud pc = center_at(shuffled, std::vector<double>(3, 0.0));
    EXPECT_EQ(depth_critical(pc).numerator, base);

    // rotation
    const std::vector<double> rot = test::random_rotation(3, rng);
    std::vector<double> rotated(data.values.size());
    for (std::int32_t i = 0; i < 14; ++i) {
      for (std::int32_t a = 0; a < 3; ++a) {
        double s = 0.0;
        for (std::int32_t b = 0; b < 3; ++b) {
          s += rot[static_cast<std::size_t>(a) * 3 + b] * data.values[3 * static_cast<std::size_t>(i) + b];
        }
        rotated[3 * static_cast<std::size_t>(i) + a] = s;
      }
    }
    PointCloud rc = center_at(rotated, std::vector<double>(3, 0.0));
    EXPECT_EQ(depth_critical(rc).numerator, base);
  }
}

TEST(DepthCritical, GuardRefusesHugeInstances) {
  Table data = gen_normal(300, 5, 3);
  PointCloud cloud = center_at(data.values, std::vector<double>(5, 0.0));
  EXPECT_THROW(depth_critical(cloud), oracle_guard_error);
  EXPECT_FALSE(oracle_within_guard(300, 5));
  EXPECT_TRUE(oracle_within_guard(40, 5));
}

TEST(DepthCritical, FlagsCoplanarObservations) {
  // Row 2 = row 0 + row 1 puts three observations on a plane through 0.
  PointCloud cloud = test::make_cloud({{1.0, 0.25, -0.5},
                                       {0.5, 1.0, 0.75},
                                       {1.5, 1.25, 0.25},
                                       {-1.0, 0.5, 0.25},
                                       {0.25, -1.0, 1.0}});
  EXPECT_THROW(depth_critical(cloud), general_position_error);
}

TEST(DepthRandomUpper, AlwaysAtLeastExactAndDeterministic) {
  Rng rng(0x7e57);
  for (int t = 0; t < 20; ++t) {
    const std::int32_t n = 8 + static_cast<std::int32_t>(rng.below(20));
    PointCloud cloud = test::normal_instance(n, 3, 0.4, rng.next_u64());
    const std::int32_t exact = depth_critical(cloud).numerator;
    const std::uint64_t seed = rng.next_u64();
    const std::int32_t upper1 = depth_random_upper(cloud, 50, seed);
    const std::int32_t upper2 = depth_random_upper(cloud, 50, seed);
    EXPECT_GE(upper1, exact);
    EXPECT_EQ(upper1, upper2);
  }
}

TEST(DepthRandomUpper, ConvergesOnTheSimplex) {
  PointCloud cloud = test::make_cloud(kSimplex);
  EXPECT_EQ(depth_random_upper(cloud, 4000, 12345), 1);
}

TEST(CriticalDirectionType, InvariantsHold) {
  Rng rng(0xcd1);
  PointCloud cloud = test::normal_instance(12, 3, 0.0, 42);
  std::vector<std::int32_t> idx(2);
  first_combination(idx);
  do {
    CriticalDirection cd = critical_direction(cloud, Combination({idx[0], idx[1]}));
    EXPECT_NEAR(norm(cd.u), 1.0, 1e-12);
    for (std::int32_t j : cd.combo.indices) {
      EXPECT_NEAR(dot(cd.u, cloud.row(j)), 0.0, 1e-9 * cloud.row_norm(j));
    }
  } while (next_combination(idx, cloud.rows()));
}
