#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "vpnn/error.hpp"
#include "vpnn/transform.hpp"

namespace vpnn {
namespace {

constexpr double kN = 0.0938;

void expect_vec3(const Vec3& v, double a, double b, double c, double tol = 1e-15) {
  EXPECT_NEAR(v.c1, a, tol);
  EXPECT_NEAR(v.c2, b, tol);
  EXPECT_NEAR(v.c3, c, tol);
}

// Brute-force nearest point on the ramp over the grid x_k = k / (count - 1).
struct GridHit {
  double x = 0.0;
  double dist_sq = 0.0;
};

GridHit grid_nearest(const Vec3& rgb, const ColorParams& p, int count) {
  GridHit best{0.0, INFINITY};
  for (int k = 0; k < count; ++k) {
    const double x = static_cast<double>(k) / (count - 1);
    const double d = norm_sq(color_encode(x, p) - rgb);
    if (d < best.dist_sq) best = {x, d};
  }
  return best;
}

TEST(WindowEncode, ThreeColumnExample) {
  Matrix s(2, 3);
  s << 1, 2, 3,
       4, 5, 6;
  const VecMatrix v = window_encode(s);
  Matrix prev(2, 3), next(2, 3);
  prev << 1, 1, 2,
          4, 4, 5;
  next << 2, 3, 3,
          5, 6, 6;
  EXPECT_EQ(v.p1(), prev);
  EXPECT_EQ(v.p2(), s);
  EXPECT_EQ(v.p3(), next);
}

TEST(WindowEncode, SingleFrameAndConstantInTime) {
  std::mt19937_64 rng(1);
  const Matrix one = test::random_matrix(5, 1, rng, 0, 1);
  const VecMatrix v = window_encode(one);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(v.plane(k), one);

  const Matrix constant = one.replicate(1, 7);
  const VecMatrix c = window_encode(constant);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(c.plane(k), constant);

  EXPECT_THROW(window_encode(Matrix(3, 0)), Error);
}

TEST(WindowDecode, RoundtripExactAndClamps) {
  std::mt19937_64 rng(2);
  const Matrix s = test::random_matrix(9, 11, rng, 0, 1);
  EXPECT_EQ(window_decode(window_encode(s)), s);

  const VecMatrix v = test::random_vecmatrix(4, 4, rng, -2, 2);
  const Matrix d = window_decode(v);
  EXPECT_EQ(d, v.p2().cwiseMax(0.0).cwiseMin(1.0));
}

TEST(ContextStack, MatchesWindowPlanes) {
  std::mt19937_64 rng(3);
  const Matrix s = test::random_matrix(4, 6, rng, 0, 1);
  const Matrix stacked = context_stack(s);
  const VecMatrix v = window_encode(s);
  ASSERT_EQ(stacked.rows(), 12);
  EXPECT_EQ(stacked.topRows(4), v.p1());
  EXPECT_EQ(stacked.middleRows(4, 4), v.p2());
  EXPECT_EQ(stacked.bottomRows(4), v.p3());
}

TEST(ColorEncode, Examples) {
  const ColorParams p{kN};
  expect_vec3(color_encode(0.0, p), 0, 0, 0);
  expect_vec3(color_encode(kN, p), 1, 0, 0);
  expect_vec3(color_encode(2 * kN, p), 1, 1, 0);
  expect_vec3(color_encode(1.0, p), 1, 1, 1);
  expect_vec3(color_encode(kN / 2, p), 0.5, 0, 0);
}

TEST(ColorEncode, RejectsOutOfRangeAndBadParams) {
  const ColorParams p{kN};
  EXPECT_THROW(color_encode(Matrix::Constant(1, 1, 1.5), p), Error);
  EXPECT_THROW(color_encode(Matrix::Constant(1, 1, -0.1), p), Error);
  EXPECT_THROW((ColorParams{0.0}).validate(), Error);
  EXPECT_THROW((ColorParams{0.5}).validate(), Error);
  EXPECT_NO_THROW((ColorParams{0.25}).validate());
}

TEST(ColorEncode, ComponentsNondecreasingAndInjective) {
  for (double n : {0.01, kN, 0.3, 0.49}) {
    const ColorParams p{n};
    Vec3 prev = color_encode(0.0, p);
    for (int k = 1; k <= 10000; ++k) {
      const Vec3 cur = color_encode(k / 10000.0, p);
      EXPECT_GE(cur.c1, prev.c1);
      EXPECT_GE(cur.c2, prev.c2);
      EXPECT_GE(cur.c3, prev.c3);
      EXPECT_GT(norm_sq(cur - prev), 0.0);
      prev = cur;
    }
  }
}

TEST(ColorDecode, CornersAndRoundtrip) {
  const ColorParams p{kN};
  EXPECT_EQ(color_decode(Vec3{0, 0, 0}, p), 0.0);
  EXPECT_DOUBLE_EQ(color_decode(Vec3{1, 1, 1}, p), 1.0);
  double worst = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double x = k / 10000.0;
    worst = std::max(worst, std::abs(color_decode(color_encode(x, p), p) - x));
  }
  EXPECT_LE(worst, 1e-9);

  std::mt19937_64 rng(4);
  const Matrix s = test::random_matrix(7, 5, rng, 0, 1);
  EXPECT_LE((color_decode(color_encode(s, p), p) - s).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ColorDecode, OffCurveExampleAgainstGrid) {
  const ColorParams p{kN};
  const Vec3 rgb{0.5, -0.1, 0.0};
  const double x = color_decode(rgb, p);
  // 100001 points: spacing 1e-5, which contains 0.5·n exactly.
  const GridHit grid = grid_nearest(rgb, p, 100001);
  EXPECT_NEAR(x, grid.x, 1e-6);
  EXPECT_NEAR(x, 0.5 * kN, 1e-15);
}

TEST(ColorDecode, ProjectionNoWorseThanDenseGrid) {
  const ColorParams p{kN};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-0.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 rgb{dist(rng), dist(rng), dist(rng)};
    const double x = color_decode(rgb, p);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    const double analytic = std::sqrt(norm_sq(color_encode(x, p) - rgb));
    const double grid = std::sqrt(grid_nearest(rgb, p, 2001).dist_sq);
    EXPECT_LE(analytic, grid + 1e-8);
  }
}

TEST(ColorDecode, OutputAlwaysInUnitInterval) {
  const ColorParams p{kN};
  std::mt19937_64 rng(6);
  const VecMatrix v = test::random_vecmatrix(20, 20, rng, -5, 5);
  const Matrix d = color_decode(v, p);
  EXPECT_GE(d.minCoeff(), 0.0);
  EXPECT_LE(d.maxCoeff(), 1.0);
}

TEST(Normalize, Examples) {
  const MagnitudeMatrix zero = normalize(Matrix::Zero(3, 4));
  EXPECT_EQ(zero.scale, kNormalizationFloor);
  EXPECT_TRUE(zero.data.isZero(0.0));

  std::mt19937_64 rng(7);
  const Matrix m = test::random_matrix(6, 5, rng, 0, 3);
  const MagnitudeMatrix n = normalize(m);
  EXPECT_EQ(n.scale, m.maxCoeff());
  EXPECT_EQ(n.data.maxCoeff(), 1.0);
  EXPECT_LE((denormalize(n) - m).cwiseAbs().maxCoeff(), 1e-15);

  // A stem louder than the mixture peak clamps at 1.
  Matrix stem = m;
  stem(0, 0) = 2.0 * m.maxCoeff();
  const MagnitudeMatrix clamped = normalize(stem, n.scale);
  EXPECT_EQ(clamped.data(0, 0), 1.0);
  EXPECT_EQ(clamped.data.maxCoeff(), 1.0);

  EXPECT_THROW(normalize(Matrix::Constant(1, 1, -1.0)), Error);
}

TEST(TransformKind, Names) {
  for (TransformKind k : {TransformKind::None, TransformKind::Window, TransformKind::Color}) {
    EXPECT_EQ(parse_transform_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_transform_kind("fourier"), Error);
}

}  // namespace
}  // namespace vpnn
