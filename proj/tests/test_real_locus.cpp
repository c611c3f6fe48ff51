#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace mironov;
using namespace mironov::testing;

namespace {

RealBasePoint coordinate_base_gr23() {
  RealMatrix rows(2, 3);
  rows << 1, 0, 0, 0, 1, 0;
  return RealBasePoint(rows);
}

FiberDirection e1_direction(const RealBasePoint& base) {
  RealVector u(3);
  u << 0, 1, 0;
  return FiberDirection(base, u);
}

}  // namespace

TEST(Sigma, Examples) {
  const PlueckerPoint w(1, 2, (ComplexVector(2) << 1.0, kI).finished());
  const auto s = sigma(w);
  EXPECT_EQ(s[0], complex(1.0));
  EXPECT_EQ(s[1], -kI);
  Rng rng(40);
  const auto r = pluecker_embed(Frame(rng.complex_gaussian_matrix(2, 5)));
  EXPECT_LT(projective_distance(sigma(sigma(r)).coords(), r.coords()), 1e-14);
  const auto real = pluecker_embed(sample_real_grassmannian(2, 5, rng));
  EXPECT_TRUE(sigma(real).projectively_equals(real));
}

TEST(IsRealPoint, Examples) {
  Rng rng(41);
  const auto real = pluecker_embed(sample_real_grassmannian(3, 6, rng));
  EXPECT_TRUE(is_real_point(real));
  EXPECT_TRUE(is_real_point(PlueckerPoint(3, 6, complex(0.0, 1.0) * real.coords())));
  EXPECT_TRUE(is_real_point(PlueckerPoint(3, 6, std::polar(2.0, 0.4) * real.coords())));
  // span(e0 + i e1, e2) in C^4: w02 = 1, w12 = i, other minors 0
  const auto w = pluecker_embed(frame_from_rows({{1, kI, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_LT(std::abs(w[1] - 1.0), 1e-15);
  EXPECT_LT(std::abs(w[3] - kI), 1e-15);
  EXPECT_FALSE(is_real_point(w));
}

TEST(SampleRealGrassmannian, Properties) {
  Rng a(42), b(42);
  const Frame f = sample_real_grassmannian(3, 3, a);
  EXPECT_TRUE(f.is_real());
  EXPECT_LT(max_abs(projector(f) - ComplexMatrix::Identity(3, 3)), 1e-12);
  EXPECT_EQ(max_abs(sample_real_grassmannian(3, 3, b).rows() - f.rows()), 0.0);
  Rng c(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Frame g = sample_real_grassmannian(2, 5, c);
    EXPECT_LT(max_abs(g.rows() * g.rows().adjoint() - ComplexMatrix::Identity(2, 2)), 1e-12);
    EXPECT_TRUE(is_real_point(pluecker_embed(g)));
  }
}

TEST(RealBasePoint, Validation) {
  RealMatrix bad(1, 3);
  bad << 0, 0, 1;
  EXPECT_THROW(RealBasePoint{bad}, Error);
  RealMatrix unnormalized(1, 3);
  unnormalized << 2, 0, 0;
  EXPECT_THROW(RealBasePoint{unnormalized}, Error);
  const auto base = coordinate_base_gr23();
  RealVector outside(3);
  outside << 0, 0, 1;
  EXPECT_THROW(FiberDirection(base, outside), Error);
}

TEST(LevelFiberSolve, Gr23Example) {
  const auto base = coordinate_base_gr23();
  const auto u = e1_direction(base);
  const Frame L = level_fiber_solve(base, u, 0.5);
  const double r = 1.0 / std::sqrt(2.0);
  const Frame expected = frame_from_rows({{1, 0, 0}, {0, r, r}});
  EXPECT_TRUE(pluecker_embed(L).projectively_equals(pluecker_embed(expected)));
  EXPECT_NEAR(grassmann_moment(2, pluecker_embed(L)), 0.5, 1e-15);
  EXPECT_NEAR((projector(L) * unit(3, 2)).squaredNorm(), 0.5, 1e-15);

  const Frame L2 = level_fiber_solve(base, -u, 0.5);
  const Frame expected2 = frame_from_rows({{1, 0, 0}, {0, -r, r}});
  EXPECT_TRUE(pluecker_embed(L2).projectively_equals(pluecker_embed(expected2)));
  EXPECT_FALSE(pluecker_embed(L2).projectively_equals(pluecker_embed(L)));
  EXPECT_EQ(joint_rank(L, L2), 3);  // intersection is span(e0)
}

TEST(LevelFiberSolve, RejectsCriticalLevels) {
  const auto base = coordinate_base_gr23();
  for (double c : {0.0, 1.0, -0.2, 1.5}) {
    try {
      level_fiber_solve(base, e1_direction(base), c);
      FAIL() << "expected InvalidLevel for c=" << c;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidLevel);
    }
  }
}

TEST(LevelFiberSolve, DegeneratesOntoBaseAsLevelVanishes) {
  const auto base = coordinate_base_gr23();
  const auto w0 = pluecker_embed(Frame::from_real(base.rows()));
  const auto w = pluecker_embed(level_fiber_solve(base, e1_direction(base), 1e-14));
  EXPECT_LT(projective_distance(w.coords(), w0.coords()), 1e-6);
}

TEST(LevelFiberSolve, LevelAndPairProperties) {
  Rng rng(44);
  const int shapes[][2] = {{1, 3}, {2, 4}, {2, 5}, {3, 5}, {3, 6}, {4, 7}};
  for (const auto& s : shapes) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto base = sample_base_point(s[0], s[1], rng);
      const auto u = FiberDirection::random(base, rng);
      const double c = rng.uniform(0.01, 0.99);
      const Frame a = level_fiber_solve(base, u, c);
      const Frame b = level_fiber_solve(base, -u, c);
      const auto wa = pluecker_embed(a), wb = pluecker_embed(b);
      EXPECT_NEAR(grassmann_moment(s[1] - 1, wa), c, 1e-12);
      EXPECT_NEAR(grassmann_moment(s[1] - 1, wb), c, 1e-12);
      EXPECT_TRUE(is_real_point(wa));
      EXPECT_FALSE(wa.projectively_equals(wb));
      // dim(L cap L') = 2k - dim(L + L') = k - 1
      EXPECT_EQ(2 * s[0] - joint_rank(a, b), s[0] - 1);
      // both contain M = u^perp within the base
      const Frame base_frame = Frame::from_real(base.rows());
      if (s[0] > 1) {
        EXPECT_EQ(joint_rank(a, base_frame), s[0] + 1);
      }
      EXPECT_EQ(classify_critical(s[1] - 1, a), CriticalClass::Regular);
    }
  }
}

TEST(LevelFiberSolve, ExactlyTwoSolutionsThroughM) {
  // Every k-plane in R e_n + L0 containing M is M + span(cos a u + sin a e_n);
  // scan a in [0, pi) (lines, so pi-periodic) for roots of F(mu_n) - c.
  Rng rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const auto base = sample_base_point(3, 6, rng);
    const auto u = FiberDirection::random(base, rng);
    const double c = rng.uniform(0.05, 0.95);
    const RealMatrix m = fiber_complement(base, u);
    const auto level_at = [&](double angle) {
      RealMatrix rows(3, 6);
      rows.topRows(2) = m;
      RealVector x = std::cos(angle) * u.u();
      x(5) += std::sin(angle);
      rows.row(2) = x.transpose();
      return Frame::from_real(rows);
    };
    const auto g = [&](double angle) { return grassmann_moment(5, pluecker_embed(level_at(angle))) - c; };
    std::vector<double> roots;
    const int grid = 1000;
    for (int j = 0; j < grid; ++j) {
      double lo = std::numbers::pi * j / grid, hi = std::numbers::pi * (j + 1) / grid;
      if ((g(lo) < 0) == (g(hi) < 0)) continue;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((g(lo) < 0) == (g(mid) < 0) ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    ASSERT_EQ(roots.size(), 2u);
    const auto plus = pluecker_embed(level_fiber_solve(base, u, c));
    const auto minus = pluecker_embed(level_fiber_solve(base, -u, c));
    int hit_plus = 0, hit_minus = 0;
    for (double r : roots) {
      const auto w = pluecker_embed(level_at(r));
      EXPECT_LT(std::abs(grassmann_moment(5, w) - c), 1e-9);
      hit_plus += w.projectively_equals(plus);
      hit_minus += w.projectively_equals(minus);
    }
    EXPECT_EQ(hit_plus, 1);
    EXPECT_EQ(hit_minus, 1);
  }
}

TEST(SampleLevelSet, SamplesLieOnRealLevelSet) {
  Rng rng(46);
  const auto pts = sample_level_set(2, 4, 0.3, 100, rng);
  ASSERT_EQ(pts.size(), 100u);
  for (const auto& p : pts) {
    const auto w = pluecker_embed(p.frame);
    EXPECT_TRUE(is_real_point(w));
    EXPECT_NEAR(grassmann_moment(3, w), 0.3, 1e-12);
    EXPECT_EQ(classify_critical(3, p.frame), CriticalClass::Regular);
    EXPECT_EQ(p.param.t, 0.0);
  }
  EXPECT_THROW(sample_level_set(2, 4, 1.0, 1, rng), Error);
}

TEST(SampleLevelSet, ParameterCount) {
  // dim Gr_R(k, n) + (k - 1) = k (n - k) + k - 1 = dim Gr_R(k, n+1) - 1
  for (auto [k, n1, expected] : {std::tuple{2, 3, 1}, std::tuple{2, 4, 3}}) {
    Rng rng(47);
    const auto base = sample_base_point(k, n1, rng);
    const auto u = FiberDirection::random(base, rng);
    EXPECT_EQ(static_cast<int>(level_set_velocities(base, u, 0.5).size()), expected);
    EXPECT_EQ(expected, k * (n1 - k) - 1);
  }
}
