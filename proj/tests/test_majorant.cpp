#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fsi/majorant.hpp"
#include "support.hpp"

using namespace fsi;

namespace {

MajorantModel quad_model(double eta, double l0, double nu, double radius) {
  return MajorantModel(eta, radius, OmegaMeasure::hoelder(l0, 1.0, nu));
}

}  // namespace

TEST(OmegaMeasure, HoelderEvaluation) {
  EXPECT_DOUBLE_EQ(eval_omega(OmegaMeasure::hoelder(1.0, 1.0, 0.0), 0.25), 0.25);
  EXPECT_DOUBLE_EQ(eval_omega(OmegaMeasure::hoelder(0.0, 1.0, 0.3), 5.0), 0.3);
  EXPECT_NEAR(eval_omega(OmegaMeasure::hoelder(0.5, 0.5, 0.1), 0.04), 0.2, 1e-15);
}

TEST(OmegaMeasure, RejectsInvalidInput) {
  EXPECT_THROW(OmegaMeasure::hoelder(-1.0, 1.0, 0.0), Error);
  EXPECT_THROW(OmegaMeasure::hoelder(1.0, 0.0, 0.0), Error);
  EXPECT_THROW(OmegaMeasure::hoelder(1.0, 1.5, 0.0), Error);
  EXPECT_THROW(OmegaMeasure::hoelder(1.0, 1.0, -0.1), Error);
  EXPECT_THROW(OmegaMeasure::tabulated({{0.0, 0.1}}), Error);
  EXPECT_THROW(OmegaMeasure::tabulated({{0.1, 0.1}, {1.0, 0.2}}), Error);
  EXPECT_THROW(OmegaMeasure::tabulated({{0.0, 0.3}, {1.0, 0.2}}), Error);
  EXPECT_THROW(OmegaMeasure::tabulated({{0.0, 0.1}, {0.0, 0.2}}), Error);
  EXPECT_THROW(eval_omega(OmegaMeasure::hoelder(1.0, 1.0, 0.0), -1.0), Error);
  EXPECT_THROW(eval_omega(OmegaMeasure::tabulated({{0.0, 0.1}, {1.0, 0.2}}), 1.5),
               Error);
}

TEST(OmegaMeasure, TabulatedInterpolatesAndIntegrates) {
  const auto w = OmegaMeasure::tabulated({{0.0, 0.1}, {1.0, 0.3}, {3.0, 0.3}});
  EXPECT_DOUBLE_EQ(w(0.5), 0.2);
  EXPECT_DOUBLE_EQ(w(2.0), 0.3);
  EXPECT_DOUBLE_EQ(w.integral(1.0), 0.2);
  EXPECT_NEAR(w.integral(0.5), 0.5 * (0.1 + 0.2) * 0.5, 1e-16);
  EXPECT_NEAR(w.integral(3.0), 0.2 + 0.6, 1e-15);
  EXPECT_DOUBLE_EQ(w.nu(), 0.1);
  EXPECT_DOUBLE_EQ(w.max_radius(), 3.0);
}

TEST(MajorantModel, RejectsInvalidBundle) {
  const auto w = OmegaMeasure::hoelder(1.0, 1.0, 0.0);
  EXPECT_THROW(MajorantModel(0.0, 1.0, w), Error);
  EXPECT_THROW(MajorantModel(0.5, 0.0, w), Error);
  EXPECT_THROW(MajorantModel(0.5, INFINITY, w), Error);
  EXPECT_THROW(MajorantModel(0.5, 2.0, OmegaMeasure::tabulated({{0.0, 0.0}, {1.0, 0.1}})),
               Error);
}

TEST(Majorant, Examples) {
  const auto m = MajorantModel(0.5, 10.0, OmegaMeasure::hoelder(0.25, 1.0, 0.0));
  EXPECT_DOUBLE_EQ(majorant(m, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(majorant(m, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(majorant(quad_model(1.0, 0.0, 0.5, 10.0), 1.0), 1.5);
  EXPECT_THROW(majorant(m, 10.5), Error);
}

TEST(MajorantGap, Examples) {
  const auto m = quad_model(0.5, 0.5, 0.0, 10.0);
  EXPECT_NEAR(majorant_gap(m, 2.0 - std::sqrt(2.0)), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(majorant_gap(m, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(majorant_gap(m, 1.0), -0.25);
}

TEST(ContractionRadius, Examples) {
  EXPECT_DOUBLE_EQ(contraction_radius(quad_model(0.5, 0.5, 0.0, 10.0)), 2.0);
  EXPECT_DOUBLE_EQ(contraction_radius(quad_model(0.5, 0.0, 0.2, 3.0)), 3.0);
  EXPECT_DOUBLE_EQ(
      contraction_radius(MajorantModel(0.5, 10.0, OmegaMeasure::hoelder(1.0, 0.5, 0.0))),
      1.0);
  EXPECT_THROW(contraction_radius(quad_model(0.5, 1.0, 1.0, 10.0)), Error);
}

TEST(ContractionRadius, TabulatedCrossing) {
  const auto w = OmegaMeasure::tabulated({{0.0, 0.2}, {1.0, 0.6}, {2.0, 1.4}});
  EXPECT_NEAR(contraction_radius(MajorantModel(0.1, 2.0, w)), 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(contraction_radius(MajorantModel(0.1, 0.9, w)), 0.9);
}

TEST(MinimalRoot, Examples) {
  EXPECT_NEAR(*minimal_root(quad_model(0.5, 0.5, 0.0, 10.0)), 2.0 - std::sqrt(2.0),
              1e-12);
  EXPECT_NEAR(*minimal_root(quad_model(0.5, 1.0, 0.0, 10.0)), 1.0, 1e-12);
  EXPECT_FALSE(minimal_root(quad_model(1.0, 1.0, 0.0, 10.0)).has_value());
}

TEST(MaximalRoot, Examples) {
  EXPECT_NEAR(*maximal_root(quad_model(0.5, 0.5, 0.0, 10.0)), 2.0 + std::sqrt(2.0),
              1e-11);
  EXPECT_NEAR(*maximal_root(quad_model(0.5, 1.0, 0.0, 10.0)), 1.0, 1e-12);
  EXPECT_FALSE(maximal_root(quad_model(0.5, 0.5, 0.0, 3.0)).has_value());
  EXPECT_THROW(maximal_root(quad_model(1.0, 1.0, 0.0, 10.0)), Error);
}

TEST(UniquenessRadius, Examples) {
  const auto open = uniqueness_radius(quad_model(0.5, 0.5, 0.0, 10.0));
  EXPECT_NEAR(open.radius, 2.0 + std::sqrt(2.0), 1e-11);
  EXPECT_EQ(open.boundary, Boundary::Open);

  const auto tangent = uniqueness_radius(quad_model(0.5, 1.0, 0.0, 10.0));
  EXPECT_NEAR(tangent.radius, 1.0, 1e-12);
  EXPECT_EQ(tangent.boundary, Boundary::Closed);

  const auto clipped = uniqueness_radius(quad_model(0.5, 0.5, 0.0, 3.0));
  EXPECT_DOUBLE_EQ(clipped.radius, 3.0);
  EXPECT_EQ(clipped.boundary, Boundary::Closed);
}

TEST(ScalarSequence, Examples) {
  const auto seq = scalar_sequence(quad_model(0.5, 0.5, 0.0, 10.0), 1e-14, 500);
  ASSERT_GE(seq.size(), 3u);
  EXPECT_EQ(seq[0], 0.0);
  EXPECT_EQ(seq[1], 0.5);
  EXPECT_EQ(seq[2], 0.5625);
  EXPECT_NEAR(seq.back(), 2.0 - std::sqrt(2.0), 1e-12);

  const auto flat = scalar_sequence(quad_model(0.5, 0.0, 0.0, 10.0), 1e-14, 10);
  EXPECT_EQ(flat[1], 0.5);
  EXPECT_EQ(flat.back(), 0.5);

  const auto affine = scalar_sequence(quad_model(0.5, 0.0, 0.5, 10.0), 1e-14, 200);
  for (std::size_t k = 1; k < 20; ++k) {
    EXPECT_NEAR(1.0 - affine[k], std::ldexp(1.0, -static_cast<int>(k)), 1e-15);
  }
  EXPECT_NEAR(affine.back(), 1.0, 1e-13);

  EXPECT_THROW(scalar_sequence(quad_model(1.0, 1.0, 0.0, 10.0), 1e-14, 100), Error);
  try {
    scalar_sequence(quad_model(0.5, 1.0, 0.0, 10.0), 1e-15, 20);
    FAIL() << "tangency should exhaust 20 iterations";
  } catch (const MaxIterExceeded& e) {
    EXPECT_EQ(e.partial().size(), 21u);
  }
}

TEST(MajorantProperty, MonotoneMeasureAndMajorant) {
  test::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double radius = gen.log_uniform(0.1, 20.0);
    const OmegaMeasure w = trial % 2 == 0
                               ? OmegaMeasure::hoelder(gen.hoelder_params().measure())
                               : gen.tabulated(radius, 2.0);
    const MajorantModel m(gen.log_uniform(1e-3, 2.0), radius, w);
    for (int i = 0; i < 20; ++i) {
      double a = gen.uniform(0.0, radius);
      double b = gen.uniform(0.0, radius);
      if (a > b) std::swap(a, b);
      EXPECT_LE(w(a), w(b));
      EXPECT_GE(w(a), 0.0);
      EXPECT_LE(majorant(m, a), majorant(m, b));
    }
  }
}

TEST(MajorantProperty, GapIsConvex) {
  test::Gen gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double radius = gen.log_uniform(0.1, 20.0);
    const OmegaMeasure w = trial % 2 == 0
                               ? OmegaMeasure::hoelder(gen.hoelder_params().measure())
                               : gen.tabulated(radius, 2.0);
    const MajorantModel m(gen.log_uniform(1e-3, 2.0), radius, w);
    for (int i = 0; i < 20; ++i) {
      double v[3] = {gen.uniform(0.0, radius), gen.uniform(0.0, radius),
                     gen.uniform(0.0, radius)};
      std::sort(v, v + 3);
      if (v[2] - v[0] < 1e-9) continue;
      const double t = (v[1] - v[0]) / (v[2] - v[0]);
      const double chord =
          (1.0 - t) * majorant_gap(m, v[0]) + t * majorant_gap(m, v[2]);
      const double scale = std::max(1.0, std::abs(chord));
      EXPECT_LE(majorant_gap(m, v[1]), chord + 1e-12 * scale);
    }
  }
}

TEST(MajorantProperty, RootBracketing) {
  test::Gen gen(13);
  int certified = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = gen.hoelder_params();
    const MajorantModel m(p.eta, gen.log_uniform(0.5, 50.0),
                          OmegaMeasure::hoelder(p.measure()));
    const auto roots = scalar_roots(m);
    if (!roots.min_root) continue;
    ++certified;
    const double nu_star = *roots.min_root;
    EXPECT_GT(nu_star, 0.0);
    EXPECT_LE(nu_star, roots.contraction_radius);
    EXPECT_LE(majorant_gap(m, nu_star), 1e-12 * std::max(1.0, m.eta()));
    const double probe = 1e-6 * nu_star;
    EXPECT_GT(majorant_gap(m, nu_star - probe), 0.0);
    if (roots.max_root) {
      EXPECT_LE(nu_star, *roots.max_root);
    }
    if (roots.uniqueness.radius > nu_star * (1.0 + 1e-6)) {
      for (int i = 1; i < 10; ++i) {
        const double v =
            nu_star + (roots.uniqueness.radius - nu_star) * i / 10.0;
        EXPECT_LT(majorant_gap(m, v), 0.0);
      }
    }
  }
  EXPECT_GT(certified, 50);
}

TEST(MajorantProperty, ConstraintAMatchesGridScan) {
  test::Gen gen(14);
  for (int trial = 0; trial < 200; ++trial) {
    const double radius = gen.log_uniform(0.5, 10.0);
    const OmegaMeasure w = trial % 2 == 0
                               ? OmegaMeasure::hoelder(gen.hoelder_params().measure())
                               : gen.tabulated(radius, 1.5);
    const MajorantModel m(gen.log_uniform(1e-3, 2.0), radius, w);
    if (w.nu() >= 1.0) continue;
    const double gamma = contraction_radius(m);
    const bool absent = !minimal_root(m).has_value();
    EXPECT_EQ(absent, majorant(m, gamma) > gamma);

    double lowest = INFINITY;
    const int points = 100001;
    for (int i = 0; i < points; ++i) {
      lowest = std::min(lowest, majorant_gap(m, std::min(radius, radius * i / (points - 1))));
    }
    // A grid can only miss a dip narrower than its spacing.
    if (std::abs(lowest) > 1e-6) {
      EXPECT_EQ(absent, lowest > 0.0);
    }
  }
}

TEST(MajorantProperty, SequenceIsMonotoneAndBounded) {
  test::Gen gen(15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = gen.hoelder_params();
    const MajorantModel m(p.eta, 50.0, OmegaMeasure::hoelder(p.measure()));
    const auto nu_star = minimal_root(m);
    if (!nu_star) continue;
    // Stay away from tangency, where convergence is sublinear.
    const auto roots = scalar_roots(m);
    if (roots.max_root && *roots.max_root - *nu_star < 1e-2 * *nu_star) continue;
    const auto seq = scalar_sequence(m, 1e-14, 100000);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      EXPECT_LE(seq[k - 1], seq[k]);
      EXPECT_LE(seq[k], *nu_star + 1e-12);
    }
    EXPECT_NEAR(seq.back(), *nu_star, 1e-10 * std::max(1.0, *nu_star));
  }
}

TEST(MajorantProperty, TabulatedSamplingOfHoelderAgrees) {
  for (double l0 : {0.5, 1.0, 2.0}) {
    for (double alpha : {0.5, 0.75, 1.0}) {
      for (double nu : {0.0, 0.3}) {
        const double radius = 4.0;
        const auto h = OmegaMeasure::hoelder(l0, alpha, nu);
        std::vector<Knot> knots;
        for (int i = 0; i <= 10000; ++i) {
          const double r = radius * i / 10000.0;
          knots.push_back({r, h(r)});
        }
        const double eta = 0.5 * holder_eta_max({l0, alpha, nu});
        const MajorantModel mh(eta, radius, h);
        const MajorantModel mt(eta, radius, OmegaMeasure::tabulated(std::move(knots)));
        const auto rh = scalar_roots(mh);
        const auto rt = scalar_roots(mt);
        ASSERT_EQ(rh.min_root.has_value(), rt.min_root.has_value());
        if (!rh.min_root) continue;
        EXPECT_NEAR(*rh.min_root, *rt.min_root, 1e-4);
        EXPECT_NEAR(rh.contraction_radius, rt.contraction_radius, 1e-4);
        EXPECT_NEAR(rh.uniqueness.radius, rt.uniqueness.radius, 1e-4);
      }
    }
  }
}

TEST(ConvexRoots, QuadraticOracle) {
  test::Gen gen(16);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = gen.log_uniform(0.1, 10.0);
    const double r1 = gen.uniform(0.1, 2.0);
    const double r2 = r1 + gen.uniform(0.01, 2.0);
    auto f = [&](double v) { return a * (v - r1) * (v - r2); };
    const auto roots = convex_roots(f, 0.5 * (r1 + r2), 10.0, 1e-13, 1.0);
    ASSERT_TRUE(roots.min_root && roots.max_root);
    EXPECT_NEAR(*roots.min_root, r1, 1e-10);
    EXPECT_NEAR(*roots.max_root, r2, 1e-10);
    EXPECT_FALSE(roots.tangent);
  }
}
