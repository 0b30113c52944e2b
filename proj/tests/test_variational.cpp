#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hillspec/oracle.hpp"
#include "hillspec/spectral.hpp"
#include "hillspec/variational.hpp"

using namespace hillspec;

namespace {

constexpr double kPi = std::numbers::pi;

const MeshHierarchy& mathieu() {
  static const MeshHierarchy meshes(builtin("mathieu"));
  return meshes;
}

PeriodicPotential free_potential() { return PeriodicPotential::constant(0.0, 2 * kPi, "free"); }

}  // namespace

TEST(Variational, FreeEquationClosedForm) {
  const double l = 2 * kPi;
  for (double lambda : {0.3, 1.0, 2.2}) {
    const double k = std::sqrt(lambda);
    const double s = std::sin(k * l);
    const double c = std::cos(k * l);
    const auto r = variational_monodromy(free_potential(), lambda, 1e-12);
    EXPECT_NEAR(r.derivatives.u_l, -l * s / (2 * k), 1e-10);
    EXPECT_NEAR(r.derivatives.u_xl, -s / (2 * k) - l * c / 2, 1e-10);
    EXPECT_NEAR(r.derivatives.v_l, (l * c / k - s / (k * k)) / (2 * k), 1e-10);
    EXPECT_NEAR(r.derivatives.v_xl, -l * s / (2 * k), 1e-10);
  }
  const auto at_one = variational_monodromy(free_potential(), 1.0, 1e-12);
  EXPECT_NEAR(at_one.derivatives.u_l, 0.0, 1e-10);
  EXPECT_NEAR(at_one.derivatives.v_xl, 0.0, 1e-10);
  EXPECT_NEAR(at_one.derivatives.u_xl, -kPi, 1e-10);
}

TEST(Variational, MathieuTableRows) {
  const auto a = variational_monodromy(mathieu(), 1.0, 1e-8);
  EXPECT_NEAR(a.derivatives.u_xl, -1.684311, 1e-3 * 1.684311);
  EXPECT_NEAR(std::fabs(a.derivatives.v_l), 5.277455, 1e-3 * 5.277455);
  const auto b = variational_monodromy(mathieu(), -0.35, 1e-8);
  EXPECT_NEAR(b.derivatives.u_xl, -63.7916, 1e-3 * 63.7916);
  EXPECT_NEAR(b.derivatives.v_l, -56.24019, 1e-3 * 56.24019);
}

TEST(Variational, Ex3OverTwoPeriods) {
  const auto r = variational_monodromy(repeat_period(builtin("ex3"), 2), 5.0, 1e-8);
  EXPECT_NEAR(std::fabs(r.derivatives.u_xl), 2.609927, 1e-3 * 2.609927);
  EXPECT_NEAR(r.derivatives.v_l, 0.690553, 1e-3 * 0.690553);
}

TEST(Variational, BaseCoefficientsMatchDoubleShooting) {
  const auto m = discretize(builtin("ex5"), 128);
  for (double lambda : {-0.4, 0.3, 1.0, 2.0}) {
    const auto plan = plan_sweep(m, lambda);
    const auto v = variational_shoot(plan).coefficients;
    const auto c = double_shoot(plan);
    EXPECT_NEAR(v.c11, c.c11, 1e-12 * std::max(1.0, std::fabs(c.c11)));
    EXPECT_NEAR(v.c12, c.c12, 1e-12 * std::max(1.0, std::fabs(c.c12)));
    EXPECT_NEAR(v.c21, c.c21, 1e-12 * std::max(1.0, std::fabs(c.c21)));
    EXPECT_NEAR(v.c22, c.c22, 1e-12 * std::max(1.0, std::fabs(c.c22)));
  }
}

TEST(Variational, MatchesFiniteDifferencesOfTheSameMesh) {
  for (const auto& name : builtin_names()) {
    const auto m = discretize(builtin(name), 256);
    for (double lambda : {-0.3, 0.45, 1.3, 2.7}) {
      const auto d = variational_shoot(plan_sweep(m, lambda)).derivatives;
      const auto c = [&](double x) { return double_shoot(plan_sweep(m, x)); };
      const auto fd = [&](auto get) {
        return finite_difference_lambda([&](double x) { return get(c(x)); }, lambda, 1e-5);
      };
      const auto close = [](double a, double b) {
        return std::fabs(a - b) / std::max(1.0, std::fabs(a));
      };
      EXPECT_LE(close(d.u_l, fd([](auto k) { return k.c11; })), 1e-6) << name << " " << lambda;
      EXPECT_LE(close(d.u_xl, fd([](auto k) { return k.c12; })), 1e-6) << name << " " << lambda;
      EXPECT_LE(close(d.v_l, fd([](auto k) { return k.c21; })), 1e-6) << name << " " << lambda;
      EXPECT_LE(close(d.v_xl, fd([](auto k) { return k.c22; })), 1e-6) << name << " " << lambda;
    }
  }
}

TEST(Variational, DeterminantDerivativeVanishes) {
  for (const auto& name : builtin_names()) {
    const MeshHierarchy meshes(builtin(name));
    for (double lambda : {-0.5, 0.2, 1.1, 3.3, 6.0}) {
      const auto v = variational_at_level(meshes, lambda, meshes.levels() - 1);
      const auto& c = v.coefficients;
      const auto& d = v.derivatives;
      const double size = std::fabs(d.u_l * c.c22) + std::fabs(c.c11 * d.v_xl) +
                          std::fabs(d.u_xl * c.c21) + std::fabs(c.c12 * d.v_l);
      EXPECT_LE(std::fabs(v.det_derivative()), 1e-6 * std::max(1.0, size))
          << name << " " << lambda;
    }
  }
}

TEST(Variational, ScaledDerivativeIncludesCorrection) {
  // d/dlambda of the scaled frame equals d_lambda + correction_sum * frame:
  // compare against differences of scaled frames with the scale held per lambda.
  const auto m = discretize(builtin("mathieu"), 64);
  const double lambda = -0.36;
  const double h = 1e-6;
  const auto plan = plan_sweep(m, lambda);
  const auto at = [&](double x) {
    return variational_sweep(plan_sweep(m, x, plan.match_index)).u_front;
  };
  const auto frame = variational_sweep(plan).u_front;
  ASSERT_GT(frame.correction_sum, 0.0);
  const auto up = at(lambda + h);
  const auto down = at(lambda - h);
  ASSERT_EQ(up.base.log_scale, 0.0);
  const auto scaled = frame.scaled_derivative();
  EXPECT_NEAR(scaled.first, (up.base.y - down.base.y) / (2 * h), 1e-6);
  EXPECT_NEAR(scaled.second, (up.base.y_x - down.base.y_x) / (2 * h), 1e-6);
}

TEST(LocateEdge, MathieuDirichletAndNeumann) {
  const double tol = 1e-12;
  EXPECT_NEAR(locate_edge(mathieu(), {0.91, 0.92}, tol), 0.918058176625, 1e-9);
  EXPECT_NEAR(locate_edge(mathieu(), {-0.35, -0.345}, tol), -0.347669125306, 1e-9);
  EXPECT_NEAR(locate_edge(mathieu(), {2.28, 2.29}, tol), 2.28515693444, 1e-9);
  EXPECT_NEAR(locate_edge(mathieu(), {1.29, 1.30}, tol), 1.29316628334, 1e-9);
  EXPECT_NEAR(locate_edge(mathieu(), {-0.38, -0.37}, tol), -0.378489221265, 1e-9);
  EXPECT_NEAR(locate_edge(mathieu(), {0.59, 0.60}, tol), 0.594799970122, 1e-9);
}

TEST(LocateEdge, FreeEquationTouchingEdge) {
  EXPECT_NEAR(locate_edge(free_potential(), {0.2, 0.3}, 1e-12), 0.25, 1e-9);
}

TEST(LocateEdge, NoEdgeThrows) {
  EXPECT_THROW(locate_edge(mathieu(), {1.5, 1.6}, 1e-10), BracketError);
  EXPECT_THROW(locate_edge(mathieu(), {1.6, 1.5}, 1e-10), std::invalid_argument);
}

TEST(DensityNearEdge, MathieuDirichlet) {
  const double star = 0.918058176625;
  EXPECT_NEAR(density_near_edge(mathieu(), BoundaryCondition::dirichlet(), 0.9177, star, 1e-8),
              6.05564, 1e-3 * 6.05564);
}

TEST(DensityNearEdge, MathieuNeumann) {
  const double star = 0.594799970122;
  const auto bc = BoundaryCondition::neumann();
  // The tabulated edge-formula value takes 2 + |u + v'| at lambda* (= 4);
  // at lambda the formula tracks the converged density instead.
  EXPECT_NEAR(density_near_edge(mathieu(), bc, 0.5952, star, 1e-8, EdgeFactor::at_edge),
              10.47355, 1e-3 * 10.47355);
  EXPECT_NEAR(density_near_edge(mathieu(), bc, 0.5952, star, 1e-8), 10.46971,
              1e-3 * 10.46971);
}

TEST(DensityNearEdge, AgreesWithClampedFormulaNearEdge) {
  const double star = 0.918058176625;
  const double lambda = star - 1e-3;
  const double near = density_near_edge(mathieu(), BoundaryCondition::dirichlet(), lambda, star,
                                        1e-8);
  const double plain = density(mathieu(), BoundaryCondition::dirichlet(), lambda, 1e-8).f;
  EXPECT_NEAR(near, plain, 0.02 * plain);
}

TEST(DensityNearEdge, OtherBoundaryConditionsUnsupported) {
  EXPECT_THROW(density_near_edge(mathieu(), BoundaryCondition(0.3), 0.9, 0.918, 1e-8),
               UnsupportedBoundaryError);
}

TEST(GrowthRate, ExactPowerLaw) {
  const double star = 1.7;
  const auto f = [&](double x) { return 3.0 / std::sqrt(std::fabs(x - star)); };
  EXPECT_NEAR(growth_rate({1.6, f(1.6)}, {1.69, f(1.69)}, star), 0.5, 1e-12);
}

TEST(GrowthRate, RejectsBadInput) {
  EXPECT_THROW(growth_rate({1.0, 0.0}, {2.0, 1.0}, 3.0), std::invalid_argument);
  EXPECT_THROW(growth_rate({1.0, 1.0}, {1.0, 2.0}, 3.0), std::invalid_argument);
}

TEST(GrowthRate, DyadicApproachToMathieuEdge) {
  const double star = 0.918058176625;
  double prev_l = star - 1e-2;
  double prev_f = density(mathieu(), BoundaryCondition::dirichlet(), prev_l, 1e-8).f;
  for (int k = 1; k <= 5; ++k) {
    const double l = star - 1e-2 / std::pow(2.0, k);
    const double f = density(mathieu(), BoundaryCondition::dirichlet(), l, 1e-8).f;
    if (k >= 3) {
      EXPECT_NEAR(growth_rate({prev_l, prev_f}, {l, f}, star), 0.5, 0.01) << k;
    }
    prev_l = l;
    prev_f = f;
  }
}
