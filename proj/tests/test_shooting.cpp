#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hillspec/oracle.hpp"
#include "hillspec/potential.hpp"
#include "hillspec/shooting.hpp"

using namespace hillspec;

namespace {

constexpr double kPi = std::numbers::pi;

PeriodicPotential free_potential() { return PeriodicPotential::constant(0.0, 2 * kPi, "free"); }

StepMesh uniform_mesh(std::vector<double> values, double period) {
  std::vector<double> x(values.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = period * i / values.size();
  x.back() = period;
  return StepMesh(std::move(x), std::move(values), true);
}

// Brute-force minimum of |front - total/2| over every admissible M.
double best_split(const SweepPlan& plan) {
  double total = 0.0;
  for (const auto& k : plan.kernels) total += k.log_sigma;
  double best = INFINITY, front = 0.0;
  for (std::size_t m = 1; m <= plan.intervals() + 1; ++m) {
    best = std::min(best, std::fabs(front - 0.5 * total));
    if (m <= plan.intervals()) front += plan.kernels[m - 1].log_sigma;
  }
  return best;
}

}  // namespace

TEST(PlanSweep, NoScalingPicksMiddle) {
  const auto m = discretize(builtin("mathieu"), 16);
  const auto plan = plan_sweep(m, 5.0);
  for (std::size_t n = 0; n < plan.intervals(); ++n) EXPECT_EQ(plan.log_sigma(n), 0.0);
  EXPECT_EQ(plan.match_index, 9u);
  EXPECT_EQ(plan_sweep(discretize(builtin("mathieu"), 5), 5.0).match_index, 3u);
}

TEST(PlanSweep, SingleScaledIntervalSplitsEvenly) {
  const auto m = uniform_mesh({0.0, 0.0, 10.0, 0.0, 0.0}, 5.0);
  const auto plan = plan_sweep(m, 1.0);
  EXPECT_GT(plan.log_sigma(2), 0.0);
  EXPECT_EQ(plan.match_index, 4u);
}

TEST(PlanSweep, MathieuSplitWithinOneInterval) {
  const auto m = discretize(builtin("mathieu"), 16);
  const auto plan = plan_sweep(m, -0.36);
  double biggest = 0.0;
  for (std::size_t n = 0; n < plan.intervals(); ++n) biggest = std::max(biggest, plan.log_sigma(n));
  EXPECT_GT(biggest, 0.0);
  EXPECT_LE(std::fabs(plan.log_p_front - plan.log_p_back), biggest);
  const double total = plan.log_p_front + plan.log_p_back;
  EXPECT_DOUBLE_EQ(std::fabs(plan.log_p_front - 0.5 * total), best_split(plan));
}

TEST(PlanSweep, ExplicitMatchIndexIsValidated) {
  const auto m = discretize(builtin("mathieu"), 4);
  EXPECT_THROW(plan_sweep(m, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(plan_sweep(m, 0.0, 6), std::invalid_argument);
  EXPECT_NO_THROW(plan_sweep(m, 0.0, 5));
}

TEST(DoubleShoot, FreeEquationIsIdentityAtLambdaOne) {
  for (int n : {1, 4, 16, 33}) {
    const auto c = double_shoot(plan_sweep(discretize(free_potential(), n), 1.0));
    EXPECT_NEAR(c.c11, 1.0, 1e-13);
    EXPECT_NEAR(c.c12, 0.0, 1e-13);
    EXPECT_NEAR(c.c21, 0.0, 1e-13);
    EXPECT_NEAR(c.c22, 1.0, 1e-13);
  }
}

TEST(DoubleShoot, FreeEquationClosedForm) {
  const double l = 2 * kPi;
  for (double lambda : {0.1, 0.3, 2.0, 7.5}) {
    const double k = std::sqrt(lambda);
    const auto c = double_shoot(plan_sweep(discretize(free_potential(), 16), lambda));
    EXPECT_NEAR(c.c11, std::cos(k * l), 1e-12);
    EXPECT_NEAR(c.c12, -k * std::sin(k * l), 1e-12);
    EXPECT_NEAR(c.c21, std::sin(k * l) / k, 1e-12);
    EXPECT_NEAR(c.c22, std::cos(k * l), 1e-12);
  }
}

TEST(DoubleShoot, ConstantPotentialTrace) {
  const double q = 1.7;
  const auto p = PeriodicPotential::constant(q, 3.0);
  for (double lambda : {2.0, 5.0, 11.0}) {
    const auto c = double_shoot(plan_sweep(discretize(p, 8), lambda));
    EXPECT_NEAR(c.trace(), 2 * std::cos(std::sqrt(lambda - q) * 3.0), 1e-12);
  }
  const auto c = double_shoot(plan_sweep(discretize(p, 8), 0.2));
  EXPECT_NEAR(c.trace() / (2 * std::cosh(std::sqrt(q - 0.2) * 3.0)), 1.0, 1e-13);
}

TEST(DoubleShoot, MathieuMatchesOracle) {
  const auto p = builtin("mathieu");
  const auto r = monodromy_at(p, 2.0, 1e-10);
  const auto o = integrate_reference(p, 2.0, 1e-13);
  EXPECT_NEAR(r.coefficients.trace(), o.trace(), 1e-9);
  EXPECT_NEAR(r.coefficients.c12, o.u_x, 1e-8);
  EXPECT_NEAR(r.coefficients.c21, o.v, 1e-8);
}

TEST(DoubleShoot, UnitDeterminant) {
  for (const auto& name : builtin_names()) {
    const auto p = builtin(name);
    for (int n : {16, 256}) {
      const auto m = discretize(p, n);
      for (double lambda = -2.0; lambda <= 20.0; lambda += 0.37) {
        const auto c = double_shoot(plan_sweep(m, lambda));
        EXPECT_NEAR(c.det(), 1.0, 1e-9 * std::max(1.0, std::fabs(c.c11 * c.c22)))
            << name << " N=" << n << " lambda=" << lambda;
      }
    }
  }
}

TEST(DoubleShoot, ScalingInvariance) {
  const auto m = discretize(builtin("mathieu"), 64);
  for (double lambda : {-0.36, 0.1, 0.7, 1.5, 3.0}) {
    const auto plan = plan_sweep(m, lambda);
    const auto on = double_shoot(plan, {true});
    const auto off = double_shoot(plan, {false});
    EXPECT_NEAR(on.c11, off.c11, 1e-10);
    EXPECT_NEAR(on.c12, off.c12, 1e-10);
    EXPECT_NEAR(on.c21, off.c21, 1e-10);
    EXPECT_NEAR(on.c22, off.c22, 1e-10);
  }
}

TEST(DoubleShoot, EvenSymmetry) {
  for (const char* name : {"mathieu", "ex3", "ex4"}) {
    const MeshHierarchy meshes(builtin(name));
    for (double lambda = -1.0; lambda <= 12.0; lambda += 0.25) {
      const auto c = monodromy_at_level(meshes, lambda, meshes.levels() - 1);
      EXPECT_LE(std::fabs(c.c11 - c.c22), 1e-8 * std::max(1.0, std::fabs(c.c11)))
          << name << " lambda=" << lambda;
    }
  }
}

TEST(DoubleShoot, MatchIndexIndependence) {
  const auto m = discretize(builtin("ex5"), 20);
  const double lambda = 3.7;  // above max q: nothing is scaled
  const auto ref = double_shoot(plan_sweep(m, lambda, 1));
  for (std::size_t idx = 2; idx <= 21; ++idx) {
    const auto c = double_shoot(plan_sweep(m, lambda, idx));
    EXPECT_NEAR(c.c11, ref.c11, 1e-9);
    EXPECT_NEAR(c.c12, ref.c12, 1e-9);
    EXPECT_NEAR(c.c21, ref.c21, 1e-9);
    EXPECT_NEAR(c.c22, ref.c22, 1e-9);
  }
}

TEST(DoubleShoot, AgreesWithSimpleShootingInBand) {
  const auto m = discretize(builtin("mathieu"), 512);
  for (double lambda = -0.37; lambda < -0.35; lambda += 0.002) {
    const auto d = double_shoot(plan_sweep(m, lambda));
    const auto s = simple_shoot(m, lambda);
    EXPECT_NEAR(d.trace(), s.trace(), 1e-12);
  }
}

TEST(DoubleShoot, DeepGapKeepsFullRelativeAccuracy) {
  // Backward growth ~1e13: a Delta formed from the scaled frames would
  // cancel here; both modes should agree with each other to rounding.
  const PeriodicPotential p("deep", 2 * kPi, [](double x) { return 80.0 * std::cos(x); });
  const auto m = discretize(p, 1024);
  const auto d = double_shoot(plan_sweep(m, -30.0));
  const auto s = simple_shoot(m, -30.0);
  EXPECT_NEAR(d.trace() / s.trace(), 1.0, 1e-12);
  const auto o = integrate_reference(p, -30.0, 1e-13);
  EXPECT_NEAR(d.trace() / o.trace(), 1.0, 1e-5);
}

TEST(DoubleShoot, ScaledFramesStayFiniteWhereSimpleShootingOverflows) {
  const auto p = PeriodicPotential::constant(3.0e4, 2 * kPi);
  const auto m = discretize(p, 64);
  const auto s = simple_shoot(m, 0.0);
  EXPECT_FALSE(std::isfinite(s.c11));

  const auto plan = plan_sweep(m, 0.0);
  const auto f = sweep_to_match(plan);
  for (const auto* frame : {&f.u_front, &f.v_front, &f.u_back, &f.v_back}) {
    EXPECT_TRUE(std::isfinite(frame->y) && std::isfinite(frame->y_x));
    EXPECT_LE(std::fabs(frame->y), 1.0);
  }
  EXPECT_NEAR(f.log_p_front + f.log_p_back, std::sqrt(3.0e4) * 2 * kPi, 1e-9);
}

TEST(Ladder, FreePotentialConvergesAtFirstComparison) {
  const auto r = monodromy_at(free_potential(), 2.3, 1e-12);
  EXPECT_EQ(r.level, 2);
  EXPECT_EQ(r.mesh.size(), 128u);
  EXPECT_LE(r.defect, 1e-12);
}

TEST(Ladder, MathieuConvergesAndMatchesOracle) {
  const auto p = builtin("mathieu");
  const auto r = monodromy_at(p, 1.5, 1e-8);
  EXPECT_LE(r.level, 8);
  EXPECT_LE(r.defect, 1e-8);
  EXPECT_NEAR(r.coefficients.trace(), integrate_reference(p, 1.5, 1e-13).trace(), 1e-8);
}

TEST(Ladder, PlainLadderIsSlower) {
  LadderOptions plain;
  plain.extrapolate = false;
  const auto p = builtin("mathieu");
  const auto fast = monodromy_at(p, 1.5, 1e-6);
  const auto slow = monodromy_at(p, 1.5, 1e-6, plain);
  EXPECT_LT(fast.level, slow.level);
}

TEST(Ladder, ConvergenceErrorCarriesBestEstimate) {
  LadderOptions opt;
  opt.initial_intervals = 4;
  opt.max_refinements = 2;
  try {
    monodromy_at(builtin("ex5"), 1.0, 1e-14, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best().mesh.size(), 16u);
    EXPECT_GT(e.defect(), 1e-14);
    EXPECT_TRUE(std::isfinite(e.best().coefficients.trace()));
  }
}

TEST(Ladder, RejectsNonPositiveTolerance) {
  EXPECT_THROW(monodromy_at(builtin("ex2"), 1.0, 0.0), std::invalid_argument);
}

TEST(Ladder, SimpleModeRunsTheSameLadder) {
  LadderOptions simple;
  simple.mode = ShootingMode::simple;
  const auto p = builtin("mathieu");
  const auto a = monodromy_at(p, -0.36, 1e-8);
  const auto b = monodromy_at(p, -0.36, 1e-8, simple);
  EXPECT_NEAR(a.coefficients.trace(), b.coefficients.trace(), 1e-10);
}

TEST(MeshHierarchy, LevelsAreBisections) {
  const MeshHierarchy h(builtin("ex4"));
  ASSERT_EQ(h.levels(), 9);
  for (int i = 0; i < h.levels(); ++i) EXPECT_EQ(h.at(i).size(), 32u << i);
}
