#include "hillspec/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hillspec/bisect.hpp"
#include "ladder.hpp"

namespace hillspec {

namespace {

// Tolerance on |g| at an interior extremum for accepting a closed gap.
constexpr double kTouchTolerance = 1e-8;

// Base frames F and their lambda-derivatives W share one log scale.
struct VariationalBasis {
  Mat2 f = Mat2::identity();
  Mat2 w{0.0, 0.0, 0.0, 0.0};
  double log_scale = 0.0;
  double correction_sum = 0.0;

  void step(const Mat2& a, const Mat2& a_lambda, const IntervalKernel& k) {
    w = a_lambda * f + a * w;
    f = a * f;
    if (k.scaled()) correction_sum += k.h / (2.0 * k.omega);
    const double big = std::max({std::fabs(f.a11), std::fabs(f.a12), std::fabs(f.a21),
                                 std::fabs(f.a22)});
    if (big > kRenormalizeAbove && std::isfinite(big)) {
      f = f * (1.0 / big);
      w = w * (1.0 / big);
      log_scale += std::log(big);
    }
  }

  VariationalFrame column(int col) const {
    VariationalFrame v;
    v.correction_sum = correction_sum;
    if (col == 0) {
      v.base = {f.a11, f.a21, log_scale};
      v.d_lambda = {w.a11, w.a21};
    } else {
      v.base = {f.a12, f.a22, log_scale};
      v.d_lambda = {w.a12, w.a22};
    }
    return v;
  }
};

// Wronskian-type bracket y1 * z2' - y1' * z2 and its derivative.
struct Bracket {
  double value;
  double derivative;
};

Bracket wronskian(const VariationalFrame& a, const VariationalFrame& b) {
  return {a.base.y * b.base.y_x - a.base.y_x * b.base.y,
          a.d_lambda.first * b.base.y_x + a.base.y * b.d_lambda.second -
              a.d_lambda.second * b.base.y - a.base.y_x * b.d_lambda.first};
}

Bracket scaled(const Bracket& b, double scale) {
  return {b.value * scale, b.derivative * scale};
}

double finest_defect(const MeshHierarchy& meshes, double lambda) {
  return monodromy_at_level(meshes, lambda, meshes.levels() - 1).discriminant_defect();
}

double finest_trace_slope(const MeshHierarchy& meshes, double lambda) {
  return variational_at_level(meshes, lambda, meshes.levels() - 1).derivatives.trace();
}

}  // namespace

double VariationalCoefficients::det_derivative() const noexcept {
  const auto& c = coefficients;
  const auto& d = derivatives;
  return d.u_l * c.c22 + c.c11 * d.v_xl - d.u_xl * c.c21 - c.c12 * d.v_l;
}

VariationalCoefficients richardson(const VariationalCoefficients& fine,
                                   const VariationalCoefficients& coarse) {
  VariationalCoefficients r;
  r.coefficients = richardson(fine.coefficients, coarse.coefficients);
  const auto ex = [](double f, double c) { return f + (f - c) / 3.0; };
  r.derivatives.u_l = ex(fine.derivatives.u_l, coarse.derivatives.u_l);
  r.derivatives.u_xl = ex(fine.derivatives.u_xl, coarse.derivatives.u_xl);
  r.derivatives.v_l = ex(fine.derivatives.v_l, coarse.derivatives.v_l);
  r.derivatives.v_xl = ex(fine.derivatives.v_xl, coarse.derivatives.v_xl);
  return r;
}

VariationalMatch variational_sweep(const SweepPlan& plan) {
  const std::size_t m = plan.match_index;
  const std::size_t n = plan.kernels.size();

  VariationalBasis front;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto& k = plan.kernels[i];
    front.step(k.forward(true), k.forward_lambda(true), k);
  }
  VariationalBasis back;
  for (std::size_t i = n; i-- > m - 1;) {
    const auto& k = plan.kernels[i];
    back.step(k.backward(true), k.backward_lambda(true), k);
  }

  VariationalMatch match;
  match.u_front = front.column(0);
  match.v_front = front.column(1);
  match.u_back = back.column(0);
  match.v_back = back.column(1);
  match.log_p_front = plan.log_p_front;
  match.log_p_back = plan.log_p_back;
  return match;
}

VariationalCoefficients variational_shoot(const SweepPlan& plan) {
  const VariationalMatch f = variational_sweep(plan);

  // Delta is 1 before scaling at every lambda, so its derivative is 0 and
  // each c_ij and its derivative are plain Wronskians times both scales:
  // c11 = W(U^F, V^B), c12 = W(U^B, U^F), c21 = W(V^F, V^B), c22 = W(U^B, V^F).
  const double scale = std::exp((f.log_p_front + f.u_front.base.log_scale) +
                                (f.log_p_back + f.u_back.base.log_scale));
  const Bracket c11 = scaled(wronskian(f.u_front, f.v_back), scale);
  const Bracket c12 = scaled(wronskian(f.u_back, f.u_front), scale);
  const Bracket c21 = scaled(wronskian(f.v_front, f.v_back), scale);
  const Bracket c22 = scaled(wronskian(f.u_back, f.v_front), scale);

  VariationalCoefficients r;
  r.coefficients = {c11.value, c12.value, c21.value, c22.value, f.log_p_front - f.log_p_back};
  r.derivatives = {c11.derivative, c12.derivative, c21.derivative, c22.derivative};
  if (!std::isfinite(r.coefficients.c11 + r.coefficients.c12 + r.coefficients.c21 +
                     r.coefficients.c22)) {
    throw DegenerateBasisError("non-finite match frames at lambda = " +
                               std::to_string(plan.lambda));
  }
  const auto& d = r.derivatives;
  if (!std::isfinite(d.u_l) || !std::isfinite(d.u_xl) || !std::isfinite(d.v_l) ||
      !std::isfinite(d.v_xl)) {
    throw ScalingFault("lambda-derivative overflow at lambda = " + std::to_string(plan.lambda));
  }
  return r;
}

VariationalCoefficients variational_at_level(const MeshHierarchy& meshes, double lambda,
                                             int level) {
  const VariationalCoefficients fine = variational_shoot(plan_sweep(meshes.at(level), lambda));
  if (!meshes.options().extrapolate || level == 0) return fine;
  return richardson(fine, variational_shoot(plan_sweep(meshes.at(level - 1), lambda)));
}

VariationalResult variational_monodromy(const PeriodicPotential& potential, double lambda,
                                        double tol, const LadderOptions& options) {
  return variational_monodromy(MeshHierarchy(potential, options), lambda, tol);
}

VariationalResult variational_monodromy(const MeshHierarchy& meshes, double lambda, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const auto run = detail::run_ladder<VariationalCoefficients>(
      meshes, tol,
      [&](int level) { return variational_shoot(plan_sweep(meshes.at(level), lambda)); },
      [](const VariationalCoefficients& fine, const VariationalCoefficients& coarse) {
        return richardson(fine, coarse);
      },
      [](const VariationalCoefficients& v) { return v.coefficients.trace(); });
  VariationalResult result{run.value.coefficients, run.value.derivatives, meshes.at(run.level),
                           run.level, run.defect};
  if (run.converged) return result;
  throw ConvergenceError("variational ladder did not converge at lambda = " +
                             std::to_string(lambda),
                         LadderResult{result.coefficients, result.mesh, result.level,
                                      result.defect});
}

double locate_edge(const PeriodicPotential& potential, std::pair<double, double> bracket,
                   double tol, const LadderOptions& options) {
  return locate_edge(MeshHierarchy(potential, options), bracket, tol);
}

double locate_edge(const MeshHierarchy& meshes, std::pair<double, double> bracket, double tol) {
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw std::invalid_argument("bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  const auto g = [&](double x) { return finest_defect(meshes, x); };
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if ((g_lo < 0.0) != (g_hi < 0.0)) {
    const auto [a, b] = bisect_sign_change(g, lo, hi, g_lo, tol);
    return 0.5 * (a + b);
  }

  // No sign change: look for a touching extremum of the discriminant.
  const auto slope = [&](double x) { return finest_trace_slope(meshes, x); };
  const double s_lo = slope(lo);
  const double s_hi = slope(hi);
  if ((s_lo < 0.0) == (s_hi < 0.0)) {
    throw BracketError("g has no sign change and no interior extremum on the bracket");
  }
  const auto [a, b] = bisect_sign_change(slope, lo, hi, s_lo, tol);
  const double extremum = 0.5 * (a + b);
  const double g_e = g(extremum);
  if (std::fabs(g_e) <= kTouchTolerance) return extremum;
  if ((g_e < 0.0) != (g_lo < 0.0)) {
    throw BracketError("bracket contains two band edges; narrow it");
  }
  throw BracketError("g does not vanish on the bracket");
}

double density_near_edge(const PeriodicPotential& potential, const BoundaryCondition& bc,
                         double lambda, double lambda_star, double tol,
                         const LadderOptions& options, EdgeFactor factor) {
  return density_near_edge(MeshHierarchy(potential, options), bc, lambda, lambda_star, tol,
                           factor);
}

double density_near_edge(const MeshHierarchy& meshes, const BoundaryCondition& bc,
                         double lambda, double lambda_star, double tol, EdgeFactor factor) {
  if (!bc.is_dirichlet() && !bc.is_neumann()) {
    throw UnsupportedBoundaryError("edge formulas exist only for alpha = 0 and alpha = pi/2");
  }
  if (lambda == lambda_star) throw std::invalid_argument("lambda must differ from lambda_star");

  const VariationalResult edge = variational_monodromy(meshes, lambda_star, tol);
  const MonodromyCoefficients here = factor == EdgeFactor::at_lambda
                                         ? monodromy_at(meshes, lambda, tol).coefficients
                                         : edge.coefficients;

  const double denominator_slope = bc.is_dirichlet() ? edge.derivatives.v_l
                                                     : edge.derivatives.u_xl;
  const double numerator = (2.0 + std::fabs(here.trace())) * std::fabs(edge.derivatives.trace());
  return std::sqrt(numerator) / (2.0 * std::numbers::pi * std::fabs(denominator_slope) *
                                 std::sqrt(std::fabs(lambda_star - lambda)));
}

double growth_rate(std::pair<double, double> point1, std::pair<double, double> point2,
                   double lambda_star) {
  const auto [l1, f1] = point1;
  const auto [l2, f2] = point2;
  if (!(f1 > 0.0) || !(f2 > 0.0)) throw std::invalid_argument("growth_rate needs f > 0");
  if (l1 == l2) throw std::invalid_argument("growth_rate needs distinct lambdas");
  if (l1 == lambda_star || l2 == lambda_star) {
    throw std::invalid_argument("growth_rate points must differ from lambda_star");
  }
  return std::log(f2 / f1) / std::log(std::fabs(l1 - lambda_star) / std::fabs(l2 - lambda_star));
}

}  // namespace hillspec
