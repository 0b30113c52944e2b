#include "hillspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hillspec/oracle.hpp"
#include "hillspec/variational.hpp"
#include "ladder.hpp"

namespace hillspec {

namespace {

double density_target(const MonodromyCoefficients& c, const BoundaryCondition& bc) {
  const double f = density_estimate(c, bc);
  return std::isfinite(f) ? f : c.discriminant_complement();
}

DensityPoint make_point(const MonodromyCoefficients& c, const BoundaryCondition& bc,
                        double lambda, std::size_t mesh_n, bool converged) {
  DensityPoint p;
  p.lambda = lambda;
  p.mesh_N = mesh_n;
  p.converged = converged;
  p.indeterminate = is_indeterminate(c, bc);
  p.in_gap = c.discriminant_complement() <= 0.0;
  p.f = p.in_gap ? 0.0 : density_estimate(c, bc);
  return p;
}

// Both off-diagonal entries vanish: the monodromy is +-I, a closed gap.
bool is_closed_gap(const MonodromyCoefficients& c) {
  const double small = kIndeterminateDenominator * (1.0 + std::fabs(c.c11) + std::fabs(c.c22));
  return std::fabs(c.c12) <= small && std::fabs(c.c21) <= small;
}

// At a closed gap numerator and denominator both vanish linearly in lambda;
// the ratio of their first derivatives is the (finite) density.
double closed_gap_density(const EdgeDerivatives& d, const BoundaryCondition& bc) {
  const double diff = d.u_l - d.v_xl;
  const double numerator = std::sqrt(std::max(0.0, -diff * diff - 4.0 * d.u_xl * d.v_l));
  const double s = std::sin(bc.alpha());
  const double co = bc.is_neumann() ? 0.0 : std::cos(bc.alpha());
  const double slope = d.u_xl * s * s + diff * s * co - d.v_l * co * co;
  return numerator / (2.0 * std::numbers::pi * std::fabs(slope));
}

struct DensityRun {
  MonodromyCoefficients coefficients;
  std::size_t mesh_n;
  int level;
  bool converged;
  double defect;
};

DensityRun run_density_ladder(const MeshHierarchy& meshes, const BoundaryCondition& bc,
                              double lambda, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const LadderOptions& opt = meshes.options();
  const auto run = detail::run_ladder<MonodromyCoefficients>(
      meshes, tol,
      [&](int level) { return monodromy_on_mesh(meshes.at(level), lambda, opt); },
      [](const MonodromyCoefficients& fine, const MonodromyCoefficients& coarse) {
        return richardson(fine, coarse);
      },
      [&](const MonodromyCoefficients& c) { return density_target(c, bc); });
  return {run.value, meshes.at(run.level).size(), run.level, run.converged, run.defect};
}

DensityPoint closed_gap_point(const MeshHierarchy& meshes, const BoundaryCondition& bc,
                              double lambda, double tol) {
  const VariationalResult v = variational_monodromy(meshes, lambda, tol);
  DensityPoint p;
  p.lambda = lambda;
  p.f = closed_gap_density(v.derivatives, bc);
  p.mesh_N = v.mesh.size();
  p.converged = true;
  p.indeterminate = true;
  return p;
}

}  // namespace

double density_denominator(const MonodromyCoefficients& c, const BoundaryCondition& bc) {
  const double s = std::sin(bc.alpha());
  const double co = bc.is_neumann() ? 0.0 : std::cos(bc.alpha());
  return c.c12 * s * s + (c.c11 - c.c22) * s * co - c.c21 * co * co;
}

double density_estimate(const MonodromyCoefficients& c, const BoundaryCondition& bc) {
  const double numerator = std::sqrt(std::max(0.0, c.discriminant_complement()));
  return numerator / (2.0 * std::numbers::pi * std::fabs(density_denominator(c, bc)));
}

bool is_indeterminate(const MonodromyCoefficients& c, const BoundaryCondition& bc) {
  return std::fabs(c.discriminant_complement()) <= kIndeterminateNumerator &&
         std::fabs(density_denominator(c, bc)) <=
             kIndeterminateDenominator * (1.0 + std::fabs(c.c11) + std::fabs(c.c22));
}

DensityPoint density(const PeriodicPotential& potential, const BoundaryCondition& bc,
                     double lambda, double tol, const LadderOptions& options) {
  return density(MeshHierarchy(potential, options), bc, lambda, tol);
}

DensityPoint density(const MeshHierarchy& meshes, const BoundaryCondition& bc, double lambda,
                     double tol) {
  const DensityRun run = run_density_ladder(meshes, bc, lambda, tol);
  if (is_indeterminate(run.coefficients, bc) && is_closed_gap(run.coefficients)) {
    return closed_gap_point(meshes, bc, lambda, tol);
  }
  if (is_indeterminate(run.coefficients, bc)) {
    throw IndeterminatePointError(
        "density is 0/0 at lambda = " + std::to_string(lambda) + "; use density_near_edge",
        lambda);
  }
  if (!run.converged) {
    throw ConvergenceError("density ladder did not converge at lambda = " +
                               std::to_string(lambda),
                           LadderResult{run.coefficients, meshes.at(run.level), run.level, run.defect});
  }
  return make_point(run.coefficients, bc, lambda, run.mesh_n, true);
}

DensityPoint density_best_effort(const MeshHierarchy& meshes, const BoundaryCondition& bc,
                                 double lambda, double tol) {
  const DensityRun run = run_density_ladder(meshes, bc, lambda, tol);
  if (is_indeterminate(run.coefficients, bc) && is_closed_gap(run.coefficients)) {
    try {
      return closed_gap_point(meshes, bc, lambda, tol);
    } catch (const ConvergenceError&) {
    }
  }
  return make_point(run.coefficients, bc, lambda, run.mesh_n, run.converged);
}

double discriminant_defect(const PeriodicPotential& potential, double lambda, double tol,
                           const LadderOptions& options) {
  return discriminant_defect(MeshHierarchy(potential, options), lambda, tol);
}

double discriminant_defect(const MeshHierarchy& meshes, double lambda, double tol) {
  return monodromy_at(meshes, lambda, tol).coefficients.discriminant_defect();
}

AppellCoefficients appell_coefficients(const MonodromyCoefficients& c) {
  const double d = c.discriminant_complement();
  if (!(d > 0.0)) throw OutOfBandError("Appell normalization needs a strict band interior");
  const double r = std::sqrt(d);
  return {-2.0 * c.c21 / r, 2.0 * (c.c11 - c.c22) / r, 2.0 * c.c12 / r};
}

double density_via_f1(const AppellCoefficients& abc, const BoundaryCondition& bc) {
  const double s = std::sin(bc.alpha());
  const double co = bc.is_neumann() ? 0.0 : std::cos(bc.alpha());
  const double den = abc.c3 * s * s + abc.b * s * co + abc.a * co * co;
  if (den == 0.0) throw IndeterminatePointError("Appell denominator vanishes", 0.0);
  return 1.0 / (std::numbers::pi * std::fabs(den));
}

double phi_form_check(const PeriodicPotential& potential, double lambda,
                      const std::vector<double>& x_samples, double rel_tol) {
  const OracleSolution end = integrate_reference(potential, lambda, rel_tol);
  const auto phi = [&](double x) {
    const OracleSolution s = integrate_basis(potential, lambda, x, rel_tol);
    return end.v * s.u * s.u - (end.u - end.v_x) * s.u * s.v - end.u_x * s.v * s.v;
  };
  double worst = 0.0;
  for (double x : x_samples) {
    worst = std::max(worst, std::fabs(phi(x + potential.period()) - phi(x)));
  }
  return worst;
}

}  // namespace hillspec
