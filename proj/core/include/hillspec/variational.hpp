#pragma once

#include <utility>

#include "hillspec/boundary.hpp"
#include "hillspec/shooting.hpp"

namespace hillspec {

/// A scaled solution frame plus its lambda-derivative. d_lambda holds
/// (dy/dlambda, dy'/dlambda) of the true solution divided by the same
/// accumulated scale as base. correction_sum is the running sum of
/// h_j / (2 sqrt(-tau_j)) over scaled intervals: the derivative of the
/// scaled variable itself is d_lambda + correction_sum * (y, y').
struct VariationalFrame {
  StateFrame base;
  Vec2 d_lambda;
  double correction_sum = 0.0;

  Vec2 scaled_derivative() const {
    return {d_lambda.first + correction_sum * base.y,
            d_lambda.second + correction_sum * base.y_x};
  }
};

struct VariationalMatch {
  VariationalFrame u_front, v_front, u_back, v_back;
  double log_p_front = 0.0;
  double log_p_back = 0.0;
};

/// lambda-derivatives of u(l), u'(l), v(l), v'(l).
struct EdgeDerivatives {
  double u_l = 0.0;
  double u_xl = 0.0;
  double v_l = 0.0;
  double v_xl = 0.0;

  double trace() const noexcept { return u_l + v_xl; }
};

struct VariationalCoefficients {
  MonodromyCoefficients coefficients;
  EdgeDerivatives derivatives;

  /// d/dlambda of c11 c22 - c12 c21; zero up to roundoff.
  double det_derivative() const noexcept;
};

VariationalCoefficients richardson(const VariationalCoefficients& fine,
                                   const VariationalCoefficients& coarse);

/// Base and derivative sweeps to x_M; always scaled.
VariationalMatch variational_sweep(const SweepPlan& plan);

/// Throws ScalingFault when a derivative is not finite.
VariationalCoefficients variational_shoot(const SweepPlan& plan);

struct VariationalResult {
  MonodromyCoefficients coefficients;
  EdgeDerivatives derivatives;
  StepMesh mesh;
  int level = 0;
  double defect = 0.0;
};

/// Ladder on the discriminant, as in monodromy_at.
VariationalResult variational_monodromy(const PeriodicPotential& potential, double lambda,
                                        double tol, const LadderOptions& options = {});
VariationalResult variational_monodromy(const MeshHierarchy& meshes, double lambda, double tol);

VariationalCoefficients variational_at_level(const MeshHierarchy& meshes, double lambda,
                                             int level);

/// Bisection on g = 2 - |c11 + c22| to bracket width <= tol. When g keeps
/// one sign on the bracket, the extremum of the discriminant is searched
/// instead and accepted if g nearly vanishes there (a closed gap).
/// Evaluations use the finest ladder level so g is one smooth function of
/// lambda throughout.
double locate_edge(const PeriodicPotential& potential, std::pair<double, double> bracket,
                   double tol, const LadderOptions& options = {});
double locate_edge(const MeshHierarchy& meshes, std::pair<double, double> bracket, double tol);

/// Where the factor 2 + |u(l) + v'(l)| of the edge formula is taken.
/// at_lambda keeps it exact; at_edge replaces it by its value at lambda*
/// (4 up to roundoff), a cruder but common reading.
enum class EdgeFactor { at_lambda, at_edge };

/// Density near an indeterminate Dirichlet (alpha = 0) or Neumann
/// (alpha = pi/2) edge, using derivative data at lambda_star.
double density_near_edge(const PeriodicPotential& potential, const BoundaryCondition& bc,
                         double lambda, double lambda_star, double tol,
                         const LadderOptions& options = {},
                         EdgeFactor factor = EdgeFactor::at_lambda);
double density_near_edge(const MeshHierarchy& meshes, const BoundaryCondition& bc,
                         double lambda, double lambda_star, double tol,
                         EdgeFactor factor = EdgeFactor::at_lambda);

/// log(f2 / f1) / log(|lambda1 - lambda*| / |lambda2 - lambda*|).
double growth_rate(std::pair<double, double> point1, std::pair<double, double> point2,
                   double lambda_star);

}  // namespace hillspec
