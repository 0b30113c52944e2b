#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "hillspec/bisect.hpp"
#include "hillspec/boundary.hpp"
#include "hillspec/shooting.hpp"

namespace hillspec {

struct DensityPoint {
  double lambda = 0.0;
  double f = 0.0;
  bool in_gap = false;
  std::size_t mesh_N = 0;
  bool converged = false;
  bool indeterminate = false;
};

/// Indeterminacy trigger: |4 - trace^2| and the density denominator both
/// small.
inline constexpr double kIndeterminateNumerator = 1e-10;
inline constexpr double kIndeterminateDenominator = 1e-6;

/// c12 sin^2(a) + (c11 - c22) sin(a) cos(a) - c21 cos^2(a).
double density_denominator(const MonodromyCoefficients& c, const BoundaryCondition& bc);

/// sqrt(max(0, 4 - trace^2)) / (2 pi |denominator|) on one set of coefficients.
double density_estimate(const MonodromyCoefficients& c, const BoundaryCondition& bc);

bool is_indeterminate(const MonodromyCoefficients& c, const BoundaryCondition& bc);

/// Ladder on f itself. At a closed gap (monodromy = +-I) the 0/0 limit is
/// taken from lambda-derivatives and the point comes back flagged
/// indeterminate. Other 0/0 points throw IndeterminatePointError; see
/// density_near_edge. Also throws ConvergenceError.
DensityPoint density(const PeriodicPotential& potential, const BoundaryCondition& bc,
                     double lambda, double tol, const LadderOptions& options = {});
DensityPoint density(const MeshHierarchy& meshes, const BoundaryCondition& bc, double lambda,
                     double tol);

/// Like density() but reports non-convergence and indeterminacy through the
/// flags of the returned point instead of throwing.
DensityPoint density_best_effort(const MeshHierarchy& meshes, const BoundaryCondition& bc,
                                 double lambda, double tol);

/// 2 - |c11 + c22|: positive in bands, negative in gaps.
double discriminant_defect(const PeriodicPotential& potential, double lambda, double tol,
                           const LadderOptions& options = {});
double discriminant_defect(const MeshHierarchy& meshes, double lambda, double tol);

struct AppellCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c3 = 0.0;
};

/// (-2 c21, 2 (c11 - c22), 2 c12) / sqrt(4 - trace^2). Throws OutOfBandError
/// unless trace^2 < 4.
AppellCoefficients appell_coefficients(const MonodromyCoefficients& c);

/// 1 / (pi |c3 sin^2 + b sin cos + a cos^2|).
double density_via_f1(const AppellCoefficients& abc, const BoundaryCondition& bc);

/// Max over x of |Phi(x + l) - Phi(x)| with
/// Phi(x) = v(l) u(x)^2 - (u(l) - v'(l)) u(x) v(x) - u'(l) v(x)^2,
/// all solution values from the reference integrator.
double phi_form_check(const PeriodicPotential& potential, double lambda,
                      const std::vector<double>& x_samples, double rel_tol = 1e-12);

enum class EdgeTag { regular, dirichlet_indeterminate, neumann_indeterminate, range_limit };

std::string_view to_string(EdgeTag tag);

inline constexpr double kEdgeClassificationTolerance = 1e-6;

/// Tags a converged edge by which of v(l), u'(l) vanishes there.
EdgeTag classify_edge(const MonodromyCoefficients& c);

struct BandEdge {
  double lambda = 0.0;
  EdgeTag tag = EdgeTag::regular;
};

struct Band {
  BandEdge left;
  BandEdge right;
};

struct BandChart {
  std::vector<Band> intervals;
};

struct BandSearchOptions {
  int scan_points = 2000;
  double edge_tol = 1e-10;
  /// Ladder level for every evaluation; negative means the finest level.
  int level = -1;
  unsigned threads = 1;
  LadderOptions ladder = {};
  /// Called with each bisection bracket.
  BisectionTrace trace = {};
};

/// Scans g on a uniform grid, bisects each sign change and each hidden
/// extremum crossing, and assembles the stability intervals in [lo, hi].
/// Gaps no wider than edge_tol are merged away. Interval ends clipped by the
/// range are tagged range_limit.
BandChart find_bands(const PeriodicPotential& potential, std::pair<double, double> range,
                     const BandSearchOptions& options = {});
BandChart find_bands(const MeshHierarchy& meshes, std::pair<double, double> range,
                     const BandSearchOptions& options = {});

}  // namespace hillspec
