#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hillspec/errors.hpp"
#include "hillspec/potential.hpp"
#include "hillspec/propagator.hpp"

namespace hillspec {

/// (y, y') carried with a log-scale exponent: the represented value is
/// (y, y_x) * exp(log_scale).
struct StateFrame {
  double y = 0.0;
  double y_x = 0.0;
  double log_scale = 0.0;
};

/// Frames are renormalized into log_scale once a component exceeds this.
inline constexpr double kRenormalizeAbove = 1e150;

struct SweepPlan {
  StepMesh mesh;
  double lambda = 0.0;
  std::vector<IntervalKernel> kernels;
  /// 1-based match index M in [1, N+1]; forward covers intervals 1..M-1,
  /// backward covers M..N.
  std::size_t match_index = 1;
  double log_p_front = 0.0;
  double log_p_back = 0.0;

  std::size_t intervals() const noexcept { return kernels.size(); }
  double log_sigma(std::size_t n) const { return kernels[n].log_sigma; }
};

/// Scaled forward and backward solutions at x_M.
struct MatchFrames {
  StateFrame u_front, v_front, u_back, v_back;
  double log_p_front = 0.0;
  double log_p_back = 0.0;
};

/// c11 = u(l), c12 = u'(l), c21 = v(l), c22 = v'(l).
struct MonodromyCoefficients {
  double c11 = 1.0;
  double c12 = 0.0;
  double c21 = 0.0;
  double c22 = 1.0;
  double log_zeta = 0.0;

  double trace() const noexcept { return c11 + c22; }
  double det() const noexcept { return c11 * c22 - c12 * c21; }

  /// 4 - (c11 + c22)^2, evaluated as -(c11 - c22)^2 - 4 c12 c21. The two
  /// agree when det = 1; the second form keeps its relative accuracy near
  /// band edges where the first cancels.
  double discriminant_complement() const noexcept {
    const double d = c11 - c22;
    return -d * d - 4.0 * c12 * c21;
  }

  /// g = 2 - |c11 + c22|: positive inside bands, negative in gaps.
  double discriminant_defect() const noexcept {
    return discriminant_complement() / (2.0 + std::fabs(trace()));
  }
};

/// h^2 Richardson extrapolation from a mesh and its bisection.
MonodromyCoefficients richardson(const MonodromyCoefficients& fine,
                                 const MonodromyCoefficients& coarse);

/// Builds kernels and picks M so the accumulated log scale factors in front
/// of and behind x_M are as equal as possible. Ties go to the index closest
/// to (N+2)/2, then to the larger index; with no scaling at all M is
/// ceil((N+1)/2).
SweepPlan plan_sweep(const StepMesh& mesh, double lambda);

/// Same plan with an explicit match index (1-based).
SweepPlan plan_sweep(const StepMesh& mesh, double lambda, std::size_t match_index);

struct SweepOptions {
  bool scaling = true;
};

MatchFrames sweep_to_match(const SweepPlan& plan, const SweepOptions& options = {});

/// Monodromy coefficients from the matched forward and backward sweeps.
/// Delta, the Wronskian of the backward basis, is used at its exact value
/// (1 before scaling). Throws DegenerateBasisError on non-finite frames.
MonodromyCoefficients double_shoot(const SweepPlan& plan, const SweepOptions& options = {});

/// Diagnostic: unscaled forward-only product of the step matrices.
MonodromyCoefficients simple_shoot(const StepMesh& mesh, double lambda);

enum class ShootingMode { double_shooting, simple };

struct LadderOptions {
  int initial_intervals = 32;
  int max_refinements = 8;
  bool extrapolate = true;
  ShootingMode mode = ShootingMode::double_shooting;
  bool scaling = true;
};

/// The bisected mesh sequence of one potential, built once and shared.
class MeshHierarchy {
 public:
  MeshHierarchy(const PeriodicPotential& potential, const LadderOptions& options = {});

  const PeriodicPotential& potential() const noexcept { return potential_; }
  const LadderOptions& options() const noexcept { return options_; }
  int levels() const noexcept { return static_cast<int>(meshes_.size()); }
  const StepMesh& at(int level) const { return meshes_.at(static_cast<std::size_t>(level)); }

 private:
  PeriodicPotential potential_;
  LadderOptions options_;
  std::vector<StepMesh> meshes_;
};

MonodromyCoefficients monodromy_on_mesh(const StepMesh& mesh, double lambda,
                                        const LadderOptions& options = {});

/// Scalar whose successive values decide convergence of the ladder.
using ConvergenceTarget = std::function<double(const MonodromyCoefficients&)>;

double trace_target(const MonodromyCoefficients& c);

struct LadderResult {
  MonodromyCoefficients coefficients;
  StepMesh mesh;
  int level = 0;
  double defect = 0.0;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, LadderResult best)
      : Error(what), best_(std::move(best)) {}
  const LadderResult& best() const noexcept { return best_; }
  double defect() const noexcept { return best_.defect; }

 private:
  LadderResult best_;
};

/// Refines from N0 by bisection until successive (extrapolated) values of
/// the target differ by at most tol. Throws ConvergenceError after
/// max_refinements.
LadderResult monodromy_at(const PeriodicPotential& potential, double lambda, double tol,
                          const LadderOptions& options = {},
                          const ConvergenceTarget& target = trace_target);

LadderResult monodromy_at(const MeshHierarchy& meshes, double lambda, double tol,
                          const ConvergenceTarget& target = trace_target);

/// Coefficients at one fixed ladder level (extrapolated against the level
/// below when enabled). Smooth in lambda, which bisection relies on.
MonodromyCoefficients monodromy_at_level(const MeshHierarchy& meshes, double lambda, int level);

}  // namespace hillspec
