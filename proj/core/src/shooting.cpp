#include "hillspec/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ladder.hpp"

namespace hillspec {

namespace {

// Columns of a 2x2 frame matrix are the U and V solutions; both share one
// log scale.
struct ScaledBasis {
  Mat2 m = Mat2::identity();
  double log_scale = 0.0;

  void renormalize() {
    const double big = std::max({std::fabs(m.a11), std::fabs(m.a12), std::fabs(m.a21),
                                 std::fabs(m.a22)});
    if (big > kRenormalizeAbove && std::isfinite(big)) {
      m = m * (1.0 / big);
      log_scale += std::log(big);
    }
  }
};

bool finite_frame(const StateFrame& s) { return std::isfinite(s.y) && std::isfinite(s.y_x); }

StateFrame column(const Mat2& m, int col, double log_scale) {
  if (col == 0) return {m.a11, m.a21, log_scale};
  return {m.a12, m.a22, log_scale};
}

std::size_t choose_match_index(const std::vector<IntervalKernel>& kernels) {
  const std::size_t n = kernels.size();
  double total = 0.0;
  for (const auto& k : kernels) total += k.log_sigma;
  const std::size_t middle = (n + 2) / 2;  // ceil((N+1)/2)
  if (total == 0.0) return middle;

  // Ties go to the index nearest the centre (N+2)/2 of [1, N+1], then to
  // the larger one.
  const auto dist = [&](std::size_t i) {
    const long d = 2 * static_cast<long>(i) - static_cast<long>(n + 2);
    return d < 0 ? -d : d;
  };
  std::size_t best = 1;
  double best_defect = std::numeric_limits<double>::infinity();
  double front = 0.0;
  for (std::size_t m = 1; m <= n + 1; ++m) {
    const double defect = std::fabs(front - 0.5 * total);
    if (defect < best_defect || (defect == best_defect && dist(m) <= dist(best))) {
      best_defect = defect;
      best = m;
    }
    if (m <= n) front += kernels[m - 1].log_sigma;
  }
  return best;
}

}  // namespace

MonodromyCoefficients richardson(const MonodromyCoefficients& fine,
                                 const MonodromyCoefficients& coarse) {
  MonodromyCoefficients r;
  r.c11 = fine.c11 + (fine.c11 - coarse.c11) / 3.0;
  r.c12 = fine.c12 + (fine.c12 - coarse.c12) / 3.0;
  r.c21 = fine.c21 + (fine.c21 - coarse.c21) / 3.0;
  r.c22 = fine.c22 + (fine.c22 - coarse.c22) / 3.0;
  r.log_zeta = fine.log_zeta;
  return r;
}

SweepPlan plan_sweep(const StepMesh& mesh, double lambda) {
  SweepPlan plan = plan_sweep(mesh, lambda, 1);
  plan.match_index = choose_match_index(plan.kernels);
  plan.log_p_front = 0.0;
  plan.log_p_back = 0.0;
  for (std::size_t n = 0; n < plan.kernels.size(); ++n) {
    (n + 1 < plan.match_index ? plan.log_p_front : plan.log_p_back) += plan.kernels[n].log_sigma;
  }
  return plan;
}

SweepPlan plan_sweep(const StepMesh& mesh, double lambda, std::size_t match_index) {
  const std::size_t n = mesh.size();
  if (match_index < 1 || match_index > n + 1) {
    throw std::invalid_argument("match index must lie in [1, N+1]");
  }
  SweepPlan plan{mesh, lambda, {}, match_index, 0.0, 0.0};
  plan.kernels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    plan.kernels.push_back(IntervalKernel::make(lambda, mesh.value(i), mesh.width(i)));
    (i + 1 < match_index ? plan.log_p_front : plan.log_p_back) += plan.kernels.back().log_sigma;
  }
  return plan;
}

MatchFrames sweep_to_match(const SweepPlan& plan, const SweepOptions& options) {
  const std::size_t m = plan.match_index;
  const std::size_t n = plan.kernels.size();

  ScaledBasis front;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    front.m = plan.kernels[i].forward(options.scaling) * front.m;
    front.renormalize();
  }
  ScaledBasis back;
  for (std::size_t i = n; i-- > m - 1;) {
    back.m = plan.kernels[i].backward(options.scaling) * back.m;
    back.renormalize();
  }

  MatchFrames f;
  f.u_front = column(front.m, 0, front.log_scale);
  f.v_front = column(front.m, 1, front.log_scale);
  f.u_back = column(back.m, 0, back.log_scale);
  f.v_back = column(back.m, 1, back.log_scale);
  f.log_p_front = options.scaling ? plan.log_p_front : 0.0;
  f.log_p_back = options.scaling ? plan.log_p_back : 0.0;
  return f;
}

namespace {
bool finite_frames(const MatchFrames& f) {
  return finite_frame(f.u_front) && finite_frame(f.v_front) && finite_frame(f.u_back) &&
         finite_frame(f.v_back);
}
}  // namespace

MonodromyCoefficients double_shoot(const SweepPlan& plan, const SweepOptions& options) {
  const MatchFrames f = sweep_to_match(plan, options);
  const StateFrame& uf = f.u_front;
  const StateFrame& vf = f.v_front;
  const StateFrame& ub = f.u_back;
  const StateFrame& vb = f.v_back;

  if (!finite_frames(f)) {
    throw DegenerateBasisError("non-finite match frames at lambda = " +
                               std::to_string(plan.lambda));
  }

  // The unscaled backward basis has Wronskian 1, so the scaled Delta is
  // exp(-2 (log_p_back + log_scale)) exactly. Forming it from the frames
  // instead cancels catastrophically once the backward growth passes ~1e8,
  // since both columns then point along the same dominant solution. With
  // Delta exact, each c_ij is a Wronskian of one front and one back frame
  // times the product of both scales.
  const double log_factor =
      (f.log_p_front + uf.log_scale) + (f.log_p_back + ub.log_scale);
  const double scale = std::exp(log_factor);

  MonodromyCoefficients c;
  c.c11 = (vb.y_x * uf.y - vb.y * uf.y_x) * scale;
  c.c12 = (ub.y * uf.y_x - ub.y_x * uf.y) * scale;
  c.c21 = (vb.y_x * vf.y - vb.y * vf.y_x) * scale;
  c.c22 = (ub.y * vf.y_x - ub.y_x * vf.y) * scale;
  c.log_zeta = f.log_p_front - f.log_p_back;
  return c;
}

MonodromyCoefficients simple_shoot(const StepMesh& mesh, double lambda) {
  Mat2 m = Mat2::identity();
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    m = step_matrix(lambda - mesh.value(i), mesh.width(i)) * m;
  }
  MonodromyCoefficients c;
  c.c11 = m.a11;
  c.c12 = m.a21;
  c.c21 = m.a12;
  c.c22 = m.a22;
  return c;
}

MeshHierarchy::MeshHierarchy(const PeriodicPotential& potential, const LadderOptions& options)
    : potential_(potential), options_(options) {
  if (options.initial_intervals < 1) throw std::invalid_argument("initial_intervals must be >= 1");
  if (options.max_refinements < 0) throw std::invalid_argument("max_refinements must be >= 0");
  meshes_.reserve(static_cast<std::size_t>(options.max_refinements) + 1);
  meshes_.push_back(discretize(potential_, options.initial_intervals));
  for (int r = 1; r <= options.max_refinements; ++r) {
    meshes_.push_back(refine(meshes_.back(), potential_));
  }
}

MonodromyCoefficients monodromy_on_mesh(const StepMesh& mesh, double lambda,
                                        const LadderOptions& options) {
  if (options.mode == ShootingMode::simple) return simple_shoot(mesh, lambda);
  return double_shoot(plan_sweep(mesh, lambda), SweepOptions{options.scaling});
}

double trace_target(const MonodromyCoefficients& c) { return c.trace(); }

LadderResult monodromy_at(const PeriodicPotential& potential, double lambda, double tol,
                          const LadderOptions& options, const ConvergenceTarget& target) {
  return monodromy_at(MeshHierarchy(potential, options), lambda, tol, target);
}

LadderResult monodromy_at(const MeshHierarchy& meshes, double lambda, double tol,
                          const ConvergenceTarget& target) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const LadderOptions& opt = meshes.options();
  const auto run = detail::run_ladder<MonodromyCoefficients>(
      meshes, tol,
      [&](int level) { return monodromy_on_mesh(meshes.at(level), lambda, opt); },
      [](const MonodromyCoefficients& fine, const MonodromyCoefficients& coarse) {
        return richardson(fine, coarse);
      },
      target);
  LadderResult result{run.value, meshes.at(run.level), run.level, run.defect};
  if (run.converged) return result;
  throw ConvergenceError("mesh ladder did not converge at lambda = " + std::to_string(lambda) +
                             " (defect " + std::to_string(run.defect) + ")",
                         std::move(result));
}

MonodromyCoefficients monodromy_at_level(const MeshHierarchy& meshes, double lambda, int level) {
  const LadderOptions& opt = meshes.options();
  const MonodromyCoefficients fine = monodromy_on_mesh(meshes.at(level), lambda, opt);
  if (!opt.extrapolate || level == 0) return fine;
  return richardson(fine, monodromy_on_mesh(meshes.at(level - 1), lambda, opt));
}

}  // namespace hillspec
