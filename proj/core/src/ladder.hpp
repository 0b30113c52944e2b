#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "hillspec/shooting.hpp"

namespace hillspec::detail {

template <class Sample>
struct LadderOutcome {
  Sample value;
  int level = 0;
  double defect = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Walks the mesh hierarchy, extrapolating each level against the previous
// one when enabled, and stops once two successive estimates of target()
// agree to tol. The first comparison therefore needs two extrapolated
// levels.
template <class Sample, class Evaluate, class Extrapolate, class Target>
LadderOutcome<Sample> run_ladder(const MeshHierarchy& meshes, double tol, Evaluate&& evaluate,
                                 Extrapolate&& extrapolate, Target&& target) {
  const bool richardson = meshes.options().extrapolate;
  Sample raw = evaluate(0);
  std::optional<Sample> estimate;
  double previous = 0.0;
  if (!richardson) {
    estimate = raw;
    previous = target(raw);
  }
  LadderOutcome<Sample> best{raw, 0, std::numeric_limits<double>::infinity(), false};

  for (int level = 1; level < meshes.levels(); ++level) {
    Sample fine = evaluate(level);
    Sample next = richardson ? extrapolate(fine, raw) : fine;
    const double value = target(next);
    double defect = best.defect;
    if (estimate) defect = std::fabs(value - previous);
    best = LadderOutcome<Sample>{next, level, defect, estimate.has_value() && defect <= tol};
    if (best.converged) return best;
    estimate = next;
    previous = value;
    raw = fine;
  }
  return best;
}

}  // namespace hillspec::detail
