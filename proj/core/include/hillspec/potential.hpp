#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hillspec {

/// A real potential q(x) with period ell. Evaluation wraps its argument into
/// [0, ell) before calling the underlying closed form, so evaluate() is total.
class PeriodicPotential {
 public:
  using Function = std::function<double(double)>;

  PeriodicPotential(std::string name, double period, Function q);

  /// Piecewise-constant potential: values[k] on [breakpoints[k], breakpoints[k+1]).
  /// breakpoints run from 0 to period inclusive.
  static PeriodicPotential step(std::string name, double period,
                                std::vector<double> breakpoints,
                                std::vector<double> values);

  static PeriodicPotential constant(double value, double period,
                                    std::string name = "constant");

  const std::string& name() const noexcept { return name_; }
  double period() const noexcept { return period_; }

  double evaluate(double x) const;
  double operator()(double x) const { return evaluate(x); }

  /// Maps x into [0, period).
  double wrap(double x) const noexcept;

  bool is_step() const noexcept { return step_ != nullptr; }
  std::span<const double> step_breakpoints() const noexcept;
  std::span<const double> step_values() const noexcept;

 private:
  struct StepData {
    std::vector<double> breakpoints;
    std::vector<double> values;
  };

  std::string name_;
  double period_;
  Function q_;
  std::shared_ptr<const StepData> step_;
};

/// The same potential regarded as periodic over copies * period. Band
/// charts are unchanged; monodromy data refers to the longer period.
PeriodicPotential repeat_period(const PeriodicPotential& potential, int copies);

/// Builtin catalog: mathieu, ex2, ex3, ex4, ex5. Throws NotFoundError.
PeriodicPotential builtin(std::string_view name);
std::vector<std::string> builtin_names();

/// Partition 0 = x_1 < ... < x_{N+1} = ell with one constant value per
/// subinterval.
class StepMesh {
 public:
  StepMesh(std::vector<double> breakpoints, std::vector<double> values,
           bool uniform = false);

  std::size_t size() const noexcept { return values_.size(); }
  double period() const noexcept { return breakpoints_.back(); }
  bool uniform() const noexcept { return uniform_; }

  double breakpoint(std::size_t i) const { return breakpoints_[i]; }
  double width(std::size_t n) const { return breakpoints_[n + 1] - breakpoints_[n]; }
  double value(std::size_t n) const { return values_[n]; }
  double midpoint(std::size_t n) const {
    return 0.5 * (breakpoints_[n] + breakpoints_[n + 1]);
  }

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  bool uniform_;
};

/// Uniform mesh with N subintervals sampled at midpoints. Step potentials
/// keep their own breakpoints and split each piece into ceil(N/K) parts.
StepMesh discretize(const PeriodicPotential& potential, int intervals);

/// Bisects every subinterval and resamples at the new midpoints.
StepMesh refine(const StepMesh& mesh, const PeriodicPotential& potential);

}  // namespace hillspec
