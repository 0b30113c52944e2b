#include "hillspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "hillspec/errors.hpp"

namespace hillspec {

PeriodicPotential::PeriodicPotential(std::string name, double period, Function q)
    : name_(std::move(name)), period_(period), q_(std::move(q)) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("potential period must be positive and finite");
  }
  if (!q_) throw std::invalid_argument("potential function is empty");
}

PeriodicPotential PeriodicPotential::step(std::string name, double period,
                                          std::vector<double> breakpoints,
                                          std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("step potential needs at least one value");
  if (breakpoints.size() != values.size() + 1) {
    throw std::invalid_argument("step potential needs one more breakpoint than values");
  }
  if (breakpoints.front() != 0.0 || breakpoints.back() != period) {
    throw std::invalid_argument("step breakpoints must run from 0 to the period");
  }
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw std::invalid_argument("step breakpoints must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("step values must be finite");
  }

  auto data = std::make_shared<StepData>(StepData{std::move(breakpoints), std::move(values)});
  Function lookup = [data](double x) {
    const auto& bp = data->breakpoints;
    auto it = std::upper_bound(bp.begin() + 1, bp.end() - 1, x);
    return data->values[static_cast<std::size_t>(it - (bp.begin() + 1))];
  };
  PeriodicPotential p(std::move(name), period, std::move(lookup));
  p.step_ = std::move(data);
  return p;
}

PeriodicPotential PeriodicPotential::constant(double value, double period, std::string name) {
  return PeriodicPotential(std::move(name), period, [value](double) { return value; });
}

double PeriodicPotential::wrap(double x) const noexcept {
  if (x >= 0.0 && x < period_) return x;
  double r = x - period_ * std::floor(x / period_);
  if (r >= period_ || r < 0.0) r = 0.0;
  return r;
}

double PeriodicPotential::evaluate(double x) const { return q_(wrap(x)); }

std::span<const double> PeriodicPotential::step_breakpoints() const noexcept {
  if (!step_) return {};
  return step_->breakpoints;
}

std::span<const double> PeriodicPotential::step_values() const noexcept {
  if (!step_) return {};
  return step_->values;
}

PeriodicPotential repeat_period(const PeriodicPotential& potential, int copies) {
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");
  if (copies == 1) return potential;
  const double period = potential.period() * copies;
  std::string name = potential.name() + "x" + std::to_string(copies);
  if (potential.is_step()) {
    const auto bp = potential.step_breakpoints();
    const auto values = potential.step_values();
    std::vector<double> all_bp{0.0};
    std::vector<double> all_values;
    for (int k = 0; k < copies; ++k) {
      const double offset = potential.period() * k;
      for (std::size_t i = 0; i < values.size(); ++i) {
        all_values.push_back(values[i]);
        all_bp.push_back(k + 1 == copies && i + 1 == values.size() ? period
                                                                   : offset + bp[i + 1]);
      }
    }
    return PeriodicPotential::step(std::move(name), period, std::move(all_bp),
                                   std::move(all_values));
  }
  return PeriodicPotential(std::move(name), period,
                           [potential](double x) { return potential.evaluate(x); });
}

PeriodicPotential builtin(std::string_view name) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (name == "mathieu") {
    return {"mathieu", two_pi, [](double x) { return std::cos(x); }};
  }
  if (name == "ex2") {
    return {"ex2", two_pi, [](double x) { return 3.0 / (2.0 + std::sin(x)); }};
  }
  if (name == "ex3") {
    return {"ex3", std::numbers::pi, [](double x) {
              const double s = std::sin(x);
              return 1.0 / std::sqrt(1.0 - 0.75 * s * s);
            }};
  }
  if (name == "ex4") {
    return {"ex4", two_pi, [](double x) {
              return (0.5 + std::cos(x) + std::cos(2.0 * x) + std::cos(3.0 * x)) /
                     std::numbers::pi;
            }};
  }
  if (name == "ex5") {
    return {"ex5", two_pi, [](double x) {
              return std::sin(x) + 0.5 * std::sin(2.0 * x) + 0.1 * std::sin(3.0 * x);
            }};
  }
  throw NotFoundError("unknown builtin potential '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() { return {"mathieu", "ex2", "ex3", "ex4", "ex5"}; }

StepMesh::StepMesh(std::vector<double> breakpoints, std::vector<double> values, bool uniform)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), uniform_(uniform) {
  if (values_.empty()) throw std::invalid_argument("mesh needs at least one subinterval");
  if (breakpoints_.size() != values_.size() + 1) {
    throw std::invalid_argument("mesh needs one more breakpoint than values");
  }
  if (breakpoints_.front() != 0.0) throw std::invalid_argument("mesh must start at 0");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw std::invalid_argument("mesh widths must be positive");
    }
  }
}

namespace {

StepMesh uniform_mesh(const PeriodicPotential& potential, std::size_t n) {
  const double ell = potential.period();
  std::vector<double> bp(n + 1);
  for (std::size_t i = 0; i < n; ++i) bp[i] = ell * static_cast<double>(i) / static_cast<double>(n);
  bp[n] = ell;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = potential.evaluate(0.5 * (bp[i] + bp[i + 1]));
  return StepMesh(std::move(bp), std::move(q), true);
}

}  // namespace

StepMesh discretize(const PeriodicPotential& potential, int intervals) {
  if (intervals < 1) throw std::invalid_argument("discretize: need at least one subinterval");
  const auto n = static_cast<std::size_t>(intervals);
  if (!potential.is_step()) return uniform_mesh(potential, n);

  const auto pieces = potential.step_breakpoints();
  const std::size_t k = pieces.size() - 1;
  const std::size_t per_piece = (n + k - 1) / k;
  std::vector<double> bp;
  bp.reserve(k * per_piece + 1);
  for (std::size_t p = 0; p < k; ++p) {
    const double a = pieces[p];
    const double b = pieces[p + 1];
    for (std::size_t j = 0; j < per_piece; ++j) {
      bp.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(per_piece));
    }
  }
  bp.push_back(potential.period());
  std::vector<double> q(bp.size() - 1);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = potential.evaluate(0.5 * (bp[i] + bp[i + 1]));
  return StepMesh(std::move(bp), std::move(q), false);
}

StepMesh refine(const StepMesh& mesh, const PeriodicPotential& potential) {
  if (mesh.uniform() && !potential.is_step()) return uniform_mesh(potential, 2 * mesh.size());

  std::vector<double> bp;
  bp.reserve(2 * mesh.size() + 1);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    bp.push_back(mesh.breakpoint(i));
    bp.push_back(mesh.midpoint(i));
  }
  bp.push_back(mesh.period());
  std::vector<double> q(bp.size() - 1);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = potential.evaluate(0.5 * (bp[i] + bp[i + 1]));
  return StepMesh(std::move(bp), std::move(q), false);
}

}  // namespace hillspec
