#pragma once

#include <numbers>
#include <stdexcept>

namespace hillspec {

/// y(0) cos(alpha) + y'(0) sin(alpha) = 0 with alpha in [0, pi).
class BoundaryCondition {
 public:
  explicit BoundaryCondition(double alpha = 0.0) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha < std::numbers::pi)) {
      throw std::invalid_argument("alpha must lie in [0, pi)");
    }
  }

  static BoundaryCondition dirichlet() { return BoundaryCondition(0.0); }
  static BoundaryCondition neumann() { return BoundaryCondition(0.5 * std::numbers::pi); }

  double alpha() const noexcept { return alpha_; }
  bool is_dirichlet() const noexcept { return alpha_ == 0.0; }
  bool is_neumann() const noexcept { return alpha_ == 0.5 * std::numbers::pi; }

 private:
  double alpha_;
};

}  // namespace hillspec
