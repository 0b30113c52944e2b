#pragma once

#include <functional>

#include "hillspec/potential.hpp"

namespace hillspec {

/// u, v with u(0)=1, u'(0)=0, v(0)=0, v'(0)=1, integrated on the smooth
/// potential. error_estimate is the Wronskian defect |u v' - u' v - 1|.
struct OracleSolution {
  double u = 1.0;
  double u_x = 0.0;
  double v = 0.0;
  double v_x = 1.0;
  double error_estimate = 0.0;

  double trace() const noexcept { return u + v_x; }
  double wronskian() const noexcept { return u * v_x - u_x * v; }
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) over one period. rel_tol in
/// [1e-13, 1e-6]. Throws IntegrationFailure when the step size collapses.
OracleSolution integrate_reference(const PeriodicPotential& potential, double lambda,
                                   double rel_tol = 1e-12);

/// Same basis evaluated at an arbitrary x >= 0.
OracleSolution integrate_basis(const PeriodicPotential& potential, double lambda, double x,
                               double rel_tol = 1e-12);

/// (q(lambda + step) - q(lambda - step)) / (2 step).
double finite_difference_lambda(const std::function<double(double)>& quantity, double lambda,
                                double step = 1e-4);

}  // namespace hillspec
