#include "hillspec/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "hillspec/errors.hpp"

namespace hillspec {

namespace {

using State = std::array<double, 4>;  // u, u', v, v'

}  // namespace

OracleSolution integrate_basis(const PeriodicPotential& potential, double lambda, double x,
                               double rel_tol) {
  namespace odeint = boost::numeric::odeint;
  if (!(rel_tol >= 1e-13 && rel_tol <= 1e-6)) {
    throw std::invalid_argument("rel_tol must lie in [1e-13, 1e-6]");
  }
  if (!(x >= 0.0)) throw std::invalid_argument("x must be nonnegative");

  State y{1.0, 0.0, 0.0, 1.0};
  if (x > 0.0) {
    const auto rhs = [&](const State& s, State& ds, double t) {
      const double k = potential(t) - lambda;
      ds[0] = s[1];
      ds[1] = k * s[0];
      ds[2] = s[3];
      ds[3] = k * s[2];
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(rel_tol, rel_tol);
    try {
      odeint::integrate_adaptive(stepper, rhs, y, 0.0, x, x / 64.0);
    } catch (const odeint::odeint_error& e) {
      throw IntegrationFailure(std::string("reference integration failed: ") + e.what());
    }
    for (double c : y) {
      if (!std::isfinite(c)) throw IntegrationFailure("reference integration diverged");
    }
  }
  OracleSolution s{y[0], y[1], y[2], y[3], 0.0};
  s.error_estimate = std::fabs(s.wronskian() - 1.0);
  return s;
}

OracleSolution integrate_reference(const PeriodicPotential& potential, double lambda,
                                   double rel_tol) {
  return integrate_basis(potential, lambda, potential.period(), rel_tol);
}

double finite_difference_lambda(const std::function<double(double)>& quantity, double lambda,
                                double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  return (quantity(lambda + step) - quantity(lambda - step)) / (2.0 * step);
}

}  // namespace hillspec
