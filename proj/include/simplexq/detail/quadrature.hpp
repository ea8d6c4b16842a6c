#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace simplexq::detail {

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_depth = 60;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // accumulated error estimate
  bool converged = true;
};

// Single Gauss7/Kronrod15 panel. Returns the K15 value; *err gets the
// |K15 - G7| discrepancy scaled by the interval.
double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double* err);

// Adaptive bisection on [a, b]. Panels are accepted when the local error
// estimate drops below the local tolerance share; the budget is halved on
// each split so accumulated error stays within the request.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, QuadOptions opts = {});

// integrate(), but throws NumericalError when not converged.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, QuadOptions opts = {});

}  // namespace simplexq::detail
