#pragma once

namespace simplexq::detail {

// log of the complete Beta function B(a, b).
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) for a,b > 0, x in [0,1].
// Continued-fraction evaluation (modified Lentz), switching tails at the
// standard pivot x = (a+1)/(a+b+2) so the fraction always converges fast.
double betainc_reg(double a, double b, double x);

// Inverse of I_x(a, b) in x for p in [0,1]. Bracketed Newton iteration with
// bisection fallback; terminates when the bracket or step is below 1e-12
// relative (1e-15 absolute floor).
double betainc_inv(double a, double b, double p);

}  // namespace simplexq::detail
