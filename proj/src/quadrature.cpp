#include "simplexq/detail/quadrature.hpp"

#include <algorithm>

#include "simplexq/errors.hpp"

namespace simplexq::detail {
namespace {

// QUADPACK QK15 abscissae/weights on [-1, 1], positive half.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double k15;
  double err;
};

Panel panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double sum = f(c - x) + f(c + x);
    resk += kWgk[j] * sum;
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

void refine(const std::function<double(double)>& f, double a, double b,
            const Panel& p, double tol, int depth, QuadResult* out) {
  if (p.err <= tol || depth <= 0) {
    out->value += p.k15;
    out->error += p.err;
    if (p.err > tol && depth <= 0) out->converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  const Panel left = panel(f, a, c);
  const Panel right = panel(f, c, b);
  refine(f, a, c, left, 0.5 * tol, depth - 1, out);
  refine(f, c, b, right, 0.5 * tol, depth - 1, out);
}

}  // namespace

double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double* err) {
  const Panel p = panel(f, a, b);
  if (err) *err = p.err;
  return p.k15;
}

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, QuadOptions opts) {
  QuadResult out;
  if (a == b) return out;
  const Panel first = panel(f, a, b);
  // The first pass fixes the scale for the relative tolerance.
  const double tol =
      std::max(opts.abs_tol, opts.rel_tol * std::abs(first.k15));
  refine(f, a, b, first, tol, opts.max_depth, &out);
  // If refinement reveals a much smaller true value (cancellation or a
  // spike missed by the first panel), tighten once against the new scale.
  const double want =
      std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
  if (out.converged && out.error > want) {
    out = QuadResult{};
    refine(f, a, b, first, want, opts.max_depth, &out);
    if (out.error > std::max(opts.abs_tol,
                             opts.rel_tol * std::abs(out.value))) {
      out.converged = false;
    }
  }
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, QuadOptions opts) {
  const QuadResult r = integrate(f, a, b, opts);
  if (!r.converged) {
    throw NumericalError("adaptive quadrature failed to converge");
  }
  return r.value;
}

}  // namespace simplexq::detail
