#include "robustspline/quadrature.hpp"

#include "robustspline/error.hpp"

#include <limits>

namespace robustspline {

namespace {

struct Simpson {
    const std::function<double(double)>& f;
    QuadratureResult& out;

    double eval(double x)
    {
        ++out.evaluations;
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericalError("integrand is not finite");
        return v;
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth)
    {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        // Below the rounding level further splitting cannot help.
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(left) + std::abs(right));
        if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise || m <= a || m >= b)
            return left + right + delta / 15.0;
        if (depth <= 0) {
            out.converged = false;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth)
{
    QuadratureResult r;
    if (a == b)
        return r;
    Simpson s{f, r};
    const double fa = s.eval(a);
    const double fb = s.eval(b);
    const double m = 0.5 * (a + b);
    const double fm = s.eval(m);
    // One forced split: a single Simpson panel can look converged on
    // integrands that vanish at a, m and b.
    const double l = 0.5 * (a + m);
    const double rr = 0.5 * (m + b);
    const double fl = s.eval(l);
    const double fr = s.eval(rr);
    const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    r.value = s.recurse(a, m, fa, fl, fm, left, 0.5 * abs_tol, max_depth - 1) +
              s.recurse(m, b, fm, fr, fb, right, 0.5 * abs_tol, max_depth - 1);
    return r;
}

} // namespace robustspline
