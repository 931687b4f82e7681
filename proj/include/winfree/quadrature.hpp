#pragma once

#include <cmath>

#include "winfree/errors.hpp"

namespace winfree {

// Composite Simpson rule with a fixed even interval count.
template <class F>
double simpson(F&& f, double a, double b, int intervals = 1024) {
    if (intervals < 2 || intervals % 2 != 0) {
        throw domain_error("composite rule needs an even, positive interval count");
    }
    const double h = (b - a) / intervals;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < intervals; i += 2) odd += f(a + i * h);
    for (int i = 2; i < intervals; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

namespace detail {

// Adaptive Simpson with Richardson correction. whole is the Simpson estimate
// on [a, b] with midpoint m and values fa, fm, fb. While force > 0 the
// interval is split unconditionally: the usual acceptance test trusts the
// three sampled points, which a feature much narrower than the interval can
// slip between.
template <class F>
double adaptive_simpson_rec(F& f, double a, double m, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth, int force) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || (force <= 0 && std::fabs(delta) <= 15.0 * tol)) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                                force - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                                force - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature to the requested absolute tolerance. min_depth
// levels are subdivided before the error estimate is believed; raise it when
// the integrand hides narrow features away from the interval midpoints.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48,
                        int min_depth = 0) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth,
                                        min_depth);
}

}  // namespace winfree
