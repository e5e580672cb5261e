#pragma once

#include <cmath>
#include <functional>
#include <random>

// Independent numerical helpers used as test oracles.
namespace oracle_util {

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = std::fabs(left + right - whole);
    if (depth <= 0 || diff <= 15.0 * tol || diff <= 1e-15 * std::fabs(left + right))
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
           + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13, int depth = 30)
{
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return detail::simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

// Simpson on [a, b] split into pieces to keep peaks resolved.
inline double simpson_pieces(const std::function<double(double)>& f, double a, double b, int pieces, double tol = 1e-13)
{
    double s = 0.0;
    for (int i = 0; i < pieces; ++i)
        s += simpson(f, a + (b - a) * i / pieces, a + (b - a) * (i + 1) / pieces, tol / pieces);
    return s;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200)
{
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi), fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

} // namespace oracle_util
