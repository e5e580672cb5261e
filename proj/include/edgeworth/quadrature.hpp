#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "errors.hpp"

namespace edgeworth {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    unsigned max_depth = 20;
};

// Adaptive Gauss-Kronrod (61 points by default) on [a, b]; infinite limits are allowed.
// Throws QuadratureError when the error estimate exceeds the requested tolerance.
template <unsigned Points = 61, class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {})
{
    if (a == b)
        return 0.0;
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, Points>::integrate(
        f, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
    if (!std::isfinite(v))
        throw QuadratureError("non-finite integral");
    if (err > std::max(opt.abs_tol, opt.rel_tol * l1))
        throw QuadratureError("error estimate " + std::to_string(err) + " above tolerance");
    return v;
}

struct Maximum {
    double x;
    double value;
};

// Maximize f on [lo, hi]: evaluate on a uniform grid of `points` nodes, then refine the
// best `brackets` local maxima with Brent's method.
template <class F>
Maximum maximize(F&& f, double lo, double hi, int points = 2048, int brackets = 3)
{
    std::vector<double> xs(points), ys(points);
    const double h = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        xs[i] = lo + i * h;
        ys[i] = f(xs[i]);
    }
    std::vector<int> idx(points);
    for (int i = 0; i < points; ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ys[a] > ys[b]; });

    Maximum best{xs[idx[0]], ys[idx[0]]};
    const int take = std::min(brackets, points);
    for (int k = 0; k < take; ++k) {
        const int i = idx[k];
        const double a = xs[std::max(i - 1, 0)];
        const double b = xs[std::min(i + 1, points - 1)];
        auto neg = [&](double x) { return -f(x); };
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::brent_find_minima(neg, a, b, 52, iters);
        if (-r.second > best.value)
            best = {r.first, -r.second};
    }
    return best;
}

} // namespace edgeworth
