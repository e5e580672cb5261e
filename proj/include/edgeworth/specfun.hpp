#pragma once

#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"

namespace edgeworth {

inline constexpr double pi = 3.141592653589793238462643383279502884;

namespace detail {
// exp(-745) is below the smallest subnormal.
inline constexpr double log_underflow = -745.0;
} // namespace detail

// Upper incomplete gamma Gamma(a, x) = int_x^inf u^(a-1) e^(-u) du.
// a = 0 is the exponential integral E1(x).
inline double gamma_upper(double a, double x)
{
    if (std::isnan(a) || std::isnan(x))
        throw DomainError("gamma_upper: NaN argument");
    if (a < 0.0)
        throw DomainError("gamma_upper: a < 0");
    if (std::isinf(x))
        return x > 0 ? 0.0 : throw DomainError("gamma_upper: x = -inf");
    if (a == 0.0) {
        if (x <= 0.0)
            throw DomainError("gamma_upper: a = 0 requires x > 0");
        if (x > 740.0)
            return 0.0;
        return boost::math::expint(1, x);
    }
    if (x < 0.0)
        throw DomainError("gamma_upper: x < 0");
    if (x == 0.0)
        return boost::math::tgamma(a);
    if (x > a && (a - 1.0) * std::log(x) - x < detail::log_underflow)
        return 0.0;
    return boost::math::tgamma(a, x);
}

// Lower incomplete gamma gamma(a, x) = int_0^x |u|^(a-1) e^(-u) du, extended to x < 0
// along the real axis. For x < 0 the value is negative; -inf signals overflow.
inline double gamma_lower_ext(double a, double x)
{
    if (std::isnan(a) || std::isnan(x))
        throw DomainError("gamma_lower_ext: NaN argument");
    if (a <= 0.0)
        throw DomainError("gamma_lower_ext: a <= 0");
    if (x >= 0.0) {
        if (std::isinf(x))
            return boost::math::tgamma(a);
        return boost::math::tgamma_lower(a, x);
    }
    const double y = -x;
    if (y > 700.0)
        return -std::numeric_limits<double>::infinity();
    if (a == 2.0 && y > 1.0)
        return (1.0 + x) * std::exp(y) - 1.0;
    // -sum_k y^(a+k) / (k! (a+k)); all terms positive.
    double term = std::pow(y, a); // y^(a+k)/k!
    double sum = term / a;
    for (int k = 1; k < 100000; ++k) {
        term *= y / k;
        const double add = term / (a + k);
        sum += add;
        if (k > y && add < 1e-17 * sum)
            break;
    }
    if (!std::isfinite(sum))
        return -std::numeric_limits<double>::infinity();
    return -sum;
}

inline double std_normal_pdf(double x)
{
    return 0.3989422804014326779399460599343818684759 * std::exp(-0.5 * x * x);
}

inline double std_normal_cdf(double x)
{
    if (std::isnan(x))
        throw DomainError("std_normal_cdf: NaN");
    return 0.5 * std::erfc(-x / 1.4142135623730950488016887242096980785697);
}

struct NormalValue {
    double cdf = 0.0;
    double pdf = 0.0;
};

inline NormalValue std_normal(double x) { return {std_normal_cdf(x), std_normal_pdf(x)}; }

inline double std_normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must lie in (0, 1)");
    return -1.4142135623730950488016887242096980785697 * boost::math::erfc_inv(2.0 * p);
}

} // namespace edgeworth
