#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kernel.hpp"
#include "moments.hpp"
#include "specfun.hpp"

namespace edgeworth {

// Upper bound on sup |Psi(t)| * 2 pi |t| over [-1, 1].
inline constexpr double prawitz = 1.0253;

enum class Regime { inid_skew, inid_noskew, iid_skew, iid_noskew };
enum class Theorem { moment_only, polynomial_tail, iid_char_sup, shevtsova };

inline const char* to_string(Regime r)
{
    switch (r) {
    case Regime::inid_skew: return "inid_skew";
    case Regime::inid_noskew: return "inid_noskew";
    case Regime::iid_skew: return "iid_skew";
    case Regime::iid_noskew: return "iid_noskew";
    }
    return "";
}

inline const char* to_string(Theorem t)
{
    switch (t) {
    case Theorem::moment_only: return "moment_only";
    case Theorem::polynomial_tail: return "polynomial_tail";
    case Theorem::iid_char_sup: return "iid_char_sup";
    case Theorem::shevtsova: return "shevtsova";
    }
    return "";
}

inline Regime regime_of(const MomentProfile& p)
{
    if (p.iid())
        return p.no_skew ? Regime::iid_noskew : Regime::iid_skew;
    return p.no_skew ? Regime::inid_noskew : Regime::inid_skew;
}

// exact: the 1/n coefficients are evaluated from their closed forms at eps.
// printed: the rounded eps = 0.1 coefficients 0.195 K4 and 0.03757 / 0.038 lambda^2.
enum class HeadConstants { exact, printed };

struct BoundOptions {
    double eps = 0.1;
    HeadConstants head = HeadConstants::exact;
};

struct Term {
    std::string label;
    double value = 0.0;
};

struct BoundResult {
    double total = 0.0;
    double leading = 0.0;       // order 1/sqrt(n)
    double second_order = 0.0;  // order 1/n
    double remainder = 0.0;
    double integral_term = 0.0;
    std::vector<Term> breakdown; // sums to total
    std::vector<Term> reference; // informational, not part of total
    Regime regime = Regime::inid_skew;
    Theorem theorem = Theorem::moment_only;
    bool finite = true;
};

inline void check_eps(double eps)
{
    if (!(eps > 0.0 && eps < 1.0 / 3.0))
        throw DomainError("eps must lie in (0, 1/3)");
}

// ---------------------------------------------------------------------------
// e- and P-functions

inline double e3(double eps)
{
    check_eps(eps);
    const double q = 2.0 * (1.0 - 3.0 * eps);
    return std::exp(eps * eps / 6.0 + eps * eps / (q * q));
}

inline double P1n(double eps, bool skew)
{
    check_eps(eps);
    double v = 144.0 + 48.0 * eps + 4.0 * eps * eps;
    if (skew)
        v += 96.0 * std::sqrt(2.0 * eps) + 32.0 * eps + 16.0 * std::sqrt(2.0) * std::pow(eps, 1.5);
    return v / 576.0;
}

inline double e1n(double eps, const MomentProfile& p)
{
    const double d = (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    return std::exp(eps * eps * (1.0 / 6.0 + 2.0 * P1n(eps, !p.no_skew) / d));
}

namespace detail {
inline double P2n_unchecked(double eps, const MomentProfile& p)
{
    const double n = static_cast<double>(p.n), K4 = p.K4, l = std::fabs(p.lambda3);
    return 96.0 * std::sqrt(2.0 * eps) * l / (std::pow(K4, 0.25) * std::pow(n, 0.25))
           + 48.0 * eps * std::sqrt(K4 / n) + 32.0 * eps * l * l / std::sqrt(K4 * n)
           + 16.0 * std::sqrt(2.0) * std::pow(K4, 0.25) * l * std::pow(eps, 1.5) / std::pow(n, 0.75)
           + 4.0 * eps * eps * K4 / n;
}

inline double e2n_unchecked(double eps, const MomentProfile& p)
{
    const double d = (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    return std::exp(eps * eps * (1.0 / 6.0 + 1.0 / (2.0 * d) + 2.0 * P2n_unchecked(eps, p) / (576.0 * d)));
}

inline void require_iid(const MomentProfile& p, const char* what)
{
    if (!p.iid())
        throw InvalidProfile(std::string(what) + " requires the iid setting");
}
} // namespace detail

inline double P2n(double eps, const MomentProfile& p)
{
    check_eps(eps);
    detail::require_iid(p, "P2n");
    return detail::P2n_unchecked(eps, p);
}

inline double e2n(double eps, const MomentProfile& p)
{
    check_eps(eps);
    detail::require_iid(p, "e2n");
    return detail::e2n_unchecked(eps, p);
}

// ---------------------------------------------------------------------------
// Pointwise integrands R(u, eps); the remainder integral is (1.0253/pi) int_0^inf u e^{-u^2/2} R du.

inline double R_inid(double u, double eps, const MomentProfile& p)
{
    check_eps(eps);
    const double n = static_cast<double>(p.n), K4 = p.K4, l = std::fabs(p.lambda3);
    const double t = std::fabs(u), k = K4 / n;
    const double D = 2.0 * (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    const bool skew = !p.no_skew;
    const double B = 1.0 / 24.0 + P1n(eps, skew) / D;
    const double U11 = std::pow(t, 6) / 24.0 * std::pow(k, 1.5) + std::pow(t, 8) / 576.0 * k * k;
    double U12 = 0.0;
    if (skew)
        U12 = std::pow(t, 5) / 6.0 * std::pow(k, 1.25) + std::pow(t, 6) / 36.0 * std::pow(k, 1.5)
              + std::pow(t, 7) / 72.0 * std::pow(k, 1.75);
    return (U11 + U12) / D
           + e1n(eps, p)
                 * (std::pow(t, 8) * K4 * K4 / (2.0 * n * n) * B * B
                    + std::pow(t, 7) * l * K4 / (6.0 * std::pow(n, 1.5)) * B);
}

inline double R_iid(double u, double eps, const MomentProfile& p)
{
    check_eps(eps);
    const double n = static_cast<double>(p.n), K4 = p.K4, l = std::fabs(p.lambda3);
    const double t = std::fabs(u);
    const double d = (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    const double Q = K4 / 12.0 + 1.0 / (4.0 * d) + detail::P2n_unchecked(eps, p) / (576.0 * d);
    const double U22 = std::pow(t, 5) * l / (6.0 * std::pow(n, 1.5)) + std::pow(t, 6) * K4 / (24.0 * n * n)
                       + std::pow(t, 6) * l * l / (36.0 * n * n)
                       + std::pow(t, 7) * K4 * l / (72.0 * std::pow(n, 2.5))
                       + std::pow(t, 8) * K4 * K4 / (576.0 * n * n * n);
    return U22 / (2.0 * d)
           + detail::e2n_unchecked(eps, p)
                 * (std::pow(t, 8) / (8.0 * n * n) * Q * Q + std::pow(t, 7) * l / (12.0 * std::pow(n, 1.5)) * Q);
}

// int_0^inf u^q e^{-u^2/2} du
inline double gaussian_moment(double q) { return std::pow(2.0, 0.5 * (q - 1.0)) * std::tgamma(0.5 * (q + 1.0)); }

namespace detail {
// (1.0253/pi) sum_p c[p] int_0^inf u^(p+1) e^{-u^2/2} du, for p = 5..8
inline double rbar_from_coefficients(const double (&c)[4])
{
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += c[i] * gaussian_moment(i + 6.0);
    return prawitz / pi * s;
}
} // namespace detail

// Closed forms of the remainder integral, with R expanded in powers of u.
inline double rbar_inid(double eps, const MomentProfile& p)
{
    check_eps(eps);
    const double n = static_cast<double>(p.n), K4 = p.K4, l = std::fabs(p.lambda3);
    const double k = K4 / n;
    const double D = 2.0 * (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    const double sk = p.no_skew ? 0.0 : 1.0;
    const double B = 1.0 / 24.0 + P1n(eps, !p.no_skew) / D;
    const double e = e1n(eps, p);
    const double c[4] = {
        sk * std::pow(k, 1.25) / (6.0 * D),
        std::pow(k, 1.5) / (24.0 * D) + sk * std::pow(k, 1.5) / (36.0 * D),
        sk * std::pow(k, 1.75) / (72.0 * D) + e * l * K4 * B / (6.0 * std::pow(n, 1.5)),
        k * k / (576.0 * D) + e * K4 * K4 * B * B / (2.0 * n * n),
    };
    return detail::rbar_from_coefficients(c);
}

inline double rbar_iid(double eps, const MomentProfile& p)
{
    check_eps(eps);
    detail::require_iid(p, "rbar_iid");
    const double n = static_cast<double>(p.n), K4 = p.K4, l = std::fabs(p.lambda3);
    const double d = (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    const double D = 2.0 * d;
    const double Q = K4 / 12.0 + 1.0 / (4.0 * d) + detail::P2n_unchecked(eps, p) / (576.0 * d);
    const double e = detail::e2n_unchecked(eps, p);
    const double c[4] = {
        l / (6.0 * std::pow(n, 1.5) * D),
        (K4 / 24.0 + l * l / 36.0) / (n * n * D),
        K4 * l / (72.0 * std::pow(n, 2.5) * D) + e * l * Q / (12.0 * std::pow(n, 1.5)),
        K4 * K4 / (576.0 * n * n * n * D) + e * Q * Q / (8.0 * n * n),
    };
    return detail::rbar_from_coefficients(c);
}

// Published eps = 0.1 evaluations. The inid skew n^{-3/2} coefficient differs between
// the two moment-only and regularized remainders (31.9921 and 8.2383); both are kept.
enum class RbarVariant { moment_only, regularized };

inline double rbar_inid_printed(const MomentProfile& p, RbarVariant v)
{
    const double n = static_cast<double>(p.n), K4 = p.K4, l = std::fabs(p.lambda3);
    if (p.no_skew)
        return 0.6661 * std::pow(K4, 1.5) / std::pow(n, 1.5) + 6.1361 * K4 * K4 / (n * n);
    const double x = v == RbarVariant::moment_only ? 31.9921 : 8.2383;
    return 1.0435 * std::pow(K4, 1.25) / std::pow(n, 1.25) + (1.1101 * std::pow(K4, 1.5) + x * l * K4) / std::pow(n, 1.5)
           + 0.6087 * std::pow(K4, 1.75) / std::pow(n, 1.75) + 9.8197 * K4 * K4 / (n * n);
}

inline double rbar_iid_printed(const MomentProfile& p)
{
    detail::require_iid(p, "rbar_iid_printed");
    const double n = static_cast<double>(p.n), K4 = p.K4, l = p.no_skew ? 0.0 : std::fabs(p.lambda3);
    const double E = detail::e2n_unchecked(0.1, p);
    auto pw = [](double x, double a) { return std::pow(x, a); };
    if (p.no_skew) {
        return 0.6661 * K4 / pw(n, 2) + 0.2221 * K4 * K4 / pw(n, 3)
               + E
                     * (0.1088 * K4 * K4 / pw(n, 2) + 1.3321 * K4 / pw(n, 2) + 0.04441 * pw(K4, 1.5) / pw(n, 2.5)
                        + 0.0003701 * K4 * K4 / pw(n, 3) + 4.0779 / pw(n, 2) + 0.2719 * pw(K4, 0.5) / pw(n, 2.5)
                        + 0.002266 * K4 / pw(n, 3) + 0.004531 * K4 / pw(n, 3) + 7.552e-5 * pw(K4, 1.5) / pw(n, 3.5)
                        + 3.147e-7 * K4 * K4 / pw(n, 4));
    }
    const double s = 0.06957 * l / pw(n, 1.5) + 0.6661 * K4 / pw(n, 2) + 0.4441 * l * l / pw(n, 2)
                     + 0.6087 * l * K4 / pw(n, 2.5) + 0.2221 * K4 * K4 / pw(n, 3);
    const double t =
        0.1088 * K4 * K4 / pw(n, 2) + 1.3321 * K4 / pw(n, 2) + 0.3972 * l * pw(K4, 0.75) / pw(n, 2.25)
        + 0.04441 * pw(K4, 1.5) / pw(n, 2.5) + 0.02961 * pw(K4, 0.5) * l * l / pw(n, 2.5)
        + 0.006620 * l * pw(K4, 1.25) / pw(n, 2.75) + 0.0003701 * K4 * K4 / pw(n, 3) + 4.0779 / pw(n, 2)
        + 2.4316 * l * pw(K4, -0.25) / pw(n, 2.25) + 0.2719 * pw(K4, 0.5) / pw(n, 2.5)
        + 0.1813 * pw(K4, -0.5) * l * l / pw(n, 2.5) + 0.1216 * l * pw(K4, 0.25) / pw(n, 2.75)
        + 0.002266 * K4 / pw(n, 3) + 0.3625 * l * l * pw(K4, -0.5) / pw(n, 2.5)
        + 0.05404 * l * l * l * pw(K4, -0.75) / pw(n, 2.75) + 0.01209 * l * l / pw(n, 3)
        + 0.002027 * l * pw(K4, 0.75) / pw(n, 3.25) + 0.004531 * K4 / pw(n, 3) + 0.006042 * l * l / pw(n, 3)
        + 7.552e-5 * pw(K4, 1.5) / pw(n, 3.5) + 0.002014 * pw(l, 4) / K4 / pw(n, 3)
        + 0.0009006 * l * l * l * pw(K4, -0.25) / pw(n, 3.25) + 5.035e-5 * pw(K4, 0.5) * l * l / pw(n, 3.5)
        + 0.0001007 * l * l * pw(K4, 0.5) / pw(n, 3.5) + 1.126e-5 * l * pw(K4, 1.25) / pw(n, 3.75)
        + 3.147e-7 * K4 * K4 / pw(n, 4) + 0.2983 * l * K4 / pw(n, 1.5) + 1.8261 * l / pw(n, 1.5)
        + 0.5445 * l * l * pw(K4, -0.25) / pw(n, 1.75) + 0.06087 * l * pw(K4, 0.5) / pw(n, 2)
        + 0.04058 * l * l * l * pw(K4, -0.5) / pw(n, 2) + 0.009074 * l * l * pw(K4, 0.25) / pw(n, 2.25)
        + 0.0005073 * l * K4 / pw(n, 2.5);
    return s + E * t;
}

// ---------------------------------------------------------------------------
// Bounds on the incomplete-gamma-like integrals J1, J2, J3 over [l, m].

inline constexpr double delta_zero_threshold = 1e-14;

inline double J1(double p, double l, double m, double /*T*/ = 1.0)
{
    if (!(p >= 1.0) || l < 0.0 || m < 0.0)
        throw DomainError("J1: p >= 1 and l, m >= 0 required");
    return prawitz * std::pow(2.0, 0.5 * p - 2.0)
           * std::fabs(gamma_upper(0.5 * p, 0.5 * m * m) - gamma_upper(0.5 * p, 0.5 * l * l)) / pi;
}

// Bound with the exponent factor (1 - 4 chi1 - sqrt(K4/n))/2 =: Delta.
inline double J2_delta(double p, double l, double m, double Delta)
{
    if (!(p >= 1.0) || l < 0.0 || m < 0.0)
        throw DomainError("J2: p >= 1 and l, m >= 0 required");
    if (std::fabs(Delta) < delta_zero_threshold)
        return prawitz / (4.0 * pi) * (2.0 / p) * std::fabs(std::pow(m, p) - std::pow(l, p));
    const double a = 0.5 * p;
    const double d = gamma_lower_ext(a, Delta * m * m) - gamma_lower_ext(a, Delta * l * l);
    if (std::isnan(d))
        return std::numeric_limits<double>::infinity();
    return prawitz / (4.0 * pi) * std::pow(std::fabs(Delta), -a) * std::fabs(d);
}

inline double J2(double p, double l, double m, double /*q*/, double /*T*/, const MomentProfile& prof)
{
    return J2_delta(p, l, m, derived_quantities(prof).Delta);
}

inline double J3(double p, double l, double m, double /*q*/, double /*T*/, const MomentProfile& prof)
{
    if (prof.n < 3)
        throw DomainError("J3: n >= 3 required");
    if (!(p >= 1.0) || l < 0.0 || m < 0.0)
        throw DomainError("J3: p >= 1 and l, m >= 0 required");
    return prawitz * std::pow(2.0, 1.5 * p - 2.0)
           * std::fabs(gamma_upper(0.5 * p, m * m / 8.0) - gamma_upper(0.5 * p, l * l / 8.0)) / pi;
}

// ---------------------------------------------------------------------------
// Remainders

namespace detail {
inline double rbar_for(const MomentProfile& p, double eps, RbarVariant v)
{
    if (eps == 0.1)
        return p.iid() ? rbar_iid_printed(p) : rbar_inid_printed(p, v);
    return p.iid() ? rbar_iid(eps, p) : rbar_inid(eps, p);
}

inline double nonneg(double x) { return x > 0.0 ? x : 0.0; }
} // namespace detail

inline std::vector<Term> remainder_r1_terms(const MomentProfile& p, double eps = 0.1)
{
    check_eps(eps);
    const double n = static_cast<double>(p.n), sn = std::sqrt(n), K4 = p.K4, K3 = p.K3, Kt = p.K3_tilde;
    const double l = std::fabs(p.lambda3);
    const bool skew = !p.no_skew;
    const auto dq = derived_quantities(p);
    const double Tm = 2.0 * sn / Kt; // T / pi
    const double m1 = std::min(dq.tau(eps), Tm);

    std::vector<Term> out;
    out.push_back({"r1n_sup_14.1961_67.0415", (14.1961 + 67.0415) * std::pow(Kt, 4) / (16.0 * std::pow(pi, 4) * n * n)});
    if (skew)
        out.push_back({"r1n_sup_4.3394", 4.3394 * l * std::pow(Kt, 3) / (8.0 * std::pow(pi, 3) * n * n)});
    out.push_back({"r1n_rbar", detail::rbar_for(p, eps, RbarVariant::moment_only)});
    if (p.iid() && skew)
        out.push_back({"r1n_e2_minus_e3",
                       detail::nonneg(1.306 * (detail::e2n_unchecked(eps, p) - e3(eps)) * l * l / (36.0 * n))});
    if (skew)
        out.push_back({"r1n_gamma_diff", detail::nonneg(l * (gamma_upper(1.5, m1) - gamma_upper(1.5, Tm)) / sn)});
    if (p.iid()) {
        if (skew)
            out.push_back({"r1n_J3", K3 / (3.0 * sn) * J3(3.0, m1, Tm, Tm, 0.0, p)});
        else
            out.push_back({"r1n_J3", K4 / (3.0 * n) * J3(4.0, m1, Tm, Tm, 0.0, p)});
    } else {
        if (skew)
            out.push_back({"r1n_J2", K3 / (3.0 * sn) * J2_delta(3.0, m1, Tm, dq.Delta)});
        else
            out.push_back({"r1n_J2", K4 / (3.0 * n) * J2_delta(4.0, m1, Tm, dq.Delta)});
    }
    return out;
}

namespace detail {
inline double sum(const std::vector<Term>& ts)
{
    double s = 0.0;
    for (const auto& t : ts)
        s += t.value;
    return s;
}
} // namespace detail

inline double remainder_r1(const MomentProfile& p, double eps = 0.1) { return detail::sum(remainder_r1_terms(p, eps)); }

inline std::vector<Term> remainder_r2_terms(const MomentProfile& p, double eps = 0.1)
{
    check_eps(eps);
    const double n = static_cast<double>(p.n), sn = std::sqrt(n), K4 = p.K4, K3 = p.K3, Kt = p.K3_tilde;
    const double l = std::fabs(p.lambda3);
    const bool skew = !p.no_skew;
    const auto dq = derived_quantities(p);
    const double pi2 = pi * pi, pi3 = pi2 * pi, pi4 = pi2 * pi2, pi6 = pi3 * pi3, pi8 = pi4 * pi4;
    const double Kt2 = Kt * Kt, Kt4 = Kt2 * Kt2, Kt8 = Kt4 * Kt4;
    const double n4 = n * n * n * n;
    const double T = dq.b_n;
    const double Tp = 16.0 * pi3 * n * n / Kt4; // T / pi
    const double lo = std::min(dq.tau(eps), Tp);

    std::vector<Term> out;
    out.push_back({"r2n_sup_1.2533", 1.2533 / T});
    if (skew)
        out.push_back({"r2n_sup_0.3334", 0.3334 * l / (T * sn)});
    out.push_back({"r2n_sup_14.1961", 14.1961 / std::pow(T, 4)});
    if (skew) {
        out.push_back({"r2n_sup_4.3394", 4.3394 * l / (std::pow(T, 3) * sn)});
        out.push_back({"r2n_gamma_diff", detail::nonneg(l * (gamma_upper(1.5, lo) - gamma_upper(1.5, Tp)) / sn)});
    }
    out.push_back({"r2n_rbar", detail::rbar_for(p, eps, RbarVariant::regularized)});
    if (p.iid()) {
        if (skew) {
            out.push_back({"r2n_J3", K3 / (3.0 * sn) * J3(3.0, lo, Tp, Tp, T, p)});
            out.push_back({"r2n_e2_minus_e3",
                           detail::nonneg(1.306 * (detail::e2n_unchecked(eps, p) - e3(eps)) * l * l / (36.0 * n))});
        } else {
            // The published unskewed i.i.d. remainder carries K3 here.
            out.push_back({"r2n_J3", K3 / (3.0 * n) * J3(4.0, lo, Tp, Tp, T, p)});
        }
    } else {
        if (skew)
            out.push_back({"r2n_J2", K3 / (3.0 * sn) * J2_delta(3.0, lo, Tp, dq.Delta)});
        else
            out.push_back({"r2n_J2", K4 / (3.0 * n) * J2_delta(4.0, lo, Tp, dq.Delta)});
    }

    const double c = 1.0 - 4.0 * pi * chi1_value() * t1_star_value();
    const double t1 = t1_star_value();
    const double A = std::min(4.0 * pi2 * n / Kt2, 144.0 * pi8 * n4 / Kt8);
    const double Bq = std::min(4.0 * t1 * t1 * pi2 * n / Kt2, 144.0 * pi6 * n4 / Kt8);
    const double g1 = prawitz / pi * (gamma_upper(0.0, A * c / (2.0 * pi2)) - gamma_upper(0.0, Bq * c / 2.0));
    const double g2 = prawitz / pi * (gamma_upper(0.0, A / (2.0 * pi2)) - gamma_upper(0.0, 144.0 * pi6 * n4 / Kt8));
    out.push_back({"r2n_gamma0_diff_a", detail::nonneg(g1)});
    out.push_back({"r2n_gamma0_diff_b", detail::nonneg(g2)});
    return out;
}

inline double remainder_r2(const MomentProfile& p, double eps = 0.1) { return detail::sum(remainder_r2_terms(p, eps)); }

inline double remainder_r3(const MomentProfile& p, double C0, double pw, double eps = 0.1)
{
    if (!(C0 > 0.0) || !(pw > 0.0))
        throw DomainError("remainder_r3: C0 > 0 and p > 0 required");
    return remainder_r2(p, eps) - prawitz * C0 * std::pow(derived_quantities(p).b_n, -pw) / pi;
}

// ---------------------------------------------------------------------------
// Edgeworth and Berry-Esseen bounds

namespace detail {
inline double lambda_sq_e(const MomentProfile& p, double eps)
{
    return p.iid() ? e3(eps) : e1n(eps, p);
}

inline void finish(BoundResult& r)
{
    double s = 0.0;
    for (const auto& t : r.breakdown)
        s += t.value;
    r.total = s;
    r.finite = std::isfinite(s);
    if (!r.finite)
        r.total = std::numeric_limits<double>::infinity();
}
} // namespace detail

inline BoundResult bound_EE1(const MomentProfile& p, const RegularityAssumption& reg = {}, const BoundOptions& opt = {})
{
    validate(p);
    validate(reg, p);
    check_eps(opt.eps);
    const bool printed = opt.head == HeadConstants::printed;
    if (printed && opt.eps != 0.1)
        throw DomainError("printed head constants are only defined for eps = 0.1");

    const double n = static_cast<double>(p.n), sn = std::sqrt(n), K4 = p.K4, Kt = p.K3_tilde;
    const double l = p.no_skew ? 0.0 : std::fabs(p.lambda3);
    const bool skew = !p.no_skew;
    const double d = (1.0 - 3.0 * opt.eps) * (1.0 - 3.0 * opt.eps);
    const double k4_coef = printed ? 0.195 : 0.327 * (1.0 / 12.0 + 1.0 / (4.0 * d));

    BoundResult r;
    r.regime = regime_of(p);
    auto add = [&r](const std::string& label, double v) { r.breakdown.push_back({label, v}); };

    if (reg.kind == RegularityKind::moment_only) {
        r.theorem = Theorem::moment_only;
        const double lam_coef = printed ? 0.03757 : 1.306 * detail::lambda_sq_e(p, opt.eps) / 36.0;
        add("leading_0.1995", 0.1995 * Kt / sn);
        add("k3t_sq_0.031", 0.031 * Kt * Kt / n);
        add(printed ? "k4_0.195" : "k4_0.327", k4_coef * K4 / n);
        if (skew) {
            add("lambda_k3t_0.054", 0.054 * l * Kt / n);
            add(printed ? "lambda_sq_0.03757" : "lambda_sq_1.306", lam_coef * l * l / n);
        }
        r.leading = 0.1995 * Kt / sn;
        r.second_order = (0.031 * Kt * Kt + k4_coef * K4 + (skew ? 0.054 * l * Kt + lam_coef * l * l : 0.0)) / n;
        auto rem = remainder_r1_terms(p, opt.eps);
        r.remainder = detail::sum(rem);
        r.breakdown.insert(r.breakdown.end(), rem.begin(), rem.end());
        detail::finish(r);
        return r;
    }

    const double lam_coef = printed ? 0.038 : 1.306 * detail::lambda_sq_e(p, opt.eps) / 36.0;
    add(printed ? "k4_0.195" : "k4_0.327", k4_coef * K4 / n);
    if (skew)
        add(printed ? "lambda_sq_0.038" : "lambda_sq_1.306", lam_coef * l * l / n);
    r.second_order = (k4_coef * K4 + lam_coef * l * l) / n;

    const auto dq = derived_quantities(p);
    auto rem = remainder_r2_terms(p, opt.eps);
    const double r2 = detail::sum(rem);
    if (reg.kind == RegularityKind::polynomial_tail) {
        r.theorem = Theorem::polynomial_tail;
        const double at_a = prawitz * reg.C0 * std::pow(dq.a_n, -reg.p) / pi;
        const double at_b = prawitz * reg.C0 * std::pow(dq.b_n, -reg.p) / pi;
        r.integral_term = at_a;
        r.remainder = r2 - at_b;
        add("integral_poly_tail_net", detail::nonneg(at_a - at_b));
    } else {
        r.theorem = Theorem::iid_char_sup;
        const double lg = std::log(std::log(dq.c_n));
        r.integral_term = prawitz / pi * std::exp(n * std::log(reg.kappa) + lg);
        r.remainder = r2;
        add("integral_kappa_pow_n", r.integral_term);
    }
    r.breakdown.insert(r.breakdown.end(), rem.begin(), rem.end());
    detail::finish(r);
    return r;
}

// Simplified leading constants of the Berry-Esseen bound under default moments.
inline double simplified_be_leading(const MomentProfile& p)
{
    const double sn = p.sqrt_n();
    switch (regime_of(p)) {
    case Regime::inid_skew: return 0.4403 * p.K3 / sn;
    case Regime::inid_noskew: return 0.3990 * p.K3 / sn;
    case Regime::iid_skew: return (0.2408 * p.K3 + 0.1995) / sn;
    case Regime::iid_noskew: return 0.1995 * (p.K3 + 1.0) / sn;
    }
    return 0.0;
}

inline BoundResult bound_BE(const MomentProfile& p, const RegularityAssumption& reg = {}, const BoundOptions& opt = {})
{
    BoundResult r = bound_EE1(p, reg, opt);
    const double l = p.no_skew ? 0.0 : std::fabs(p.lambda3);
    const double extra = 0.0665 * l / p.sqrt_n();
    if (!p.no_skew)
        r.breakdown.push_back({"be_skew_0.0665", extra});
    r.leading += extra;
    r.total += extra;
    r.reference.push_back({"simplified_leading", simplified_be_leading(p)});
    return r;
}

inline BoundResult bound_BE_shevtsova(const MomentProfile& p)
{
    validate(p);
    BoundResult r;
    r.regime = regime_of(p);
    r.theorem = Theorem::shevtsova;
    const double c = p.iid() ? 0.4690 : 0.5583;
    r.leading = c * p.K3 / p.sqrt_n();
    r.breakdown.push_back({p.iid() ? "shevtsova_0.4690" : "shevtsova_0.5583", r.leading});
    r.total = r.leading;
    return r;
}

} // namespace edgeworth
