#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"
#include "kernel.hpp"

namespace edgeworth {

enum class Setting { inid, iid };

inline const char* to_string(Setting s) { return s == Setting::iid ? "iid" : "inid"; }

inline Setting parse_setting(const std::string& s)
{
    if (s == "iid")
        return Setting::iid;
    if (s == "inid")
        return Setting::inid;
    throw InvalidProfile("setting must be \"inid\" or \"iid\", got \"" + s + "\"");
}

// Standardized moments of S_n = sum X_i / B_n. K3 and K4 are averaged absolute moments
// normalized by the average variance; lambda3 is the averaged third moment.
struct MomentProfile {
    std::int64_t n = 0;
    double K4 = 0.0;
    double K3 = 0.0;
    double K3_tilde = 0.0;
    double lambda3 = 0.0;
    Setting setting = Setting::inid;
    bool no_skew = false;

    bool iid() const { return setting == Setting::iid; }
    double sqrt_n() const { return std::sqrt(static_cast<double>(n)); }
};

struct ProfileOptions {
    // Enforce |lambda3| <= 0.621 K3 on top of |lambda3| <= K3.
    bool strict_skewness = false;
};

inline constexpr double default_skewness_ratio = 0.621;

namespace detail {
inline bool le(double a, double b) { return a <= b * (1.0 + 1e-12) + 1e-300; }
} // namespace detail

inline void validate(const MomentProfile& p, const ProfileOptions& opt = {})
{
    auto bad = [](const std::string& w) { throw InvalidProfile(w); };
    if (p.n < 3)
        bad("n >= 3 required");
    if (!(p.K4 > 0.0) || !std::isfinite(p.K4))
        bad("K4 must be positive and finite");
    if (!std::isfinite(p.K3) || !std::isfinite(p.K3_tilde) || !std::isfinite(p.lambda3))
        bad("moments must be finite");
    if (!detail::le(1.0, p.K3))
        bad("K3 >= 1 violated");
    if (!detail::le(p.K3, std::pow(p.K4, 0.75)))
        bad("K3 <= K4^(3/4) violated");
    if (!detail::le(std::fabs(p.lambda3), p.K3))
        bad("|lambda3| <= K3 violated");
    if (opt.strict_skewness && !detail::le(std::fabs(p.lambda3), default_skewness_ratio * p.K3))
        bad("|lambda3| <= 0.621 K3 violated");
    if (!detail::le(p.K3, p.K3_tilde))
        bad("K3 <= K3_tilde violated");
    const double upper = p.iid() ? p.K3 + 1.0 : 2.0 * p.K3;
    if (!detail::le(p.K3_tilde, upper))
        bad(p.iid() ? "K3_tilde <= K3 + 1 violated" : "K3_tilde <= 2 K3 violated");
    if (p.no_skew && p.lambda3 != 0.0)
        bad("no_skew requires lambda3 = 0");
}

// Fill missing moments with their worst-case values given K4, then validate.
inline MomentProfile make_profile(std::int64_t n, double K4, std::optional<double> K3 = std::nullopt,
                                  std::optional<double> K3_tilde = std::nullopt,
                                  std::optional<double> lambda3 = std::nullopt, Setting setting = Setting::inid,
                                  bool no_skew = false, const ProfileOptions& opt = {})
{
    if (n < 3)
        throw InvalidProfile("n >= 3 required");
    if (!(K4 > 0.0))
        throw InvalidProfile("K4 must be positive");
    MomentProfile p;
    p.n = n;
    p.K4 = K4;
    p.setting = setting;
    p.no_skew = no_skew;
    p.K3 = K3 ? *K3 : std::pow(K4, 0.75);
    p.K3_tilde = K3_tilde ? *K3_tilde : (setting == Setting::iid ? p.K3 + 1.0 : 2.0 * p.K3);
    if (lambda3)
        p.lambda3 = *lambda3;
    else
        p.lambda3 = no_skew ? 0.0 : default_skewness_ratio * p.K3;
    validate(p, opt);
    return p;
}

inline MomentProfile with_n(MomentProfile p, std::int64_t n)
{
    p.n = n;
    return p;
}

enum class RegularityKind { moment_only, polynomial_tail, iid_char_sup };

struct RegularityAssumption {
    RegularityKind kind = RegularityKind::moment_only;
    double C0 = 0.0;
    double p = 0.0;
    double kappa = 0.0;

    static RegularityAssumption moment_only() { return {}; }
    static RegularityAssumption polynomial_tail(double C0, double p)
    {
        return {RegularityKind::polynomial_tail, C0, p, 0.0};
    }
    static RegularityAssumption iid_char_sup(double kappa) { return {RegularityKind::iid_char_sup, 0.0, 0.0, kappa}; }
};

inline void validate(const RegularityAssumption& r, const MomentProfile& prof)
{
    switch (r.kind) {
    case RegularityKind::moment_only:
        return;
    case RegularityKind::polynomial_tail:
        if (!(r.C0 > 0.0) || !(r.p > 0.0) || !std::isfinite(r.C0) || !std::isfinite(r.p))
            throw InvalidProfile("polynomial tail requires C0 > 0 and p > 0");
        return;
    case RegularityKind::iid_char_sup:
        if (!prof.iid())
            throw InvalidProfile("characteristic-function sup assumption requires the iid setting");
        if (!(r.kappa > 0.0 && r.kappa <= 1.0))
            throw InvalidProfile("kappa must lie in (0, 1]");
        return;
    }
}

struct DerivedQuantities {
    double a_n = 0.0;
    double b_n = 0.0;
    double c_n = 0.0;
    double T_moment = 0.0;
    double T_regular = 0.0;
    double Delta = 0.0;
    double n = 0.0;
    double K4 = 0.0;

    double tau(double eps = 0.1) const { return std::sqrt(2.0 * eps) * std::pow(n / K4, 0.25); }
};

inline DerivedQuantities derived_quantities(const MomentProfile& p)
{
    DerivedQuantities d;
    const double n = static_cast<double>(p.n);
    const double k = p.K3_tilde;
    const double k4 = k * k * k * k;
    d.n = n;
    d.K4 = p.K4;
    d.a_n = std::min(2.0 * t1_star_value() * pi * std::sqrt(n) / k, 16.0 * pi * pi * pi * n * n / k4);
    d.b_n = 16.0 * pi * pi * pi * pi * n * n / k4;
    d.c_n = d.b_n / d.a_n;
    d.T_moment = 2.0 * pi * std::sqrt(n) / k;
    d.T_regular = d.b_n;
    d.Delta = 0.5 * (1.0 - 4.0 * chi1_value() - std::sqrt(p.K4 / n));
    return d;
}

} // namespace edgeworth
