#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "bounds.hpp"

namespace edgeworth {

struct EdgeworthValue {
    double value = 0.0;
    bool in_unit_interval = true;
};

// G_n(x) = Phi(x) + lambda3 (1 - x^2) phi(x) / (6 sqrt n), returned unclipped.
inline EdgeworthValue edgeworth_cdf(double x, const MomentProfile& p)
{
    const double v = std_normal_cdf(x) + p.lambda3 * (1.0 - x * x) * std_normal_pdf(x) / (6.0 * p.sqrt_n());
    return {v, v >= 0.0 && v <= 1.0};
}

enum class BoundKind { shevtsova, edgeworth, berry_esseen };

inline const char* to_string(BoundKind k)
{
    switch (k) {
    case BoundKind::shevtsova: return "shevtsova";
    case BoundKind::edgeworth: return "ee";
    case BoundKind::berry_esseen: return "be";
    }
    return "";
}

// A bound as a function of n: the profile fields other than n are kept fixed.
struct BoundSpec {
    BoundKind kind = BoundKind::berry_esseen;
    RegularityAssumption regularity{};
    BoundOptions options{};
    MomentProfile profile{};

    BoundResult evaluate(std::int64_t n) const { return evaluate(with_n(profile, n)); }

    BoundResult evaluate(const MomentProfile& p) const
    {
        switch (kind) {
        case BoundKind::shevtsova: return bound_BE_shevtsova(p);
        case BoundKind::edgeworth: return bound_EE1(p, regularity, options);
        case BoundKind::berry_esseen: return bound_BE(p, regularity, options);
        }
        return {};
    }

    // The Edgeworth distance bound used by the p-value bracket and the classifier.
    double delta(const MomentProfile& p) const
    {
        if (kind == BoundKind::shevtsova)
            throw DomainError("an Edgeworth bound is required; the Shevtsova baseline bounds the Gaussian distance only");
        return bound_EE1(p, regularity, options).total;
    }
};

inline constexpr std::int64_t n_max_cap = 100000000;
inline constexpr int n_max_window = 64;

// Largest n >= 3 with bound(n) >= alpha, or nullopt if bound(n) < alpha for every n >= 3.
inline std::optional<std::int64_t> n_max(double alpha, const BoundSpec& spec)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha must lie in (0, 1)");
    auto above = [&](std::int64_t n) { return spec.evaluate(n).total >= alpha; };
    auto window_below = [&](std::int64_t n0) {
        for (int j = 0; j < n_max_window; ++j)
            if (above(n0 + j))
                return false;
        return true;
    };
    std::int64_t hi = 3;
    while (!window_below(hi)) {
        if (hi > n_max_cap)
            throw NotFound("bound stays above alpha up to n = 1e8");
        hi *= 2;
    }
    for (std::int64_t n = hi - 1; n >= 3; --n)
        if (above(n))
            return n;
    return std::nullopt;
}

struct PValueBracket {
    double naive = 0.0;  // 1 - Phi(s)
    double center = 0.0; // Edgeworth-corrected p-value
    double delta = 0.0;
    double raw_lower = 0.0;
    double raw_upper = 0.0;
    double lower = 0.0; // clipped to [0, 1]
    double upper = 0.0;
    double width = 0.0; // upper - lower after clipping; 2 delta when not clipped
    bool clipped = false;
};

inline PValueBracket pvalue_bracket_delta(double s, const MomentProfile& p, double delta)
{
    PValueBracket b;
    b.naive = 1.0 - std_normal_cdf(s);
    b.center = b.naive - p.lambda3 * (1.0 - s * s) * std_normal_pdf(s) / (6.0 * p.sqrt_n());
    b.delta = delta;
    b.raw_lower = b.center - delta;
    b.raw_upper = b.center + delta;
    b.lower = std::clamp(b.raw_lower, 0.0, 1.0);
    b.upper = std::clamp(b.raw_upper, 0.0, 1.0);
    b.clipped = b.lower != b.raw_lower || b.upper != b.raw_upper;
    b.width = b.upper - b.lower;
    return b;
}

inline PValueBracket pvalue_bracket(double s, const MomentProfile& p, const BoundSpec& spec)
{
    return pvalue_bracket_delta(s, p, spec.delta(p));
}

enum class Verdict { conservative, liberal, indeterminate };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::conservative: return "conservative";
    case Verdict::liberal: return "liberal";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "";
}

struct DistortionVerdict {
    Verdict verdict = Verdict::indeterminate;
    double threshold = 0.0; // 6 sqrt(n) delta / (|x^2 - 1| phi(x))
    double x = 0.0;
    double delta = 0.0;
};

// Sign of P(S_n <= x) - Phi(x) certified by the Edgeworth bound. For a one-sided test
// rejecting above x = q_{1-alpha}, a certified deficit means the test is liberal.
inline DistortionVerdict classify_at(double x, const MomentProfile& p, double delta)
{
    const double g = x * x - 1.0;
    if (std::fabs(g) < 1e-15)
        throw DomainError("classification undefined at x = +-1");
    DistortionVerdict v;
    v.x = x;
    v.delta = delta;
    v.threshold = 6.0 * p.sqrt_n() * delta / (std::fabs(g) * std_normal_pdf(x));
    const double l = p.lambda3;
    if (g > 0.0) {
        if (l > v.threshold)
            v.verdict = Verdict::liberal;
        else if (l < -v.threshold)
            v.verdict = Verdict::conservative;
    } else {
        if (l < -v.threshold)
            v.verdict = Verdict::liberal;
        else if (l > v.threshold)
            v.verdict = Verdict::conservative;
    }
    return v;
}

inline DistortionVerdict classify_distortion(double alpha, const MomentProfile& p, const BoundSpec& spec)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha must lie in (0, 1)");
    return classify_at(std_normal_quantile(1.0 - alpha), p, spec.delta(p));
}

} // namespace edgeworth
