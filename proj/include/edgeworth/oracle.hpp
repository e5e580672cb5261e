#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "inference.hpp"
#include "philox.hpp"
#include "quadrature.hpp"

namespace edgeworth {

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

// Finite-support law, centered and scaled to unit variance on construction.
class DiscreteDistribution {
public:
    DiscreteDistribution() = default;

    explicit DiscreteDistribution(std::vector<Atom> raw, std::string name = "custom") : name_(std::move(name))
    {
        if (raw.empty())
            throw DomainError("distribution needs at least one atom");
        double total = 0.0;
        for (const auto& a : raw) {
            if (!(a.prob > 0.0) || !std::isfinite(a.value))
                throw DomainError("atoms need positive probability and finite value");
            total += a.prob;
        }
        if (std::fabs(total - 1.0) > 1e-9)
            throw DomainError("probabilities must sum to 1");
        double mean = 0.0;
        for (auto& a : raw) {
            a.prob /= total;
            mean += a.prob * a.value;
        }
        double var = 0.0;
        for (const auto& a : raw)
            var += a.prob * (a.value - mean) * (a.value - mean);
        if (!(var > 0.0))
            throw DomainError("degenerate distribution");
        const double sd = std::sqrt(var);
        for (auto& a : raw)
            a.value = (a.value - mean) / sd;
        std::sort(raw.begin(), raw.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
        atoms_ = std::move(raw);
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::string& name() const { return name_; }

    static DiscreteDistribution rademacher() { return DiscreteDistribution({{-1.0, 0.5}, {1.0, 0.5}}, "rademacher"); }

    static DiscreteDistribution bernoulli(double p)
    {
        if (!(p > 0.0 && p < 1.0))
            throw DomainError("bernoulli: p must lie in (0, 1)");
        return DiscreteDistribution({{0.0, 1.0 - p}, {1.0, p}}, "bernoulli(" + std::to_string(p) + ")");
    }

private:
    std::vector<Atom> atoms_;
    std::string name_;
};

struct ExactMoments {
    double K3 = 0.0;
    double K4 = 0.0;
    double lambda3 = 0.0;
    double abs_mean = 0.0;
    double K3_tilde = 0.0;
};

inline ExactMoments exact_moments(const DiscreteDistribution& d)
{
    ExactMoments m;
    for (const auto& a : d.atoms()) {
        const double v = a.value, av = std::fabs(v);
        m.abs_mean += a.prob * av;
        m.K3 += a.prob * av * av * av;
        m.K4 += a.prob * v * v * v * v;
        m.lambda3 += a.prob * v * v * v;
    }
    m.K3_tilde = m.K3 + m.abs_mean;
    return m;
}

// i.i.d. profile with the exact moments; tiny skewness is treated as symmetric.
inline MomentProfile profile_from(const ExactMoments& m, std::int64_t n)
{
    const bool sym = std::fabs(m.lambda3) < 1e-14;
    return make_profile(n, m.K4, m.K3, m.K3_tilde, sym ? 0.0 : m.lambda3, Setting::iid, sym);
}

// Right-continuous step CDF: F(x) = cum[i] for xs[i] <= x < xs[i+1].
struct StepCdf {
    std::vector<double> xs;
    std::vector<double> cum;

    double operator()(double x) const
    {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin())
            return 0.0;
        return cum[static_cast<std::size_t>(it - xs.begin()) - 1];
    }
    double left_limit(std::size_t i) const { return i == 0 ? 0.0 : cum[i - 1]; }
};

inline constexpr double oracle_state_limit = 1e7;

// Exact law of S_n = sum X_i / sqrt(n) by iterated convolution with merged atoms.
inline StepCdf exact_sn_cdf(const DiscreteDistribution& d, int n)
{
    if (n < 1)
        throw DomainError("exact_sn_cdf: n >= 1 required");
    const auto& base = d.atoms();
    const double s = static_cast<double>(base.size());
    std::vector<Atom> cur{{0.0, 1.0}}, next;
    for (int k = 0; k < n; ++k) {
        if (s * n * static_cast<double>(cur.size()) > oracle_state_limit)
            throw OracleInfeasible("state explosion: support * n * states exceeds 1e7");
        next.clear();
        next.reserve(cur.size() * base.size());
        for (const auto& a : cur)
            for (const auto& b : base)
                next.push_back({a.value + b.value, a.prob * b.prob});
        std::sort(next.begin(), next.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
        cur.clear();
        for (const auto& a : next) {
            if (!cur.empty() && std::fabs(a.value - cur.back().value) <= 1e-12 * std::max(1.0, std::fabs(a.value)))
                cur.back().prob += a.prob;
            else
                cur.push_back(a);
        }
    }
    StepCdf F;
    F.xs.reserve(cur.size());
    F.cum.reserve(cur.size());
    const double sn = std::sqrt(static_cast<double>(n));
    double c = 0.0;
    for (const auto& a : cur) {
        c += a.prob;
        F.xs.push_back(a.value / sn);
        F.cum.push_back(c);
    }
    return F;
}

enum class Target { EE, BE };

// Continuous comparator Phi(x) (BE) or the one-term Edgeworth expansion (EE).
struct Comparator {
    double lambda3 = 0.0;
    double n = 1.0;
    Target target = Target::BE;

    double operator()(double x) const
    {
        const double g = std_normal_cdf(x);
        if (target == Target::BE)
            return g;
        return g + lambda3 * (1.0 - x * x) * std_normal_pdf(x) / (6.0 * std::sqrt(n));
    }

    // Roots of x^3 - 3x + 6 sqrt(n) / lambda3, where the derivative vanishes.
    std::vector<double> stationary_points() const
    {
        if (target == Target::BE || lambda3 == 0.0)
            return {};
        const double c = 6.0 * std::sqrt(n) / lambda3;
        std::vector<double> r;
        if (c * c < 4.0) {
            const double phi = std::acos(-c / 2.0) / 3.0;
            for (int k = 0; k < 3; ++k)
                r.push_back(2.0 * std::cos(phi - 2.0 * pi * k / 3.0));
        } else {
            const double w = std::sqrt(c * c / 4.0 - 1.0);
            r.push_back(std::cbrt(-c / 2.0 + w) + std::cbrt(-c / 2.0 - w));
        }
        return r;
    }
};

struct SupDistanceEstimate {
    double point = 0.0;
    double std_error = 0.0; // DKW 95% half-width for Monte Carlo, 0 for exact
    std::int64_t reps = 0;
    std::string grid_spec;
};

// sup_x |F(x) - G(x)| for a step CDF F and continuous G, checking both one-sided limits at
// every jump and G's stationary points between jumps.
inline double sup_step_distance(const StepCdf& F, const Comparator& G)
{
    double best = 0.0;
    for (std::size_t i = 0; i < F.xs.size(); ++i) {
        const double g = G(F.xs[i]);
        best = std::max({best, std::fabs(F.left_limit(i) - g), std::fabs(F.cum[i] - g)});
    }
    for (double z : G.stationary_points())
        best = std::max(best, std::fabs(F(z) - G(z)));
    return best;
}

inline SupDistanceEstimate sup_distance_exact(const DiscreteDistribution& d, int n, Target target)
{
    const auto F = exact_sn_cdf(d, n);
    const auto m = exact_moments(d);
    const Comparator G{m.lambda3, static_cast<double>(n), target};
    return {sup_step_distance(F, G), 0.0, 0, "exact: " + std::to_string(F.xs.size()) + " atoms"};
}

// ---------------------------------------------------------------------------
// Monte Carlo

enum class Law { gaussian, laplace, uniform, gumbel, exponential };

inline const char* to_string(Law l)
{
    switch (l) {
    case Law::gaussian: return "gaussian";
    case Law::laplace: return "laplace";
    case Law::uniform: return "uniform";
    case Law::gumbel: return "gumbel";
    case Law::exponential: return "exponential";
    }
    return "";
}

inline Law parse_law(const std::string& s)
{
    for (Law l : {Law::gaussian, Law::laplace, Law::uniform, Law::gumbel, Law::exponential})
        if (s == to_string(l))
            return l;
    throw DomainError("unknown sampler \"" + s + "\"");
}

namespace detail {
inline constexpr double euler_gamma = 0.57721566490153286061;
inline const double gumbel_scale = pi / std::sqrt(6.0);

inline double gumbel_pdf(double y)
{
    // standardized Gumbel: G = gamma + s Y, density of G is exp(-(g + e^{-g}))
    const double g = euler_gamma + gumbel_scale * y;
    return gumbel_scale * std::exp(-(g + std::exp(-g)));
}
} // namespace detail

// Exact standardized moments of the continuous laws.
inline ExactMoments law_moments(Law law)
{
    ExactMoments m;
    switch (law) {
    case Law::gaussian:
        m.abs_mean = std::sqrt(2.0 / pi);
        m.K3 = 2.0 * std::sqrt(2.0 / pi);
        m.K4 = 3.0;
        break;
    case Law::laplace:
        m.abs_mean = 1.0 / std::sqrt(2.0);
        m.K3 = 6.0 / std::pow(2.0, 1.5);
        m.K4 = 6.0;
        break;
    case Law::uniform:
        m.abs_mean = std::sqrt(3.0) / 2.0;
        m.K3 = std::pow(3.0, 1.5) / 4.0;
        m.K4 = 1.8;
        break;
    case Law::exponential:
        m.abs_mean = 2.0 / std::exp(1.0);
        m.K3 = 12.0 / std::exp(1.0) - 2.0;
        m.K4 = 9.0;
        m.lambda3 = 2.0;
        break;
    case Law::gumbel: {
        auto mom = [](int k, bool absolute) {
            auto f = [k, absolute](double y) {
                const double v = std::pow(absolute ? std::fabs(y) : y, k);
                return v * detail::gumbel_pdf(y);
            };
            const double lo = -detail::euler_gamma / detail::gumbel_scale;
            return integrate(f, -std::numeric_limits<double>::infinity(), lo)
                   + integrate(f, lo, 0.0) + integrate(f, 0.0, std::numeric_limits<double>::infinity());
        };
        m.abs_mean = mom(1, true);
        m.K3 = mom(3, true);
        m.K4 = mom(4, false);
        m.lambda3 = mom(3, false);
        break;
    }
    }
    m.K3_tilde = m.K3 + m.abs_mean;
    return m;
}

// sup_{|t| >= s} |characteristic function| of the standardized law.
inline double law_kappa(Law law, double s)
{
    s = std::fabs(s);
    switch (law) {
    case Law::gaussian: return std::exp(-0.5 * s * s);
    case Law::laplace: return 1.0 / (1.0 + 0.5 * s * s);
    case Law::exponential: return 1.0 / std::sqrt(1.0 + s * s);
    case Law::gumbel: {
        const double y = pi * s / detail::gumbel_scale;
        return y == 0.0 ? 1.0 : std::sqrt(y / std::sinh(y));
    }
    case Law::uniform: {
        // |sin u / u| with u = sqrt(3) t; beyond u0 the sup is at u0 or at the next local max
        const double u0 = std::sqrt(3.0) * s;
        if (u0 == 0.0)
            return 1.0;
        double best = std::fabs(std::sin(u0) / u0);
        // local maxima of |sin u / u| solve tan u = u in (k pi, k pi + pi/2), decreasing in k
        for (double k = std::max(1.0, std::floor(u0 / pi));; k += 1.0) {
            double u = (k + 0.5) * pi - 1.0 / ((k + 0.5) * pi);
            for (int i = 0; i < 50; ++i)
                u -= (std::tan(u) - u) / (std::tan(u) * std::tan(u));
            if (u >= u0)
                return std::max(best, std::fabs(std::sin(u) / u));
        }
    }
    }
    return 1.0;
}

namespace detail {
class LawSampler {
public:
    explicit LawSampler(Law law) : law_(law) {}

    double draw(PhiloxStream& rng)
    {
        switch (law_) {
        case Law::gaussian: {
            if (have_spare_) {
                have_spare_ = false;
                return spare_;
            }
            const double r = std::sqrt(-2.0 * std::log(rng.uniform()));
            const double th = 2.0 * pi * rng.uniform();
            spare_ = r * std::sin(th);
            have_spare_ = true;
            return r * std::cos(th);
        }
        case Law::laplace: {
            const double u = rng.uniform() - 0.5;
            const double b = 1.0 / std::sqrt(2.0);
            return u < 0 ? b * std::log(1.0 + 2.0 * u) : -b * std::log(1.0 - 2.0 * u);
        }
        case Law::uniform: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
        case Law::exponential: return -std::log(rng.uniform()) - 1.0;
        case Law::gumbel: return (-std::log(-std::log(rng.uniform())) - euler_gamma) / gumbel_scale;
        }
        return 0.0;
    }

    void reset() { have_spare_ = false; }

private:
    Law law_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline double dkw_half_width(std::int64_t reps) { return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(reps))); }

inline int default_workers()
{
    if (const char* e = std::getenv("EDGEWORTH_WORKERS")) {
        const int w = std::atoi(e);
        if (w > 0)
            return w;
    }
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

// Draw reps values of S_n; rep r always uses substream r, so results do not depend on workers.
template <class Draw>
std::vector<double> simulate_sums(Draw make_draw, int n, std::int64_t reps, std::uint64_t seed, int workers)
{
    std::vector<double> out(static_cast<std::size_t>(reps));
    const double sn = std::sqrt(static_cast<double>(n));
    auto run = [&](std::int64_t lo, std::int64_t hi) {
        auto draw = make_draw();
        for (std::int64_t r = lo; r < hi; ++r) {
            PhiloxStream rng(seed, static_cast<std::uint64_t>(r));
            draw.reset();
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += draw.draw(rng);
            out[static_cast<std::size_t>(r)] = s / sn;
        }
    };
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::int64_t>(reps, 256))));
    if (workers == 1) {
        run(0, reps);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run, reps * w / workers, reps * (w + 1) / workers);
        for (auto& t : pool)
            t.join();
    }
    return out;
}

inline StepCdf empirical_cdf(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    StepCdf F;
    const double N = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!F.xs.empty() && v[i] == F.xs.back())
            F.cum.back() = (i + 1) / N;
        else {
            F.xs.push_back(v[i]);
            F.cum.push_back((i + 1) / N);
        }
    }
    return F;
}

class DiscreteSampler {
public:
    explicit DiscreteSampler(const DiscreteDistribution& d)
    {
        double c = 0.0;
        for (const auto& a : d.atoms()) {
            c += a.prob;
            values_.push_back(a.value);
            cum_.push_back(c);
        }
        cum_.back() = 1.0;
    }
    double draw(PhiloxStream& rng)
    {
        const double u = rng.uniform();
        const auto i = static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        return values_[std::min(i, values_.size() - 1)];
    }
    void reset() {}

private:
    std::vector<double> values_, cum_;
};
} // namespace detail

inline SupDistanceEstimate sup_distance_mc(Law law, int n, std::int64_t reps, std::uint64_t seed,
                                           Target target = Target::EE, int workers = 0)
{
    if (reps < 10000)
        throw DomainError("sup_distance_mc: reps >= 1e4 required");
    if (n < 1)
        throw DomainError("sup_distance_mc: n >= 1 required");
    if (workers <= 0)
        workers = detail::default_workers();
    const auto v = detail::simulate_sums([law] { return detail::LawSampler(law); }, n, reps, seed, workers);
    const Comparator G{law_moments(law).lambda3, static_cast<double>(n), target};
    return {sup_step_distance(detail::empirical_cdf(v), G), detail::dkw_half_width(reps), reps,
            std::string("monte carlo: ") + to_string(law) + ", seed " + std::to_string(seed)};
}

inline SupDistanceEstimate sup_distance_mc(const DiscreteDistribution& d, int n, std::int64_t reps,
                                           std::uint64_t seed, Target target = Target::EE, int workers = 0)
{
    if (reps < 10000)
        throw DomainError("sup_distance_mc: reps >= 1e4 required");
    if (workers <= 0)
        workers = detail::default_workers();
    const auto v = detail::simulate_sums([&d] { return detail::DiscreteSampler(d); }, n, reps, seed, workers);
    const Comparator G{exact_moments(d).lambda3, static_cast<double>(n), target};
    return {sup_step_distance(detail::empirical_cdf(v), G), detail::dkw_half_width(reps), reps,
            "monte carlo: " + d.name() + ", seed " + std::to_string(seed)};
}

} // namespace edgeworth
