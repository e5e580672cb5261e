#include <catch_amalgamated.hpp>

#include "edgeworth/oracle.hpp"
#include "support.hpp"

using namespace edgeworth;
using Catch::Approx;

namespace {
MomentProfile defaults(std::int64_t n, Setting s, bool no_skew = false, double K4 = 9.0)
{
    return make_profile(n, K4, std::nullopt, std::nullopt, std::nullopt, s, no_skew);
}

BoundSpec spec_of(BoundKind k, const MomentProfile& p, RegularityAssumption reg = {})
{
    BoundSpec s;
    s.kind = k;
    s.profile = p;
    s.regularity = reg;
    return s;
}
} // namespace

TEST_CASE("edgeworth_cdf")
{
    const auto flat = make_profile(100, 3.0, std::nullopt, std::nullopt, 0.0, Setting::iid, true);
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5})
        CHECK(edgeworth_cdf(x, flat).value == std_normal_cdf(x));
    const auto sk = make_profile(100, 9.0, 5.0, 6.0, 3.0, Setting::iid);
    CHECK(edgeworth_cdf(1.0, sk).value == std_normal_cdf(1.0));
    CHECK(edgeworth_cdf(-1.0, sk).value == std_normal_cdf(-1.0));
    CHECK(edgeworth_cdf(0.0, sk).value == Approx(0.5 + 3.0 * 0.3989422804014327 / 60.0).epsilon(1e-15));

    // slightly negative near the left tail for a strongly skewed small sample
    const auto ext = make_profile(3, 9.0, 5.0, 6.0, 5.0, Setting::iid);
    const auto v = edgeworth_cdf(-2.5, ext);
    CHECK(v.value < 0.0);
    CHECK_FALSE(v.in_unit_interval);
}

TEST_CASE("n_max reproduces the published table entries")
{
    const auto iid = defaults(3, Setting::iid);
    CHECK(n_max(0.05, spec_of(BoundKind::shevtsova, iid)) == 2375);
    CHECK(n_max(0.10, spec_of(BoundKind::berry_esseen, iid)) == 2339);
    CHECK(n_max(0.01, spec_of(BoundKind::berry_esseen, defaults(3, Setting::iid, true),
                              RegularityAssumption::iid_char_sup(0.99)))
          == 1062);
    CHECK_THROWS_AS(n_max(0.0, spec_of(BoundKind::shevtsova, iid)), DomainError);
    CHECK_THROWS_AS(n_max(1.0, spec_of(BoundKind::shevtsova, iid)), DomainError);
}

TEST_CASE("n_max definition")
{
    const auto spec = spec_of(BoundKind::berry_esseen, defaults(3, Setting::inid, true, 4.0));
    for (double a : {0.3, 0.08, 0.02}) {
        const auto m = n_max(a, spec);
        REQUIRE(m);
        CHECK(spec.evaluate(*m).total >= a);
        for (std::int64_t k = 1; k <= 200; ++k)
            CHECK(spec.evaluate(*m + k).total < a);
    }
    // loose level: nothing to find, or a small n
    const auto loose = n_max(0.999, spec_of(BoundKind::shevtsova, defaults(3, Setting::iid)));
    CHECK((!loose || *loose >= 3));
    CHECK_FALSE(n_max(0.9, spec_of(BoundKind::shevtsova, make_profile(3, 1.0, 1.0, 2.0, 0.0, Setting::iid))));
}

TEST_CASE("n_max reports a bound that never drops")
{
    auto s = spec_of(BoundKind::berry_esseen, defaults(3, Setting::iid));
    CHECK_THROWS_AS(n_max(1e-6, s), NotFound);
}

TEST_CASE("p-value bracket")
{
    const auto flat = make_profile(1000, 3.0, std::nullopt, std::nullopt, 0.0, Setting::iid, true);
    const auto b = pvalue_bracket_delta(1.3, flat, 0.01);
    CHECK(b.center == b.naive);
    CHECK(b.width == Approx(0.02).epsilon(1e-12));
    CHECK_FALSE(b.clipped);

    const auto sk = defaults(10000, Setting::iid);
    const auto c = pvalue_bracket_delta(1.0, sk, 0.01);
    CHECK(c.center == c.naive);

    BoundSpec spec = spec_of(BoundKind::edgeworth, sk);
    const auto d = pvalue_bracket(1.6449, sk, spec);
    CHECK(d.delta == bound_EE1(sk).total);
    CHECK(d.naive == Approx(0.05).margin(1e-5));
    CHECK(d.center
          == Approx(d.naive - sk.lambda3 * (1.0 - 1.6449 * 1.6449) * std_normal_pdf(1.6449) / 600.0).epsilon(1e-14));
    CHECK(d.lower <= d.center);
    CHECK(d.center <= d.upper);
    CHECK(std::fabs(d.width - (d.upper - d.lower)) < 1e-14);
    CHECK(d.raw_lower == Approx(d.center - d.delta).epsilon(1e-15));

    // clipping keeps probabilities and exposes the raw values
    const auto e = pvalue_bracket_delta(4.0, sk, 0.2);
    CHECK(e.clipped);
    CHECK(e.lower == 0.0);
    CHECK(e.raw_lower < 0.0);
    CHECK(e.width == Approx(e.upper - e.lower));

    // the Shevtsova bound does not control the Edgeworth distance
    CHECK_THROWS_AS(pvalue_bracket(1.0, sk, spec_of(BoundKind::shevtsova, sk)), DomainError);
}

TEST_CASE("p-value bracket contains the exact p-value")
{
    const auto d = DiscreteDistribution::bernoulli(0.1);
    const int n = 30;
    const auto F = exact_sn_cdf(d, n);
    const auto prof = profile_from(exact_moments(d), n);
    const double delta = bound_EE1(prof).total;
    int violations = 0;
    for (int i = 0; i < 50; ++i) {
        const double s = -3.0 + 6.0 * i / 49.0;
        const auto b = pvalue_bracket_delta(s, prof, delta);
        const double right = 1.0 - F(s); // P(S_n > s)
        const auto it = std::lower_bound(F.xs.begin(), F.xs.end(), s);
        const double left = 1.0 - F.left_limit(static_cast<std::size_t>(it - F.xs.begin())); // P(S_n >= s)
        if (right < b.lower || right > b.upper || left < b.lower || left > b.upper)
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("distortion classification")
{
    const auto flat = make_profile(1000000, 9.0, std::nullopt, std::nullopt, 0.0, Setting::iid, true);
    const auto kap = RegularityAssumption::iid_char_sup(0.99);
    for (double a : {0.01, 0.05, 0.1})
        CHECK(classify_distortion(a, flat, spec_of(BoundKind::edgeworth, flat, kap)).verdict == Verdict::indeterminate);

    const auto big = make_profile(1000000, 9.0, std::nullopt, std::nullopt, 0.5, Setting::iid);
    const auto v = classify_distortion(0.05, big, spec_of(BoundKind::edgeworth, big, kap));
    const double x = std_normal_quantile(0.95), delta = bound_EE1(big, kap).total;
    CHECK(v.threshold == Approx(6.0 * 1000.0 * delta / ((x * x - 1.0) * std_normal_pdf(x))).epsilon(1e-14));
    CHECK(v.verdict == Verdict::liberal);

    // a liberal verdict certifies P(S_n <= x) < Phi(x): G_n(x) + delta < Phi(x)
    CHECK(edgeworth_cdf(x, big).value + delta < std_normal_cdf(x));

    const auto neg = make_profile(1000000, 9.0, std::nullopt, std::nullopt, -0.5, Setting::iid);
    CHECK(classify_distortion(0.05, neg, spec_of(BoundKind::edgeworth, neg, kap)).verdict == Verdict::conservative);

    // |x| < 1 reverses the roles
    CHECK(classify_at(0.5, big, delta).verdict == Verdict::conservative);
    CHECK(classify_at(0.5, neg, delta).verdict == Verdict::liberal);
    CHECK_THROWS_AS(classify_at(1.0, big, delta), DomainError);
    CHECK_THROWS_AS(classify_at(-1.0, big, delta), DomainError);
    CHECK_THROWS_AS(classify_distortion(1.5, big, spec_of(BoundKind::edgeworth, big, kap)), DomainError);
}

TEST_CASE("verdict thresholds shrink with n under the regularity bound")
{
    const auto kap = RegularityAssumption::iid_char_sup(0.99);
    double prev = 1e300;
    bool fired = false;
    for (double e = 3.0; e <= 8.0; e += 0.5) {
        const auto n = static_cast<std::int64_t>(std::pow(10.0, e));
        const auto p = make_profile(n, 9.0, std::nullopt, std::nullopt, 0.2, Setting::iid);
        const auto v = classify_distortion(0.05, p, spec_of(BoundKind::edgeworth, p, kap));
        CHECK(v.threshold < prev);
        prev = v.threshold;
        if (v.verdict == Verdict::liberal)
            fired = true;
        if (fired)
            CHECK(v.verdict == Verdict::liberal);
    }
    CHECK(fired);
    CHECK(prev < 0.2);
}
