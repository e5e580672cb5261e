#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgeworth/edgeworth.hpp"

namespace edgeworth::cli {

inline constexpr const char* tool_name = "edgeworth";
inline constexpr const char* tool_version = "0.1.0";

inline std::string timestamp()
{
    std::time_t t;
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json metadata(const std::vector<std::string>& args)
{
    return {{"tool", tool_name}, {"version", tool_version}, {"timestamp", timestamp()}, {"input", args}};
}

inline void emit_json(std::ostream& out, const json& payload, const std::vector<std::string>& args)
{
    json env = {{"format", "json"}, {"payload", payload}, {"metadata", metadata(args)}};
    out << env.dump(2) << '\n';
}

// CSV payload on stdout, envelope metadata on stderr.
inline void emit_csv(std::ostream& out, std::ostream& err, const std::string& csv, const std::vector<std::string>& args)
{
    out << csv;
    json env = {{"format", "csv"}, {"metadata", metadata(args)}};
    err << env.dump() << '\n';
}

inline std::string fmt6(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct ProfileFlags {
    std::int64_t n = 0;
    double K4 = 0.0, K3 = 0.0, K3_tilde = 0.0, lambda3 = 0.0;
    std::string setting;
    bool no_skew = false;
    std::string file;
    CLI::Option *o_n{}, *o_K4{}, *o_K3{}, *o_K3t{}, *o_l{};

    void add(CLI::App* app)
    {
        o_n = app->add_option("--n", n, "sample size");
        o_K4 = app->add_option("--K4", K4, "kurtosis bound K4");
        o_K3 = app->add_option("--K3", K3, "third absolute moment K3 (default K4^(3/4))");
        o_K3t = app->add_option("--K3tilde", K3_tilde, "K3 tilde (default K3 + 1 iid, 2 K3 inid)");
        o_l = app->add_option("--lambda3", lambda3, "skewness (default 0.621 K3, 0 with --no-skew)");
        app->add_option("--setting", setting, "inid or iid")->check(CLI::IsMember({"inid", "iid"}));
        app->add_flag("--no-skew", no_skew, "symmetric profile, lambda3 = 0");
        app->add_option("--profile", file, "JSON profile file; flags override its fields");
    }

    MomentProfile build(Setting fallback) const
    {
        json j = json::object();
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in)
                throw DomainError("cannot read profile file " + file);
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw InvalidProfile(std::string("profile file is not valid JSON: ") + e.what());
            }
        }
        if (o_n->count())
            j["n"] = n;
        if (o_K4->count())
            j["K4"] = K4;
        if (o_K3->count())
            j["K3"] = K3;
        if (o_K3t->count())
            j["K3_tilde"] = K3_tilde;
        if (o_l->count())
            j["lambda3"] = lambda3;
        if (!setting.empty())
            j["setting"] = setting;
        else if (!j.contains("setting"))
            j["setting"] = to_string(fallback);
        if (no_skew)
            j["no_skew"] = true;
        return profile_from_json(j);
    }
};

inline RegularityAssumption parse_regularity(const std::string& s)
{
    if (s.empty() || s == "none")
        return RegularityAssumption::moment_only();
    auto num = [&](const std::string& t) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != t.size() || t.empty())
            throw DomainError("bad number \"" + t + "\" in --regularity " + s);
        return v;
    };
    if (s.rfind("kappa:", 0) == 0)
        return RegularityAssumption::iid_char_sup(num(s.substr(6)));
    if (s.rfind("poly:", 0) == 0) {
        const auto rest = s.substr(5);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw DomainError("--regularity poly:C0,p expected, got " + s);
        return RegularityAssumption::polynomial_tail(num(rest.substr(0, comma)), num(rest.substr(comma + 1)));
    }
    throw DomainError("--regularity must be none, poly:C0,p or kappa:v, got " + s);
}

struct SpecFlags {
    std::string regularity = "none";
    double eps = 0.1;
    std::string target = "be";
    std::string baseline;
    std::string head = "exact";

    void add(CLI::App* app, bool with_target)
    {
        app->add_option("--regularity", regularity, "none | poly:C0,p | kappa:v");
        app->add_option("--eps", eps, "free parameter in (0, 1/3)");
        app->add_option("--head", head, "exact or printed second-order constants")
            ->check(CLI::IsMember({"exact", "printed"}));
        if (with_target) {
            app->add_option("--target", target, "ee (Edgeworth distance) or be (Gaussian distance)")
                ->check(CLI::IsMember({"ee", "be"}));
            app->add_option("--baseline", baseline, "shevtsova: report the existing bound")
                ->check(CLI::IsMember({"shevtsova"}));
        }
    }

    RegularityAssumption reg() const { return parse_regularity(regularity); }

    // The characteristic-function assumption is only defined for iid sums.
    Setting default_setting() const { return reg().kind == RegularityKind::iid_char_sup ? Setting::iid : Setting::inid; }

    BoundSpec spec(const MomentProfile& p) const
    {
        BoundSpec s;
        s.kind = target == "ee" ? BoundKind::edgeworth : BoundKind::berry_esseen;
        s.regularity = reg();
        s.options.eps = eps;
        s.options.head = head == "printed" ? HeadConstants::printed : HeadConstants::exact;
        s.profile = p;
        return s;
    }
};

inline json regularity_json(const RegularityAssumption& r)
{
    switch (r.kind) {
    case RegularityKind::moment_only: return {{"kind", "none"}};
    case RegularityKind::polynomial_tail: return {{"kind", "poly"}, {"C0", r.C0}, {"p", r.p}};
    case RegularityKind::iid_char_sup: return {{"kind", "kappa"}, {"kappa", r.kappa}};
    }
    return nullptr;
}

inline std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != tok.size())
            throw DomainError("bad number \"" + tok + "\" in list " + s);
        v.push_back(x);
    }
    if (v.empty())
        throw DomainError("empty list");
    return v;
}

struct TableRow {
    std::string label;
    BoundSpec spec;
};

// Rows of the n_max table: existing bound, moment-only bound and the iid
// characteristic-function bound, each with default moments for the given K4.
inline std::vector<TableRow> nmax_rows(double K4, double kappa)
{
    auto prof = [K4](bool no_skew) { return make_profile(3, K4, std::nullopt, std::nullopt, std::nullopt, Setting::iid, no_skew); };
    auto row = [&](const std::string& label, BoundKind kind, RegularityAssumption reg, bool no_skew) {
        BoundSpec s;
        s.kind = kind;
        s.regularity = reg;
        s.profile = prof(no_skew);
        return TableRow{label, s};
    };
    const auto none = RegularityAssumption::moment_only();
    const auto kap = RegularityAssumption::iid_char_sup(kappa);
    return {row("existing", BoundKind::shevtsova, none, false),
            row("moment_only", BoundKind::berry_esseen, none, false),
            row("moment_only_unskewed", BoundKind::berry_esseen, none, true),
            row("kappa", BoundKind::berry_esseen, kap, false),
            row("kappa_unskewed", BoundKind::berry_esseen, kap, true)};
}

inline std::string nmax_table_csv(const std::vector<double>& alphas, double K4, double kappa)
{
    std::string csv = "bound";
    for (double a : alphas)
        csv += ",alpha_" + fmt6(a);
    csv += '\n';
    for (const auto& r : nmax_rows(K4, kappa)) {
        csv += r.label;
        for (double a : alphas) {
            const auto m = n_max(a, r.spec);
            csv += ',' + (m ? std::to_string(*m) : std::string("none"));
        }
        csv += '\n';
    }
    return csv;
}

struct Curve {
    std::string label;
    BoundSpec spec;
};

inline std::vector<Curve> figure_curves(int figure, double K4 = 9.0, double kappa = 0.99, double C0 = 1.0, double pw = 2.0)
{
    auto curve = [K4](const std::string& label, BoundKind kind, RegularityAssumption reg, Setting s, bool no_skew) {
        BoundSpec b;
        b.kind = kind;
        b.regularity = reg;
        b.profile = make_profile(3, K4, std::nullopt, std::nullopt, std::nullopt, s, no_skew);
        return Curve{label, b};
    };
    const auto none = RegularityAssumption::moment_only();
    const auto BE = BoundKind::berry_esseen;
    std::vector<Curve> c{curve("shevtsova_inid", BoundKind::shevtsova, none, Setting::inid, false),
                         curve("shevtsova_iid", BoundKind::shevtsova, none, Setting::iid, false)};
    if (figure == 1) {
        c.push_back(curve("moment_only_inid", BE, none, Setting::inid, false));
        c.push_back(curve("moment_only_inid_unskewed", BE, none, Setting::inid, true));
        c.push_back(curve("moment_only_iid", BE, none, Setting::iid, false));
        c.push_back(curve("moment_only_iid_unskewed", BE, none, Setting::iid, true));
    } else if (figure == 2) {
        const auto poly = RegularityAssumption::polynomial_tail(C0, pw);
        const auto kap = RegularityAssumption::iid_char_sup(kappa);
        c.push_back(curve("poly_tail_inid", BE, poly, Setting::inid, false));
        c.push_back(curve("poly_tail_inid_unskewed", BE, poly, Setting::inid, true));
        c.push_back(curve("kappa_iid", BE, kap, Setting::iid, false));
        c.push_back(curve("kappa_iid_unskewed", BE, kap, Setting::iid, true));
    } else {
        throw DomainError("--figure must be 1 or 2");
    }
    return c;
}

// Log-spaced integer grid from n_min to n_max, duplicates removed.
inline std::vector<std::int64_t> log_grid(double n_min, double n_max, int points)
{
    if (!(n_min >= 3.0) || !(n_max >= n_min) || points < 2)
        throw DomainError("grid needs 3 <= n-min <= n-max and points >= 2");
    std::vector<std::int64_t> g;
    const double a = std::log(n_min), b = std::log(n_max);
    for (int i = 0; i < points; ++i) {
        const auto n = static_cast<std::int64_t>(std::llround(std::exp(a + (b - a) * i / (points - 1))));
        if (g.empty() || n != g.back())
            g.push_back(n);
    }
    return g;
}

inline std::string figure_csv(int figure, double n_min, double n_max, int points)
{
    const auto curves = figure_curves(figure);
    std::string csv = "n";
    for (const auto& c : curves)
        csv += ',' + c.label;
    csv += '\n';
    for (auto n : log_grid(n_min, n_max, points)) {
        csv += std::to_string(n);
        for (const auto& c : curves)
            csv += ',' + fmt6(c.spec.evaluate(n).total);
        csv += '\n';
    }
    return csv;
}

struct ValidationCase {
    std::string law;
    int n = 0;
    SupDistanceEstimate estimate;
    double bound = 0.0;         // moment-only Edgeworth bound, valid for every law
    double bound_kappa = NAN;   // iid characteristic-function bound, informational
    bool dominated = false;
};

inline json to_json(const ValidationCase& c)
{
    return {{"law", c.law},
            {"n", c.n},
            {"estimate", edgeworth::to_json(c.estimate)},
            {"bound", c.bound},
            {"bound_kappa", detail::number_or_null(c.bound_kappa)},
            {"dominated", c.dominated}};
}

inline std::vector<DiscreteDistribution> exact_suite_laws()
{
    return {DiscreteDistribution::rademacher(), DiscreteDistribution::bernoulli(0.1), DiscreteDistribution::bernoulli(0.3)};
}

inline std::vector<ValidationCase> run_exact_suite(int n_lo = 3, int n_hi = 40)
{
    std::vector<ValidationCase> out;
    for (const auto& d : exact_suite_laws()) {
        const auto m = exact_moments(d);
        for (int n = n_lo; n <= n_hi; ++n) {
            ValidationCase c;
            c.law = d.name();
            c.n = n;
            c.estimate = sup_distance_exact(d, n, Target::EE);
            c.bound = bound_EE1(profile_from(m, n)).total;
            c.dominated = c.estimate.point <= c.bound;
            out.push_back(c);
        }
    }
    return out;
}

inline std::vector<ValidationCase> run_mc_suite(std::uint64_t seed, std::int64_t reps, const std::vector<int>& ns = {50, 100, 1000},
                                                const std::vector<Law>& laws = {Law::gaussian, Law::laplace, Law::uniform})
{
    std::vector<ValidationCase> out;
    for (Law law : laws) {
        const auto m = law_moments(law);
        for (int n : ns) {
            ValidationCase c;
            c.law = to_string(law);
            c.n = n;
            c.estimate = sup_distance_mc(law, n, reps, seed, Target::EE);
            const auto p = profile_from(m, n);
            c.bound = bound_EE1(p).total;
            const double kappa = law_kappa(law, derived_quantities(p).a_n / p.sqrt_n());
            if (kappa < 1.0)
                c.bound_kappa = bound_EE1(p, RegularityAssumption::iid_char_sup(kappa)).total;
            c.dominated = c.estimate.point + c.estimate.std_error <= c.bound;
            out.push_back(c);
        }
    }
    return out;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    CLI::App app{"Explicit Edgeworth and Berry-Esseen bounds"};
    app.require_subcommand(1);

    ProfileFlags bp;
    SpecFlags bs;
    auto* bound = app.add_subcommand("bound", "evaluate a bound with its breakdown");
    bp.add(bound);
    bs.add(bound, true);

    std::string alphas = "0.1,0.05,0.01";
    double tK4 = 9.0, tkappa = 0.99;
    auto* table = app.add_subcommand("nmax-table", "largest uninformative sample size per bound and level");
    table->add_option("--alphas", alphas, "comma-separated levels");
    table->add_option("--K4", tK4, "kurtosis bound");
    table->add_option("--kappa", tkappa, "characteristic-function sup bound");

    int figure = 1, points = 61;
    double n_min = 10, n_max_grid = 1e7;
    auto* fig = app.add_subcommand("figure-data", "bound curves on a log-spaced n grid");
    fig->add_option("--figure", figure, "1 (moment conditions) or 2 (regularity assumptions)")->required();
    fig->add_option("--n-min", n_min, "smallest n");
    fig->add_option("--n-max", n_max_grid, "largest n");
    fig->add_option("--points", points, "grid points");

    ProfileFlags pp;
    SpecFlags ps;
    double s_n = 0.0;
    auto* pval = app.add_subcommand("pvalue", "bracket for the one-sided p-value of a standardized statistic");
    pval->add_option("--s", s_n, "observed standardized statistic")->required();
    pp.add(pval);
    ps.add(pval, false);

    ProfileFlags cp;
    SpecFlags cs;
    double alpha = 0.0, x = 0.0;
    auto* cls = app.add_subcommand("classify", "certified direction of the size distortion");
    auto* o_alpha = cls->add_option("--alpha", alpha, "test level; classifies at x = q(1 - alpha)");
    auto* o_x = cls->add_option("--x", x, "classify at an explicit point");
    o_alpha->excludes(o_x);
    cp.add(cls);
    cs.add(cls, false);

    auto* cons = app.add_subcommand("constants", "re-derive the numerical constants");

    std::string suite = "all";
    std::uint64_t seed = 42;
    std::int64_t reps = 1000000;
    auto* val = app.add_subcommand("validate", "check bounds against exact and simulated distances");
    val->add_option("--suite", suite, "exact, mc or all")->check(CLI::IsMember({"exact", "mc", "all"}));
    val->add_option("--seed", seed, "Monte Carlo seed");
    val->add_option("--reps", reps, "Monte Carlo repetitions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int rc = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return rc == 0 ? 0 : static_cast<int>(ExitCode::validation);
    }

    try {
        if (*bound) {
            const auto p = bp.build(bs.default_setting());
            const auto spec = bs.spec(p);
            json payload = {{"profile", to_json(p)},
                            {"target", bs.target},
                            {"regularity", regularity_json(spec.regularity)},
                            {"eps", bs.eps}};
            if (bs.baseline == "shevtsova") {
                payload["bound"] = "shevtsova";
                payload["result"] = to_json(bound_BE_shevtsova(p));
                payload["comparison"] = to_json(spec.evaluate(p));
            } else {
                payload["bound"] = to_string(spec.kind);
                payload["result"] = to_json(spec.evaluate(p));
            }
            emit_json(out, payload, args);
        } else if (*table) {
            emit_csv(out, err, nmax_table_csv(parse_list(alphas), tK4, tkappa), args);
        } else if (*fig) {
            emit_csv(out, err, figure_csv(figure, n_min, n_max_grid, points), args);
        } else if (*pval) {
            const auto p = pp.build(ps.default_setting());
            const auto spec = ps.spec(p);
            const auto e = edgeworth_cdf(s_n, p);
            emit_json(out,
                      {{"profile", to_json(p)},
                       {"regularity", regularity_json(spec.regularity)},
                       {"s", s_n},
                       {"edgeworth_cdf", e.value},
                       {"bracket", to_json(pvalue_bracket(s_n, p, spec))}},
                      args);
        } else if (*cls) {
            if (!o_alpha->count() && !o_x->count())
                throw DomainError("classify needs --alpha or --x");
            const auto p = cp.build(cs.default_setting());
            const auto spec = cs.spec(p);
            const auto v = o_alpha->count() ? classify_distortion(alpha, p, spec) : classify_at(x, p, spec.delta(p));
            json payload = {{"profile", to_json(p)}, {"regularity", regularity_json(spec.regularity)}};
            if (o_alpha->count())
                payload["alpha"] = alpha;
            payload["result"] = to_json(v);
            emit_json(out, payload, args);
        } else if (*cons) {
            json a = json::array();
            for (const auto& c : derive_sup_constants())
                a.push_back(to_json(c));
            emit_json(out, {{"constants", a}, {"theta1_residual", theta1_residual()}}, args);
        } else if (*val) {
            json payload = json::object();
            bool ok = true;
            auto section = [&](const char* name, const std::vector<ValidationCase>& cs) {
                json a = json::array();
                std::size_t fails = 0;
                for (const auto& c : cs) {
                    a.push_back(to_json(c));
                    fails += !c.dominated;
                }
                ok = ok && fails == 0;
                payload[name] = {{"cases", a}, {"failures", fails}};
            };
            if (suite == "exact" || suite == "all")
                section("exact", run_exact_suite());
            if (suite == "mc" || suite == "all")
                section("mc", run_mc_suite(seed, reps));
            payload["all_dominated"] = ok;
            emit_json(out, payload, args);
            if (!ok)
                return static_cast<int>(ExitCode::check_failed);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::computation);
    }
    return 0;
}

} // namespace edgeworth::cli
