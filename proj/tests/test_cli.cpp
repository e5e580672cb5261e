#include <catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>

#include "cli.hpp"

using namespace edgeworth;
using Catch::Approx;

namespace {
struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "edgeworth");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ','))
            cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}
} // namespace

TEST_CASE("nmax-table golden output")
{
    const auto r = run({"nmax-table"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "bound,alpha_0.1,alpha_0.05,alpha_0.01\n"
                   "existing,593,2375,59389\n"
                   "moment_only,2339,6705,55894\n"
                   "moment_only_unskewed,443,1229,17934\n"
                   "kappa,1468,4069,27945\n"
                   "kappa_unskewed,375,474,1062\n");
    const auto meta = json::parse(r.err);
    CHECK(meta.at("format") == "csv");
    CHECK(meta.at("metadata").at("tool") == "edgeworth");

    // loose level: small or none
    const auto loose = parse_csv(run({"nmax-table", "--alphas", "0.5"}).out);
    REQUIRE(loose.size() == 6);
    for (std::size_t i = 1; i < loose.size(); ++i)
        CHECK((loose[i][1] == "none" || std::stoll(loose[i][1]) >= 3));

    // tighter kurtosis gives smaller sample sizes in every cell
    const auto k3 = parse_csv(run({"nmax-table", "--K4", "3"}).out);
    const auto k9 = parse_csv(run({"nmax-table"}).out);
    for (std::size_t i = 1; i < k3.size(); ++i)
        for (std::size_t j = 1; j < 4; ++j)
            CHECK(std::stoll(k3[i][j]) < std::stoll(k9[i][j]));

    CHECK(run({"nmax-table", "--alphas", "0.1,x"}).code == 2);
}

TEST_CASE("bound command")
{
    const auto r = run({"bound", "--n", "2375", "--K4", "9", "--setting", "iid", "--target", "be", "--baseline",
                        "shevtsova"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("format") == "json");
    CHECK(j.at("payload").at("result").at("total").get<double>() == Approx(0.0500).margin(1e-4));
    CHECK(j.at("payload").at("result").at("theorem") == "shevtsova");
    CHECK(j.at("payload").at("comparison").at("theorem") == "moment_only");

    const auto b = json::parse(run({"bound", "--n", "100", "--K4", "1", "--setting", "iid", "--no-skew"}).out);
    const double t = b.at("payload").at("result").at("total").get<double>();
    CHECK(t > 0.0);
    CHECK(std::isfinite(t));

    const auto k = json::parse(run({"bound", "--n", "1000", "--K4", "9", "--regularity", "kappa:0.99"}).out);
    const auto& kr = k.at("payload").at("result");
    CHECK(kr.at("theorem") == "iid_char_sup");
    const auto prof = make_profile(1000, 9.0, std::nullopt, std::nullopt, std::nullopt, Setting::iid);
    CHECK(kr.at("total").get<double>() == bound_BE(prof, RegularityAssumption::iid_char_sup(0.99)).total);

    // the breakdown in the payload sums to the total
    double s = 0.0;
    for (const auto& term : kr.at("breakdown"))
        s += term.at("value").get<double>();
    CHECK(s == Approx(kr.at("total").get<double>()).epsilon(1e-13));

    const auto ee = json::parse(run({"bound", "--n", "1000", "--K4", "9", "--target", "ee"}).out);
    CHECK(ee.at("payload").at("bound") == "ee");
}

TEST_CASE("validation errors exit with code 2")
{
    const auto r = run({"bound", "--n", "2", "--K4", "9"});
    CHECK(r.code == 2);
    CHECK(r.err.find("n >= 3") != std::string::npos);
    CHECK(run({"bound", "--n", "100", "--K4", "9", "--bogus"}).code == 2);
    CHECK(run({"bound", "--n", "100", "--K4", "9", "--setting", "inid", "--regularity", "kappa:0.9"}).code == 2);
    CHECK(run({"bound", "--n", "100", "--K4", "9", "--regularity", "poly:1"}).code == 2);
    CHECK(run({"bound", "--n", "100"}).code == 2);
    CHECK(run({"bound", "--n", "100", "--K4", "9", "--K3", "0.5"}).code == 2);
    CHECK(run({"figure-data", "--figure", "3"}).code == 2);
    CHECK(run({"classify", "--n", "100", "--K4", "9", "--alpha", "0.05", "--x", "2"}).code == 2);
    CHECK(run({"classify", "--n", "100", "--K4", "9"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("profile file with flag overrides")
{
    const std::string path = "test_cli_profile.json";
    {
        std::ofstream f(path);
        f << R"({"n": 500, "K4": 9, "setting": "iid", "lambda3": 1.0})";
    }
    const auto a = json::parse(run({"bound", "--profile", path}).out);
    CHECK(a.at("payload").at("profile").at("n") == 500);
    CHECK(a.at("payload").at("profile").at("lambda3").get<double>() == 1.0);
    const auto b = json::parse(run({"bound", "--profile", path, "--n", "800"}).out);
    CHECK(b.at("payload").at("profile").at("n") == 800);
    CHECK(b.at("payload").at("profile").at("setting") == "iid");
    std::remove(path.c_str());
    CHECK(run({"bound", "--profile", "does_not_exist.json"}).code == 2);
}

TEST_CASE("figure data")
{
    const auto r = run({"figure-data", "--figure", "1", "--n-min", "10000", "--n-max", "100000", "--points", "2"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"n", "shevtsova_inid", "shevtsova_iid", "moment_only_inid",
                                              "moment_only_inid_unskewed", "moment_only_iid",
                                              "moment_only_iid_unskewed"});
    CHECK(rows[1][0] == "10000");
    CHECK(std::stod(rows[1][2]) == Approx(0.4690 * std::pow(9.0, 0.75) / 100.0).epsilon(1e-5));
    CHECK(std::stod(rows[1][2]) == Approx(0.02437).margin(1e-5));

    // full default grid: every value positive and finite
    const auto full = parse_csv(run({"figure-data", "--figure", "2"}).out);
    REQUIRE(full.size() > 50);
    CHECK(full[0] == std::vector<std::string>{"n", "shevtsova_inid", "shevtsova_iid", "poly_tail_inid",
                                              "poly_tail_inid_unskewed", "kappa_iid", "kappa_iid_unskewed"});
    for (std::size_t i = 1; i < full.size(); ++i)
        for (std::size_t j = 1; j < full[i].size(); ++j) {
            const double v = std::stod(full[i][j]);
            CHECK(v > 0.0);
            CHECK(std::isfinite(v));
        }

    // unskewed iid regularity curve: slope -1 over the last decade
    std::vector<double> xs, ys;
    const double n_top = std::stod(full.back()[0]);
    for (std::size_t i = 1; i < full.size(); ++i) {
        const double n = std::stod(full[i][0]);
        if (n >= n_top / 10.0 * 0.999) {
            xs.push_back(std::log(n));
            ys.push_back(std::log(std::stod(full[i][6])));
        }
    }
    REQUIRE(xs.size() >= 5);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    CHECK(sxy / sxx == Approx(-1.0).margin(0.05));
}

TEST_CASE("identical invocations give identical payloads")
{
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    const std::vector<std::string> args{"bound", "--n", "3000", "--K4", "5", "--setting", "iid"};
    const auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out).at("metadata").at("timestamp") == "2023-11-14T22:13:20Z");
    const auto c = run({"figure-data", "--figure", "2", "--points", "5"});
    CHECK(c.out == run({"figure-data", "--figure", "2", "--points", "5"}).out);
    unsetenv("SOURCE_DATE_EPOCH");

    // JSON numbers round-trip exactly
    const auto prof = make_profile(3000, 5.0, std::nullopt, std::nullopt, std::nullopt, Setting::iid);
    CHECK(json::parse(a.out).at("payload").at("result").at("total").get<double>() == bound_BE(prof).total);
}

TEST_CASE("pvalue and classify commands")
{
    const auto p = json::parse(run({"pvalue", "--s", "1.6449", "--n", "10000", "--K4", "9", "--setting", "iid"}).out);
    const auto& br = p.at("payload").at("bracket");
    CHECK(br.at("lower").get<double>() <= br.at("center").get<double>());
    CHECK(br.at("center").get<double>() <= br.at("upper").get<double>());
    CHECK(br.at("naive").get<double>() == Approx(0.05).margin(1e-5));

    const auto c = run({"classify", "--alpha", "0.05", "--n", "1000000", "--K4", "9", "--lambda3", "0.5",
                        "--regularity", "kappa:0.99"});
    REQUIRE(c.code == 0);
    const auto cj = json::parse(c.out);
    CHECK(cj.at("payload").at("result").at("verdict") == "liberal");
    CHECK(cj.at("payload").at("profile").at("setting") == "iid");
    const auto prof = make_profile(1000000, 9.0, std::nullopt, std::nullopt, 0.5, Setting::iid);
    const double x = std_normal_quantile(0.95), delta = bound_EE1(prof, RegularityAssumption::iid_char_sup(0.99)).total;
    CHECK(cj.at("payload").at("result").at("threshold").get<double>()
          == Approx(6.0 * 1000.0 * delta / ((x * x - 1.0) * std_normal_pdf(x))).epsilon(1e-12));

    const auto at = json::parse(run({"classify", "--x", "0.5", "--n", "1000000", "--K4", "9", "--lambda3", "0.5",
                                     "--regularity", "kappa:0.99"})
                                    .out);
    CHECK(at.at("payload").at("result").at("verdict") == "conservative");
}

TEST_CASE("constants and exact validation", "[slow]")
{
    const auto c = run({"constants"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out);
    CHECK(j.at("payload").at("constants").size() == 11);
    for (const auto& k : j.at("payload").at("constants"))
        CHECK(k.at("ok").get<bool>());

    const auto v = run({"validate", "--suite", "exact"});
    CHECK(v.code == 0);
    const auto vj = json::parse(v.out);
    CHECK(vj.at("payload").at("all_dominated").get<bool>());
    CHECK(vj.at("payload").at("exact").at("failures") == 0);
    CHECK(vj.at("payload").at("exact").at("cases").size() == 3 * 38);
}

#ifdef EDGEWORTH_CLI_PATH
TEST_CASE("installed binary writes payload to stdout")
{
    const std::string cmd = std::string(EDGEWORTH_CLI_PATH) + " nmax-table --alphas 0.1 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string text;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe))
        text += buf;
    const int status = pclose(pipe);
    CHECK(status == 0);
    CHECK(text.rfind("bound,alpha_0.1\nexisting,593\n", 0) == 0);

    const std::string bad = std::string(EDGEWORTH_CLI_PATH) + " bound --n 2 --K4 9 >/dev/null 2>&1";
    const int rc = std::system(bad.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}
#endif
