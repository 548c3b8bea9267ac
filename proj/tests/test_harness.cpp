#include "robustspline/error.hpp"
#include "robustspline/harness.hpp"

#include "doctest.h"

#include <sstream>
#include <string>

using namespace robustspline;
using nlohmann::json;

namespace {

std::string config_error(const json& j)
{
    try {
        parse_experiment_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

ExperimentConfig small_config()
{
    auto c = parse_experiment_config(json::parse(R"({
        "n_grid": [64, 128, 256, 512], "trials": 3, "q_exponent": 0.5,
        "grid": {"l2": 256, "linf": 1024}, "self_test": true})"));
    return c;
}

} // namespace

TEST_CASE("config parsing applies defaults")
{
    const auto c = parse_experiment_config(json::object());
    CHECK(c.attacks.size() == 3);
    CHECK(c.n_grid.front() == 256);
    CHECK(c.n_grid.back() == 8192);
    CHECK(c.sigma == 1.0);
    CHECK(c.bound == 100.0);
    CHECK(c.trials == 20);
    CHECK_FALSE(c.fixed_lambda);
}

TEST_CASE("config errors name the offending field")
{
    CHECK(config_error(json::parse(R"({"sigmaa": 1})")).find("sigmaa") != std::string::npos);
    CHECK(config_error(json::parse(R"({"sigma": "x"})")).find("sigma") != std::string::npos);
    CHECK(config_error(json::parse(R"({"attacks": [{"kind": "random", "qq": 3}]})"))
              .find("attacks[0].qq") != std::string::npos);
    CHECK(config_error(json::parse(R"({"attacks": ["nope"]})")).find("attacks[0]") !=
          std::string::npos);
    CHECK(config_error(json::parse(R"({"n_grid": [10, -3]})")).find("n_grid[1]") != std::string::npos);
    CHECK(config_error(json::parse(R"({"lambda": {"policy": "fixed"}})")).find("lambda.value") !=
          std::string::npos);
    CHECK(config_error(json::parse(R"({"q_exponent": 1.5})")).find("q_exponent") != std::string::npos);
    CHECK(config_error(json::parse(R"({"target": {"kind": "cubic"}})")).find("target.kind") !=
          std::string::npos);
    CHECK(config_error(json::parse(R"([1, 2])")) != "");
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("budget rounding")
{
    CHECK(budget_for(256, 0.3) == 6);
    CHECK(budget_for(8192, 0.6) == 223);
    CHECK(budget_for(100, 1.0) == 100);
    CHECK(budget_for(100, 0.0) == 1);
}

TEST_CASE("rate fit needs four positive points")
{
    CHECK_FALSE(fit_rate({{10, 1.0}, {20, 0.5}, {40, 0.25}}));
    CHECK_FALSE(fit_rate({{10, 1.0}, {20, 0.5}, {40, 0.25}, {80, 0.0}}));
    const auto f = fit_rate({{10, 1.0}, {20, 0.5}, {40, 0.25}, {80, 0.125}});
    REQUIRE(f);
    CHECK(f->slope == doctest::Approx(-1.0));
    CHECK(f->r_squared == doctest::Approx(1.0));
}

TEST_CASE("convergence run produces rows and fits")
{
    const auto c = small_config();
    const auto r = run_convergence(c, 1);
    // 4 n × 2 metrics × (3 attacks + max)
    CHECK(r.rows.size() == 4 * 2 * 4);
    CHECK(r.fits.size() == 2 * 4);
    for (const auto& f : r.fits)
        CHECK(f.fit.has_value());
    std::ostringstream os;
    write_risk_csv(os, r.rows);
    CHECK(os.str().rfind(std::string(risk_csv_header), 0) == 0);
    const auto j = to_json(r, c);
    CHECK(j.contains("rows"));
    CHECK(j.contains("fits"));

    const auto again = run_convergence(c, 3);
    std::ostringstream os2;
    write_risk_csv(os2, again.rows);
    CHECK(os.str() == os2.str());
    CHECK(to_json(again, c).dump() == j.dump());
}

TEST_CASE("lower-bound rows")
{
    const auto rows = run_lowerbound({4, 20}, 100, 1.0, 300, 9, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].r_q == doctest::Approx(0.04));
    CHECK(rows[1].linf_gap == doctest::Approx(0.2));
    CHECK(rows[1].lecam_bound == doctest::Approx(rows[1].l2_gap_squared / 4));
    CHECK(rows[1].eligible == 19);
    std::ostringstream os;
    write_lowerbound_csv(os, rows);
    CHECK(os.str().rfind(std::string(lowerbound_csv_header), 0) == 0);
    CHECK_THROWS_AS(run_lowerbound({}, 100, 1.0, 0, 1), InputError);
    CHECK_THROWS_AS(run_lowerbound({100}, 100, 1.0, 0, 1), ConstructionError);
}

TEST_CASE("kernel dump agrees with the summary")
{
    KernelDumpConfig cfg;
    cfg.n = 300;
    cfg.grid_size = 21;
    const auto g = run_kernel_dump(cfg, 2);
    double sup = 0.0;
    for (const auto& row : g.rows)
        sup = std::max(sup, row.abs_diff);
    CHECK(sup == g.summary.sup_abs_error);
    std::ostringstream os;
    write_kernel_csv(os, g);
    std::size_t lines = 0;
    for (char ch : os.str())
        lines += ch == '\n';
    CHECK(lines == g.rows.size() + 1);
    CHECK(to_json(g.summary)["relative_error"].get<double>() == g.summary.relative_error);
}

TEST_CASE("double formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("a single n yields rows but no rate fit")
{
    auto c = small_config();
    c.n_grid = {256};
    const auto r = run_convergence(c, 1);
    CHECK(r.rows.size() == 2 * 4);
    for (const auto& f : r.fits) {
        CHECK_FALSE(f.fit.has_value());
        CHECK_FALSE(f.note.empty());
    }
}

TEST_CASE("lower-bound rows scale like r cubed")
{
    const auto rows = run_lowerbound({1, 5, 10, 5000}, 10000, 1.0, 0, 3);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].l2_gap_squared <= 1e-11);
    CHECK(rows[3].r_q == 0.5);
    const double ratio = rows[2].l2_gap_squared / rows[1].l2_gap_squared;
    CHECK(ratio == doctest::Approx(8.0).epsilon(0.15));
    for (const auto& row : rows) {
        CHECK(row.r_q * row.r_q >= 0.0);
        CHECK(row.r_q * row.r_q <= 1.0);
    }
}
