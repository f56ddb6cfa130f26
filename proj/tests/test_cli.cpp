#include <doctest.h>

#include <json.hpp>

#include "darboux/cli.hpp"

using darboux::cli::Command;
using darboux::cli::RunConfig;
using darboux::cli::run;
using Json = nlohmann::ordered_json;

namespace {

RunConfig config(Command c, std::string f, std::string a = "0", std::string b = "1")
{
    RunConfig cfg;
    cfg.command = c;
    cfg.f_expr = std::move(f);
    cfg.a = std::move(a);
    cfg.b = std::move(b);
    return cfg;
}

bool contains(const Json& iv, double v)
{
    return iv.at("lo").get<double>() <= v && v <= iv.at("hi").get<double>();
}

void check_header(const Json& j, const std::string& command)
{
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("command") == command);
    CHECK(j.contains("verdict"));
    CHECK(j.at("slack").is_number());
    // Fixed key order.
    auto it = j.begin();
    CHECK(it.key() == "schema_version");
}

} // namespace

TEST_CASE("certify dirichlet")
{
    auto cfg = config(Command::Certify, "dirichlet(x)");
    cfg.tol = 1e-3;
    const auto r = run(cfg);
    CHECK(r.exit_code == 1);
    const Json j = Json::parse(r.out);
    check_header(j, "certify");
    CHECK(j.at("kind") == "non_integrable");
    CHECK(j.at("verdict") == "non_integrable");
    CHECK(j.at("gap").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("certified_gap_lower_bound").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("certify and integrate")
{
    auto cfg = config(Command::Certify, "x^2", "0", "1");
    cfg.tol = 1e-3;
    const auto r = run(cfg);
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("kind") == "integrable");
    CHECK(contains(j.at("enclosure"), 1.0 / 3.0));

    cfg.command = Command::Integrate;
    const Json k = Json::parse(run(cfg).out);
    check_header(k, "integrate");
    CHECK(contains(k.at("integral"), 1.0 / 3.0));
    CHECK(k.at("width").get<double>() <= 1e-3);
    CHECK(k.at("certificate").at("kind") == "integrable");

    cfg.max_rounds = 3;
    cfg.tol = 1e-9;
    CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("ftc-check cos against sin")
{
    auto cfg = config(Command::FtcCheck, "cos(x)", "0", "1.5707963267948966");
    cfg.F_expr = "sin(x)";
    cfg.tol = 1e-4;
    const auto r = run(cfg);
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    check_header(j, "ftc-check");
    CHECK(j.at("verdict") == "certified");
    CHECK(contains(j.at("integral_enclosure"), 1.0));
    CHECK(contains(j.at("evaluation"), 1.0));
    CHECK(j.at("sandwich_held") == true);

    cfg.a = "0.5";
    cfg.b = "0.5";
    CHECK(run(cfg).exit_code == 0);
    cfg.b = "0.25";
    CHECK(run(cfg).exit_code == 3);
}

TEST_CASE("preprim-check dirichlet against 2x")
{
    auto cfg = config(Command::PrePrimCheck, "dirichlet(x)");
    cfg.F_expr = "2*x";
    const auto r = run(cfg);
    CHECK(r.exit_code == 1);
    const Json j = Json::parse(r.out);
    check_header(j, "preprim-check");
    CHECK(j.at("verdict") == "refuted");
    const Json& sandwich = j.at("reports").at(0);
    CHECK(sandwich.at("property") == "sandwich");
    REQUIRE_FALSE(sandwich.at("witnesses").empty());
    const Json& w = sandwich.at("witnesses").at(0);
    CHECK(w.at("x") != w.at("y"));
    CHECK(contains(w.at("quotient"), 2.0));

    cfg.F_expr = "x";
    CHECK(run(cfg).exit_code == 0);
    cfg.F_expr = "lower";
    cfg.budget = 64;
    cfg.pairs = 100;
    CHECK(run(cfg).exit_code == 0);
}

TEST_CASE("preprim-check individual checks")
{
    auto cfg = config(Command::PrePrimCheck, "step(0.5, 0, 1)");
    cfg.F_expr = "max(x - 0.5, 0)";
    cfg.check = "derivative";
    cfg.xs = {"0.5"};
    cfg.tol = 1e-3;
    auto r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(Json::parse(r.out).at("reports").at(0).at("property") == "one_sided_derivative");
    cfg.side = "left";
    CHECK(run(cfg).exit_code == 0);
    cfg.side = "up";
    CHECK(run(cfg).exit_code == 3);

    auto d = config(Command::PrePrimCheck, "dirichlet(x)");
    d.F_expr = "0";
    d.G_expr = "x";
    d.check = "constant";
    d.tol = 1e-3;
    const auto dr = run(d);
    CHECK(dr.exit_code == 1);
    CHECK(Json::parse(dr.out).at("reports").at(0).at("separation").get<double>() >= 0.5);

    d.check = "bogus";
    CHECK(run(d).exit_code == 3);
    d.check = "constant";
    d.G_expr.reset();
    CHECK(run(d).exit_code == 3);
}

TEST_CASE("tabulate")
{
    auto cfg = config(Command::Tabulate, "floor(3*x)");
    cfg.grid = 4;
    cfg.tol = 1e-3;
    cfg.budget = 100000;
    cfg.format = darboux::cli::OutputFormat::Csv;
    const auto r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("x,lo,hi\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

    cfg.format = darboux::cli::OutputFormat::Json;
    const Json j = Json::parse(run(cfg).out);
    check_header(j, "tabulate");
    REQUIRE(j.at("points").size() == 4);
    CHECK(contains(j.at("points").at(3), 1.0));

    cfg.xs = {"pi/4"};
    cfg.f_expr = "cos(x)";
    const Json k = Json::parse(run(cfg).out);
    CHECK(contains(k.at("points").at(0), std::sin(0.7853981633974483)));
}

TEST_CASE("gallery and eval")
{
    RunConfig cfg;
    cfg.command = Command::Gallery;
    const auto r = run(cfg);
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    check_header(j, "gallery");
    CHECK(j.at("entries").size() >= 11);
    cfg.format = darboux::cli::OutputFormat::Csv;
    CHECK(run(cfg).exit_code == 3);

    RunConfig e;
    e.command = Command::Eval;
    e.f_expr = "dirichlet(x)";
    e.xs = {"0.5", "pi/4"};
    const Json v = Json::parse(run(e).out);
    CHECK(v.at("values").at(0).at("value") == 1.0);
    CHECK(v.at("values").at(1).at("value") == 0.0);
}

TEST_CASE("error exit codes")
{
    auto parse_err = config(Command::Certify, "x + * 2");
    const auto r = run(parse_err);
    CHECK(r.exit_code == 3);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());

    CHECK(run(config(Command::Certify, "foo(x)")).exit_code == 3);
    CHECK(run(config(Command::Certify, "x", "1", "0")).exit_code == 3);
    auto no_b = config(Command::Certify, "x");
    no_b.b.reset();
    CHECK(run(no_b).exit_code == 3);
    auto tol = config(Command::Certify, "x");
    tol.tol = 0;
    CHECK(run(tol).exit_code == 3);
    auto missing_f = config(Command::Certify, "");
    CHECK(run(missing_f).exit_code == 3);

    CHECK(run(config(Command::Certify, "ln(x)", "-1", "1")).exit_code == 4);
    CHECK(run(config(Command::Certify, "1/x", "-1", "1")).exit_code == 4);
    RunConfig e;
    e.command = Command::Eval;
    e.f_expr = "dirichlet(sqrt(x))";
    e.xs = {"2"};
    CHECK(run(e).exit_code == 4);
}

TEST_CASE("determinism")
{
    std::vector<RunConfig> configs;
    auto c = config(Command::Certify, "cantor(x)");
    c.tol = 1e-2;
    configs.push_back(c);
    auto p = config(Command::PrePrimCheck, "floor(3*x)");
    p.F_expr = "lower";
    p.budget = 64;
    p.pairs = 200;
    p.seed = 0;
    configs.push_back(p);
    auto t = config(Command::Tabulate, "exp(x)");
    t.tol = 1e-3;
    configs.push_back(t);
    for (const auto& cfg : configs) {
        const auto first = run(cfg);
        const auto second = run(cfg);
        CHECK(first.out == second.out);
        CHECK(first.exit_code == second.exit_code);
    }
    p.seed = 5;
    CHECK(run(p).out != run(configs[1]).out);
}

TEST_CASE("command names")
{
    for (auto c : {Command::Integrate, Command::Certify, Command::PrePrimCheck, Command::FtcCheck, Command::Tabulate,
                   Command::Gallery, Command::Eval})
        CHECK(darboux::cli::command_from_name(darboux::cli::command_name(c)) == c);
    CHECK_FALSE(darboux::cli::command_from_name("nope").has_value());
}
