#include "darboux/cli.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "darboux/darboux.hpp"
#include "darboux/expr.hpp"
#include "darboux/ftc.hpp"
#include "darboux/gallery.hpp"
#include "darboux/preprimitive.hpp"

namespace darboux::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

class UsageError : public Error {
public:
    using Error::Error;
};

Json to_json(const Interval& iv)
{
    return Json{{"lo", iv.lo()}, {"hi", iv.hi()}};
}

Json header(Command c, const std::string& verdict, double slack)
{
    return Json{{"schema_version", kSchemaVersion},
                {"command", command_name(c)},
                {"verdict", verdict},
                {"slack", slack}};
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

double point(const std::optional<std::string>& text, const char* flag)
{
    if (!text)
        throw UsageError(std::string("missing --") + flag);
    return parse_point(*text).value;
}

double point_or(const std::optional<std::string>& text, double fallback)
{
    return text ? parse_point(*text).value : fallback;
}

FuncExpr require_f(const RunConfig& cfg)
{
    if (cfg.f_expr.empty())
        throw UsageError("missing --f");
    return parse(cfg.f_expr);
}

void check_tol(double tol)
{
    if (!(tol > 0.0))
        throw NonPositiveTolerance();
}

std::string kind_name(VerdictKind k)
{
    switch (k) {
    case VerdictKind::Integrable: return "integrable";
    case VerdictKind::NonIntegrable: return "non_integrable";
    case VerdictKind::Inconclusive: return "inconclusive";
    }
    return {};
}

int exit_for(VerdictKind k)
{
    switch (k) {
    case VerdictKind::Integrable: return exit_code::kPositive;
    case VerdictKind::NonIntegrable: return exit_code::kNegative;
    case VerdictKind::Inconclusive: return exit_code::kInconclusive;
    }
    return exit_code::kInconclusive;
}

Json verdict_json(const IntegrabilityVerdict& v)
{
    Json j;
    j["kind"] = kind_name(v.kind);
    j["enclosure"] = to_json(v.enclosure);
    j["lower_sum"] = to_json(v.lower);
    j["upper_sum"] = to_json(v.upper);
    j["gap"] = v.gap;
    if (v.kind == VerdictKind::NonIntegrable) {
        j["certified_gap_lower_bound"] = v.certified_gap_lower_bound;
        j["gap_proved"] = v.gap_proved;
    }
    j["rounds"] = v.rounds;
    j["final_partition_size"] = v.final_partition_size;
    return j;
}

RunResult run_certify(const RunConfig& cfg)
{
    const FuncExpr f = require_f(cfg);
    const double a = point(cfg.a, "a");
    const double b = point(cfg.b, "b");
    check_tol(cfg.tol);
    const IntegrabilityVerdict v = certify(f, a, b, cfg.tol, cfg.max_rounds);

    Json j = header(cfg.command, kind_name(v.kind), v.slack);
    j["function"] = f.to_string();
    j["a"] = a;
    j["b"] = b;
    j["tol"] = cfg.tol;
    j["max_rounds"] = cfg.max_rounds;
    if (cfg.command == Command::Integrate) {
        j["integral"] = to_json(v.enclosure);
        j["width"] = width(v.enclosure);
        j["certificate"] = verdict_json(v);
    } else {
        j.update(verdict_json(v));
    }
    return {exit_for(v.kind), dump(j), {}};
}

PrePrimitiveFn make_preprimitive(const std::string& text, const FuncExpr& f, double c,
                                 const RunConfig& cfg)
{
    const PrePrimitiveOptions opt{cfg.budget, 0.0};
    if (text == "lower")
        return PrePrimitiveFn::lower(f, c, opt);
    if (text == "upper")
        return PrePrimitiveFn::upper(f, c, opt);
    return PrePrimitiveFn::symbolic(parse(text));
}

Json report_json(const PrePrimitiveReport& r)
{
    Json j;
    j["property"] = to_string(r.property);
    j["verdict"] = to_string(r.verdict);
    j["samples_checked"] = r.samples_checked;
    j["violations"] = r.violations;
    j["slack"] = r.slack;
    switch (r.property) {
    case Property::Lipschitz:
        j["lipschitz_constant"] = r.lipschitz_constant;
        break;
    case Property::OneSidedDerivative:
        if (r.estimate)
            j["estimate"] = to_json(*r.estimate);
        if (r.target)
            j["target"] = to_json(*r.target);
        if (r.stabilized_at)
            j["stabilized_at"] = *r.stabilized_at;
        break;
    case Property::ConstantDifference:
        j["separation"] = r.separation;
        j["hull_width"] = r.hull_width;
        break;
    case Property::SandwichDefA:
        break;
    }
    Json ws = Json::array();
    for (const auto& w : r.witnesses) {
        if (r.property == Property::ConstantDifference)
            ws.push_back({{"x", w.x}, {"y", w.y}, {"difference_at_x", to_json(w.quotient)},
                          {"difference_at_y", to_json(w.bound)}});
        else
            ws.push_back({{"x", w.x}, {"y", w.y}, {"quotient", to_json(w.quotient)},
                          {"bound", to_json(w.bound)}});
    }
    j["witnesses"] = ws;
    return j;
}

RunResult run_preprim_check(const RunConfig& cfg)
{
    const FuncExpr f = require_f(cfg);
    const double a = point(cfg.a, "a");
    const double b = point(cfg.b, "b");
    if (!(a < b))
        throw InvalidInterval("preprim-check needs a < b");
    const double c = point_or(cfg.c, a);
    const PrePrimitiveFn F = make_preprimitive(cfg.F_expr.value_or("lower"), f, c, cfg);

    std::vector<std::string> checks;
    if (cfg.check == "auto") {
        checks = {"sandwich", "lipschitz"};
        if (!cfg.xs.empty())
            checks.push_back("derivative");
        if (cfg.G_expr)
            checks.push_back("constant");
    } else if (cfg.check == "all") {
        checks = {"sandwich", "lipschitz", "derivative", "constant"};
    } else {
        checks = {cfg.check};
    }

    PairOptions pairs{cfg.pairs, cfg.seed, {}};
    std::vector<PrePrimitiveReport> reports;
    for (const auto& name : checks) {
        if (name == "sandwich") {
            reports.push_back(check_sandwich(F, f, a, b, pairs));
        } else if (name == "lipschitz") {
            reports.push_back(check_lipschitz(F, f, a, b, pairs));
        } else if (name == "derivative") {
            if (cfg.xs.empty())
                throw UsageError("the derivative check needs --x");
            if (cfg.side != "right" && cfg.side != "left")
                throw UsageError("--side must be right or left");
            const Side side = cfg.side == "right" ? Side::Right : Side::Left;
            const auto hs = default_h_schedule();
            for (const auto& x : cfg.xs)
                reports.push_back(check_one_sided_derivative(F, f, parse_point(x).value, side, hs, cfg.tol));
        } else if (name == "constant") {
            if (!cfg.G_expr)
                throw UsageError("the constant-difference check needs --G");
            const PrePrimitiveFn G = make_preprimitive(*cfg.G_expr, f, c, cfg);
            reports.push_back(check_constant_difference(F, G, a, b, cfg.grid, cfg.tol));
        } else {
            throw UsageError("unknown --check '" + name + "'");
        }
    }

    bool refuted = false;
    bool inconclusive = false;
    double slack = 0.0;
    Json list = Json::array();
    for (const auto& r : reports) {
        refuted = refuted || r.verdict == CheckVerdict::Refuted;
        inconclusive = inconclusive || r.verdict == CheckVerdict::Inconclusive;
        slack = std::max(slack, r.slack);
        list.push_back(report_json(r));
    }
    const CheckVerdict overall = refuted ? CheckVerdict::Refuted
                                         : (inconclusive ? CheckVerdict::Inconclusive
                                                         : CheckVerdict::ConsistentAtResolution);
    Json j = header(cfg.command, to_string(overall), slack);
    j["function"] = f.to_string();
    j["candidate"] = F.describe();
    j["a"] = a;
    j["b"] = b;
    j["seed"] = cfg.seed;
    j["reports"] = list;
    const int code = refuted ? exit_code::kNegative
                             : (inconclusive ? exit_code::kInconclusive : exit_code::kPositive);
    return {code, dump(j), {}};
}

RunResult run_ftc_check(const RunConfig& cfg)
{
    const FuncExpr f = require_f(cfg);
    if (!cfg.F_expr)
        throw UsageError("missing --F");
    const double a = point(cfg.a, "a");
    const double b = point(cfg.b, "b");
    check_tol(cfg.tol);
    const PrePrimitiveFn F = make_preprimitive(*cfg.F_expr, f, point_or(cfg.c, a), cfg);
    const FtcCertificate cert = ftc_check(f, F, a, b, cfg.tol, cfg.max_rounds);

    Json j = header(cfg.command, to_string(cert.verdict), cert.slack);
    j["function"] = f.to_string();
    j["primitive"] = F.describe();
    j["a"] = a;
    j["b"] = b;
    j["integral_enclosure"] = to_json(cert.integral_enclosure);
    j["evaluation"] = to_json(cert.evaluation);
    j["integrability"] = kind_name(cert.integrability);
    j["sandwich_held"] = cert.sandwich_held;
    if (cert.violation)
        j["violation"] = {{"round", cert.violation->round},
                          {"lower_sum", to_json(cert.violation->lower)},
                          {"upper_sum", to_json(cert.violation->upper)}};
    j["partitions_checked"] = cert.partitions_checked;
    if (a != b)
        j["certificate"] = verdict_json(cert.refinement);
    const int code = cert.verdict == FtcVerdict::Certified
                         ? exit_code::kPositive
                         : (cert.verdict == FtcVerdict::Refuted ? exit_code::kNegative
                                                                : exit_code::kInconclusive);
    return {code, dump(j), {}};
}

RunResult run_tabulate(const RunConfig& cfg)
{
    const FuncExpr f = require_f(cfg);
    check_tol(cfg.tol);
    std::vector<double> xs;
    for (const auto& x : cfg.xs)
        xs.push_back(parse_point(x).value);
    if (xs.empty()) {
        const double a = point(cfg.a, "a");
        const double b = point(cfg.b, "b");
        if (!(a < b))
            throw InvalidInterval("tabulate needs a < b");
        if (cfg.grid < 2)
            throw UsageError("--grid must be at least 2");
        const Partition p = Partition::uniform(a, b, cfg.grid - 1);
        xs.assign(p.points().begin(), p.points().end());
    }
    const double c = cfg.c ? parse_point(*cfg.c).value : (cfg.a ? parse_point(*cfg.a).value : 0.0);
    const auto table = integral_function(f, c, xs, PrePrimitiveOptions{cfg.budget, cfg.tol}, cfg.tol);
    const PrePrimitiveReport lip = check_tabulation_lipschitz(f, c, table);

    bool all_converged = true;
    for (const auto& p : table)
        all_converged = all_converged && p.verdict == VerdictKind::Integrable;
    int code = all_converged ? exit_code::kPositive : exit_code::kInconclusive;
    if (lip.verdict == CheckVerdict::Refuted)
        code = exit_code::kNegative;

    if (cfg.format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "x,lo,hi\n";
        os.precision(17);
        for (const auto& p : table)
            os << p.x << ',' << p.enclosure.lo() << ',' << p.enclosure.hi() << '\n';
        return {code, os.str(), {}};
    }
    Json j = header(cfg.command, all_converged ? "integrable" : "inconclusive", lip.slack);
    j["function"] = f.to_string();
    j["basepoint"] = c;
    Json pts = Json::array();
    for (const auto& p : table)
        pts.push_back({{"x", p.x},
                       {"lo", p.enclosure.lo()},
                       {"hi", p.enclosure.hi()},
                       {"lower_integral", to_json(p.lower)},
                       {"upper_integral", to_json(p.upper)},
                       {"verdict", kind_name(p.verdict)}});
    j["points"] = pts;
    j["lipschitz"] = report_json(lip);
    return {code, dump(j), {}};
}

Json gallery_json()
{
    Json entries = Json::array();
    for (const auto& e : builtin_gallery()) {
        Json j;
        j["name"] = e.name;
        j["f"] = e.f.to_string();
        j["primitive"] = e.primitive ? Json(e.primitive->to_string()) : Json(nullptr);
        j["integrable"] = to_string(e.integrable);
        j["one_sided_limits"] = to_string(e.limits);
        j["limit_points"] = e.limit_points;
        j["domain"] = to_json(e.domain);
        Json known = Json::array();
        for (const auto& k : e.known_integrals)
            known.push_back({{"a", k.a}, {"b", k.b}, {"value", to_json(k.value)}, {"source", k.source}});
        j["known_integrals"] = known;
        j["discontinuities"] = e.discontinuities;
        Json jumps = Json::array();
        for (const auto& jump : e.jumps)
            jumps.push_back({{"x", jump.x}, {"left", jump.left}, {"right", jump.right}});
        j["jumps"] = jumps;
        j["continuity_points"] = e.continuity_points;
        entries.push_back(j);
    }
    return entries;
}

RunResult run_gallery(const RunConfig& cfg)
{
    if (cfg.format != OutputFormat::Json)
        throw UsageError("gallery supports JSON output only");
    Json j = header(cfg.command, "ok", 0.0);
    j["entries"] = gallery_json();
    return {exit_code::kPositive, dump(j), {}};
}

RunResult run_eval(const RunConfig& cfg)
{
    const FuncExpr f = require_f(cfg);
    if (cfg.xs.empty())
        throw UsageError("missing --x");
    Json values = Json::array();
    for (const auto& text : cfg.xs) {
        const Point x = parse_point(text);
        values.push_back({{"x", x.value}, {"value", eval_point(f, x)}});
    }
    Json j = header(cfg.command, "ok", 0.0);
    j["function"] = f.to_string();
    j["values"] = values;
    return {exit_code::kPositive, dump(j), {}};
}

RunResult dispatch(const RunConfig& cfg)
{
    switch (cfg.command) {
    case Command::Integrate:
    case Command::Certify:
        return run_certify(cfg);
    case Command::PrePrimCheck:
        return run_preprim_check(cfg);
    case Command::FtcCheck:
        return run_ftc_check(cfg);
    case Command::Tabulate:
        return run_tabulate(cfg);
    case Command::Gallery:
        return run_gallery(cfg);
    case Command::Eval:
        return run_eval(cfg);
    }
    throw UsageError("unknown command");
}

} // namespace

RunResult run(const RunConfig& config)
{
    const auto fail = [](int code, const std::string& kind, const std::exception& e) {
        return RunResult{code, {}, kind + ": " + e.what() + "\n"};
    };
    try {
        return dispatch(config);
    } catch (const ParseError& e) {
        return fail(exit_code::kUsage, "parse error", e);
    } catch (const UsageError& e) {
        return fail(exit_code::kUsage, "usage error", e);
    } catch (const InvalidInterval& e) {
        return fail(exit_code::kUsage, "invalid interval", e);
    } catch (const InvalidPartition& e) {
        return fail(exit_code::kUsage, "invalid partition", e);
    } catch (const NonPositiveTolerance& e) {
        return fail(exit_code::kUsage, "invalid tolerance", e);
    } catch (const DomainError& e) {
        return fail(exit_code::kDomain, "domain error", e);
    } catch (const EvalUndecidable& e) {
        return fail(exit_code::kDomain, "undecidable", e);
    }
}

std::optional<Command> command_from_name(const std::string& name)
{
    for (Command c : {Command::Integrate, Command::Certify, Command::PrePrimCheck, Command::FtcCheck,
                      Command::Tabulate, Command::Gallery, Command::Eval})
        if (command_name(c) == name)
            return c;
    return std::nullopt;
}

std::string command_name(Command c)
{
    switch (c) {
    case Command::Integrate: return "integrate";
    case Command::Certify: return "certify";
    case Command::PrePrimCheck: return "preprim-check";
    case Command::FtcCheck: return "ftc-check";
    case Command::Tabulate: return "tabulate";
    case Command::Gallery: return "gallery";
    case Command::Eval: return "eval";
    }
    return {};
}

} // namespace darboux::cli
