#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace darboux::cli {

enum class Command { Integrate, Certify, PrePrimCheck, FtcCheck, Tabulate, Gallery, Eval };
enum class OutputFormat { Json, Csv };

namespace exit_code {
inline constexpr int kPositive = 0;     // certified / integrable / consistent
inline constexpr int kNegative = 1;     // refuted / non-integrable
inline constexpr int kInconclusive = 2;
inline constexpr int kUsage = 3;        // bad flags, parse errors
inline constexpr int kDomain = 4;       // evaluation outside the domain
} // namespace exit_code

// Points (a, b, c, x) are constant expressions such as "0.5" or "pi/2".
// F and G may be expressions or the words "lower" / "upper", which select the
// Darboux pre-primitives of f based at c.
struct RunConfig {
    Command command = Command::Certify;
    std::string f_expr;
    std::optional<std::string> F_expr;
    std::optional<std::string> G_expr;
    std::optional<std::string> a;
    std::optional<std::string> b;
    std::optional<std::string> c;
    std::vector<std::string> xs;
    std::string side = "right";
    double tol = 1e-6;
    std::size_t max_rounds = 100000;
    std::uint64_t seed = 0;
    std::size_t pairs = 1000;
    std::size_t grid = 11;
    std::size_t budget = 4096; // refinement rounds per pre-primitive query
    std::string check = "auto"; // sandwich, lipschitz, derivative, constant, all
    OutputFormat format = OutputFormat::Json;
};

struct RunResult {
    int exit_code = exit_code::kPositive;
    std::string out; // the report (JSON or CSV)
    std::string err; // diagnostics
};

RunResult run(const RunConfig& config);

std::optional<Command> command_from_name(const std::string& name);
std::string command_name(Command c);

} // namespace darboux::cli
