#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "darboux/interval.hpp"

namespace darboux {

enum class NodeKind {
    Const,
    Var,
    Pi,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Abs,
    Min,
    Max,
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Floor,
    Sign,
    Dirichlet,
    Cantor,
    Step,
};

struct Node {
    NodeKind kind = NodeKind::Const;
    double value = 0.0;    // Const
    unsigned exponent = 0; // Pow
    // Step: x < threshold -> below, otherwise -> above.
    double threshold = 0.0;
    double below = 0.0;
    double above = 0.0;
    std::vector<std::shared_ptr<const Node>> args;
};

// Immutable expression of one real variable x. Cheap to copy.
class FuncExpr {
public:
    explicit FuncExpr(std::shared_ptr<const Node> root);

    const Node& root() const noexcept { return *root_; }
    const std::shared_ptr<const Node>& root_ptr() const noexcept { return root_; }

    // True when x does not occur.
    bool is_constant() const;

    // Canonical text; parse(to_string()) reproduces the same tree.
    std::string to_string() const;

private:
    std::shared_ptr<const Node> root_;
};

// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? power
//   power  := atom ("^" integer)?
//   atom   := number | "x" | "pi" | ident "(" expr ("," expr)* ")" | "(" expr ")"
// step(t, lo, hi) takes numeric literals only.
FuncExpr parse(std::string_view src);

// What is known about the real number a value stands for. Numeric literals
// denote their binary64 value and are rational; pi and nonzero rational
// multiples of it are irrational.
enum class Rationality { Rational, Irrational, Unknown };

struct Point {
    double value = 0.0;
    Rationality rationality = Rationality::Rational;
    bool exact = true; // value equals the real number it stands for

    static Point literal(double v) { return {v, Rationality::Rational, true}; }
};

// Evaluates an x-free expression such as "pi/4" or "0.25" with provenance.
Point parse_point(std::string_view src);

// Pointwise evaluation. dirichlet() needs to know whether its argument is
// rational and throws EvalUndecidable otherwise; ln/sqrt/division outside
// their domain throw DomainError.
double eval_point(const FuncExpr& f, const Point& x);
double eval_point(const FuncExpr& f, double x);

struct RangeEnclosure {
    Interval range;
    // range endpoints are inf/sup of f on the interval up to outward rounding.
    bool exact = false;
    // inf (resp. sup) is exactly range.lo (range.hi) and is attained on
    // every nondegenerate subinterval.
    bool dense_inf = false;
    bool dense_sup = false;
};

// Sound enclosure of {f(x) : x in iv}.
RangeEnclosure range_on(const FuncExpr& f, const Interval& iv);

} // namespace darboux
