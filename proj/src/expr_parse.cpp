#include "darboux/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string_view>
#include <utility>

namespace darboux {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
    : Error(what), offset_(offset), expected_(std::move(expected))
{
}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, const std::string& name)
    : ParseError(offset, {}, "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(name)
{
}

ArityError::ArityError(std::size_t offset, const std::string& function, std::size_t expected,
                       std::size_t got)
    : ParseError(offset, {},
                 function + "() takes " + std::to_string(expected) + " argument(s), got " +
                     std::to_string(got) + " at offset " + std::to_string(offset))
{
}

FuncExpr::FuncExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

bool FuncExpr::is_constant() const
{
    std::function<bool(const Node&)> free_of_x = [&](const Node& n) {
        if (n.kind == NodeKind::Var)
            return false;
        for (const auto& a : n.args)
            if (!free_of_x(*a))
                return false;
        return true;
    };
    return free_of_x(*root_);
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
    bool integral = false; // digits only
};

struct FunctionInfo {
    std::string_view name;
    NodeKind kind;
    std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", NodeKind::Sin, 1},
    {"cos", NodeKind::Cos, 1},
    {"exp", NodeKind::Exp, 1},
    {"ln", NodeKind::Ln, 1},
    {"sqrt", NodeKind::Sqrt, 1},
    {"abs", NodeKind::Abs, 1},
    {"floor", NodeKind::Floor, 1},
    {"sign", NodeKind::Sign, 1},
    {"min", NodeKind::Min, 2},
    {"max", NodeKind::Max, 2},
    {"dirichlet", NodeKind::Dirichlet, 1},
    {"cantor", NodeKind::Cantor, 1},
    {"step", NodeKind::Step, 3},
};

const FunctionInfo* find_function(std::string_view name)
{
    for (const auto& f : kFunctions)
        if (f.name == name)
            return &f;
    return nullptr;
}

const FunctionInfo& info_for(NodeKind kind)
{
    for (const auto& f : kFunctions)
        if (f.kind == kind)
            return f;
    throw std::logic_error("not a function node");
}

constexpr unsigned kMaxExponent = 1024;

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        const std::size_t start = pos_;
        if (pos_ == src_.size())
            return {Tok::End, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::Ident, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        const auto one = [&](Tok t) { return Token{t, start, src_.substr(start, 1)}; };
        switch (c) {
        case '+': return one(Tok::Plus);
        case '-': return one(Tok::Minus);
        case '*': return one(Tok::Star);
        case '/': return one(Tok::Slash);
        case '^': return one(Tok::Caret);
        case '(': return one(Tok::LParen);
        case ')': return one(Tok::RParen);
        case ',': return one(Tok::Comma);
        default:
            throw ParseError(start, {}, std::string("unexpected character '") + c + "' at offset " +
                                            std::to_string(start));
        }
    }

private:
    bool digit_at(std::size_t i) const
    {
        return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    }

    Token number(std::size_t start)
    {
        bool integral = true;
        while (digit_at(pos_))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            integral = false;
            ++pos_;
            while (digit_at(pos_))
                ++pos_;
        }
        if (pos_ - start == 1 && src_[start] == '.')
            throw ParseError(start, {"digit"}, "malformed number at offset " + std::to_string(start));
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            integral = false;
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-'))
                ++p;
            if (!digit_at(p))
                throw ParseError(p, {"exponent digits"},
                                 "malformed exponent at offset " + std::to_string(p));
            while (digit_at(p))
                ++p;
            pos_ = p;
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc() || !std::isfinite(value))
            throw ParseError(start, {"finite number"},
                             "number out of range at offset " + std::to_string(start));
        return {Tok::Number, start, text, value, integral};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

std::string describe(const Token& t)
{
    return t.kind == Tok::End ? std::string("end of input") : "'" + std::string(t.text) + "'";
}

std::shared_ptr<const Node> make(NodeKind kind, std::vector<std::shared_ptr<const Node>> args = {})
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    std::shared_ptr<const Node> parse_all()
    {
        auto e = expr();
        if (cur_.kind != Tok::End)
            fail({"+", "-", "*", "/", "end of input"});
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        std::string msg = "unexpected " + describe(cur_) + " at offset " + std::to_string(cur_.offset) +
                          "; expected one of:";
        for (const auto& e : expected)
            msg += " " + e;
        throw ParseError(cur_.offset, std::move(expected), msg);
    }

    void expect(Tok kind, const char* what)
    {
        if (cur_.kind != kind)
            fail({what});
        advance();
    }

    std::shared_ptr<const Node> expr()
    {
        auto lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const NodeKind k = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            lhs = make(k, {lhs, term()});
        }
        return lhs;
    }

    std::shared_ptr<const Node> term()
    {
        auto lhs = factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            const NodeKind k = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            lhs = make(k, {lhs, factor()});
        }
        return lhs;
    }

    std::shared_ptr<const Node> factor()
    {
        if (cur_.kind == Tok::Minus) {
            advance();
            return make(NodeKind::Neg, {power()});
        }
        return power();
    }

    std::shared_ptr<const Node> power()
    {
        auto base = atom();
        if (cur_.kind != Tok::Caret)
            return base;
        advance();
        if (cur_.kind != Tok::Number || !cur_.integral)
            fail({"nonnegative integer exponent"});
        unsigned n = 0;
        const auto res = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), n);
        if (res.ec != std::errc() || n > kMaxExponent)
            throw ParseError(cur_.offset, {"exponent <= 1024"},
                             "exponent too large at offset " + std::to_string(cur_.offset));
        advance();
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::Pow;
        node->exponent = n;
        node->args = {std::move(base)};
        return node;
    }

    std::shared_ptr<const Node> atom()
    {
        switch (cur_.kind) {
        case Tok::Number: {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Const;
            n->value = cur_.number;
            advance();
            return n;
        }
        case Tok::LParen: {
            advance();
            auto e = expr();
            expect(Tok::RParen, ")");
            return e;
        }
        case Tok::Ident:
            return identifier();
        default:
            fail({"number", "x", "pi", "function", "("});
        }
    }

    std::shared_ptr<const Node> identifier()
    {
        const Token name = cur_;
        advance();
        if (name.text == "x")
            return make(NodeKind::Var);
        if (name.text == "pi")
            return make(NodeKind::Pi);
        const FunctionInfo* fn = find_function(name.text);
        if (!fn)
            throw UnknownIdentifier(name.offset, std::string(name.text));
        expect(Tok::LParen, "(");
        if (fn->kind == NodeKind::Step)
            return step(name, *fn);

        std::vector<std::shared_ptr<const Node>> args{expr()};
        while (cur_.kind == Tok::Comma) {
            advance();
            args.push_back(expr());
        }
        expect(Tok::RParen, ")");
        if (args.size() != fn->arity)
            throw ArityError(name.offset, std::string(fn->name), fn->arity, args.size());
        return make(fn->kind, std::move(args));
    }

    double signed_literal()
    {
        bool negative = false;
        if (cur_.kind == Tok::Minus) {
            negative = true;
            advance();
        }
        if (cur_.kind != Tok::Number)
            fail({"numeric literal"});
        const double v = cur_.number;
        advance();
        return negative ? -v : v;
    }

    std::shared_ptr<const Node> step(const Token& name, const FunctionInfo& fn)
    {
        std::vector<double> values{signed_literal()};
        while (cur_.kind == Tok::Comma) {
            advance();
            values.push_back(signed_literal());
        }
        expect(Tok::RParen, ")");
        if (values.size() != fn.arity)
            throw ArityError(name.offset, std::string(fn.name), fn.arity, values.size());
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Step;
        n->threshold = values[0];
        n->below = values[1];
        n->above = values[2];
        n->args = {make(NodeKind::Var)};
        return n;
    }

    Lexer lexer_;
    Token cur_{Tok::End, 0, {}};
};

// Precedence levels used by the printer.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

int level(const Node& n)
{
    switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub:
        return kSum;
    case NodeKind::Mul:
    case NodeKind::Div:
        return kProduct;
    case NodeKind::Neg:
        return kUnary;
    case NodeKind::Const:
        return std::signbit(n.value) ? kUnary : kAtom;
    case NodeKind::Pow:
        return kPower;
    default:
        return kAtom;
    }
}

void print(const Node& n, int min_level, std::string& out);

void print_binary(const Node& n, const char* op, int lhs_level, int rhs_level, std::string& out)
{
    print(*n.args[0], lhs_level, out);
    out += op;
    print(*n.args[1], rhs_level, out);
}

void print(const Node& n, int min_level, std::string& out)
{
    const bool parens = level(n) < min_level;
    if (parens)
        out += '(';
    switch (n.kind) {
    case NodeKind::Const:
        out += format_number(n.value);
        break;
    case NodeKind::Var:
        out += 'x';
        break;
    case NodeKind::Pi:
        out += "pi";
        break;
    case NodeKind::Neg:
        out += '-';
        print(*n.args[0], kPower, out);
        break;
    case NodeKind::Add:
        print_binary(n, " + ", kSum, kProduct, out);
        break;
    case NodeKind::Sub:
        print_binary(n, " - ", kSum, kProduct, out);
        break;
    case NodeKind::Mul:
        print_binary(n, "*", kProduct, kUnary, out);
        break;
    case NodeKind::Div:
        print_binary(n, "/", kProduct, kUnary, out);
        break;
    case NodeKind::Pow:
        print(*n.args[0], kAtom, out);
        out += '^';
        out += std::to_string(n.exponent);
        break;
    case NodeKind::Step:
        out += "step(" + format_number(n.threshold) + ", " + format_number(n.below) + ", " +
               format_number(n.above) + ")";
        break;
    default: {
        out += info_for(n.kind).name;
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i)
                out += ", ";
            print(*n.args[i], kSum, out);
        }
        out += ')';
    }
    }
    if (parens)
        out += ')';
}

} // namespace

std::string FuncExpr::to_string() const
{
    std::string out;
    print(*root_, kSum, out);
    return out;
}

FuncExpr parse(std::string_view src)
{
    return FuncExpr(Parser(src).parse_all());
}

} // namespace darboux
