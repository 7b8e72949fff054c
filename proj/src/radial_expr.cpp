#include "rotsym/radial_expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 10> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

using Node = RadialExpr::Node;
using NodePtr = RadialExpr::NodePtr;

NodePtr make(auto alt) { return std::make_shared<const Node>(Node{std::move(alt)}); }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse_all() {
        NodePtr root = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(pos_, "operator or end of input");
        }
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                NodePtr rhs = term();
                lhs = make(RadialExpr::Binary{BinaryOp::Add, lhs, std::move(rhs)});
            } else if (accept('-')) {
                NodePtr rhs = term();
                lhs = make(RadialExpr::Binary{BinaryOp::Sub, lhs, std::move(rhs)});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                NodePtr rhs = unary();
                lhs = make(RadialExpr::Binary{BinaryOp::Mul, lhs, std::move(rhs)});
            } else if (accept('/')) {
                NodePtr rhs = unary();
                lhs = make(RadialExpr::Binary{BinaryOp::Div, lhs, std::move(rhs)});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            return make(RadialExpr::Negate{unary()});
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) {
            NodePtr rhs = unary();
            return make(RadialExpr::Binary{BinaryOp::Pow, base, std::move(rhs)});
        }
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError(pos_, "operand");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) {
                throw ParseError(pos_, "')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        throw ParseError(pos_, "operand");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            throw ParseError(start, "digit");
        }
        // Exponent only when a digit follows, so "2e" stays a number times nothing (an error later).
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                ++look;
            }
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw ParseError(start, "finite decimal literal");
        }
        return make(RadialExpr::Literal{value});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "r") {
            return make(RadialExpr::Variable{});
        }
        if (name == "pi") {
            return make(RadialExpr::Constant{NamedConstant::Pi});
        }
        if (name == "e") {
            return make(RadialExpr::Constant{NamedConstant::E});
        }
        for (const auto& [fname, f] : kFunctions) {
            if (name == fname) {
                if (!accept('(')) {
                    throw ParseError(pos_, "'(' after function name");
                }
                NodePtr arg = expr();
                if (!accept(')')) {
                    throw ParseError(pos_, "')' (functions take exactly one argument)");
                }
                return make(RadialExpr::Call{f, arg});
            }
        }
        throw ParseError(start, "variable r, constant pi or e, or a known function");
    }
};

Jet2 checked(const Jet2& j, const char* what) {
    if (!j.finite()) {
        throw NonFiniteResult(std::string("non-finite result in ") + what);
    }
    return j;
}

Jet2 eval_call(Func f, const Jet2& u) {
    switch (f) {
        case Func::Sin: return sin(u);
        case Func::Cos: return cos(u);
        case Func::Tan: return checked(tan(u), "tan");
        case Func::Sinh: return checked(sinh(u), "sinh");
        case Func::Cosh: return checked(cosh(u), "cosh");
        case Func::Tanh: return tanh(u);
        case Func::Exp: return checked(exp(u), "exp");
        case Func::Log:
            if (!(u.v0 > 0.0)) {
                throw DomainError("log of nonpositive value");
            }
            return log(u);
        case Func::Sqrt:
            if (u.v0 < 0.0) {
                throw DomainError("sqrt of negative value");
            }
            if (u.v0 == 0.0) {
                if (u.v1 == 0.0 && u.v2 == 0.0) {
                    return Jet2{};
                }
                throw DomainError("sqrt derivative undefined at zero argument");
            }
            return sqrt(u);
        case Func::Abs:
            if (u.v0 == 0.0) {
                throw DomainError("abs is not twice differentiable at zero");
            }
            return u.v0 > 0.0 ? u : -u;
    }
    throw DomainError("unknown function");
}

bool is_integral_constant(const Jet2& b) {
    return b.v1 == 0.0 && b.v2 == 0.0 && std::trunc(b.v0) == b.v0 && std::fabs(b.v0) <= 9007199254740992.0;
}

Jet2 eval_pow(const Jet2& a, const Jet2& b) {
    if (is_integral_constant(b)) {
        const double n = b.v0;
        if (n == 0.0) {
            return Jet2::constant(1.0);
        }
        if (a.v0 == 0.0 && n < 0.0) {
            throw DomainError("negative power of zero");
        }
        const double d0 = std::pow(a.v0, n);
        const double d1 = n * std::pow(a.v0, n - 1.0);
        const double d2 = (n == 1.0) ? 0.0 : n * (n - 1.0) * std::pow(a.v0, n - 2.0);
        return compose(a, d0, d1, d2);
    }
    if (!(a.v0 > 0.0)) {
        throw DomainError("non-integer power requires a positive base");
    }
    return exp(b * log(a));
}

Jet2 eval_node(const Node& node, double r) {
    return std::visit(
        [r](const auto& n) -> Jet2 {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RadialExpr::Literal>) {
                return Jet2::constant(n.value);
            } else if constexpr (std::is_same_v<T, RadialExpr::Variable>) {
                return Jet2::variable(r);
            } else if constexpr (std::is_same_v<T, RadialExpr::Constant>) {
                return Jet2::constant(n.which == NamedConstant::Pi ? std::numbers::pi : std::numbers::e);
            } else if constexpr (std::is_same_v<T, RadialExpr::Negate>) {
                return -eval_node(*n.operand, r);
            } else if constexpr (std::is_same_v<T, RadialExpr::Binary>) {
                const Jet2 a = eval_node(*n.lhs, r);
                const Jet2 b = eval_node(*n.rhs, r);
                switch (n.op) {
                    case BinaryOp::Add: return checked(a + b, "addition");
                    case BinaryOp::Sub: return checked(a - b, "subtraction");
                    case BinaryOp::Mul: return checked(a * b, "multiplication");
                    case BinaryOp::Div:
                        if (b.v0 == 0.0) {
                            throw DomainError("division by zero");
                        }
                        return checked(a / b, "division");
                    case BinaryOp::Pow: return checked(eval_pow(a, b), "power");
                }
                throw DomainError("unknown operator");
            } else {
                return eval_call(n.func, eval_node(*n.arg, r));
            }
        },
        node.data);
}

bool node_equal(const Node& a, const Node& b) {
    if (a.data.index() != b.data.index()) {
        return false;
    }
    return std::visit(
        [&b](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.data);
            if constexpr (std::is_same_v<T, RadialExpr::Literal>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, RadialExpr::Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, RadialExpr::Constant>) {
                return x.which == y.which;
            } else if constexpr (std::is_same_v<T, RadialExpr::Negate>) {
                return node_equal(*x.operand, *y.operand);
            } else if constexpr (std::is_same_v<T, RadialExpr::Binary>) {
                return x.op == y.op && node_equal(*x.lhs, *y.lhs) && node_equal(*x.rhs, *y.rhs);
            } else {
                return x.func == y.func && node_equal(*x.arg, *y.arg);
            }
        },
        a.data);
}

bool node_constant(const Node& node) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RadialExpr::Variable>) {
                return false;
            } else if constexpr (std::is_same_v<T, RadialExpr::Negate>) {
                return node_constant(*n.operand);
            } else if constexpr (std::is_same_v<T, RadialExpr::Binary>) {
                return node_constant(*n.lhs) && node_constant(*n.rhs);
            } else if constexpr (std::is_same_v<T, RadialExpr::Call>) {
                return node_constant(*n.arg);
            } else {
                return true;
            }
        },
        node.data);
}

void write_node(const Node& node, std::string& out) {
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RadialExpr::Literal>) {
                char buf[40];
                if (n.value < 0.0 || std::signbit(n.value)) {
                    std::snprintf(buf, sizeof buf, "(-%.17g)", -n.value);
                } else {
                    std::snprintf(buf, sizeof buf, "%.17g", n.value);
                }
                out += buf;
            } else if constexpr (std::is_same_v<T, RadialExpr::Variable>) {
                out += 'r';
            } else if constexpr (std::is_same_v<T, RadialExpr::Constant>) {
                out += (n.which == NamedConstant::Pi) ? "pi" : "e";
            } else if constexpr (std::is_same_v<T, RadialExpr::Negate>) {
                out += "(-";
                write_node(*n.operand, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, RadialExpr::Binary>) {
                static constexpr char ops[] = {'+', '-', '*', '/', '^'};
                out += '(';
                write_node(*n.lhs, out);
                out += ops[static_cast<int>(n.op)];
                write_node(*n.rhs, out);
                out += ')';
            } else {
                out += func_name(n.func);
                out += '(';
                write_node(*n.arg, out);
                out += ')';
            }
        },
        node.data);
}

}  // namespace

std::string_view func_name(Func f) {
    for (const auto& [name, g] : kFunctions) {
        if (g == f) {
            return name;
        }
    }
    return "?";
}

RadialExpr RadialExpr::parse(std::string_view text) { return RadialExpr(Parser(text).parse_all()); }

RadialExpr RadialExpr::literal(double v) { return RadialExpr(make(Literal{v})); }
RadialExpr RadialExpr::variable() { return RadialExpr(make(Variable{})); }
RadialExpr RadialExpr::constant(NamedConstant c) { return RadialExpr(make(Constant{c})); }
RadialExpr RadialExpr::negate(const RadialExpr& a) { return RadialExpr(make(Negate{a.root_})); }
RadialExpr RadialExpr::binary(BinaryOp op, const RadialExpr& a, const RadialExpr& b) {
    return RadialExpr(make(Binary{op, a.root_, b.root_}));
}
RadialExpr RadialExpr::call(Func f, const RadialExpr& a) { return RadialExpr(make(Call{f, a.root_})); }

Jet2 RadialExpr::eval_jet2(double r) const { return checked(eval_node(*root_, r), "expression"); }

bool RadialExpr::is_constant() const { return node_constant(*root_); }

std::string RadialExpr::to_string() const {
    std::string out;
    write_node(*root_, out);
    return out;
}

bool operator==(const RadialExpr& a, const RadialExpr& b) { return node_equal(*a.root_, *b.root_); }

}  // namespace rotsym
