#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "rotsym/jet.hpp"

namespace rotsym {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class NamedConstant { Pi, E };

std::string_view func_name(Func f);

/// Closed-form function of the radial variable r, held as an immutable tree.
///
/// Grammar (highest precedence first): literals, `r`, `pi`, `e`, calls to
/// sin cos tan sinh cosh tanh exp log sqrt abs, parentheses; then `^`
/// (right-associative, exponent may carry a leading minus); unary minus;
/// `*` `/`; `+` `-`.
class RadialExpr {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Literal {
        double value;
    };
    struct Variable {};
    struct Constant {
        NamedConstant which;
    };
    struct Negate {
        NodePtr operand;
    };
    struct Binary {
        BinaryOp op;
        NodePtr lhs;
        NodePtr rhs;
    };
    struct Call {
        Func func;
        NodePtr arg;
    };
    struct Node {
        std::variant<Literal, Variable, Constant, Negate, Binary, Call> data;
    };

    /// Throws ParseError with the byte offset of the first offending token.
    static RadialExpr parse(std::string_view text);

    static RadialExpr literal(double v);
    static RadialExpr variable();
    static RadialExpr constant(NamedConstant c);
    static RadialExpr negate(const RadialExpr& a);
    static RadialExpr binary(BinaryOp op, const RadialExpr& a, const RadialExpr& b);
    static RadialExpr call(Func f, const RadialExpr& a);

    /// Value and exact first/second r-derivatives at r.
    /// Throws DomainError outside the real domain and NonFiniteResult on overflow.
    Jet2 eval_jet2(double r) const;
    double eval(double r) const { return eval_jet2(r).v0; }

    /// True when the tree does not reference `r`.
    bool is_constant() const;

    /// Fully parenthesized text that parses back to a structurally identical tree.
    std::string to_string() const;

    const Node& root() const { return *root_; }

    friend bool operator==(const RadialExpr& a, const RadialExpr& b);

private:
    explicit RadialExpr(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

inline RadialExpr parse_expr(std::string_view text) { return RadialExpr::parse(text); }
inline Jet2 eval_jet2(const RadialExpr& e, double r) { return e.eval_jet2(r); }

inline RadialExpr operator+(const RadialExpr& a, const RadialExpr& b) { return RadialExpr::binary(BinaryOp::Add, a, b); }
inline RadialExpr operator-(const RadialExpr& a, const RadialExpr& b) { return RadialExpr::binary(BinaryOp::Sub, a, b); }
inline RadialExpr operator*(const RadialExpr& a, const RadialExpr& b) { return RadialExpr::binary(BinaryOp::Mul, a, b); }
inline RadialExpr operator/(const RadialExpr& a, const RadialExpr& b) { return RadialExpr::binary(BinaryOp::Div, a, b); }

}  // namespace rotsym
