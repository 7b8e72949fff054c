#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "rotsym/errors.hpp"
#include "rotsym/radial_expr.hpp"

using namespace rotsym;

namespace {

using E = RadialExpr;

void check_jet(const Jet2& j, double v0, double v1, double v2, double tol = 1e-14) {
    CHECK(j.v0 == doctest::Approx(v0).epsilon(tol));
    CHECK(j.v1 == doctest::Approx(v1).epsilon(tol));
    CHECK(j.v2 == doctest::Approx(v2).epsilon(tol));
}

}  // namespace

TEST_CASE("parse builds the grammar tree") {
    CHECK(parse_expr("2+3*r") == E::literal(2) + E::literal(3) * E::variable());
    CHECK(parse_expr("exp(2*r)") == E::call(Func::Exp, E::literal(2) * E::variable()));
    CHECK(parse_expr("  2 + 3 * r ") == parse_expr("2+3*r"));
}

TEST_CASE("precedence and associativity") {
    // ^ binds tighter than unary minus, and is right-associative.
    CHECK(parse_expr("-r^2") == E::negate(E::binary(BinaryOp::Pow, E::variable(), E::literal(2))));
    CHECK(parse_expr("2^3^2") ==
          E::binary(BinaryOp::Pow, E::literal(2), E::binary(BinaryOp::Pow, E::literal(3), E::literal(2))));
    CHECK(parse_expr("1-2-3") == (E::literal(1) - E::literal(2)) - E::literal(3));
    CHECK(parse_expr("8/4/2") == (E::literal(8) / E::literal(4)) / E::literal(2));
    CHECK(parse_expr("2^-r") == E::binary(BinaryOp::Pow, E::literal(2), E::negate(E::variable())));
    CHECK(parse_expr("2^3^2").eval(0.0) == 512.0);
    CHECK(parse_expr("-2^2").eval(0.0) == -4.0);
    CHECK(parse_expr("pi").eval(0.0) == std::numbers::pi);
    CHECK(parse_expr("e").eval(0.0) == std::numbers::e);
    CHECK(parse_expr("1.5e2").eval(0.0) == 150.0);
    CHECK(parse_expr(".5").eval(0.0) == 0.5);
}

TEST_CASE("malformed input reports the byte offset") {
    auto offset_of = [](const char* text) -> std::size_t {
        try {
            parse_expr(text);
        } catch (const ParseError& e) {
            return e.offset();
        }
        FAIL("no ParseError for " << text);
        return 0;
    };
    CHECK(offset_of("2+*r") == 2);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("foo(r)") == 0);
    CHECK(offset_of("2*x") == 2);
    CHECK(offset_of("sin r") == 4);
    CHECK(offset_of("(r+1") == 4);
    CHECK(offset_of("sin(r, 2)") == 5);
    CHECK(offset_of("r r") == 2);
    CHECK(offset_of("2e") == 1);
    CHECK(offset_of("1e999") == 0);
    CHECK(offset_of("r+\xc3\xa9") == 2);
}

TEST_CASE("jets of the worked examples") {
    check_jet(parse_expr("r").eval_jet2(0.3), 0.3, 1, 0);
    check_jet(parse_expr("2+r^2").eval_jet2(1.0), 3, 2, 2);
    check_jet(parse_expr("exp(2*r)").eval_jet2(0.0), 1, 2, 4);
    const double pi = std::numbers::pi;
    const Jet2 j = parse_expr("sin(pi*r)").eval_jet2(0.5);
    CHECK(j.v0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(j.v1) < 1e-15);
    CHECK(j.v2 == doctest::Approx(-pi * pi).epsilon(1e-15));
}

TEST_CASE("powers") {
    check_jet(parse_expr("r^3").eval_jet2(0.0), 0, 0, 0);
    check_jet(parse_expr("r^2").eval_jet2(0.0), 0, 0, 2);
    check_jet(parse_expr("r^1").eval_jet2(0.0), 0, 1, 0);
    check_jet(parse_expr("(r-2)^2").eval_jet2(1.0), 1, -2, 2);
    check_jet(parse_expr("r^-1").eval_jet2(2.0), 0.5, -0.25, 0.25);
    check_jet(parse_expr("r^0.5").eval_jet2(4.0), 2, 0.25, -1.0 / 32.0);
    CHECK_THROWS_AS(parse_expr("r^-1").eval_jet2(0.0), DomainError);
    CHECK_THROWS_AS(parse_expr("r^0.5").eval_jet2(-1.0), DomainError);
    CHECK_THROWS_AS(parse_expr("r^r").eval_jet2(0.0), DomainError);
}

TEST_CASE("domain and finiteness errors") {
    CHECK_THROWS_AS(parse_expr("log(r)").eval_jet2(0.0), DomainError);
    CHECK_THROWS_AS(parse_expr("log(r)").eval_jet2(-1.0), DomainError);
    CHECK_THROWS_AS(parse_expr("sqrt(r)").eval_jet2(-0.5), DomainError);
    CHECK_THROWS_AS(parse_expr("sqrt(r)").eval_jet2(0.0), DomainError);
    CHECK(parse_expr("sqrt(r-r)").eval_jet2(1.0) == Jet2{0, 0, 0});
    CHECK_THROWS_AS(parse_expr("abs(r)").eval_jet2(0.0), DomainError);
    check_jet(parse_expr("abs(r)").eval_jet2(-2.0), 2, -1, 0);
    CHECK_THROWS_AS(parse_expr("1/r").eval_jet2(0.0), DomainError);
    CHECK_THROWS_AS(parse_expr("exp(r)").eval_jet2(1000.0), NonFiniteResult);
}

TEST_CASE("every function matches central finite differences") {
    // Oracle: second-order central differences of the value channel, step 1e-4.
    struct Case {
        const char* text;
        double lo, hi;
    };
    const std::vector<Case> cases{
        {"sin(r)", -3, 3},        {"cos(r)", -3, 3},       {"tan(r)", -1.2, 1.2},   {"sinh(r)", -2, 2},
        {"cosh(r)", -2, 2},       {"tanh(r)", -2, 2},      {"exp(r)", -2, 2},       {"log(r)", 0.2, 3},
        {"sqrt(r)", 0.2, 3},      {"abs(r)", 0.1, 2},      {"abs(r)", -2, -0.1},    {"r^3", -2, 2},
        {"r^2.5", 0.2, 2},        {"2^r", -2, 2},          {"r^r", 0.3, 2},         {"1/(1+r^2)", -2, 2},
        {"exp(sin(r))*log(2+r)", -1, 2}, {"sqrt(1+cosh(r))/tanh(r)", 0.3, 2},
    };
    std::mt19937_64 rng(20261015);
    constexpr double h = 1e-4;
    for (const auto& c : cases) {
        const RadialExpr e = parse_expr(c.text);
        std::uniform_real_distribution<double> dist(c.lo, c.hi);
        for (int k = 0; k < 50; ++k) {
            const double r = dist(rng);
            const Jet2 j = e.eval_jet2(r);
            const double fp = e.eval(r + h), fm = e.eval(r - h), f0 = e.eval(r);
            const double d1 = (fp - fm) / (2 * h);
            const double d2 = (fp - 2 * f0 + fm) / (h * h);
            INFO(c.text << " at r=" << r);
            CHECK(std::fabs(j.v1 - d1) <= 1e-6 * (1 + std::fabs(j.v1)));
            CHECK(std::fabs(j.v2 - d2) <= 1e-4 * (1 + std::fabs(j.v2)));
        }
    }
}

TEST_CASE("composition follows jet arithmetic bitwise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.2, 1.5);
    const RadialExpr a = parse_expr("sin(r)+r^2");
    const RadialExpr b = parse_expr("exp(r/3)");
    for (int k = 0; k < 100; ++k) {
        const double r = dist(rng);
        const Jet2 ja = a.eval_jet2(r), jb = b.eval_jet2(r);
        CHECK((a + b).eval_jet2(r) == ja + jb);
        CHECK((a - b).eval_jet2(r) == ja - jb);
        CHECK((a * b).eval_jet2(r) == ja * jb);
        CHECK((a / b).eval_jet2(r) == ja / jb);
        CHECK(E::call(Func::Cosh, a).eval_jet2(r) == cosh(ja));
        CHECK(E::call(Func::Log, b).eval_jet2(r) == log(jb));
        CHECK(E::binary(BinaryOp::Pow, b, a).eval_jet2(r) == exp(ja * log(jb)));
    }
}

TEST_CASE("serialization round trips structurally") {
    // Random trees from a small generator, parsed, printed, parsed again.
    std::mt19937_64 rng(99);
    const std::vector<std::string> leaves{"r", "pi", "e", "2", "0.1", "1e-07", "3.25", "12345678.9"};
    const std::vector<std::string> funcs{"sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
    const std::vector<std::string> ops{"+", "-", "*", "/", "^"};
    std::function<std::string(int)> gen = [&](int depth) -> std::string {
        const int kind = depth <= 0 ? 0 : static_cast<int>(rng() % 4);
        switch (kind) {
            case 0: return leaves[rng() % leaves.size()];
            case 1: return "-" + gen(depth - 1);
            case 2: return funcs[rng() % funcs.size()] + "(" + gen(depth - 1) + ")";
            default: return "(" + gen(depth - 1) + ops[rng() % ops.size()] + gen(depth - 1) + ")";
        }
    };
    for (int k = 0; k < 300; ++k) {
        const std::string text = gen(5);
        const RadialExpr t = parse_expr(text);
        INFO(text);
        CHECK(parse_expr(t.to_string()) == t);
    }
    CHECK(parse_expr("0.1").to_string() == "0.10000000000000001");
    CHECK(!(parse_expr("r+1") == parse_expr("1+r")));
}

TEST_CASE("constant detection") {
    CHECK(parse_expr("2*e^4").is_constant());
    CHECK(!parse_expr("2*r").is_constant());
}
