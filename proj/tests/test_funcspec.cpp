#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "secantx/funcspec.hpp"
#include "test_support.hpp"

using namespace secantx;
using testsupport::agrees_to_digits;

namespace {
Real ev(const std::string& s, const Real& x) { return Expression::parse(s).eval(x); }
}

TEST_CASE("parses and evaluates the flagship expression", "[funcspec]") {
    Expression f = Expression::parse("x^3 - 8");
    CHECK(f.eval(Real(2, 113)) == Real(0, 113));
    CHECK(f.eval(Real(5, 113)) == Real(117, 113));
    CHECK(f.eval(Real(4, 113)) == Real(56, 113));
}

TEST_CASE("syntax errors carry positions", "[funcspec]") {
    try {
        Expression::parse("x +");
        FAIL("expected a parse failure");
    } catch (const ParseError& e) {
        CHECK(e.position == 3);
    }
    CHECK_THROWS_AS(Expression::parse(""), ParseError);
    CHECK_THROWS_AS(Expression::parse("(x"), ParseError);
    CHECK_THROWS_AS(Expression::parse("x 2"), ParseError);   // no implicit multiplication
    CHECK_THROWS_AS(Expression::parse("sin x"), ParseError);
    CHECK_THROWS_AS(Expression::parse("."), ParseError);

    try {
        Expression::parse("x + foo(x)");
        FAIL("expected an unknown-identifier failure");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("grammar corners", "[funcspec]") {
    CHECK_NOTHROW(Expression::parse("2*(x - cos(x))"));
    CHECK(ev("2*(x - cos(x))", Real(0, 113)) == Real(-2, 113));
    CHECK(ev("exp(x) - 1", Real(0, 113)) == Real(0, 113));

    // left associativity of +,-,/ and pow precedence
    CHECK(ev("2 - x - 1", Real(0, 113)) == Real(1, 113));
    CHECK(ev("8/x/2", Real(2, 113)) == Real(2, 113));
    CHECK(ev("2*x^3", Real(2, 113)) == Real(16, 113));

    // '-' binds to the base: -x^2 is (-x)^2 in this grammar
    CHECK(ev("-x^2", Real(3, 113)) == Real(9, 113));
    CHECK(ev("-(x^2)", Real(3, 113)) == Real(-9, 113));

    // '^' is right-associative
    CHECK(ev("x^3^2", Real(2, 113)) == Real(512, 113));
}

TEST_CASE("exponent restrictions", "[funcspec]") {
    CHECK_NOTHROW(Expression::parse("x^3"));
    CHECK_NOTHROW(Expression::parse("x^-2"));
    CHECK_NOTHROW(Expression::parse("x^2.0"));  // integral value
    CHECK_NOTHROW(Expression::parse("2^x"));    // positive literal base
    CHECK_NOTHROW(Expression::parse("exp(x)^x"));
    CHECK_THROWS_AS(Expression::parse("x^2.5"), ParseError);
    CHECK_THROWS_AS(Expression::parse("x^(2)"), ParseError);  // not an integer literal
    CHECK_THROWS_AS(Expression::parse("x^x"), ParseError);

    CHECK(ev("x^-2", Real(4, 113)) == Real(1, 113) / 16);
    CHECK(testsupport::within_ulps(ev("2^x", Real(0.5, 113)), sqrt(Real(2, 113)), 1));
}

TEST_CASE("evaluation propagates numeric domain errors", "[funcspec]") {
    CHECK_THROWS_AS(ev("1/x", Real(0, 113)), DivisionByZero);
    CHECK_THROWS_AS(ev("ln(x)", Real(-1, 113)), DomainError);
    CHECK(testsupport::within_ulps(ev("ln(x)", exp(Real(1, 256))), Real(1, 256), 2));
}

TEST_CASE("printing round-trips through the parser", "[funcspec][property]") {
    std::vector<std::string> sources = {"x^3 - 8",
                                        "x^2 - 2",
                                        "x - cos(x)",
                                        "exp(x) - 1",
                                        "x^3 - x - 1",
                                        "3*x^2",
                                        "-(x^2) + (-x)^3",
                                        "2*(x - cos(x))/((1 + sin(x))*x)",
                                        "x^-3 - 2^x",
                                        "1 + x/2 - x/3*x"};
    for (const auto& s : sources) {
        INFO("source: " << s);
        std::string printed = Expression::parse(s).to_string();
        std::string reprinted = Expression::parse(printed).to_string();
        CHECK(printed == reprinted);
        Real x(0.625, 256);
        CHECK(ev(s, x) == ev(printed, x));
    }
}

TEST_CASE("mangled inputs never crash the parser", "[funcspec][property]") {
    std::mt19937_64 rng(31337);
    const char garble[] = "x+-*/^()cosinexpl0123456789. ";
    int parsed = 0, rejected = 0;
    for (const auto& entry : builtin_corpus()) {
        const std::string& src = entry.expression;
        for (std::size_t cut = 0; cut < src.size(); ++cut) {
            std::string prefix = src.substr(0, cut);
            try {
                Expression::parse(prefix);
                ++parsed;
            } catch (const ParseError&) {
                ++rejected;
            }
        }
        for (int trial = 0; trial < 200; ++trial) {
            std::string mutated = src;
            mutated[rng() % mutated.size()] = garble[rng() % (sizeof(garble) - 1)];
            try {
                Expression::parse(mutated);
                ++parsed;
            } catch (const ParseError&) {
                ++rejected;
            }
        }
    }
    CHECK(parsed + rejected > 1000);
    CHECK(rejected > 0);
}

TEST_CASE("corpus lookups", "[funcspec]") {
    const auto& flagship = corpus_lookup("paper-x3m8");
    CHECK(flagship.expression == "x^3 - 8");
    CHECK(flagship.suggested_k == 2);
    REQUIRE(flagship.suggested_initial_points.size() == 2);
    CHECK(flagship.suggested_initial_points[0] == "5");

    auto problem = flagship.problem(256);
    REQUIRE(problem.known_root.has_value());
    CHECK(*problem.known_root == Real(2, 256));
    CHECK(problem.derivatives_at_root.at(1) == Real(12, 256));
    CHECK(problem.derivatives_at_root.at(2) == Real(12, 256));
    CHECK(problem.derivatives_at_root.at(3) == Real(6, 256));

    auto sqrt2 = corpus_lookup("sqrt2").problem(256);
    CHECK(agrees_to_digits(*sqrt2.known_root,
                           "1.41421356237309504880168872420969807856967187537694807317668", 50));

    CHECK_THROWS_AS(corpus_lookup("does-not-exist"), NotFound);
}

TEST_CASE("corpus roots are high-precision zeros", "[funcspec]") {
    // independently computed references
    CHECK(agrees_to_digits(
        corpus_lookup("dottie").problem(256).known_root.value(),
        "0.73908513321516064165531208767387340401341175890075746496568063577328465488354759459937610693176653",
        70));
    CHECK(agrees_to_digits(
        corpus_lookup("plastic").problem(256).known_root.value(),
        "1.32471795724474602596090885447809734073440405690173336453401505030282785124554759405469934798178728",
        70));

    for (const auto& entry : builtin_corpus()) {
        auto problem = entry.problem(256);
        const Real& alpha = *problem.known_root;
        CHECK(alpha.precision() == 256);
        Real residual = abs(problem.f(alpha));
        Real scale = abs(problem.derivatives_at_root.at(1)) * ulp_of(alpha);
        INFO(entry.name << " residual " << format(residual, 4));
        CHECK(residual <= Real(8, 256) * scale);

        // analytic derivative metadata agrees with the derivative expression
        REQUIRE(problem.fprime);
        Real d1 = problem.fprime(alpha);
        CHECK(testsupport::within_ulps(d1, problem.derivatives_at_root.at(1), 8));
    }
}

TEST_CASE("suggested starts are usable at any precision", "[funcspec]") {
    for (const auto& entry : builtin_corpus()) {
        auto pts113 = entry.initial_points(113);
        auto pts256 = entry.initial_points(256);
        REQUIRE(pts113.size() >= 2);
        CHECK(pts113.size() <= static_cast<std::size_t>(entry.suggested_k) + 1);
        for (std::size_t i = 0; i < pts113.size(); ++i) {
            CHECK(pts113[i].precision() == 113);
            CHECK(pts113[i] == pts256[i]);  // short decimal literals are exact
        }
    }
}
