#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secantx/iterate.hpp"
#include "secantx/real.hpp"

namespace secantx {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at offset " + std::to_string(pos)), position(pos) {}
};

struct NotFound : std::runtime_error {
    explicit NotFound(std::string_view name)
        : std::runtime_error("unknown corpus entry: \"" + std::string(name) + "\"") {}
};

/// Immutable arithmetic expression in one variable x.
///
/// Grammar:  expr   := term (('+'|'-') term)*
///           term   := factor (('*'|'/') factor)*
///           factor := base ('^' factor)?          (right-associative)
///           base   := number | 'x' | '(' expr ')' | ident '(' expr ')' | '-' base
/// with ident one of exp, ln, sin, cos. A '^' exponent must be an integer
/// literal unless the base is provably positive (a positive literal or exp(...)).
class Expression {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
        Kind kind;
        std::string text;  // literal lexeme, or callee name
        NodePtr a, b;
    };

  public:
    static Expression parse(std::string_view text) {
        Parser p{text, 0};
        NodePtr root = p.parse_expr();
        p.skip_space();
        if (p.pos != text.size()) p.fail("unexpected trailing input");
        return Expression(std::move(root));
    }

    Real eval(const Real& x) const { return eval_node(*root_, x); }

    std::string to_string() const { return print(*root_, 0); }

  private:
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    static Real eval_node(const Node& n, const Real& x) {
        const mpfr_prec_t prec = x.precision();
        switch (n.kind) {
            case Node::Kind::Number: return Real::parse(n.text, prec);
            case Node::Kind::Variable: return x;
            case Node::Kind::Negate: return -eval_node(*n.a, x);
            case Node::Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
            case Node::Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
            case Node::Kind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
            case Node::Kind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
            case Node::Kind::Pow: return pow(eval_node(*n.a, x), eval_node(*n.b, x));
            case Node::Kind::Call: {
                Real arg = eval_node(*n.a, x);
                if (n.text == "exp") return exp(arg);
                if (n.text == "ln") return log(arg);
                if (n.text == "sin") return sin(arg);
                if (n.text == "cos") return cos(arg);
                throw std::logic_error("unreachable callee: " + n.text);
            }
        }
        throw std::logic_error("unreachable node kind");
    }

    // Precedence: 1 add/sub, 2 mul/div, 3 pow, 4 atoms/unary/calls.
    static int precedence(const Node& n) {
        switch (n.kind) {
            case Node::Kind::Add:
            case Node::Kind::Sub: return 1;
            case Node::Kind::Mul:
            case Node::Kind::Div: return 2;
            case Node::Kind::Pow: return 3;
            case Node::Kind::Negate: return 2;  // prints as '-'factor
            default: return 4;
        }
    }

    static std::string wrap(const Node& n, int min_prec) {
        std::string s = print(n, 0);
        if (precedence(n) < min_prec) return "(" + s + ")";
        return s;
    }

    static std::string print(const Node& n, int) {
        switch (n.kind) {
            case Node::Kind::Number: return n.text;
            case Node::Kind::Variable: return "x";
            // '-' applies to a base, which binds tighter than '^'
            case Node::Kind::Negate: return "-" + wrap(*n.a, 4);
            case Node::Kind::Add: return wrap(*n.a, 1) + " + " + wrap(*n.b, 2);
            case Node::Kind::Sub: return wrap(*n.a, 1) + " - " + wrap(*n.b, 2);
            case Node::Kind::Mul: return wrap(*n.a, 2) + "*" + wrap(*n.b, 3);
            case Node::Kind::Div: return wrap(*n.a, 2) + "/" + wrap(*n.b, 3);
            case Node::Kind::Pow: return wrap(*n.a, 4) + "^" + wrap(*n.b, 3);
            case Node::Kind::Call: return n.text + "(" + print(*n.a, 0) + ")";
        }
        return {};
    }

    static bool is_integer_literal(const Node& n) {
        if (n.kind == Node::Kind::Negate) return is_integer_literal(*n.a);
        if (n.kind != Node::Kind::Number) return false;
        return Real::parse(n.text, 64).is_integer();
    }

    static bool provably_positive(const Node& n) {
        if (n.kind == Node::Kind::Number) return !Real::parse(n.text, 64).is_zero();
        if (n.kind == Node::Kind::Call && n.text == "exp") return true;
        return false;
    }

    struct Parser {
        std::string_view s;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

        void skip_space() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        char peek() {
            skip_space();
            return pos < s.size() ? s[pos] : '\0';
        }
        bool consume(char c) {
            if (peek() == c) {
                ++pos;
                return true;
            }
            return false;
        }

        NodePtr parse_expr() {
            NodePtr lhs = parse_term();
            while (true) {
                char c = peek();
                if (c != '+' && c != '-') return lhs;
                ++pos;
                NodePtr rhs = parse_term();
                auto n = std::make_shared<Node>();
                n->kind = (c == '+') ? Node::Kind::Add : Node::Kind::Sub;
                n->a = std::move(lhs);
                n->b = std::move(rhs);
                lhs = std::move(n);
            }
        }

        NodePtr parse_term() {
            NodePtr lhs = parse_factor();
            while (true) {
                char c = peek();
                if (c != '*' && c != '/') return lhs;
                ++pos;
                NodePtr rhs = parse_factor();
                auto n = std::make_shared<Node>();
                n->kind = (c == '*') ? Node::Kind::Mul : Node::Kind::Div;
                n->a = std::move(lhs);
                n->b = std::move(rhs);
                lhs = std::move(n);
            }
        }

        NodePtr parse_factor() {
            NodePtr base = parse_base();
            if (peek() != '^') return base;
            std::size_t caret = pos;
            ++pos;
            NodePtr expo = parse_factor();
            if (!is_integer_literal(*expo) && !provably_positive(*base))
                throw ParseError("non-integer exponent requires a positive base", caret);
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Pow;
            n->a = std::move(base);
            n->b = std::move(expo);
            return n;
        }

        NodePtr parse_base() {
            char c = peek();
            if (c == '\0') fail("unexpected end of input");
            if (c == '-') {
                ++pos;
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Negate;
                n->a = parse_base();
                return n;
            }
            if (c == '(') {
                ++pos;
                NodePtr inner = parse_expr();
                if (!consume(')')) fail("expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
            fail("expected a number, 'x', '(', or a function call");
        }

        NodePtr parse_number() {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
            if (pos == start || (pos == start + 1 && s[start] == '.'))
                throw ParseError("malformed number", start);
            // optional exponent part
            if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
                std::size_t mark = pos;
                ++pos;
                if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
                if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                } else {
                    pos = mark;  // not an exponent; leave for the grammar to reject
                }
            }
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Number;
            n->text = std::string(s.substr(start, pos - start));
            return n;
        }

        NodePtr parse_ident() {
            std::size_t start = pos;
            while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
            std::string name(s.substr(start, pos - start));
            if (name == "x") {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Variable;
                return n;
            }
            if (name == "exp" || name == "ln" || name == "sin" || name == "cos") {
                skip_space();
                if (!consume('(')) fail("expected '(' after function name");
                NodePtr arg = parse_expr();
                if (!consume(')')) fail("expected ')'");
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Call;
                n->text = std::move(name);
                n->a = std::move(arg);
                return n;
            }
            throw ParseError("unknown identifier \"" + name + "\"", start);
        }
    };

    NodePtr root_;
};

inline Real eval(const Expression& e, const Real& x) { return e.eval(x); }

/// Deterministic sign-change refinement of a simple root; used to materialize
/// corpus roots at arbitrary precision. The bracket must satisfy f(lo)f(hi) < 0.
template <typename F>
Real bisect_root(F&& f, const Real& lo_in, const Real& hi_in, mpfr_prec_t precision) {
    const mpfr_prec_t work = precision + 32;
    Real lo = lo_in.with_precision(work);
    Real hi = hi_in.with_precision(work);
    Real flo = f(lo);
    if (flo.is_zero()) return lo.with_precision(precision);
    if (f(hi).is_zero()) return hi.with_precision(precision);
    const bool lo_negative = flo.is_negative();
    const Real width_goal = Real::pow2(-(static_cast<long>(precision) + 8), work);
    while (hi - lo > width_goal * (Real(1, work) + abs(lo))) {
        Real mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        Real fm = f(mid);
        if (fm.is_zero()) return mid.with_precision(precision);
        if (fm.is_negative() == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return ((lo + hi) / 2).with_precision(precision);
}

/// Named test function with analytic metadata.
struct CorpusEntry {
    std::string name;
    std::string expression;
    std::string derivative_expression;  // empty when no analytic derivative is carried
    int suggested_k = 2;
    std::vector<std::string> suggested_initial_points;  // oldest first
    std::function<Real(mpfr_prec_t)> known_root;
    // order -> f^(order)(alpha), closed forms evaluated at the materialized root
    std::function<std::map<int, Real>(const Real& alpha)> derivatives_at_root;

    ProblemSpec problem(mpfr_prec_t precision) const {
        ProblemSpec p;
        p.name = name;
        Expression f = Expression::parse(expression);
        p.f = [f](const Real& x) { return f.eval(x); };
        if (!derivative_expression.empty()) {
            Expression df = Expression::parse(derivative_expression);
            p.fprime = [df](const Real& x) { return df.eval(x); };
        }
        Real alpha = known_root(precision);
        p.known_root = alpha;
        if (derivatives_at_root) p.derivatives_at_root = derivatives_at_root(alpha);
        return p;
    }

    std::vector<Real> initial_points(mpfr_prec_t precision) const {
        std::vector<Real> pts;
        pts.reserve(suggested_initial_points.size());
        for (const auto& s : suggested_initial_points) pts.push_back(Real::parse(s, precision));
        return pts;
    }
};

inline const std::vector<CorpusEntry>& builtin_corpus() {
    static const std::vector<CorpusEntry> corpus = [] {
        std::vector<CorpusEntry> c;

        {
            CorpusEntry e;
            e.name = "paper-x3m8";
            e.expression = "x^3 - 8";
            e.derivative_expression = "3*x^2";
            e.suggested_k = 2;
            e.suggested_initial_points = {"5", "4"};
            e.known_root = [](mpfr_prec_t p) { return Real(2, p); };
            e.derivatives_at_root = [](const Real& a) {
                const mpfr_prec_t p = a.precision();
                return std::map<int, Real>{
                    {1, Real(12, p)}, {2, Real(12, p)}, {3, Real(6, p)}, {4, Real(0, p)}};
            };
            c.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "sqrt2";
            e.expression = "x^2 - 2";
            e.derivative_expression = "2*x";
            e.suggested_k = 2;
            e.suggested_initial_points = {"1", "2"};
            e.known_root = [](mpfr_prec_t p) { return sqrt(Real(2, p)); };
            e.derivatives_at_root = [](const Real& a) {
                const mpfr_prec_t p = a.precision();
                return std::map<int, Real>{{1, 2 * a}, {2, Real(2, p)}, {3, Real(0, p)}};
            };
            c.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "dottie";
            e.expression = "x - cos(x)";
            e.derivative_expression = "1 + sin(x)";
            e.suggested_k = 2;
            e.suggested_initial_points = {"0.5", "1"};
            e.known_root = [](mpfr_prec_t p) {
                return bisect_root([](const Real& x) { return x - cos(x); }, Real(0, p),
                                   Real(1, p), p);
            };
            e.derivatives_at_root = [](const Real& a) {
                // cos(alpha) = alpha at the fixed point, so sin(alpha) = sqrt(1 - alpha^2).
                const mpfr_prec_t p = a.precision();
                Real s = sqrt(Real(1, p) - a * a);
                return std::map<int, Real>{{1, Real(1, p) + s}, {2, a}, {3, -s}, {4, -a}};
            };
            c.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "expm1";
            e.expression = "exp(x) - 1";
            e.derivative_expression = "exp(x)";
            e.suggested_k = 2;
            e.suggested_initial_points = {"1", "0.5"};
            e.known_root = [](mpfr_prec_t p) { return Real(0, p); };
            e.derivatives_at_root = [](const Real& a) {
                const mpfr_prec_t p = a.precision();
                Real one(1, p);
                return std::map<int, Real>{{1, one}, {2, one}, {3, one}, {4, one}};
            };
            c.push_back(std::move(e));
        }
        {
            CorpusEntry e;
            e.name = "plastic";
            e.expression = "x^3 - x - 1";
            e.derivative_expression = "3*x^2 - 1";
            e.suggested_k = 3;
            e.suggested_initial_points = {"1", "2"};
            e.known_root = [](mpfr_prec_t p) {
                return bisect_root([](const Real& x) { return pow(x, 3L) - x - 1; }, Real(1, p),
                                   Real(2, p), p);
            };
            e.derivatives_at_root = [](const Real& a) {
                const mpfr_prec_t p = a.precision();
                return std::map<int, Real>{
                    {1, 3 * (a * a) - 1}, {2, 6 * a}, {3, Real(6, p)}, {4, Real(0, p)}};
            };
            c.push_back(std::move(e));
        }
        return c;
    }();
    return corpus;
}

inline const CorpusEntry& corpus_lookup(std::string_view name) {
    for (const auto& e : builtin_corpus())
        if (e.name == name) return e;
    throw NotFound(name);
}

}  // namespace secantx
