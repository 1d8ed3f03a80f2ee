#pragma once

#include <mpfr.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace secantx {

/// Library-wide default significand width (~77 decimal digits).
inline constexpr mpfr_prec_t kDefaultPrecision = 256;

/// Quad-equivalent precision (~35 decimal digits).
inline constexpr mpfr_prec_t kQuadPrecision = 113;

struct DivisionByZero : std::runtime_error {
    DivisionByZero() : std::runtime_error("division by zero") {}
};

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands of one arithmetic operation must share a precision; precision is a
// property of the enclosing computation, never an ambient global.
struct PrecisionMismatch : std::logic_error {
    PrecisionMismatch(mpfr_prec_t a, mpfr_prec_t b)
        : std::logic_error("mixed precisions in one operation: " + std::to_string(a) +
                           " vs " + std::to_string(b)) {}
};

/// Immutable extended-precision real number. Every value carries its own
/// significand width in bits; all operations round to nearest, ties to even.
class Real {
  public:
    Real() { init(kDefaultPrecision); mpfr_set_zero(v_, 1); }

    explicit Real(long value, mpfr_prec_t precision = kDefaultPrecision) {
        init(precision);
        mpfr_set_si(v_, value, MPFR_RNDN);
    }
    explicit Real(int value, mpfr_prec_t precision = kDefaultPrecision)
        : Real(static_cast<long>(value), precision) {}
    explicit Real(double value, mpfr_prec_t precision = kDefaultPrecision) {
        init(precision);
        mpfr_set_d(v_, value, MPFR_RNDN);
    }

    Real(const Real& other) {
        init(other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    Real(Real&& other) noexcept {
        mpfr_init2(v_, other.precision());
        mpfr_swap(v_, other.v_);
    }
    Real& operator=(const Real& other) {
        if (this != &other) {
            mpfr_set_prec(v_, other.precision());
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    /// Parses a decimal literal (optionally with E/e or legacy D/d exponent
    /// marker) at the given precision.
    static Real parse(std::string_view text, mpfr_prec_t precision = kDefaultPrecision) {
        std::string s(text);
        for (char& c : s) {
            if (c == 'D' || c == 'd') c = 'E';
        }
        Real r(tag{}, precision);
        if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
            throw std::invalid_argument("invalid decimal literal: \"" + std::string(text) + "\"");
        }
        return r;
    }

    /// 2^e, exact at any precision.
    static Real pow2(long e, mpfr_prec_t precision = kDefaultPrecision) {
        Real r(tag{}, precision);
        mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    static Real nan(mpfr_prec_t precision = kDefaultPrecision) {
        Real r(tag{}, precision);
        mpfr_set_nan(r.v_);
        return r;
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    /// Deliberate precision change (rounds when narrowing).
    Real with_precision(mpfr_prec_t precision) const {
        Real r(tag{}, precision);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    /// Exponent e with |x| in [2^(e-1), 2^e); only meaningful for finite nonzero x.
    mpfr_exp_t exponent() const { return mpfr_get_exp(v_); }

    friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) {
        if (b.is_zero()) throw DivisionByZero();
        return binary(a, b, mpfr_div);
    }

    friend Real operator-(const Real& a) {
        Real r(tag{}, a.precision());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    // Integer operands adopt the precision of the Real operand.
    friend Real operator+(const Real& a, long b) { return a + Real(b, a.precision()); }
    friend Real operator-(const Real& a, long b) { return a - Real(b, a.precision()); }
    friend Real operator*(const Real& a, long b) { return a * Real(b, a.precision()); }
    friend Real operator/(const Real& a, long b) { return a / Real(b, a.precision()); }
    friend Real operator+(long a, const Real& b) { return Real(a, b.precision()) + b; }
    friend Real operator-(long a, const Real& b) { return Real(a, b.precision()) - b; }
    friend Real operator*(long a, const Real& b) { return Real(a, b.precision()) * b; }
    friend Real operator/(long a, const Real& b) { return Real(a, b.precision()) / b; }

    // Comparisons are exact and never round, so mixed precisions are fine here.
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0 && !a.is_nan(); }
    friend bool operator==(long a, const Real& b) { return b == a; }

    friend Real abs(const Real& a) {
        Real r(tag{}, a.precision());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend Real exp(const Real& a) { return unary_checked(a, mpfr_exp); }
    friend Real sin(const Real& a) { return unary_checked(a, mpfr_sin); }
    friend Real cos(const Real& a) { return unary_checked(a, mpfr_cos); }

    friend Real log(const Real& a) {
        if (!a.is_nan() && a <= Real(0, a.precision()))
            throw DomainError("ln: argument must be positive");
        return unary_checked(a, mpfr_log);
    }

    friend Real sqrt(const Real& a) {
        if (a.is_negative()) throw DomainError("sqrt: argument must be nonnegative");
        return unary_checked(a, mpfr_sqrt);
    }

    friend Real pow(const Real& base, const Real& expo) {
        require_same(base, expo);
        if (base.is_negative() && !expo.is_nan() && !expo.is_integer())
            throw DomainError("pow: negative base requires an integer exponent");
        if (base.is_zero() && expo.is_negative()) throw DivisionByZero();
        return binary(base, expo, mpfr_pow);
    }
    friend Real pow(const Real& base, long e) {
        Real r(tag{}, base.precision());
        if (base.is_zero() && e < 0) throw DivisionByZero();
        mpfr_clear_flags();
        mpfr_pow_si(r.v_, base.v_, e, MPFR_RNDN);
        throw_on_range();
        return r;
    }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

  private:
    struct tag {};
    Real(tag, mpfr_prec_t precision) { init(precision); }

    void init(mpfr_prec_t precision) {
        if (precision < MPFR_PREC_MIN || precision > MPFR_PREC_MAX)
            throw std::invalid_argument("precision out of range: " + std::to_string(precision));
        mpfr_init2(v_, precision);
    }

    static void require_same(const Real& a, const Real& b) {
        if (a.precision() != b.precision()) throw PrecisionMismatch(a.precision(), b.precision());
    }

    static void throw_on_range() {
        if (mpfr_overflow_p() || mpfr_underflow_p()) {
            mpfr_clear_flags();
            throw RangeError("result exceeds exponent range");
        }
    }

    using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

    static Real binary(const Real& a, const Real& b, BinaryFn fn) {
        require_same(a, b);
        Real r(tag{}, a.precision());
        mpfr_clear_flags();
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        throw_on_range();
        return r;
    }

    static Real unary_checked(const Real& a, UnaryFn fn) {
        Real r(tag{}, a.precision());
        mpfr_clear_flags();
        fn(r.v_, a.v_, MPFR_RNDN);
        throw_on_range();
        return r;
    }

    mpfr_t v_;
};

/// Scientific-notation decimal string with `digits` significant digits and an
/// explicit two-digit exponent, e.g. format(Real(2), 6) == "2.00000E+00".
inline std::string format(const Real& x, int digits) {
    if (digits < 1) throw std::invalid_argument("format: digits must be >= 1");
    if (x.is_nan()) return "nan";
    if (x.is_inf()) return x.is_negative() ? "-inf" : "inf";
    char* out = nullptr;
    mpfr_asprintf(&out, "%.*RNe", digits - 1, x.raw());
    std::string s(out);
    mpfr_free_str(out);
    for (char& c : s)
        if (c == 'e') c = 'E';
    return s;
}

/// Digits needed so that format() -> parse() is value-exact at precision p.
inline int roundtrip_digits(mpfr_prec_t p) {
    return static_cast<int>(mpfr_get_str_ndigits(10, p));
}

/// Distance between consecutive representable values at x's magnitude.
inline Real ulp_of(const Real& x) {
    if (x.is_zero() || !x.is_finite())
        return Real::pow2(1 - static_cast<long>(x.precision()), x.precision());
    return Real::pow2(static_cast<long>(x.exponent()) - static_cast<long>(x.precision()),
                      x.precision());
}

/// n! as a Real at the given precision.
inline Real factorial(unsigned long n, mpfr_prec_t precision = kDefaultPrecision) {
    Real r(1, precision);
    mpfr_fac_ui(r.raw(), n, MPFR_RNDN);
    return r;
}

}  // namespace secantx
