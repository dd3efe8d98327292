#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace obspace {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldError : Error {
    using Error::Error;
};

// Exact rational, always kept in lowest terms with positive denominator.
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw FieldError("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }
    explicit Rat(const mpz_class& num, const mpz_class& den) : v_(num, den) {
        if (den == 0) throw FieldError("rational with zero denominator");
        v_.canonicalize();
    }

    // Accepts "n" or "n/d" with an optional leading minus, nothing else.
    static Rat parse(std::string_view text);

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }
    double approx() const { return v_.get_d(); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.v_ == 0) throw FieldError("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  private:
    mpq_class v_;
};

inline int sgn(const Rat& x) { return sgn(x.raw()); }
inline Rat abs(const Rat& x) { return sgn(x) < 0 ? -x : x; }
inline std::string to_string(const Rat& x) { return x.raw().get_str(); }
inline double approx(const Rat& x) { return x.approx(); }

inline Rat Rat::parse(std::string_view text) {
    auto bad = [&] { throw FieldError("malformed rational '" + std::string(text) + "'"); };
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++digits;
    if (digits == 0) bad();
    if (i < text.size()) {
        if (text[i] != '/') bad();
        ++i;
        digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++digits;
        if (digits == 0 || i != text.size()) bad();
    }
    mpq_class v;
    if (v.set_str(std::string(text), 10) != 0) bad();
    if (v.get_den() == 0) throw FieldError("rational with zero denominator");
    v.canonicalize();
    return Rat(v);
}

// Element q + s*sqrt(d) of a real quadratic extension of the rationals.
// d is square-free and >= 2; values with s == 0 carry d == 0 and mix freely
// with any extension, otherwise both operands must agree on d.
class Quad {
  public:
    Quad() : q_(0), s_(0), d_(0) {}
    Quad(long n) : q_(n), s_(0), d_(0) {}
    Quad(const Rat& q) : q_(q), s_(0), d_(0) {}
    Quad(const Rat& q, const Rat& s, long d) : q_(q), s_(s), d_(d) {
        if (sgn(s_) == 0) {
            d_ = 0;
        } else {
            check_radicand(d);
        }
    }

    static void check_radicand(long d) {
        if (d < 2) throw FieldError("quadratic radicand must be >= 2");
        for (long f = 2; f * f <= d; ++f)
            if (d % (f * f) == 0) throw FieldError("quadratic radicand must be square-free");
    }

    const Rat& rational_part() const { return q_; }
    const Rat& radical_part() const { return s_; }
    long radicand() const { return d_; }
    double approx() const {
        return q_.approx() + s_.approx() * std::sqrt(static_cast<double>(d_));
    }

    Quad operator-() const { return make(-q_, -s_, d_); }

    friend Quad operator+(const Quad& a, const Quad& b) {
        long d = unify(a, b);
        return make(a.q_ + b.q_, a.s_ + b.s_, d);
    }
    friend Quad operator-(const Quad& a, const Quad& b) {
        long d = unify(a, b);
        return make(a.q_ - b.q_, a.s_ - b.s_, d);
    }
    friend Quad operator*(const Quad& a, const Quad& b) {
        long d = unify(a, b);
        return make(a.q_ * b.q_ + a.s_ * b.s_ * Rat(d),
                    a.q_ * b.s_ + a.s_ * b.q_, d);
    }
    friend Quad operator/(const Quad& a, const Quad& b) {
        long d = unify(a, b);
        Rat norm = b.q_ * b.q_ - b.s_ * b.s_ * Rat(d);
        if (sgn(norm) == 0) throw FieldError("quadratic division by zero");
        return make((a.q_ * b.q_ - a.s_ * b.s_ * Rat(d)) / norm,
                    (a.s_ * b.q_ - a.q_ * b.s_) / norm, d);
    }

    Quad& operator+=(const Quad& o) { return *this = *this + o; }
    Quad& operator-=(const Quad& o) { return *this = *this - o; }
    Quad& operator*=(const Quad& o) { return *this = *this * o; }
    Quad& operator/=(const Quad& o) { return *this = *this / o; }

    // Exact sign: when q and s disagree in sign, the sign of q + s*sqrt(d)
    // is decided by comparing q^2 against s^2*d, never by floating point.
    friend int sgn(const Quad& x) {
        int sq = sgn(x.q_), ss = sgn(x.s_);
        if (ss == 0) return sq;
        if (sq == 0) return ss;
        if (sq == ss) return sq;
        int c = sgn(x.q_ * x.q_ - x.s_ * x.s_ * Rat(x.d_));
        return sq > 0 ? c : -c;
    }

    friend bool operator==(const Quad& a, const Quad& b) { return sgn(a - b) == 0; }
    friend bool operator!=(const Quad& a, const Quad& b) { return sgn(a - b) != 0; }
    friend bool operator<(const Quad& a, const Quad& b) { return sgn(a - b) < 0; }
    friend bool operator<=(const Quad& a, const Quad& b) { return sgn(a - b) <= 0; }
    friend bool operator>(const Quad& a, const Quad& b) { return sgn(a - b) > 0; }
    friend bool operator>=(const Quad& a, const Quad& b) { return sgn(a - b) >= 0; }

  private:
    static Quad make(Rat q, Rat s, long d) {
        Quad r;
        r.q_ = std::move(q);
        r.s_ = std::move(s);
        r.d_ = sgn(r.s_) == 0 ? 0 : d;
        return r;
    }
    static long unify(const Quad& a, const Quad& b) {
        if (a.d_ == 0) return b.d_;
        if (b.d_ == 0 || a.d_ == b.d_) return a.d_;
        throw FieldError("mixed quadratic extensions: sqrt(" + std::to_string(a.d_) +
                         ") vs sqrt(" + std::to_string(b.d_) + ")");
    }

    Rat q_, s_;
    long d_;
};

inline Quad abs(const Quad& x) { return sgn(x) < 0 ? -x : x; }
inline double approx(const Quad& x) { return x.approx(); }

inline std::string to_string(const Quad& x) {
    if (sgn(x.radical_part()) == 0) return to_string(x.rational_part());
    std::string out = to_string(x.rational_part());
    out += sgn(x.radical_part()) < 0 ? '-' : '+';
    out += to_string(abs(x.radical_part()));
    out += " r";
    return out;
}

// Double tagged with a comparison tolerance: |x| <= tolerance() counts as
// zero for sign tests, equality and pivot admissibility.
class Fl {
  public:
    Fl() : v_(0) {}
    Fl(double v) : v_(v) {}
    template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
    Fl(I n) : v_(static_cast<double>(n)) {}

    double value() const { return v_; }
    double approx() const { return v_; }

    static double& tolerance() {
        static double tol = 1e-9;
        return tol;
    }

    Fl operator-() const { return Fl(-v_); }
    friend Fl operator+(Fl a, Fl b) { return Fl(a.v_ + b.v_); }
    friend Fl operator-(Fl a, Fl b) { return Fl(a.v_ - b.v_); }
    friend Fl operator*(Fl a, Fl b) { return Fl(a.v_ * b.v_); }
    friend Fl operator/(Fl a, Fl b) { return Fl(a.v_ / b.v_); }
    Fl& operator+=(Fl o) { v_ += o.v_; return *this; }
    Fl& operator-=(Fl o) { v_ -= o.v_; return *this; }
    Fl& operator*=(Fl o) { v_ *= o.v_; return *this; }
    Fl& operator/=(Fl o) { v_ /= o.v_; return *this; }

    friend int sgn(Fl x) {
        if (x.v_ > tolerance()) return 1;
        if (x.v_ < -tolerance()) return -1;
        return 0;
    }
    friend bool operator==(Fl a, Fl b) { return sgn(a - b) == 0; }
    friend bool operator!=(Fl a, Fl b) { return sgn(a - b) != 0; }
    friend bool operator<(Fl a, Fl b) { return sgn(a - b) < 0; }
    friend bool operator<=(Fl a, Fl b) { return sgn(a - b) <= 0; }
    friend bool operator>(Fl a, Fl b) { return sgn(a - b) > 0; }
    friend bool operator>=(Fl a, Fl b) { return sgn(a - b) >= 0; }

  private:
    double v_;
};

inline Fl abs(Fl x) { return Fl(std::fabs(x.value())); }
inline double approx(Fl x) { return x.value(); }
inline std::string to_string(Fl x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x.value());
    return buf;
}

template <class F>
struct field_traits;

template <>
struct field_traits<Rat> {
    static constexpr bool exact = true;
    static const char* name() { return "rational"; }
};

template <>
struct field_traits<Quad> {
    static constexpr bool exact = true;
    static const char* name() { return "quadratic"; }
};

template <>
struct field_traits<Fl> {
    static constexpr bool exact = false;
    static const char* name() { return "float"; }
};

}  // namespace obspace
