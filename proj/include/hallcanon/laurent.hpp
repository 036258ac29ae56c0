#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hallcanon {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Element of Z[v, v^-1]. Zero coefficients are never stored.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long c);                      // constant
    LaurentPoly(const BigInt& c);             // constant
    static LaurentPoly monomial(int e, const BigInt& c = 1);
    static LaurentPoly v(int e = 1) { return monomial(e); }

    const std::map<int, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int min_exp() const;
    int max_exp() const;
    BigInt coeff(int e) const;
    void set_coeff(int e, const BigInt& c);

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    LaurentPoly operator-() const;
    bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
    bool operator<(const LaurentPoly& o) const { return terms_ < o.terms_; }

    LaurentPoly shifted(int k) const;        // times v^k
    LaurentPoly bar() const;                 // v -> v^-1
    // exact division; nullopt when the quotient is not a Laurent polynomial
    std::optional<LaurentPoly> divide_exact(const LaurentPoly& d) const;
    Rational eval(const Rational& x) const;
    // substitute v^2 = q; every exponent must be even
    BigInt eval_even(const BigInt& q) const;

    std::string str() const;                 // "3*v^-2 + 1 + v^5"
    nlohmann::json to_json() const;          // [[exp, "coeff"], ...]
    static LaurentPoly from_json(const nlohmann::json& j);
    static LaurentPoly parse(const std::string& s);

private:
    std::map<int, BigInt> terms_;
};

LaurentPoly qint(int n);
LaurentPoly qfact(int n);
LaurentPoly qbinom(int m, int n);
// polynomial in q with integer coefficients, q = v^2
LaurentPoly from_qpoly(const std::vector<BigInt>& coeffs);

// v^-1 Z[v^-1]
bool in_vinv_Z(const LaurentPoly& p);
// plus-part used by the truncation algorithm: phi_0 + sum_{i>0} phi_i (v^i + v^-i)
LaurentPoly plus_part(const LaurentPoly& p);

class RationalFn {
public:
    RationalFn() : num_(0), den_(1) {}
    RationalFn(const LaurentPoly& n) : num_(n), den_(1) {}
    RationalFn(const LaurentPoly& n, const LaurentPoly& d);

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFn& operator+=(const RationalFn& o);
    RationalFn& operator-=(const RationalFn& o);
    RationalFn& operator*=(const RationalFn& o);
    friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
    friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
    friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
    RationalFn inverse() const;
    bool operator==(const RationalFn& o) const;
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    RationalFn bar() const { return RationalFn(num_.bar(), den_.bar()); }
    void reduce();
    std::string str() const;
    nlohmann::json to_json() const;

private:
    LaurentPoly num_, den_;
};

// Expansion at v = infinity: coefficients of v^top, v^(top-1), ..., v^-order.
struct SeriesTail {
    int top = 0;
    int order = 0;
    std::vector<Rational> coeffs;
    Rational at(int e) const;
    bool has_positive_terms() const;
};

SeriesTail series_at_infinity(const RationalFn& f, int order);
// f in delta + v^-1 Q[[v^-1]], tested to the given order
bool in_delta_plus_tail(const RationalFn& f, int delta, int order);

std::string rational_str(const Rational& r);

}  // namespace hallcanon
