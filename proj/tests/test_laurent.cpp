#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hallcanon/laurent.hpp"

using namespace hallcanon;

namespace {
LaurentPoly random_poly(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nterms(0, 5), ex(-6, 6), co(-9, 9);
    LaurentPoly p;
    int k = nterms(rng);
    for (int i = 0; i < k; ++i) p += LaurentPoly::monomial(ex(rng), co(rng));
    return p;
}

// naive expansion of the defining fraction: multiply out (v^n - v^-n) and divide
LaurentPoly qint_by_division(int n) {
    auto num = LaurentPoly::v(n) - LaurentPoly::v(-n);
    auto den = LaurentPoly::v(1) - LaurentPoly::v(-1);
    return *num.divide_exact(den);
}
}  // namespace

TEST_CASE("quantum integers") {
    CHECK(qint(2) == LaurentPoly::v(1) + LaurentPoly::v(-1));
    CHECK(qint(0).is_zero());
    CHECK(qint(3) == LaurentPoly::v(2) + LaurentPoly(1) + LaurentPoly::v(-2));
    for (int n = -7; n <= 7; ++n) {
        CHECK(qint(-n) == -qint(n));
        if (n != 0) CHECK(qint(n) == qint_by_division(n));
    }
    CHECK(qfact(0) == LaurentPoly(1));
}

TEST_CASE("gaussian binomials") {
    CHECK(qbinom(5, 0) == LaurentPoly(1));
    CHECK(qbinom(4, 2).str() == "v^-4 + v^-2 + 2 + v^2 + v^4");
    CHECK_THROWS(qbinom(2, 3));
    CHECK_THROWS(qbinom(-1, 0));
    for (int m = 0; m < 8; ++m)
        for (int n = 1; n <= m; ++n) {
            auto rhs = LaurentPoly::v(n) * qbinom(m, n) + LaurentPoly::v(-m + n - 1) * qbinom(m, n - 1);
            CHECK(qbinom(m + 1, n) == rhs);
        }
    for (int m = 0; m <= 10; ++m)
        for (int n = 0; n <= m; ++n) {
            auto b = qbinom(m, n);
            CHECK(b.bar() == b);
            for (auto& [e, c] : b.terms()) CHECK(c > 0);
        }
}

TEST_CASE("bar involution") {
    CHECK((LaurentPoly::v(2) + LaurentPoly(3)).bar() == LaurentPoly::v(-2) + LaurentPoly(3));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        auto p = random_poly(rng), r = random_poly(rng);
        CHECK(p.bar().bar() == p);
        CHECK((p * r).bar() == p.bar() * r.bar());
    }
    RationalFn f(LaurentPoly::v(2), LaurentPoly::v(2) - LaurentPoly(1));
    CHECK(f.bar().bar() == f);
}

TEST_CASE("ring axioms") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a * b == b * a);
    }
}

TEST_CASE("evaluation homomorphism at v^2 = q") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> ex(0, 4), co(-9, 9);
    auto even_poly = [&] {
        LaurentPoly p;
        for (int k = 0; k < 4; ++k) p += LaurentPoly::monomial(2 * ex(rng), co(rng));
        return p;
    };
    for (int i = 0; i < 200; ++i) {
        auto p = even_poly(), r = even_poly();
        for (int q : {4, 9, 25}) CHECK((p * r).eval_even(q) == p.eval_even(q) * r.eval_even(q));
    }
    // rational evaluation agrees too
    for (int i = 0; i < 100; ++i) {
        auto p = random_poly(rng), r = random_poly(rng);
        Rational x(3, 2);
        CHECK((p * r).eval(x) == p.eval(x) * r.eval(x));
        CHECK((p + r).eval(x) == p.eval(x) + r.eval(x));
    }
}

TEST_CASE("exact division") {
    auto a = qint(3) * qint(5);
    CHECK(*a.divide_exact(qint(5)) == qint(3));
    CHECK_FALSE(LaurentPoly(1).divide_exact(LaurentPoly::v(1) - LaurentPoly(1)).has_value());
    CHECK_FALSE((LaurentPoly::v(2) + LaurentPoly(1)).divide_exact(LaurentPoly(2)).has_value());
}

TEST_CASE("series at infinity") {
    auto one = LaurentPoly(1);
    RationalFn g(one, one - LaurentPoly::v(-2));
    auto s = series_at_infinity(g, 4);
    CHECK(s.at(0) == 1);
    CHECK(s.at(-1) == 0);
    CHECK(s.at(-2) == 1);
    CHECK(s.at(-3) == 0);
    CHECK(s.at(-4) == 1);
    RationalFn h(LaurentPoly::v(2), LaurentPoly::v(2) - one);
    auto t = series_at_infinity(h, 4);
    for (int e = 0; e >= -4; --e) CHECK(t.at(e) == s.at(e));
    RationalFn k(LaurentPoly::v(1), LaurentPoly::v(1) - one);
    CHECK(in_delta_plus_tail(k, 1, 10));
    CHECK_FALSE(in_delta_plus_tail(k, 0, 10));
    RationalFn big(LaurentPoly::v(3), LaurentPoly::v(1) - one);
    CHECK(series_at_infinity(big, 3).has_positive_terms());
    CHECK_FALSE(in_delta_plus_tail(big, 1, 3));
    // 1/(2 - v^-1) has rational coefficients 1/2, 1/4, ...
    RationalFn r(one, LaurentPoly(2) - LaurentPoly::v(-1));
    auto u = series_at_infinity(r, 3);
    CHECK(u.at(0) == Rational(1, 2));
    CHECK(u.at(-3) == Rational(1, 16));
}

TEST_CASE("rational functions") {
    RationalFn a(LaurentPoly::v(2) - LaurentPoly(1), LaurentPoly::v(1) - LaurentPoly(1));
    RationalFn b(LaurentPoly::v(1) + LaurentPoly(1));
    CHECK(a == b);
    a.reduce();
    CHECK(a.den() == LaurentPoly(1));
    CHECK(a.num() == LaurentPoly::v(1) + LaurentPoly(1));
    RationalFn c(LaurentPoly::v(-3) * (LaurentPoly::v(2) + LaurentPoly(1)),
                 LaurentPoly(-2) * (LaurentPoly::v(2) + LaurentPoly(1)) * (LaurentPoly::v(1) - LaurentPoly(3)));
    RationalFn c0 = c;
    c.reduce();
    CHECK(c == c0);
    CHECK(c.den().terms().rbegin()->second > 0);
    CHECK((c * c.inverse()) == RationalFn(LaurentPoly(1)));
    CHECK((c - c).is_zero());
    // common factor with a non-unit leading coefficient
    RationalFn d(LaurentPoly::parse("v^2 + v^4"), LaurentPoly::parse("2 - 4*v^2 + 2*v^4"));
    RationalFn e = d + RationalFn(LaurentPoly::parse("v^-4 + v^-2"), LaurentPoly(3));
    RationalFn e0 = e;
    e.reduce();
    CHECK(e == e0);
    for (int x : {2, 3, 5, 7})
        CHECK(e.num().eval(x) * e0.den().eval(x) == e0.num().eval(x) * e.den().eval(x));
}

TEST_CASE("text and json forms") {
    auto p = LaurentPoly::monomial(-2, 3) + LaurentPoly(1) + LaurentPoly::v(5);
    CHECK(p.str() == "3*v^-2 + 1 + v^5");
    CHECK(LaurentPoly::parse(p.str()) == p);
    CHECK(LaurentPoly::parse("-v^-1 - 2*v + 7") == LaurentPoly::v(-1) * LaurentPoly(-1) + LaurentPoly::monomial(1, -2) + LaurentPoly(7));
    CHECK(LaurentPoly::from_json(p.to_json()) == p);
    CHECK(p.to_json().dump() == R"([[-2,"3"],[0,"1"],[5,"1"]])");
}
