#include "hallcanon/laurent.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hallcanon {

LaurentPoly::LaurentPoly(long c) {
    if (c != 0) terms_[0] = c;
}

LaurentPoly::LaurentPoly(const BigInt& c) {
    if (c != 0) terms_[0] = c;
}

LaurentPoly LaurentPoly::monomial(int e, const BigInt& c) {
    LaurentPoly p;
    if (c != 0) p.terms_[e] = c;
    return p;
}

int LaurentPoly::min_exp() const {
    if (terms_.empty()) throw std::logic_error("min_exp of zero polynomial");
    return terms_.begin()->first;
}

int LaurentPoly::max_exp() const {
    if (terms_.empty()) throw std::logic_error("max_exp of zero polynomial");
    return terms_.rbegin()->first;
}

BigInt LaurentPoly::coeff(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
}

void LaurentPoly::set_coeff(int e, const BigInt& c) {
    if (c == 0)
        terms_.erase(e);
    else
        terms_[e] = c;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.terms_) {
        auto& slot = terms_[e];
        slot += c;
        if (slot == 0) terms_.erase(e);
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (auto& [e, c] : o.terms_) {
        auto& slot = terms_[e];
        slot -= c;
        if (slot == 0) terms_.erase(e);
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    std::map<int, BigInt> out;
    for (auto& [e1, c1] : terms_)
        for (auto& [e2, c2] : o.terms_) out[e1 + e2] += c1 * c2;
    terms_.clear();
    for (auto& [e, c] : out)
        if (c != 0) terms_.emplace(e, c);
    return *this;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e + k, c);
    return r;
}

LaurentPoly LaurentPoly::bar() const {
    LaurentPoly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(-e, c);
    return r;
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& d) const {
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    if (is_zero()) return LaurentPoly();
    // long division from the top
    LaurentPoly rem = *this, quo;
    const int dtop = d.max_exp(), dlow = d.min_exp();
    const BigInt& lead = d.terms_.rbegin()->second;
    while (!rem.is_zero()) {
        // a nonzero multiple of d spans at least as many exponents as d
        if (rem.max_exp() - rem.min_exp() < dtop - dlow) return std::nullopt;
        int e = rem.max_exp();
        BigInt c = rem.terms_.rbegin()->second;
        if (c % lead != 0) return std::nullopt;
        LaurentPoly t = monomial(e - dtop, c / lead);
        quo += t;
        rem -= t * d;
    }
    return quo;
}

Rational LaurentPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto& [e, c] : terms_) {
        Rational p = 1;
        int k = e < 0 ? -e : e;
        for (int i = 0; i < k; ++i) p *= x;
        acc += e < 0 ? Rational(c) / p : Rational(c) * p;
    }
    return acc;
}

BigInt LaurentPoly::eval_even(const BigInt& q) const {
    BigInt acc = 0;
    for (auto& [e, c] : terms_) {
        if (e % 2 != 0 || e < 0) throw std::domain_error("eval_even needs nonnegative even exponents");
        BigInt p = 1;
        for (int i = 0; i < e / 2; ++i) p *= q;
        acc += c * p;
    }
    return acc;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        BigInt a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        } else if (a < 0) {
            os << "-";
            a = -a;
        }
        first = false;
        if (e == 0) {
            os << a;
            continue;
        }
        if (a != 1) os << a << "*";
        os << "v";
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

nlohmann::json LaurentPoly::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (auto& [e, c] : terms_) j.push_back({e, c.str()});
    return j;
}

LaurentPoly LaurentPoly::from_json(const nlohmann::json& j) {
    LaurentPoly p;
    for (auto& t : j) p += monomial(t.at(0).get<int>(), BigInt(t.at(1).get<std::string>()));
    return p;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
    // accepts the str() form: terms "c", "v", "c*v^e", "v^e" joined by + / -
    LaurentPoly p;
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty() || s == "0") return p;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && !(s[j] == '-' && j > i && s[j - 1] != '^')) ++j;
        std::string term = s.substr(i, j - i);
        BigInt c = 1;
        int e = 0;
        auto vpos = term.find('v');
        if (vpos == std::string::npos) {
            c = BigInt(term);
        } else {
            if (vpos > 0) {
                std::string cs = term.substr(0, vpos);
                if (cs.back() != '*') throw std::invalid_argument("bad term: " + term);
                c = BigInt(cs.substr(0, cs.size() - 1));
            }
            e = 1;
            if (vpos + 1 < term.size()) {
                if (term[vpos + 1] != '^') throw std::invalid_argument("bad term: " + term);
                e = std::stoi(term.substr(vpos + 2));
            }
        }
        p += monomial(e, sign * c);
        i = j;
    }
    return p;
}

LaurentPoly qint(int n) {
    // (v^n - v^-n)/(v - v^-1) = v^{n-1} + v^{n-3} + ... + v^{1-n}
    if (n == 0) return LaurentPoly();
    int a = n < 0 ? -n : n;
    LaurentPoly r;
    for (int k = 0; k < a; ++k) r += LaurentPoly::v(a - 1 - 2 * k);
    return n < 0 ? -r : r;
}

LaurentPoly qfact(int n) {
    if (n < 0) throw std::invalid_argument("qfact of negative integer");
    LaurentPoly r(1);
    for (int k = 1; k <= n; ++k) r *= qint(k);
    return r;
}

LaurentPoly qbinom(int m, int n) {
    if (n < 0 || m < 0 || n > m) throw std::invalid_argument("qbinom needs 0 <= n <= m");
    auto q = qfact(m).divide_exact(qfact(n) * qfact(m - n));
    if (!q) throw std::logic_error("qbinom division not exact");
    return *q;
}

LaurentPoly from_qpoly(const std::vector<BigInt>& coeffs) {
    LaurentPoly r;
    for (std::size_t i = 0; i < coeffs.size(); ++i) r += LaurentPoly::monomial(2 * static_cast<int>(i), coeffs[i]);
    return r;
}

bool in_vinv_Z(const LaurentPoly& p) { return p.is_zero() || p.max_exp() < 0; }

LaurentPoly plus_part(const LaurentPoly& p) {
    LaurentPoly r;
    for (auto& [e, c] : p.terms()) {
        if (e < 0) continue;
        r += LaurentPoly::monomial(e, c);
        if (e > 0) r += LaurentPoly::monomial(-e, c);
    }
    return r;
}

RationalFn::RationalFn(const LaurentPoly& n, const LaurentPoly& d) : num_(n), den_(d) {
    if (d.is_zero()) throw std::domain_error("RationalFn with zero denominator");
    if (num_.is_zero()) den_ = LaurentPoly(1);
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
    }
    if (num_.is_zero()) den_ = LaurentPoly(1);
    return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) {
    RationalFn neg(-o.num_, o.den_);
    return *this += neg;
}

RationalFn& RationalFn::operator*=(const RationalFn& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    if (num_.is_zero()) den_ = LaurentPoly(1);
    return *this;
}

RationalFn RationalFn::inverse() const {
    if (num_.is_zero()) throw std::domain_error("inverse of zero");
    return RationalFn(den_, num_);
}

bool RationalFn::operator==(const RationalFn& o) const { return num_ * o.den_ == o.num_ * den_; }

namespace {
using QVec = std::vector<Rational>;  // ascending coefficients, no trailing zeros

void trim(QVec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// quotient and remainder over Q
std::pair<QVec, QVec> qdivmod(QVec a, const QVec& b) {
    QVec quo(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        std::size_t sh = a.size() - b.size();
        quo[sh] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= c * b[i];
        trim(a);
    }
    trim(quo);
    return {quo, a};
}

QVec qvec_of(const LaurentPoly& p, int& shift) {
    shift = p.min_exp();
    QVec v(p.max_exp() - shift + 1, Rational(0));
    for (auto& [e, c] : p.terms()) v[e - shift] = Rational(c);
    return v;
}
}  // namespace

void RationalFn::reduce() {
    if (num_.is_zero()) {
        den_ = LaurentPoly(1);
        return;
    }
    int sn, sd;
    QVec n = qvec_of(num_, sn), d = qvec_of(den_, sd);
    // monic gcd over Q by Euclid
    QVec a = n, b = d;
    while (!b.empty()) {
        auto r = qdivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    n = qdivmod(n, a).first;
    d = qdivmod(d, a).first;
    // back to coprime integer coefficients
    BigInt l = 1, g = 0;
    for (auto* v : {&n, &d})
        for (auto& c : *v) l = boost::multiprecision::lcm(l, denominator(c));
    for (auto* v : {&n, &d})
        for (auto& c : *v) {
            c *= l;
            g = boost::multiprecision::gcd(g, numerator(c));
        }
    if (d.back() < 0) g = -g;
    LaurentPoly nn, dd;
    for (std::size_t i = 0; i < n.size(); ++i) nn += LaurentPoly::monomial(static_cast<int>(i) + sn - sd, numerator(n[i]) / g);
    for (std::size_t i = 0; i < d.size(); ++i) dd += LaurentPoly::monomial(static_cast<int>(i), numerator(d[i]) / g);
    num_ = nn;
    den_ = dd;
}

std::string RationalFn::str() const {
    if (den_ == LaurentPoly(1)) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

nlohmann::json RationalFn::to_json() const { return {{"num", num_.to_json()}, {"den", den_.to_json()}}; }

Rational SeriesTail::at(int e) const {
    if (e > top || e < -order) return 0;
    return coeffs[static_cast<std::size_t>(top - e)];
}

bool SeriesTail::has_positive_terms() const {
    for (int e = top; e > 0; --e)
        if (at(e) != 0) return true;
    return false;
}

SeriesTail series_at_infinity(const RationalFn& f, int order) {
    SeriesTail s;
    s.order = order;
    if (f.is_zero()) {
        s.top = 0;
        s.coeffs.assign(static_cast<std::size_t>(order + 1), Rational(0));
        return s;
    }
    const LaurentPoly& n = f.num();
    const LaurentPoly& d = f.den();
    int dtop = d.max_exp();
    Rational lead(d.coeff(dtop));
    s.top = std::max(0, n.max_exp() - dtop);
    std::size_t len = static_cast<std::size_t>(s.top + order + 1);
    s.coeffs.assign(len, Rational(0));
    // long division in descending powers: remainder tracked exactly
    std::map<int, Rational> rem;
    for (auto& [e, c] : n.terms()) rem[e] = Rational(c);
    for (std::size_t k = 0; k < len; ++k) {
        int e = s.top - static_cast<int>(k);  // exponent of quotient term
        Rational c = 0;
        auto it = rem.find(e + dtop);
        if (it != rem.end()) c = it->second / lead;
        s.coeffs[k] = c;
        if (c == 0) continue;
        for (auto& [de, dc] : d.terms()) {
            Rational& slot = rem[e + de];
            slot -= c * Rational(dc);
        }
    }
    return s;
}

bool in_delta_plus_tail(const RationalFn& f, int delta, int order) {
    SeriesTail s = series_at_infinity(f, order);
    if (s.has_positive_terms()) return false;
    return s.at(0) == delta;
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace hallcanon
