#include "hallcanon/canonical.hpp"

#include <sstream>
#include <stdexcept>

#include "hallcanon/parallel.hpp"

namespace hallcanon {

using nlohmann::json;

namespace {
// negative-exponent part
LaurentPoly minus_part(const LaurentPoly& p) {
    LaurentPoly r;
    for (auto& [e, c] : p.terms())
        if (e < 0) r.set_coeff(e, c);
    return r;
}

std::string latex_poly(const LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        auto [e, c] = *it;
        BigInt a = c < 0 ? BigInt(-c) : c;
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (e == 0) {
            os << a;
        } else {
            if (a != 1) os << a;
            os << "v";
            if (e != 1) os << "^{" << e << "}";
        }
        first = false;
    }
    return os.str();
}
}  // namespace

LMatrix bar_matrix(const PbwData& d) { return mat_mul(mat_bar(d.a_inv), d.a); }

LMatrix lusztig_solve(const LMatrix& zeta) {
    std::size_t n = zeta.size();
    LMatrix g = mat_identity(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b-- > 0;) {
            // g_ab - bar(g_ab) = sum_{b < c <= a} bar(g_ac) zeta_cb
            LaurentPoly r;
            for (std::size_t c = b + 1; c <= a; ++c)
                if (!g[a][c].is_zero() && !zeta[c][b].is_zero()) r += g[a][c].bar() * zeta[c][b];
            if (r.bar() != -r) throw std::logic_error("bar recursion: right-hand side " + r.str() + " is not antisymmetric");
            g[a][b] = minus_part(r);
        }
    return g;
}

std::vector<LaurentPoly> truncate_monomial(const PbwData& d, std::size_t a) {
    // E coordinates of a monomial are its aperiodic N columns, i.e. rows of A
    return truncate_from(d, a, d.a.at(a));
}

std::vector<LaurentPoly> truncate_from(const PbwData& d, std::size_t a, std::vector<LaurentPoly> x) {
    std::size_t na = d.size();
    if (x.size() != na || x[a] != LaurentPoly(1)) throw std::invalid_argument("truncation start must have coefficient 1 at its index");
    for (std::size_t b = a; b-- > 0;) {
        if (in_vinv_Z(x[b])) continue;
        LaurentPoly p = plus_part(x[b]);
        for (std::size_t k = 0; k < na; ++k)
            if (!d.a[b][k].is_zero()) x[k] -= p * d.a[b][k];
        if (!in_vinv_Z(x[b])) throw std::logic_error("truncation did not clear position " + std::to_string(b));
    }
    return x;
}

CanonicalData canonical_basis(const AlgebraContext& ctx, const DimVector& nu, int extension) {
    CanonicalData out;
    out.pbw = pbw_basis(ctx, nu, extension);
    LMatrix b = bar_matrix(out.pbw);
    out.zeta = b;
    for (std::size_t i = 0; i < b.size(); ++i) out.zeta[i][i] -= 1;
    out.g = lusztig_solve(out.zeta);
    out.c_over_n = mat_mul(out.g, out.pbw.e_over_n);
    return out;
}

bool VerifyReport::ok() const {
    return size_matches_dim_f && bar_invariant && unitriangular && almost_orthogonal && truncation_agrees && extension_agrees;
}

json VerifyReport::to_json() const {
    return json{{"size_matches_dim_f", size_matches_dim_f}, {"bar_invariant", bar_invariant},
                {"unitriangular", unitriangular},           {"almost_orthogonal", almost_orthogonal},
                {"truncation_agrees", truncation_agrees},   {"extension_agrees", extension_agrees},
                {"failures", failures},                     {"ok", ok()}};
}

VerifyReport verify(const AlgebraContext& ctx, const CanonicalData& data, const VerifyOptions& opt) {
    VerifyReport r;
    const PbwData& d = data.pbw;
    const Quiver& q = *ctx.quiver;
    std::size_t n = data.size();
    auto fail = [&](const std::string& s) { r.failures.push_back(s); };

    r.size_matches_dim_f = BigInt(n) == dim_f(q, d.nu);
    if (!r.size_matches_dim_f) fail("|G^a| = " + std::to_string(n) + " but dim f = " + dim_f(q, d.nu).str());

    LMatrix over_m = mat_mul(data.g, d.a_inv);
    r.bar_invariant = mat_bar(over_m) == over_m;
    if (!r.bar_invariant) fail("C is not bar-invariant over monomials");

    r.unitriangular = data.g.size() == n;
    for (std::size_t a = 0; a < n && r.unitriangular; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const LaurentPoly& x = data.g[a][b];
            bool good = a == b ? x == LaurentPoly(1) : (b < a ? in_vinv_Z(x) : x.is_zero());
            if (!good) {
                r.unitriangular = false;
                fail("g[" + std::to_string(a) + "][" + std::to_string(b) + "] = " + x.str());
                break;
            }
        }

    std::vector<AlgebraElement> cs(n);
    for (std::size_t i = 0; i < n; ++i) cs[i] = data.c(i);
    std::vector<char> orth(n * n, 0);
    AlgebraContext inner = ctx;
    inner.threads = 1;
    parallel_for(n * n, ctx.threads, [&](std::size_t k) {
        std::size_t a = k / n, b = k % n;
        if (b < a) return;  // symmetric
        orth[k] = in_delta_plus_tail(green_form(inner, cs[a], cs[b]), a == b, opt.series_order);
    });
    r.almost_orthogonal = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            if (!orth[a * n + b]) {
                r.almost_orthogonal = false;
                fail("(C_" + d.order.aperiodic[a].str() + ", C_" + d.order.aperiodic[b].str() + ") not almost orthogonal");
            }

    r.truncation_agrees = true;
    for (std::size_t a = 0; a < n; ++a)
        if (truncate_monomial(d, a) != data.g[a]) {
            r.truncation_agrees = false;
            fail("truncation differs at " + d.order.aperiodic[a].str());
        }

    if (opt.second_extension) {
        CanonicalData other = canonical_basis(ctx, d.nu, 1 - d.order.extension);
        r.extension_agrees = other.size() == n;
        for (std::size_t a = 0; a < n && r.extension_agrees; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (other.pbw.order.aperiodic[b] == d.order.aperiodic[a] && !(other.c(b) == cs[a])) {
                    r.extension_agrees = false;
                    fail("second linear extension differs at " + d.order.aperiodic[a].str());
                }
    } else {
        r.extension_agrees = true;
    }
    return r;
}

json bundle_json(const Quiver& q, const CanonicalData& data, const VerifyReport& report) {
    const PbwData& d = data.pbw;
    json idx = json::array();
    for (auto& c : d.order.all) idx.push_back(json{{"symbol", c.str()}, {"index", c.to_json()}, {"aperiodic", c.aperiodic()}});
    json aper = json::array(), words = json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        aper.push_back(d.order.aperiodic[i].str());
        json w = json::array();
        for (auto& s : d.words[i]) w.push_back({s.vertex, s.amount});
        words.push_back(w);
    }
    return json{{"quiver", q.to_json()},
                {"dim", d.nu},
                {"indices", idx},
                {"aperiodic", aper},
                {"words", words},
                {"E_over_N", mat_json(d.e_over_n)},
                {"monomial_over_E", mat_json(d.a)},
                {"zeta", mat_json(data.zeta)},
                {"g", mat_json(data.g)},
                {"C_over_E", mat_json(data.g)},
                {"C_over_N", mat_json(data.c_over_n)},
                {"certificates", report.to_json()}};
}

std::string latex_table(const CanonicalData& data) {
    const PbwData& d = data.pbw;
    std::ostringstream os;
    os << "\\begin{tabular}{ll}\n";
    for (std::size_t a = 0; a < data.size(); ++a) {
        os << "$C_{" << d.order.aperiodic[a].str() << "}$ & $";
        bool first = true;
        for (std::size_t j = 0; j < d.order.all.size(); ++j) {
            const LaurentPoly& x = data.c_over_n[a][j];
            if (x.is_zero()) continue;
            os << (first ? "" : " + ");
            if (x != LaurentPoly(1)) os << "(" << latex_poly(x) << ")";
            os << "N_{" << d.order.all[j].str() << "}";
            first = false;
        }
        os << "$ \\\\\n";
    }
    os << "\\end{tabular}\n";
    return os.str();
}

}  // namespace hallcanon
