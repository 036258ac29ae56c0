// one line per acceptance criterion; exit status is the number of failures
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "hallcanon/canonical.hpp"

using namespace hallcanon;

namespace {

AlgebraContext ctx_for(const Quiver& q, int threads = 1) {
    AlgebraContext c;
    c.quiver = std::make_shared<Quiver>(q);
    c.threads = threads;
    return c;
}

AlgebraElement single(const NIndex& k, const LaurentPoly& c = 1) {
    AlgebraElement x;
    x.add(k, c);
    return x;
}

std::vector<DimVector> box(int n, int tot) {
    std::vector<DimVector> out;
    std::function<void(DimVector)> go = [&](DimVector cur) {
        if (static_cast<int>(cur.size()) == n) {
            if (total(cur) > 0) out.push_back(cur);
            return;
        }
        for (int a = 0; a + total(cur) <= tot; ++a) {
            auto c = cur;
            c.push_back(a);
            go(c);
        }
    };
    go({});
    return out;
}

FieldScalar coeff_of(const FieldElement& x, const FqModule& m, int q) {
    auto it = x.find(class_key(m));
    return it == x.end() ? FieldScalar(q, 0) : it->second.coeff;
}

bool same(const FieldElement& a, const FieldElement& b) {
    for (auto& [k, t] : a) {
        auto it = b.find(k);
        if (it == b.end() || it->second.coeff != t.coeff) return false;
    }
    for (auto& [k, t] : b)
        if (!a.count(k)) return false;
    return true;
}

std::set<std::string> canonical_set(const AlgebraContext& ctx, const DimVector& nu) {
    auto cb = canonical_basis(ctx, nu);
    std::set<std::string> s;
    for (std::size_t k = 0; k < cb.size(); ++k) s.insert(cb.c(k).str());
    return s;
}

bool two_monomials(const AlgebraContext& ctx, const DimVector& nu) {
    return canonical_set(ctx, nu) ==
           std::set<std::string>{monomial(ctx, Word{{0, 1}, {1, 1}}).str(), monomial(ctx, Word{{1, 1}, {0, 1}}).str()};
}

// ---------------------------------------------------------------- criteria

bool crit_serre(std::ostream& why) {
    int classes = 0;
    for (auto& q : {Quiver::kronecker(), Quiver::cyclic(2), Quiver::cyclic(3)}) {
        auto ctx = ctx_for(q);
        for (int i = 0; i < q.n(); ++i)
            for (int j = 0; j < q.n(); ++j) {
                if (i == j) continue;
                for (auto& [t, c] : serre_generic(ctx, i, j))
                    if (!c.is_zero()) {
                        why << q.id() << " (" << i << "," << j << ") on " << t << ": " << c.str();
                        return false;
                    }
                for (int fq : {2, 3}) classes += serre_field_check(ctx.quiver, i, j, Field::get(fq));
            }
    }
    why << "generic coefficients zero; " << classes << " classes checked over GF(2), GF(3)";
    return true;
}

bool crit_kostka(std::ostream& why) {
    auto q = std::make_shared<Quiver>(Quiver::kronecker());
    int checked = 0;
    for (int fq : {5, 7}) {
        const Field& f = Field::get(fq);
        for (int m = 1; m <= 2; ++m)
            for (auto& lam : partitions_of(m)) {
                auto s = realize_S(q, lam, f);
                for (auto& mu : partitions_of(m)) {
                    auto r = realize(q, target_type(NIndex{}, mu), f);
                    FieldScalar br = coeff_of(s, r, fq);
                    FieldScalar k(fq, Rational(kostka(lam, mu)));
                    // coefficient on u_M (the formula), and on <M> = v^{end - dim} u_M
                    FieldScalar on_u = br * FieldScalar::vpow(fq, end_dim(r) - 2 * m);
                    if (on_u != FieldScalar::vpow(fq, -2 * m) * k || br != FieldScalar::vpow(fq, -m) * k) {
                        why << "q=" << fq << " lambda=" << lam.str() << " mu=" << mu.str() << ": " << on_u.str();
                        return false;
                    }
                    ++checked;
                }
            }
    }
    why << checked << " (lambda, mu, q) cases; u_M coefficient v^{-2|lambda|} K, <M> coefficient v^{-|lambda|} K";
    return true;
}

bool crit_character(std::ostream& why) {
    auto q = std::make_shared<Quiver>(Quiver::kronecker());
    // chi^lambda at cycle type (2) and (1,1)
    std::map<std::pair<Partition, Partition>, int> t{{{Partition{2}, Partition{2}}, 1},
                                                     {{Partition{1, 1}, Partition{2}}, -1},
                                                     {{Partition{2}, Partition{1, 1}}, 1},
                                                     {{Partition{1, 1}, Partition{1, 1}}, 1}};
    for (int fq : {5, 7}) {
        const Field& f = Field::get(fq);
        FqModule deg2 = realize(q, ModuleType::kron({}, {}, {{0, 2, Partition{1}}}), f);
        FqModule split = realize(q, target_type(NIndex{}, Partition{1, 1}), f);
        for (auto& lam : partitions_of(2)) {
            auto s = realize_S(q, lam, f);
            for (auto& [mu, r] : std::vector<std::pair<Partition, FqModule>>{{Partition{2}, deg2}, {Partition{1, 1}, split}}) {
                FieldScalar on_u = coeff_of(s, r, fq) * FieldScalar::vpow(fq, end_dim(r) - 4);
                FieldScalar want = FieldScalar::vpow(fq, -4) * FieldScalar(fq, t.at({lam, mu}));
                if (on_u != want) {
                    why << "q=" << fq << " lambda=" << lam.str() << " mu=" << mu.str() << ": " << on_u.str() << " want " << want.str();
                    return false;
                }
            }
        }
    }
    why << "t_(2)((2))=1, t_(1,1)((2))=-1, t_lambda((1,1))=1 at q=5,7";
    return true;
}

bool crit_lemma_m1(std::ostream& why) {
    Quiver kq = Quiver::kronecker();
    auto ctx = ctx_for(kq);
    NIndex split{{{0, 1}}, {{1, 1}}, {}, {}}, h1{{}, {}, {}, Partition{1}};
    auto p = mul(ctx, single(simple_index(kq, 0)), single(simple_index(kq, 1)));
    if (!(p == single(h1) + single(split, LaurentPoly::v(-2)))) {
        why << "generic product " << p.str();
        return false;
    }
    // and over GF(5), with H_1 realized directly
    const Field& f = Field::get(5);
    auto fp = field_product(field_N(ctx.quiver, simple_index(kq, 0), f), field_N(ctx.quiver, simple_index(kq, 1), f));
    FieldElement want = realize_H(ctx.quiver, 1, f);
    for (auto& [k, t] : field_N(ctx.quiver, split, f)) field_add(want, t.module, t.coeff * FieldScalar::vpow(5, -2));
    if (!same(fp, want)) {
        why << "field-level product differs at q=5";
        return false;
    }
    why << "<S_0>*<S_1> = " << p.str();
    return true;
}

bool crit_hall_polys(std::ostream& why) {
    std::mt19937 rng(20240501);
    PolyCache mem("");
    FitConfig cfg;
    int tested = 0, nonzero = 0;
    for (auto& qq : {Quiver::cyclic(2), Quiver::cyclic(3), Quiver::jordan()}) {
        auto q = std::make_shared<Quiver>(qq);
        int n = qq.n();
        std::vector<Multisegment> pool;
        for (auto& d : box(n, 2))
            for (auto& m : enumerate_multisegments(n, false, d)) pool.push_back(m);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int trial = 0; trial < 8; ++trial) {
            auto m = pool[pick(rng)], nn = pool[pick(rng)];
            auto ls = enumerate_multisegments(n, false, m.dim() + nn.dim());
            if (trial % 2 == 0) {  // half the draws from the support
                std::vector<Multisegment> sup;
                for (auto& l : ls)
                    if (hall_count(q, HallTriple{ModuleType::of(l), ModuleType::of(m), ModuleType::of(nn)}, 2) > 0) sup.push_back(l);
                ls = sup;
            }
            auto l = ls[std::uniform_int_distribution<std::size_t>(0, ls.size() - 1)(rng)];
            HallTriple t{ModuleType::of(l), ModuleType::of(m), ModuleType::of(nn)};
            auto h = hall_polynomial(q, t, &mem, cfg);
            int held = 0;
            for (int p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43}) {
                bool used = false;
                for (auto& s : h.samples) used |= s.first == p;
                for (auto& s : h.validations) used |= s.first == p;
                if (!used) {
                    held = p;
                    break;
                }
            }
            if (!held || h.poly.eval(held) != Rational(hall_count(q, t, held))) {
                why << qq.id() << " g^{" << l.str() << "}_{" << m.str() << "," << nn.str() << "} at q=" << held;
                return false;
            }
            ++tested;
            nonzero += !h.poly.c.empty();
        }
    }
    why << tested << " triples predicted at a held-out prime (" << nonzero << " nonzero)";
    return tested >= 20;
}

bool crit_green(std::ostream& why) {
    auto q = std::make_shared<Quiver>(Quiver::cyclic(2));
    const Field& f = Field::get(5);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-3, 3), part(0, 2);
    auto random_element = [&](const DimVector& d) {
        FieldElement x;
        for (auto& m : all_classes(q, d, f)) {
            int c = coef(rng);
            field_add(x, m, FieldScalar(5, c >= 0 ? c + 1 : c));  // never zero
        }
        return x;
    };
    int done = 0, nonzero = 0;
    while (done < 20) {
        DimVector d1{part(rng), part(rng)}, d2{part(rng), part(rng)};
        DimVector d = d1 + d2;
        if (total(d1) == 0 || total(d2) == 0 || d[0] > 2 || d[1] > 2) continue;
        auto x = random_element(d), y = random_element(d1), y2 = random_element(d2);
        auto lhs = field_green(x, field_product(y, y2));
        auto rhs = field_green(coproduct(x), tensor(y, y2));
        nonzero += lhs != FieldScalar(5, 0);
        if (lhs != rhs) {
            why << "degrees " << dim_str(d1) << " " << dim_str(d2) << ": " << lhs.str() << " vs " << rhs.str();
            return false;
        }
        ++done;
    }
    why << done << " random triples at q=5 (" << nonzero << " with nonzero pairing)";
    return true;
}

bool crit_canonical_cyclic(std::ostream& why) {
    int count = 0;
    for (int n : {2, 3}) {
        auto ctx = ctx_for(Quiver::cyclic(n));
        for (auto& nu : box(n, 4)) {
            auto cb = canonical_basis(ctx, nu);
            auto r = verify(ctx, cb);
            if (!(r.bar_invariant && r.unitriangular && r.almost_orthogonal && r.ok())) {
                why << "cyclic " << n << " " << dim_str(nu) << ": " << r.to_json().dump();
                return false;
            }
            count += static_cast<int>(cb.size());
        }
        DimVector nu(n, 0);
        nu[0] = nu[1] = 1;
        if (!two_monomials(ctx, nu)) {
            why << "cyclic " << n << " " << dim_str(nu) << " is not {u1u2, u2u1}";
            return false;
        }
    }
    why << count << " elements, all |nu| <= 4";
    return true;
}

const std::vector<DimVector> kron_dims{{1, 1}, {2, 1}, {1, 2}, {2, 2}};

bool crit_canonical_kronecker(std::ostream& why) {
    auto ctx = ctx_for(Quiver::kronecker());
    for (auto& nu : kron_dims) {
        auto cb = canonical_basis(ctx, nu);
        auto r = verify(ctx, cb);
        if (!(r.size_matches_dim_f && r.bar_invariant && r.almost_orthogonal && r.truncation_agrees && r.ok())) {
            why << dim_str(nu) << ": " << r.to_json().dump();
            return false;
        }
        why << dim_str(nu) << ":" << cb.size() << " ";
    }
    why << "(|G^a| = dim f, truncation = bar recursion)";
    return true;
}

bool crit_finite_a2(std::ostream& why) {
    auto ctx = ctx_for(Quiver::linear_An(2));
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> c(-2, 2), e(0, 3);
    for (auto& nu : box(2, 4)) {
        auto cb = canonical_basis(ctx, nu);
        auto r = verify(ctx, cb);
        if (!(r.bar_invariant && r.unitriangular && r.ok())) {
            why << dim_str(nu) << ": " << r.to_json().dump();
            return false;
        }
        // uniqueness: truncating from a perturbed bar-invariant start returns the same element
        const auto& d = cb.pbw;
        for (std::size_t a = 0; a < cb.size(); ++a) {
            std::vector<LaurentPoly> x = d.a[a];
            for (std::size_t b = 0; b < a; ++b) {
                int k = e(rng);
                LaurentPoly p = k ? (LaurentPoly::v(k) + LaurentPoly::v(-k)) * c(rng) : LaurentPoly(c(rng));
                for (std::size_t j = 0; j < cb.size(); ++j) x[j] += p * d.a[b][j];
            }
            if (truncate_from(d, a, x) != cb.g[a]) {
                why << dim_str(nu) << ": perturbed start gives a different element";
                return false;
            }
        }
    }
    if (!two_monomials(ctx, {1, 1})) {
        why << "(1,1) is not {u1u2, u2u1}";
        return false;
    }
    why << "all |nu| <= 4, (1,1) = {u1u2, u2u1}";
    return true;
}

bool crit_determinism(std::ostream& why) {
    Quiver q = Quiver::kronecker();
    auto run = [&](int threads) {
        auto ctx = ctx_for(q, threads);
        std::string all;
        for (auto& nu : kron_dims) {
            auto cb = canonical_basis(ctx, nu);
            all += bundle_json(q, cb, verify(ctx, cb)).dump(2);
        }
        return all;
    };
    std::string a = run(1), b = run(8);
    why << "sha256 " << sha256_hex(a).substr(0, 16) << " vs " << sha256_hex(b).substr(0, 16);
    return a == b;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<bool(std::ostream&)> run;
    };
    std::vector<Criterion> all{{1, "quantum Serre relations vanish", crit_serre},
                               {2, "Kronecker Kostka identity", crit_kostka},
                               {3, "Kronecker character identity, degree-2 point", crit_character},
                               {4, "<S_0>*<S_1> = H_1 + v^-2 <S_1+S_0>", crit_lemma_m1},
                               {5, "Hall polynomials predict held-out primes", crit_hall_polys},
                               {6, "Green compatibility, cyclic n=2, q=5", crit_green},
                               {7, "canonical basis, cyclic n=2,3, |nu| <= 4", crit_canonical_cyclic},
                               {8, "canonical basis, Kronecker", crit_canonical_kronecker},
                               {9, "canonical basis, A2, |nu| <= 4", crit_finite_a2},
                               {10, "criterion-8 bundle identical on 1 and 8 threads", crit_determinism}};
    int failures = 0;
    for (auto& c : all) {
        std::ostringstream why;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(why);
        } catch (const std::exception& e) {
            why << "exception: " << e.what();
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << std::fixed;
        std::cout.precision(2);
        std::cout << s << "s) " << why.str() << std::endl;
        failures += !ok;
    }
    return failures;
}
