#include "hallcanon/hallalg.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "hallcanon/parallel.hpp"

namespace hallcanon {

using nlohmann::json;

// ---------------------------------------------------------------- FieldScalar

FieldScalar FieldScalar::vpow(int q, int e) {
    // v^e = q^{floor(e/2)} v^{e mod 2}
    int h = e >= 0 ? e / 2 : -((-e + 1) / 2);
    Rational p = 1;
    for (int k = 0; k < (h < 0 ? -h : h); ++k) p *= q;
    if (h < 0) p = 1 / p;
    return (e - 2 * h) ? FieldScalar(q, 0, p) : FieldScalar(q, p, 0);
}

FieldScalar FieldScalar::of(const LaurentPoly& p, int q) {
    FieldScalar r(q, 0, 0);
    for (auto& [e, c] : p.terms()) {
        auto t = vpow(q, e);
        r.a += t.a * Rational(c);
        r.b += t.b * Rational(c);
    }
    return r;
}

FieldScalar FieldScalar::of(const RationalFn& f, int q) { return of(f.num(), q) * of(f.den(), q).inverse(); }

FieldScalar& FieldScalar::operator+=(const FieldScalar& o) {
    if (!q) q = o.q;
    a += o.a;
    b += o.b;
    return *this;
}

FieldScalar& FieldScalar::operator-=(const FieldScalar& o) {
    if (!q) q = o.q;
    a -= o.a;
    b -= o.b;
    return *this;
}

FieldScalar& FieldScalar::operator*=(const FieldScalar& o) {
    if (!q) q = o.q;
    Rational na = a * o.a + b * o.b * q;
    b = a * o.b + b * o.a;
    a = na;
    return *this;
}

FieldScalar FieldScalar::inverse() const {
    Rational n = a * a - b * b * q;
    if (n == 0) throw std::domain_error("FieldScalar not invertible");
    return FieldScalar(q, a / n, -b / n);
}

std::string FieldScalar::str() const {
    if (b == 0) return rational_str(a);
    return rational_str(a) + " + " + rational_str(b) + "*v";
}

// ---------------------------------------------------------------- NIndex

bool NIndex::aperiodic() const {
    for (auto& t : tubes)
        if (!t.is_aperiodic()) return false;
    return true;
}

DimVector NIndex::dim(const Quiver& q) const {
    if (!is_kronecker(q)) {
        DimVector v(q.n(), 0);
        for (auto& t : tubes) v = v + t.dim();
        return v;
    }
    KronDesc d;
    d.pre = pre;
    d.inj = inj;
    DimVector v = d.dim();
    if (m()) v = v + scaled(q.delta(), m());
    return v;
}

std::string NIndex::str() const {
    std::string out;
    auto sep = [&] {
        if (!out.empty()) out += "+";
    };
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        sep();
        if (it->second > 1) out += std::to_string(it->second);
        out += "P" + std::to_string(-it->first);
    }
    for (auto& t : tubes) {
        if (t.empty()) continue;
        sep();
        out += t.str();
    }
    if (!lam.empty()) {
        sep();
        out += "t" + lam.str();
    }
    for (auto& [k, m] : inj) {
        sep();
        if (m > 1) out += std::to_string(m);
        out += "I" + std::to_string(k);
    }
    return out.empty() ? "1" : out;
}

json NIndex::to_json() const {
    json p = json::array(), i = json::array(), t = json::array();
    for (auto& [k, m] : pre) p.push_back({k, m});
    for (auto& [k, m] : inj) i.push_back({k, m});
    for (auto& ms : tubes) t.push_back(ms.to_json());
    return json{{"pre", p}, {"inj", i}, {"tubes", t}, {"lambda", lam.to_json()}};
}

NIndex NIndex::from_json(const json& j) {
    NIndex c;
    for (auto& e : j.at("pre")) c.pre[e[0].get<int>()] = e[1].get<int>();
    for (auto& e : j.at("inj")) c.inj[e[0].get<int>()] = e[1].get<int>();
    for (auto& e : j.at("tubes")) c.tubes.push_back(Multisegment::from_json(e));
    c.lam = Partition::from_json(j.at("lambda"));
    return c;
}

bool NIndex::operator<(const NIndex& o) const {
    if (pre != o.pre) return pre < o.pre;
    if (inj != o.inj) return inj < o.inj;
    if (tubes != o.tubes) return tubes < o.tubes;
    return lam < o.lam;
}

// ---------------------------------------------------------------- AlgebraElement

void AlgebraElement::add(const NIndex& k, const LaurentPoly& c) {
    if (c.is_zero()) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
        terms.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

LaurentPoly AlgebraElement::coeff(const NIndex& k) const {
    auto it = terms.find(k);
    return it == terms.end() ? LaurentPoly() : it->second;
}

AlgebraElement AlgebraElement::scaled(const LaurentPoly& c) const {
    AlgebraElement r;
    for (auto& [k, x] : terms) r.add(k, x * c);
    return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    for (auto& [k, x] : o.terms) add(k, x);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
    for (auto& [k, x] : o.terms) add(k, -x);
    return *this;
}

std::string AlgebraElement::str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (auto& [k, c] : terms) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ")*N[" + k.str() + "]";
    }
    return out;
}

json AlgebraElement::to_json(const Quiver& q) const {
    json t = json::array();
    for (auto& [k, c] : terms) t.push_back({{"symbol", k.str()}, {"index", k.to_json()}, {"coeff", c.str()}});
    return json{{"quiver", q.id()}, {"basis", "N"}, {"terms", t}};
}

// ---------------------------------------------------------------- enumeration

Family family_of(const Quiver& q) {
    if (q.kind() == QuiverKind::Cyclic || q.kind() == QuiverKind::Jordan || is_linear_An(q)) return Family::Segments;
    if (is_kronecker(q)) return Family::Kronecker;
    throw std::invalid_argument("unsupported quiver " + q.id() + " (cyclic, Jordan, linear A_n and Kronecker are supported)");
}

namespace {
bool seg_linear(const Quiver& q) { return q.kind() != QuiverKind::Cyclic && q.kind() != QuiverKind::Jordan; }

struct CPart {
    std::map<int, int> pre, inj;
    int m = 0;
};

// preprojective/preinjective parts whose complement in nu is a multiple of delta
std::vector<CPart> enumerate_c(const DimVector& nu) {
    std::vector<std::pair<int, DimVector>> items;  // beta index, dim
    for (int k = 0; k <= nu[0]; ++k)
        if (k <= nu[0] && k + 1 <= nu[1]) items.push_back({-k, {k, k + 1}});
    for (int k = 1; k <= nu[0]; ++k)
        if (k - 1 <= nu[1]) items.push_back({k, {k, k - 1}});
    std::vector<CPart> out;
    CPart cur;
    DimVector left = nu;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == items.size()) {
            if (left[0] == left[1]) {
                cur.m = left[0];
                out.push_back(cur);
            }
            return;
        }
        auto& [t, d] = items[i];
        DimVector saved = left;
        for (int mult = 0;; ++mult) {
            if (mult) {
                left = left - d;
                if (left[0] < 0 || left[1] < 0) break;
                (t <= 0 ? cur.pre : cur.inj)[t] = mult;
            }
            go(i + 1);
        }
        left = saved;
        (t <= 0 ? cur.pre : cur.inj).erase(t);
    };
    go(0);
    return out;
}

// multisets of (degree, partition) blocks with sum degree * |partition| = m
std::vector<std::vector<std::pair<int, Partition>>> regular_block_types(int m) {
    std::vector<std::pair<int, Partition>> blocks;
    for (int d = 1; d <= m; ++d)
        for (int s = 1; d * s <= m; ++s)
            for (auto& p : partitions_of(s)) blocks.push_back({d, p});
    std::vector<std::vector<std::pair<int, Partition>>> out;
    std::vector<std::pair<int, Partition>> cur;
    std::function<void(std::size_t, int)> go = [&](std::size_t from, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t k = from; k < blocks.size(); ++k) {
            int w = blocks[k].first * blocks[k].second.size();
            if (w > left) continue;
            cur.push_back(blocks[k]);
            go(k, left - w);
            cur.pop_back();
        }
    };
    go(0, m);
    return out;
}

std::vector<RegSlot> slots_of(std::vector<std::pair<int, Partition>> blocks) {
    std::sort(blocks.begin(), blocks.end());
    std::vector<RegSlot> r;
    for (std::size_t k = 0; k < blocks.size(); ++k) r.push_back(RegSlot{static_cast<int>(k), blocks[k].first, blocks[k].second});
    return r;
}

PolyCache& fallback_cache() {
    static PolyCache c("");
    return c;
}
PolyCache* cache_of(const AlgebraContext& ctx) { return ctx.cache ? ctx.cache : &fallback_cache(); }

template <class K, class V>
struct Memo {
    std::mutex lock;
    std::map<K, V> data;
    template <class F>
    V get(const K& k, F make) {
        {
            std::lock_guard<std::mutex> g(lock);
            auto it = data.find(k);
            if (it != data.end()) return it->second;
        }
        V v = make();
        std::lock_guard<std::mutex> g(lock);
        return data.emplace(k, v).first->second;
    }
};

int type_end(QuiverPtr q, const ModuleType& t) {
    static Memo<std::string, int> memo;
    return memo.get(q->id() + "|" + t.to_json().dump(), [&] { return generic_end_dim(q, t); });
}

int class_end(const std::string& key, const FqModule& m) {
    static Memo<std::pair<int, std::string>, int> memo;
    return memo.get({m.q(), m.quiver->id() + "|" + key}, [&] { return end_dim(m); });
}

const std::vector<std::pair<int, Partition>>& no_blocks() {
    static std::vector<std::pair<int, Partition>> e;
    return e;
}
}  // namespace

std::vector<NIndex> enumerate_N_indices(const Quiver& q, const DimVector& nu) {
    std::vector<NIndex> out;
    if (family_of(q) == Family::Segments) {
        for (auto& ms : enumerate_multisegments(q.n(), seg_linear(q), nu)) out.push_back(NIndex::segments(ms));
        return out;
    }
    for (auto& c : enumerate_c(nu))
        for (auto& lam : partitions_of(c.m)) out.push_back(NIndex{c.pre, c.inj, {}, lam});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ModuleType> enumerate_types(const Quiver& q, const DimVector& nu) {
    std::vector<ModuleType> out;
    if (family_of(q) == Family::Segments) {
        for (auto& ms : enumerate_multisegments(q.n(), seg_linear(q), nu)) out.push_back(ModuleType::of(ms));
        return out;
    }
    for (auto& c : enumerate_c(nu))
        for (auto& blocks : regular_block_types(c.m)) out.push_back(ModuleType::kron(c.pre, c.inj, slots_of(blocks)));
    std::sort(out.begin(), out.end());
    return out;
}

ModuleType target_type(const NIndex& c, const Partition& mu) {
    std::vector<RegSlot> reg;
    for (int k = 0; k < mu.length(); ++k) reg.push_back(RegSlot{k, 1, Partition{mu[k]}});
    return ModuleType::kron(c.pre, c.inj, reg);
}

// ---------------------------------------------------------------- monomials

int word_exponent(const Quiver& q, const Word& w) {
    int e = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        e += w[j].amount * w[j].amount - w[j].amount;
        for (std::size_t k = j + 1; k < w.size(); ++k)
            e += w[j].amount * w[k].amount * q.euler_form(q.simple(w[j].vertex), q.simple(w[k].vertex));
    }
    return e;
}

DimVector word_dim(const Quiver& q, const Word& w) {
    DimVector d(q.n(), 0);
    for (auto& s : w) d[s.vertex] += s.amount;
    return d;
}

LaurentPoly monomial_coeff(const AlgebraContext& ctx, const Word& w, const ModuleType& l) {
    auto fp = flag_polynomial(ctx.quiver, l, w, cache_of(ctx), ctx.fit);
    if (fp.poly.c.empty()) return LaurentPoly();
    int shift = word_exponent(*ctx.quiver, w) + total(l.dim(*ctx.quiver)) - type_end(ctx.quiver, l);
    return fp.poly.to_laurent().shifted(shift);
}

AlgebraElement express_in_N(const AlgebraContext& ctx, const DimVector& nu,
                            const std::function<LaurentPoly(const ModuleType&)>& bracket_coeff) {
    const Quiver& q = *ctx.quiver;
    AlgebraElement out;
    if (family_of(q) == Family::Segments) {
        auto ms = enumerate_multisegments(q.n(), seg_linear(q), nu);
        std::vector<LaurentPoly> vals(ms.size());
        parallel_for(ms.size(), ctx.threads, [&](std::size_t i) { vals[i] = bracket_coeff(ModuleType::of(ms[i])); });
        for (std::size_t i = 0; i < ms.size(); ++i) out.add(NIndex::segments(ms[i]), vals[i]);
        return out;
    }
    // Kostka system on M(c) + M(mu, z) with distinct degree-1 points
    struct Job {
        NIndex c;
        Partition mu;
    };
    std::vector<Job> jobs;
    auto cs = enumerate_c(nu);
    for (auto& c : cs)
        for (auto& mu : partitions_of(c.m)) jobs.push_back({NIndex{c.pre, c.inj, {}, {}}, mu});
    std::vector<LaurentPoly> vals(jobs.size());
    parallel_for(jobs.size(), ctx.threads, [&](std::size_t i) { vals[i] = bracket_coeff(target_type(jobs[i].c, jobs[i].mu)); });
    std::size_t at = 0;
    for (auto& c : cs) {
        auto ps = partitions_of(c.m);
        auto kinv = kostka_inverse(c.m);
        for (std::size_t l = 0; l < ps.size(); ++l) {
            LaurentPoly psi;
            for (std::size_t mu = 0; mu < ps.size(); ++mu) psi += vals[at + mu] * LaurentPoly(kinv[mu][l]);
            out.add(NIndex{c.pre, c.inj, {}, ps[l]}, psi.shifted(c.m));
        }
        at += ps.size();
    }
    return out;
}

AlgebraElement monomial(const AlgebraContext& ctx, const Word& w) {
    return express_in_N(ctx, word_dim(*ctx.quiver, w), [&](const ModuleType& t) { return monomial_coeff(ctx, w, t); });
}

NIndex simple_index(const Quiver& q, int i, int a) {
    if (family_of(q) == Family::Segments) return NIndex::segments(Multisegment::simple(q.n(), seg_linear(q), i, a));
    NIndex c;
    if (i == 1)
        c.pre[0] = a;  // S_1 = P(0)
    else
        c.inj[1] = a;  // S_0 = I(1)
    return c;
}

// ---------------------------------------------------------------- symmetric functions

HExpansion jacobi_trudi(const Partition& lam) {
    int s = lam.length();
    HExpansion out;
    std::vector<int> perm(s);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int inv = 0;
        for (int i = 0; i < s; ++i)
            for (int j = i + 1; j < s; ++j)
                if (perm[i] > perm[j]) ++inv;
        std::vector<int> parts;
        bool zero = false;
        for (int i = 0; i < s && !zero; ++i) {
            int k = lam[i] - i + perm[i];
            if (k < 0) zero = true;
            if (k > 0) parts.push_back(k);
        }
        if (zero) continue;
        BigInt& c = out[Partition(parts)];
        c += inv % 2 ? -1 : 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

HExpansion h_product(const Partition& lam) { return HExpansion{{lam, 1}}; }

// ---------------------------------------------------------------- field level

void field_add(FieldElement& x, const FqModule& m, const FieldScalar& c) {
    if (c.is_zero()) return;
    std::string k = class_key(m);
    auto it = x.find(k);
    if (it == x.end()) {
        x.emplace(k, FieldTerm{m, c});
        return;
    }
    it->second.coeff += c;
    if (it->second.coeff.is_zero()) x.erase(it);
}

namespace {
std::vector<KronDesc> regular_descs(const Field& f, int m) {
    std::vector<Point> pts;
    for (int d = 1; d <= m; ++d)
        for (auto& z : closed_points(f, d)) pts.push_back(z);
    std::vector<KronDesc> out;
    KronDesc cur;
    std::function<void(std::size_t, int)> go = [&](std::size_t k, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        if (k == pts.size()) return;
        go(k + 1, left);
        int d = pts[k].degree();
        for (int s = 1; s * d <= left; ++s)
            for (auto& p : partitions_of(s)) {
                cur.reg.push_back({pts[k], p});
                go(k + 1, left - s * d);
                cur.reg.pop_back();
            }
    };
    go(0, m);
    for (auto& d : out) std::sort(d.reg.begin(), d.reg.end(), [](auto& x, auto& y) { return x.first < y.first; });
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace

std::vector<FqModule> homogeneous_regulars(QuiverPtr q, const Field& f, int m) {
    std::vector<FqModule> out;
    for (auto& d : regular_descs(f, m)) out.push_back(build_kronecker(q, d, f));
    return out;
}

std::vector<FqModule> all_classes(QuiverPtr q, const DimVector& nu, const Field& f) {
    std::vector<FqModule> out;
    if (family_of(*q) == Family::Segments) {
        for (auto& ms : enumerate_multisegments(q->n(), seg_linear(*q), nu)) out.push_back(build_multisegment(q, ms, f));
        return out;
    }
    for (auto& c : enumerate_c(nu))
        for (auto d : regular_descs(f, c.m)) {
            d.pre = c.pre;
            d.inj = c.inj;
            out.push_back(build_kronecker(q, d, f));
        }
    return out;
}

std::uint64_t regular_chain_count(const FqModule& l, const std::vector<int>& parts, std::uint64_t budget) {
    if (parts.empty()) return l.total_dim() == 0 ? 1 : 0;
    DimVector d = l.quiver->delta();
    DimVector sub = l.dims - scaled(d, parts[0]);
    if (sub[0] < 0 || sub[1] < 0) return 0;
    std::vector<int> rest(parts.begin() + 1, parts.end());
    std::uint64_t n = 0;
    for_each_submodule(
        l, &sub,
        [&](const GradedSubspace& w) {
            n += regular_chain_count(submodule(l, w), rest, budget);
            return true;
        },
        budget);
    return n;
}

FieldScalar field_H_coeff(const Partition& lam, const FqModule& r) {
    // u-coefficient v^{-2|lam|} F_lam(R), and u_R = v^{dim R - end R} <R> with dim R = 2|lam|
    int q = r.q();
    if (r.dims != scaled(r.quiver->delta(), lam.size())) return FieldScalar(q, 0);
    std::uint64_t f = regular_chain_count(r, lam.parts());
    return FieldScalar::vpow(q, -end_dim(r)) * FieldScalar(q, Rational(f));
}

FieldScalar field_S_coeff(const Partition& lam, const FqModule& r) {
    static Memo<std::tuple<int, std::string, std::vector<int>>, FieldScalar> memo;
    return memo.get({r.q(), class_key(r), lam.parts()}, [&] {
        FieldScalar s(r.q(), 0);
        for (auto& [mu, c] : jacobi_trudi(lam)) s += FieldScalar(r.q(), Rational(c)) * field_H_coeff(mu, r);
        return s;
    });
}

FieldElement realize_H(QuiverPtr q, int m, const Field& f) {
    FieldElement x;
    for (auto& r : homogeneous_regulars(q, f, m)) field_add(x, r, field_H_coeff(Partition{m}, r));
    return x;
}

FieldElement realize_S(QuiverPtr q, const Partition& lam, const Field& f) {
    FieldElement x;
    for (auto& r : homogeneous_regulars(q, f, lam.size())) field_add(x, r, field_S_coeff(lam, r));
    return x;
}

FieldElement field_N(QuiverPtr q, const NIndex& c, const Field& f) {
    FieldElement x;
    if (family_of(*q) == Family::Segments) {
        field_add(x, build_multisegment(q, c.tubes.at(0), f), FieldScalar(f.q(), 1));
        return x;
    }
    for (auto d : regular_descs(f, c.m())) {
        FqModule r = build_kronecker(q, d, f);
        FieldScalar s = c.m() ? field_S_coeff(c.lam, r) : FieldScalar(f.q(), 1);
        d.pre = c.pre;
        d.inj = c.inj;
        field_add(x, build_kronecker(q, d, f), s);
    }
    return x;
}

namespace {
struct CensusEntry {
    std::uint64_t count = 0;
    FqModule quot, sub;
};
using Census = std::map<std::pair<std::string, std::string>, CensusEntry>;

Census census_of(const FqModule& l, const std::string& lkey, const DimVector& dsub, std::uint64_t budget) {
    static Memo<std::tuple<int, std::string, DimVector>, Census> memo;
    return memo.get({l.q(), l.quiver->id() + "|" + lkey, dsub}, [&] {
        Census out;
        if (!leq(dsub, l.dims)) return out;
        for_each_submodule(
            l, &dsub,
            [&](const GradedSubspace& w) {
                FqModule qm = quotient(l, w), sm = submodule(l, w);
                auto key = std::make_pair(class_key(qm), class_key(sm));
                auto it = out.find(key);
                if (it == out.end()) it = out.emplace(key, CensusEntry{0, qm, sm}).first;
                it->second.count++;
                return true;
            },
            budget);
        return out;
    });
}

using CoeffFn = std::function<FieldScalar(const std::string&, const FqModule&)>;

// coefficient of <L> in x * y for the given sub dimensions
FieldScalar product_on(const FqModule& l, const std::string& lkey, const std::vector<DimVector>& sub_dims, const CoeffFn& x,
                       const CoeffFn& y, std::uint64_t budget) {
    const Quiver& q = *l.quiver;
    int el = class_end(lkey, l);
    FieldScalar s(l.q(), 0);
    for (auto& d : sub_dims) {
        if (!leq(d, l.dims)) continue;
        for (auto& [keys, e] : census_of(l, lkey, d, budget)) {
            FieldScalar cx = x(keys.first, e.quot);
            if (cx.is_zero()) continue;
            FieldScalar cy = y(keys.second, e.sub);
            if (cy.is_zero()) continue;
            int ex = q.euler_form(e.quot.dims, e.sub.dims) + class_end(keys.first, e.quot) + class_end(keys.second, e.sub) - el;
            s += cx * cy * FieldScalar::vpow(l.q(), ex) * FieldScalar(l.q(), Rational(e.count));
        }
    }
    return s;
}

CoeffFn lookup(const FieldElement& x) {
    return [&x](const std::string& k, const FqModule&) {
        auto it = x.find(k);
        return it == x.end() ? FieldScalar() : it->second.coeff;
    };
}

std::vector<DimVector> dims_of(const FieldElement& x) {
    std::vector<DimVector> d;
    for (auto& [k, t] : x)
        if (std::find(d.begin(), d.end(), t.module.dims) == d.end()) d.push_back(t.module.dims);
    std::sort(d.begin(), d.end());
    return d;
}
}  // namespace

FieldElement field_product(const FieldElement& x, const FieldElement& y, std::vector<FqModule> targets, std::uint64_t budget) {
    FieldElement out;
    if (x.empty() || y.empty()) return out;
    auto dx = dims_of(x), dy = dims_of(y);
    if (targets.empty()) {
        std::vector<DimVector> seen;
        const FqModule& any = x.begin()->second.module;
        for (auto& a : dx)
            for (auto& b : dy) {
                DimVector s = a + b;
                if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
                seen.push_back(s);
                for (auto& l : all_classes(any.quiver, s, *any.field)) targets.push_back(l);
            }
    }
    auto cx = lookup(x), cy = lookup(y);
    for (auto& l : targets) {
        std::string k = class_key(l);
        field_add(out, l, product_on(l, k, dy, cx, cy, budget));
    }
    return out;
}

std::map<NIndex, FieldScalar> field_express_in_N(QuiverPtr q, const FieldElement& x, const DimVector& nu, const Field& f) {
    std::map<NIndex, FieldScalar> out;
    auto coeff = [&](const FqModule& m) {
        auto it = x.find(class_key(m));
        return it == x.end() ? FieldScalar(f.q(), 0) : it->second.coeff;
    };
    if (family_of(*q) == Family::Segments) {
        for (auto& [k, t] : x)
            if (t.module.dims == nu) out[NIndex::segments(classify_multisegment(t.module))] = t.coeff;
        return out;
    }
    for (auto& c : enumerate_c(nu)) {
        auto ps = partitions_of(c.m);
        auto kinv = kostka_inverse(c.m);
        NIndex base{c.pre, c.inj, {}, {}};
        std::vector<FieldScalar> xs;
        for (auto& mu : ps) xs.push_back(coeff(realize(q, target_type(base, mu), f)));
        for (std::size_t l = 0; l < ps.size(); ++l) {
            FieldScalar psi(f.q(), 0);
            for (std::size_t mu = 0; mu < ps.size(); ++mu) psi += xs[mu] * FieldScalar(f.q(), Rational(kinv[mu][l]));
            psi *= FieldScalar::vpow(f.q(), c.m);
            if (!psi.is_zero()) out[NIndex{c.pre, c.inj, {}, ps[l]}] = psi;
        }
    }
    return out;
}

FieldElement field_of(const AlgebraContext& ctx, const AlgebraElement& x, const Field& f) {
    FieldElement out;
    for (auto& [k, c] : x.terms) {
        FieldScalar s = FieldScalar::of(c, f.q());
        for (auto& [key, t] : field_N(ctx.quiver, k, f)) field_add(out, t.module, s * t.coeff);
    }
    return out;
}

namespace {
int q_valuation(const BigInt& n, int q) {
    if (n == 0) return 0;
    int v = 0;
    BigInt m = n;
    while (m % q == 0) {
        m /= q;
        ++v;
    }
    return v;
}
}  // namespace

LaurentPoly lift_to_laurent(const std::function<FieldScalar(int)>& value, const std::function<bool(int)>& admissible,
                            const FitConfig& cfg) {
    std::map<int, FieldScalar> memo;
    auto at = [&](int q) -> const FieldScalar& {
        auto it = memo.find(q);
        if (it == memo.end()) it = memo.emplace(q, value(q)).first;
        return it->second;
    };
    std::vector<int> qs;
    for (int q : cfg.qs)
        if (admissible(q)) qs.push_back(q);
    if (qs.empty()) throw std::runtime_error("lift: no admissible sample field");
    LaurentPoly out;
    for (int part = 0; part < 2; ++part) {
        auto comp = [&](int q) { return part ? at(q).b : at(q).a; };
        // denominators are powers of q; start from the largest one seen in the first samples
        int k0 = 0;
        for (std::size_t i = 0; i < std::min<std::size_t>(3, qs.size()); ++i) {
            int q = qs[i];
            k0 = std::max(k0, q_valuation(denominator(comp(q)), q));
        }
        std::optional<HallPolynomial> fit;
        for (int k = k0; k <= k0 + 8 && !fit; ++k) {
            try {
                fit = fit_rational(
                    [&](int q) {
                        Rational r = comp(q);
                        for (int j = 0; j < k; ++j) r *= q;
                        return r;
                    },
                    admissible, 0, static_cast<int>(qs.size()), cfg);
                for (auto& c : fit->poly.c)
                    if (denominator(c) != 1) throw std::runtime_error("non-integral lift");
            } catch (const std::runtime_error&) {
                fit.reset();
                continue;
            }
            for (std::size_t j = 0; j < fit->poly.c.size(); ++j)
                out += LaurentPoly::monomial(2 * (static_cast<int>(j) - k) + part, numerator(fit->poly.c[j]));
        }
        if (!fit) throw std::runtime_error("lift: values do not come from a Laurent polynomial in v");
    }
    return out;
}

// ---------------------------------------------------------------- products

namespace {
AlgebraElement mul_segments(const AlgebraContext& ctx, const AlgebraElement& x, const AlgebraElement& y) {
    QuiverPtr q = ctx.quiver;
    struct Job {
        ModuleType l;
        NIndex lk;
        LaurentPoly coeff;
    };
    // group by target dimension so every Hall polynomial is fetched once per (L, M, N)
    std::map<DimVector, std::vector<std::pair<const NIndex*, const NIndex*>>> pairs;
    for (auto& [a, ca] : x.terms)
        for (auto& [b, cb] : y.terms) pairs[a.dim(*q) + b.dim(*q)].push_back({&a, &b});
    AlgebraElement out;
    for (auto& [nu, ps] : pairs) {
        auto ls = enumerate_multisegments(q->n(), seg_linear(*q), nu);
        std::vector<LaurentPoly> vals(ls.size());
        parallel_for(ls.size(), ctx.threads, [&](std::size_t i) {
            ModuleType lt = ModuleType::of(ls[i]);
            int el = type_end(q, lt);
            LaurentPoly s;
            for (auto& [a, b] : ps) {
                ModuleType mt = ModuleType::of(a->tubes[0]), nt = ModuleType::of(b->tubes[0]);
                auto h = hall_polynomial(q, HallTriple{lt, mt, nt}, cache_of(ctx), ctx.fit, ctx.budget);
                if (h.poly.c.empty()) continue;
                int e = q->euler_form(mt.dim(*q), nt.dim(*q)) + type_end(q, mt) + type_end(q, nt) - el;
                s += (x.coeff(*a) * y.coeff(*b) * h.poly.to_laurent()).shifted(e);
            }
            vals[i] = s;
        });
        for (std::size_t i = 0; i < ls.size(); ++i) out.add(NIndex::segments(ls[i]), vals[i]);
    }
    return out;
}

// coefficient of <M> in a Kronecker N-element at one field
FieldScalar kron_coeff(const AlgebraElement& x, const FqModule& m) {
    KronDesc d = classify_kronecker(m);
    int q = m.q();
    FieldScalar s(q, 0);
    std::optional<FqModule> r;
    for (auto& [k, c] : x.terms) {
        if (k.pre != d.pre || k.inj != d.inj) continue;
        int rm = 0;
        for (auto& [p, lam] : d.reg) rm += p.degree() * lam.size();
        if (rm != k.m()) continue;
        if (rm == 0) {
            s += FieldScalar::of(c, q);
            continue;
        }
        if (!r) {
            KronDesc rd;
            rd.reg = d.reg;
            r = build_kronecker(m.quiver, rd, *m.field);
        }
        s += FieldScalar::of(c, q) * field_S_coeff(k.lam, *r);
    }
    return s;
}

AlgebraElement mul_kronecker(const AlgebraContext& ctx, const AlgebraElement& x, const AlgebraElement& y) {
    QuiverPtr q = ctx.quiver;
    std::vector<DimVector> dx, dy, nus;
    for (auto& [a, c] : x.terms)
        if (std::find(dx.begin(), dx.end(), a.dim(*q)) == dx.end()) dx.push_back(a.dim(*q));
    for (auto& [b, c] : y.terms)
        if (std::find(dy.begin(), dy.end(), b.dim(*q)) == dy.end()) dy.push_back(b.dim(*q));
    for (auto& a : dx)
        for (auto& b : dy)
            if (std::find(nus.begin(), nus.end(), a + b) == nus.end()) nus.push_back(a + b);
    std::sort(nus.begin(), nus.end());
    CoeffFn cx = [&](const std::string&, const FqModule& m) { return kron_coeff(x, m); };
    CoeffFn cy = [&](const std::string&, const FqModule& m) { return kron_coeff(y, m); };
    AlgebraElement out;
    for (auto& nu : nus) {
        out += express_in_N(ctx, nu, [&](const ModuleType& t) {
            auto need = t.points_needed();
            return lift_to_laurent(
                [&](int fq) {
                    const Field& f = Field::get(fq);
                    FqModule l = realize(q, t, f);
                    return product_on(l, class_key(l), dy, cx, cy, ctx.budget);
                },
                [&](int fq) { return enough_points(need, fq); }, ctx.fit);
        });
    }
    return out;
}
}  // namespace

AlgebraElement mul(const AlgebraContext& ctx, const AlgebraElement& x, const AlgebraElement& y) {
    if (x.is_zero() || y.is_zero()) return {};
    return family_of(*ctx.quiver) == Family::Segments ? mul_segments(ctx, x, y) : mul_kronecker(ctx, x, y);
}

AlgebraElement divided_power(const AlgebraContext& ctx, const AlgebraElement& x, int m) {
    if (m < 0) throw std::invalid_argument("negative divided power");
    AlgebraElement p;
    if (m == 0) {
        p.add(family_of(*ctx.quiver) == Family::Segments
                  ? NIndex::segments(Multisegment(ctx.quiver->n(), seg_linear(*ctx.quiver)))
                  : NIndex{},
              1);
        return p;
    }
    p = x;
    for (int k = 1; k < m; ++k) p = mul(ctx, p, x);
    LaurentPoly f = qfact(m);
    AlgebraElement out;
    for (auto& [k, c] : p.terms) {
        auto d = c.divide_exact(f);
        if (!d) throw std::domain_error("divided power is not integral at " + k.str());
        out.add(k, *d);
    }
    return out;
}

// ---------------------------------------------------------------- Green's form

RationalFn green_module(const AlgebraContext& ctx, const ModuleType& m) {
    auto a = aut_polynomial(ctx.quiver, m);
    return RationalFn(LaurentPoly::v(2 * type_end(ctx.quiver, m)), a.to_laurent());
}

namespace {
QPoly points_poly(int d) {
    // number of closed points of degree d as a polynomial in q
    std::vector<Rational> c(d + 1, Rational(0));
    if (d == 1) {
        c[0] = 1;
        c[1] = 1;
        return QPoly(c);
    }
    auto mobius = [](int n) {
        int r = 1;
        for (int p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                r = -r;
            }
        return n > 1 ? -r : r;
    };
    for (int e = 1; e <= d; ++e)
        if (d % e == 0) c[d / e] += Rational(mobius(e), d);
    return QPoly(c);
}

QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    if (a.c.empty() || b.c.empty()) return QPoly();
    std::vector<Rational> r(a.c.size() + b.c.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return QPoly(r);
}

// number of homogeneous regular modules realizing the block type
QPoly type_count(const std::vector<RegSlot>& reg) {
    std::map<int, int> per_degree;
    std::map<std::pair<int, Partition>, int> mult;
    for (auto& r : reg) {
        per_degree[r.degree]++;
        mult[{r.degree, r.part}]++;
    }
    QPoly p(std::vector<Rational>{1});
    for (auto& [d, k] : per_degree) {
        QPoly n = points_poly(d);
        for (int i = 0; i < k; ++i) {
            QPoly f = n;
            if (f.c.empty()) f.c.resize(1);
            f.c[0] -= i;
            p = qpoly_mul(p, QPoly(f.c));
        }
    }
    Rational den = 1;
    for (auto& [b, m] : mult)
        for (int i = 2; i <= m; ++i) den *= i;
    for (auto& c : p.c) c /= den;
    return p;
}

// F_lambda(T): chains with subquotients lambda_j delta, as a polynomial in q
QPoly chain_polynomial(const AlgebraContext& ctx, const ModuleType& t, const Partition& lam) {
    json key{{"kind", "chains"}, {"L", t.to_json()}, {"parts", lam.to_json()}};
    PolyCache* cache = cache_of(ctx);
    if (auto hit = cache->get(ctx.quiver->id(), key)) return hit->poly;
    auto need = t.points_needed();
    int m = lam.size();
    auto h = fit_polynomial(
        [&](int fq) {
            const Field& f = Field::get(fq);
            return BigInt(regular_chain_count(realize(ctx.quiver, t, f), lam.parts(), ctx.budget));
        },
        [&](int fq) { return enough_points(need, fq); }, 0, 2 * m * m, ctx.fit);
    cache->put(ctx.quiver->id(), key, h);
    return h.poly;
}

// <R_T>-coefficient of S_lambda
LaurentPoly generic_S_coeff(const AlgebraContext& ctx, const Partition& lam, const ModuleType& t) {
    LaurentPoly s;
    int e = type_end(ctx.quiver, t);
    for (auto& [mu, c] : jacobi_trudi(lam)) s += LaurentPoly(c) * chain_polynomial(ctx, t, mu).to_laurent();
    return s.shifted(-e);
}
}  // namespace

RationalFn green_S(const AlgebraContext& ctx, const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return RationalFn();
    if (a.empty()) return RationalFn(LaurentPoly(1));
    static Memo<std::string, RationalFn> memo;
    std::string key = ctx.quiver->id() + "|" + a.str() + "|" + b.str();
    return memo.get(key, [&] {
        RationalFn total;
        for (auto& blocks : regular_block_types(a.size())) {
            auto reg = slots_of(blocks);
            ModuleType t = ModuleType::kron({}, {}, reg);
            QPoly cnt = type_count(reg);
            // clear denominators of the count
            BigInt den = 1;
            for (auto& c : cnt.c) den = boost::multiprecision::lcm(den, denominator(c));
            std::vector<BigInt> ints;
            for (auto& c : cnt.c) ints.push_back(numerator(Rational(c * den)));
            LaurentPoly num = from_qpoly(ints) * generic_S_coeff(ctx, a, t) * generic_S_coeff(ctx, b, t);
            if (num.is_zero()) continue;
            total += RationalFn(num, LaurentPoly(den)) * green_module(ctx, t);
        }
        total.reduce();
        return total;
    });
}

RationalFn green_pair(const AlgebraContext& ctx, const NIndex& a, const NIndex& b) {
    if (!a.same_c(b) || a.m() != b.m()) return RationalFn();
    if (family_of(*ctx.quiver) == Family::Segments) return green_module(ctx, ModuleType::of(a.tubes.at(0)));
    RationalFn g = green_module(ctx, ModuleType::kron(a.pre, a.inj));
    return g * green_S(ctx, a.lam, b.lam);
}

RationalFn green_form(const AlgebraContext& ctx, const AlgebraElement& x, const AlgebraElement& y) {
    RationalFn s;
    for (auto& [a, ca] : x.terms)
        for (auto& [b, cb] : y.terms) {
            if (!a.same_c(b) || a.m() != b.m()) continue;
            s += RationalFn(ca * cb) * green_pair(ctx, a, b);
        }
    s.reduce();
    return s;
}

// ---------------------------------------------------------------- coproduct (field level)

ModuleType type_of(const FqModule& m) {
    if (family_of(*m.quiver) == Family::Segments) return ModuleType::of(classify_multisegment(m));
    KronDesc d = classify_kronecker(m);
    std::vector<std::pair<int, Partition>> blocks;
    for (auto& [p, lam] : d.reg) blocks.push_back({p.degree(), lam});
    return ModuleType::kron(d.pre, d.inj, slots_of(blocks));
}

std::uint64_t aut_of(const FqModule& m) {
    static Memo<std::pair<int, std::string>, std::uint64_t> memo;
    return memo.get({m.q(), m.quiver->id() + "|" + class_key(m)}, [&] {
        Rational a = aut_polynomial(m.quiver, type_of(m)).eval(m.q());
        return static_cast<std::uint64_t>(numerator(a));
    });
}

namespace {
FieldScalar green_weight(const std::string& key, const FqModule& m) {
    // v^{2 end} / a_M
    Rational w = 1;
    for (int k = 0; k < class_end(key, m); ++k) w *= m.q();
    return FieldScalar(m.q(), w / Rational(aut_of(m)));
}

std::vector<DimVector> sub_dims(const DimVector& d) {
    std::vector<DimVector> out{DimVector(d.size(), 0)};
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<DimVector> next;
        for (auto& v : out)
            for (int k = 0; k <= d[i]; ++k) {
                DimVector w = v;
                w[i] = k;
                next.push_back(w);
            }
        out = std::move(next);
    }
    return out;
}

void tensor_add(FieldTensor& t, const std::string& kl, const FqModule& l, const std::string& kr, const FqModule& r,
                const FieldScalar& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(kl, kr);
    auto it = t.find(key);
    if (it == t.end()) {
        t.emplace(key, TensorTerm{l, r, c});
        return;
    }
    it->second.coeff += c;
    if (it->second.coeff.is_zero()) t.erase(it);
}
}  // namespace

FieldScalar field_green(const FieldElement& x, const FieldElement& y) {
    FieldScalar s;
    for (auto& [k, t] : x) {
        auto it = y.find(k);
        if (it == y.end()) continue;
        s += t.coeff * it->second.coeff * green_weight(k, t.module);
    }
    return s;
}

FieldTensor coproduct(const FieldElement& x, std::uint64_t budget) {
    FieldTensor out;
    for (auto& [lk, t] : x) {
        const FqModule& l = t.module;
        const Quiver& q = *l.quiver;
        int el = class_end(lk, l);
        Rational al = Rational(aut_of(l));
        for (auto& d : sub_dims(l.dims))
            for (auto& [keys, e] : census_of(l, lk, d, budget)) {
                int ex = q.euler_form(e.quot.dims, e.sub.dims) + el - class_end(keys.first, e.quot) - class_end(keys.second, e.sub);
                Rational w = Rational(e.count) * Rational(aut_of(e.quot)) * Rational(aut_of(e.sub)) / al;
                tensor_add(out, keys.first, e.quot, keys.second, e.sub, t.coeff * FieldScalar::vpow(l.q(), ex) * FieldScalar(l.q(), w));
            }
    }
    return out;
}

FieldTensor tensor(const FieldElement& x, const FieldElement& y) {
    FieldTensor out;
    for (auto& [kx, a] : x)
        for (auto& [ky, b] : y) tensor_add(out, kx, a.module, ky, b.module, a.coeff * b.coeff);
    return out;
}

FieldTensor tensor_mul(const FieldTensor& x, const FieldTensor& y, std::uint64_t budget) {
    // (x1 (x) x2)(y1 (x) y2) = v^{(|x2|, |y1|)} x1 y1 (x) x2 y2
    FieldTensor out;
    for (auto& [kx, a] : x)
        for (auto& [ky, b] : y) {
            const Quiver& q = *a.left.quiver;
            FieldElement x1, x2, y1, y2;
            x1.emplace(kx.first, FieldTerm{a.left, FieldScalar(a.left.q(), 1)});
            x2.emplace(kx.second, FieldTerm{a.right, FieldScalar(a.left.q(), 1)});
            y1.emplace(ky.first, FieldTerm{b.left, FieldScalar(a.left.q(), 1)});
            y2.emplace(ky.second, FieldTerm{b.right, FieldScalar(a.left.q(), 1)});
            FieldScalar c = a.coeff * b.coeff * FieldScalar::vpow(a.left.q(), q.symmetric_form(a.right.dims, b.left.dims));
            auto p1 = field_product(x1, y1, {}, budget), p2 = field_product(x2, y2, {}, budget);
            for (auto& [k1, t1] : p1)
                for (auto& [k2, t2] : p2) tensor_add(out, k1, t1.module, k2, t2.module, c * t1.coeff * t2.coeff);
        }
    return out;
}

FieldScalar field_green(const FieldTensor& x, const FieldTensor& y) {
    FieldScalar s;
    for (auto& [k, t] : x) {
        auto it = y.find(k);
        if (it == y.end()) continue;
        s += t.coeff * it->second.coeff * green_weight(k.first, t.left) * green_weight(k.second, t.right);
    }
    return s;
}

// ---------------------------------------------------------------- Serre relations

std::vector<Word> serre_words(const Quiver& q, int i, int j) {
    int r = 1 - q.symmetric_form(q.simple(i), q.simple(j));
    std::vector<Word> out;
    for (int s = 0; s <= r; ++s) {
        Word w;
        if (s) w.push_back({i, s});
        w.push_back({j, 1});
        if (r - s) w.push_back({i, r - s});
        out.push_back(w);
    }
    return out;
}

std::map<std::string, LaurentPoly> serre_generic(const AlgebraContext& ctx, int i, int j) {
    auto words = serre_words(*ctx.quiver, i, j);
    auto types = enumerate_types(*ctx.quiver, word_dim(*ctx.quiver, words[0]));
    std::vector<LaurentPoly> vals(types.size());
    parallel_for(types.size(), ctx.threads, [&](std::size_t k) {
        LaurentPoly s;
        for (std::size_t w = 0; w < words.size(); ++w) {
            LaurentPoly c = monomial_coeff(ctx, words[w], types[k]);
            s += w % 2 ? -c : c;
        }
        vals[k] = s;
    });
    std::map<std::string, LaurentPoly> out;
    for (std::size_t k = 0; k < types.size(); ++k) out[types[k].str()] = vals[k];
    return out;
}

int serre_field_check(QuiverPtr q, int i, int j, const Field& f) {
    auto words = serre_words(*q, i, j);
    auto ls = all_classes(q, word_dim(*q, words[0]), f);
    for (auto& l : ls) {
        FieldScalar s(f.q(), 0);
        for (std::size_t w = 0; w < words.size(); ++w) {
            FieldScalar c = FieldScalar::vpow(f.q(), word_exponent(*q, words[w])) * FieldScalar(f.q(), Rational(flag_count(l, words[w])));
            s += w % 2 ? FieldScalar(f.q(), 0) - c : c;
        }
        if (!s.is_zero())
            throw std::runtime_error("Serre relation fails on " + class_key(l) + " over GF(" + std::to_string(f.q()) + "): " + s.str());
    }
    return static_cast<int>(ls.size());
}

}  // namespace hallcanon
