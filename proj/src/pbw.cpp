#include "hallcanon/pbw.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <stdexcept>

#include "hallcanon/parallel.hpp"

namespace hallcanon {

using nlohmann::json;

std::string cmp_str(Cmp c) {
    switch (c) {
        case Cmp::Less: return "less";
        case Cmp::Greater: return "greater";
        case Cmp::Equal: return "equal";
        default: return "incomparable";
    }
}

// ---------------------------------------------------------------- orders

namespace {
// dim Hom(S_i[l], M(pi)) for l <= window, computed once over GF(2) (the numbers do not depend on q)
std::vector<int> hom_profile(const Quiver& q, const Multisegment& pi, int window) {
    static std::mutex lock;
    static std::map<std::string, std::vector<int>> memo;
    std::string key = q.id() + "|" + pi.str() + "|" + std::to_string(window);
    {
        std::lock_guard<std::mutex> g(lock);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    auto qp = std::make_shared<Quiver>(q);
    const Field& f = Field::get(2);
    FqModule m = build_multisegment(qp, pi, f);
    std::vector<int> out;
    for (int i = 0; i < pi.n(); ++i)
        for (int l = 1; l <= window; ++l) {
            if (pi.linear() && i + l > pi.n()) {
                out.push_back(0);
                continue;
            }
            out.push_back(hom_dim(build_multisegment(qp, Multisegment::segment(pi.n(), pi.linear(), i, l), f), m));
        }
    std::lock_guard<std::mutex> g(lock);
    memo[key] = out;
    return out;
}

// -1, 0, 1 comparison under <_L: first differing multiplicity along the given index sequence
int compare_L(const std::map<int, int>& a, const std::map<int, int>& b, bool minus) {
    std::set<int> keys;
    for (auto& [k, m] : a) keys.insert(k);
    for (auto& [k, m] : b) keys.insert(k);
    std::vector<int> order(keys.begin(), keys.end());
    if (minus) std::reverse(order.begin(), order.end());  // t = 0, -1, -2, ...
    for (int t : order) {
        auto ia = a.find(t), ib = b.find(t);
        int x = ia == a.end() ? 0 : ia->second, y = ib == b.end() ? 0 : ib->second;
        if (x != y) return x > y ? 1 : -1;
    }
    return 0;
}

// a strictly below b
bool below(const Quiver& q, const NIndex& a, const NIndex& b) {
    int cm = compare_L(a.pre, b.pre, true), cp = compare_L(a.inj, b.inj, false);
    if (cm >= 0 && cp >= 0 && (cm || cp)) return true;
    if (cm || cp) return false;
    if (a.m() != b.m()) return a.m() < b.m();
    if (a.tubes != b.tubes) {
        if (a.tubes.size() != b.tubes.size()) return false;
        bool strict = false;
        for (std::size_t k = 0; k < a.tubes.size(); ++k) {
            Cmp c = compare_G(q, a.tubes[k], b.tubes[k]);
            if (c == Cmp::Less)
                strict = true;
            else if (c != Cmp::Equal)
                return false;
        }
        return strict;
    }
    return b.lam < a.lam;  // larger partitions sit lower
}
}  // namespace

Cmp compare_G(const Quiver& q, const Multisegment& a, const Multisegment& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("<=_G compares modules of equal dimension");
    if (a == b) return Cmp::Equal;
    int window = a.total_length() + b.total_length();
    auto ha = hom_profile(q, a, window), hb = hom_profile(q, b, window);
    bool ge = true, le = true;
    for (std::size_t k = 0; k < ha.size(); ++k) {
        if (ha[k] < hb[k]) ge = false;
        if (ha[k] > hb[k]) le = false;
    }
    if (ge && le) throw std::logic_error("hom profiles agree on distinct multisegments " + a.str() + ", " + b.str());
    if (ge) return Cmp::Less;  // more homs: more degenerate
    if (le) return Cmp::Greater;
    return Cmp::Incomparable;
}

Cmp order_cmp(const Quiver& q, const NIndex& a, const NIndex& b) {
    if (a.dim(q) != b.dim(q)) throw std::invalid_argument("order compares indices of different dimension");
    if (a == b) return Cmp::Equal;
    if (below(q, a, b)) return Cmp::Less;
    if (below(q, b, a)) return Cmp::Greater;
    return Cmp::Incomparable;
}

// ---------------------------------------------------------------- dim f

BigInt dim_f(const Quiver& q, const DimVector& nu) {
    // positive roots up to nu with multiplicities
    std::vector<std::pair<DimVector, int>> roots;
    Family fam = family_of(q);
    int n = q.n();
    if (fam == Family::Kronecker) {
        int top = std::max(nu[0], nu[1]);
        for (int k = 0; k <= top; ++k) {
            roots.push_back({{k, k + 1}, 1});
            roots.push_back({{k + 1, k}, 1});
            if (k > 0) roots.push_back({{k, k}, 1});
        }
    } else {
        if (q.kind() == QuiverKind::Jordan) throw std::invalid_argument("no composition algebra root system for the Jordan quiver");
        bool linear = q.kind() != QuiverKind::Cyclic;
        int top = total(nu);
        for (int l = 1; l <= top; ++l) {
            if (!linear && l % n == 0) {
                roots.push_back({scaled(q.delta(), l / n), n - 1});
                continue;
            }
            for (int i = 0; i < n; ++i) {
                if (linear && i + l > n) continue;
                DimVector d(n, 0);
                for (int j = 0; j < l; ++j) d[(i + j) % n]++;
                roots.push_back({d, 1});
            }
        }
    }
    // coefficient of x^nu in prod (1 - x^alpha)^(-mult), by dynamic programming over the box below nu
    std::vector<int> stride(n, 1);
    for (int i = 1; i < n; ++i) stride[i] = stride[i - 1] * (nu[i - 1] + 1);
    int size = stride[n - 1] * (nu[n - 1] + 1);
    std::vector<BigInt> series(size, 0);
    series[0] = 1;
    auto decode = [&](int idx) {
        DimVector d(n);
        for (int i = 0; i < n; ++i) d[i] = (idx / stride[i]) % (nu[i] + 1);
        return d;
    };
    auto encode = [&](const DimVector& d) {
        int idx = 0;
        for (int i = 0; i < n; ++i) idx += d[i] * stride[i];
        return idx;
    };
    for (auto& [alpha, mult] : roots) {
        if (!leq(alpha, nu)) continue;
        int step = encode(alpha);
        for (int r = 0; r < mult; ++r)
            for (int idx = 0; idx < size; ++idx) {
                DimVector d = decode(idx);
                if (!leq(alpha, d)) continue;
                series[idx] += series[idx - step];
            }
    }
    return series[size - 1];
}

// ---------------------------------------------------------------- index sets

OrderedIndexSet enumerate_indices(const Quiver& q, const DimVector& nu, int extension) {
    OrderedIndexSet out;
    out.nu = nu;
    out.extension = extension;
    auto all = enumerate_N_indices(q, nu);
    std::size_t n = all.size();
    std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
    std::vector<int> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && order_cmp(q, all[i], all[j]) == Cmp::Less) {
                less[i][j] = true;
                indeg[j]++;
            }
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        int pick = -1;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t i = extension ? n - 1 - k : k;
            if (!done[i] && indeg[i] == 0) {
                pick = static_cast<int>(i);
                break;
            }
        }
        if (pick < 0) throw std::logic_error("order relation has a cycle at " + dim_str(nu));
        done[pick] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (less[pick][j]) indeg[j]--;
        out.all.push_back(all[pick]);
        if (all[pick].aperiodic()) out.aperiodic.push_back(all[pick]);
    }
    return out;
}

// ---------------------------------------------------------------- words

Word dimvec_word(const Quiver& q, const DimVector& nu) {
    auto order = q.topological_order();
    if (!order) throw std::invalid_argument("dimension-vector monomial needs an acyclic quiver");
    Word w;
    for (int i : *order)
        if (nu[i]) w.push_back({i, nu[i]});
    return w;
}

namespace {
struct Peel {
    int vertex, amount;
    Multisegment rest;
};

// candidate first steps: tops of the `a` longest segments with top i, re-attachable generically
std::vector<Peel> peel_candidates(const Multisegment& pi) {
    int n = pi.n();
    std::vector<Peel> out;
    for (int i = 0; i < n; ++i) {
        std::vector<int> lens;  // top i, descending
        for (auto& [seg, m] : pi.segments())
            if (seg.first == i)
                for (int k = 0; k < m; ++k) lens.push_back(seg.second);
        if (lens.empty()) continue;
        std::sort(lens.rbegin(), lens.rend());
        int next = pi.linear() ? i + 1 : (i + 1) % n;
        int max_o = 0;
        if (next < n)
            for (auto& [seg, m] : pi.segments())
                if (seg.first == next) max_o = std::max(max_o, seg.second);
        for (int a = static_cast<int>(lens.size()); a >= 1; --a) {
            if (lens[a - 1] - 1 < max_o) continue;
            Multisegment rest(n, pi.linear());
            std::map<int, int> taken;  // length -> count removed
            for (int k = 0; k < a; ++k) taken[lens[k]]++;
            for (auto& [seg, m] : pi.segments()) {
                int keep = m;
                if (seg.first == i) {
                    auto it = taken.find(seg.second);
                    if (it != taken.end()) keep -= it->second;
                }
                if (keep) rest.add(seg.first, seg.second, keep);
            }
            for (auto& [l, c] : taken)
                if (l > 1) rest.add(next, l - 1, c);
            out.push_back(Peel{i, a, rest});
        }
    }
    return out;
}

bool distinguished(const AlgebraContext& ctx, const Multisegment& pi, const Word& w, AlgebraElement* expansion) {
    AlgebraElement m = monomial(ctx, w);
    NIndex self = NIndex::segments(pi);
    if (m.coeff(self) != LaurentPoly(1)) return false;
    for (auto& [k, c] : m.terms)
        if (!(k == self) && compare_G(*ctx.quiver, k.tubes[0], pi) != Cmp::Less) return false;
    if (expansion) *expansion = m;
    return true;
}
}  // namespace

std::vector<Word> distinguished_words(const AlgebraContext& ctx, const Multisegment& pi, int want) {
    if (!pi.is_aperiodic()) throw std::invalid_argument("distinguished words need an aperiodic multisegment: " + pi.str());
    std::vector<Word> found;
    int leaves = 0;
    const int leaf_cap = 64;
    Word cur;
    std::function<void(const Multisegment&)> go = [&](const Multisegment& rest) {
        if (static_cast<int>(found.size()) >= want || leaves >= leaf_cap) return;
        if (rest.empty()) {
            ++leaves;
            if (distinguished(ctx, pi, cur, nullptr)) found.push_back(cur);
            return;
        }
        for (auto& p : peel_candidates(rest)) {
            if (!cur.empty() && cur.back().vertex == p.vertex) continue;  // merge-free words only
            cur.push_back({p.vertex, p.amount});
            go(p.rest);
            cur.pop_back();
            if (static_cast<int>(found.size()) >= want || leaves >= leaf_cap) return;
        }
    };
    go(pi);
    if (found.empty()) throw std::runtime_error("no distinguished word found for " + pi.str());
    return found;
}

Word distinguished_word(const AlgebraContext& ctx, const Multisegment& pi) {
    static std::mutex lock;
    static std::map<std::string, Word> memo;
    std::string key = ctx.quiver->id() + "|" + pi.str();
    {
        std::lock_guard<std::mutex> g(lock);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    Word w = distinguished_words(ctx, pi, 1).front();
    std::lock_guard<std::mutex> g(lock);
    memo[key] = w;
    return w;
}

Multisegment generic_extension(const AlgebraContext& ctx, const Multisegment& m, const Multisegment& n) {
    if (m.empty()) return n;
    if (n.empty()) return m;
    PolyCache mem("");
    PolyCache* cache = ctx.cache ? ctx.cache : &mem;
    std::optional<Multisegment> best;
    int best_end = 0;
    bool tie = false;
    for (auto& l : enumerate_multisegments(m.n(), m.linear(), m.dim() + n.dim())) {
        auto h = hall_polynomial(ctx.quiver, HallTriple{ModuleType::of(l), ModuleType::of(m), ModuleType::of(n)}, cache, ctx.fit,
                                 ctx.budget);
        if (h.poly.c.empty()) continue;
        int e = generic_end_dim(ctx.quiver, ModuleType::of(l));
        if (!best || e < best_end) {
            best = l;
            best_end = e;
            tie = false;
        } else if (e == best_end) {
            tie = true;
        }
    }
    if (!best) throw std::logic_error("no extension found");
    if (tie) throw std::logic_error("two extensions with minimal dim End");
    return *best;
}

Word index_word(const AlgebraContext& ctx, const NIndex& c) {
    const Quiver& q = *ctx.quiver;
    if (family_of(q) == Family::Segments) {
        if (!c.aperiodic()) throw std::invalid_argument("monomials are attached to aperiodic indices");
        if (c.tubes.at(0).empty()) return {};
        return distinguished_word(ctx, c.tubes[0]);
    }
    Word w;
    auto append = [&](const DimVector& d) {
        for (auto& s : dimvec_word(q, d)) w.push_back(s);
    };
    // c_-: beta_0, beta_-1, ...; then lambda delta; then c_+: ..., beta_2, beta_1
    for (auto it = c.pre.rbegin(); it != c.pre.rend(); ++it) append(scaled(DimVector{-it->first, 1 - it->first}, it->second));
    for (int p : c.lam.parts()) append(scaled(q.delta(), p));
    for (auto it = c.inj.rbegin(); it != c.inj.rend(); ++it) append(scaled(DimVector{it->first, it->first - 1}, it->second));
    return w;
}

// ---------------------------------------------------------------- matrices

LMatrix mat_identity(std::size_t n) {
    LMatrix m(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

LMatrix mat_mul(const LMatrix& a, const LMatrix& b) {
    if (a.empty()) return {};
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    LMatrix r(n, std::vector<LaurentPoly>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (a[i][j].is_zero()) continue;
            for (std::size_t l = 0; l < m; ++l)
                if (!b[j][l].is_zero()) r[i][l] += a[i][j] * b[j][l];
        }
    return r;
}

LMatrix mat_bar(const LMatrix& a) {
    LMatrix r = a;
    for (auto& row : r)
        for (auto& x : row) x = x.bar();
    return r;
}

LMatrix unitriangular_inverse(const LMatrix& a) {
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i][i] != LaurentPoly(1)) throw std::logic_error("matrix is not unitriangular (diagonal)");
        for (std::size_t j = i + 1; j < n; ++j)
            if (!a[i][j].is_zero()) throw std::logic_error("matrix is not lower triangular");
    }
    LMatrix inv = mat_identity(n);
    // row i of inv: inv[i][j] = -sum_{j <= k < i} a[i][k] inv[k][j]
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            LaurentPoly s;
            for (std::size_t k = j; k < i; ++k)
                if (!a[i][k].is_zero() && !inv[k][j].is_zero()) s += a[i][k] * inv[k][j];
            inv[i][j] = -s;
        }
    return inv;
}

json mat_json(const LMatrix& a) {
    json j = json::array();
    for (auto& row : a) {
        json r = json::array();
        for (auto& x : row) r.push_back(x.str());
        j.push_back(r);
    }
    return j;
}

// ---------------------------------------------------------------- PBW basis

AlgebraElement PbwData::over_n(const std::vector<LaurentPoly>& row) const {
    AlgebraElement x;
    for (std::size_t j = 0; j < row.size(); ++j) x.add(order.all[j], row[j]);
    return x;
}

AlgebraElement PbwData::monomial(std::size_t i) const { return over_n(phi.at(i)); }
AlgebraElement PbwData::e(std::size_t i) const { return over_n(e_over_n.at(i)); }

PbwData pbw_basis(const AlgebraContext& ctx, const DimVector& nu, int extension, const std::vector<Word>* override_words) {
    const Quiver& q = *ctx.quiver;
    PbwData d;
    d.nu = nu;
    d.order = enumerate_indices(q, nu, extension);
    std::size_t na = d.order.aperiodic.size(), nc = d.order.all.size();
    if (override_words && override_words->size() != na) throw std::invalid_argument("word override has the wrong length");
    d.words.resize(na);
    std::vector<AlgebraElement> mons(na);
    // words first (sequentially: the search itself fans out), then expansions in parallel
    for (std::size_t i = 0; i < na; ++i) d.words[i] = override_words ? (*override_words)[i] : index_word(ctx, d.order.aperiodic[i]);
    AlgebraContext inner = ctx;
    inner.threads = 1;
    parallel_for(na, ctx.threads, [&](std::size_t i) { mons[i] = monomial(inner, d.words[i]); });
    std::map<NIndex, std::size_t> col;
    for (std::size_t j = 0; j < nc; ++j) col[d.order.all[j]] = j;
    d.phi.assign(na, std::vector<LaurentPoly>(nc));
    for (std::size_t i = 0; i < na; ++i)
        for (auto& [k, c] : mons[i].terms) {
            auto it = col.find(k);
            if (it == col.end()) throw std::logic_error("monomial has a term outside G_nu: " + k.str());
            d.phi[i][it->second] = c;
        }
    // leading terms: the own column has coefficient 1 and every other term lies strictly below
    for (std::size_t i = 0; i < na; ++i) {
        const NIndex& self = d.order.aperiodic[i];
        for (std::size_t j = 0; j < nc; ++j) {
            if (d.phi[i][j].is_zero()) continue;
            const NIndex& k = d.order.all[j];
            if (k == self) {
                if (d.phi[i][j] != LaurentPoly(1))
                    throw std::logic_error("monomial for " + self.str() + " has leading coefficient " + d.phi[i][j].str());
            } else if (order_cmp(q, k, self) != Cmp::Less) {
                throw std::logic_error("monomial for " + self.str() + " has term " + k.str() + " not below it");
            }
        }
    }
    d.a.assign(na, std::vector<LaurentPoly>(na));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) d.a[i][j] = d.phi[i][col[d.order.aperiodic[j]]];
    d.a_inv = unitriangular_inverse(d.a);
    d.e_over_n = mat_mul(d.a_inv, d.phi);
    return d;
}

}  // namespace hallcanon
