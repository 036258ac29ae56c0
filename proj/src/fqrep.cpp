#include "hallcanon/fqrep.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace hallcanon {

void FqModule::validate() const {
    if (!quiver || !field) throw std::logic_error("module without quiver or field");
    if (static_cast<int>(dims.size()) != quiver->n()) throw std::invalid_argument("dimension vector does not match quiver");
    if (maps.size() != quiver->arrows().size()) throw std::invalid_argument("one matrix per arrow required");
    for (std::size_t h = 0; h < maps.size(); ++h) {
        auto& a = quiver->arrows()[h];
        if (maps[h].rows() != dims[a.s] || maps[h].cols() != dims[a.t]) throw std::invalid_argument("arrow matrix shape mismatch");
    }
}

nlohmann::json FqModule::to_json() const {
    nlohmann::json mats = nlohmann::json::array();
    for (auto& m : maps) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < m.rows(); ++i) rows.push_back(std::vector<int>(m.row(i), m.row(i) + m.cols()));
        mats.push_back(rows);
    }
    return {{"field", q()}, {"dims", dims}, {"maps", mats}};
}

FqModule zero_module(QuiverPtr q, const Field& f) {
    FqModule m;
    m.quiver = q;
    m.field = &f;
    m.dims.assign(q->n(), 0);
    for (std::size_t h = 0; h < q->arrows().size(); ++h) m.maps.emplace_back(0, 0);
    return m;
}

FqModule simple_module(QuiverPtr q, const Field& f, int i) {
    FqModule m;
    m.quiver = q;
    m.field = &f;
    m.dims = q->simple(i);
    for (auto& a : q->arrows()) m.maps.emplace_back(m.dims[a.s], m.dims[a.t]);
    return m;
}

FqModule direct_sum(const FqModule& a, const FqModule& b) {
    if (a.quiver->id() != b.quiver->id() || a.field != b.field) throw std::invalid_argument("direct sum across quivers or fields");
    FqModule m;
    m.quiver = a.quiver;
    m.field = a.field;
    m.dims = a.dims + b.dims;
    for (std::size_t h = 0; h < a.maps.size(); ++h) {
        const Mat &x = a.maps[h], &y = b.maps[h];
        Mat z(x.rows() + y.rows(), x.cols() + y.cols());
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j) z.at(i, j) = x.at(i, j);
        for (int i = 0; i < y.rows(); ++i)
            for (int j = 0; j < y.cols(); ++j) z.at(x.rows() + i, x.cols() + j) = y.at(i, j);
        m.maps.push_back(std::move(z));
    }
    return m;
}

FqModule change_basis(const FqModule& m, const std::vector<Mat>& g) {
    // new basis rows b = g_v; new map: b_s X_h expressed in basis g_t, i.e. g_s X_h g_t^{-1}
    FqModule r = m;
    const Field& f = *m.field;
    for (std::size_t h = 0; h < m.maps.size(); ++h) {
        auto& a = m.quiver->arrows()[h];
        r.maps[h] = mul(f, mul(f, g[a.s], m.maps[h]), inverse(f, g[a.t]));
    }
    return r;
}

bool is_nilpotent(const FqModule& m) {
    // every path of length total_dim must act as zero: check via powers of the block operator
    int n = m.total_dim();
    if (n == 0) return true;
    const Field& f = *m.field;
    std::vector<int> off(m.dims.size() + 1, 0);
    for (std::size_t i = 0; i < m.dims.size(); ++i) off[i + 1] = off[i] + m.dims[i];
    // sum of all arrows as one operator on the total space (nilpotent iff all paths eventually vanish
    // is not captured by a sum in general, so track the span of path images instead)
    Mat span = Mat::identity(n);
    for (int step = 0; step < n; ++step) {
        Mat next(0, n);
        for (std::size_t h = 0; h < m.maps.size(); ++h) {
            auto& a = m.quiver->arrows()[h];
            Mat part(span.rows(), n);
            for (int r = 0; r < span.rows(); ++r)
                for (int i = 0; i < m.dims[a.s]; ++i) {
                    Elem x = span.at(r, off[a.s] + i);
                    if (!x) continue;
                    for (int j = 0; j < m.dims[a.t]; ++j)
                        part.at(r, off[a.t] + j) = f.add(part.at(r, off[a.t] + j), f.mul(x, m.maps[h].at(i, j)));
                }
            next = Mat::vstack(next, part);
        }
        rref(f, next);
        span = next;
        if (span.rows() == 0) return true;
    }
    return false;
}

std::vector<std::vector<Mat>> hom_basis(const FqModule& m, const FqModule& n) {
    if (m.quiver->id() != n.quiver->id() || m.field != n.field) throw std::invalid_argument("hom across quivers or fields");
    const Field& f = *m.field;
    const int nv = m.quiver->n();
    std::vector<int> off(nv + 1, 0);
    for (int v = 0; v < nv; ++v) off[v + 1] = off[v] + m.dims[v] * n.dims[v];
    const int unknowns = off[nv];
    int eqs = 0;
    for (auto& a : m.quiver->arrows()) eqs += m.dims[a.s] * n.dims[a.t];
    std::vector<std::vector<Mat>> out;
    if (unknowns == 0) return out;
    Mat sys(eqs, unknowns);
    int row = 0;
    for (std::size_t h = 0; h < m.maps.size(); ++h) {
        auto& a = m.quiver->arrows()[h];
        const Mat &mh = m.maps[h], &nh = n.maps[h];
        for (int i = 0; i < m.dims[a.s]; ++i)
            for (int j = 0; j < n.dims[a.t]; ++j, ++row) {
                // sum_c M_h[i][c] f_t[c][j] - sum_c f_s[i][c] N_h[c][j]
                for (int c = 0; c < m.dims[a.t]; ++c) {
                    int var = off[a.t] + c * n.dims[a.t] + j;
                    sys.at(row, var) = f.add(sys.at(row, var), mh.at(i, c));
                }
                for (int c = 0; c < n.dims[a.s]; ++c) {
                    int var = off[a.s] + i * n.dims[a.s] + c;
                    sys.at(row, var) = f.sub(sys.at(row, var), nh.at(c, j));
                }
            }
    }
    Mat ns = right_nullspace(f, sys);
    for (int k = 0; k < ns.cols(); ++k) {
        std::vector<Mat> hom;
        for (int v = 0; v < nv; ++v) {
            Mat fv(m.dims[v], n.dims[v]);
            for (int i = 0; i < m.dims[v]; ++i)
                for (int j = 0; j < n.dims[v]; ++j) fv.at(i, j) = ns.at(off[v] + i * n.dims[v] + j, k);
            hom.push_back(std::move(fv));
        }
        out.push_back(std::move(hom));
    }
    return out;
}

int hom_dim(const FqModule& m, const FqModule& n) {
    if (m.quiver->id() != n.quiver->id() || m.field != n.field) throw std::invalid_argument("hom across quivers or fields");
    const Field& f = *m.field;
    const int nv = m.quiver->n();
    std::vector<int> off(nv + 1, 0);
    for (int v = 0; v < nv; ++v) off[v + 1] = off[v] + m.dims[v] * n.dims[v];
    const int unknowns = off[nv];
    if (unknowns == 0) return 0;
    int eqs = 0;
    for (auto& a : m.quiver->arrows()) eqs += m.dims[a.s] * n.dims[a.t];
    Mat sys(eqs, unknowns);
    int row = 0;
    for (std::size_t h = 0; h < m.maps.size(); ++h) {
        auto& a = m.quiver->arrows()[h];
        const Mat &mh = m.maps[h], &nh = n.maps[h];
        for (int i = 0; i < m.dims[a.s]; ++i)
            for (int j = 0; j < n.dims[a.t]; ++j, ++row) {
                for (int c = 0; c < m.dims[a.t]; ++c) {
                    int var = off[a.t] + c * n.dims[a.t] + j;
                    sys.at(row, var) = f.add(sys.at(row, var), mh.at(i, c));
                }
                for (int c = 0; c < n.dims[a.s]; ++c) {
                    int var = off[a.s] + i * n.dims[a.s] + c;
                    sys.at(row, var) = f.sub(sys.at(row, var), nh.at(c, j));
                }
            }
    }
    return unknowns - rank(f, sys);
}

int end_dim(const FqModule& m) { return hom_dim(m, m); }

int ext_dim(const FqModule& m, const FqModule& n) { return hom_dim(m, n) - m.quiver->euler_form(m.dims, n.dims); }

namespace {
std::uint64_t checked_pow(int q, int k, std::uint64_t guard) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) {
        r *= static_cast<std::uint64_t>(q);
        if (r > guard) throw std::runtime_error("enumeration budget exceeded: q^" + std::to_string(k));
    }
    return r;
}

// visit every linear combination of the basis; callback returns true to stop
bool for_each_combination(const Field& f, const std::vector<std::vector<Mat>>& basis, std::uint64_t guard,
                          const std::function<bool(const std::vector<Mat>&)>& cb) {
    int k = static_cast<int>(basis.size());
    std::uint64_t total_count = checked_pow(f.q(), k, guard);
    std::vector<int> coef(k, 0);
    for (std::uint64_t c = 0; c < total_count; ++c) {
        std::uint64_t x = c;
        for (int i = 0; i < k; ++i) {
            coef[i] = static_cast<int>(x % f.q());
            x /= f.q();
        }
        std::vector<Mat> cur;
        if (k == 0) return false;
        for (std::size_t v = 0; v < basis[0].size(); ++v) {
            Mat acc(basis[0][v].rows(), basis[0][v].cols());
            for (int i = 0; i < k; ++i)
                if (coef[i]) acc = add(f, acc, scale(f, basis[i][v], static_cast<Elem>(coef[i])));
            cur.push_back(std::move(acc));
        }
        if (cb(cur)) return true;
    }
    return false;
}
}  // namespace

std::uint64_t aut_order(const FqModule& m, std::uint64_t guard) {
    if (m.total_dim() == 0) return 1;
    const Field& f = *m.field;
    auto basis = hom_basis(m, m);
    std::uint64_t count = 0;
    for_each_combination(f, basis, guard, [&](const std::vector<Mat>& g) {
        for (auto& x : g)
            if (!invertible(f, x)) return false;
        ++count;
        return false;
    });
    return count;
}

bool isomorphic(const FqModule& m, const FqModule& n, std::uint64_t guard) {
    if (m.dims != n.dims) return false;
    if (m.total_dim() == 0) return true;
    int e = end_dim(m);
    if (hom_dim(m, n) != e || hom_dim(n, m) != e || end_dim(n) != e) return false;
    const Field& f = *m.field;
    auto basis = hom_basis(m, n);
    return for_each_combination(f, basis, guard, [&](const std::vector<Mat>& g) {
        for (auto& x : g)
            if (!invertible(f, x)) return false;
        return true;
    });
}

void for_each_submodule(const FqModule& l, const DimVector* target, const std::function<bool(const GradedSubspace&)>& cb,
                        std::uint64_t budget) {
    const Quiver& q = *l.quiver;
    const Field& f = *l.field;
    const int nv = q.n();
    auto topo = q.topological_order();
    std::vector<int> order;
    bool acyclic = topo.has_value();
    if (acyclic)
        order = *topo;
    else
        for (int v = 0; v < nv; ++v) order.push_back(v);
    std::vector<int> pos(nv);
    for (int k = 0; k < nv; ++k) pos[order[k]] = k;
    GradedSubspace w;
    w.basis.assign(nv, Mat());
    w.piv.assign(nv, {});
    w.dims.assign(nv, 0);
    std::uint64_t visited = 0;
    bool stop = false;
    std::function<void(int)> go = [&](int k) {
        if (stop) return;
        if (k == nv) {
            if (!acyclic) {
                for (std::size_t h = 0; h < l.maps.size(); ++h) {
                    auto& a = q.arrows()[h];
                    Mat img = mul(f, w.basis[a.s], l.maps[h]);
                    if (!contains_rows(f, w.basis[a.t], w.piv[a.t], img)) return;
                }
            }
            if (budget && ++visited > budget) throw std::runtime_error("submodule census budget exceeded");
            if (!cb(w)) stop = true;
            return;
        }
        int v = order[k];
        int dv = l.dims[v];
        Mat lower(0, dv);
        for (std::size_t h = 0; h < l.maps.size(); ++h) {
            auto& a = q.arrows()[h];
            if (a.t != v || a.s == v || pos[a.s] > k) continue;
            lower = Mat::vstack(lower, mul(f, w.basis[a.s], l.maps[h]));
        }
        int lo = 0, hi = dv;
        if (target) lo = hi = (*target)[v];
        for (int d = lo; d <= hi && !stop; ++d) {
            for_each_subspace_between(f, lower, Mat::identity(dv), d, [&](const Mat& sub, const std::vector<int>& piv) {
                w.basis[v] = sub;
                w.piv[v] = piv;
                w.dims[v] = d;
                go(k + 1);
                return !stop;
            });
        }
        w.basis[v] = Mat();
        w.piv[v].clear();
        w.dims[v] = 0;
    };
    go(0);
}

FqModule submodule(const FqModule& l, const GradedSubspace& w) {
    const Field& f = *l.field;
    FqModule m;
    m.quiver = l.quiver;
    m.field = l.field;
    m.dims = w.dims;
    for (std::size_t h = 0; h < l.maps.size(); ++h) {
        auto& a = l.quiver->arrows()[h];
        Mat img = mul(f, w.basis[a.s].rows() ? w.basis[a.s] : Mat(0, l.dims[a.s]), l.maps[h]);
        m.maps.push_back(coords_in_rref(w.basis[a.t], w.piv[a.t], img));
    }
    return m;
}

FqModule quotient(const FqModule& l, const GradedSubspace& w) {
    const Field& f = *l.field;
    const int nv = l.quiver->n();
    std::vector<std::vector<int>> freec(nv);
    FqModule m;
    m.quiver = l.quiver;
    m.field = l.field;
    m.dims.assign(nv, 0);
    for (int v = 0; v < nv; ++v) {
        std::vector<bool> isp(l.dims[v], false);
        for (int c : w.piv[v]) isp[c] = true;
        for (int c = 0; c < l.dims[v]; ++c)
            if (!isp[c]) freec[v].push_back(c);
        m.dims[v] = static_cast<int>(freec[v].size());
    }
    for (std::size_t h = 0; h < l.maps.size(); ++h) {
        auto& a = l.quiver->arrows()[h];
        Mat rows = l.maps[h].rows_subset(freec[a.s]);
        Mat wt = w.basis[a.t].rows() ? w.basis[a.t] : Mat(0, l.dims[a.t]);
        m.maps.push_back(coords_mod_rref(f, wt, w.piv[a.t], rows));
    }
    return m;
}

std::uint64_t flag_count(const FqModule& l, const Word& w) {
    const Quiver& q = *l.quiver;
    const Field& f = *l.field;
    const int nv = q.n();
    const int s = static_cast<int>(w.size());
    // remaining dimension vector after step j
    std::vector<DimVector> rem(s + 1, DimVector(nv, 0));
    for (int j = s - 1; j >= 0; --j) {
        rem[j] = rem[j + 1];
        rem[j][w[j].vertex] += w[j].amount;
    }
    if (rem[0] != l.dims) return 0;
    std::vector<std::unordered_map<std::string, std::uint64_t>> memo(s + 1);
    std::vector<Mat> cur(nv);
    for (int v = 0; v < nv; ++v) cur[v] = Mat::identity(l.dims[v]);
    auto key = [&]() {
        std::string k;
        for (int v = 0; v < nv; ++v) {
            k.push_back(static_cast<char>(cur[v].rows()));
            k.append(reinterpret_cast<const char*>(cur[v].data().data()), cur[v].data().size());
        }
        return k;
    };
    std::function<std::uint64_t(int)> go = [&](int j) -> std::uint64_t {
        if (j == s) return 1;
        std::string k = key();
        if (auto it = memo[j].find(k); it != memo[j].end()) return it->second;
        int i = w[j].vertex;
        int di = l.dims[i];
        Mat lower(0, di);
        for (std::size_t h = 0; h < l.maps.size(); ++h) {
            auto& a = q.arrows()[h];
            if (a.t != i) continue;
            Mat src = cur[a.s].rows() ? cur[a.s] : Mat(0, l.dims[a.s]);
            lower = Mat::vstack(lower, mul(f, src, l.maps[h]));
        }
        std::uint64_t total_count = 0;
        Mat saved = cur[i];
        Mat upper = saved.rows() ? saved : Mat(0, di);
        for_each_subspace_between(f, lower, upper, rem[j + 1][i], [&](const Mat& sub, const std::vector<int>&) {
            cur[i] = sub;
            std::uint64_t c = go(j + 1);
            if (__builtin_add_overflow(total_count, c, &total_count)) throw std::overflow_error("flag count overflow");
            return true;
        });
        cur[i] = saved;
        memo[j].emplace(k, total_count);
        return total_count;
    };
    return go(0);
}

std::string word_str(const Quiver& q, const Word& w) {
    std::string s;
    for (auto& st : w) {
        if (!s.empty()) s += "*";
        s += "u" + q.labels()[st.vertex];
        if (st.amount != 1) s += "^(" + std::to_string(st.amount) + ")";
    }
    return s.empty() ? "1" : s;
}

FqModule reflect_plus(const FqModule& m, int i) {
    const Quiver& q = *m.quiver;
    if (!q.is_sink(i)) throw std::invalid_argument("reflect_plus needs a sink");
    const Field& f = *m.field;
    std::vector<int> into;
    for (std::size_t h = 0; h < q.arrows().size(); ++h)
        if (q.arrows()[h].t == i) into.push_back(static_cast<int>(h));
    int total_in = 0;
    for (int h : into) total_in += m.dims[q.arrows()[h].s];
    Mat phi(0, m.dims[i]);
    for (int h : into) phi = Mat::vstack(phi, m.maps[h]);
    if (phi.rows() == 0) phi = Mat(0, m.dims[i]);
    Mat ker = left_nullspace(f, phi);  // k x total_in
    if (total_in == 0) ker = Mat(0, 0);
    FqModule r;
    r.quiver = std::make_shared<Quiver>(q.reflected_at(i));
    r.field = m.field;
    r.dims = m.dims;
    r.dims[i] = ker.rows();
    r.maps = m.maps;
    int off = 0;
    for (int h : into) {
        int ds = m.dims[q.arrows()[h].s];
        r.maps[h] = ker.rows() ? ker.cols_range(off, off + ds) : Mat(0, ds);
        off += ds;
    }
    r.validate();
    return r;
}

FqModule reflect_minus(const FqModule& m, int i) {
    const Quiver& q = *m.quiver;
    if (!q.is_source(i)) throw std::invalid_argument("reflect_minus needs a source");
    const Field& f = *m.field;
    std::vector<int> out;
    for (std::size_t h = 0; h < q.arrows().size(); ++h)
        if (q.arrows()[h].s == i) out.push_back(static_cast<int>(h));
    int total_out = 0;
    for (int h : out) total_out += m.dims[q.arrows()[h].t];
    Mat psi(m.dims[i], 0);
    for (int h : out) psi = Mat::hstack(psi, m.maps[h]);
    Mat pi = right_nullspace(f, psi);  // total_out x k
    FqModule r;
    r.quiver = std::make_shared<Quiver>(q.reflected_at(i));
    r.field = m.field;
    r.dims = m.dims;
    r.dims[i] = pi.cols();
    r.maps = m.maps;
    int off = 0;
    for (int h : out) {
        int dt = m.dims[q.arrows()[h].t];
        std::vector<int> idx;
        for (int k = 0; k < dt; ++k) idx.push_back(off + k);
        r.maps[h] = pi.rows_subset(idx);
        off += dt;
    }
    r.validate();
    return r;
}

FqModule build_beta(QuiverPtr q, const Field& f, int t) {
    AdmissibleSequence seq(*q);
    std::vector<int> path;  // reflections applied to the quiver, in order
    if (t <= 0)
        for (int k = 0; k >= t + 1; --k) path.push_back(seq.at(k));
    else
        for (int k = 1; k <= t - 1; ++k) path.push_back(seq.at(k));
    Quiver cur = *q;
    for (int v : path) cur = cur.reflected_at(v);
    FqModule m = simple_module(std::make_shared<Quiver>(cur), f, seq.at(t));
    for (auto it = path.rbegin(); it != path.rend(); ++it) m = t <= 0 ? reflect_minus(m, *it) : reflect_plus(m, *it);
    if (m.quiver->id() != q->id()) throw std::logic_error("reflection chain did not return to the quiver");
    m.quiver = q;
    if (m.total_dim() == 0) throw std::invalid_argument("beta_" + std::to_string(t) + " does not exist");
    return m;
}

bool is_linear_An(const Quiver& q) {
    if (q.kind() != QuiverKind::Acyclic || static_cast<int>(q.arrows().size()) != q.n() - 1) return false;
    for (auto& a : q.arrows())
        if (a.t != a.s + 1) return false;
    std::vector<int> seen(q.n(), 0);
    for (auto& a : q.arrows())
        if (seen[a.s]++) return false;
    return true;
}

bool is_kronecker(const Quiver& q) {
    return q.n() == 2 && q.arrows().size() == 2 && q.arrows()[0].s == 0 && q.arrows()[0].t == 1 && q.arrows()[1].s == 0 &&
           q.arrows()[1].t == 1;
}

namespace {
// arrow index from v to v+1 (cyclically unless linear)
std::vector<int> successor_arrows(const Quiver& q, bool linear) {
    std::vector<int> succ(q.n(), -1);
    for (std::size_t h = 0; h < q.arrows().size(); ++h) {
        auto& a = q.arrows()[h];
        if (a.t == (a.s + 1) % q.n() && (!linear || a.t == a.s + 1)) succ[a.s] = static_cast<int>(h);
    }
    return succ;
}

bool multisegment_quiver(const Quiver& q, bool& linear) {
    if (q.kind() == QuiverKind::Cyclic || q.kind() == QuiverKind::Jordan) {
        linear = false;
        return true;
    }
    if (is_linear_An(q)) {
        linear = true;
        return true;
    }
    return false;
}
}  // namespace

FqModule build_multisegment(QuiverPtr q, const Multisegment& pi, const Field& f) {
    bool linear;
    if (!multisegment_quiver(*q, linear)) throw std::invalid_argument("multisegments need a cyclic, Jordan, or linear A_n quiver");
    if (pi.n() != q->n() || pi.linear() != linear) throw std::invalid_argument("multisegment does not match the quiver");
    const int n = q->n();
    auto succ = successor_arrows(*q, linear);
    FqModule m;
    m.quiver = q;
    m.field = &f;
    m.dims = pi.dim();
    for (auto& a : q->arrows()) m.maps.emplace_back(m.dims[a.s], m.dims[a.t]);
    std::vector<int> fill(n, 0);
    for (auto& [key, mult] : pi.segments()) {
        auto [i, l] = key;
        for (int c = 0; c < mult; ++c) {
            int prev_v = -1, prev_idx = -1;
            for (int k = 0; k < l; ++k) {
                int v = (i + k) % n;
                int idx = fill[v]++;
                if (prev_v >= 0) m.maps[succ[prev_v]].at(prev_idx, idx) = 1;
                prev_v = v;
                prev_idx = idx;
            }
        }
    }
    return m;
}

Multisegment classify_multisegment(const FqModule& m) {
    bool linear;
    if (!multisegment_quiver(*m.quiver, linear)) throw std::invalid_argument("multisegments need a cyclic, Jordan, or linear A_n quiver");
    const Field& f = *m.field;
    const int n = m.quiver->n();
    auto succ = successor_arrows(*m.quiver, linear);
    const int tot = m.total_dim();
    // r[i][k] = rank of the path of length k starting at i
    std::vector<std::vector<int>> r(n, std::vector<int>(tot + 2, 0));
    for (int i = 0; i < n; ++i) {
        Mat p = Mat::identity(m.dims[i]);
        int v = i;
        r[i][0] = m.dims[i];
        for (int k = 1; k <= tot + 1; ++k) {
            if (linear && v + 1 >= n) break;
            p = mul(f, p, m.maps[succ[v]]);
            v = (v + 1) % n;
            r[i][k] = rank(f, p);
            if (r[i][k] == 0) break;
        }
    }
    if (!linear)
        for (int i = 0; i < n; ++i)
            if (r[i][tot + 1] != 0) throw std::invalid_argument("module is not nilpotent");
    auto R = [&](int i, int k) -> int {
        if (k < 0 || k > tot + 1) return 0;
        if (linear && i < 0) return 0;
        return r[((i % n) + n) % n][k];
    };
    Multisegment pi(n, linear);
    for (int i = 0; i < n; ++i)
        for (int l = 1; l <= tot; ++l) {
            int c = R(i, l - 1) - R(i - 1, l) - R(i, l) + R(i - 1, l + 1);
            if (c < 0) throw std::logic_error("negative segment count");
            if (c) pi.add(i, l, c);
        }
    if (pi.dim() != m.dims) throw std::logic_error("multisegment classification lost dimension");
    return pi;
}

bool Point::operator<(const Point& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    if (inf != o.inf) return !inf;  // infinity after the finite points of degree 1
    return f < o.f;
}

std::string Point::str() const { return inf ? "inf" : poly_str(f); }

std::vector<Point> closed_points(const Field& f, int d) {
    std::vector<Point> out;
    for (auto& p : monic_irreducibles(f, d)) out.push_back(Point{false, p});
    if (d == 1) out.push_back(Point{true, {}});
    return out;
}

bool KronDesc::operator<(const KronDesc& o) const {
    if (pre != o.pre) return pre < o.pre;
    if (inj != o.inj) return inj < o.inj;
    if (reg.size() != o.reg.size()) return reg.size() < o.reg.size();
    for (std::size_t k = 0; k < reg.size(); ++k) {
        if (!(reg[k].first == o.reg[k].first)) return reg[k].first < o.reg[k].first;
        if (reg[k].second != o.reg[k].second) return reg[k].second < o.reg[k].second;
    }
    return false;
}

std::string KronDesc::str() const {
    std::string s;
    auto term = [&](int m, const std::string& body) {
        if (!s.empty()) s += "+";
        if (m != 1) s += std::to_string(m);
        s += body;
    };
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) term(it->second, "P" + std::to_string(-it->first));
    for (auto& [p, l] : reg) term(1, "R[" + p.str() + "]" + l.str());
    for (auto& [t, m] : inj) term(m, "I" + std::to_string(t));
    return s.empty() ? "0" : s;
}

DimVector KronDesc::dim() const {
    DimVector d{0, 0};
    for (auto& [t, m] : pre) d = d + DimVector{-t * m, (1 - t) * m};
    for (auto& [t, m] : inj) d = d + DimVector{t * m, (t - 1) * m};
    for (auto& [p, l] : reg) d = d + DimVector{p.degree() * l.size(), p.degree() * l.size()};
    return d;
}

namespace {
struct KronCache {
    std::mutex lock;
    std::map<std::pair<int, int>, FqModule> beta;
    std::map<std::tuple<int, bool, FqPoly, int>, FqModule> regular;
};
KronCache& kcache() {
    static KronCache c;
    return c;
}

const FqModule& cached_beta(QuiverPtr q, const Field& f, int t) {
    auto& c = kcache();
    std::lock_guard<std::mutex> lk(c.lock);
    auto key = std::make_pair(f.q(), t);
    auto it = c.beta.find(key);
    if (it == c.beta.end()) it = c.beta.emplace(key, build_beta(q, f, t)).first;
    return it->second;
}
}  // namespace

FqModule build_regular(QuiverPtr q, const Field& f, const Point& z, int l) {
    if (!is_kronecker(*q)) throw std::invalid_argument("regular modules are built for the Kronecker quiver");
    if (!z.inf) {
        auto irr = monic_irreducibles(f, z.degree());
        if (std::find(irr.begin(), irr.end(), z.f) == irr.end()) throw std::invalid_argument("point polynomial is not irreducible");
    }
    int n = l * z.degree();
    FqModule m;
    m.quiver = q;
    m.field = &f;
    m.dims = {n, n};
    if (z.inf) {
        m.maps.push_back(companion(f, poly_pow(f, FqPoly{0, 1}, l)));
        m.maps.push_back(Mat::identity(n));
    } else {
        m.maps.push_back(Mat::identity(n));
        m.maps.push_back(companion(f, poly_pow(f, z.f, l)));
    }
    return m;
}

FqModule build_kronecker(QuiverPtr q, const KronDesc& d, const Field& f) {
    if (!is_kronecker(*q)) throw std::invalid_argument("not the Kronecker quiver");
    FqModule m = zero_module(q, f);
    for (auto it = d.pre.rbegin(); it != d.pre.rend(); ++it)
        for (int k = 0; k < it->second; ++k) m = direct_sum(m, cached_beta(q, f, it->first));
    for (auto& [p, lam] : d.reg)
        for (int part : lam.parts()) m = direct_sum(m, build_regular(q, f, p, part));
    for (auto& [t, mult] : d.inj)
        for (int k = 0; k < mult; ++k) m = direct_sum(m, cached_beta(q, f, t));
    return m;
}

KronDesc classify_kronecker(const FqModule& m) {
    if (!is_kronecker(*m.quiver)) throw std::invalid_argument("not the Kronecker quiver");
    const Field& f = *m.field;
    QuiverPtr q = m.quiver;
    KronDesc d;
    int a = m.dims[0], b = m.dims[1];
    // P(k) = beta_{-k} has dim (k, k+1); I(k) = beta_k has dim (k, k-1)
    std::vector<int> hp(a + 3, 0), hi(b + 4, 0);
    for (int k = 0; k <= a + 2; ++k) hp[k] = hom_dim(cached_beta(q, f, -k), m);
    for (int k = 1; k <= b + 3; ++k) hi[k] = hom_dim(m, cached_beta(q, f, k));
    DimVector left = m.dims;
    int preinj_defect = 0;
    for (int k = 0; k <= a; ++k) {
        int c = hp[k] - 2 * hp[k + 1] + hp[k + 2];
        if (c < 0) throw std::logic_error("negative preprojective multiplicity");
        if (c) {
            d.pre[-k] = c;
            left = left - scaled(DimVector{k, k + 1}, c);
        }
    }
    for (int k = 1; k <= b + 1; ++k) {
        int c = hi[k] - 2 * hi[k + 1] + hi[k + 2];
        if (c < 0) throw std::logic_error("negative preinjective multiplicity");
        if (c) {
            d.inj[k] = c;
            preinj_defect += c;
            left = left - scaled(DimVector{k, k - 1}, c);
        }
    }
    if (left[0] != left[1] || left[0] < 0) throw std::runtime_error("Kronecker classification failed: regular part has dim " + dim_str(left));
    int r = left[0];
    for (int deg = 1; deg <= r && r > 0; ++deg) {
        for (auto& z : closed_points(f, deg)) {
            if (r < deg) break;
            int h1 = hom_dim(build_regular(q, f, z, 1), m) - deg * preinj_defect;
            if (h1 <= 0) continue;
            int maxl = r / deg;
            std::vector<int> h(maxl + 3, 0);
            h[1] = h1;
            for (int l = 2; l <= maxl + 1; ++l) h[l] = hom_dim(build_regular(q, f, z, l), m) - l * deg * preinj_defect;
            std::vector<int> parts;
            for (int l = 1; l <= maxl; ++l) {
                int c2 = 2 * h[l] - h[l + 1] - h[l - 1];
                if (c2 % deg != 0 || c2 < 0) throw std::logic_error("bad regular multiplicity");
                for (int k = 0; k < c2 / deg; ++k) parts.push_back(l);
            }
            Partition lam(parts);
            if (lam.empty()) throw std::logic_error("regular support without summands");
            d.reg.push_back({z, lam});
            r -= deg * lam.size();
        }
    }
    if (r != 0) throw std::runtime_error("Kronecker classification failed: unaccounted regular part");
    std::sort(d.reg.begin(), d.reg.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return d;
}

std::string class_key(const FqModule& m) {
    if (m.quiver->kind() == QuiverKind::Cyclic || m.quiver->kind() == QuiverKind::Jordan || is_linear_An(*m.quiver))
        return "ms:" + classify_multisegment(m).str();
    if (is_kronecker(*m.quiver)) return "kr:" + classify_kronecker(m).str();
    throw std::invalid_argument("no classifier for quiver " + m.quiver->id());
}

std::vector<FqModule> indecomposable_test_set(QuiverPtr q, const Field& f, int max_total) {
    std::vector<FqModule> out;
    bool linear = false;
    if (multisegment_quiver(*q, linear)) {
        for (int l = 1; l <= max_total; ++l)
            for (int i = 0; i < q->n(); ++i)
                if (!linear || i + l <= q->n()) out.push_back(build_multisegment(q, Multisegment::segment(q->n(), linear, i, l), f));
        return out;
    }
    if (!is_kronecker(*q)) throw std::invalid_argument("no indecomposable test set for quiver " + q->id());
    for (int k = 0; 2 * k + 1 <= max_total; ++k) out.push_back(cached_beta(q, f, -k));
    for (int k = 1; 2 * k - 1 <= max_total; ++k) out.push_back(cached_beta(q, f, k));
    for (int d = 1; 2 * d <= max_total; ++d)
        for (auto& z : closed_points(f, d))
            for (int l = 1; 2 * l * d <= max_total; ++l) out.push_back(build_regular(q, f, z, l));
    return out;
}

std::vector<int> fingerprint(const FqModule& m, const std::vector<FqModule>& tests) {
    std::vector<int> fp(m.dims);
    fp.push_back(end_dim(m));
    for (auto& x : tests) {
        fp.push_back(hom_dim(x, m));
        fp.push_back(hom_dim(m, x));
    }
    return fp;
}

std::map<std::pair<std::string, std::string>, std::uint64_t> hall_census(const FqModule& l, const DimVector& dim_sub,
                                                                          std::uint64_t budget) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> out;
    if (!leq(dim_sub, l.dims)) return out;
    for_each_submodule(
        l, &dim_sub,
        [&](const GradedSubspace& w) {
            ++out[{class_key(quotient(l, w)), class_key(submodule(l, w))}];
            return true;
        },
        budget);
    return out;
}

std::uint64_t hall_number(const FqModule& l, const FqModule& m, const FqModule& n, std::uint64_t budget) {
    if (m.dims + n.dims != l.dims) return 0;
    auto census = hall_census(l, n.dims, budget);
    auto it = census.find({class_key(m), class_key(n)});
    return it == census.end() ? 0 : it->second;
}

}  // namespace hallcanon
