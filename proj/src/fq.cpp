#include "hallcanon/fq.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace hallcanon {

bool is_prime_power(int q, int* p_out, int* e_out) {
    if (q < 2) return false;
    int p = 2;
    while (q % p != 0) ++p;
    int e = 0, x = q;
    while (x % p == 0) {
        x /= p;
        ++e;
    }
    if (x != 1) return false;
    if (p_out) *p_out = p;
    if (e_out) *e_out = e;
    return true;
}

namespace {
// polynomials over the prime field as int vectors, low degree first
std::vector<int> prime_poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
    int dm = static_cast<int>(m.size()) - 1;
    for (int k = static_cast<int>(a.size()) - 1; k >= dm; --k) {
        int c = a[k] % p;
        if (c == 0) continue;
        for (int j = 0; j <= dm; ++j) a[k - dm + j] = ((a[k - dm + j] - c * m[j]) % p + p) % p;
    }
    a.resize(std::min<std::size_t>(a.size(), dm));
    return a;
}

bool prime_poly_irreducible(const std::vector<int>& f, int p) {
    int d = static_cast<int>(f.size()) - 1;
    // trial division by every monic polynomial of degree 1..d/2
    for (int k = 1; 2 * k <= d; ++k) {
        int total = 1;
        for (int i = 0; i < k; ++i) total *= p;
        for (int code = 0; code < total; ++code) {
            std::vector<int> g(k + 1, 0);
            int x = code;
            for (int i = 0; i < k; ++i) {
                g[i] = x % p;
                x /= p;
            }
            g[k] = 1;
            auto r = prime_poly_mod(f, g, p);
            bool zero = true;
            for (int c : r)
                if (c) zero = false;
            if (zero) return false;
        }
    }
    return true;
}
}  // namespace

Field::Field(int q) : q_(q) {
    if (q > 256 || !is_prime_power(q, &p_, &e_)) throw std::invalid_argument("field size must be a prime power <= 256: " + std::to_string(q));
    add_.resize(q * q);
    mul_.resize(q * q);
    neg_.resize(q);
    inv_.resize(q);
    if (e_ == 1) {
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                add_[a * q + b] = static_cast<Elem>((a + b) % q);
                mul_[a * q + b] = static_cast<Elem>((a * b) % q);
            }
    } else {
        // smallest monic irreducible of degree e
        std::vector<int> m;
        int total = 1;
        for (int i = 0; i < e_; ++i) total *= p_;
        for (int code = 0; code < total; ++code) {
            std::vector<int> f(e_ + 1, 0);
            int x = code;
            for (int i = 0; i < e_; ++i) {
                f[i] = x % p_;
                x /= p_;
            }
            f[e_] = 1;
            if (f[0] != 0 && prime_poly_irreducible(f, p_)) {
                m = f;
                break;
            }
        }
        auto digits = [&](int a) {
            std::vector<int> d(e_);
            for (int i = 0; i < e_; ++i) {
                d[i] = a % p_;
                a /= p_;
            }
            return d;
        };
        auto encode = [&](const std::vector<int>& d) {
            int a = 0;
            for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) a = a * p_ + d[i];
            return a;
        };
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                auto da = digits(a), db = digits(b);
                std::vector<int> s(e_);
                for (int i = 0; i < e_; ++i) s[i] = (da[i] + db[i]) % p_;
                add_[a * q + b] = static_cast<Elem>(encode(s));
                std::vector<int> pr(2 * e_ - 1, 0);
                for (int i = 0; i < e_; ++i)
                    for (int j = 0; j < e_; ++j) pr[i + j] = (pr[i + j] + da[i] * db[j]) % p_;
                auto r = prime_poly_mod(pr, m, p_);
                r.resize(e_, 0);
                mul_[a * q + b] = static_cast<Elem>(encode(r));
            }
    }
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            if (add_[a * q + b] == 0) neg_[a] = static_cast<Elem>(b);
            if (mul_[a * q + b] == 1) inv_[a] = static_cast<Elem>(b);
        }
    }
}

const Field& Field::get(int q) {
    static std::mutex lock;
    static std::map<int, std::unique_ptr<Field>> cache;
    std::lock_guard<std::mutex> lk(lock);
    auto it = cache.find(q);
    if (it == cache.end()) it = cache.emplace(q, std::unique_ptr<Field>(new Field(q))).first;
    return *it->second;
}

Elem Field::inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero in GF(" + std::to_string(q_) + ")");
    return inv_[a];
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool Mat::is_zero() const {
    for (Elem x : a_)
        if (x) return false;
    return true;
}

Mat Mat::transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Mat Mat::rows_subset(const std::vector<int>& idx) const {
    Mat m(static_cast<int>(idx.size()), c_);
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (int j = 0; j < c_; ++j) m.at(static_cast<int>(k), j) = at(idx[k], j);
    return m;
}

Mat Mat::cols_range(int c0, int c1) const {
    Mat m(r_, c1 - c0);
    for (int i = 0; i < r_; ++i)
        for (int j = c0; j < c1; ++j) m.at(i, j - c0) = at(i, j);
    return m;
}

Mat Mat::vstack(const Mat& a, const Mat& b) {
    if (a.rows() == 0) return b.rows() == 0 ? Mat(0, std::max(a.cols(), b.cols())) : b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
    Mat m(a.rows() + b.rows(), a.cols());
    std::copy(a.a_.begin(), a.a_.end(), m.a_.begin());
    std::copy(b.a_.begin(), b.a_.end(), m.a_.begin() + a.a_.size());
    return m;
}

Mat Mat::hstack(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
    Mat m(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
    }
    return m;
}

Mat mul(const Field& f, const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        Elem* out = c.row(i);
        for (int k = 0; k < a.cols(); ++k) {
            Elem x = a.at(i, k);
            if (!x) continue;
            const Elem* mr = f.mul_row(x);
            const Elem* br = b.row(k);
            for (int j = 0; j < b.cols(); ++j) out[j] = f.add(out[j], mr[br[j]]);
        }
    }
    return c;
}

Mat add(const Field& f, const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum shape mismatch");
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = f.add(a.at(i, j), b.at(i, j));
    return c;
}

Mat sub(const Field& f, const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference shape mismatch");
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = f.sub(a.at(i, j), b.at(i, j));
    return c;
}

Mat scale(const Field& f, const Mat& a, Elem s) {
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = f.mul(s, a.at(i, j));
    return c;
}

std::vector<int> rref(const Field& f, Mat& a) {
    std::vector<int> piv;
    int r = 0;
    const int rows = a.rows(), cols = a.cols();
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a.at(i, c)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols; ++j) std::swap(a.at(p, j), a.at(r, j));
        Elem inv = f.inv(a.at(r, c));
        if (inv != 1) {
            const Elem* mr = f.mul_row(inv);
            Elem* row = a.row(r);
            for (int j = c; j < cols; ++j) row[j] = mr[row[j]];
        }
        const Elem* prow = a.row(r);
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            Elem x = a.at(i, c);
            if (!x) continue;
            const Elem* mr = f.mul_row(f.neg(x));
            Elem* row = a.row(i);
            for (int j = c; j < cols; ++j)
                if (prow[j]) row[j] = f.add(row[j], mr[prow[j]]);
        }
        piv.push_back(c);
        ++r;
    }
    // drop zero rows
    Mat out(r, cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < cols; ++j) out.at(i, j) = a.at(i, j);
    a = std::move(out);
    return piv;
}

int rank(const Field& f, Mat a) { return static_cast<int>(rref(f, a).size()); }

Mat right_nullspace(const Field& f, const Mat& a) {
    Mat r = a;
    auto piv = rref(f, r);
    int n = a.cols();
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    int k = n - static_cast<int>(piv.size());
    Mat ns(n, k);
    int col = 0;
    for (int fc = 0; fc < n; ++fc) {
        if (is_piv[fc]) continue;
        ns.at(fc, col) = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) ns.at(piv[i], col) = f.neg(r.at(static_cast<int>(i), fc));
        ++col;
    }
    return ns;
}

Mat left_nullspace(const Field& f, const Mat& a) { return right_nullspace(f, a.transpose()).transpose(); }

bool invertible(const Field& f, const Mat& a) { return a.rows() == a.cols() && rank(f, a) == a.rows(); }

Mat inverse(const Field& f, const Mat& a) {
    int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    Mat aug = Mat::hstack(a, Mat::identity(n));
    auto piv = rref(f, aug);
    if (n == 0) return Mat(0, 0);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw std::domain_error("singular matrix");
    return aug.cols_range(n, 2 * n);
}

Mat coords_in_rref(const Mat& b, const std::vector<int>& piv, const Mat& x) {
    Mat c(x.rows(), b.rows());
    for (int i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < piv.size(); ++j) c.at(i, static_cast<int>(j)) = x.at(i, piv[j]);
    return c;
}

Mat coords_mod_rref(const Field& f, const Mat& b, const std::vector<int>& piv, const Mat& x) {
    int n = b.cols();
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<int> free;
    for (int c = 0; c < n; ++c)
        if (!is_piv[c]) free.push_back(c);
    Mat out(x.rows(), static_cast<int>(free.size()));
    std::vector<Elem> row(n);
    for (int i = 0; i < x.rows(); ++i) {
        for (int c = 0; c < n; ++c) row[c] = x.at(i, c);
        for (std::size_t j = 0; j < piv.size(); ++j) {
            Elem s = row[piv[j]];
            if (!s) continue;
            const Elem* mr = f.mul_row(f.neg(s));
            const Elem* br = b.row(static_cast<int>(j));
            for (int c = 0; c < n; ++c)
                if (br[c]) row[c] = f.add(row[c], mr[br[c]]);
        }
        for (std::size_t k = 0; k < free.size(); ++k) out.at(i, static_cast<int>(k)) = row[free[k]];
    }
    return out;
}

Mat span_sum(const Field& f, const Mat& a, const Mat& b) {
    Mat s = Mat::vstack(a, b);
    rref(f, s);
    return s;
}

bool contains_rows(const Field& f, const Mat& b, const std::vector<int>& piv, const Mat& x) {
    return coords_mod_rref(f, b, piv, x).is_zero();
}

bool for_each_subspace_between(const Field& f, const Mat& u, const Mat& v, int k,
                               const std::function<bool(const Mat&, const std::vector<int>&)>& cb) {
    int n = std::max(u.cols(), v.cols());
    Mat ur = u.rows() ? u : Mat(0, n);
    auto upiv = rref(f, ur);
    int du = static_cast<int>(upiv.size());
    // complement of U inside V
    Mat vr = v.rows() ? v : Mat(0, n);
    Mat red = ur.rows() ? Mat(vr.rows(), n) : vr;
    if (ur.rows()) {
        for (int i = 0; i < vr.rows(); ++i) {
            std::vector<Elem> row(vr.row(i), vr.row(i) + n);
            for (std::size_t j = 0; j < upiv.size(); ++j) {
                Elem s = row[upiv[j]];
                if (!s) continue;
                const Elem* mr = f.mul_row(f.neg(s));
                for (int c = 0; c < n; ++c)
                    if (ur.at(static_cast<int>(j), c)) row[c] = f.add(row[c], mr[ur.at(static_cast<int>(j), c)]);
            }
            for (int c = 0; c < n; ++c) red.at(i, c) = row[c];
        }
    }
    Mat comp = red;
    rref(f, comp);
    int c = comp.rows();
    int kk = k - du;
    if (kk < 0 || kk > c) return true;
    const int q = f.q();
    // pivot column choice for a kk x c RREF matrix
    std::vector<int> pc(kk);
    for (int i = 0; i < kk; ++i) pc[i] = i;
    while (true) {
        // free slots: (row r, column j > pc[r], j not a pivot)
        std::vector<std::pair<int, int>> slots;
        std::vector<bool> isp(c, false);
        for (int x : pc) isp[x] = true;
        for (int r = 0; r < kk; ++r)
            for (int j = pc[r] + 1; j < c; ++j)
                if (!isp[j]) slots.push_back({r, j});
        Mat rm(kk, c);
        for (int r = 0; r < kk; ++r) rm.at(r, pc[r]) = 1;
        std::vector<int> val(slots.size(), 0);
        while (true) {
            for (std::size_t s = 0; s < slots.size(); ++s) rm.at(slots[s].first, slots[s].second) = static_cast<Elem>(val[s]);
            Mat w = Mat::vstack(ur, mul(f, rm, comp));
            if (w.rows() == 0) w = Mat(0, n);
            auto wpiv = rref(f, w);
            if (!cb(w, wpiv)) return false;
            std::size_t s = 0;
            while (s < slots.size() && ++val[s] == q) val[s++] = 0;
            if (s == slots.size()) break;
        }
        // next combination
        int i = kk - 1;
        while (i >= 0 && pc[i] == c - kk + i) --i;
        if (i < 0) break;
        ++pc[i];
        for (int j = i + 1; j < kk; ++j) pc[j] = pc[j - 1] + 1;
    }
    return true;
}

std::uint64_t count_subspaces(int q, int n, int k) {
    if (k < 0 || k > n) return 0;
    // prod (q^{n-i} - 1)/(q^{k-i} - 1)
    unsigned __int128 num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        unsigned __int128 a = 1, b = 1;
        for (int j = 0; j < n - i; ++j) a *= q;
        for (int j = 0; j < k - i; ++j) b *= q;
        num *= (a - 1);
        den *= (b - 1);
    }
    return static_cast<std::uint64_t>(num / den);
}

FqPoly poly_mul(const Field& f, const FqPoly& a, const FqPoly& b) {
    if (a.empty() || b.empty()) return {};
    FqPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = f.add(c[i + j], f.mul(a[i], b[j]));
    return c;
}

FqPoly poly_pow(const Field& f, const FqPoly& a, int k) {
    FqPoly r{1};
    for (int i = 0; i < k; ++i) r = poly_mul(f, r, a);
    return r;
}

namespace {
// remainder of a modulo monic m
FqPoly poly_rem(const Field& f, FqPoly a, const FqPoly& m) {
    int dm = static_cast<int>(m.size()) - 1;
    for (int k = static_cast<int>(a.size()) - 1; k >= dm; --k) {
        Elem c = a[k];
        if (!c) continue;
        for (int j = 0; j <= dm; ++j) a[k - dm + j] = f.sub(a[k - dm + j], f.mul(c, m[j]));
    }
    a.resize(std::min<std::size_t>(a.size(), dm));
    return a;
}

std::vector<FqPoly> all_monic(const Field& f, int d) {
    std::vector<FqPoly> out;
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= f.q();
    for (std::uint64_t code = 0; code < total; ++code) {
        FqPoly p(d + 1, 0);
        std::uint64_t x = code;
        for (int i = 0; i < d; ++i) {
            p[i] = static_cast<Elem>(x % f.q());
            x /= f.q();
        }
        p[d] = 1;
        out.push_back(p);
    }
    return out;
}
}  // namespace

std::vector<FqPoly> monic_irreducibles(const Field& f, int d) {
    std::vector<FqPoly> out;
    std::vector<std::vector<FqPoly>> lower(d / 2 + 1);
    for (int k = 1; 2 * k <= d; ++k) lower[k] = monic_irreducibles(f, k);
    for (auto& p : all_monic(f, d)) {
        bool irr = true;
        for (int k = 1; 2 * k <= d && irr; ++k)
            for (auto& g : lower[k]) {
                auto r = poly_rem(f, p, g);
                bool zero = true;
                for (Elem c : r)
                    if (c) zero = false;
                if (zero) {
                    irr = false;
                    break;
                }
            }
        if (irr) out.push_back(p);
    }
    return out;
}

Mat companion(const Field& f, const FqPoly& m) {
    int d = static_cast<int>(m.size()) - 1;
    if (d < 1 || m[d] != 1) throw std::invalid_argument("companion needs a monic polynomial of positive degree");
    // row i is t * t^i in the basis 1, t, ..., t^{d-1}
    Mat c(d, d);
    for (int i = 0; i + 1 < d; ++i) c.at(i, i + 1) = 1;
    for (int j = 0; j < d; ++j) c.at(d - 1, j) = f.neg(m[j]);
    return c;
}

std::string poly_str(const FqPoly& p) {
    std::string s;
    for (std::size_t i = p.size(); i-- > 0;) {
        if (!p[i]) continue;
        if (!s.empty()) s += "+";
        if (p[i] != 1 || i == 0) s += std::to_string(p[i]);
        if (i >= 1) s += "t";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

}  // namespace hallcanon
