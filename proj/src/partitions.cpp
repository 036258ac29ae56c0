#include "hallcanon/partitions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace hallcanon {

Partition::Partition(std::vector<int> parts) {
    for (int p : parts) {
        if (p < 0) throw std::invalid_argument("negative part");
        if (p > 0) parts_.push_back(p);
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<int>());
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

Partition Partition::conjugate() const {
    std::vector<int> c;
    for (int j = 0; j < (parts_.empty() ? 0 : parts_[0]); ++j) {
        int n = 0;
        for (int p : parts_)
            if (p > j) ++n;
        c.push_back(n);
    }
    return Partition(c);
}

std::string Partition::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
    return s + ")";
}

namespace {
void gen_partitions(int rest, int maxpart, std::vector<int>& cur, std::vector<Partition>& out) {
    if (rest == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
        cur.push_back(p);
        gen_partitions(rest - p, p, cur, out);
        cur.pop_back();
    }
}

void check_sizes(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw std::invalid_argument("partition sizes differ: " + a.str() + " vs " + b.str());
}

// SSYT count: the largest letter fills a horizontal strip of size content.back()
BigInt kostka_rec(const std::vector<int>& shape, const std::vector<int>& content, std::map<std::pair<std::vector<int>, std::vector<int>>, BigInt>& memo) {
    if (content.empty()) return shape.empty() ? 1 : 0;
    auto key = std::make_pair(shape, content);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int k = content.back();
    std::vector<int> rest(content.begin(), content.end() - 1);
    BigInt total = 0;
    // choose r_i <= shape_i - shape_{i+1} boxes removed from row i, summing to k
    std::vector<int> inner = shape;
    std::function<void(std::size_t, int)> go = [&](std::size_t i, int left) {
        if (i == shape.size()) {
            if (left == 0) {
                std::vector<int> trimmed;
                for (int x : inner)
                    if (x > 0) trimmed.push_back(x);
                total += kostka_rec(trimmed, rest, memo);
            }
            return;
        }
        int below = i + 1 < shape.size() ? shape[i + 1] : 0;
        for (int r = 0; r <= std::min(left, shape[i] - below); ++r) {
            inner[i] = shape[i] - r;
            go(i + 1, left - r);
        }
        inner[i] = shape[i];
    };
    go(0, k);
    memo.emplace(key, total);
    return total;
}

std::mutex g_memo_lock;
std::map<std::pair<std::vector<int>, std::vector<int>>, BigInt> g_kostka_memo;
std::map<std::pair<std::vector<int>, std::vector<int>>, BigInt> g_char_memo;

// Murnaghan-Nakayama on beta-sets: remove a rim hook of length mu[0]
BigInt mn_rec(const std::vector<int>& shape, const std::vector<int>& mu) {
    if (mu.empty()) return shape.empty() ? 1 : 0;
    auto key = std::make_pair(shape, mu);
    {
        std::lock_guard<std::mutex> lk(g_memo_lock);
        if (auto it = g_char_memo.find(key); it != g_char_memo.end()) return it->second;
    }
    int r = mu[0];
    std::vector<int> rest(mu.begin() + 1, mu.end());
    int len = static_cast<int>(shape.size());
    std::vector<int> beta(len);
    for (int i = 0; i < len; ++i) beta[i] = shape[i] + (len - 1 - i);
    BigInt total = 0;
    for (int i = 0; i < len; ++i) {
        int nb = beta[i] - r;
        if (nb < 0 || std::find(beta.begin(), beta.end(), nb) != beta.end()) continue;
        int between = 0;
        for (int b : beta)
            if (b > nb && b < beta[i]) ++between;
        std::vector<int> nbeta = beta;
        nbeta[i] = nb;
        std::sort(nbeta.begin(), nbeta.end(), std::greater<int>());
        std::vector<int> nshape;
        for (int j = 0; j < len; ++j) {
            int part = nbeta[j] - (len - 1 - j);
            if (part > 0) nshape.push_back(part);
        }
        BigInt sub = mn_rec(nshape, rest);
        total += (between % 2 ? -sub : sub);
    }
    std::lock_guard<std::mutex> lk(g_memo_lock);
    g_char_memo.emplace(key, total);
    return total;
}
}  // namespace

std::vector<Partition> partitions_of(int m) {
    if (m < 0) throw std::invalid_argument("negative size");
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_partitions(m, m, cur, out);
    return out;
}

bool dominates(const Partition& a, const Partition& b) {
    check_sizes(a, b);
    int sa = 0, sb = 0;
    for (int i = 0; i < std::max(a.length(), b.length()); ++i) {
        sa += a[i];
        sb += b[i];
        if (sa < sb) return false;
    }
    return true;
}

BigInt centralizer_order(const Partition& mu) {
    std::map<int, int> mult;
    for (int p : mu.parts()) ++mult[p];
    BigInt z = 1;
    for (auto& [p, k] : mult) {
        for (int i = 0; i < k; ++i) z *= p;
        for (int i = 2; i <= k; ++i) z *= i;
    }
    return z;
}

BigInt kostka(const Partition& lambda, const Partition& mu) {
    check_sizes(lambda, mu);
    std::lock_guard<std::mutex> lk(g_memo_lock);
    return kostka_rec(lambda.parts(), mu.parts(), g_kostka_memo);
}

BigInt character(const Partition& lambda, const Partition& mu) {
    check_sizes(lambda, mu);
    return mn_rec(lambda.parts(), mu.parts());
}

BigInt perm_character(const Partition& lambda, const Partition& mu) {
    check_sizes(lambda, mu);
    BigInt total = 0;
    for (auto& nu : partitions_of(lambda.size())) {
        BigInt k = kostka(nu, lambda);
        if (k != 0) total += k * character(nu, mu);
    }
    return total;
}

IntMatrix kostka_matrix(int m) {
    auto ps = partitions_of(m);
    IntMatrix k(ps.size(), std::vector<BigInt>(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) k[i][j] = kostka(ps[i], ps[j]);
    return k;
}

IntMatrix kostka_inverse(int m) {
    IntMatrix k = kostka_matrix(m);
    std::size_t n = k.size();
    // upper unitriangular in descending lex order; back substitution column by column
    IntMatrix inv(n, std::vector<BigInt>(n));
    for (std::size_t j = 0; j < n; ++j) {
        inv[j][j] = 1;
        for (std::size_t ii = j; ii-- > 0;) {
            BigInt s = 0;
            for (std::size_t l = ii + 1; l <= j; ++l) s += k[ii][l] * inv[l][j];
            inv[ii][j] = -s;
        }
    }
    return inv;
}

CharTable char_table(int m) {
    CharTable t;
    t.m = m;
    t.index = partitions_of(m);
    t.values.assign(t.index.size(), std::vector<BigInt>(t.index.size()));
    for (std::size_t i = 0; i < t.index.size(); ++i)
        for (std::size_t j = 0; j < t.index.size(); ++j) t.values[i][j] = character(t.index[i], t.index[j]);
    return t;
}

}  // namespace hallcanon
