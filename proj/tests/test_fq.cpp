#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hallcanon/fq.hpp"

using namespace hallcanon;

namespace {
Mat random_mat(std::mt19937_64& rng, const Field& f, int r, int c) {
    std::uniform_int_distribution<int> d(0, f.q() - 1);
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = static_cast<Elem>(d(rng));
    return m;
}

int mobius(int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            m = -m;
        }
    return n > 1 ? -m : m;
}
}  // namespace

TEST_CASE("field axioms") {
    for (int q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27}) {
        const Field& f = Field::get(q);
        CHECK(f.q() == q);
        for (int a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a) CHECK(f.mul(a, f.inv(a)) == 1);
            for (int b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                for (int c = 0; c < q; c += 3) {
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                }
            }
        }
        // characteristic
        Elem s = 0;
        for (int i = 0; i < f.p(); ++i) s = f.add(s, 1);
        CHECK(s == 0);
    }
    CHECK_THROWS(Field::get(6));
    CHECK_THROWS(Field::get(1));
    CHECK_THROWS(Field::get(5).inv(0));
}

TEST_CASE("irreducible counts match the necklace formula") {
    for (int q : {2, 3, 4, 5}) {
        const Field& f = Field::get(q);
        for (int d = 1; d <= 3; ++d) {
            long long n = 0;
            for (int e = 1; e <= d; ++e)
                if (d % e == 0) {
                    long long pw = 1;
                    for (int i = 0; i < e; ++i) pw *= q;
                    n += mobius(d / e) * pw;
                }
            CHECK(static_cast<long long>(monic_irreducibles(f, d).size()) == n / d);
        }
    }
}

TEST_CASE("linear algebra") {
    std::mt19937_64 rng(1);
    for (int q : {2, 3, 4, 7}) {
        const Field& f = Field::get(q);
        for (int t = 0; t < 50; ++t) {
            Mat a = random_mat(rng, f, 4, 5);
            Mat n = right_nullspace(f, a);
            CHECK(mul(f, a, n).is_zero());
            CHECK(n.cols() + rank(f, a) == 5);
            Mat l = left_nullspace(f, a);
            CHECK(mul(f, l, a).is_zero());
            CHECK(l.rows() + rank(f, a) == 4);
            Mat s = random_mat(rng, f, 3, 3);
            if (invertible(f, s)) CHECK(mul(f, s, inverse(f, s)) == Mat::identity(3));
            Mat b = mul(f, random_mat(rng, f, 3, 2), random_mat(rng, f, 2, 3));
            CHECK_FALSE(invertible(f, b));
        }
    }
}

TEST_CASE("companion matrices have the right minimal polynomial") {
    const Field& f = Field::get(5);
    for (auto& p : monic_irreducibles(f, 2)) {
        auto pp = poly_pow(f, p, 2);
        Mat c = companion(f, pp);
        // evaluate pp at c: sum pp[k] c^k
        int d = c.rows();
        Mat acc(d, d), pw = Mat::identity(d);
        for (auto coeff : pp) {
            acc = add(f, acc, scale(f, pw, coeff));
            pw = mul(f, pw, c);
        }
        CHECK(acc.is_zero());
        Mat accp(d, d);
        pw = Mat::identity(d);
        for (auto coeff : p) {
            accp = add(f, accp, scale(f, pw, coeff));
            pw = mul(f, pw, c);
        }
        CHECK_FALSE(accp.is_zero());
    }
}

TEST_CASE("subspace enumeration") {
    for (int q : {2, 3, 4}) {
        const Field& f = Field::get(q);
        for (int n = 0; n <= 4; ++n)
            for (int k = 0; k <= n; ++k) {
                std::set<std::vector<Elem>> seen;
                std::uint64_t cnt = 0;
                for_each_subspace_between(f, Mat(0, n), Mat::identity(n), k, [&](const Mat& w, const std::vector<int>& piv) {
                    CHECK(w.rows() == k);
                    CHECK(static_cast<int>(piv.size()) == k);
                    seen.insert(w.data());
                    ++cnt;
                    return true;
                });
                CHECK(cnt == count_subspaces(q, n, k));
                CHECK(seen.size() == cnt);
            }
    }
    // between a line and a 3-space inside F^4
    const Field& f = Field::get(3);
    Mat u(1, 4), v(3, 4);
    u.at(0, 0) = 1;
    u.at(0, 1) = 2;
    v.at(0, 0) = 1;
    v.at(0, 1) = 2;
    v.at(1, 2) = 1;
    v.at(2, 1) = 1;
    v.at(2, 3) = 1;
    std::uint64_t cnt = 0;
    for_each_subspace_between(f, u, v, 2, [&](const Mat& w, const std::vector<int>& piv) {
        CHECK(contains_rows(f, w, piv, u));
        Mat vv = v;
        auto vp = rref(f, vv);
        CHECK(contains_rows(f, vv, vp, w));
        ++cnt;
        return true;
    });
    CHECK(cnt == count_subspaces(3, 2, 1));
    CHECK(count_subspaces(2, 4, 2) == 35);
}
