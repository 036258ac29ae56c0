#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hallcanon {

using Elem = std::uint8_t;

// GF(p^e) with q <= 256, elements 0..q-1 (0 and 1 are the field's zero and one).
class Field {
public:
    static const Field& get(int q);  // cached; throws unless q is a prime power <= 256

    int q() const { return q_; }
    int p() const { return p_; }
    int degree() const { return e_; }
    Elem add(Elem a, Elem b) const { return add_[a * q_ + b]; }
    Elem sub(Elem a, Elem b) const { return add_[a * q_ + neg_[b]]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * q_ + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem inv(Elem a) const;  // throws on zero
    const Elem* mul_row(Elem a) const { return &mul_[a * q_]; }
    const Elem* add_row(Elem a) const { return &add_[a * q_]; }

private:
    explicit Field(int q);
    int q_, p_, e_;
    std::vector<Elem> add_, mul_, neg_, inv_;
};

bool is_prime_power(int q, int* p = nullptr, int* e = nullptr);

// Dense matrix over a field, row-major.
class Mat {
public:
    Mat() = default;
    Mat(int r, int c) : r_(r), c_(c), a_(static_cast<std::size_t>(r) * c, 0) {}
    static Mat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Elem& at(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    Elem at(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    Elem* row(int i) { return a_.data() + static_cast<std::size_t>(i) * c_; }
    const Elem* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * c_; }
    const std::vector<Elem>& data() const { return a_; }
    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool is_zero() const;

    Mat transpose() const;
    Mat rows_subset(const std::vector<int>& idx) const;
    Mat cols_range(int c0, int c1) const;
    static Mat vstack(const Mat& a, const Mat& b);
    static Mat hstack(const Mat& a, const Mat& b);

private:
    int r_ = 0, c_ = 0;
    std::vector<Elem> a_;
};

Mat mul(const Field& f, const Mat& a, const Mat& b);
Mat add(const Field& f, const Mat& a, const Mat& b);
Mat sub(const Field& f, const Mat& a, const Mat& b);
Mat scale(const Field& f, const Mat& a, Elem s);

// Reduced row echelon form in place; returns pivot columns. Zero rows are dropped.
std::vector<int> rref(const Field& f, Mat& a);
int rank(const Field& f, Mat a);
// rows spanning {x : x a = 0}
Mat left_nullspace(const Field& f, const Mat& a);
// columns spanning {y : a y = 0}, returned as a cols(a) x k matrix
Mat right_nullspace(const Field& f, const Mat& a);
bool invertible(const Field& f, const Mat& a);
Mat inverse(const Field& f, const Mat& a);
// coordinates of the rows of x in the basis given by the rows of an RREF matrix b (x must lie in its row space)
Mat coords_in_rref(const Mat& b, const std::vector<int>& piv, const Mat& x);
// reduce rows of x modulo the row space of RREF b and read the non-pivot coordinates
Mat coords_mod_rref(const Field& f, const Mat& b, const std::vector<int>& piv, const Mat& x);
// row space of a + row space of b, as RREF
Mat span_sum(const Field& f, const Mat& a, const Mat& b);
bool contains_rows(const Field& f, const Mat& rref_b, const std::vector<int>& piv, const Mat& x);

// All subspaces W with U <= W <= V and dim W = k. U and V given by spanning rows in ambient F^n,
// U must lie in V. Callback receives W in RREF with its pivots; return false to stop.
// Returns false if stopped early.
bool for_each_subspace_between(const Field& f, const Mat& u, const Mat& v, int k,
                               const std::function<bool(const Mat&, const std::vector<int>&)>& cb);
// Gaussian binomial at q (number of k-subspaces of F_q^n)
std::uint64_t count_subspaces(int q, int n, int k);

// monic polynomials over F_q as coefficient vectors, low degree first
using FqPoly = std::vector<Elem>;
std::vector<FqPoly> monic_irreducibles(const Field& f, int d);
FqPoly poly_mul(const Field& f, const FqPoly& a, const FqPoly& b);
FqPoly poly_pow(const Field& f, const FqPoly& a, int k);
Mat companion(const Field& f, const FqPoly& monic);
std::string poly_str(const FqPoly& p);

}  // namespace hallcanon
