#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hallcanon/hallpoly.hpp"

namespace hallcanon {

// a + b v in Q(v) / (v^2 - q): field-level values with v = sqrt(q) kept symbolic
struct FieldScalar {
    int q = 0;
    Rational a = 0, b = 0;
    FieldScalar() = default;
    FieldScalar(int q_, Rational a_, Rational b_ = 0) : q(q_), a(std::move(a_)), b(std::move(b_)) {}
    static FieldScalar vpow(int q, int e);
    static FieldScalar of(const LaurentPoly& p, int q);
    static FieldScalar of(const RationalFn& f, int q);
    bool is_zero() const { return a == 0 && b == 0; }
    FieldScalar& operator+=(const FieldScalar& o);
    FieldScalar& operator-=(const FieldScalar& o);
    FieldScalar& operator*=(const FieldScalar& o);
    friend FieldScalar operator+(FieldScalar x, const FieldScalar& y) { return x += y; }
    friend FieldScalar operator-(FieldScalar x, const FieldScalar& y) { return x -= y; }
    friend FieldScalar operator*(FieldScalar x, const FieldScalar& y) { return x *= y; }
    FieldScalar inverse() const;
    bool operator==(const FieldScalar& o) const { return a == o.a && b == o.b; }
    bool operator!=(const FieldScalar& o) const { return !(*this == o); }
    std::string str() const;
};

// Index (c, t_lambda): preprojective and preinjective multiplicities by beta index, one
// multisegment per non-homogeneous tube (for cyclic and linear quivers: the module itself),
// and a partition for the homogeneous part.
struct NIndex {
    std::map<int, int> pre, inj;
    std::vector<Multisegment> tubes;
    Partition lam;

    int m() const { return lam.size(); }
    bool aperiodic() const;
    DimVector dim(const Quiver& q) const;  // D(c, t_lambda)
    bool same_c(const NIndex& o) const { return pre == o.pre && inj == o.inj && tubes == o.tubes; }
    std::string str() const;  // "P0+S(1)+I1", "[1;2)", "1" for the empty index
    nlohmann::json to_json() const;
    static NIndex from_json(const nlohmann::json& j);
    bool operator<(const NIndex& o) const;
    bool operator==(const NIndex& o) const { return same_c(o) && lam == o.lam; }
    bool operator!=(const NIndex& o) const { return !(*this == o); }

    static NIndex segments(const Multisegment& m) { return NIndex{{}, {}, {m}, {}}; }
};

// finite sum over N symbols (for cyclic and linear quivers the N symbols are the classes <M(pi)>)
struct AlgebraElement {
    std::map<NIndex, LaurentPoly> terms;

    void add(const NIndex& k, const LaurentPoly& c);
    LaurentPoly coeff(const NIndex& k) const;
    bool is_zero() const { return terms.empty(); }
    AlgebraElement scaled(const LaurentPoly& c) const;
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    bool operator==(const AlgebraElement& o) const { return terms == o.terms; }
    std::string str() const;
    nlohmann::json to_json(const Quiver& q) const;
};

enum class Family { Segments, Kronecker };
Family family_of(const Quiver& q);  // throws for unsupported quivers

struct AlgebraContext {
    QuiverPtr quiver;
    PolyCache* cache = nullptr;
    FitConfig fit;
    int threads = 1;
    std::uint64_t budget = 0;  // submodule enumeration budget per count (0 = none)
};

// G_nu: every index with D(c, t_lambda) = nu, periodic ones included, deterministic order
std::vector<NIndex> enumerate_N_indices(const Quiver& q, const DimVector& nu);
// every generic iso-class type of dimension nu (regular parts by slot degree and partition)
std::vector<ModuleType> enumerate_types(const Quiver& q, const DimVector& nu);
// M(c) plus M(mu, z) on distinct degree-1 points: the test modules of the Kostka system
ModuleType target_type(const NIndex& c, const Partition& mu);

// u_{i_1}^{(a_1)} ... u_{i_s}^{(a_s)} = sum_L v^{e(w)} #flags_w(L) u_L
int word_exponent(const Quiver& q, const Word& w);
DimVector word_dim(const Quiver& q, const Word& w);
// coefficient of <L> in the monomial, as a Laurent polynomial in v
LaurentPoly monomial_coeff(const AlgebraContext& ctx, const Word& w, const ModuleType& l);

// N-expansion of an element of H^0_nu given its coefficients on <L> for generic L
AlgebraElement express_in_N(const AlgebraContext& ctx, const DimVector& nu,
                            const std::function<LaurentPoly(const ModuleType&)>& bracket_coeff);
AlgebraElement monomial(const AlgebraContext& ctx, const Word& w);
// <S_i^a> as an N symbol (equals the divided power u_i^(a))
NIndex simple_index(const Quiver& q, int i, int a = 1);

// generic product: Hall polynomials for segment quivers, field-level products lifted
// back to Z[v, v^-1] for the Kronecker quiver
AlgebraElement mul(const AlgebraContext& ctx, const AlgebraElement& x, const AlgebraElement& y);
// <M>^(m) = <M>^m / [m]!  (exact division; throws if it is not exact)
AlgebraElement divided_power(const AlgebraContext& ctx, const AlgebraElement& x, int m);

// ---- symmetric functions in the complete homogeneous basis: products h_mu, keyed by mu
using HExpansion = std::map<Partition, BigInt>;
HExpansion jacobi_trudi(const Partition& lam);  // S_lambda = det(H_{lambda_k - k + j})
HExpansion h_product(const Partition& lam);     // H_lambda itself

// ---- field level (one finite field); elements in the <M> normalization, keyed by class_key
struct FieldTerm {
    FqModule module;
    FieldScalar coeff;
};
using FieldElement = std::map<std::string, FieldTerm>;

void field_add(FieldElement& x, const FqModule& m, const FieldScalar& c);
// all iso classes of dimension nu over the field
std::vector<FqModule> all_classes(QuiverPtr q, const DimVector& nu, const Field& f);
// homogeneous regular Kronecker modules of dimension m delta
std::vector<FqModule> homogeneous_regulars(QuiverPtr q, const Field& f, int m);
// chains L = L_0 > L_1 > ... with L_{j-1}/L_j of dimension parts[j] * delta
std::uint64_t regular_chain_count(const FqModule& l, const std::vector<int>& parts, std::uint64_t budget = 0);
// coefficient of <R> in H_lambda and in S_lambda (field level)
FieldScalar field_H_coeff(const Partition& lam, const FqModule& r);
FieldScalar field_S_coeff(const Partition& lam, const FqModule& r);
// H_m = sum v^{-dim R} u_R and S_lambda realized over the field
FieldElement realize_H(QuiverPtr q, int m, const Field& f);
FieldElement realize_S(QuiverPtr q, const Partition& lam, const Field& f);
FieldElement field_N(QuiverPtr q, const NIndex& c, const Field& f);
// product restricted to the given target classes (all classes of the degree when targets is empty)
FieldElement field_product(const FieldElement& x, const FieldElement& y, std::vector<FqModule> targets = {},
                           std::uint64_t budget = 0);
// N-coordinates of a field-level element of H^0 of dimension nu
std::map<NIndex, FieldScalar> field_express_in_N(QuiverPtr q, const FieldElement& x, const DimVector& nu, const Field& f);
FieldElement field_of(const AlgebraContext& ctx, const AlgebraElement& x, const Field& f);
// Laurent polynomial whose value at v = sqrt(q) is value(q), found by interpolation over the sample fields
LaurentPoly lift_to_laurent(const std::function<FieldScalar(int)>& value, const std::function<bool(int)>& admissible,
                            const FitConfig& cfg);

// ---- Green's form and the coproduct
// (<M>, <N>) = delta_{MN} v^{2 dim End M} / a_M
RationalFn green_module(const AlgebraContext& ctx, const ModuleType& m);
RationalFn green_S(const AlgebraContext& ctx, const Partition& a, const Partition& b);
RationalFn green_pair(const AlgebraContext& ctx, const NIndex& a, const NIndex& b);
RationalFn green_form(const AlgebraContext& ctx, const AlgebraElement& x, const AlgebraElement& y);

ModuleType type_of(const FqModule& m);  // generic type of a concrete module (slots numbered by point order)
std::uint64_t aut_of(const FqModule& m);  // via the radical formula
FieldScalar field_green(const FieldElement& x, const FieldElement& y);
struct TensorTerm {
    FqModule left, right;
    FieldScalar coeff;
};
using FieldTensor = std::map<std::pair<std::string, std::string>, TensorTerm>;
FieldTensor coproduct(const FieldElement& x, std::uint64_t budget = 0);
FieldTensor tensor(const FieldElement& x, const FieldElement& y);
FieldTensor tensor_mul(const FieldTensor& x, const FieldTensor& y, std::uint64_t budget = 0);  // twisted
FieldScalar field_green(const FieldTensor& x, const FieldTensor& y);

// ---- quantum Serre relations: sum_s (-1)^s u_i^(s) u_j u_i^(r), s + r = 1 - (i, j)
std::vector<Word> serre_words(const Quiver& q, int i, int j);
// generic coefficients on every module type (all must vanish)
std::map<std::string, LaurentPoly> serre_generic(const AlgebraContext& ctx, int i, int j);
// exhaustive over all iso classes at one field; returns the number of classes checked, throws on a nonzero value
int serre_field_check(QuiverPtr q, int i, int j, const Field& f);

}  // namespace hallcanon
