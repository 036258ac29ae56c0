#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "hallcanon/fq.hpp"
#include "hallcanon/laurent.hpp"
#include "hallcanon/multisegment.hpp"
#include "hallcanon/partitions.hpp"
#include "hallcanon/quiver.hpp"

namespace hallcanon {

using QuiverPtr = std::shared_ptr<const Quiver>;

// Representation over GF(q). Row-vector convention: the map of arrow h is a
// dims[s(h)] x dims[t(h)] matrix X_h and acts by v -> v X_h.
struct FqModule {
    QuiverPtr quiver;
    const Field* field = nullptr;
    DimVector dims;
    std::vector<Mat> maps;

    int q() const { return field->q(); }
    int total_dim() const { return total(dims); }
    void validate() const;  // throws on shape mismatch
    nlohmann::json to_json() const;
};

FqModule zero_module(QuiverPtr q, const Field& f);
FqModule simple_module(QuiverPtr q, const Field& f, int i);
FqModule direct_sum(const FqModule& a, const FqModule& b);
// same module in new bases: vertex v gets basis rows of g[v] (invertible)
FqModule change_basis(const FqModule& m, const std::vector<Mat>& g);
bool is_nilpotent(const FqModule& m);

// Hom(M, N) as tuples of vertex matrices f_v with M_h f_t = f_s N_h
std::vector<std::vector<Mat>> hom_basis(const FqModule& m, const FqModule& n);
int hom_dim(const FqModule& m, const FqModule& n);
int end_dim(const FqModule& m);
int ext_dim(const FqModule& m, const FqModule& n);  // dim Hom - <dim M, dim N>
// |Aut(M)| by enumerating End(M); throws when q^{end} exceeds the guard
std::uint64_t aut_order(const FqModule& m, std::uint64_t guard = 2000000);
// looks for an invertible element of Hom(M, N) (same guard)
bool isomorphic(const FqModule& m, const FqModule& n, std::uint64_t guard = 2000000);

// graded subspace of a module, each component in RREF inside the ambient V_i
struct GradedSubspace {
    std::vector<Mat> basis;
    std::vector<std::vector<int>> piv;
    DimVector dims;
};

// Every arrow-stable graded subspace exactly once; restricted to one dimension vector when
// target is given. Callback returns false to stop. Throws once more than `budget` subspaces
// have been visited (0 = unlimited).
void for_each_submodule(const FqModule& l, const DimVector* target,
                        const std::function<bool(const GradedSubspace&)>& cb, std::uint64_t budget = 0);
FqModule submodule(const FqModule& l, const GradedSubspace& w);
FqModule quotient(const FqModule& l, const GradedSubspace& w);

// word (i_1, a_1) ... (i_s, a_s): number of filtrations L = L_0 > L_1 > ... > L_s = 0
// with L_{j-1}/L_j = S_{i_j}^{a_j}
struct WordStep {
    int vertex;
    int amount;
    bool operator==(const WordStep& o) const { return vertex == o.vertex && amount == o.amount; }
    bool operator<(const WordStep& o) const { return std::tie(vertex, amount) < std::tie(o.vertex, o.amount); }
};
using Word = std::vector<WordStep>;
std::uint64_t flag_count(const FqModule& l, const Word& w);
std::string word_str(const Quiver& q, const Word& w);

// BGP reflection functors; the result lives on quiver->reflected_at(i)
FqModule reflect_plus(const FqModule& m, int i);   // i a sink
FqModule reflect_minus(const FqModule& m, int i);  // i a source

// M(beta_t) for an acyclic quiver with the default admissible sequence, built by reflection functors
FqModule build_beta(QuiverPtr q, const Field& f, int t);

// nilpotent cyclic / linear A_n / Jordan modules
FqModule build_multisegment(QuiverPtr q, const Multisegment& pi, const Field& f);
Multisegment classify_multisegment(const FqModule& m);
bool is_linear_An(const Quiver& q);  // arrows exactly i -> i+1
bool is_kronecker(const Quiver& q);  // two vertices, two arrows 0 -> 1

// closed points of P^1 over GF(q): monic irreducible f, or infinity (degree 1)
struct Point {
    bool inf = false;
    FqPoly f;
    int degree() const { return inf ? 1 : static_cast<int>(f.size()) - 1; }
    bool operator<(const Point& o) const;
    bool operator==(const Point& o) const { return inf == o.inf && f == o.f; }
    std::string str() const;
};
// points of degree d; for d = 1 the finite points come first and infinity last
std::vector<Point> closed_points(const Field& f, int d);

// Kronecker module: preprojective/preinjective multiplicities by beta index, regular part by point
struct KronDesc {
    std::map<int, int> pre;  // t <= 0
    std::map<int, int> inj;  // t > 0
    std::vector<std::pair<Point, Partition>> reg;  // sorted by point
    bool operator<(const KronDesc& o) const;
    bool operator==(const KronDesc& o) const { return pre == o.pre && inj == o.inj && reg == o.reg; }
    std::string str() const;
    DimVector dim() const;
};
FqModule build_regular(QuiverPtr q, const Field& f, const Point& z, int l);
FqModule build_kronecker(QuiverPtr q, const KronDesc& d, const Field& f);
KronDesc classify_kronecker(const FqModule& m);

// indecomposables of total dimension <= max_total (all of them for the supported quivers)
std::vector<FqModule> indecomposable_test_set(QuiverPtr q, const Field& f, int max_total);
// dims, dim End, then dim Hom(X, M), dim Hom(M, X) over the test set
std::vector<int> fingerprint(const FqModule& m, const std::vector<FqModule>& tests);

// iso-class key of a module over a supported quiver ("ms:..." or "kr:...")
std::string class_key(const FqModule& m);

// Hall numbers of L: counts of submodules W with dim W = dim_sub grouped by (class of L/W, class of W)
std::map<std::pair<std::string, std::string>, std::uint64_t> hall_census(const FqModule& l, const DimVector& dim_sub,
                                                                          std::uint64_t budget = 0);
std::uint64_t hall_number(const FqModule& l, const FqModule& m, const FqModule& n, std::uint64_t budget = 0);

}  // namespace hallcanon
