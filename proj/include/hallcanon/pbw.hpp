#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hallcanon/hallalg.hpp"

namespace hallcanon {

using LMatrix = std::vector<std::vector<LaurentPoly>>;

enum class Cmp { Less, Greater, Equal, Incomparable };
std::string cmp_str(Cmp c);

// <=_G on multisegments of equal dimension: pi' <=_G pi iff dim Hom(S_i[l], M(pi')) >= dim Hom(S_i[l], M(pi))
// for every segment of length at most |pi| + |pi'|
Cmp compare_G(const Quiver& q, const Multisegment& a, const Multisegment& b);
// the partial order on indices of the same dimension (Less means a strictly below b)
Cmp order_cmp(const Quiver& q, const NIndex& a, const NIndex& b);

// dimension of the nu-graded piece of f, from the positive roots and their multiplicities
BigInt dim_f(const Quiver& q, const DimVector& nu);

struct OrderedIndexSet {
    DimVector nu;
    std::vector<NIndex> all;        // G_nu, linear extension order (smallest first)
    std::vector<NIndex> aperiodic;  // G^a_nu, same order
    int extension = 0;              // 0: ties broken by index order, 1: by reversed index order
};
// linear extension by a deterministic topological sort; throws if the relation has a cycle
OrderedIndexSet enumerate_indices(const Quiver& q, const DimVector& nu, int extension = 0);

// distinguished words for an aperiodic multisegment: iterated peeling of tops, each candidate
// verified on its expansion (coefficient 1 on <M(pi)>, everything else strictly below in <=_G)
std::vector<Word> distinguished_words(const AlgebraContext& ctx, const Multisegment& pi, int want = 1);
Word distinguished_word(const AlgebraContext& ctx, const Multisegment& pi);
// extension of m by n (n the submodule) with minimal dim End, over multisegments
Multisegment generic_extension(const AlgebraContext& ctx, const Multisegment& m, const Multisegment& n);

// omega(c, t_lambda): the word of the monomial attached to an index
Word index_word(const AlgebraContext& ctx, const NIndex& c);
Word dimvec_word(const Quiver& q, const DimVector& nu);  // u_1^(nu_1) ... u_n^(nu_n), arrows pointing forward

struct PbwData {
    DimVector nu;
    OrderedIndexSet order;
    std::vector<Word> words;  // one per aperiodic index
    LMatrix phi;              // monomial rows over all N columns
    LMatrix a;                // monomial over E: the aperiodic columns of phi (unitriangular)
    LMatrix a_inv;            // E over monomials
    LMatrix e_over_n;         // a_inv * phi

    std::size_t size() const { return order.aperiodic.size(); }
    AlgebraElement monomial(std::size_t i) const;
    AlgebraElement e(std::size_t i) const;
    AlgebraElement over_n(const std::vector<LaurentPoly>& row) const;  // row over all columns
};

PbwData pbw_basis(const AlgebraContext& ctx, const DimVector& nu, int extension = 0,
                  const std::vector<Word>* override_words = nullptr);

// small exact matrix helpers over Z[v, v^-1]
LMatrix mat_mul(const LMatrix& a, const LMatrix& b);
LMatrix mat_bar(const LMatrix& a);
LMatrix mat_identity(std::size_t n);
// inverse of a lower unitriangular matrix
LMatrix unitriangular_inverse(const LMatrix& a);
nlohmann::json mat_json(const LMatrix& a);

}  // namespace hallcanon
