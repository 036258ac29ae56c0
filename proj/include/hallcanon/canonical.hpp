#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hallcanon/pbw.hpp"

namespace hallcanon {

// bar(E_a) = sum_b B_ab E_b with B = bar(A^-1) A; zeta = B - I (strictly lower)
LMatrix bar_matrix(const PbwData& d);

// g lower unitriangular, off-diagonal in v^-1 Z[v^-1], with bar(g) B = g.
// Throws if the recursion meets a non-antisymmetric right-hand side.
LMatrix lusztig_solve(const LMatrix& zeta);

// canonical element for aperiodic position a by truncating its monomial against the lower monomials
// (coordinates over E, i.e. the aperiodic N columns)
std::vector<LaurentPoly> truncate_monomial(const PbwData& d, std::size_t a);
// same, from any bar-invariant start x (E coordinates) with x_a = 1 and support at or below a
std::vector<LaurentPoly> truncate_from(const PbwData& d, std::size_t a, std::vector<LaurentPoly> x);

struct CanonicalData {
    PbwData pbw;
    LMatrix zeta;
    LMatrix g;         // C over E
    LMatrix c_over_n;  // g * e_over_n

    std::size_t size() const { return pbw.size(); }
    AlgebraElement c(std::size_t i) const { return pbw.over_n(c_over_n.at(i)); }
};

CanonicalData canonical_basis(const AlgebraContext& ctx, const DimVector& nu, int extension = 0);

struct VerifyOptions {
    int series_order = 10;
    bool second_extension = true;
};

struct VerifyReport {
    bool size_matches_dim_f = false;
    bool bar_invariant = false;       // bar(g A^-1) = g A^-1 over monomials
    bool unitriangular = false;       // g_aa = 1, g_ab in v^-1 Z[v^-1] below, 0 above
    bool almost_orthogonal = false;   // (C_a, C_b) in delta_ab + v^-1 Q[[v^-1]]
    bool truncation_agrees = false;   // monomial truncation gives the same C
    bool extension_agrees = false;    // a second linear extension gives the same C per index
    std::vector<std::string> failures;

    bool ok() const;
    nlohmann::json to_json() const;
};

VerifyReport verify(const AlgebraContext& ctx, const CanonicalData& data, const VerifyOptions& opt = {});

// deterministic bundle: no timestamps, indices in linear-extension order
nlohmann::json bundle_json(const Quiver& q, const CanonicalData& data, const VerifyReport& report);

// LaTeX table of C over N
std::string latex_table(const CanonicalData& data);

}  // namespace hallcanon
