#pragma once

#include "strata/numeric.hpp"

namespace strata {

enum class Action { Similarity, Congruence, StarCongruence };

/// Matrix of the tangent map of `action` at `a`.
/// Similarity and congruence: complex n²×n², columns indexed by the unit matrices E_ij
/// (column-major vec). *Congruence: real 2n²×2n² acting on (Re X, Im X).
struct OperatorMatrix {
    Action action;
    CMatrix base;
    CMatrix complex_op; // empty for *congruence
    RMatrix real_op;    // empty otherwise
};

OperatorMatrix assemble_operator(Action action, const CMatrix& a);

/// Image of X under the tangent map.
CMatrix tangent_map(Action action, const CMatrix& a, const CMatrix& x);

/// Rank of the assembled operator at relative threshold `tol`.
RankInfo tangent_rank(Action action, const CMatrix& a, double tol = kDefaultRankTol);

/// n² − rank of X ↦ XA − AX.
int similarity_codim_numeric(const CMatrix& a, double tol = kDefaultRankTol);
/// n² − rank over ℂ of X ↦ XᵀA + AX.
int congruence_codim_numeric(const CMatrix& a, double tol = kDefaultRankTol);
/// 2n² − rank over ℝ of X ↦ X*A + AX.
int star_congruence_codim_numeric(const CMatrix& a, double tol = kDefaultRankTol);

int codim_numeric(Action action, const CMatrix& a, double tol = kDefaultRankTol);

} // namespace strata
