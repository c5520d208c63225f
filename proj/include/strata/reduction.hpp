#pragma once

#include <vector>

#include "strata/structure.hpp"
#include "strata/template.hpp"

namespace strata {

/// Elementary similarity T; applying it maps M to T⁻¹MT. Indices are 0-based.
struct Elementary {
    enum class Kind { Scale, AddCol, Swap };
    Kind kind;
    int i;
    int j;   // unused for Scale
    cplx a;  // scale factor or multiplier

    /// column i times a, then row i divided by a
    static Elementary scale(int i, cplx a);
    /// column j += b·column i, then row i −= b·row j
    static Elementary add_col(int i, int j, cplx b);
    /// swap columns i and j, then rows i and j
    static Elementary swap(int i, int j);
};

CMatrix apply_elementary(const CMatrix& m, const Elementary& op);
/// In place; also right-multiplies `s` by T when given.
void apply_elementary_inplace(CMatrix& m, const Elementary& op, CMatrix* s = nullptr);
CMatrix elementary_matrix(int n, const Elementary& op);

struct SylvesterSolution {
    CMatrix m;
    double residual; // ‖J2·M − M·J1 + C‖_F
    double kappa;    // ‖M‖_F / ‖C‖_F (0 when C = 0)
};

/// Solves J2·M − M·J1 = −C for M (n2×n1). Throws SpectraOverlap when some eigenvalue
/// of J1 is closer than `gap_threshold` to one of J2.
SylvesterSolution sylvester_solve(const CMatrix& j1, const CMatrix& j2, const CMatrix& c,
                                  double gap_threshold = 1e-6);

struct ReductionOptions {
    double tol = 1e-12;        // target for off-pattern and off-diagonal-block magnitudes
    int max_iter = 50;         // sweeps, for each of the two stages
    double radius = 0.1;       // split requires ‖E‖₂ < radius·gap
    double gap_threshold = 1e-6;
    double min_pivot = 0.5;
};

struct SplitResult {
    CMatrix s;
    CMatrix b;                    // S⁻¹(J+E)S, block diagonal up to `off_diagonal`
    std::vector<CMatrix> blocks;  // its diagonal blocks
    double off_diagonal;          // largest entry outside the diagonal blocks
    int sweeps;
};

/// Block-diagonalizes blockdiag(J_1..J_t) + E by near-identity similarities; the J_i
/// must have pairwise separated spectra.
SplitResult split_by_eigenvalue(const std::vector<CMatrix>& j_blocks, const CMatrix& e,
                                const ReductionOptions& opt = {});

struct SingleReduction {
    CMatrix s;
    CMatrix d;
    double residual; // off-pattern magnitude
    int sweeps;
};

/// Brings M = J(λ, segre) + F to the miniversal pattern of {λ: segre}.
SingleReduction reduce_single_eigenvalue(const CMatrix& m, const Partition& segre, cplx lambda,
                                         const ReductionOptions& opt = {});

struct ReductionResult {
    CMatrix s;
    CMatrix d;
    double pattern_residual;
    double similarity_residual; // ‖S·D − (J+E)·S‖_F
    double s_minus_identity;    // ‖S − I‖₂
    bool pattern_ok;
    int split_sweeps;
    int reduce_sweeps;
};

/// Reduces J + E to the miniversal form of J; J must have concrete labels.
ReductionResult reduce_to_miniversal(const JordanType& j, const CMatrix& e, const ReductionOptions& opt = {});

} // namespace strata
