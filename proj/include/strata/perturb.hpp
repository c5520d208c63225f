#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "strata/structure.hpp"

namespace strata {

struct EigenCluster {
    cplx center;
    int multiplicity;
};

/// Eigenvalues grouped by single linkage at `radius`; sorted by (re, im) of the center.
std::vector<EigenCluster> numeric_eigen_clusters(const CMatrix& a, double radius);

/// w_j = rank((A−λI)^{j−1}) − rank((A−λI)^j), ranks at threshold tol·‖A−λI‖₂^j.
/// Throws NumericalAmbiguity when a singular value sits within a factor 10 of a threshold.
WeyrChar numeric_weyr(const CMatrix& a, cplx lambda, double tol = kDefaultRankTol);

/// Concrete labels are the cluster centers.
JordanType jordan_type_numeric(const CMatrix& a, double cluster_radius = 1e-6, double tol = kDefaultRankTol);

enum class PerturbKind { Dense, StrictlyUpper };

struct SurveyOptions {
    PerturbKind kind = PerturbKind::Dense;
    double cluster_radius = 1e-6;
    double tol = kDefaultRankTol;
};

struct SurveyTrial {
    int trial;
    std::string observed; // compact notation of the observed bundle, empty if undecided
    bool violation;
    std::string reason;
};

struct PerturbReport {
    JordanType base;
    double eps;
    std::uint64_t seed;
    PerturbKind kind;
    std::vector<SurveyTrial> trials;
    std::map<std::string, int> histogram; // observed bundle -> count

    int violation_count() const;
    bool passed() const { return violation_count() == 0; }
    std::string dominant() const;
};

/// Perturbation used by trial `trial`: complex Gaussian entries, Frobenius norm 1.
CMatrix survey_perturbation(int n, std::uint64_t seed, int trial, PerturbKind kind);

/// A = J(t) + ε·E per trial; the observed bundle must be reachable from bundle(t) in
/// the bundle closure graph. Violations are recorded, never thrown.
PerturbReport random_survey(const JordanType& t, double eps, int trials, std::uint64_t seed,
                            const SurveyOptions& opt = {});

nlohmann::json to_json(const PerturbReport& r);

struct Witness {
    bool found = false;
    std::vector<std::pair<int, int>> entries; // 0-based positions carrying ε (or ε/√2 for pairs)
    CMatrix e;
    std::vector<std::pair<int, int>> single_entry_witnesses; // every single position that works
    int candidates_tried = 0;
};

/// Sparse strictly upper-triangular E with ‖E‖_F = ε and J + E of type `to`: single
/// entries in lexicographic order first, then pairs. Both types must be nilpotent
/// (one concrete label 0) with `from` in the closure of `to`.
Witness arrow_realization_search(const JordanType& from, const JordanType& to, double eps = 1e-3,
                                 double tol = kDefaultRankTol);

nlohmann::json to_json(const Witness& w);

} // namespace strata
