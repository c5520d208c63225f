#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace strata {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Default relative threshold for singular-value rank decisions.
inline constexpr double kDefaultRankTol = 1e-8;

struct RankInfo {
    int rank = 0;
    double sigma_max = 0.0;
    // true when some singular value sits within a factor `band` of the threshold
    bool ambiguous = false;
};

Eigen::VectorXd singular_values(const CMatrix& a);
Eigen::VectorXd singular_values(const RMatrix& a);

/// Counts singular values strictly above `threshold`.
RankInfo rank_from_singular_values(const Eigen::VectorXd& sv, double threshold, double band = 10.0);

/// Rank with threshold `rel_tol * sigma_max`; sigma_max == 0 gives rank 0.
RankInfo relative_rank(const CMatrix& a, double rel_tol);
RankInfo relative_rank(const RMatrix& a, double rel_tol);

double spectral_norm(const CMatrix& a);

/// Parses `2`, `-0.5`, `i`, `-2.5i`, `3+i`, `1e-3-2i`; surrounding parentheses are allowed.
cplx parse_complex(std::string_view text);

/// Shortest text that parses back to exactly the same value.
std::string format_complex_exact(cplx z);

/// Fixed 12-significant-digit formatting used for all machine-readable output.
std::string format_double(double x);

CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

} // namespace strata
