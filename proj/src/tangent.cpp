#include "strata/tangent.hpp"

#include <algorithm>

#include "strata/errors.hpp"

namespace strata {

namespace {

void check_square(const CMatrix& a)
{
    if (a.rows() != a.cols() || a.rows() < 1)
        throw InvalidArgument("tangent operators need a nonempty square matrix");
}

Eigen::Map<const Eigen::VectorXcd> vec(const CMatrix& m) { return {m.data(), m.size()}; }

} // namespace

CMatrix tangent_map(Action action, const CMatrix& a, const CMatrix& x)
{
    switch (action) {
    case Action::Similarity:
        return x * a - a * x;
    case Action::Congruence:
        return x.transpose() * a + a * x;
    case Action::StarCongruence:
        return x.adjoint() * a + a * x;
    }
    throw InvalidArgument("unknown action");
}

OperatorMatrix assemble_operator(Action action, const CMatrix& a)
{
    check_square(a);
    const Eigen::Index n = a.rows();
    const Eigen::Index nn = n * n;
    OperatorMatrix op{action, a, {}, {}};
    if (action != Action::StarCongruence) {
        op.complex_op.resize(nn, nn);
        CMatrix e = CMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < nn; ++k) {
            e(k % n, k / n) = 1.0;
            op.complex_op.col(k) = vec(tangent_map(action, a, e));
            e(k % n, k / n) = 0.0;
        }
        return op;
    }
    // the map is only real-linear, so realify: inputs E_ij and iE_ij, outputs (Re, Im)
    op.real_op.resize(2 * nn, 2 * nn);
    CMatrix e = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < 2 * nn; ++k) {
        const Eigen::Index idx = k % nn;
        e(idx % n, idx / n) = k < nn ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        const CMatrix y = tangent_map(action, a, e);
        op.real_op.col(k).head(nn) = vec(y).real();
        op.real_op.col(k).tail(nn) = vec(y).imag();
        e(idx % n, idx / n) = 0.0;
    }
    return op;
}

RankInfo tangent_rank(Action action, const CMatrix& a, double tol)
{
    if (!(tol > 0.0 && tol < 1.0))
        throw InvalidArgument("rank tolerance must lie in (0, 1)");
    const OperatorMatrix op = assemble_operator(action, a);
    const Eigen::VectorXd sv = action == Action::StarCongruence ? singular_values(op.real_op)
                                                                 : singular_values(op.complex_op);
    const double top = sv.size() ? sv(0) : 0.0;
    // a scalar A has a vanishing commutator; roundoff in S⁻¹AS must not count as rank
    const double scale = std::max(top, spectral_norm(a));
    if (scale == 0.0)
        return {0, 0.0, false};
    RankInfo r = rank_from_singular_values(sv, tol * scale);
    r.sigma_max = top;
    return r;
}

int codim_numeric(Action action, const CMatrix& a, double tol)
{
    const int n = static_cast<int>(a.rows());
    const int dim = action == Action::StarCongruence ? 2 * n * n : n * n;
    return dim - tangent_rank(action, a, tol).rank;
}

int similarity_codim_numeric(const CMatrix& a, double tol)
{
    return codim_numeric(Action::Similarity, a, tol);
}

int congruence_codim_numeric(const CMatrix& a, double tol)
{
    return codim_numeric(Action::Congruence, a, tol);
}

int star_congruence_codim_numeric(const CMatrix& a, double tol)
{
    return codim_numeric(Action::StarCongruence, a, tol);
}

} // namespace strata
