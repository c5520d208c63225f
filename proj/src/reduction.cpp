#include "strata/reduction.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "strata/errors.hpp"

namespace strata {

Elementary Elementary::scale(int i, cplx a)
{
    if (a == cplx(0.0, 0.0))
        throw InvalidArgument("scale factor must be nonzero");
    return {Kind::Scale, i, i, a};
}

Elementary Elementary::add_col(int i, int j, cplx b)
{
    if (i == j)
        throw InvalidArgument("add_col needs two different indices");
    return {Kind::AddCol, i, j, b};
}

Elementary Elementary::swap(int i, int j)
{
    if (i == j)
        throw InvalidArgument("swap needs two different indices");
    return {Kind::Swap, i, j, {1.0, 0.0}};
}

void apply_elementary_inplace(CMatrix& m, const Elementary& op, CMatrix* s)
{
    const int n = static_cast<int>(m.rows());
    if (op.i < 0 || op.i >= n || op.j < 0 || op.j >= n)
        throw InvalidArgument("elementary operation index out of range");
    switch (op.kind) {
    case Elementary::Kind::Scale:
        m.col(op.i) *= op.a;
        m.row(op.i) /= op.a;
        if (s)
            s->col(op.i) *= op.a;
        break;
    case Elementary::Kind::AddCol:
        m.col(op.j) += op.a * m.col(op.i);
        m.row(op.i) -= op.a * m.row(op.j);
        if (s)
            s->col(op.j) += op.a * s->col(op.i);
        break;
    case Elementary::Kind::Swap:
        m.col(op.i).swap(m.col(op.j));
        m.row(op.i).swap(m.row(op.j));
        if (s)
            s->col(op.i).swap(s->col(op.j));
        break;
    }
}

CMatrix apply_elementary(const CMatrix& m, const Elementary& op)
{
    if (m.rows() != m.cols())
        throw InvalidArgument("apply_elementary needs a square matrix");
    CMatrix out = m;
    apply_elementary_inplace(out, op);
    return out;
}

CMatrix elementary_matrix(int n, const Elementary& op)
{
    CMatrix t = CMatrix::Identity(n, n);
    CMatrix dummy = CMatrix::Zero(n, n);
    apply_elementary_inplace(dummy, op, &t);
    return t;
}

namespace {

Eigen::VectorXcd eigenvalues(const CMatrix& a)
{
    Eigen::ComplexEigenSolver<CMatrix> es(a, false);
    return es.eigenvalues();
}

double spectral_gap(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y)
{
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < x.size(); ++p)
        for (Eigen::Index q = 0; q < y.size(); ++q)
            gap = std::min(gap, std::abs(x[p] - y[q]));
    return gap;
}

} // namespace

SylvesterSolution sylvester_solve(const CMatrix& j1, const CMatrix& j2, const CMatrix& c, double gap_threshold)
{
    const Eigen::Index n1 = j1.rows();
    const Eigen::Index n2 = j2.rows();
    if (j1.cols() != n1 || j2.cols() != n2 || c.rows() != n2 || c.cols() != n1)
        throw InvalidArgument("sylvester_solve: inconsistent sizes");
    if (spectral_gap(eigenvalues(j1), eigenvalues(j2)) < gap_threshold)
        throw SpectraOverlap("sylvester_solve: spectra are not separated");

    // (I ⊗ J2 − J1ᵀ ⊗ I) vec M = −vec C
    const Eigen::Index nn = n1 * n2;
    CMatrix k = CMatrix::Zero(nn, nn);
    for (Eigen::Index a = 0; a < n1; ++a)
        k.block(a * n2, a * n2, n2, n2) = j2;
    for (Eigen::Index a = 0; a < n1; ++a)
        for (Eigen::Index b = 0; b < n1; ++b)
            k.block(a * n2, b * n2, n2, n2).diagonal().array() -= j1(b, a);
    const Eigen::Map<const Eigen::VectorXcd> rhs(c.data(), nn);
    Eigen::VectorXcd v = k.partialPivLu().solve(-rhs);

    SylvesterSolution sol;
    sol.m = Eigen::Map<CMatrix>(v.data(), n2, n1);
    sol.residual = (j2 * sol.m - sol.m * j1 + c).norm();
    const double cn = c.norm();
    sol.kappa = cn > 0.0 ? sol.m.norm() / cn : 0.0;
    return sol;
}

namespace {

struct Range {
    Eigen::Index first;
    Eigen::Index size;
};

double off_block_max(const CMatrix& b, const std::vector<Range>& parts)
{
    double worst = 0.0;
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (std::size_t q = 0; q < parts.size(); ++q)
            if (p != q)
                worst = std::max(worst,
                                 b.block(parts[p].first, parts[q].first, parts[p].size, parts[q].size)
                                     .cwiseAbs()
                                     .maxCoeff());
    return worst;
}

// Kill block (i, j) with T = I + M at (i, j); T⁻¹ = I − M there since i != j.
void clear_block(CMatrix& b, CMatrix& s, const Range& ri, const Range& rj, double gap_threshold)
{
    const CMatrix bii = b.block(ri.first, ri.first, ri.size, ri.size);
    const CMatrix bjj = b.block(rj.first, rj.first, rj.size, rj.size);
    const CMatrix bij = b.block(ri.first, rj.first, ri.size, rj.size);
    // Bii·M − M·Bjj = −Bij
    const CMatrix m = sylvester_solve(bjj, bii, bij, gap_threshold).m;
    b.middleCols(rj.first, rj.size) += b.middleCols(ri.first, ri.size) * m;
    b.middleRows(ri.first, ri.size) -= m * b.middleRows(rj.first, rj.size);
    s.middleCols(rj.first, rj.size) += s.middleCols(ri.first, ri.size) * m;
}

} // namespace

SplitResult split_by_eigenvalue(const std::vector<CMatrix>& j_blocks, const CMatrix& e, const ReductionOptions& opt)
{
    if (j_blocks.empty())
        throw InvalidArgument("split_by_eigenvalue needs at least one block");
    std::vector<Range> parts;
    Eigen::Index n = 0;
    for (const CMatrix& jb : j_blocks) {
        if (jb.rows() != jb.cols() || jb.rows() < 1)
            throw InvalidArgument("diagonal blocks must be square and nonempty");
        parts.push_back({n, jb.rows()});
        n += jb.rows();
    }
    if (e.rows() != n || e.cols() != n)
        throw InvalidArgument("perturbation size does not match the blocks");

    SplitResult out;
    out.s = CMatrix::Identity(n, n);
    out.b = e;
    for (std::size_t p = 0; p < parts.size(); ++p)
        out.b.block(parts[p].first, parts[p].first, parts[p].size, parts[p].size) += j_blocks[p];
    out.sweeps = 0;

    if (parts.size() > 1) {
        double gap = std::numeric_limits<double>::infinity();
        std::vector<Eigen::VectorXcd> spectra;
        for (const CMatrix& jb : j_blocks)
            spectra.push_back(eigenvalues(jb));
        for (std::size_t p = 0; p < spectra.size(); ++p)
            for (std::size_t q = p + 1; q < spectra.size(); ++q)
                gap = std::min(gap, spectral_gap(spectra[p], spectra[q]));
        if (gap < opt.gap_threshold)
            throw SpectraOverlap("split_by_eigenvalue: blocks share an eigenvalue");
        if (spectral_norm(e) >= opt.radius * gap)
            throw ReductionError("perturbation too large for the eigenvalue gap");

        const int t = static_cast<int>(parts.size());
        const double scale = 1.0 + out.b.cwiseAbs().maxCoeff();
        while (off_block_max(out.b, parts) > opt.tol * scale) {
            if (out.sweeps == opt.max_iter)
                throw ReductionError("block splitting did not converge");
            ++out.sweeps;
            // below the diagonal, nearest underdiagonal first
            for (int d = 1; d < t; ++d)
                for (int j = 0; j + d < t; ++j)
                    clear_block(out.b, out.s, parts[static_cast<std::size_t>(j + d)],
                                parts[static_cast<std::size_t>(j)], opt.gap_threshold);
            // then above it
            for (int d = 1; d < t; ++d)
                for (int i = 0; i + d < t; ++i)
                    clear_block(out.b, out.s, parts[static_cast<std::size_t>(i)],
                                parts[static_cast<std::size_t>(i + d)], opt.gap_threshold);
        }
    }
    out.off_diagonal = parts.size() > 1 ? off_block_max(out.b, parts) : 0.0;
    for (const Range& r : parts)
        out.blocks.push_back(out.b.block(r.first, r.first, r.size, r.size));
    return out;
}

namespace {

// One eigenvalue's Jordan blocks living at rows/cols [offset, offset + total) of b.
class SingleEigenSweep {
public:
    SingleEigenSweep(CMatrix& b, CMatrix& s, Eigen::Index offset, const Partition& segre, cplx lambda)
        : b_(b), s_(s), off_(static_cast<int>(offset)), lambda_(lambda)
    {
        int pos = 0;
        for (int size : segre.parts()) {
            first_.push_back(pos);
            last_.push_back(pos + size - 1);
            for (int k = 0; k < size; ++k)
                block_of_.push_back(static_cast<int>(first_.size()) - 1);
            pos += size;
        }
        n_ = pos;
    }

    // N = B − λI on the local block
    cplx nil(int r, int q) const
    {
        cplx v = b_(off_ + r, off_ + q);
        return r == q ? v - lambda_ : v;
    }

    bool is_star(int r, int q) const
    {
        const int kr = block_of_[static_cast<std::size_t>(r)];
        const int kq = block_of_[static_cast<std::size_t>(q)];
        if (kr <= kq)
            return r == last_[static_cast<std::size_t>(kr)];
        return q == first_[static_cast<std::size_t>(kq)];
    }

    double residual() const
    {
        double worst = 0.0;
        for (int r = 0; r < n_; ++r) {
            for (int q = 0; q < n_; ++q) {
                if (is_star(r, q))
                    continue;
                const bool pivot = q == r + 1 && block_of_[static_cast<std::size_t>(r)] ==
                                                     block_of_[static_cast<std::size_t>(q)];
                worst = std::max(worst, std::abs(nil(r, q) - (pivot ? 1.0 : 0.0)));
            }
        }
        return worst;
    }

    void sweep(double min_pivot)
    {
        const int nb = static_cast<int>(first_.size());
        // rows above each block's last row: normalize the pivot, push the rest down-right
        for (int k = 0; k < nb; ++k) {
            for (int r = first_[static_cast<std::size_t>(k)]; r < last_[static_cast<std::size_t>(k)]; ++r) {
                const cplx p = nil(r, r + 1);
                if (std::abs(p) < min_pivot)
                    throw ReductionError("superdiagonal pivot collapsed; perturbation too large");
                if (p != cplx(1.0, 0.0))
                    op(Elementary::scale(off_ + r + 1, 1.0 / p));
                for (int q = first_[static_cast<std::size_t>(k)]; q < n_; ++q) {
                    if (q == r + 1)
                        continue;
                    const cplx v = nil(r, q);
                    if (v != cplx(0.0, 0.0))
                        op(Elementary::add_col(off_ + r + 1, off_ + q, -v));
                }
            }
        }
        // below the block diagonal, bottom up: push toward the first column of each block
        for (int r = n_ - 1; r >= 0; --r) {
            const int kr = block_of_[static_cast<std::size_t>(r)];
            for (int l = 0; l < kr; ++l) {
                for (int q = first_[static_cast<std::size_t>(l)] + 1; q <= last_[static_cast<std::size_t>(l)]; ++q) {
                    const cplx v = nil(r, q);
                    if (v == cplx(0.0, 0.0))
                        continue;
                    const cplx piv = nil(q - 1, q);
                    op(Elementary::add_col(off_ + r, off_ + q - 1, v / piv));
                }
            }
        }
    }

private:
    void op(const Elementary& e) { apply_elementary_inplace(b_, e, &s_); }

    CMatrix& b_;
    CMatrix& s_;
    int off_;
    cplx lambda_;
    int n_ = 0;
    std::vector<int> first_;
    std::vector<int> last_;
    std::vector<int> block_of_;
};

int reduce_block(CMatrix& b, CMatrix& s, Eigen::Index offset, const Partition& segre, cplx lambda,
                 const ReductionOptions& opt, double& residual)
{
    SingleEigenSweep sw(b, s, offset, segre, lambda);
    const double scale = 1.0 + std::abs(lambda);
    int sweeps = 0;
    residual = sw.residual();
    while (residual > opt.tol * scale) {
        if (sweeps == opt.max_iter)
            throw ReductionError("single-eigenvalue reduction did not converge");
        sw.sweep(opt.min_pivot);
        ++sweeps;
        residual = sw.residual();
    }
    return sweeps;
}

} // namespace

SingleReduction reduce_single_eigenvalue(const CMatrix& m, const Partition& segre, cplx lambda,
                                         const ReductionOptions& opt)
{
    if (m.rows() != m.cols() || m.rows() != segre.total())
        throw InvalidArgument("matrix size does not match the partition");
    SingleReduction out{CMatrix::Identity(m.rows(), m.cols()), m, 0.0, 0};
    out.sweeps = reduce_block(out.d, out.s, 0, segre, lambda, opt, out.residual);
    return out;
}

ReductionResult reduce_to_miniversal(const JordanType& j, const CMatrix& e, const ReductionOptions& opt)
{
    const CMatrix jm = jordan_matrix(j);
    const Eigen::Index n = jm.rows();
    if (e.rows() != n || e.cols() != n)
        throw InvalidArgument("perturbation size does not match the Jordan type");

    std::vector<CMatrix> j_blocks;
    Eigen::Index pos = 0;
    for (const auto& [label, part] : j.entries()) {
        j_blocks.push_back(jm.block(pos, pos, part.total(), part.total()));
        pos += part.total();
    }
    SplitResult split = split_by_eigenvalue(j_blocks, e, opt);

    ReductionResult out;
    out.s = std::move(split.s);
    out.d = std::move(split.b);
    out.split_sweeps = split.sweeps;
    out.reduce_sweeps = 0;
    pos = 0;
    for (const auto& [label, part] : j.entries()) {
        double res = 0.0;
        out.reduce_sweeps = std::max(out.reduce_sweeps, reduce_block(out.d, out.s, pos, part, label.value(), opt, res));
        pos += part.total();
    }
    const PatternCheck pc = pattern_check(out.d, arnold_template(j), opt.tol * (1.0 + jm.cwiseAbs().maxCoeff()));
    out.pattern_residual = pc.residual;
    out.pattern_ok = pc.ok;
    out.similarity_residual = (out.s * out.d - (jm + e) * out.s).norm();
    out.s_minus_identity = spectral_norm(out.s - CMatrix::Identity(n, n));
    return out;
}

} // namespace strata
