#include "strata/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "strata/errors.hpp"
#include "strata/similarity_order.hpp"

namespace strata {

std::vector<EigenCluster> numeric_eigen_clusters(const CMatrix& a, double radius)
{
    if (a.rows() != a.cols() || a.rows() < 1)
        throw InvalidArgument("need a nonempty square matrix");
    if (!(radius > 0.0))
        throw InvalidArgument("cluster radius must be positive");
    Eigen::ComplexEigenSolver<CMatrix> es(a, false);
    if (es.info() != Eigen::Success)
        throw NumericalAmbiguity("eigenvalue iteration did not converge");
    const Eigen::VectorXcd ev = es.eigenvalues();
    const int n = static_cast<int>(ev.size());

    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            if (std::abs(ev[p] - ev[q]) <= radius)
                parent[static_cast<std::size_t>(root(p))] = root(q);

    std::map<int, std::vector<cplx>> groups;
    for (int p = 0; p < n; ++p)
        groups[root(p)].push_back(ev[p]);
    std::vector<EigenCluster> out;
    for (const auto& [r, members] : groups) {
        cplx sum = 0.0;
        for (cplx z : members)
            sum += z;
        out.push_back({sum / static_cast<double>(members.size()), static_cast<int>(members.size())});
    }
    std::sort(out.begin(), out.end(), [](const EigenCluster& x, const EigenCluster& y) {
        if (x.center.real() != y.center.real())
            return x.center.real() < y.center.real();
        return x.center.imag() < y.center.imag();
    });
    return out;
}

WeyrChar numeric_weyr(const CMatrix& a, cplx lambda, double tol)
{
    const Eigen::Index n = a.rows();
    if (a.cols() != n || n < 1)
        throw InvalidArgument("need a nonempty square matrix");
    if (!(tol > 0.0 && tol < 1.0))
        throw InvalidArgument("rank tolerance must lie in (0, 1)");
    const CMatrix nm = a - lambda * CMatrix::Identity(n, n);
    const double norm = spectral_norm(nm);
    WeyrChar w;
    if (norm == 0.0) {
        w.w.push_back(static_cast<int>(n));
        return w;
    }
    int prev = static_cast<int>(n);
    CMatrix power = CMatrix::Identity(n, n);
    double scale = 1.0;
    for (Eigen::Index j = 1; j <= n; ++j) {
        power = power * nm;
        scale *= norm;
        const RankInfo info = rank_from_singular_values(singular_values(power), tol * scale);
        if (info.ambiguous)
            throw NumericalAmbiguity("rank of (A-λI)^" + std::to_string(j) + " is not clearly separated");
        if (info.rank == prev)
            break;
        w.w.push_back(prev - info.rank);
        prev = info.rank;
        if (prev == 0)
            break;
    }
    return w;
}

JordanType jordan_type_numeric(const CMatrix& a, double cluster_radius, double tol)
{
    JordanType::Entries entries;
    for (const EigenCluster& c : numeric_eigen_clusters(a, cluster_radius)) {
        Partition p({1});
        if (c.multiplicity > 1) {
            const WeyrChar w = numeric_weyr(a, c.center, tol);
            if (w.empty() || w.total() != c.multiplicity)
                throw NumericalAmbiguity("Weyr characteristic disagrees with the cluster size");
            p = w.segre();
        }
        entries.emplace(EigLabel::concrete(c.center), p);
    }
    return JordanType(std::move(entries));
}

int PerturbReport::violation_count() const
{
    return static_cast<int>(std::count_if(trials.begin(), trials.end(), [](const SurveyTrial& t) { return t.violation; }));
}

std::string PerturbReport::dominant() const
{
    std::string best;
    int count = -1;
    for (const auto& [k, v] : histogram)
        if (v > count) {
            best = k;
            count = v;
        }
    return best;
}

CMatrix survey_perturbation(int n, std::uint64_t seed, int trial, PerturbKind kind)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> g;
    CMatrix e = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (kind == PerturbKind::Dense || i < j)
                e(i, j) = cplx(g(rng), g(rng));
    const double norm = e.norm();
    return norm > 0.0 ? CMatrix(e / norm) : e;
}

PerturbReport random_survey(const JordanType& t, double eps, int trials, std::uint64_t seed, const SurveyOptions& opt)
{
    if (trials < 1)
        throw InvalidArgument("need at least one trial");
    if (!(eps >= 0.0))
        throw InvalidArgument("eps must be nonnegative");
    const CMatrix j = jordan_matrix(t);
    const int n = t.order();
    const ClosureGraph g = build_bundle_graph(n);
    const BundleType base = canonical_bundle_labeling(t);
    const int base_idx = *g.find(format_compact(base.type()));

    PerturbReport r{t, eps, seed, opt.kind, {}, {}};
    for (int k = 0; k < trials; ++k) {
        const CMatrix a = j + eps * survey_perturbation(n, seed, k, opt.kind);
        SurveyTrial st{k, {}, false, {}};
        try {
            const BundleType seen = canonical_bundle_labeling(jordan_type_numeric(a, opt.cluster_radius, opt.tol));
            st.observed = format_compact(seen.type());
            const int idx = *g.find(st.observed);
            if (!g.reachable(base_idx, idx)) {
                st.violation = true;
                st.reason = "observed bundle is not above the base bundle";
            }
            ++r.histogram[format_display(seen.type())];
        } catch (const NumericalAmbiguity& e) {
            st.violation = true;
            st.reason = e.what();
        }
        r.trials.push_back(std::move(st));
    }
    return r;
}

nlohmann::json to_json(const PerturbReport& r)
{
    nlohmann::json doc;
    doc["base"] = format_compact(r.base);
    doc["eps"] = r.eps;
    doc["seed"] = r.seed;
    doc["kind"] = r.kind == PerturbKind::Dense ? "dense" : "strictly_upper";
    doc["trials"] = static_cast<int>(r.trials.size());
    doc["histogram"] = r.histogram;
    doc["dominant"] = r.dominant();
    doc["observed"] = nlohmann::json::array();
    doc["violations"] = nlohmann::json::array();
    for (const SurveyTrial& t : r.trials) {
        doc["observed"].push_back(t.observed);
        if (t.violation)
            doc["violations"].push_back({{"trial", t.trial}, {"observed", t.observed}, {"reason", t.reason}});
    }
    doc["passed"] = r.passed();
    return doc;
}

namespace {

const Partition& nilpotent_partition(const JordanType& t)
{
    const EigLabel zero = EigLabel::concrete(0.0);
    const Partition* p = t.partition_of(zero);
    if (t.label_count() != 1 || !p)
        throw InvalidArgument("witness search needs nilpotent types with the single eigenvalue 0");
    return *p;
}

bool realizes(const CMatrix& a, const Partition& target, double tol)
{
    try {
        const WeyrChar w = numeric_weyr(a, 0.0, tol);
        return !w.empty() && w.total() == target.total() && w.segre() == target;
    } catch (const NumericalAmbiguity&) {
        return false;
    }
}

} // namespace

Witness arrow_realization_search(const JordanType& from, const JordanType& to, double eps, double tol)
{
    const Partition& pf = nilpotent_partition(from);
    const Partition& pt = nilpotent_partition(to);
    if (pf.total() != pt.total())
        throw InvalidArgument("witness search needs types of the same order");
    if (!closure_leq(from, to))
        throw InvalidArgument("target is not above the source in the closure order");
    if (!(eps > 0.0))
        throw InvalidArgument("eps must be positive");

    const int n = pf.total();
    const CMatrix j = jordan_matrix(from);
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            slots.emplace_back(i, k);

    Witness w;
    for (const auto& [i, k] : slots) {
        CMatrix e = CMatrix::Zero(n, n);
        e(i, k) = eps;
        ++w.candidates_tried;
        if (realizes(j + e, pt, tol)) {
            w.single_entry_witnesses.emplace_back(i, k);
            if (!w.found) {
                w.found = true;
                w.entries = {{i, k}};
                w.e = e;
            }
        }
    }
    if (w.found)
        return w;
    const double v = eps / std::sqrt(2.0);
    for (std::size_t p = 0; p < slots.size(); ++p) {
        for (std::size_t q = p + 1; q < slots.size(); ++q) {
            CMatrix e = CMatrix::Zero(n, n);
            e(slots[p].first, slots[p].second) = v;
            e(slots[q].first, slots[q].second) = v;
            ++w.candidates_tried;
            if (realizes(j + e, pt, tol)) {
                w.found = true;
                w.entries = {slots[p], slots[q]};
                w.e = e;
                return w;
            }
        }
    }
    return w;
}

nlohmann::json to_json(const Witness& w)
{
    nlohmann::json doc;
    doc["found"] = w.found;
    doc["entries"] = nlohmann::json::array();
    for (const auto& [i, k] : w.entries)
        doc["entries"].push_back({i, k});
    doc["single_entry_witnesses"] = nlohmann::json::array();
    for (const auto& [i, k] : w.single_entry_witnesses)
        doc["single_entry_witnesses"].push_back({i, k});
    doc["candidates_tried"] = w.candidates_tried;
    if (w.found) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < w.e.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < w.e.cols(); ++k)
                row.push_back({w.e(i, k).real(), w.e(i, k).imag()});
            rows.push_back(std::move(row));
        }
        doc["e"] = {{"n", w.e.rows()}, {"rows", rows}};
    }
    return doc;
}

} // namespace strata
