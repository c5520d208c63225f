#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "strata/errors.hpp"
#include "strata/perturb.hpp"
#include "strata/similarity_order.hpp"

using namespace strata;

namespace {

JordanType J(const char* s) { return parse_compact(s); }

CMatrix lis(cplx lambda, double eps, int row, int col)
{
    CMatrix a = jordan_matrix(concretize(J("a^2 a^2"), {lambda}));
    a(row, col) = eps;
    return a;
}

} // namespace

TEST_CASE("eigenvalue clusters")
{
    auto c = numeric_eigen_clusters(jordan_matrix(J("(5)^2")), 1e-6);
    REQUIRE(c.size() == 1);
    CHECK(c[0].multiplicity == 2);
    CHECK(std::abs(c[0].center - 5.0) < 1e-6);

    CMatrix d = CMatrix::Zero(2, 2);
    d(1, 1) = 1e-9;
    c = numeric_eigen_clusters(d, 1e-6);
    REQUIRE(c.size() == 1);
    CHECK(c[0].multiplicity == 2);

    d(1, 1) = 1.0;
    c = numeric_eigen_clusters(d, 1e-6);
    REQUIRE(c.size() == 2);
    CHECK(c[0].multiplicity + c[1].multiplicity == 2);
    CHECK_THROWS_AS(numeric_eigen_clusters(d, 0.0), InvalidArgument);
}

TEST_CASE("Weyr characteristics of the instability example")
{
    for (cplx lambda : {cplx(0, 0), cplx(1, 0)})
        for (double eps : {1e-3, 1e-4, 1e-5}) {
            CHECK(numeric_weyr(lis(lambda, eps, 1, 3), lambda, 1e-8).w == std::vector<int>{2, 1, 1});
            CHECK(numeric_weyr(lis(lambda, eps, 1, 2), lambda, 1e-8).w == std::vector<int>{1, 1, 1, 1});
        }
    CHECK(numeric_weyr(7.0 * CMatrix::Identity(2, 2), 7.0).w == std::vector<int>{2});
    CHECK(numeric_weyr(CMatrix::Identity(2, 2), 3.0).empty());
    CHECK_THROWS_AS(numeric_weyr(CMatrix::Identity(2, 2), 1.0, 2.0), InvalidArgument);
}

TEST_CASE("an ill-separated rank is reported")
{
    CMatrix a = jordan_matrix(J("(0)^2"));
    a(1, 0) = 3e-8; // singular value sits inside the tolerance band
    CHECK_THROWS_AS(numeric_weyr(a, 0.0, 1e-8), NumericalAmbiguity);
}

TEST_CASE("exact Jordan matrices are recovered up to order 6")
{
    const std::vector<EigLabel> labels{EigLabel::concrete(0.0), EigLabel::concrete(1.0), EigLabel::concrete({2, 1})};
    for (int n = 1; n <= 6; ++n)
        for (const JordanType& t : enumerate_jordan_types(n, labels)) {
            CAPTURE(format_compact(t));
            CHECK(jordan_type_numeric(jordan_matrix(t), 1e-6, 1e-8) == t);
            for (const auto& [l, p] : t.entries())
                CHECK(numeric_weyr(jordan_matrix(t), l.value(), 1e-8) == weyr_of_partition(p));
        }
}

TEST_CASE("numeric Jordan types")
{
    CHECK(jordan_type_numeric(jordan_matrix(J("(0)^3 (2)"))) == J("(0)^3 (2)"));
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix a(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                a(i, j) = cplx(g(rng), g(rng));
        const JordanType t = jordan_type_numeric(a);
        CHECK(t.label_count() == 5);
        for (const auto& [l, p] : t.entries())
            CHECK(p.parts() == std::vector<int>{1});
    }
}

TEST_CASE("surveys")
{
    const auto r = random_survey(J("(0)^4"), 1e-3, 1000, 42);
    CHECK(r.passed());
    CHECK(r.violation_count() == 0);
    CHECK(r.dominant() == "λμνξ");

    const auto zero = random_survey(J("(0)^2 (0)^2"), 0.0, 5, 1);
    CHECK(zero.histogram.size() == 1);
    CHECK(zero.histogram.begin()->first == "λ²λ²");

    SurveyOptions up;
    up.kind = PerturbKind::StrictlyUpper;
    const auto u = random_survey(J("(0)^2 (0)^2"), 1e-3, 200, 42, up);
    CHECK(u.passed());
    for (const auto& [k, v] : u.histogram)
        CHECK((k == "λ²λ²" || k == "λ³λ" || k == "λ⁴"));
    CHECK_THROWS_AS(random_survey(J("(0)^2"), 1e-3, 0, 1), InvalidArgument);
}

TEST_CASE("surveys are deterministic")
{
    const auto a = random_survey(J("(0)^2 (0) (1)"), 1e-3, 50, 99);
    const auto b = random_survey(J("(0)^2 (0) (1)"), 1e-3, 50, 99);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK((survey_perturbation(4, 7, 3, PerturbKind::Dense) - survey_perturbation(4, 7, 3, PerturbKind::Dense)).norm() == 0.0);
    CHECK(std::abs(survey_perturbation(4, 7, 3, PerturbKind::Dense).norm() - 1.0) < 1e-14);
    const CMatrix up = survey_perturbation(4, 7, 3, PerturbKind::StrictlyUpper);
    CHECK(up.triangularView<Eigen::Lower>().toDenseMatrix().norm() == 0.0);
}

TEST_CASE("strictly upper perturbations never move below the base")
{
    SurveyOptions up;
    up.kind = PerturbKind::StrictlyUpper;
    for (const Partition& p : partitions_of(4)) {
        JordanType::Entries e;
        e.emplace(EigLabel::concrete(0.0), p);
        const JordanType base(std::move(e));
        const CMatrix j = jordan_matrix(base);
        const auto base_sums = weyr_of_partition(p).prefix_sums();
        for (int trial = 0; trial < 50; ++trial) {
            const CMatrix a = j + 1e-3 * survey_perturbation(4, 5, trial, PerturbKind::StrictlyUpper);
            // powers of the perturbed chain scale like ε^k, so 1e-8 leaves some ranks undecided
            const auto sums = numeric_weyr(a, 0.0, 1e-12).prefix_sums();
            for (std::size_t k = 0; k < sums.size(); ++k)
                CHECK(sums[k] <= (k < base_sums.size() ? base_sums[k] : base_sums.back()));
        }
    }
}

TEST_CASE("arrow witnesses")
{
    const auto w = arrow_realization_search(J("(0)^2 (0)^2"), J("(0)^3 (0)"));
    CHECK(w.found);
    CHECK(w.entries.size() == 1);
    const std::pair<int, int> expected{1, 3};
    CHECK(std::find(w.single_entry_witnesses.begin(), w.single_entry_witnesses.end(), expected) !=
          w.single_entry_witnesses.end());
    CHECK(std::abs(w.e.norm() - 1e-3) < 1e-15);

    const auto w4 = arrow_realization_search(J("(0)^2 (0)^2"), J("(0)^4"));
    CHECK(w4.found);
    const std::pair<int, int> expected4{1, 2};
    CHECK(std::find(w4.single_entry_witnesses.begin(), w4.single_entry_witnesses.end(), expected4) !=
          w4.single_entry_witnesses.end());

    CHECK_THROWS_AS(arrow_realization_search(J("(0)^4"), J("(0)^2 (0)^2")), InvalidArgument);
    CHECK_THROWS_AS(arrow_realization_search(J("(1)^2"), J("(1)^2")), InvalidArgument);
}

TEST_CASE("every covering edge of the 4x4 nilpotent chain has a single-entry witness")
{
    const ClosureGraph g = nilpotent_class_graph(4);
    for (const auto& [a, b] : g.edges()) {
        const auto w = arrow_realization_search(g.vertices()[a].type, g.vertices()[b].type);
        CHECK(w.found);
        CHECK(w.entries.size() == 1);
        CHECK(w.candidates_tried == 6);
        const JordanType seen = jordan_type_numeric(jordan_matrix(g.vertices()[a].type) + w.e);
        REQUIRE(seen.label_count() == 1);
        CHECK(seen.entries().begin()->second == g.vertices()[b].type.entries().begin()->second);
    }
}
