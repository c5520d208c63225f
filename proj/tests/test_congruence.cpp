#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracle.hpp"
#include "strata/congruence.hpp"
#include "strata/errors.hpp"

using namespace strata;

namespace {

const cplx I{0, 1};

CanonicalForm C(const char* s) { return parse_canonical(s, false); }
CanonicalForm S(const char* s) { return parse_canonical(s, true); }

std::set<std::pair<int, int>> cells(const DeformationTemplate& t, EntryKind k)
{
    std::set<std::pair<int, int>> s;
    for (int i = 0; i < t.size(); ++i)
        for (int j = 0; j < t.size(); ++j)
            if (t.at(i, j).kind == k)
                s.emplace(i, j);
    return s;
}

CMatrix M2(cplx a, cplx b, cplx c, cplx d)
{
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CMatrix random_s(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CMatrix s = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s(i, j) += 0.25 * cplx(g(rng), g(rng)) / static_cast<double>(n);
    return s;
}

std::vector<oracle::RealDirection> real_directions(const DeformationTemplate& t)
{
    std::vector<oracle::RealDirection> d;
    for (int i = 0; i < t.size(); ++i)
        for (int j = 0; j < t.size(); ++j)
            switch (t.at(i, j).kind) {
            case EntryKind::Star:
            case EntryKind::DeltaComplex:
                d.push_back({i, j, 1.0});
                d.push_back({i, j, I});
                break;
            case EntryKind::EpsReal:
                d.push_back({i, j, 1.0});
                break;
            case EntryKind::EpsImag:
                d.push_back({i, j, I});
                break;
            default:
                break;
            }
    return d;
}

const std::vector<cplx> kMus{1.0, -1.0, I, std::polar(1.0, M_PI / 3)};

} // namespace

TEST_CASE("normalization of congruence forms")
{
    CHECK(normalize(C("H1(0.5)")) == C("H1(2)"));
    CHECK(normalize(C("H1(2)")) == C("H1(2)"));
    CHECK(format_canonical(C("H1(0.5)")) == "H1(2)");
    CHECK_THROWS_AS(C("H2(-1)"), InvalidArgument);
    CHECK_THROWS_AS(C("H1(0)"), InvalidArgument);
    CHECK_THROWS_AS(C("H1(1)"), InvalidArgument);
    CHECK_NOTHROW(C("H1(-1)"));
    // unit circle tie-break
    CHECK(normalize(C("H1(-1i)")) == C("H1(1i)"));
    // block order does not depend on input order
    CHECK(C("N1 G1 H1(3)") == C("H1(3) + G1 + N1"));
}

TEST_CASE("normalization of *congruence forms")
{
    CHECK(normalize(S("H1(0.5)")) == S("H1(2)"));
    CHECK(normalize(S("H1(0.5i)")) == S("H1(2i)"));
    CHECK_THROWS_AS(S("H1(1i)"), InvalidArgument);
    CHECK_THROWS_AS(S("U1(2)"), InvalidArgument);
    CHECK_THROWS_AS(parse_canonical("G1", true), Error);
    CHECK_THROWS_AS(parse_canonical("U1(1)", false), Error);
    CHECK_THROWS_AS(parse_canonical("H1(2", false), ParseError);
}

TEST_CASE("canonical matrices")
{
    CHECK((canonical_matrix(C("H1(2)")) - M2(0.0, 1.0, 2.0, 0.0)).norm() == 0.0);
    CHECK((canonical_matrix(S("U2(1)")) - M2(0.0, 1.0, 1.0, I)).norm() == 0.0);
    CHECK(canonical_matrix(C("G3 N1")).rows() == 4);
    const CMatrix g2 = gamma_block(2);
    CHECK((g2 - M2(0.0, -1.0, 1.0, 1.0)).norm() == 0.0);
}

TEST_CASE("JSON round trip")
{
    for (const char* s : {"H1(2)", "G1 G1 N1", "H1(3+1i) N1", "N2 N1"}) {
        const CanonicalForm f = C(s);
        CHECK(canonical_from_json(to_json(f), false) == f);
    }
    const CanonicalForm u = S("U2(1i) U1(-1)");
    CHECK(canonical_from_json(to_json(u), true) == u);
}

TEST_CASE("congruence templates")
{
    const auto h = congruence_template(C("H1(2)"));
    CHECK(cells(h, EntryKind::Star) == std::set<std::pair<int, int>>{{1, 0}});
    CHECK(star_count(congruence_template(C("N1 N1 N1"))) == 9);
    CHECK(star_count(congruence_template(C("N1 N1"))) == 4);
    CHECK(cells(congruence_template(C("N2 N1")), EntryKind::Star) ==
          std::set<std::pair<int, int>>{{1, 0}, {1, 2}, {2, 0}, {2, 2}});
    CHECK(cells(congruence_template(C("G1 G1 N1")), EntryKind::Star) ==
          std::set<std::pair<int, int>>{{1, 0}, {2, 0}, {2, 1}, {2, 2}});
    CHECK_THROWS_AS(congruence_template(C("N2 N2")), OutOfCatalog);
}

TEST_CASE("congruence templates match the numeric codimension and are transversal")
{
    for (cplx lambda : {cplx(2, 0), cplx(3, 1), cplx(0.5, 0)})
        for (int n : {2, 3})
            for (const CanonicalForm& f : congruence_catalog(n, lambda)) {
                CAPTURE(format_canonical(f));
                const DeformationTemplate t = congruence_template(f);
                const CMatrix a = canonical_matrix(f);
                CHECK(star_count(t) == congruence_codim_numeric(a));
                CHECK(star_count(t) == oracle::congruence_codim(a));
                const auto s = cells(t, EntryKind::Star);
                CHECK(oracle::complex_transversal(oracle::congruence_operator(a), {s.begin(), s.end()}, n));
            }
    CHECK(congruence_catalog(2).size() == 7);
    CHECK(congruence_catalog(3).size() == 14);
}

TEST_CASE("*congruence templates")
{
    // diag(i, 1) after ordering: ε real on the non-real μ, imaginary on the real one
    const auto d = star_template(S("U1(1) U1(i)"));
    const CMatrix a = canonical_matrix(S("U1(1) U1(i)"));
    for (int k = 0; k < 2; ++k) {
        const bool real_mu = std::abs(a(k, k).imag()) < 1e-12;
        CHECK(d.at(k, k).kind == (real_mu ? EntryKind::EpsImag : EntryKind::EpsReal));
    }
    CHECK(d.at(1, 0).kind == EntryKind::Zero);
    CHECK(real_parameter_count(d) == 2);

    const auto id = star_template(S("U1(1) U1(1)"));
    CHECK(id.at(0, 0).kind == EntryKind::EpsImag);
    CHECK(id.at(1, 1).kind == EntryKind::EpsImag);
    CHECK(id.at(1, 0).kind == EntryKind::DeltaComplex);
    CHECK(real_parameter_count(id) == 4);

    const auto u = star_template(S("U2(1)"));
    CHECK(cells(u, EntryKind::Star) == std::set<std::pair<int, int>>{{0, 0}});
    CHECK(real_parameter_count(u) == 2);
    CHECK(real_parameter_count(star_template(S("N1 N1"))) == 8);
}

TEST_CASE("*congruence templates match the numeric codimension and are transversal")
{
    for (cplx lambda : {cplx(0.3, 0), cplx(0, 0.5)})
        for (cplx m1 : kMus)
            for (cplx m2 : kMus)
                for (cplx m3 : kMus)
                    for (int n : {2, 3})
                        for (const CanonicalForm& f : star_catalog(n, {m1, m2, m3}, lambda)) {
                            CAPTURE(format_canonical(f));
                            const DeformationTemplate t = star_template(f);
                            const CMatrix a = canonical_matrix(f);
                            CHECK(real_parameter_count(t) == star_congruence_codim_numeric(a));
                            CHECK(real_parameter_count(t) == oracle::star_codim(a));
                            CHECK(oracle::real_transversal(oracle::star_operator(a), real_directions(t), n));
                        }
    CHECK(star_catalog(2, {1.0, 1.0, 1.0}, 0.3).size() == 6);
    CHECK(star_catalog(3, {1.0, 1.0, 1.0}, 0.3).size() == 12);
}

TEST_CASE("classification of small matrices")
{
    CHECK(approx_equal(C("H1(2)"), C("H1(2.0000000001)")));
    CHECK_FALSE(approx_equal(C("H1(2)"), C("H1(2.1)")));
    CHECK_FALSE(approx_equal(C("H1(2)"), C("H1(2) N1")));
    CHECK(classify_congruence_small(M2(0.0, 2.0, 1.0, 0.0)) == C("H1(2)"));
    CHECK(classify_congruence_small(CMatrix::Identity(2, 2)) == C("G1 G1"));
    CHECK(classify_congruence_small(M2(0.0, 1.0, -1.0, 0.0)) == C("H1(-1)"));
    CHECK_THROWS_AS(classify_congruence_small(CMatrix::Zero(4, 4)), OutOfCatalog);
}

TEST_CASE("classification is idempotent and congruence invariant")
{
    std::mt19937_64 rng(12);
    for (cplx lambda : {cplx(2, 0), cplx(3, 1)})
        for (int n : {2, 3})
            for (const CanonicalForm& f : congruence_catalog(n, lambda)) {
                CAPTURE(format_canonical(f));
                const CMatrix a = canonical_matrix(f);
                CHECK(classify_congruence_small(a) == f);
                for (int k = 0; k < 100; ++k) {
                    const CMatrix s = random_s(n, rng);
                    CHECK(approx_equal(classify_congruence_small(s.transpose() * a * s), f));
                }
            }
}

TEST_CASE("two by two congruence graphs")
{
    const ParametricGraph bundles = congruence_graph(2, CongruenceGraphKind::Bundles);
    CHECK(bundles.families().size() == 6);
    CHECK(bundles.edges().size() == 7);
    std::multiset<int> dims;
    for (const auto& f : bundles.families())
        dims.insert(f.dimension);
    CHECK(dims == std::multiset<int>{4, 3, 3, 2, 1, 0});

    const ParametricGraph classes = congruence_graph(2, CongruenceGraphKind::Classes);
    for (cplx l : {cplx(2, 0), cplx(-3, 1), cplx(0, 1)}) {
        Instance h{*classes.find("H(l)"), {l}};
        CHECK(classes.has_arrow(classes.parse_instance("diag(1,0)"), h));
    }
    CHECK(classes.path_exists(classes.parse_instance("0"), classes.parse_instance("H(l)@5")));
    CHECK(classes.path_exists(classes.parse_instance("G2"), classes.parse_instance("G2")));
    CHECK_FALSE(classes.path_exists(classes.parse_instance("H(l)@5"), classes.parse_instance("0")));
}

TEST_CASE("three by three congruence graphs")
{
    const ParametricGraph bundles = congruence_graph(3, CongruenceGraphKind::Bundles);
    std::multiset<int> dims;
    for (const auto& f : bundles.families())
        dims.insert(f.dimension);
    CHECK(dims.count(9) == 1);
    CHECK(dims.count(0) == 1);
    CHECK_THROWS_AS(congruence_graph(4, CongruenceGraphKind::Classes), OutOfCatalog);
}

TEST_CASE("family dimensions match the numeric codimension")
{
    for (int n : {2, 3})
        for (auto kind : {CongruenceGraphKind::Classes, CongruenceGraphKind::Bundles}) {
            const ParametricGraph g = congruence_graph(n, kind);
            for (const Family& f : g.families()) {
                CAPTURE(f.id);
                const int codim = congruence_codim_numeric(f.matrix(f.sample_params));
                CHECK(f.dimension == n * n - codim + f.moduli);
            }
            for (const FamilyEdge& e : g.edges())
                CHECK(g.families()[e.from].dimension < g.families()[e.to].dimension);
        }
    const ParametricGraph star = star_graph_2x2();
    for (const Family& f : star.families()) {
        CAPTURE(f.id);
        CHECK(f.dimension == 8 - star_congruence_codim_numeric(f.matrix(f.sample_params)) + f.moduli);
    }
    for (const FamilyEdge& e : star.edges())
        CHECK(star.families()[e.from].dimension < star.families()[e.to].dimension);
}

TEST_CASE("*congruence graph predicates")
{
    const ParametricGraph g = star_graph_2x2();
    auto at = [&](const char* s) { return g.parse_instance(s); };
    CHECK_FALSE(g.has_arrow(at("diag(l,0)@1"), at("U2(t)@i")));
    CHECK(g.has_arrow(at("diag(l,0)@1"), at("U2(t)@1")));
    CHECK(g.has_arrow(at("diag(l,-l)@i"), at("U2(t)@i")));
    CHECK(g.has_arrow(at("diag(l,-l)@i"), at("U2(t)@-i")));
    CHECK_FALSE(g.has_arrow(at("diag(l,-l)@1"), at("U2(t)@i")));
    CHECK(g.has_arrow(at("diag(l,0)@1"), at("diag(l,l)@1")));
    CHECK_FALSE(g.has_arrow(at("diag(l,0)@1"), at("diag(l,l)@i")));
    const cplx mu = std::polar(1.0, M_PI / 4), nu = std::polar(1.0, -M_PI / 4);
    Instance target{*g.find("diag(m,n)"), {mu, nu}};
    CHECK(g.has_arrow(at("diag(l,0)@1"), target));
    CHECK_FALSE(g.has_arrow(at("diag(l,0)@-1"), target));
    CHECK(g.path_exists(at("0"), target));
    CHECK(g.path_exists(at("U2(t)@i"), at("U2(t)@i")));
    CHECK_THROWS(at("U2(t)@2"));
}

TEST_CASE("graph serialization")
{
    const ParametricGraph g = star_graph_2x2();
    const auto doc = to_json(g);
    CHECK(doc["families"].size() == 7);
    const std::string dot = to_dot(g);
    CHECK(dot.find("digraph") == 0);
    CHECK(dot.find("label=") != std::string::npos);
}
