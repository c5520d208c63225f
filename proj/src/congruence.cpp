#include "strata/congruence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "strata/errors.hpp"

namespace strata {

namespace {

constexpr double kParamTol = 1e-12;
constexpr double kPredTol = 1e-9;
const cplx kI{0.0, 1.0};

bool near(cplx a, cplx b, double tol = kParamTol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

std::string kind_letter(BlockKind k)
{
    switch (k) {
    case BlockKind::H: return "H";
    case BlockKind::Gamma: return "G";
    case BlockKind::N: return "N";
    case BlockKind::U: return "U";
    }
    return "?";
}

// sort key: H, N (size >= 2), Gamma/U, N1; larger blocks first inside each group
int group_of(const CanonicalBlock& b)
{
    switch (b.kind) {
    case BlockKind::H: return 0;
    case BlockKind::N: return b.m >= 2 ? 1 : 3;
    default: return 2;
    }
}

} // namespace

int CanonicalForm::order() const
{
    int n = 0;
    for (const auto& b : blocks)
        n += b.size();
    return n;
}

CMatrix gamma_block(int n)
{
    if (n < 1)
        throw InvalidArgument("Gamma block size must be positive");
    CMatrix g = CMatrix::Zero(n, n);
    for (int i = 1; i <= n; ++i) {
        const double sign = (n - i) % 2 == 0 ? 1.0 : -1.0;
        g(i - 1, n - i) = sign;
        if (i >= 2)
            g(i - 1, n + 1 - i) = sign;
    }
    return g;
}

CMatrix u_block(int n, cplx mu)
{
    if (n < 1)
        throw InvalidArgument("U block size must be positive");
    CMatrix u = CMatrix::Zero(n, n);
    for (int i = 1; i <= n; ++i) {
        u(i - 1, n - i) = 1.0;
        if (i >= 2)
            u(i - 1, n + 1 - i) = kI;
    }
    return mu * u;
}

CMatrix h_block(int m, cplx lambda)
{
    if (m < 1)
        throw InvalidArgument("H block needs m >= 1");
    CMatrix h = CMatrix::Zero(2 * m, 2 * m);
    h.topRightCorner(m, m) = CMatrix::Identity(m, m);
    for (int k = 0; k < m; ++k) {
        h(m + k, k) = lambda;
        if (k + 1 < m)
            h(m + k, k + 1) = 1.0;
    }
    return h;
}

CMatrix canonical_matrix(const CanonicalForm& f)
{
    CMatrix out(0, 0);
    for (const auto& b : f.blocks) {
        switch (b.kind) {
        case BlockKind::H: out = direct_sum(out, h_block(b.m, b.param)); break;
        case BlockKind::Gamma: out = direct_sum(out, gamma_block(b.m)); break;
        case BlockKind::U: out = direct_sum(out, u_block(b.m, b.param)); break;
        case BlockKind::N: {
            CMatrix nk = CMatrix::Zero(b.m, b.m);
            for (int k = 0; k + 1 < b.m; ++k)
                nk(k, k + 1) = 1.0;
            out = direct_sum(out, nk);
            break;
        }
        }
    }
    return out;
}

CanonicalForm normalize(const CanonicalForm& f)
{
    if (f.blocks.empty())
        throw InvalidArgument("canonical form has no blocks");
    CanonicalForm out = f;
    for (auto& b : out.blocks) {
        if (b.m < 1)
            throw InvalidArgument("block size must be positive");
        if (!std::isfinite(b.param.real()) || !std::isfinite(b.param.imag()))
            throw InvalidArgument("block parameter must be finite");
        switch (b.kind) {
        case BlockKind::Gamma:
            if (f.star)
                throw InvalidArgument("Gamma blocks belong to congruence forms");
            b.param = 0.0;
            break;
        case BlockKind::U:
            if (!f.star)
                throw InvalidArgument("U blocks belong to *congruence forms");
            if (std::abs(std::abs(b.param) - 1.0) > kParamTol)
                throw InvalidArgument("U block parameter must have modulus 1");
            b.param /= std::abs(b.param);
            break;
        case BlockKind::N: b.param = 0.0; break;
        case BlockKind::H: {
            cplx l = b.param;
            if (std::abs(l) <= kParamTol)
                throw InvalidArgument("H block parameter must be nonzero");
            if (!f.star) {
                const cplx excluded = b.m % 2 == 1 ? 1.0 : -1.0;
                if (near(l, excluded))
                    throw InvalidArgument("H" + std::to_string(b.m) + " excludes the parameter " +
                                          format_complex_exact(excluded));
                const double r = std::abs(l);
                if (r < 1.0 - kParamTol || (std::abs(r - 1.0) <= kParamTol && l.imag() < 0.0))
                    l = 1.0 / l;
            } else {
                if (std::abs(std::abs(l) - 1.0) <= kParamTol)
                    throw InvalidArgument("*congruence H block needs |λ| != 1");
                if (std::abs(l) < 1.0)
                    l = 1.0 / std::conj(l);
            }
            b.param = l;
            break;
        }
        }
    }
    std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const CanonicalBlock& a, const CanonicalBlock& b) {
        const int ga = group_of(a);
        const int gb = group_of(b);
        if (ga != gb)
            return ga < gb;
        if (a.m != b.m)
            return a.m > b.m;
        if (a.param.real() != b.param.real())
            return a.param.real() < b.param.real();
        return a.param.imag() < b.param.imag();
    });
    return out;
}

CanonicalForm parse_canonical(std::string_view text, bool star)
{
    CanonicalForm f;
    f.star = star;
    std::size_t pos = 0;
    const std::size_t n = text.size();
    while (pos < n) {
        if (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == '+') {
            ++pos;
            continue;
        }
        const std::size_t start = pos;
        const char c = text[pos++];
        BlockKind kind;
        switch (c) {
        case 'H': kind = BlockKind::H; break;
        case 'G': kind = BlockKind::Gamma; break;
        case 'N': kind = BlockKind::N; break;
        case 'U': kind = BlockKind::U; break;
        default: throw ParseError(std::string("unknown block kind '") + c + "'", start);
        }
        const std::size_t digits = pos;
        while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (digits == pos)
            throw ParseError("expected block size", pos);
        const int m = std::stoi(std::string(text.substr(digits, pos - digits)));
        if (m < 1)
            throw ParseError("block size must be positive", digits);
        cplx param = 0.0;
        if (kind == BlockKind::H || kind == BlockKind::U) {
            if (pos >= n || text[pos] != '(')
                throw ParseError("expected '(' with the block parameter", pos);
            const std::size_t close = text.find(')', pos);
            if (close == std::string_view::npos)
                throw ParseError("unterminated '('", pos);
            try {
                param = parse_complex(text.substr(pos, close - pos + 1));
            } catch (const ParseError& e) {
                throw ParseError("bad block parameter", pos + e.position());
            }
            pos = close + 1;
        }
        f.blocks.push_back({kind, m, param});
    }
    if (f.blocks.empty())
        throw ParseError("empty canonical form", 0);
    return normalize(f);
}

bool approx_equal(const CanonicalForm& a, const CanonicalForm& b, double tol)
{
    if (a.star != b.star || a.blocks.size() != b.blocks.size())
        return false;
    for (std::size_t k = 0; k < a.blocks.size(); ++k) {
        const CanonicalBlock& x = a.blocks[k];
        const CanonicalBlock& y = b.blocks[k];
        if (x.kind != y.kind || x.m != y.m || std::abs(x.param - y.param) > tol * (1.0 + std::abs(x.param)))
            return false;
    }
    return true;
}

std::string format_canonical(const CanonicalForm& f)
{
    std::string out;
    for (const auto& b : f.blocks) {
        if (!out.empty())
            out += " + ";
        out += kind_letter(b.kind) + std::to_string(b.m);
        if (b.kind == BlockKind::H || b.kind == BlockKind::U)
            out += "(" + format_complex_exact(b.param) + ")";
    }
    return out;
}

nlohmann::json to_json(const CanonicalForm& f)
{
    nlohmann::json doc;
    doc["action"] = f.star ? "star" : "congruence";
    doc["blocks"] = nlohmann::json::array();
    for (const auto& b : f.blocks) {
        nlohmann::json item{{"kind", kind_letter(b.kind)}, {"size", b.m}};
        if (b.kind == BlockKind::H || b.kind == BlockKind::U)
            item["param"] = {b.param.real(), b.param.imag()};
        doc["blocks"].push_back(std::move(item));
    }
    return doc;
}

CanonicalForm canonical_from_json(const nlohmann::json& j, bool star)
{
    const nlohmann::json& blocks = j.is_array() ? j : j.at("blocks");
    CanonicalForm f;
    f.star = star;
    for (const auto& item : blocks) {
        const std::string k = item.at("kind").get<std::string>();
        BlockKind kind;
        if (k == "H")
            kind = BlockKind::H;
        else if (k == "G")
            kind = BlockKind::Gamma;
        else if (k == "N")
            kind = BlockKind::N;
        else if (k == "U")
            kind = BlockKind::U;
        else
            throw InvalidArgument("unknown block kind " + k);
        cplx param = 0.0;
        if (item.contains("param")) {
            const auto& p = item.at("param");
            param = {p.at(0).get<double>(), p.at(1).get<double>()};
        }
        f.blocks.push_back({kind, item.at("size").get<int>(), param});
    }
    return normalize(f);
}

// ---------------------------------------------------------------------------
// templates

namespace {

// Shape key of a normalized form, e.g. "H-1 G1" or "U2 U1".
std::string shape_key(const CanonicalForm& f)
{
    std::string key;
    for (const auto& b : f.blocks) {
        if (!key.empty())
            key += ' ';
        if (b.kind == BlockKind::H) {
            if (b.m != 1)
                throw OutOfCatalog("H blocks larger than 2x2 are outside the tables");
            key += !f.star && near(b.param, -1.0) ? "H-1" : "H";
        } else {
            key += kind_letter(b.kind) + std::to_string(b.m);
        }
    }
    return key;
}

struct Cell {
    int r; // 1-based
    int c;
    char kind;  // 'S' star, 'E' epsilon, 'D' delta
    int l = 0;  // parameter indices for E/D
    int k = 0;
};

using Table = std::map<std::string, std::vector<Cell>>;

std::vector<Cell> stars(std::initializer_list<std::pair<int, int>> at)
{
    std::vector<Cell> out;
    for (auto [r, c] : at)
        out.push_back({r, c, 'S'});
    return out;
}

std::vector<Cell> rows(int n, std::initializer_list<int> which)
{
    std::vector<Cell> out;
    for (int r : which)
        for (int c = 1; c <= n; ++c)
            out.push_back({r, c, 'S'});
    return out;
}

std::vector<Cell> join(std::vector<Cell> a, const std::vector<Cell>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const Table& congruence_table()
{
    static const Table t = {
        {"N1 N1", rows(2, {1, 2})},
        {"G1 N1", rows(2, {2})},
        {"G1 G1", stars({{2, 1}})},
        {"H-1", stars({{1, 1}, {2, 1}, {2, 2}})},
        {"G2", stars({{1, 1}})},
        {"H", stars({{2, 1}})},
        {"N2", stars({{2, 1}})},

        {"N1 N1 N1", rows(3, {1, 2, 3})},
        {"G1 N1 N1", rows(3, {2, 3})},
        {"G1 G1 N1", join(stars({{2, 1}}), rows(3, {3}))},
        {"G1 G1 G1", stars({{2, 1}, {3, 1}, {3, 2}})},
        {"H-1 N1", join(stars({{1, 1}, {2, 1}, {2, 2}}), rows(3, {3}))},
        {"H N1", join(stars({{2, 1}}), rows(3, {3}))},
        {"N2 N1", stars({{2, 1}, {2, 3}, {3, 1}, {3, 3}})},
        {"G2 N1", join(stars({{1, 1}}), rows(3, {3}))},
        {"H-1 G1", stars({{1, 1}, {2, 1}, {2, 2}})},
        {"H G1", stars({{2, 1}})},
        {"N2 G1", stars({{2, 1}})},
        {"G2 G1", stars({{1, 1}})},
        {"N3", stars({{3, 1}, {3, 3}})},
        {"G3", stars({{2, 1}})},
    };
    return t;
}

Cell eps(int r, int c, int l) { return {r, c, 'E', l, 0}; }
Cell delta(int r, int c, int l, int k) { return {r, c, 'D', l, k}; }

const Table& star_table()
{
    static const Table t = {
        {"N1 N1", rows(2, {1, 2})},
        {"U1 N1", join({eps(1, 1, 1)}, rows(2, {2}))},
        {"U1 U1", {eps(1, 1, 1), delta(2, 1, 2, 1), eps(2, 2, 2)}},
        {"U2", stars({{1, 1}})},
        {"H", stars({{2, 1}})},
        {"N2", stars({{2, 1}})},

        {"N1 N1 N1", rows(3, {1, 2, 3})},
        {"U1 N1 N1", join({eps(1, 1, 1)}, rows(3, {2, 3}))},
        {"U1 U1 N1", join({eps(1, 1, 1), delta(2, 1, 2, 1), eps(2, 2, 2)}, rows(3, {3}))},
        {"U1 U1 U1",
         {eps(1, 1, 1), eps(2, 2, 2), eps(3, 3, 3), delta(2, 1, 2, 1), delta(3, 1, 3, 1), delta(3, 2, 3, 2)}},
        {"U2 U1", join(stars({{1, 1}}), {delta(3, 1, 2, 1), eps(3, 3, 2)})},
        {"U2 N1", join(stars({{1, 1}}), rows(3, {3}))},
        {"H U1", join(stars({{2, 1}}), {eps(3, 3, 1)})},
        {"N2 U1", join(stars({{2, 1}}), {eps(3, 3, 1)})},
        {"H N1", join(stars({{2, 1}}), rows(3, {3}))},
        {"N2 N1", stars({{2, 1}, {2, 3}, {3, 1}, {3, 3}})},
        {"N3", stars({{3, 1}, {3, 3}})},
        // the single ε of the printed table leaves two real directions uncovered
        {"U3", join(stars({{1, 1}}), {eps(2, 2, 1)})},
    };
    return t;
}

DeformationTemplate fill_template(const CanonicalForm& f, const Table& table)
{
    const int n = f.order();
    if (n < 2 || n > 3)
        throw OutOfCatalog("templates are tabulated for orders 2 and 3 only");
    const std::string key = shape_key(f);
    auto it = table.find(key);
    if (it == table.end())
        throw OutOfCatalog("no tabulated template for " + key);

    std::vector<cplx> mus;
    for (const auto& b : f.blocks)
        if (b.kind == BlockKind::U)
            mus.push_back(b.param);

    const CMatrix base = canonical_matrix(f);
    DeformationTemplate t(n, format_canonical(f));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t.at(i, j) = base(i, j) == cplx(0.0, 0.0) ? TemplateEntry{EntryKind::Zero, {}, {}}
                                                      : TemplateEntry{EntryKind::Fixed, base(i, j), {}};
    for (const Cell& cell : it->second) {
        TemplateEntry& e = t.at(cell.r - 1, cell.c - 1);
        e.value = base(cell.r - 1, cell.c - 1);
        e.symbol.clear();
        if (cell.kind == 'S') {
            e.kind = EntryKind::Star;
        } else if (cell.kind == 'E') {
            const cplx mu = mus.at(static_cast<std::size_t>(cell.l - 1));
            e.kind = std::abs(mu.imag()) <= kParamTol ? EntryKind::EpsImag : EntryKind::EpsReal;
            e.symbol = "ε" + std::to_string(cell.l);
        } else {
            const cplx ml = mus.at(static_cast<std::size_t>(cell.l - 1));
            const cplx mr = mus.at(static_cast<std::size_t>(cell.k - 1));
            const bool linked = near(ml, mr) || near(ml, -mr);
            e.kind = linked ? EntryKind::DeltaComplex : EntryKind::Zero;
            if (linked)
                e.symbol = "δ" + std::to_string(cell.l) + std::to_string(cell.k);
        }
    }
    return t;
}

} // namespace

DeformationTemplate congruence_template(const CanonicalForm& f)
{
    if (f.star)
        throw InvalidArgument("congruence_template needs a congruence form");
    return fill_template(normalize(f), congruence_table());
}

DeformationTemplate star_template(const CanonicalForm& f)
{
    if (!f.star)
        throw InvalidArgument("star_template needs a *congruence form");
    return fill_template(normalize(f), star_table());
}

std::vector<CanonicalForm> congruence_catalog(int n, cplx lambda)
{
    std::vector<std::string> shapes;
    if (n == 2)
        shapes = {"N1 N1", "G1 N1", "G1 G1", "H1(-1)", "G2", "H1(L)", "N2"};
    else if (n == 3)
        shapes = {"N1 N1 N1", "G1 N1 N1", "G1 G1 N1", "G1 G1 G1", "H1(-1) N1", "H1(L) N1", "N2 N1",
                  "G2 N1",    "H1(-1) G1", "H1(L) G1", "N2 G1",   "G2 G1",    "N3",      "G3"};
    else
        throw OutOfCatalog("congruence catalog covers orders 2 and 3");
    std::vector<CanonicalForm> out;
    for (std::string s : shapes) {
        const auto at = s.find('L');
        if (at != std::string::npos)
            s.replace(at, 1, format_complex_exact(lambda));
        out.push_back(parse_canonical(s, false));
    }
    return out;
}

std::vector<CanonicalForm> star_catalog(int n, const std::vector<cplx>& mus, cplx lambda)
{
    if (mus.size() < 3)
        throw InvalidArgument("star_catalog needs three μ values");
    const std::string m1 = "(" + format_complex_exact(mus[0]) + ")";
    const std::string m2 = "(" + format_complex_exact(mus[1]) + ")";
    const std::string m3 = "(" + format_complex_exact(mus[2]) + ")";
    const std::string l = "(" + format_complex_exact(lambda) + ")";
    std::vector<std::string> shapes;
    if (n == 2)
        shapes = {"N1 N1", "U1" + m1 + " N1", "U1" + m1 + " U1" + m2, "U2" + m1, "H1" + l, "N2"};
    else if (n == 3)
        shapes = {"N1 N1 N1",
                  "U1" + m1 + " N1 N1",
                  "U1" + m1 + " U1" + m2 + " N1",
                  "U1" + m1 + " U1" + m2 + " U1" + m3,
                  "U2" + m1 + " U1" + m2,
                  "U2" + m1 + " N1",
                  "H1" + l + " U1" + m1,
                  "N2 U1" + m1,
                  "H1" + l + " N1",
                  "N2 N1",
                  "N3",
                  "U3" + m1};
    else
        throw OutOfCatalog("*congruence catalog covers orders 2 and 3");
    std::vector<CanonicalForm> out;
    for (const auto& s : shapes)
        out.push_back(parse_canonical(s, true));
    return out;
}

// ---------------------------------------------------------------------------
// classification

namespace {

int decided_rank(const CMatrix& m, double threshold)
{
    const RankInfo info = rank_from_singular_values(singular_values(m), threshold);
    if (info.ambiguous)
        throw NumericalAmbiguity("rank decision falls inside the tolerance band");
    return info.rank;
}

cplx h_parameter_2x2(const CMatrix& a)
{
    // the cosquare A^{-T}A has spectrum {λ, 1/λ}
    const CMatrix c = a.transpose().partialPivLu().solve(a);
    Eigen::ComplexEigenSolver<CMatrix> es(c, false);
    cplx l = es.eigenvalues()[0];
    return std::abs(l) >= std::abs(es.eigenvalues()[1]) ? l : es.eigenvalues()[1];
}

CanonicalForm classify_regular(const CMatrix& a, double threshold)
{
    const int n = static_cast<int>(a.rows());
    CanonicalForm f;
    if (n == 0)
        return f;
    if (n == 1) {
        f.blocks.push_back({BlockKind::Gamma, 1, 0.0});
        return f;
    }
    const int r = decided_rank(a, threshold);
    const int rs = decided_rank(a + a.transpose(), threshold);
    const int rk = decided_rank(a - a.transpose(), threshold);
    auto blocks = [&](std::initializer_list<CanonicalBlock> bs) {
        f.blocks.assign(bs);
        return f;
    };
    if (n == 2) {
        if (r == 2 && rs == 2 && rk == 0)
            return blocks({{BlockKind::Gamma, 1}, {BlockKind::Gamma, 1}});
        if (r == 2 && rs == 0 && rk == 2)
            return blocks({{BlockKind::H, 1, -1.0}});
        if (r == 2 && rs == 1 && rk == 2)
            return blocks({{BlockKind::Gamma, 2}});
        if (r == 2 && rs == 2 && rk == 2)
            return blocks({{BlockKind::H, 1, h_parameter_2x2(a)}});
        if (r == 1 && rs == 2 && rk == 2)
            return blocks({{BlockKind::N, 2}});
    } else if (n == 3) {
        if (r == 3 && rs == 3 && rk == 0)
            return blocks({{BlockKind::Gamma, 1}, {BlockKind::Gamma, 1}, {BlockKind::Gamma, 1}});
        if (r == 3 && rs == 1 && rk == 2)
            return blocks({{BlockKind::H, 1, -1.0}, {BlockKind::Gamma, 1}});
        if (r == 3 && rs == 2 && rk == 2)
            return blocks({{BlockKind::Gamma, 2}, {BlockKind::Gamma, 1}});
        if (r == 2 && rs == 3 && rk == 2)
            return blocks({{BlockKind::N, 2}, {BlockKind::Gamma, 1}});
        if (r == 2 && rs == 2 && rk == 2)
            return blocks({{BlockKind::N, 3}});
        if (r == 3 && rs == 3 && rk == 2) {
            const CMatrix c = a.transpose().partialPivLu().solve(a);
            const CMatrix d = c - CMatrix::Identity(3, 3);
            const double scale = threshold / std::max(a.norm(), 1e-300);
            const int r2 = decided_rank(d * d, scale * std::max(1.0, (d * d).norm()));
            if (r2 == 1)
                return blocks({{BlockKind::Gamma, 3}});
            if (r2 == 2) {
                Eigen::ComplexEigenSolver<CMatrix> es(c, false);
                const Eigen::VectorXcd e = es.eigenvalues();
                // pair the two eigenvalues whose product is 1; the third belongs to Gamma1
                int best_p = 0;
                int best_q = 1;
                double best = std::numeric_limits<double>::infinity();
                for (int p = 0; p < 3; ++p)
                    for (int q = p + 1; q < 3; ++q)
                        if (std::abs(e[p] * e[q] - 1.0) < best) {
                            best = std::abs(e[p] * e[q] - 1.0);
                            best_p = p;
                            best_q = q;
                        }
                const cplx l = std::abs(e[best_p]) >= std::abs(e[best_q]) ? e[best_p] : e[best_q];
                return blocks({{BlockKind::H, 1, l}, {BlockKind::Gamma, 1}});
            }
        }
    }
    throw NumericalAmbiguity("rank profile matches no canonical form; try another tolerance");
}

} // namespace

CanonicalForm classify_congruence_small(const CMatrix& a, double tol)
{
    const Eigen::Index n = a.rows();
    if (a.cols() != n || n < 1 || n > 3)
        throw OutOfCatalog("congruence classification covers 1x1, 2x2 and 3x3 matrices");
    if (!a.allFinite())
        throw InvalidArgument("matrix entries must be finite");
    const double norm = spectral_norm(a);
    CanonicalForm f;
    if (norm == 0.0) {
        for (Eigen::Index k = 0; k < n; ++k)
            f.blocks.push_back({BlockKind::N, 1, 0.0});
        return normalize(f);
    }
    const double threshold = tol * norm;

    // common kernel of A and Aᵀ carries the N1 summands
    CMatrix stacked(2 * n, n);
    stacked << a, a.transpose();
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    const RankInfo info = rank_from_singular_values(svd.singularValues(), threshold);
    if (info.ambiguous)
        throw NumericalAmbiguity("common-kernel dimension falls inside the tolerance band");
    const CMatrix s1 = svd.matrixV().leftCols(info.rank);
    const CMatrix reduced = s1.transpose() * a * s1;

    f = classify_regular(reduced, threshold);
    for (Eigen::Index k = info.rank; k < n; ++k)
        f.blocks.push_back({BlockKind::N, 1, 0.0});
    return normalize(f);
}

// ---------------------------------------------------------------------------
// parametric graphs

ParametricGraph::ParametricGraph(std::string name, Action action, std::vector<Family> families,
                                 std::vector<FamilyEdge> edges)
    : name_(std::move(name)), action_(action), families_(std::move(families)), edges_(std::move(edges))
{
}

std::optional<int> ParametricGraph::find(const std::string& id) const
{
    for (std::size_t k = 0; k < families_.size(); ++k)
        if (families_[k].id == id || families_[k].label == id)
            return static_cast<int>(k);
    return std::nullopt;
}

Instance ParametricGraph::parse_instance(std::string_view text) const
{
    const auto at = text.find('@');
    const std::string id(text.substr(0, at));
    const auto fam = find(id);
    if (!fam)
        throw InvalidArgument("unknown family '" + id + "' in graph " + name_);
    Instance x{*fam, {}};
    if (at != std::string_view::npos) {
        std::string_view rest = text.substr(at + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            x.params.push_back(parse_complex(rest.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            rest = rest.substr(comma + 1);
        }
    }
    check(x);
    return x;
}

void ParametricGraph::check(const Instance& x) const
{
    if (x.family < 0 || x.family >= static_cast<int>(families_.size()))
        throw InvalidArgument("family index out of range");
    const Family& f = families_[static_cast<std::size_t>(x.family)];
    if (static_cast<int>(x.params.size()) != f.param_count)
        throw InvalidArgument("family " + f.id + " takes " + std::to_string(f.param_count) + " parameter(s)");
    if (f.in_domain && !f.in_domain(x.params))
        throw InvalidArgument("parameters outside the domain of " + f.id);
}

bool ParametricGraph::same_instance(const Instance& a, const Instance& b) const
{
    if (a.family != b.family)
        return false;
    const Family& f = families_[static_cast<std::size_t>(a.family)];
    if (f.same)
        return f.same(a.params, b.params);
    for (std::size_t k = 0; k < a.params.size(); ++k)
        if (!near(a.params[k], b.params[k], kPredTol))
            return false;
    return true;
}

bool ParametricGraph::has_arrow(const Instance& from, const Instance& to) const
{
    check(from);
    check(to);
    for (const FamilyEdge& e : edges_)
        if (e.from == from.family && e.to == to.family && (!e.pred || e.pred(from.params, to.params)))
            return true;
    return false;
}

bool ParametricGraph::path_exists(const Instance& from, const Instance& to) const
{
    check(from);
    check(to);
    // intermediate instances are drawn from values built out of the endpoint parameters
    std::vector<cplx> hints{1.0, -1.0, kI, -kI, 0.0};
    for (const Params* p : {&from.params, &to.params})
        for (cplx z : *p)
            for (cplx w : {z, -z, std::conj(z), -std::conj(z)})
                hints.push_back(w);

    std::vector<Instance> seen{from};
    std::vector<Instance> queue{from};
    while (!queue.empty()) {
        const Instance cur = queue.back();
        queue.pop_back();
        if (same_instance(cur, to))
            return true;
        for (const FamilyEdge& e : edges_) {
            if (e.from != cur.family)
                continue;
            const Family& g = families_[static_cast<std::size_t>(e.to)];
            std::vector<Params> candidates;
            if (e.to == to.family)
                candidates.push_back(to.params);
            if (g.param_count == 0) {
                candidates.push_back({});
            } else if (g.param_count == 1) {
                for (cplx z : hints)
                    candidates.push_back({z});
            } else {
                for (cplx z : hints)
                    for (cplx w : hints)
                        candidates.push_back({z, w});
            }
            for (Params& p : candidates) {
                if (g.in_domain && !g.in_domain(p))
                    continue;
                if (e.pred && !e.pred(cur.params, p))
                    continue;
                Instance next{e.to, std::move(p)};
                const bool known = std::any_of(seen.begin(), seen.end(),
                                               [&](const Instance& s) { return same_instance(s, next); });
                if (!known) {
                    seen.push_back(next);
                    queue.push_back(next);
                }
            }
        }
    }
    return false;
}

namespace {

CMatrix diag(std::initializer_list<cplx> d)
{
    const Eigen::Index n = static_cast<Eigen::Index>(d.size());
    CMatrix m = CMatrix::Zero(n, n);
    Eigen::Index k = 0;
    for (cplx z : d)
        m(k, k) = z, ++k;
    return m;
}

CMatrix hmat(cplx l)
{
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = l;
    return m;
}

Family fixed(std::string id, std::string label, int dim, CMatrix m, int moduli = 0)
{
    return {std::move(id), std::move(label), dim, 0, moduli, {}, {}, {}, [m](const Params&) { return m; }};
}

// [[0,1],[λ,0]] up to λ ↔ 1/λ; λ = 0 (the nilpotent J2) included
bool h_domain(const Params& p) { return !near(p[0], 1.0, kPredTol) && !near(p[0], -1.0, kPredTol); }

bool h_same(const Params& a, const Params& b)
{
    if (near(a[0], b[0], kPredTol))
        return true;
    return std::abs(a[0]) > kPredTol && std::abs(b[0]) > kPredTol && near(1.0 / a[0], b[0], kPredTol);
}

Family h_family(std::string id, std::string label, int dim, std::function<CMatrix(const Params&)> m)
{
    return {std::move(id), std::move(label), dim, 1, 0, {cplx(2.0, 0.0)}, h_domain, h_same, std::move(m)};
}

struct EdgeList {
    const std::vector<Family>& fams;
    std::vector<FamilyEdge> edges;

    int index(const std::string& id) const
    {
        for (std::size_t k = 0; k < fams.size(); ++k)
            if (fams[k].id == id)
                return static_cast<int>(k);
        throw Error("internal: unknown family " + id);
    }
    void add(const std::string& a, const std::string& b, std::string cond = {},
             std::function<bool(const Params&, const Params&)> pred = {})
    {
        edges.push_back({index(a), index(b), std::move(cond), std::move(pred)});
    }
};

ParametricGraph congruence_2x2(CongruenceGraphKind kind)
{
    std::vector<Family> f;
    f.push_back(fixed("0", "0", 0, CMatrix::Zero(2, 2)));
    f.push_back(fixed("H(-1)", "H(-1)", 1, hmat(-1.0)));
    f.push_back(fixed("diag(1,0)", "diag(1,0)", 2, diag({1.0, 0.0})));
    f.push_back(fixed("G2", "Γ2", 3, gamma_block(2)));
    f.push_back(fixed("I2", "I2", 3, diag({1.0, 1.0})));
    if (kind == CongruenceGraphKind::Classes)
        f.push_back(h_family("H(l)", "H(λ)", 3, [](const Params& p) { return hmat(p[0]); }));
    else
        f.push_back(fixed("{H}", "{H(λ)}", 4, hmat(2.0), 1));

    EdgeList el{f, {}};
    const std::string top = kind == CongruenceGraphKind::Classes ? "H(l)" : "{H}";
    el.add("0", "H(-1)");
    el.add("0", "diag(1,0)");
    el.add("H(-1)", "G2");
    el.add("diag(1,0)", "G2");
    el.add("diag(1,0)", "I2");
    if (kind == CongruenceGraphKind::Classes) {
        el.add("diag(1,0)", top);
    } else {
        el.add("G2", top);
        el.add("I2", top);
    }
    return ParametricGraph(kind == CongruenceGraphKind::Classes ? "congruence classes 2x2" : "congruence bundles 2x2",
                           Action::Congruence, std::move(f), std::move(el.edges));
}

ParametricGraph congruence_3x3(CongruenceGraphKind kind)
{
    const bool classes = kind == CongruenceGraphKind::Classes;
    const CMatrix z1 = CMatrix::Zero(1, 1);
    const CMatrix one = CMatrix::Identity(1, 1);
    CMatrix j3 = CMatrix::Zero(3, 3);
    j3(0, 1) = j3(1, 2) = 1.0;

    std::vector<Family> f;
    f.push_back(fixed("0", "0", 0, CMatrix::Zero(3, 3)));
    f.push_back(fixed("diag(1,0,0)", "diag(1,0,0)", 3, diag({1.0, 0.0, 0.0})));
    f.push_back(fixed("H(-1)+0", "H(-1)⊕0", 3, direct_sum(hmat(-1.0), z1)));
    f.push_back(fixed("I2+0", "I2⊕0", 5, diag({1.0, 1.0, 0.0})));
    f.push_back(fixed("G2+0", "Γ2⊕0", 5, direct_sum(gamma_block(2), z1)));
    f.push_back(fixed("I3", "I3", 6, diag({1.0, 1.0, 1.0})));
    f.push_back(fixed("H(-1)+1", "H(-1)⊕1", 6, direct_sum(hmat(-1.0), one)));
    f.push_back(fixed("J3(0)", "J3(0)", 7, j3));
    f.push_back(fixed("G2+1", "Γ2⊕1", 8, direct_sum(gamma_block(2), one)));
    f.push_back(fixed("G3", "Γ3", 8, gamma_block(3)));
    if (classes) {
        f.push_back(h_family("H(l)+0", "H(λ)⊕0", 5, [z1](const Params& p) { return direct_sum(hmat(p[0]), z1); }));
        f.push_back(h_family("H(m)+1", "H(μ)⊕1", 8, [one](const Params& p) { return direct_sum(hmat(p[0]), one); }));
    } else {
        f.push_back(fixed("{H(l)+0}", "{H(λ)⊕0}", 6, direct_sum(hmat(2.0), z1), 1));
        f.push_back(fixed("{H(m)+1}", "{H(μ)⊕1}", 9, direct_sum(hmat(2.0), one), 1));
    }
    const std::string hl = classes ? "H(l)+0" : "{H(l)+0}";
    const std::string hm = classes ? "H(m)+1" : "{H(m)+1}";

    EdgeList el{f, {}};
    el.add("0", "H(-1)+0");
    el.add("0", "diag(1,0,0)");
    el.add("diag(1,0,0)", "G2+0");
    el.add("diag(1,0,0)", "I2+0");
    el.add("H(-1)+0", "G2+0");
    el.add("G2+0", "H(-1)+1");
    el.add("I2+0", "I3");
    el.add(hl, "J3(0)");
    el.add("H(-1)+1", "G2+1");
    el.add("I3", "G3");
    el.add("J3(0)", "G3");
    el.add("J3(0)", "G2+1");
    if (classes) {
        el.add("diag(1,0,0)", hl);
        el.add("G2+0", "J3(0)");
        el.add("I2+0", "J3(0)");
        el.add("J3(0)", hm);
    } else {
        el.add("G2+0", hl);
        el.add("I2+0", hl);
        el.add("G2+1", hm);
        el.add("G3", hm);
    }
    return ParametricGraph(classes ? "congruence classes 3x3" : "congruence bundles 3x3", Action::Congruence,
                           std::move(f), std::move(el.edges));
}

bool unit(cplx z) { return std::abs(std::abs(z) - 1.0) <= kPredTol; }

} // namespace

ParametricGraph congruence_graph(int n, CongruenceGraphKind kind)
{
    if (n == 2)
        return congruence_2x2(kind);
    if (n == 3)
        return congruence_3x3(kind);
    throw OutOfCatalog("congruence closure graphs exist for n = 2 and n = 3 only");
}

ParametricGraph star_graph_2x2()
{
    std::vector<Family> f;
    f.push_back(fixed("0", "0", 0, CMatrix::Zero(2, 2)));
    f.push_back({"diag(l,0)", "diag(λ,0)", 3, 1, 0, {cplx(1.0, 0.0)},
                 [](const Params& p) { return unit(p[0]); }, {},
                 [](const Params& p) { return diag({p[0], 0.0}); }});
    f.push_back({"diag(l,l)", "diag(λ,λ)", 4, 1, 0, {cplx(1.0, 0.0)},
                 [](const Params& p) { return unit(p[0]); }, {},
                 [](const Params& p) { return diag({p[0], p[0]}); }});
    f.push_back({"diag(l,-l)", "diag(λ,-λ)", 4, 1, 0, {cplx(1.0, 0.0)},
                 [](const Params& p) { return unit(p[0]); },
                 [](const Params& a, const Params& b) { return near(a[0], b[0], kPredTol) || near(a[0], -b[0], kPredTol); },
                 [](const Params& p) { return diag({p[0], -p[0]}); }});
    f.push_back({"diag(m,n)", "diag(μ,ν)", 6, 2, 0, {cplx(1.0, 0.0), kI},
                 [](const Params& p) {
                     return unit(p[0]) && unit(p[1]) && !near(p[0], p[1], kPredTol) && !near(p[0], -p[1], kPredTol);
                 },
                 [](const Params& a, const Params& b) {
                     return (near(a[0], b[0], kPredTol) && near(a[1], b[1], kPredTol)) ||
                            (near(a[0], b[1], kPredTol) && near(a[1], b[0], kPredTol));
                 },
                 [](const Params& p) { return diag({p[0], p[1]}); }});
    f.push_back({"H*(s)", "H*(σ)", 6, 1, 0, {cplx(0.5, 0.0)},
                 [](const Params& p) { return std::abs(p[0]) < 1.0; }, {},
                 [](const Params& p) { return hmat(p[0]); }});
    f.push_back({"U2(t)", "U2(τ)", 6, 1, 0, {cplx(1.0, 0.0)},
                 [](const Params& p) { return unit(p[0]); }, {},
                 [](const Params& p) { return u_block(2, p[0]); }});

    EdgeList el{f, {}};
    el.add("0", "diag(l,0)");
    el.add("0", "diag(m,n)");
    el.add("0", "U2(t)");
    el.add("diag(l,0)", "H*(s)");
    el.add("diag(l,0)", "diag(l,l)", "λ the same in both", [](const Params& a, const Params& b) {
        return near(a[0], b[0], kPredTol);
    });
    el.add("diag(l,0)", "diag(l,-l)", "λ the same up to sign", [](const Params& a, const Params& b) {
        return near(a[0], b[0], kPredTol) || near(a[0], -b[0], kPredTol);
    });
    el.add("diag(l,0)", "diag(m,n)", "λ = aμ + bν with a, b ≥ 0", [](const Params& a, const Params& b) {
        const cplx l = a[0];
        const cplx mu = b[0];
        const cplx nu = b[1];
        Eigen::Matrix2d m;
        m << mu.real(), nu.real(), mu.imag(), nu.imag();
        const Eigen::Vector2d coef = m.fullPivLu().solve(Eigen::Vector2d(l.real(), l.imag()));
        return coef[0] >= -kPredTol && coef[1] >= -kPredTol;
    });
    el.add("diag(l,0)", "U2(t)", "Im(λ·conj(τ)) ≥ 0", [](const Params& a, const Params& b) {
        return (a[0] * std::conj(b[0])).imag() >= -kPredTol;
    });
    el.add("diag(l,-l)", "U2(t)", "τ = ±λ", [](const Params& a, const Params& b) {
        return near(b[0], a[0], kPredTol) || near(b[0], -a[0], kPredTol);
    });
    return ParametricGraph("*congruence classes 2x2", Action::StarCongruence, std::move(f), std::move(el.edges));
}

std::string to_dot(const ParametricGraph& g)
{
    std::ostringstream os;
    os << "digraph \"" << g.name() << "\" {\n  rankdir=BT;\n";
    for (std::size_t k = 0; k < g.families().size(); ++k) {
        const Family& f = g.families()[k];
        os << "  f" << k << " [label=\"" << f.label << "\\n" << f.dimension << "\"];\n";
    }
    for (const FamilyEdge& e : g.edges()) {
        os << "  f" << e.from << " -> f" << e.to;
        if (!e.condition.empty())
            os << " [label=\"" << e.condition << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json to_json(const ParametricGraph& g)
{
    nlohmann::json doc;
    doc["name"] = g.name();
    doc["families"] = nlohmann::json::array();
    for (std::size_t k = 0; k < g.families().size(); ++k) {
        const Family& f = g.families()[k];
        doc["families"].push_back({{"id", k},
                                   {"key", f.id},
                                   {"label", f.label},
                                   {"dim", f.dimension},
                                   {"params", f.param_count}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const FamilyEdge& e : g.edges()) {
        nlohmann::json item{{"from", e.from}, {"to", e.to}};
        if (!e.condition.empty())
            item["condition"] = e.condition;
        doc["edges"].push_back(std::move(item));
    }
    return doc;
}

} // namespace strata
