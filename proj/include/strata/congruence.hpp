#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "strata/tangent.hpp"
#include "strata/template.hpp"

namespace strata {

// H: [[0, I_m], [J_m(λ), 0]] (size 2m), Gamma: the ±1 anti-triangular block, N: J_k(0),
// U: μ·(anti-diagonal ones with i just below). HStar is H for *congruence.
enum class BlockKind { H, Gamma, N, U };

struct CanonicalBlock {
    BlockKind kind;
    int m;          // H: half size; others: size
    cplx param{};   // λ for H, μ for U

    int size() const { return kind == BlockKind::H ? 2 * m : m; }
    bool operator==(const CanonicalBlock&) const = default;
};

/// Direct sum of canonical blocks under congruence (`star` false: H, Gamma, N)
/// or *congruence (`star` true: H, U, N).
struct CanonicalForm {
    bool star = false;
    std::vector<CanonicalBlock> blocks;

    int order() const;
    bool operator==(const CanonicalForm&) const = default;
};

CMatrix gamma_block(int n);
CMatrix u_block(int n, cplx mu);
CMatrix h_block(int m, cplx lambda);
CMatrix canonical_matrix(const CanonicalForm& f);

/// λ ↦ representative of {λ, 1/λ} (congruence) or {λ, 1/λ̄} (*congruence) with |λ| ≥ 1,
/// Im λ ≥ 0 on the unit circle; excluded parameters and |μ| ≠ 1 throw InvalidArgument.
/// Blocks are sorted: H, then N of size ≥ 2 (descending), Gamma or U (descending), N1.
CanonicalForm normalize(const CanonicalForm& f);

/// Tokens `H<m>(z)`, `G<n>`, `N<k>`, `U<n>(z)` separated by spaces or `+`.
CanonicalForm parse_canonical(std::string_view text, bool star);
std::string format_canonical(const CanonicalForm& f);

/// Same block structure with parameters within `tol` (numeric classifications carry roundoff).
bool approx_equal(const CanonicalForm& a, const CanonicalForm& b, double tol = 1e-8);

nlohmann::json to_json(const CanonicalForm& f);
CanonicalForm canonical_from_json(const nlohmann::json& j, bool star);

/// Miniversal template of a congruence canonical form of order 2 or 3.
DeformationTemplate congruence_template(const CanonicalForm& f);
/// Same for *congruence; ε and δ kinds resolved from the form's μ values.
DeformationTemplate star_template(const CanonicalForm& f);

/// Canonical form of a 1×1, 2×2 or 3×3 matrix under congruence.
/// Throws NumericalAmbiguity when a rank decision falls in the tolerance band.
CanonicalForm classify_congruence_small(const CMatrix& a, double tol = kDefaultRankTol);

/// Every catalog form of order n (2 or 3), with the given sample parameter values.
std::vector<CanonicalForm> congruence_catalog(int n, cplx lambda = {2.0, 0.0});
std::vector<CanonicalForm> star_catalog(int n, const std::vector<cplx>& mus, cplx lambda);

// ---------------------------------------------------------------------------
// parametric closure graphs

using Params = std::vector<cplx>;

struct Family {
    std::string id;      // ASCII key, e.g. "diag(l,0)"
    std::string label;   // display form
    int dimension;       // complex, or real for *congruence graphs
    int param_count;     // parameters an instance carries
    int moduli;          // parameters absorbed into the family (bundles)
    Params sample_params;
    std::function<bool(const Params&)> in_domain;
    std::function<bool(const Params&, const Params&)> same;
    std::function<CMatrix(const Params&)> matrix;
};

struct FamilyEdge {
    int from;
    int to;
    std::string condition; // empty when unconditional
    std::function<bool(const Params&, const Params&)> pred;
};

struct Instance {
    int family;
    Params params;
};

class ParametricGraph {
public:
    ParametricGraph(std::string name, Action action, std::vector<Family> families, std::vector<FamilyEdge> edges);

    const std::string& name() const noexcept { return name_; }
    Action action() const noexcept { return action_; }
    const std::vector<Family>& families() const noexcept { return families_; }
    const std::vector<FamilyEdge>& edges() const noexcept { return edges_; }

    std::optional<int> find(const std::string& id) const;
    /// `id` or `id@p1,p2`, parameters as complex literals.
    Instance parse_instance(std::string_view text) const;

    /// Drawn arrow whose condition holds for these parameters.
    bool has_arrow(const Instance& from, const Instance& to) const;
    /// Directed path through concrete instances (length 0 allowed).
    bool path_exists(const Instance& from, const Instance& to) const;

private:
    void check(const Instance& x) const;
    bool same_instance(const Instance& a, const Instance& b) const;

    std::string name_;
    Action action_;
    std::vector<Family> families_;
    std::vector<FamilyEdge> edges_;
};

enum class CongruenceGraphKind { Classes, Bundles };

ParametricGraph congruence_graph(int n, CongruenceGraphKind kind);
ParametricGraph star_graph_2x2();

std::string to_dot(const ParametricGraph& g);
nlohmann::json to_json(const ParametricGraph& g);

} // namespace strata
