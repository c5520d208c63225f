#include "strata/similarity_order.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {

namespace {

// Small dynamic bitset; vector<bool> is too slow for the Hasse pass at n = 8.
class Bits {
public:
    explicit Bits(std::size_t n = 0) : n_(n), words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    Bits& operator|=(const Bits& o)
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            words_[k] |= o.words_[k];
        return *this;
    }
    void subtract(const Bits& o)
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            words_[k] &= ~o.words_[k];
    }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<std::uint64_t> words_;
};

void check_order(int n)
{
    if (n < 1 || n > kMaxGraphOrder)
        throw InvalidArgument("graph order must be between 1 and " + std::to_string(kMaxGraphOrder));
}

bool prefix_dominates(const Partition& p, const Partition& q)
{
    // Weyr prefix sums of p must be >= those of q
    const auto wp = weyr_of_partition(p).prefix_sums();
    const auto wq = weyr_of_partition(q).prefix_sums();
    for (std::size_t k = 0; k < std::max(wp.size(), wq.size()); ++k) {
        const int a = k < wp.size() ? wp[k] : wp.back();
        const int b = k < wq.size() ? wq[k] : wq.back();
        if (a < b)
            return false;
    }
    return true;
}

std::vector<int> multiplicity_pattern(const JordanType& t)
{
    std::vector<int> out;
    for (const auto& [label, part] : t.entries())
        out.push_back(part.total());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

// class(a) lies in the closure of class(b) for some multiplicity-preserving
// bijection between the (symbolic) labels of a and b
bool closure_leq_up_to_relabeling(const JordanType& a, const JordanType& b)
{
    if (a.order() != b.order() || a.label_count() != b.label_count())
        return false;
    std::vector<Partition> pa;
    std::vector<Partition> pb;
    for (const auto& [l, p] : a.entries())
        pa.push_back(p);
    for (const auto& [l, p] : b.entries())
        pb.push_back(p);
    std::vector<int> perm(pb.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t k = 0; k < pa.size() && ok; ++k) {
            const Partition& q = pb[static_cast<std::size_t>(perm[k])];
            ok = pa[k].total() == q.total() && prefix_dominates(pa[k], q);
        }
        if (ok)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::vector<std::vector<bool>> relation_matrix(std::size_t n,
                                               const std::function<bool(std::size_t, std::size_t)>& rel)
{
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            r[a][b] = a == b || rel(a, b);
    return r;
}

} // namespace

bool partition_closure_leq(const Partition& p, const Partition& q)
{
    if (p.total() != q.total())
        throw InvalidArgument("partitions must have equal totals");
    return prefix_dominates(p, q);
}

bool closure_leq(const JordanType& j, const JordanType& j2)
{
    if (j.order() != j2.order())
        throw InvalidArgument("closure_leq requires types of the same order");
    if (j.label_count() != j2.label_count())
        return false;
    for (const auto& [label, part] : j.entries()) {
        const Partition* other = j2.partition_of(label);
        if (!other || other->total() != part.total())
            return false;
        if (!prefix_dominates(part, *other))
            return false;
    }
    return true;
}

std::vector<std::pair<int, int>> hasse_edges(const std::vector<std::vector<bool>>& reach)
{
    const std::size_t n = reach.size();
    std::vector<Bits> up(n, Bits(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && reach[a][b])
                up[a].set(b);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < n; ++a) {
        Bits covered(n);
        for (std::size_t c = 0; c < n; ++c)
            if (up[a].test(c))
                covered |= up[c];
        Bits cover = up[a];
        cover.subtract(covered);
        for (std::size_t b = 0; b < n; ++b)
            if (cover.test(b))
                edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    return edges;
}

ClosureGraph::ClosureGraph(GraphKind kind, std::vector<GraphVertex> vertices,
                           const std::vector<std::vector<bool>>& reach)
    : kind_(kind)
{
    const std::size_t n = vertices.size();
    if (reach.size() != n)
        throw InvalidArgument("reachability matrix does not match vertex count");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (vertices[a].dimension != vertices[b].dimension)
            return vertices[a].dimension < vertices[b].dimension;
        return vertices[a].notation < vertices[b].notation;
    });
    reach_.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        vertices_.push_back(vertices[order[a]]);
        for (std::size_t b = 0; b < n; ++b)
            reach_[a][b] = reach[order[a]][order[b]];
    }
    edges_ = hasse_edges(reach_);
    std::sort(edges_.begin(), edges_.end());
}

std::optional<int> ClosureGraph::find(const std::string& notation) const
{
    for (std::size_t k = 0; k < vertices_.size(); ++k)
        if (vertices_[k].notation == notation || vertices_[k].display == notation)
            return static_cast<int>(k);
    return std::nullopt;
}

bool ClosureGraph::has_edge(int from, int to) const
{
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(from, to));
}

bool ClosureGraph::reachable(int from, int to) const
{
    const int n = static_cast<int>(vertices_.size());
    if (from < 0 || from >= n || to < 0 || to >= n)
        throw InvalidArgument("vertex index out of range");
    return reach_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
}

bool reachable(const ClosureGraph& g, int from, int to) { return g.reachable(from, to); }

ClosureGraph build_class_graph(int n, const std::vector<int>& pattern)
{
    check_order(n);
    std::vector<int> want = pattern;
    std::sort(want.begin(), want.end(), std::greater<>());
    if (!want.empty() && std::accumulate(want.begin(), want.end(), 0) != n)
        throw InvalidArgument("multiplicity pattern must sum to n");

    std::vector<JordanType> types;
    for (const BundleType& b : enumerate_bundle_types(n))
        if (want.empty() || multiplicity_pattern(b.type()) == want)
            types.push_back(b.type());
    if (types.empty())
        throw InvalidArgument("no Jordan types match the multiplicity pattern");

    std::vector<GraphVertex> vertices;
    for (const JordanType& t : types)
        vertices.push_back({t, orbit_dim(t), format_compact(t), format_display(t)});
    auto reach = relation_matrix(types.size(), [&](std::size_t a, std::size_t b) {
        return closure_leq_up_to_relabeling(types[a], types[b]);
    });
    return ClosureGraph(GraphKind::Classes, std::move(vertices), reach);
}

ClosureGraph nilpotent_class_graph(int n)
{
    check_order(n);
    const EigLabel zero = EigLabel::concrete(0.0);
    std::vector<JordanType> types;
    for (const Partition& p : partitions_of(n))
        types.emplace_back(JordanType::Entries{{zero, p}});
    std::vector<GraphVertex> vertices;
    for (const JordanType& t : types)
        vertices.push_back({t, orbit_dim(t), format_compact(t), format_display(t)});
    auto reach = relation_matrix(types.size(), [&](std::size_t a, std::size_t b) {
        return closure_leq(types[a], types[b]);
    });
    return ClosureGraph(GraphKind::Classes, std::move(vertices), reach);
}

std::vector<BundleType> bundle_down_moves(const BundleType& b)
{
    std::vector<Partition> parts;
    for (const auto& [label, part] : b.type().entries())
        parts.push_back(part);

    auto assemble = [](const std::vector<Partition>& ps) {
        JordanType::Entries entries;
        for (std::size_t k = 0; k < ps.size(); ++k)
            entries.emplace(EigLabel::symbolic(static_cast<int>(k)), ps[k]);
        return canonical_bundle_labeling(JordanType(std::move(entries)));
    };

    std::vector<BundleType> out;
    auto push = [&](BundleType t) {
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(std::move(t));
    };

    // degenerate one eigenvalue within its own dominance order
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (const Partition& q : partitions_of(parts[k].total())) {
            if (q == parts[k] || !prefix_dominates(q, parts[k]))
                continue;
            auto next = parts;
            next[k] = q;
            push(assemble(next));
        }
    }
    // two eigenvalues coalesce
    for (std::size_t a = 0; a < parts.size(); ++a) {
        for (std::size_t c = a + 1; c < parts.size(); ++c) {
            const auto& pa = parts[a].parts();
            const auto& pc = parts[c].parts();
            std::vector<int> sum(std::max(pa.size(), pc.size()), 0);
            for (std::size_t i = 0; i < pa.size(); ++i)
                sum[i] += pa[i];
            for (std::size_t i = 0; i < pc.size(); ++i)
                sum[i] += pc[i];
            std::vector<Partition> next;
            for (std::size_t k = 0; k < parts.size(); ++k)
                if (k != a && k != c)
                    next.push_back(parts[k]);
            next.emplace_back(std::move(sum));
            push(assemble(next));
        }
    }
    return out;
}

ClosureGraph build_bundle_graph(int n)
{
    check_order(n);
    const std::vector<BundleType> bundles = enumerate_bundle_types(n);
    const std::size_t v = bundles.size();
    auto index_of = [&](const BundleType& b) {
        auto it = std::find(bundles.begin(), bundles.end(), b);
        if (it == bundles.end())
            throw Error("down-move left the bundle enumeration");
        return static_cast<std::size_t>(it - bundles.begin());
    };
    std::vector<std::vector<std::size_t>> down(v);
    for (std::size_t k = 0; k < v; ++k)
        for (const BundleType& t : bundle_down_moves(bundles[k]))
            down[k].push_back(index_of(t));

    std::vector<std::vector<bool>> reach(v, std::vector<bool>(v, false));
    for (std::size_t top = 0; top < v; ++top) {
        std::vector<std::size_t> stack{top};
        reach[top][top] = true;
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            for (std::size_t nxt : down[cur]) {
                if (!reach[nxt][top]) {
                    reach[nxt][top] = true;
                    stack.push_back(nxt);
                }
            }
        }
    }
    std::vector<GraphVertex> vertices;
    for (const BundleType& b : bundles)
        vertices.push_back({b.type(), bundle_dim(b), format_compact(b.type()), format_display(b.type())});
    return ClosureGraph(GraphKind::Bundles, std::move(vertices), reach);
}

std::string to_dot(const ClosureGraph& g)
{
    std::ostringstream os;
    os << "digraph " << (g.kind() == GraphKind::Classes ? "classes" : "bundles") << " {\n";
    os << "  rankdir=BT;\n";
    const auto& vs = g.vertices();
    for (std::size_t k = 0; k < vs.size(); ++k)
        os << "  v" << k << " [label=\"" << vs[k].display << "\\n" << vs[k].dimension << "\"];\n";
    for (const auto& [a, b] : g.edges())
        os << "  v" << a << " -> v" << b << ";\n";
    os << "}\n";
    return os.str();
}

nlohmann::json to_json(const ClosureGraph& g)
{
    nlohmann::json doc;
    doc["kind"] = g.kind() == GraphKind::Classes ? "classes" : "bundles";
    doc["vertices"] = nlohmann::json::array();
    const auto& vs = g.vertices();
    for (std::size_t k = 0; k < vs.size(); ++k)
        doc["vertices"].push_back(
            {{"id", k}, {"notation", vs[k].notation}, {"display", vs[k].display}, {"dim", vs[k].dimension}});
    doc["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : g.edges())
        doc["edges"].push_back({a, b});
    return doc;
}

} // namespace strata
