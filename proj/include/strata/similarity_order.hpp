#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "strata/structure.hpp"

namespace strata {

inline constexpr int kMaxGraphOrder = 8;

/// True iff the class of `j` lies in the closure of the class of `j2`: same labels
/// with the same multiplicities and, per label, every Weyr prefix sum of `j` is at
/// least the corresponding prefix sum of `j2`. Throws InvalidArgument on order mismatch.
bool closure_leq(const JordanType& j, const JordanType& j2);

/// Same test on a single eigenvalue's Segre partitions (equal totals required).
bool partition_closure_leq(const Partition& p, const Partition& q);

enum class GraphKind { Classes, Bundles };

struct GraphVertex {
    JordanType type;
    int dimension;
    std::string notation; // ASCII compact notation
    std::string display;  // Greek/superscript notation
};

/// Hasse diagram of a closure order. Edge (a, b) means stratum a lies in the closure of b.
/// Vertices are sorted by (dimension, notation).
class ClosureGraph {
public:
    ClosureGraph(GraphKind kind, std::vector<GraphVertex> vertices,
                 const std::vector<std::vector<bool>>& reach);

    GraphKind kind() const noexcept { return kind_; }
    const std::vector<GraphVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

    std::optional<int> find(const std::string& notation) const;
    bool has_edge(int from, int to) const;
    /// Directed path (length 0 allowed).
    bool reachable(int from, int to) const;

private:
    GraphKind kind_;
    std::vector<GraphVertex> vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<bool>> reach_;
};

bool reachable(const ClosureGraph& g, int from, int to);

/// Transitive reduction of a reflexive-transitive relation given as a matrix.
std::vector<std::pair<int, int>> hasse_edges(const std::vector<std::vector<bool>>& reach);

/// Class graph over the JordanTypes of order n whose label multiplicities are `pattern`
/// (e.g. {4} or {2,1,1}); an empty pattern takes every pattern. Vertices are shown modulo
/// canonical relabeling.
ClosureGraph build_class_graph(int n, const std::vector<int>& pattern = {});

/// Single-eigenvalue graph with the eigenvalue written as 0.
ClosureGraph nilpotent_class_graph(int n);

/// Bundles reachable in one step downward: one label degenerates to a covered partition,
/// or two labels merge with their Segre partitions added part-wise.
std::vector<BundleType> bundle_down_moves(const BundleType& b);

ClosureGraph build_bundle_graph(int n);

std::string to_dot(const ClosureGraph& g);
nlohmann::json to_json(const ClosureGraph& g);

} // namespace strata
