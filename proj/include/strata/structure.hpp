#pragma once

// Exact combinatorics of Jordan structures: partitions, Weyr characteristics,
// eigenvalue labels, Jordan types and bundle types.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strata/numeric.hpp"

namespace strata {

/// Weakly decreasing sequence of positive integers (a Segre characteristic).
class Partition {
public:
    /// Throws InvalidArgument unless `parts` is nonempty, positive and weakly decreasing.
    explicit Partition(std::vector<int> parts);

    /// Sorts first; still rejects nonpositive parts.
    static Partition from_unsorted(std::vector<int> parts);

    const std::vector<int>& parts() const noexcept { return parts_; }
    int total() const noexcept { return total_; }
    std::size_t size() const noexcept { return parts_.size(); }
    int operator[](std::size_t i) const { return parts_[i]; }

    bool operator==(const Partition&) const = default;
    auto operator<=>(const Partition& o) const { return parts_ <=> o.parts_; }

private:
    std::vector<int> parts_;
    int total_ = 0;
};

Partition conjugate_partition(const Partition& p);

/// All partitions of `n`, in lexicographically decreasing order.
std::vector<Partition> partitions_of(int n);

/// Weyr characteristic: w[j] counts blocks of size > j. Empty when the eigenvalue is absent.
struct WeyrChar {
    std::vector<int> w;

    bool empty() const noexcept { return w.empty(); }
    int total() const;
    std::vector<int> prefix_sums() const;
    /// The Segre characteristic it is conjugate to; requires a nonempty sequence.
    Partition segre() const;

    bool operator==(const WeyrChar&) const = default;
};

WeyrChar weyr_of_partition(const Partition& p);

/// Eigenvalue label: a symbol standing for "some eigenvalue", or a concrete complex number.
class EigLabel {
public:
    static EigLabel symbolic(int id);
    static EigLabel concrete(cplx value);

    bool is_symbolic() const noexcept { return symbolic_; }
    int id() const;
    cplx value() const;

    bool operator==(const EigLabel& o) const;
    std::strong_ordering operator<=>(const EigLabel& o) const;

private:
    EigLabel() = default;
    bool symbolic_ = true;
    int id_ = 0;
    double re_ = 0.0;
    double im_ = 0.0;
};

/// Greek display name for a symbolic id: 0 -> λ, 1 -> μ, 2 -> ν, 3 -> ξ, ...
std::string greek_name(int id);

struct JordanBlock {
    EigLabel label;
    int size;
    int offset; // first row/column of the block in the assembled matrix
};

/// Eigenvalue-labeled multiset of partitions.
class JordanType {
public:
    using Entries = std::map<EigLabel, Partition>;

    explicit JordanType(Entries entries);

    const Entries& entries() const noexcept { return entries_; }
    int order() const noexcept { return order_; }
    std::size_t label_count() const noexcept { return entries_.size(); }
    bool has_symbolic_labels() const;
    const Partition* partition_of(const EigLabel& label) const;

    /// Blocks label by label (map order), size-descending within a label.
    std::vector<JordanBlock> blocks() const;

    bool operator==(const JordanType&) const = default;

private:
    Entries entries_;
    int order_ = 0;
};

/// A JordanType with symbolic labels renumbered canonically.
class BundleType {
public:
    const JordanType& type() const noexcept { return type_; }
    bool operator==(const BundleType&) const = default;

private:
    explicit BundleType(JordanType t) : type_(std::move(t)) {}
    friend BundleType canonical_bundle_labeling(const JordanType& t);

    JordanType type_;
};

WeyrChar weyr_of(const JordanType& t, const EigLabel& label);

/// Grammar: whitespace-separated `<label>` or `<label>^<k>`; labels are one ASCII
/// letter (symbolic, a = 0) or a parenthesized complex literal.
JordanType parse_compact(std::string_view text);
std::string format_compact(const JordanType& t);

/// Arnold's notation with Greek letters and superscripts, e.g. "λ²λμ" or "0³0".
std::string format_display(const JordanType& t);

/// Sum over eigenvalues of the squared Weyr characteristic entries.
int orbit_codim(const JordanType& t);
int orbit_dim(const JordanType& t);
int bundle_dim(const BundleType& b);

/// Labels sorted by partition (lexicographically descending), then renumbered a, b, c, ...
BundleType canonical_bundle_labeling(const JordanType& t);

/// Assembles the Jordan matrix; requires concrete labels.
CMatrix jordan_matrix(const JordanType& t);

/// Replaces symbolic label k by the concrete value `values[k]`.
JordanType concretize(const JordanType& t, const std::vector<cplx>& values);

/// Every JordanType of order n whose labels are drawn from `labels`.
std::vector<JordanType> enumerate_jordan_types(int n, const std::vector<EigLabel>& labels);

/// Every canonically labeled bundle type of order n.
std::vector<BundleType> enumerate_bundle_types(int n);

} // namespace strata
