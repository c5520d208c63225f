#include "strata/structure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>

#include "strata/errors.hpp"

namespace strata {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts))
{
    if (parts_.empty())
        throw InvalidArgument("partition must have at least one part");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 1)
            throw InvalidArgument("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw InvalidArgument("partition parts must be weakly decreasing");
    }
    total_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::from_unsorted(std::vector<int> parts)
{
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
}

Partition conjugate_partition(const Partition& p)
{
    std::vector<int> out(static_cast<std::size_t>(p[0]), 0);
    for (int part : p.parts())
        for (int j = 0; j < part; ++j)
            ++out[static_cast<std::size_t>(j)];
    return Partition(std::move(out));
}

std::vector<Partition> partitions_of(int n)
{
    if (n < 1)
        throw InvalidArgument("partitions_of requires n >= 1");
    std::vector<Partition> out;
    std::vector<int> current;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            rec(remaining - part, part);
            current.pop_back();
        }
    };
    rec(n, n);
    return out;
}

int WeyrChar::total() const { return std::accumulate(w.begin(), w.end(), 0); }

std::vector<int> WeyrChar::prefix_sums() const
{
    std::vector<int> out(w.size());
    std::partial_sum(w.begin(), w.end(), out.begin());
    return out;
}

Partition WeyrChar::segre() const
{
    if (w.empty())
        throw InvalidArgument("empty Weyr characteristic has no Segre partition");
    return conjugate_partition(Partition(w));
}

WeyrChar weyr_of_partition(const Partition& p) { return {conjugate_partition(p).parts()}; }

EigLabel EigLabel::symbolic(int id)
{
    if (id < 0)
        throw InvalidArgument("symbolic label id must be nonnegative");
    EigLabel l;
    l.symbolic_ = true;
    l.id_ = id;
    return l;
}

EigLabel EigLabel::concrete(cplx value)
{
    EigLabel l;
    l.symbolic_ = false;
    // normalize signed zeros so that 0 and -0 are the same label
    l.re_ = value.real() == 0.0 ? 0.0 : value.real();
    l.im_ = value.imag() == 0.0 ? 0.0 : value.imag();
    return l;
}

int EigLabel::id() const
{
    if (!symbolic_)
        throw InvalidArgument("concrete label has no symbolic id");
    return id_;
}

cplx EigLabel::value() const
{
    if (symbolic_)
        throw InvalidArgument("symbolic label has no concrete value");
    return {re_, im_};
}

bool EigLabel::operator==(const EigLabel& o) const
{
    if (symbolic_ != o.symbolic_)
        return false;
    return symbolic_ ? id_ == o.id_ : (re_ == o.re_ && im_ == o.im_);
}

std::strong_ordering EigLabel::operator<=>(const EigLabel& o) const
{
    if (symbolic_ != o.symbolic_)
        return symbolic_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (symbolic_)
        return id_ <=> o.id_;
    if (re_ != o.re_)
        return re_ < o.re_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (im_ != o.im_)
        return im_ < o.im_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string greek_name(int id)
{
    static const char* const names[] = {"λ", "μ", "ν", "ξ", "ρ", "σ", "τ", "φ", "ψ", "ω"};
    if (id >= 0 && id < 10)
        return names[id];
    return "λ" + std::to_string(id);
}

JordanType::JordanType(Entries entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw InvalidArgument("Jordan type must contain at least one eigenvalue");
    for (const auto& [label, part] : entries_)
        order_ += part.total();
}

bool JordanType::has_symbolic_labels() const
{
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.first.is_symbolic(); });
}

const Partition* JordanType::partition_of(const EigLabel& label) const
{
    auto it = entries_.find(label);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<JordanBlock> JordanType::blocks() const
{
    std::vector<JordanBlock> out;
    int offset = 0;
    for (const auto& [label, part] : entries_) {
        for (int size : part.parts()) {
            out.push_back({label, size, offset});
            offset += size;
        }
    }
    return out;
}

WeyrChar weyr_of(const JordanType& t, const EigLabel& label)
{
    const Partition* p = t.partition_of(label);
    if (!p)
        return {};
    return weyr_of_partition(*p);
}

JordanType parse_compact(std::string_view text)
{
    std::map<EigLabel, std::vector<int>> blocks;
    std::size_t pos = 0;
    const std::size_t n = text.size();
    auto skip_space = [&] {
        while (pos < n && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    skip_space();
    if (pos == n)
        throw ParseError("empty Jordan type", pos);
    while (pos < n) {
        const std::size_t token_start = pos;
        std::optional<EigLabel> label;
        if (text[pos] == '(') {
            const std::size_t close = text.find(')', pos);
            if (close == std::string_view::npos)
                throw ParseError("unterminated '('", pos);
            try {
                label = EigLabel::concrete(parse_complex(text.substr(pos, close - pos + 1)));
            } catch (const ParseError& e) {
                throw ParseError("bad eigenvalue literal", pos + e.position());
            }
            pos = close + 1;
        } else if (std::islower(static_cast<unsigned char>(text[pos]))) {
            label = EigLabel::symbolic(text[pos] - 'a');
            ++pos;
        } else {
            throw ParseError(std::string("unexpected character '") + text[pos] + "'", pos);
        }
        int size = 1;
        if (pos < n && text[pos] == '^') {
            ++pos;
            const std::size_t digits = pos;
            while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (digits == pos)
                throw ParseError("expected block size after '^'", pos);
            size = std::stoi(std::string(text.substr(digits, pos - digits)));
            if (size < 1)
                throw ParseError("block size must be at least 1", digits);
        }
        if (pos < n && !std::isspace(static_cast<unsigned char>(text[pos])))
            throw ParseError("malformed token", token_start);
        blocks[*label].push_back(size);
        skip_space();
    }
    JordanType::Entries entries;
    for (auto& [label, sizes] : blocks)
        entries.emplace(label, Partition::from_unsorted(std::move(sizes)));
    return JordanType(std::move(entries));
}

namespace {

std::string ascii_label(const EigLabel& l)
{
    if (l.is_symbolic()) {
        if (l.id() >= 26)
            throw InvalidArgument("compact notation supports at most 26 symbolic labels");
        return std::string(1, static_cast<char>('a' + l.id()));
    }
    return "(" + format_complex_exact(l.value()) + ")";
}

std::string display_label(const EigLabel& l)
{
    if (l.is_symbolic())
        return greek_name(l.id());
    const cplx v = l.value();
    if (v.imag() == 0.0 && v.real() == std::floor(v.real()) && std::abs(v.real()) < 1e6)
        return format_complex_exact(v);
    return "(" + format_complex_exact(v) + ")";
}

std::string superscript(int k)
{
    static const char* const digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string out;
    for (char c : std::to_string(k))
        out += digits[c - '0'];
    return out;
}

} // namespace

std::string format_compact(const JordanType& t)
{
    std::string out;
    for (const auto& [label, part] : t.entries()) {
        const std::string name = ascii_label(label);
        for (int size : part.parts()) {
            if (!out.empty())
                out += ' ';
            out += name;
            if (size > 1)
                out += "^" + std::to_string(size);
        }
    }
    return out;
}

std::string format_display(const JordanType& t)
{
    std::string out;
    for (const auto& [label, part] : t.entries()) {
        const std::string name = display_label(label);
        for (int size : part.parts()) {
            out += name;
            if (size > 1)
                out += superscript(size);
        }
    }
    return out;
}

int orbit_codim(const JordanType& t)
{
    int codim = 0;
    for (const auto& [label, part] : t.entries()) {
        const Partition w = conjugate_partition(part);
        for (int x : w.parts())
            codim += x * x;
    }
    return codim;
}

int orbit_dim(const JordanType& t) { return t.order() * t.order() - orbit_codim(t); }

int bundle_dim(const BundleType& b)
{
    return orbit_dim(b.type()) + static_cast<int>(b.type().label_count());
}

BundleType canonical_bundle_labeling(const JordanType& t)
{
    std::vector<Partition> parts;
    for (const auto& [label, part] : t.entries())
        parts.push_back(part);
    std::sort(parts.begin(), parts.end(), [](const Partition& a, const Partition& b) {
        if (a != b)
            return a > b;
        return a.total() > b.total();
    });
    JordanType::Entries entries;
    for (std::size_t k = 0; k < parts.size(); ++k)
        entries.emplace(EigLabel::symbolic(static_cast<int>(k)), parts[k]);
    return BundleType(JordanType(std::move(entries)));
}

CMatrix jordan_matrix(const JordanType& t)
{
    if (t.has_symbolic_labels())
        throw InvalidArgument("jordan_matrix requires concrete eigenvalue labels");
    const int n = t.order();
    CMatrix j = CMatrix::Zero(n, n);
    for (const JordanBlock& b : t.blocks()) {
        for (int k = 0; k < b.size; ++k) {
            j(b.offset + k, b.offset + k) = b.label.value();
            if (k + 1 < b.size)
                j(b.offset + k, b.offset + k + 1) = 1.0;
        }
    }
    return j;
}

JordanType concretize(const JordanType& t, const std::vector<cplx>& values)
{
    JordanType::Entries entries;
    for (const auto& [label, part] : t.entries()) {
        EigLabel target = label;
        if (label.is_symbolic()) {
            if (label.id() >= static_cast<int>(values.size()))
                throw InvalidArgument("not enough values to concretize symbolic labels");
            target = EigLabel::concrete(values[static_cast<std::size_t>(label.id())]);
        }
        if (!entries.emplace(target, part).second)
            throw InvalidArgument("concretized labels must be pairwise distinct");
    }
    return JordanType(std::move(entries));
}

std::vector<JordanType> enumerate_jordan_types(int n, const std::vector<EigLabel>& labels)
{
    std::vector<JordanType> out;
    JordanType::Entries current;
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
        if (idx == labels.size()) {
            if (remaining == 0 && !current.empty())
                out.emplace_back(current);
            return;
        }
        rec(idx + 1, remaining);
        for (int m = 1; m <= remaining; ++m) {
            for (const Partition& p : partitions_of(m)) {
                current.emplace(labels[idx], p);
                rec(idx + 1, remaining - m);
                current.erase(labels[idx]);
            }
        }
    };
    rec(0, n);
    return out;
}

std::vector<BundleType> enumerate_bundle_types(int n)
{
    std::vector<Partition> pool;
    for (int m = n; m >= 1; --m)
        for (const Partition& p : partitions_of(m))
            pool.push_back(p);
    std::sort(pool.begin(), pool.end(), std::greater<>());

    std::vector<BundleType> out;
    std::vector<Partition> chosen;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
        if (remaining == 0) {
            JordanType::Entries entries;
            for (std::size_t k = 0; k < chosen.size(); ++k)
                entries.emplace(EigLabel::symbolic(static_cast<int>(k)), chosen[k]);
            out.push_back(canonical_bundle_labeling(JordanType(std::move(entries))));
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            if (pool[i].total() > remaining)
                continue;
            chosen.push_back(pool[i]);
            rec(i, remaining - pool[i].total());
            chosen.pop_back();
        }
    };
    rec(0, n);
    return out;
}

} // namespace strata
