#include "strata/template.hpp"

#include <algorithm>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {

std::string to_string(EntryKind k)
{
    switch (k) {
    case EntryKind::Fixed: return "fixed";
    case EntryKind::Star: return "star";
    case EntryKind::Zero: return "zero";
    case EntryKind::EpsReal: return "eps_real";
    case EntryKind::EpsImag: return "eps_imag";
    case EntryKind::DeltaComplex: return "delta";
    }
    return "?";
}

DeformationTemplate::DeformationTemplate(int n, std::string source)
    : n_(n), source_(std::move(source)), grid_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
{
    if (n < 1)
        throw InvalidArgument("template size must be positive");
}

TemplateEntry& DeformationTemplate::at(int i, int j)
{
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw InvalidArgument("template index out of range");
    return grid_[static_cast<std::size_t>(i * n_ + j)];
}

const TemplateEntry& DeformationTemplate::at(int i, int j) const
{
    return const_cast<DeformationTemplate*>(this)->at(i, j);
}

bool DeformationTemplate::symbolic() const
{
    return std::any_of(grid_.begin(), grid_.end(), [](const TemplateEntry& e) {
        return e.kind == EntryKind::Fixed && !e.symbol.empty();
    });
}

CMatrix DeformationTemplate::base_matrix() const
{
    if (symbolic())
        throw InvalidArgument("template has symbolic entries");
    CMatrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            m(i, j) = at(i, j).value;
    return m;
}

DeformationTemplate arnold_template(const JordanType& t)
{
    const int n = t.order();
    DeformationTemplate out(n, format_compact(t));
    const std::vector<JordanBlock> blocks = t.blocks();

    for (const JordanBlock& b : blocks) {
        TemplateEntry diag{EntryKind::Fixed, {0.0, 0.0}, {}};
        if (b.label.is_symbolic())
            diag.symbol = greek_name(b.label.id());
        else
            diag.value = b.label.value();
        for (int k = 0; k < b.size; ++k) {
            out.at(b.offset + k, b.offset + k) = diag;
            if (k + 1 < b.size)
                out.at(b.offset + k, b.offset + k + 1) = {EntryKind::Fixed, {1.0, 0.0}, {}};
        }
    }
    auto star = [&](int i, int j) {
        TemplateEntry& e = out.at(i, j);
        // stars on the diagonal keep the eigenvalue as their base value
        e.kind = EntryKind::Star;
    };
    for (std::size_t p = 0; p < blocks.size(); ++p) {
        for (std::size_t q = 0; q < blocks.size(); ++q) {
            const JordanBlock& bk = blocks[p];
            const JordanBlock& bl = blocks[q];
            if (bk.label != bl.label)
                continue;
            if (p <= q) {
                const int row = bk.offset + bk.size - 1;
                for (int c = 0; c < bl.size; ++c)
                    star(row, bl.offset + c);
            } else {
                for (int r = 0; r < bk.size; ++r)
                    star(bk.offset + r, bl.offset);
            }
        }
    }
    return out;
}

int star_count(const DeformationTemplate& t)
{
    int count = 0;
    for (int i = 0; i < t.size(); ++i)
        for (int j = 0; j < t.size(); ++j)
            count += t.at(i, j).kind == EntryKind::Star;
    return count;
}

int real_parameter_count(const DeformationTemplate& t)
{
    int count = 0;
    for (int i = 0; i < t.size(); ++i) {
        for (int j = 0; j < t.size(); ++j) {
            switch (t.at(i, j).kind) {
            case EntryKind::Star:
            case EntryKind::DeltaComplex: count += 2; break;
            case EntryKind::EpsReal:
            case EntryKind::EpsImag: count += 1; break;
            default: break;
            }
        }
    }
    return count;
}

PatternCheck pattern_check(const CMatrix& m, const DeformationTemplate& t, double tol)
{
    if (m.rows() != t.size() || m.cols() != t.size())
        throw InvalidArgument("matrix and template sizes differ");
    if (t.symbolic())
        throw InvalidArgument("pattern_check needs concrete eigenvalues");
    double residual = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        for (int j = 0; j < t.size(); ++j) {
            const TemplateEntry& e = t.at(i, j);
            if (e.kind == EntryKind::Fixed)
                residual = std::max(residual, std::abs(m(i, j) - e.value));
            else if (e.kind == EntryKind::Zero)
                residual = std::max(residual, std::abs(m(i, j)));
        }
    }
    return {residual <= tol, residual};
}

nlohmann::json to_json(const DeformationTemplate& t)
{
    nlohmann::json doc;
    doc["n"] = t.size();
    doc["source"] = t.source();
    doc["stars"] = star_count(t);
    doc["real_parameters"] = real_parameter_count(t);
    doc["entries"] = nlohmann::json::array();
    for (int i = 0; i < t.size(); ++i) {
        for (int j = 0; j < t.size(); ++j) {
            const TemplateEntry& e = t.at(i, j);
            nlohmann::json item{{"i", i}, {"j", j}, {"kind", to_string(e.kind)}};
            if (e.kind != EntryKind::Zero && e.symbol.empty())
                item["value"] = {e.value.real(), e.value.imag()};
            if (!e.symbol.empty())
                item["symbol"] = e.symbol;
            doc["entries"].push_back(std::move(item));
        }
    }
    return doc;
}

namespace {

std::string cell_text(const TemplateEntry& e)
{
    switch (e.kind) {
    case EntryKind::Zero: return "0";
    case EntryKind::Star: return "*";
    case EntryKind::Fixed: return e.symbol.empty() ? format_complex_exact(e.value) : e.symbol;
    default: return e.symbol.empty() ? to_string(e.kind) : e.symbol;
    }
}

std::size_t display_width(const std::string& s)
{
    // count code points, not bytes, so Greek letters line up
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

} // namespace

std::string to_ascii(const DeformationTemplate& t)
{
    const int n = t.size();
    std::vector<std::size_t> width(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            width[static_cast<std::size_t>(j)] =
                std::max(width[static_cast<std::size_t>(j)], display_width(cell_text(t.at(i, j))));
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
        os << "[";
        for (int j = 0; j < n; ++j) {
            const std::string s = cell_text(t.at(i, j));
            os << (j ? " " : "") << std::string(width[static_cast<std::size_t>(j)] - display_width(s), ' ') << s;
        }
        os << "]\n";
    }
    return os.str();
}

} // namespace strata
