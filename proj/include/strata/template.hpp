#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "strata/structure.hpp"

namespace strata {

enum class EntryKind { Fixed, Star, Zero, EpsReal, EpsImag, DeltaComplex };

std::string to_string(EntryKind k);

struct TemplateEntry {
    EntryKind kind = EntryKind::Zero;
    // Fixed: the constant; other kinds: the canonical value the free parameter is added to
    cplx value{0.0, 0.0};
    // display name for symbolic constants ("λ") and named parameters ("ε1", "δ21")
    std::string symbol;
};

class DeformationTemplate {
public:
    DeformationTemplate(int n, std::string source);

    int size() const noexcept { return n_; }
    const std::string& source() const noexcept { return source_; }

    TemplateEntry& at(int i, int j);
    const TemplateEntry& at(int i, int j) const;

    /// True when some Fixed entry carries a symbolic eigenvalue.
    bool symbolic() const;

    /// The canonical matrix the template is centered at (parameters set to zero).
    CMatrix base_matrix() const;

private:
    int n_;
    std::string source_;
    std::vector<TemplateEntry> grid_;
};

/// Stars along the bottom row of every within-eigenvalue sub-block on or above the
/// block diagonal and along the first column strictly below it.
DeformationTemplate arnold_template(const JordanType& t);

int star_count(const DeformationTemplate& t);

/// Real dimension of the parameter space: Star and DeltaComplex count 2, EpsReal/EpsImag 1.
int real_parameter_count(const DeformationTemplate& t);

struct PatternCheck {
    bool ok;
    double residual;
};

/// Fixed(c) entries must equal c and Zero entries vanish, within `tol`; others are free.
PatternCheck pattern_check(const CMatrix& m, const DeformationTemplate& t, double tol);

nlohmann::json to_json(const DeformationTemplate& t);
std::string to_ascii(const DeformationTemplate& t);

} // namespace strata
