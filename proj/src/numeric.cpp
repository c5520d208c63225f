#include "strata/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "strata/errors.hpp"

namespace strata {

Eigen::VectorXd singular_values(const CMatrix& a)
{
    if (a.size() == 0)
        return {};
    Eigen::BDCSVD<CMatrix> svd(a);
    return svd.singularValues();
}

Eigen::VectorXd singular_values(const RMatrix& a)
{
    if (a.size() == 0)
        return {};
    Eigen::BDCSVD<RMatrix> svd(a);
    return svd.singularValues();
}

RankInfo rank_from_singular_values(const Eigen::VectorXd& sv, double threshold, double band)
{
    RankInfo info;
    info.sigma_max = sv.size() ? sv.maxCoeff() : 0.0;
    if (info.sigma_max == 0.0)
        return info;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double s = sv[k];
        if (s > threshold)
            ++info.rank;
        if (s > threshold / band && s < threshold * band)
            info.ambiguous = true;
    }
    return info;
}

RankInfo relative_rank(const CMatrix& a, double rel_tol)
{
    const Eigen::VectorXd sv = singular_values(a);
    const double smax = sv.size() ? sv.maxCoeff() : 0.0;
    return rank_from_singular_values(sv, rel_tol * smax);
}

RankInfo relative_rank(const RMatrix& a, double rel_tol)
{
    const Eigen::VectorXd sv = singular_values(a);
    const double smax = sv.size() ? sv.maxCoeff() : 0.0;
    return rank_from_singular_values(sv, rel_tol * smax);
}

double spectral_norm(const CMatrix& a)
{
    const Eigen::VectorXd sv = singular_values(a);
    return sv.size() ? sv.maxCoeff() : 0.0;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

} // namespace

cplx parse_complex(std::string_view text)
{
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin]))
        ++begin;
    while (end > begin && is_space(text[end - 1]))
        --end;
    if (begin < end && text[begin] == '(') {
        if (text[end - 1] != ')')
            throw ParseError("unbalanced parenthesis in complex literal", end);
        ++begin;
        --end;
    }
    if (begin >= end)
        throw ParseError("empty complex literal", begin);

    double re = 0.0;
    double im = 0.0;
    bool have_re = false;
    bool have_im = false;
    std::size_t pos = begin;
    int terms = 0;
    while (pos < end) {
        double sign = 1.0;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1.0 : 1.0;
            ++pos;
        } else if (terms > 0) {
            throw ParseError("expected '+' or '-' between terms", pos);
        }
        double value = 1.0;
        bool have_number = false;
        if (pos < end && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
            auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
            if (ec != std::errc())
                throw ParseError("bad number in complex literal", pos);
            pos = static_cast<std::size_t>(ptr - text.data());
            have_number = true;
        }
        bool imaginary = false;
        if (pos < end && text[pos] == 'i') {
            imaginary = true;
            ++pos;
        }
        if (!have_number && !imaginary)
            throw ParseError("expected number or 'i'", pos);
        if (imaginary) {
            if (have_im)
                throw ParseError("two imaginary terms", pos);
            im = sign * value;
            have_im = true;
        } else {
            if (have_re)
                throw ParseError("two real terms", pos);
            re = sign * value;
            have_re = true;
        }
        ++terms;
    }
    if (!std::isfinite(re) || !std::isfinite(im))
        throw ParseError("non-finite complex literal", begin);
    return {re, im};
}

namespace {

std::string shortest(double x)
{
    if (x == 0.0)
        x = 0.0; // drop the sign of -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

} // namespace

std::string format_complex_exact(cplx z)
{
    const double re = z.real();
    const double im = z.imag();
    if (im == 0.0)
        return shortest(re);
    std::string imag = shortest(std::abs(im)) + "i";
    if (re == 0.0)
        return (im < 0 ? "-" : "") + imag;
    return shortest(re) + (im < 0 ? "-" : "+") + imag;
}

std::string format_double(double x)
{
    if (x == 0.0)
        x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b)
{
    CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

} // namespace strata
