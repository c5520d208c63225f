#include "strata/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {

namespace {

double finite_number(const nlohmann::json& v, const std::string& where)
{
    if (!v.is_number())
        throw InvalidArgument("matrix file: " + where + " is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw InvalidArgument("matrix file: " + where + " is not finite");
    return x;
}

} // namespace

CMatrix matrix_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
        throw InvalidArgument("matrix file: expected an object with a \"rows\" array");
    const auto& rows = doc["rows"];
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n == 0)
        throw InvalidArgument("matrix file: no rows");
    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer() || doc["n"].get<long long>() != n)
            throw InvalidArgument("matrix file: \"n\" does not match the row count");
    }
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw InvalidArgument("matrix file: row " + std::to_string(i) + " does not have " + std::to_string(n) + " entries");
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& v = row[static_cast<std::size_t>(j)];
            const std::string where = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (v.is_array()) {
                if (v.size() != 2)
                    throw InvalidArgument("matrix file: " + where + " must be [re, im]");
                m(i, j) = cplx(finite_number(v[0], where), finite_number(v[1], where));
            } else {
                m(i, j) = finite_number(v, where);
            }
        }
    }
    return m;
}

nlohmann::json matrix_to_json(const CMatrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return {{"n", m.rows()}, {"rows", std::move(rows)}};
}

CMatrix read_matrix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open matrix file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("matrix file: malformed JSON: ") + e.what(), e.byte);
    }
    return matrix_from_json(doc);
}

void write_matrix_file(const std::string& path, const CMatrix& m)
{
    std::ofstream out(path);
    if (!out)
        throw InvalidArgument("cannot write " + path);
    out << matrix_to_json(m).dump() << "\n";
}

nlohmann::json rounded(const nlohmann::json& doc)
{
    if (doc.is_number_float()) {
        const double x = doc.get<double>();
        if (!std::isfinite(x))
            return doc;
        double y = std::stod(format_double(x));
        if (y == 0.0)
            y = 0.0; // drop negative zero
        return y;
    }
    if (doc.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& v : doc)
            out.push_back(rounded(v));
        return out;
    }
    if (doc.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto it = doc.begin(); it != doc.end(); ++it)
            out[it.key()] = rounded(it.value());
        return out;
    }
    return doc;
}

} // namespace strata
