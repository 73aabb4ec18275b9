#pragma once

// Text formats for matrices and factorizations.
//
// Matrix document:        {"n": 3, "data": [[...], [...], [...]]}
// or a plain grid:        n whitespace-separated numbers on each of n lines.
// Factorization document: {"form": "canonical"|"compact", "n", "tol", "nu",
//                          "alpha", "V" (canonical) | "c" (compact), "U",
//                          "reconstruction_residual" (optional)}
// All numbers are written with 17 significant digits.

#include "automorphism.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lorentz::io {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write_row(std::string& out, const auto& row) {
    out += '[';
    for (Index j = 0; j < row.size(); ++j) {
        if (j) out += ", ";
        out += format_number(row(j));
    }
    out += ']';
}

inline void write_rows(std::string& out, const Matrix<double>& m, std::string_view indent) {
    out += "[\n";
    for (Index i = 0; i < m.rows(); ++i) {
        out += indent;
        out += "  ";
        write_row(out, m.row(i));
        out += i + 1 < m.rows() ? ",\n" : "\n";
    }
    out += indent;
    out += ']';
}

inline std::string where(std::string_view field, Index row, Index col = -1) {
    std::string s = std::string(field) + " row " + std::to_string(row);
    if (col >= 0) s += ", column " + std::to_string(col);
    return s;
}

inline Matrix<double> json_square(const nlohmann::json& j, std::string_view field,
                                  std::optional<Index> expected = std::nullopt) {
    if (!j.is_array()) throw ParseError(std::string(field) + ": expected an array of rows");
    const Index n = expected.value_or(static_cast<Index>(j.size()));
    if (static_cast<Index>(j.size()) != n)
        throw ParseError(std::string(field) + ": has " + std::to_string(j.size()) +
                         " rows, expected " + std::to_string(n));
    if (n < 1) throw ParseError(std::string(field) + ": empty matrix");
    Matrix<double> m(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array()) throw ParseError(where(field, i) + ": expected an array");
        if (static_cast<Index>(row.size()) != n)
            throw ParseError(where(field, i) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(n));
        for (Index k = 0; k < n; ++k) {
            const auto& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) throw ParseError(where(field, i, k) + ": not a number");
            m(i, k) = v.get<double>();
            if (!std::isfinite(m(i, k))) throw ParseError(where(field, i, k) + ": not finite");
        }
    }
    return m;
}

inline Vector<double> json_vector(const nlohmann::json& j, std::string_view field, Index expected) {
    if (!j.is_array()) throw ParseError(std::string(field) + ": expected an array");
    if (static_cast<Index>(j.size()) != expected)
        throw ParseError(std::string(field) + ": has " + std::to_string(j.size()) +
                         " entries, expected " + std::to_string(expected));
    Vector<double> v(expected);
    for (Index k = 0; k < expected; ++k) {
        const auto& e = j[static_cast<std::size_t>(k)];
        if (!e.is_number())
            throw ParseError(std::string(field) + " entry " + std::to_string(k) + ": not a number");
        v(k) = e.get<double>();
    }
    return v;
}

inline double json_real(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    const auto& v = doc[key];
    if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\": not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(std::string("field \"") + key + "\": not finite");
    return x;
}

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

inline bool looks_like_json(std::string_view text) {
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) return ch == '{';
    return false;
}

inline Matrix<double> read_grid(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            double x = 0;
            const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
            if (ec != std::errc() || end != tok.data() + tok.size() || !std::isfinite(x))
                throw ParseError(where("data", static_cast<Index>(rows.size()),
                                       static_cast<Index>(row.size())) +
                                 ": cannot parse \"" + tok + "\"");
            row.push_back(x);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    const auto n = static_cast<Index>(rows.size());
    if (n == 0) throw ParseError("empty matrix");
    Matrix<double> m(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<Index>(row.size()) != n)
            throw ParseError(where("data", i) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(n));
        for (Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
    }
    return m;
}

}  // namespace detail

inline std::string write_matrix(const Matrix<double>& m) {
    std::string out = "{\n  \"n\": " + std::to_string(m.rows()) + ",\n  \"data\": ";
    detail::write_rows(out, m, "  ");
    out += "\n}\n";
    return out;
}

/// Reads either a matrix document or a plain numeric grid. Requires n >= 2.
inline Matrix<double> read_matrix(std::string_view text) {
    Matrix<double> m;
    if (detail::looks_like_json(text)) {
        const auto doc = detail::parse_json(text);
        if (!doc.contains("n") || !doc["n"].is_number_integer())
            throw ParseError("missing integer field \"n\"");
        const auto n = doc["n"].get<std::int64_t>();
        if (n < 1) throw ParseError("field \"n\" must be positive");
        if (!doc.contains("data")) throw ParseError("missing field \"data\"");
        m = detail::json_square(doc["data"], "data", static_cast<Index>(n));
    } else {
        m = detail::read_grid(text);
    }
    if (m.rows() < 2) throw ParseError("matrix dimension must be at least 2");
    return m;
}

using AnyFactorization = std::variant<CanonicalFactorization<double>, CompactFactorization<double>>;

struct FactorizationFile {
    AnyFactorization factorization;
    double tol = kDefaultTol;
    std::optional<double> reconstruction_residual;

    Index dim() const {
        return std::visit([](const auto& f) { return f.dim(); }, factorization);
    }
};

inline std::string write_factorization(const FactorizationFile& file) {
    std::string out = "{\n";
    auto field = [&out](std::string_view key, const std::string& value) {
        out += "  \"";
        out += key;
        out += "\": ";
        out += value;
        out += ",\n";
    };
    auto matrix_field = [&out](std::string_view key, const Matrix<double>& m, bool last) {
        out += "  \"";
        out += key;
        out += "\": ";
        detail::write_rows(out, m, "  ");
        out += last ? "\n" : ",\n";
    };
    const bool canonical = std::holds_alternative<CanonicalFactorization<double>>(file.factorization);
    field("form", canonical ? "\"canonical\"" : "\"compact\"");
    field("n", std::to_string(file.dim()));
    field("tol", format_number(file.tol));
    if (file.reconstruction_residual)
        field("reconstruction_residual", format_number(*file.reconstruction_residual));
    if (canonical) {
        const auto& f = std::get<CanonicalFactorization<double>>(file.factorization);
        field("nu", format_number(f.nu));
        field("alpha", format_number(f.alpha));
        matrix_field("V", f.V, false);
        matrix_field("U", f.U, true);
    } else {
        const auto& f = std::get<CompactFactorization<double>>(file.factorization);
        field("nu", format_number(f.nu));
        out += "  \"c\": ";
        detail::write_row(out, f.c.transpose());
        out += ",\n";
        matrix_field("U", f.U, true);
    }
    out += "}\n";
    return out;
}

/// Structural parse only; orthogonality is checked by the caller against `tol`.
inline FactorizationFile read_factorization(std::string_view text) {
    const auto doc = detail::parse_json(text);
    if (!doc.is_object()) throw ParseError("factorization document must be an object");
    if (!doc.contains("form") || !doc["form"].is_string())
        throw ParseError("missing string field \"form\"");
    const auto form = doc["form"].get<std::string>();

    FactorizationFile file;
    if (doc.contains("tol")) {
        file.tol = detail::json_real(doc, "tol");
        if (file.tol < 0) throw ParseError("field \"tol\" must be non-negative");
    }
    if (doc.contains("reconstruction_residual"))
        file.reconstruction_residual = detail::json_real(doc, "reconstruction_residual");

    const Matrix<double> u = doc.contains("U") ? detail::json_square(doc["U"], "U")
                                               : throw ParseError("missing field \"U\"");
    const Index m = u.rows();
    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer() || doc["n"].get<std::int64_t>() != m + 1)
            throw ParseError("field \"n\" does not match U (expected " + std::to_string(m + 1) +
                             ")");
    }

    if (form == "canonical") {
        if (doc.contains("c")) throw ParseError("field \"c\" is not allowed in canonical form");
        CanonicalFactorization<double> f;
        f.nu = detail::json_real(doc, "nu");
        f.alpha = detail::json_real(doc, "alpha");
        if (!doc.contains("V")) throw ParseError("missing field \"V\"");
        f.V = detail::json_square(doc["V"], "V", m);
        f.U = u;
        file.factorization = std::move(f);
    } else if (form == "compact") {
        if (doc.contains("alpha") || doc.contains("V"))
            throw ParseError("fields \"alpha\"/\"V\" are not allowed in compact form");
        CompactFactorization<double> f;
        f.nu = detail::json_real(doc, "nu");
        if (!doc.contains("c")) throw ParseError("missing field \"c\"");
        f.c = detail::json_vector(doc["c"], "c", m);
        f.U = u;
        file.factorization = std::move(f);
    } else {
        throw ParseError("field \"form\" must be \"canonical\" or \"compact\", got \"" + form + "\"");
    }
    return file;
}

/// Key-value report, one datum per line.
class Report {
public:
    Report& add(std::string key, std::string value) {
        lines_.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    Report& add(std::string key, double value) { return add(std::move(key), format_number(value)); }
    Report& add(std::string key, bool value) { return add(std::move(key), std::string(value ? "true" : "false")); }
    Report& add(std::string key, std::int64_t value) { return add(std::move(key), std::to_string(value)); }

    std::string str() const {
        std::string out;
        for (const auto& [k, v] : lines_) out += k + ": " + v + "\n";
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

}  // namespace lorentz::io
