#pragma once

#include "mcx/carnot.hpp"
#include "mcx/multicomplex.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mcx {

using json = nlohmann::json;

// Malformed or ill-typed input files.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class T> T field(const json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key))
        throw FormatError(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw FormatError(where + ": field '" + key + "' has the wrong type");
    }
}

inline Scalar scalar_field(const json &v, const std::string &where) {
    if (!v.is_string())
        throw FormatError(where + ": rationals must be strings \"p/q\"");
    try {
        return parse_scalar(v.get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw FormatError(where + ": " + e.what());
    }
}

inline json matrix_entries(const Matrix &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(format_scalar(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix read_entries(const json &entries, std::size_t rows, std::size_t cols, const std::string &where) {
    if (!entries.is_array() || entries.size() != rows)
        throw FormatError(where + ": expected " + std::to_string(rows) + " rows of entries");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!entries[i].is_array() || entries[i].size() != cols)
            throw FormatError(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) +
                              " entries");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = scalar_field(entries[i][j], where);
    }
    return m;
}

} // namespace detail

inline json multicomplex_to_json(const MulticomplexData &mc) {
    json j;
    j["Q"] = mc.Q;
    j["s"] = mc.s;
    json spaces = json::array();
    for (const auto &[bd, sp] : mc.spaces) {
        json e{{"a", bd.a}, {"b", bd.b}, {"dim", sp.dim}, {"labels", sp.labels}};
        if (mc.exterior) {
            auto it = mc.exterior->forms.find(bd);
            if (it != mc.exterior->forms.end()) {
                json forms = json::array();
                for (const auto &f : it->second)
                    forms.push_back(json{{"coef", f.coef}, {"cov", f.covectors}});
                e["forms"] = std::move(forms);
            }
        }
        spaces.push_back(std::move(e));
    }
    j["spaces"] = std::move(spaces);
    json maps = json::array();
    for (const auto &[key, m] : mc.maps)
        maps.push_back(json{{"i", key.i},
                            {"a", key.source.a},
                            {"b", key.source.b},
                            {"rows", m.rows()},
                            {"cols", m.cols()},
                            {"entries", detail::matrix_entries(m)}});
    j["maps"] = std::move(maps);
    if (mc.exterior) {
        const auto &ext = *mc.exterior;
        json star = json::array();
        for (std::size_t r = 0; r < ext.coefficient_star.rows(); ++r)
            for (std::size_t c = 0; c < ext.coefficient_star.cols(); ++c)
                if (!is_zero(ext.coefficient_star(r, c)))
                    star.push_back(json::array({r, c, format_scalar(ext.coefficient_star(r, c))}));
        j["exterior"] = json{{"weights", ext.weights},
                             {"coefficients", ext.coefficient_dim},
                             {"coefficient_star", std::move(star)}};
    }
    return j;
}

inline MulticomplexData multicomplex_from_json(const json &j) {
    MulticomplexData mc;
    mc.Q = detail::field<int>(j, "Q", "multicomplex");
    mc.s = detail::field<int>(j, "s", "multicomplex");
    auto spaces = detail::field<json>(j, "spaces", "multicomplex");
    if (!spaces.is_array())
        throw FormatError("multicomplex: 'spaces' must be an array");
    std::optional<ExteriorData> ext;
    if (j.contains("exterior")) {
        const json &e = j["exterior"];
        ExteriorData x;
        x.weights = detail::field<std::vector<int>>(e, "weights", "exterior");
        x.coefficient_dim = detail::field<std::size_t>(e, "coefficients", "exterior");
        x.coefficient_star = Matrix(x.coefficient_dim, x.coefficient_dim);
        for (const auto &t : detail::field<json>(e, "coefficient_star", "exterior")) {
            if (!t.is_array() || t.size() != 3)
                throw FormatError("exterior: star entries are [row, col, value]");
            auto r = t[0].get<std::size_t>(), c = t[1].get<std::size_t>();
            if (r >= x.coefficient_dim || c >= x.coefficient_dim)
                throw FormatError("exterior: star entry out of range");
            x.coefficient_star(r, c) = detail::scalar_field(t[2], "exterior");
        }
        ext = std::move(x);
    }
    for (const auto &s : spaces) {
        Bidegree bd{detail::field<int>(s, "a", "space"), detail::field<int>(s, "b", "space")};
        std::string where = "space " + to_string(bd);
        if (mc.spaces.count(bd))
            throw FormatError(where + " is listed twice");
        Space sp;
        sp.dim = detail::field<std::size_t>(s, "dim", where);
        if (s.contains("labels"))
            sp.labels = detail::field<std::vector<std::string>>(s, "labels", where);
        mc.spaces[bd] = sp;
        if (ext && s.contains("forms")) {
            auto &forms = ext->forms[bd];
            for (const auto &f : s["forms"])
                forms.push_back({detail::field<std::size_t>(f, "coef", where),
                                 detail::field<std::vector<int>>(f, "cov", where)});
            if (forms.size() != sp.dim)
                throw FormatError(where + ": forms do not match dim");
        }
    }
    auto maps = detail::field<json>(j, "maps", "multicomplex");
    if (!maps.is_array())
        throw FormatError("multicomplex: 'maps' must be an array");
    for (const auto &m : maps) {
        int i = detail::field<int>(m, "i", "map");
        Bidegree bd{detail::field<int>(m, "a", "map"), detail::field<int>(m, "b", "map")};
        std::string where = "map d_" + std::to_string(i) + " at " + to_string(bd);
        auto rows = detail::field<std::size_t>(m, "rows", where);
        auto cols = detail::field<std::size_t>(m, "cols", where);
        if (mc.has_map(i, bd))
            throw FormatError(where + " is listed twice");
        mc.set_map(i, bd, detail::read_entries(detail::field<json>(m, "entries", where), rows, cols, where));
    }
    mc.exterior = std::move(ext);
    return mc;
}

inline json algebra_to_json(const CarnotAlgebraSpec &spec) {
    json br = json::array();
    for (const auto &b : spec.brackets)
        br.push_back(json{{"i", b.i + 1}, {"j", b.j + 1}, {"k", b.k + 1}, {"c", format_scalar(b.c)}});
    return json{{"dim", spec.dim}, {"weights", spec.weights}, {"brackets", br}, {"poly_degree", spec.poly_degree}};
}

inline CarnotAlgebraSpec algebra_from_json(const json &j) {
    CarnotAlgebraSpec spec;
    spec.dim = detail::field<int>(j, "dim", "algebra");
    spec.weights = detail::field<std::vector<int>>(j, "weights", "algebra");
    spec.poly_degree = j.contains("poly_degree") ? detail::field<int>(j, "poly_degree", "algebra") : 0;
    for (const auto &b : detail::field<json>(j, "brackets", "algebra"))
        spec.brackets.push_back({detail::field<int>(b, "i", "bracket") - 1, detail::field<int>(b, "j", "bracket") - 1,
                                 detail::field<int>(b, "k", "bracket") - 1,
                                 detail::scalar_field(b.at("c"), "bracket")});
    return spec;
}

inline bool looks_like_algebra(const json &j) { return j.is_object() && j.contains("brackets"); }

// Parses a file, reporting the byte offset of syntax errors.
inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error &e) {
        throw FormatError(path + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

} // namespace mcx
