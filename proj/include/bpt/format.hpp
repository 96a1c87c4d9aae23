#pragma once

// Deterministic rendering of computed values for the CLI: a per-edge record
// plus text / CSV / JSON emitters.  Everything is formatted from exact
// rationals through our own digit routines, so identical inputs always give
// byte-identical output.  CSV uses LF line endings and double-quotes exactly
// the fraction-valued columns; JSON keeps insertion key order and carries
// decimals as strings.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpt/errors.hpp"
#include "bpt/norm.hpp"
#include "bpt/rational.hpp"
#include "bpt/tree.hpp"

namespace bpt {

inline constexpr const char* artifact_version = "1.0.0";

// One computed edge value: identifies the edge class and carries the agreed
// value together with its analytic envelope.  `j` is empty for aligned edges.
struct OutputRecord {
    long long q = 0;
    long long d = 0;
    EdgeKind kind = EdgeKind::aligned;
    long long i = 0;
    std::optional<long long> j;
    Rational value;
    Rational bound;
};

// Inverse of fraction_string: strict "num/den" only.
inline Rational parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= text.size()) {
        throw InvalidParameters("fraction parse: expected \"num/den\", got \"" + text + "\"");
    }
    try {
        const Int num(text.substr(0, slash));
        const Int den(text.substr(slash + 1));
        return ratio(num, den);
    } catch (const std::runtime_error&) {
        throw InvalidParameters("fraction parse: expected \"num/den\", got \"" + text + "\"");
    }
}

namespace detail {

inline std::string kind_name(EdgeKind kind) {
    return kind == EdgeKind::aligned ? "aligned" : "transverse";
}

inline std::string csv_quoted(const std::string& field) { return "\"" + field + "\""; }

// Left-aligned fixed-width table; widths are derived from the content, so the
// layout is a pure function of the cells.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) {
            width.resize(row.size(), 0);
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(width[c] - row[c].size() + 2, ' ');
            }
        }
        out << "\n";
    }
    return out.str();
}

} // namespace detail

// --- transform -------------------------------------------------------------

// The three independently computed routes are printed alongside the record so
// a reader can see the agreement that the tool enforced before printing.
struct RouteValues {
    Rational series;
    Rational closed_form;
    Rational level_set;
};

inline std::string transform_text(const OutputRecord& rec, const RouteValues& routes,
                                  int precision) {
    std::ostringstream out;
    out << "q: " << rec.q << "\n";
    out << "d: " << rec.d << "\n";
    out << "kind: " << detail::kind_name(rec.kind) << "\n";
    out << "i: " << rec.i << "\n";
    out << "j: " << (rec.j ? std::to_string(*rec.j) : std::string("-")) << "\n";
    out << "value_exact: " << fraction_string(rec.value) << "\n";
    out << "value_decimal: " << decimal_string(rec.value, precision) << "\n";
    out << "bound_exact: " << fraction_string(rec.bound) << "\n";
    out << "route_series: " << fraction_string(routes.series) << "\n";
    out << "route_closed_form: " << fraction_string(routes.closed_form) << "\n";
    out << "route_level_set: " << fraction_string(routes.level_set) << "\n";
    return out.str();
}

inline std::string transform_csv(const OutputRecord& rec, int precision) {
    std::ostringstream out;
    out << "q,d,kind,i,j,value_exact,value_decimal,bound_exact\n";
    out << rec.q << "," << rec.d << "," << detail::kind_name(rec.kind) << "," << rec.i << ",";
    if (rec.j) {
        out << *rec.j;
    }
    out << "," << detail::csv_quoted(fraction_string(rec.value)) << ","
        << decimal_string(rec.value, precision) << ","
        << detail::csv_quoted(fraction_string(rec.bound)) << "\n";
    return out.str();
}

inline std::string transform_json(const OutputRecord& rec, int precision) {
    nlohmann::ordered_json row;
    row["q"] = rec.q;
    row["d"] = rec.d;
    row["kind"] = detail::kind_name(rec.kind);
    row["i"] = rec.i;
    if (rec.j) {
        row["j"] = *rec.j;
    } else {
        row["j"] = nullptr;
    }
    row["value_exact"] = fraction_string(rec.value);
    row["value_decimal"] = decimal_string(rec.value, precision);
    row["bound_exact"] = fraction_string(rec.bound);

    nlohmann::ordered_json doc;
    doc["meta"] = {{"q", rec.q}, {"d", rec.d}, {"version", artifact_version}};
    doc["rows"] = nlohmann::ordered_json::array({row});
    return doc.dump(2) + "\n";
}

// --- norm sweep ------------------------------------------------------------

// CSV is plot-oriented: the six documented columns are plain decimals so
// gnuplot and spreadsheets can use them directly, and the two exact columns
// at the end keep the lossless values.
inline std::string norm_csv(const std::vector<NormReport>& rows, int precision) {
    std::ostringstream out;
    out << "d,norm_sq,lower,upper,gj_prediction,gj_residual,norm_sq_exact,gj_residual_exact\n";
    for (const auto& row : rows) {
        out << row.d << "," << decimal_string(row.norm_sq, precision) << ","
            << decimal_string(row.lower, precision) << ","
            << decimal_string(row.upper, precision) << ","
            << decimal_string(row.gj_prediction, precision) << ","
            << decimal_string(row.gj_residual, precision) << ","
            << detail::csv_quoted(fraction_string(row.norm_sq)) << ","
            << detail::csv_quoted(fraction_string(row.gj_residual)) << "\n";
    }
    return out.str();
}

inline std::string norm_json(long long q, long long d_max, const std::vector<NormReport>& rows,
                             int precision) {
    nlohmann::ordered_json doc;
    doc["meta"] = {{"q", q}, {"d_max", d_max}, {"version", artifact_version}};
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json rec;
        rec["d"] = row.d;
        rec["norm_sq"] = decimal_string(row.norm_sq, precision);
        rec["lower"] = decimal_string(row.lower, precision);
        rec["upper"] = decimal_string(row.upper, precision);
        rec["gj_prediction"] = decimal_string(row.gj_prediction, precision);
        rec["gj_residual"] = decimal_string(row.gj_residual, precision);
        rec["norm_sq_exact"] = fraction_string(row.norm_sq);
        rec["gj_residual_exact"] = fraction_string(row.gj_residual);
        doc["rows"].push_back(rec);
    }
    return doc.dump(2) + "\n";
}

// Text keeps every quantity as an exact fraction.
inline std::string norm_text(const std::vector<NormReport>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"d", "norm_sq", "lower", "upper", "gj_prediction", "gj_residual"});
    for (const auto& row : rows) {
        cells.push_back({std::to_string(row.d), fraction_string(row.norm_sq),
                         fraction_string(row.lower), fraction_string(row.upper),
                         fraction_string(row.gj_prediction), fraction_string(row.gj_residual)});
    }
    return detail::render_table(cells);
}

} // namespace bpt
