/**
 * @brief CSV and JSON serialisation of the data types. Numbers are written in
 * shortest round-trip form, so identical inputs give byte-identical files.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevlab/eigen_counterexample.hpp"
#include "gevlab/fbi_transform.hpp"
#include "gevlab/operator_core.hpp"
#include "gevlab/sampled_function.hpp"
#include "gevlab/stretched_fit.hpp"

namespace gevlab::report {

inline std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string number(long long v) { return std::to_string(v); }

struct Table {
    /// Lines written before the header, each prefixed with "# ".
    std::vector<std::string> preamble;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& out, const Table& table) {
    for (const auto& line : table.preamble) out << "# " << line << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("report row has " + std::to_string(row.size()) + " fields, schema has " +
                                        std::to_string(table.columns.size()));
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

/// Write `text` to `path`, surfacing failures with the path in the message.
inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    file << text;
    file.flush();
    if (!file) throw std::runtime_error("write to " + path + " failed");
}

inline void emit_report(const Table& table, const std::string& path) {
    std::ostringstream out;
    write_csv(out, table);
    write_file(path, out.str());
}

inline nlohmann::ordered_json to_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["C"] = fit.C;
    j["delta"] = fit.delta;
    j["r"] = fit.r;
    j["residual_rms"] = fit.residual_rms;
    j["n_points"] = fit.n_points;
    return j;
}

template <class Real>
Table sampled_function_table(const SampledFunction<Real>& u) {
    static const char* names[] = {"x", "t1", "t2"};
    Table t;
    for (int d = 0; d < u.dimension(); ++d) t.columns.push_back(names[d]);
    t.columns.push_back("re");
    t.columns.push_back("im");
    const int dim = u.dimension();
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
        std::vector<std::string> row;
        for (int d = 0; d < dim; ++d) row.push_back(number(to_double(u.coordinate(d, idx[static_cast<std::size_t>(d)]))));
        row.push_back(number(to_double(Real(u[flat].real()))));
        row.push_back(number(to_double(Real(u[flat].imag()))));
        t.rows.push_back(std::move(row));
        for (int d = dim; d-- > 0;) {
            auto& i = idx[static_cast<std::size_t>(d)];
            if (++i < u.axis(d).count) break;
            i = 0;
        }
    }
    return t;
}

namespace detail {

inline std::vector<double> split_numbers(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        double v = 0;
        const char* b = field.data();
        while (b < field.data() + field.size() && *b == ' ') ++b;
        const auto res = std::from_chars(b, field.data() + field.size(), v);
        if (res.ec != std::errc()) throw std::invalid_argument("malformed number '" + field + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

/**
 * Read a CSV written by sampled_function_table: coordinate columns, then re,
 * im, rows in row-major grid order. Lines starting with '#' are skipped.
 */
inline SampledFunction<double> read_sampled_function_csv(std::istream& in, double support_radius) {
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            std::stringstream ss(line);
            std::string f;
            while (std::getline(ss, f, ',')) header.push_back(f);
            continue;
        }
        rows.push_back(detail::split_numbers(line));
        if (rows.back().size() != header.size()) throw std::invalid_argument("CSV row width differs from header");
    }
    if (header.size() < 3 || header.size() > 5) throw std::invalid_argument("CSV needs 1-3 coordinate columns plus re, im");
    const std::size_t dim = header.size() - 2;
    if (rows.empty()) throw std::invalid_argument("CSV has no samples");
    std::vector<Axis<double>> axes;
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<double> c;
        for (const auto& r : rows) c.push_back(r[d]);
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        if (c.size() < 2) throw degenerate_grid("CSV axis has a single coordinate");
        axes.push_back(Axis<double>{c.front(), (c.back() - c.front()) / static_cast<double>(c.size() - 1), c.size()});
    }
    std::vector<std::complex<double>> values;
    for (const auto& r : rows) values.emplace_back(r[dim], r[dim + 1]);
    return SampledFunction<double>(std::move(axes), std::move(values), support_radius);
}

template <class Real>
Table fbi_field_table(const FbiField<Real>& field) {
    Table t;
    const std::size_t dz = field.base_points.empty() ? 0 : field.base_points.front().size();
    const std::size_t dx = field.frequencies.empty() ? 0 : field.frequencies.front().size();
    for (std::size_t d = 0; d < dz; ++d) {
        t.columns.push_back("z" + std::to_string(d + 1) + "_re");
        t.columns.push_back("z" + std::to_string(d + 1) + "_im");
    }
    for (std::size_t d = 0; d < dx; ++d) t.columns.push_back("xi" + std::to_string(d + 1));
    for (const char* c : {"re", "im", "abs"}) t.columns.push_back(c);
    t.preamble.push_back("gamma=" + number(field.gamma.value()));
    for (std::size_t b = 0; b < field.rows(); ++b) {
        for (std::size_t f = 0; f < field.cols(); ++f) {
            std::vector<std::string> row;
            for (const auto& z : field.base_points[b]) {
                row.push_back(number(to_double(Real(z.real()))));
                row.push_back(number(to_double(Real(z.imag()))));
            }
            for (double xi : field.frequencies[f]) row.push_back(number(xi));
            const auto& v = field.at(b, f);
            row.push_back(number(to_double(Real(v.real()))));
            row.push_back(number(to_double(Real(v.imag()))));
            row.push_back(number(to_double(magnitude<Real>(v))));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

/// x, re, im of the eigenfunction, preceded by a one-line JSON header {p, q, z, residual}.
inline Table eigenpair_table(const Eigenpair& pair, const OperatorParams& params) {
    nlohmann::ordered_json head;
    head["p"] = params.p();
    head["q"] = params.q();
    head["z"] = pair.z;
    head["residual"] = pair.residual;
    Table t = sampled_function_table(pair.f);
    t.preamble.insert(t.preamble.begin(), head.dump());
    return t;
}

inline Table growth_table_report(const std::vector<GrowthRow>& rows) {
    Table t;
    t.columns = {"N", "lambda", "log_lhs", "log_sup", "s_star"};
    if (!rows.empty()) t.preamble.push_back("k=" + std::to_string(rows.front().k));
    for (const auto& r : rows)
        t.rows.push_back({number(r.N), number(r.lambda), number(r.log_lhs), number(r.log_sup), number(r.s_star)});
    return t;
}

}  // namespace gevlab::report
