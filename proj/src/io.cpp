#include "rbfsmooth/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "rbfsmooth/errors.hpp"

namespace rbfs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Delimiter detect(const std::string& line) {
    if (line.find(',') != std::string::npos) return Delimiter::Comma;
    if (line.find('\t') != std::string::npos) return Delimiter::Tab;
    return Delimiter::Whitespace;
}

std::vector<std::string> split(const std::string& line, Delimiter delim) {
    std::vector<std::string> out;
    if (delim == Delimiter::Whitespace) {
        std::istringstream ss(line);
        for (std::string tok; ss >> tok;) out.push_back(tok);
        return out;
    }
    const char c = delim == Delimiter::Comma ? ',' : '\t';
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, c);) out.push_back(trim(tok));
    if (!line.empty() && line.back() == c) out.emplace_back();
    return out;
}

bool to_double(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    const char* first = tok.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

// Numeric rows from a delimited text stream, restricted to `columns` when given.
std::vector<std::vector<double>> read_rows(std::istream& is, const CsvOptions& opt, const std::string& source) {
    std::vector<std::vector<double>> rows;
    Delimiter delim = opt.delimiter;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool first_content = true;
    for (std::string raw; std::getline(is, raw);) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (delim == Delimiter::Auto) delim = detect(line);
        const auto fields = split(line, delim);
        const bool header = first_content;
        first_content = false;
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw ParseError(source + ": " + std::to_string(fields.size()) + " fields, expected " + std::to_string(width),
                             line_no);
        }
        std::vector<int> cols = opt.columns;
        if (cols.empty())
            for (std::size_t j = 0; j < fields.size(); ++j) cols.push_back(static_cast<int>(j));
        for (int c : cols)
            if (c < 0 || static_cast<std::size_t>(c) >= fields.size())
                throw ParseError(source + ": column " + std::to_string(c) + " does not exist",
                                 line_no);
        std::vector<double> row;
        bool numeric = true;
        std::string bad;
        for (int c : cols) {
            double x = 0.0;
            if (!to_double(fields[c], x)) {
                numeric = false;
                bad = fields[c];
                break;
            }
            if (!std::isfinite(x))
                throw ParseError(source + ": non-finite value", line_no);
            row.push_back(x);
        }
        if (!numeric) {
            if (header) continue;
            throw ParseError(source + ": non-numeric field '" + bad + "'", line_no);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::ifstream open(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open '" + path + "'");
    return is;
}

}  // namespace

Delimiter delimiter_from_name(const std::string& name) {
    if (name == "auto") return Delimiter::Auto;
    if (name == "comma" || name == ",") return Delimiter::Comma;
    if (name == "tab") return Delimiter::Tab;
    if (name == "whitespace" || name == "space") return Delimiter::Whitespace;
    throw InputError("unknown delimiter '" + name + "' (auto, comma, tab, whitespace)");
}

DataTable read_csv(std::istream& is, const CsvOptions& opt, const std::string& source) {
    const auto rows = read_rows(is, opt, source);
    if (rows.empty()) throw ParseError(source + ": no data rows", 0);
    const std::size_t width = rows.front().size();
    if (width < 2) throw ParseError(source + ": need at least one coordinate and one value per row", 0);
    DataTable t;
    t.d = static_cast<int>(width - 1);
    t.source = source;
    t.X.resize(rows.size(), t.d);
    t.y.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < t.d; ++j) t.X(i, j) = rows[i][j];
        t.y(i) = rows[i][t.d];
    }
    return t;
}

DataTable read_csv(const std::string& path, const CsvOptions& opt) {
    auto is = open(path);
    return read_csv(is, opt, path);
}

PointSet read_points(std::istream& is, int d, const CsvOptions& opt) {
    const auto rows = read_rows(is, opt, "points");
    if (rows.empty()) throw ParseError("point file has no rows", 0);
    PointSet P(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw InputError("point rows have " + std::to_string(rows[i].size()) + " coordinates, model expects " +
                             std::to_string(d));
        for (int j = 0; j < d; ++j) P(i, j) = rows[i][j];
    }
    return P;
}

PointSet read_points(const std::string& path, int d, const CsvOptions& opt) {
    auto is = open(path);
    return read_points(is, d, opt);
}

std::vector<int> parse_columns(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        int c = -1;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || c < 0)
            throw InputError("column id '" + tok + "' is not a non-negative integer");
        out.push_back(c);
    }
    if (out.size() < 2) throw InputError("select at least one coordinate column and one value column");
    return out;
}

void write_predictions(std::ostream& os, const PointSet& X, const Vector& values) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) os << 'x' << j + 1 << ',';
    os << "value\n";
    os << std::setprecision(17);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) os << X(i, j) << ',';
        os << values(i) << '\n';
    }
}

}  // namespace rbfs
