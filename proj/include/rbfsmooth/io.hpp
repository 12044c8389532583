#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbfsmooth/types.hpp"

namespace rbfs {

enum class Delimiter { Auto, Comma, Tab, Whitespace };

Delimiter delimiter_from_name(const std::string& name);

struct CsvOptions {
    Delimiter delimiter = Delimiter::Auto;
    // 0-based field ids to read; the last selected column is y. Empty: all fields.
    std::vector<int> columns;
};

// Scattered data: each row of the file is x_1, ..., x_d, y.
struct DataTable {
    int d = 0;
    PointSet X;
    Vector y;
    std::string source;
};

DataTable read_csv(std::istream& is, const CsvOptions& options = {}, const std::string& source = "<stream>");
DataTable read_csv(const std::string& path, const CsvOptions& options = {});

// Rows of d coordinates, same delimiter and header rules as read_csv.
PointSet read_points(std::istream& is, int d, const CsvOptions& options = {});
PointSet read_points(const std::string& path, int d, const CsvOptions& options = {});

// Parses `0,2,3` into field ids.
std::vector<int> parse_columns(const std::string& text);

// Writes x_1..x_d,value rows with a header, 17 significant digits.
void write_predictions(std::ostream& os, const PointSet& X, const Vector& values);

}  // namespace rbfs
