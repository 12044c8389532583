#include <doctest.h>

#include <sstream>

#include "rbfsmooth/errors.hpp"
#include "rbfsmooth/io.hpp"
#include "support.hpp"

using namespace rbfs;
using namespace testing;

namespace {

DataTable parse(const std::string& text, CsvOptions opt = {}) {
    std::istringstream is(text);
    return read_csv(is, opt);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("csv examples") {
    const DataTable t = parse("0,1\n0.5,2\n1,3\n");
    CHECK(t.d == 1);
    CHECK(t.X == rows({{0}, {0.5}, {1}}));
    CHECK(t.y == vec({1, 2, 3}));

    const DataTable h = parse("x,y,value\n# comment\n\n1,2,3\n+4,-5e-1,6\n");
    CHECK(h.d == 2);
    CHECK(h.X == rows({{1, 2}, {4, -0.5}}));
    CHECK(h.y == vec({3, 6}));

    CHECK(parse("1\t2\n3\t4\n").y == vec({2, 4}));
    CHECK(parse("  1   2\n3 4  \n").X == rows({{1}, {3}}));
    CHECK(parse("1 2\n3 4\n", {Delimiter::Whitespace, {}}).y == vec({2, 4}));
}

TEST_CASE("column selection") {
    const DataTable t = parse("9,1,2,3\n9,4,5,6\n", {Delimiter::Auto, parse_columns("3,1")});
    CHECK(t.d == 1);
    CHECK(t.X == rows({{3}, {6}}));
    CHECK(t.y == vec({1, 4}));
    CHECK_THROWS_AS(parse("1,2\n", {Delimiter::Auto, {0, 5}}), ParseError);
    CHECK_THROWS_AS(parse_columns("1"), InputError);
    CHECK_THROWS_AS(parse_columns("1,-2"), InputError);
    CHECK_THROWS_AS(parse_columns("1,x"), InputError);
}

TEST_CASE("malformed input reports the line") {
    CHECK(error_line("1,2\n3,4\n5\n") == 3);
    CHECK(error_line("1,2\n3,abc\n") == 2);
    CHECK(error_line("1,2\n\n# c\n3,inf\n") == 4);
    CHECK(error_line("1,2\n3,nan\n") == 2);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("1\n2\n"), ParseError);
    CHECK_THROWS_AS(read_csv(std::string("/nonexistent/data.csv")), InputError);
    CHECK_THROWS_AS(delimiter_from_name("semicolon"), InputError);
    CHECK(delimiter_from_name("tab") == Delimiter::Tab);
}

TEST_CASE("point files") {
    std::istringstream is("x1,x2\n0,1\n2,3\n");
    CHECK(read_points(is, 2) == rows({{0, 1}, {2, 3}}));
    std::istringstream wrong("0,1,2\n");
    CHECK_THROWS_AS(read_points(wrong, 2), InputError);
}

TEST_CASE("predictions round trip through the reader") {
    const PointSet X = gen_uniform(box(2, 1.0), 10, 1);
    const Vector v = uniform_vector(10, 2);
    std::ostringstream os;
    write_predictions(os, X, v);
    CHECK(os.str().rfind("x1,x2,value\n", 0) == 0);
    const DataTable t = parse(os.str());
    CHECK(t.X == X);
    CHECK(t.y == v);
}
