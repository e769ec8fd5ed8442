#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "csmds/csv.hpp"
#include "csmds/errors.hpp"
#include "csmds/geometry.hpp"
#include "csmds/rng.hpp"

using namespace csmds;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const std::string& name) {
    return fs::temp_directory_path() / ("csmds_csv_" + name + ".csv");
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// Collect the message of an expected exception so tests can assert substrings.
template <typename Ex, typename Fn>
std::string message_of(Fn&& fn) {
    try {
        fn();
    } catch (const Ex& e) {
        return e.what();
    }
    return "";  // no throw: callers CHECK the message is non-empty
}

}  // namespace

TEST_CASE("matrix csv round-trips doubles bit for bit") {
    Matrix m(3, 3);
    const double vals[9] = {0.0,      -0.0,     1.0 / 3.0, 3.141592653589793, DBL_MAX,
                            -DBL_MAX, DBL_MIN,  -1.25e-7,  123456789.123456789};
    for (std::size_t i = 0; i < 9; ++i) m(i / 3, i % 3) = vals[i];

    const fs::path p = tmp_file("roundtrip");
    write_matrix_csv(p, m);
    const Matrix back = read_matrix_csv(p);

    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(same_bits(back(i, j), m(i, j)));
    // -0.0 keeps its sign through the file
    CHECK(std::signbit(back(0, 1)));
}

TEST_CASE("matrix csv round-trips random data and honors the column prefix") {
    Rng rng(314);
    Matrix m(20, 5);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = (rng.uniform() - 0.5) * std::pow(10.0, double(j) * 4.0 - 8.0);

    const fs::path p = tmp_file("random");
    write_matrix_csv(p, m, "d");
    CHECK(first_line(p) == "row,d0,d1,d2,d3,d4");

    const Matrix back = read_matrix_csv(p);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) CHECK(same_bits(back(i, j), m(i, j)));
}

TEST_CASE("matrix csv reader rejects malformed files") {
    const fs::path bad_header = tmp_file("bad_header");
    write_text(bad_header, "foo,c0\n0,1.5\n");
    CHECK_THROWS_AS(read_matrix_csv(bad_header), format_error);

    const fs::path bad_index = tmp_file("bad_index");
    write_text(bad_index, "row,c0\n1,1.5\n");
    const std::string idx_msg =
        message_of<format_error>([&] { read_matrix_csv(bad_index); });
    CHECK(idx_msg.find("row indices") != std::string::npos);

    const fs::path short_row = tmp_file("short_row");
    write_text(short_row, "row,c0,c1\n0,1.5\n");
    const std::string width_msg =
        message_of<format_error>([&] { read_matrix_csv(short_row); });
    CHECK(width_msg.find("expected 3 fields, got 2") != std::string::npos);

    const fs::path empty = tmp_file("empty");
    write_text(empty, "");
    CHECK_THROWS_AS(read_matrix_csv(empty), format_error);

    CHECK_THROWS_AS(read_matrix_csv(tmp_file("does_not_exist")), validation_error);
}

TEST_CASE("matrix csv parse errors name the offending line and field") {
    const fs::path p = tmp_file("bad_number");
    write_text(p, "row,c0\n0,1.5\n1,oops\n");
    const std::string msg = message_of<format_error>([&] { read_matrix_csv(p); });
    CHECK(msg.find(":3:") != std::string::npos);
    CHECK(msg.find("oops") != std::string::npos);
}

TEST_CASE("pointcloud csv round-trips points and aux exactly") {
    const PointCloud cloud = generate_swissroll(30, 0.1, 99);
    const fs::path p = tmp_file("cloud");
    write_pointcloud_csv(p, cloud);
    CHECK(first_line(p) == "row,x0,x1,x2,aux");

    const PointCloud back = read_pointcloud_csv(p);
    REQUIRE(back.points.rows() == 30);
    REQUIRE(back.points.cols() == 3);
    REQUIRE(back.aux.size() == 30);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(same_bits(back.points(i, j), cloud.points(i, j)));
        CHECK(same_bits(back.aux[i], cloud.aux[i]));
    }
}

TEST_CASE("pointcloud csv requires the aux column") {
    const fs::path p = tmp_file("no_aux");
    write_text(p, "row,x0,x1\n0,1.0,2.0\n");
    CHECK_THROWS_AS(read_pointcloud_csv(p), format_error);

    PointCloud bad{Matrix(2, 2), std::vector<double>(3)};
    CHECK_THROWS_AS(write_pointcloud_csv(tmp_file("mismatch"), bad), validation_error);
}

TEST_CASE("labels csv round-trips including negatives") {
    const std::vector<int> labels = {0, 9, -3, 7, 7};
    const fs::path p = tmp_file("labels");
    write_labels_csv(p, labels);
    CHECK(first_line(p) == "row,label");
    CHECK(read_labels_csv(p) == labels);
}

TEST_CASE("labels csv reader rejects bad headers and values") {
    const fs::path bad_header = tmp_file("labels_bad_header");
    write_text(bad_header, "row,tag\n0,1\n");
    CHECK_THROWS_AS(read_labels_csv(bad_header), format_error);

    const fs::path bad_value = tmp_file("labels_bad_value");
    write_text(bad_value, "row,label\n0,x\n");
    const std::string msg = message_of<format_error>([&] { read_labels_csv(bad_value); });
    CHECK(msg.find(":2:") != std::string::npos);
}

TEST_CASE("trace csv round-trips every field exactly") {
    const std::vector<TraceRecord> trace = {
        {0, 123.456789012345678, 5.0, 0, 0.0},
        {1, 2.0 / 3.0, 2.5, 600, 18.25},
        {2, 1e-12, 0.0009765625, 1200, 40.125},
    };
    const fs::path p = tmp_file("trace");
    write_trace_csv(p, trace);
    CHECK(first_line(p) == "epoch,stress,radius,evals,elapsed_ms");

    const auto back = read_trace_csv(p);
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(back[i].epoch == trace[i].epoch);
        CHECK(same_bits(back[i].stress, trace[i].stress));
        CHECK(same_bits(back[i].radius, trace[i].radius));
        CHECK(back[i].evals == trace[i].evals);
        CHECK(same_bits(back[i].elapsed_ms, trace[i].elapsed_ms));
    }
}

TEST_CASE("trace csv reader demands the exact header") {
    const fs::path p = tmp_file("trace_bad_header");
    write_text(p, "epoch,stress\n0,1.0\n");
    CHECK_THROWS_AS(read_trace_csv(p), format_error);
}

TEST_CASE("csv readers tolerate CRLF line endings") {
    const fs::path p = tmp_file("crlf");
    write_text(p, "row,c0\r\n0,2.5\r\n");
    const Matrix m = read_matrix_csv(p);
    REQUIRE(m.rows() == 1);
    CHECK(m(0, 0) == 2.5);
}

TEST_CASE("format_double output parses back to the identical double") {
    const double vals[] = {0.1,     1.0 / 3.0, DBL_MAX,  DBL_MIN, -2.5e-7,
                           6.0e22,  -0.0,      1.0,      42.0,    9007199254740993.0};
    for (double v : vals) {
        const std::string s = format_double(v);
        CHECK(same_bits(std::strtod(s.c_str(), nullptr), v));
    }
    // integral values print without a decimal point under %g
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-4.0) == "-4");
}

TEST_CASE("empty matrices survive a round-trip") {
    const fs::path p = tmp_file("empty_rows");
    write_matrix_csv(p, Matrix(0, 2));
    const Matrix back = read_matrix_csv(p);
    CHECK(back.rows() == 0);
    CHECK(back.cols() == 2);
}
