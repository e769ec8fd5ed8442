#include "csmds/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csmds/errors.hpp"

namespace csmds {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw validation_error(path.string() + ": cannot open for writing");
    out.imbue(std::locale::classic());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error(path.string() + ": cannot open file");
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::filesystem::path& path, std::size_t lineno,
                    const std::string& field) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw format_error(path.string() + ":" + std::to_string(lineno) +
                           ": cannot parse number '" + field + "'");
    return v;
}

long long parse_int(const std::filesystem::path& path, std::size_t lineno,
                    const std::string& field) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw format_error(path.string() + ":" + std::to_string(lineno) +
                           ": cannot parse integer '" + field + "'");
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // field strings, header width enforced
};

Table read_table(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
        auto fields = split_fields(line);
        if (lineno == 1) {
            t.header = std::move(fields);
        } else {
            if (fields.size() != t.header.size())
                throw format_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                   std::to_string(t.header.size()) + " fields, got " +
                                   std::to_string(fields.size()));
            t.rows.push_back(std::move(fields));
        }
    }
    if (t.header.empty()) throw format_error(path.string() + ": empty file");
    return t;
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::string& col_prefix) {
    std::ofstream out = open_out(path);
    out << "row";
    for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << col_prefix << j;
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << i;
        for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
        out << '\n';
    }
    if (!out) throw validation_error(path.string() + ": write failed");
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    const Table t = read_table(path);
    if (t.header.empty() || t.header[0] != "row")
        throw format_error(path.string() + ": first header field must be 'row'");
    const std::size_t cols = t.header.size() - 1;
    Matrix m(t.rows.size(), cols);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (std::size_t(parse_int(path, i + 2, t.rows[i][0])) != i)
            throw format_error(path.string() + ":" + std::to_string(i + 2) +
                               ": row indices must be 0..N-1 in order");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = parse_double(path, i + 2, t.rows[i][j + 1]);
    }
    return m;
}

void write_pointcloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
    if (cloud.aux.size() != cloud.points.rows())
        throw validation_error("write_pointcloud_csv: aux length mismatch");
    std::ofstream out = open_out(path);
    out << "row";
    for (std::size_t j = 0; j < cloud.points.cols(); ++j) out << ",x" << j;
    out << ",aux\n";
    for (std::size_t i = 0; i < cloud.points.rows(); ++i) {
        out << i;
        for (std::size_t j = 0; j < cloud.points.cols(); ++j)
            out << ',' << format_double(cloud.points(i, j));
        out << ',' << format_double(cloud.aux[i]) << '\n';
    }
    if (!out) throw validation_error(path.string() + ": write failed");
}

PointCloud read_pointcloud_csv(const std::filesystem::path& path) {
    const Table t = read_table(path);
    if (t.header.size() < 3 || t.header[0] != "row" || t.header.back() != "aux")
        throw format_error(path.string() + ": expected header row,x0,...,aux");
    const std::size_t dims = t.header.size() - 2;
    PointCloud cloud{Matrix(t.rows.size(), dims), std::vector<double>(t.rows.size())};
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < dims; ++j)
            cloud.points(i, j) = parse_double(path, i + 2, t.rows[i][j + 1]);
        cloud.aux[i] = parse_double(path, i + 2, t.rows[i].back());
    }
    return cloud;
}

void write_labels_csv(const std::filesystem::path& path, std::span<const int> labels) {
    std::ofstream out = open_out(path);
    out << "row,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
    if (!out) throw validation_error(path.string() + ": write failed");
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
    const Table t = read_table(path);
    if (t.header.size() != 2 || t.header[0] != "row" || t.header[1] != "label")
        throw format_error(path.string() + ": expected header row,label");
    std::vector<int> labels(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        labels[i] = int(parse_int(path, i + 2, t.rows[i][1]));
    return labels;
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace) {
    std::ofstream out = open_out(path);
    out << "epoch,stress,radius,evals,elapsed_ms\n";
    for (const TraceRecord& r : trace)
        out << r.epoch << ',' << format_double(r.stress) << ',' << format_double(r.radius) << ','
            << r.evals << ',' << format_double(r.elapsed_ms) << '\n';
    if (!out) throw validation_error(path.string() + ": write failed");
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
    const Table t = read_table(path);
    const std::vector<std::string> expect{"epoch", "stress", "radius", "evals", "elapsed_ms"};
    if (t.header != expect)
        throw format_error(path.string() + ": expected header epoch,stress,radius,evals,elapsed_ms");
    std::vector<TraceRecord> trace(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& f = t.rows[i];
        trace[i] = {std::size_t(parse_int(path, i + 2, f[0])), parse_double(path, i + 2, f[1]),
                    parse_double(path, i + 2, f[2]),
                    std::uint64_t(parse_int(path, i + 2, f[3])),
                    parse_double(path, i + 2, f[4])};
    }
    return trace;
}

}  // namespace csmds
