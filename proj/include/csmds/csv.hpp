#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "csmds/geometry.hpp"
#include "csmds/matrix.hpp"
#include "csmds/types.hpp"

namespace csmds {

/// Dense headered CSV with a leading row-index column and 17-significant-digit
/// values ('.' decimal), so write-then-read round-trips doubles exactly.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::string& col_prefix = "c");
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_pointcloud_csv(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_pointcloud_csv(const std::filesystem::path& path);

void write_labels_csv(const std::filesystem::path& path, std::span<const int> labels);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

/// Columns: epoch,stress,radius,evals,elapsed_ms.
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

/// %.17g formatting used by every writer.
std::string format_double(double v);

}  // namespace csmds
