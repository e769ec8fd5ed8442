#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <vector>

#include "csmds/matrix.hpp"

namespace csmds {

/// Row-aligned vectors (pixels scaled to [0,1]) and integer class labels.
struct LabeledDataset {
    Matrix vectors;
    std::vector<int> labels;
};

/// IDX image file (magic 0x00000803, big-endian dims n x rows x cols,
/// unsigned bytes). Pixels are scaled by 1/255. Errors report the byte
/// offset of the problem.
Matrix read_idx_images(const std::filesystem::path& path);

/// IDX label file (magic 0x00000801). Labels returned raw.
std::vector<int> read_idx_labels(const std::filesystem::path& path);

/// Uniform subset without replacement of `count` items whose labels fall in
/// `classes`; deterministic under the seed, rows kept in original order.
LabeledDataset subsample(const LabeledDataset& ds, const std::set<int>& classes,
                         std::size_t count, std::uint64_t seed);

}  // namespace csmds
