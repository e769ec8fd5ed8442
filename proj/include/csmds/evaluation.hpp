#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csmds/matrix.hpp"

namespace csmds {

/// Disjoint train/test index lists covering [0, n); |train| = round(frac*n).
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

SplitIndices train_test_split(std::size_t n, double frac, std::uint64_t seed);

/// Majority label among the k Euclidean-nearest training rows. Distance ties
/// break toward the lower training index, vote ties toward the smaller label.
int knn_predict(const Matrix& train_x, std::span<const int> train_y,
                std::span<const double> query, std::size_t k);

/// Fraction of positions where pred == truth.
double accuracy(std::span<const int> pred, std::span<const int> truth);

}  // namespace csmds
