#include "csmds/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "csmds/errors.hpp"
#include "csmds/rng.hpp"

namespace csmds {

SplitIndices train_test_split(std::size_t n, double frac, std::uint64_t seed) {
    if (n == 0) throw config_error("train_test_split: empty dataset");
    if (!(frac > 0.0 && frac < 1.0))
        throw config_error("train_test_split: train fraction must be in (0, 1)");
    const auto n_train = std::size_t(std::llround(frac * double(n)));
    if (n_train == 0 || n_train == n)
        throw config_error("train_test_split: split leaves an empty side");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = std::size_t(rng.below(i + 1));
        std::swap(idx[i], idx[j]);
    }
    SplitIndices split;
    split.train.assign(idx.begin(), idx.begin() + std::ptrdiff_t(n_train));
    split.test.assign(idx.begin() + std::ptrdiff_t(n_train), idx.end());
    return split;
}

int knn_predict(const Matrix& train_x, std::span<const int> train_y,
                std::span<const double> query, std::size_t k) {
    const std::size_t n = train_x.rows();
    if (train_y.size() != n) throw validation_error("knn_predict: label count mismatch");
    if (k == 0 || k > n) throw config_error("knn_predict: k must be in [1, |train|]");
    if (query.size() != train_x.cols())
        throw validation_error("knn_predict: query dimension mismatch");

    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t d = 0; d < query.size(); ++d) {
            const double diff = train_x(i, d) - query[d];
            sq += diff * diff;
        }
        dist[i] = {sq, i};  // squared distances order identically
    }
    std::partial_sort(dist.begin(), dist.begin() + std::ptrdiff_t(k), dist.end());

    std::map<int, std::size_t> votes;  // ordered: vote ties resolve to the smaller label
    for (std::size_t m = 0; m < k; ++m) ++votes[train_y[dist[m].second]];
    return std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
               return a.second < b.second;  // strict: earlier (smaller) label wins ties
           })
        ->first;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size()) throw validation_error("accuracy: length mismatch");
    if (pred.empty()) throw validation_error("accuracy: empty prediction list");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
    return double(hits) / double(pred.size());
}

}  // namespace csmds
