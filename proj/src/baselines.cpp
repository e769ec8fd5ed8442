#include "csmds/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include "csmds/errors.hpp"
#include "csmds/stress.hpp"

namespace csmds {

GramMatrix double_center(const TargetMatrix& delta) {
    const std::size_t n = delta.size();
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = -0.5 * delta(i, j) * delta(i, j);

    std::vector<double> row_mean(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        row_mean[i] = std::accumulate(b.row(i).begin(), b.row(i).end(), 0.0) / double(n);
        total += row_mean[i];
    }
    const double grand = total / double(n);
    // Symmetric input, so column means equal row means.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) -= row_mean[i] + row_mean[j] - grand;
    return GramMatrix(std::move(b));
}

EigResult symmetric_eig(const Matrix& symmetric) {
    const std::size_t n = symmetric.rows();
    if (n != symmetric.cols()) throw std::invalid_argument("symmetric_eig: matrix must be square");
    Matrix a = symmetric;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double frob = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) frob += a.data()[i] * a.data()[i];
    frob = std::sqrt(frob);
    const double target = 1e-10 * std::max(frob, 1e-300);

    auto off_norm = [&a, n] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    constexpr int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm() > target)
        throw numerical_error("symmetric_eig: Jacobi did not converge in " +
                              std::to_string(max_sweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigResult out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

ClassicalMdsResult classical_mds(const TargetMatrix& delta, std::size_t l) {
    const std::size_t n = delta.size();
    if (l == 0 || l > n) throw config_error("classical_mds: dimension must be in [1, N]");
    const GramMatrix gram = double_center(delta);
    const EigResult eig = symmetric_eig(gram.values());

    std::size_t clamped = 0;
    Matrix x(n, l);
    for (std::size_t k = 0; k < l; ++k) {
        double lambda = eig.values[k];
        if (lambda < 0.0) {
            lambda = 0.0;
            ++clamped;
        }
        const double scale = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) x(i, k) = eig.vectors(i, k) * scale;
    }
    return {Embedding(std::move(x)), clamped};
}

Embedding guttman_step(const Embedding& x, const TargetMatrix& delta) {
    const std::size_t n = x.size();
    if (delta.size() != n) throw std::invalid_argument("guttman_step: size mismatch");
    const Matrix& d = x.distances();

    // B(X): b_ij = -delta_ij / d_ij off-diagonal (0 when d_ij = 0), diagonal
    // the negated row sum, so every row of B sums to zero.
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double bij = d(i, j) > 0.0 ? -delta(i, j) / d(i, j) : 0.0;
            b(i, j) = bij;
            diag -= bij;
        }
        b(i, i) = diag;
    }
    Matrix next = matmul(b, x.coords());
    const double inv_n = 1.0 / double(n);
    for (std::size_t i = 0; i < next.size(); ++i) next.data()[i] *= inv_n;
    return Embedding(std::move(next));
}

SmacofResult run_smacof(const TargetMatrix& delta, std::size_t l, const SmacofOptions& opts) {
    const std::size_t n = delta.size();
    if (n < 2) throw std::invalid_argument("run_smacof: need at least two points");
    if (l == 0) throw config_error("run_smacof: dimension must be positive");
    if (!(opts.tol > 0.0)) throw config_error("run_smacof: tol must be positive");

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t_start] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t_start)
            .count();
    };

    Rng rng(opts.seed);
    Embedding x = Embedding::random_uniform(n, l, rng);
    double sigma = raw_stress(delta, x.distances());

    SmacofResult out{std::move(x), {}, false};
    out.trace.push_back({0, sigma, 0.0, 0, elapsed_ms()});

    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
        Embedding next = guttman_step(out.embedding, delta);
        const double next_sigma = raw_stress(delta, next.distances());
        out.embedding = std::move(next);
        out.trace.push_back({iter, next_sigma, 0.0, iter, elapsed_ms()});
        if (sigma - next_sigma <= opts.tol * sigma) {
            sigma = next_sigma;
            out.converged = true;
            break;
        }
        sigma = next_sigma;
    }
    return out;
}

}  // namespace csmds
