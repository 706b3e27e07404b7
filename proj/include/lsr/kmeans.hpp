#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "lsr/common.hpp"

namespace lsr {

struct KMeansModel {
    int k = 0;
    int dim = 0;
    std::vector<double> centroids;  // k × dim, row-major

    const double* centroid(int j) const {
        return centroids.data() + static_cast<std::size_t>(j) * dim;
    }
};

namespace detail {

inline double sq_dist(const double* a, const double* b, int dim) {
    double acc = 0;
    for (int i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace detail

/// Squared-Euclidean argmin over the centroids; ties go to the lowest index.
inline int kmeans_assign(const KMeansModel& model, const double* x) {
    int best = 0;
    double best_d = detail::sq_dist(x, model.centroid(0), model.dim);
    for (int j = 1; j < model.k; ++j) {
        const double d = detail::sq_dist(x, model.centroid(j), model.dim);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

inline int kmeans_assign(const KMeansModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.dim)
        fail(ErrorKind::Dimension, "kmeans_assign: descriptor length mismatch");
    return kmeans_assign(model, x.data());
}

/// Lloyd's algorithm with k-means++ seeding. Runs until the largest centroid
/// movement drops below `tol` or `max_iters` passes. Clusters that empty out
/// are reseeded from the point farthest from its assigned centroid. Fully
/// deterministic for a fixed seed.
inline KMeansModel kmeans_fit(const double* data, std::size_t n, int dim, int k,
                              std::uint64_t seed, int max_iters = 100, double tol = 1e-6) {
    if (k < 1) fail(ErrorKind::Parameter, "kmeans_fit: k must be >= 1");
    if (n < static_cast<std::size_t>(k))
        fail(ErrorKind::Training, "kmeans_fit: fewer samples than clusters");

    const auto row = [&](std::size_t i) { return data + i * dim; };
    KMeansModel model;
    model.k = k;
    model.dim = dim;
    model.centroids.resize(static_cast<std::size_t>(k) * dim);

    // k-means++ seeding
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> chosen;
    chosen.push_back(uniform_index(rng, n));
    std::vector<double> d2(n);
    while (chosen.size() < static_cast<std::size_t>(k)) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c : chosen)
                best = std::min(best, detail::sq_dist(row(i), row(c), dim));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0) {
            const double target = uniform_real01(rng) * total;
            double acc = 0;
            pick = n - 1;  // guard against fp undershoot
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            // all remaining points coincide with a chosen centroid; take the
            // lowest index not already used
            std::vector<bool> used(n, false);
            for (std::size_t c : chosen) used[c] = true;
            while (pick + 1 < n && used[pick]) ++pick;
        }
        chosen.push_back(pick);
    }
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < dim; ++i) model.centroids[static_cast<std::size_t>(j) * dim + i] =
            row(chosen[static_cast<std::size_t>(j)])[i];

    // Lloyd iterations
    std::vector<int> assign(n);
    std::vector<double> next(static_cast<std::size_t>(k) * dim);
    std::vector<std::size_t> count(k);
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i < n; ++i) assign[i] = kmeans_assign(model, row(i));

        std::fill(next.begin(), next.end(), 0.0);
        std::fill(count.begin(), count.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            double* c = next.data() + static_cast<std::size_t>(assign[i]) * dim;
            for (int d = 0; d < dim; ++d) c[d] += row(i)[d];
            ++count[assign[i]];
        }
        for (int j = 0; j < k; ++j) {
            if (count[j] == 0) continue;
            double* c = next.data() + static_cast<std::size_t>(j) * dim;
            for (int d = 0; d < dim; ++d) c[d] /= static_cast<double>(count[j]);
        }
        // reseed empties from the farthest point (lowest index on ties)
        std::vector<bool> taken(n, false);
        for (int j = 0; j < k; ++j) {
            if (count[j] != 0) continue;
            std::size_t far = 0;
            double far_d = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i]) continue;
                const double d = detail::sq_dist(row(i), model.centroid(assign[i]), dim);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            taken[far] = true;
            double* c = next.data() + static_cast<std::size_t>(j) * dim;
            for (int d = 0; d < dim; ++d) c[d] = row(far)[d];
        }

        double shift2 = 0;
        for (int j = 0; j < k; ++j)
            shift2 = std::max(shift2, detail::sq_dist(model.centroid(j),
                                                      next.data() + static_cast<std::size_t>(j) * dim,
                                                      dim));
        model.centroids = next;
        if (shift2 < tol * tol) break;
    }
    return model;
}

}  // namespace lsr
