#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lsr/common.hpp"

namespace lsr {

/// Data-driven n×n window transform: one fixed constant (DC) kernel plus
/// PCA-derived AC kernels, stored as an n²×n² orthonormal matrix (row 0 = DC,
/// remaining rows ordered by descending eigenvalue).
struct SaabKernelSet {
    int window = 0;               // side length n; 0 = not fitted
    std::vector<double> kernels;  // n² × n², row-major
    bool completed = false;       // basis needed orthonormal completion (rank-deficient fit)

    int dim() const { return window * window; }
    const double* row(int k) const { return kernels.data() + static_cast<std::size_t>(k) * dim(); }
};

/// Cross-channel PCA applied to the C filter responses at one spatial
/// position: coefficients = matrix · (response − mean).
struct ChannelPcaSet {
    int channels = 0;            // 0 = not fitted
    std::vector<double> matrix;  // C × C, row-major, rows = components by descending eigenvalue
    std::vector<double> mean;    // C
    bool completed = false;

    const double* row(int k) const {
        return matrix.data() + static_cast<std::size_t>(k) * channels;
    }
};

namespace detail {

/// Largest-magnitude element made positive. Ties (within a relative epsilon,
/// so analytically equal magnitudes stay tied under fp noise) go to the
/// lowest index.
inline void fix_sign(double* v, int d) {
    double top = 0;
    for (int i = 0; i < d; ++i) top = std::max(top, std::abs(v[i]));
    int arg = 0;
    while (arg < d - 1 && std::abs(v[arg]) < top * (1.0 - 1e-9)) ++arg;
    if (v[arg] < 0)
        for (int i = 0; i < d; ++i) v[i] = -v[i];
}

/// Eigen-decomposition of a d×d covariance, returned as (eigenvalue, vector)
/// pairs in descending eigenvalue order.
inline void eigen_descending(const Eigen::MatrixXd& cov, std::vector<double>& values,
                             std::vector<std::vector<double>>& vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) fail(ErrorKind::Training, "eigen-decomposition failed");
    const int d = static_cast<int>(cov.rows());
    values.resize(d);
    vectors.assign(d, std::vector<double>(d));
    for (int k = 0; k < d; ++k) {  // solver returns ascending order
        const int src = d - 1 - k;
        values[k] = solver.eigenvalues()(src);
        for (int i = 0; i < d; ++i) vectors[k][i] = solver.eigenvectors()(i, src);
    }
}

/// Numerical rank of a PSD spectrum given in descending order.
inline int spectrum_rank(const std::vector<double>& values) {
    if (values.empty() || values.front() <= 0.0) return 0;
    const double tol = values.front() * 1e-9;
    int rank = 0;
    for (double v : values) rank += (v > tol);
    return rank;
}

/// Appends, to `basis` (rows of length d), every candidate that keeps a
/// component orthogonal to the rows already present, until d rows exist.
/// Returns false if the candidates ran out before the basis was full.
inline bool gram_schmidt_extend(std::vector<double>& basis, int d,
                                const std::vector<std::vector<double>>& candidates) {
    const std::size_t want = static_cast<std::size_t>(d) * d;
    for (const auto& cand : candidates) {
        if (basis.size() == want) return true;
        std::vector<double> v = cand;
        const int rows = static_cast<int>(basis.size()) / d;
        for (int b = 0; b < rows; ++b) {
            const double* u = basis.data() + static_cast<std::size_t>(b) * d;
            double dot = 0;
            for (int i = 0; i < d; ++i) dot += u[i] * v[i];
            for (int i = 0; i < d; ++i) v[i] -= dot * u[i];
        }
        double norm2 = 0;
        for (int i = 0; i < d; ++i) norm2 += v[i] * v[i];
        if (norm2 <= 1e-16) continue;  // linearly dependent on accepted rows
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < d; ++i) v[i] *= inv;
        fix_sign(v.data(), d);
        basis.insert(basis.end(), v.begin(), v.end());
    }
    return basis.size() == want;
}

}  // namespace detail

/// Fits the transform for n×n windows supplied as `count` flattened rows of
/// n² values. The DC kernel is fixed (every element 1/n); AC kernels are the
/// PCA basis of the windows after removing each window's DC component.
inline SaabKernelSet fit_saab(const double* windows, std::size_t count, int n) {
    if (n < 1) fail(ErrorKind::Parameter, "fit_saab: window side must be >= 1");
    const int d = n * n;
    if (count < static_cast<std::size_t>(d))
        fail(ErrorKind::Training, "fit_saab: need at least n^2 windows");

    // Removing the DC projection equals removing the window mean, so the
    // residual covariance can be accumulated from mean-removed windows.
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd r(d);
    for (std::size_t w = 0; w < count; ++w) {
        const double* x = windows + w * d;
        double mean = 0;
        for (int i = 0; i < d; ++i) mean += x[i];
        mean /= d;
        for (int i = 0; i < d; ++i) r(i) = x[i] - mean;
        second.noalias() += r * r.transpose();
        sum += r;
    }
    const double inv_n = 1.0 / static_cast<double>(count);
    const Eigen::VectorXd mu = sum * inv_n;
    const Eigen::MatrixXd cov = second * inv_n - mu * mu.transpose();

    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    detail::eigen_descending(cov, values, vectors);

    SaabKernelSet set;
    set.window = n;
    set.kernels.reserve(static_cast<std::size_t>(d) * d);
    set.kernels.assign(d, 1.0 / n);  // row 0: unit-norm constant
    bool full = detail::gram_schmidt_extend(set.kernels, d, vectors);
    if (!full) {
        std::vector<std::vector<double>> canonical(d, std::vector<double>(d, 0.0));
        for (int i = 0; i < d; ++i) canonical[i][i] = 1.0;
        full = detail::gram_schmidt_extend(set.kernels, d, canonical);
        if (!full) fail(ErrorKind::Training, "fit_saab: basis completion failed");
        set.completed = true;
    }
    // The DC direction always absorbs one zero eigenvalue, so a clean fit has
    // residual rank d−1; anything lower means degenerate input.
    set.completed = set.completed || detail::spectrum_rank(values) < d - 1;
    return set;
}

/// Standard PCA over C-dimensional response vectors (`count` flattened rows):
/// stores the ensemble mean and the orthonormal component matrix.
inline ChannelPcaSet fit_channel_pca(const double* responses, std::size_t count, int channels) {
    if (channels < 1) fail(ErrorKind::Parameter, "fit_channel_pca: channels must be >= 1");
    const int d = channels;
    if (count < static_cast<std::size_t>(d))
        fail(ErrorKind::Training, "fit_channel_pca: need at least C response vectors");

    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (std::size_t w = 0; w < count; ++w) {
        Eigen::Map<const Eigen::VectorXd> x(responses + w * d, d);
        second.noalias() += x * x.transpose();
        sum += x;
    }
    const double inv_n = 1.0 / static_cast<double>(count);
    const Eigen::VectorXd mu = sum * inv_n;
    const Eigen::MatrixXd cov = second * inv_n - mu * mu.transpose();

    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    detail::eigen_descending(cov, values, vectors);

    ChannelPcaSet set;
    set.channels = d;
    set.mean.assign(mu.data(), mu.data() + d);
    set.matrix.reserve(static_cast<std::size_t>(d) * d);
    bool full = detail::gram_schmidt_extend(set.matrix, d, vectors);
    if (!full) {
        std::vector<std::vector<double>> canonical(d, std::vector<double>(d, 0.0));
        for (int i = 0; i < d; ++i) canonical[i][i] = 1.0;
        full = detail::gram_schmidt_extend(set.matrix, d, canonical);
        if (!full) fail(ErrorKind::Training, "fit_channel_pca: basis completion failed");
        set.completed = true;
    }
    set.completed = set.completed || detail::spectrum_rank(values) < d;
    return set;
}

/// Projects one C-vector of filter responses through the channel PCA.
inline void apply_channel_pca(const ChannelPcaSet& pca, const double* response, double* out) {
    const int d = pca.channels;
    for (int k = 0; k < d; ++k) {
        const double* row = pca.row(k);
        double acc = 0;
        for (int i = 0; i < d; ++i) acc += row[i] * (response[i] - pca.mean[i]);
        out[k] = acc;
    }
}

}  // namespace lsr
