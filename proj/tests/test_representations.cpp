#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lsr/representations.hpp"

using lsr::kPatchArea;
using lsr::kPatchSide;
using lsr::YImage;

namespace {

std::array<double, kPatchArea> random_patch(unsigned seed) {
    std::array<double, kPatchArea> p;
    std::mt19937_64 rng(seed);
    for (double& v : p) v = 255.0 * lsr::uniform_real01(rng);
    return p;
}

std::vector<double> random_windows(std::size_t count, int n, unsigned seed) {
    std::vector<double> w(count * n * n);
    std::mt19937_64 rng(seed);
    for (double& v : w) v = 255.0 * lsr::uniform_real01(rng);
    return w;
}

// Independent per-position reference: extract the window as a flat vector and
// multiply by the kernel matrix row by row.
std::vector<double> matmul_window(const std::array<double, kPatchArea>& patch, int top, int left,
                                  const lsr::SaabKernelSet& set) {
    const int n = set.window, d = n * n;
    std::vector<double> win(d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) win[i * n + j] = patch[(top + i) * kPatchSide + left + j];
    std::vector<double> out(d, 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) out[k] += set.kernels[k * d + i] * win[i];
    return out;
}

void check_orthonormal(const std::vector<double>& m, int d, double tol = 1e-9) {
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            double dot = 0;
            for (int i = 0; i < d; ++i) dot += m[a * d + i] * m[b * d + i];
            CHECK_THAT(dot, Catch::Matchers::WithinAbs(a == b ? 1.0 : 0.0, tol));
        }
}

}  // namespace

TEST_CASE("fit_saab") {
    SECTION("constant windows: DC = n*mean, AC = 0, flagged degenerate") {
        for (int n : {2, 3}) {
            const int d = n * n;
            std::vector<double> windows(static_cast<std::size_t>(d + 3) * d);
            for (int w = 0; w < d + 3; ++w)
                for (int i = 0; i < d; ++i) windows[w * d + i] = 10.0 * (w + 1);
            auto set = lsr::fit_saab(windows.data(), d + 3, n);
            CHECK(set.completed);
            check_orthonormal(set.kernels, d);
            for (int w = 0; w < d + 3; ++w) {
                const double mean = 10.0 * (w + 1);
                double dc = 0;
                for (int i = 0; i < d; ++i) dc += set.row(0)[i] * windows[w * d + i];
                CHECK_THAT(dc, Catch::Matchers::WithinAbs(n * mean, 1e-9));
                for (int k = 1; k < d; ++k) {
                    double ac = 0;
                    for (int i = 0; i < d; ++i) ac += set.row(k)[i] * windows[w * d + i];
                    CHECK_THAT(ac, Catch::Matchers::WithinAbs(0.0, 1e-9));
                }
            }
        }
    }
    SECTION("2x2 windows with distinct closed-form spectrum") {
        // Orthonormal directions in the DC-complement with amplitudes chosen
        // so the residual covariance has eigenpairs (1, v1), (0.5, v2),
        // (0.25, v3).
        const double v1[4] = {0.5, -0.5, 0.5, -0.5};
        const double v2[4] = {0.5, 0.5, -0.5, -0.5};
        const double v3[4] = {0.5, -0.5, -0.5, 0.5};
        const double amp[3] = {std::sqrt(3.0), std::sqrt(1.5), std::sqrt(0.75)};
        std::vector<double> windows;
        for (int k = 0; k < 3; ++k) {
            const double* v = k == 0 ? v1 : (k == 1 ? v2 : v3);
            for (double sign : {1.0, -1.0})
                for (int i = 0; i < 4; ++i) windows.push_back(sign * amp[k] * v[i]);
        }
        auto set = lsr::fit_saab(windows.data(), 6, 2);
        CHECK_FALSE(set.completed);
        for (int i = 0; i < 4; ++i) {
            CHECK_THAT(set.row(0)[i], Catch::Matchers::WithinAbs(0.5, 1e-12));
            CHECK_THAT(set.row(1)[i], Catch::Matchers::WithinAbs(v1[i], 1e-9));
            CHECK_THAT(set.row(2)[i], Catch::Matchers::WithinAbs(v2[i], 1e-9));
            CHECK_THAT(set.row(3)[i], Catch::Matchers::WithinAbs(v3[i], 1e-9));
        }
    }
    SECTION("axis-aligned unit-vector pairs span the DC-complement") {
        std::vector<double> windows;
        for (int i = 0; i < 4; ++i)
            for (double sign : {1.0, -1.0})
                for (int j = 0; j < 4; ++j) windows.push_back(i == j ? sign : 0.0);
        auto set = lsr::fit_saab(windows.data(), 8, 2);
        check_orthonormal(set.kernels, 4);
        // All three AC eigenvalues equal 1/4, so individual eigenvectors are
        // not unique; the reconstructed AC projector is.
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double proj = 0;
                for (int k = 1; k < 4; ++k) proj += set.row(k)[a] * set.row(k)[b];
                const double want = (a == b ? 1.0 : 0.0) - 0.25;
                CHECK_THAT(proj, Catch::Matchers::WithinAbs(want, 1e-9));
            }
    }
    SECTION("random windows: orthonormal, energy-preserving, variance-ordered") {
        auto windows = random_windows(400, 5, 17);
        auto set = lsr::fit_saab(windows.data(), 400, 5);
        CHECK_FALSE(set.completed);
        check_orthonormal(set.kernels, 25);
        // energy conservation per window
        for (int w = 0; w < 10; ++w) {
            const double* x = windows.data() + w * 25;
            double ex = 0, ec = 0;
            for (int i = 0; i < 25; ++i) ex += x[i] * x[i];
            for (int k = 0; k < 25; ++k) {
                double c = 0;
                for (int i = 0; i < 25; ++i) c += set.row(k)[i] * x[i];
                ec += c * c;
            }
            CHECK_THAT(ec, Catch::Matchers::WithinRel(ex, 1e-9));
        }
        // AC coefficient variances follow the eigenvalue order
        std::vector<double> var(25, 0.0), mean(25, 0.0);
        for (int w = 0; w < 400; ++w)
            for (int k = 0; k < 25; ++k) {
                double c = 0;
                for (int i = 0; i < 25; ++i) c += set.row(k)[i] * windows[w * 25 + i];
                mean[k] += c;
                var[k] += c * c;
            }
        for (int k = 0; k < 25; ++k) var[k] = var[k] / 400 - (mean[k] / 400) * (mean[k] / 400);
        for (int k = 2; k < 25; ++k) CHECK(var[k] <= var[k - 1] * (1 + 1e-9) + 1e-9);
    }
    SECTION("deterministic refit") {
        auto windows = random_windows(100, 3, 29);
        auto a = lsr::fit_saab(windows.data(), 100, 3);
        auto b = lsr::fit_saab(windows.data(), 100, 3);
        CHECK(a.kernels == b.kernels);
    }
    SECTION("too few windows rejected") {
        auto windows = random_windows(8, 3, 31);
        CHECK_THROWS_AS(lsr::fit_saab(windows.data(), 8, 3), lsr::Error);
    }
}

TEST_CASE("fit_channel_pca") {
    SECTION("known diagonal covariance gives axis components") {
        // points (±2, 0) and (0, ±sqrt 2): covariance diag(2, 1)
        const double s = std::sqrt(2.0);
        std::vector<double> resp{2, 0, -2, 0, 0, s, 0, -s};
        auto set = lsr::fit_channel_pca(resp.data(), 4, 2);
        CHECK_FALSE(set.completed);
        CHECK_THAT(set.mean[0], Catch::Matchers::WithinAbs(0.0, 1e-12));
        CHECK_THAT(set.mean[1], Catch::Matchers::WithinAbs(0.0, 1e-12));
        CHECK_THAT(set.matrix[0], Catch::Matchers::WithinAbs(1.0, 1e-9));
        CHECK_THAT(set.matrix[1], Catch::Matchers::WithinAbs(0.0, 1e-9));
        CHECK_THAT(set.matrix[2], Catch::Matchers::WithinAbs(0.0, 1e-9));
        CHECK_THAT(set.matrix[3], Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
    SECTION("identical responses: zero projections, flagged degenerate") {
        std::vector<double> resp;
        for (int i = 0; i < 12; ++i) {
            resp.push_back(3.0);
            resp.push_back(-7.0);
            resp.push_back(0.5);
        }
        auto set = lsr::fit_channel_pca(resp.data(), 12, 3);
        CHECK(set.completed);
        check_orthonormal(set.matrix, 3);
        double out[3];
        const double x[3] = {3.0, -7.0, 0.5};
        lsr::apply_channel_pca(set, x, out);
        for (double v : out) CHECK_THAT(v, Catch::Matchers::WithinAbs(0.0, 1e-9));
    }
    SECTION("random responses orthonormal") {
        auto resp = random_windows(200, 3, 37);  // 200 9-vectors
        auto set = lsr::fit_channel_pca(resp.data(), 200, 9);
        check_orthonormal(set.matrix, 9);
    }
}

TEST_CASE("apply_central_saab") {
    auto windows5 = random_windows(300, 5, 41);
    auto windows7 = random_windows(300, 7, 43);
    auto k5 = lsr::fit_saab(windows5.data(), 300, 5);
    auto k7 = lsr::fit_saab(windows7.data(), 300, 7);

    SECTION("constant patch: DC = n*v, AC = 0") {
        std::array<double, kPatchArea> p;
        p.fill(20.0);
        double out[74];
        lsr::apply_central_saab(p.data(), k5, k7, out);
        CHECK_THAT(out[0], Catch::Matchers::WithinAbs(100.0, 1e-9));
        CHECK_THAT(out[25], Catch::Matchers::WithinAbs(140.0, 1e-9));
        for (int k = 1; k < 25; ++k) CHECK_THAT(out[k], Catch::Matchers::WithinAbs(0.0, 1e-9));
        for (int k = 26; k < 74; ++k) CHECK_THAT(out[k], Catch::Matchers::WithinAbs(0.0, 1e-9));
    }
    SECTION("zero patch: all zero") {
        std::array<double, kPatchArea> p{};
        double out[74];
        lsr::apply_central_saab(p.data(), k5, k7, out);
        for (double v : out) CHECK(v == 0.0);
    }
    SECTION("random patch matches the matmul reference") {
        auto p = random_patch(47);
        double out[74];
        lsr::apply_central_saab(p.data(), k5, k7, out);
        auto ref5 = matmul_window(p, 5, 5, k5);
        auto ref7 = matmul_window(p, 4, 4, k7);
        for (int k = 0; k < 25; ++k)
            CHECK_THAT(out[k], Catch::Matchers::WithinAbs(ref5[k], 1e-10));
        for (int k = 0; k < 49; ++k)
            CHECK_THAT(out[25 + k], Catch::Matchers::WithinAbs(ref7[k], 1e-10));
    }
    SECTION("energy conservation on the 5x5 window") {
        auto p = random_patch(53);
        double out[74];
        lsr::apply_central_saab(p.data(), k5, k7, out);
        double ec = 0, ex = 0;
        for (int k = 0; k < 25; ++k) ec += out[k] * out[k];
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                const double v = p[(5 + i) * kPatchSide + 5 + j];
                ex += v * v;
            }
        CHECK_THAT(ec, Catch::Matchers::WithinRel(ex, 1e-6));
    }
    SECTION("unfitted transform rejected") {
        auto p = random_patch(59);
        double out[74];
        lsr::SaabKernelSet empty;
        CHECK_THROWS_AS(lsr::apply_central_saab(p.data(), empty, k7, out), lsr::Error);
    }
}

TEST_CASE("apply_ringwise_saab") {
    auto windows3 = random_windows(300, 3, 61);
    auto k3 = lsr::fit_saab(windows3.data(), 300, 3);

    SECTION("geometry: 33 positions, central block first, hole at (6,6)") {
        const auto& pos = lsr::geom::type3_positions();
        REQUIRE(pos.size() == 33);
        CHECK(pos[0] == std::pair{5, 5});
        CHECK(pos[8] == std::pair{7, 7});
        for (std::size_t i = 9; i < 33; ++i) {
            CHECK(pos[i].first % 3 == 0);
            CHECK(pos[i].second % 3 == 0);
            CHECK(pos[i] != std::pair{6, 6});
        }
    }
    SECTION("constant patch: DC = 3v at every position, AC = 0") {
        std::array<double, kPatchArea> p;
        p.fill(9.0);
        double out[297];
        lsr::apply_ringwise_saab(p.data(), k3, out);
        for (int pos = 0; pos < 33; ++pos) {
            CHECK_THAT(out[pos * 9], Catch::Matchers::WithinAbs(27.0, 1e-9));
            for (int k = 1; k < 9; ++k)
                CHECK_THAT(out[pos * 9 + k], Catch::Matchers::WithinAbs(0.0, 1e-9));
        }
    }
    SECTION("zero patch: 297 zeros") {
        std::array<double, kPatchArea> p{};
        double out[297];
        lsr::apply_ringwise_saab(p.data(), k3, out);
        for (double v : out) CHECK(v == 0.0);
    }
    SECTION("ramp patch matches per-position matmul reference") {
        std::array<double, kPatchArea> p;
        for (int r = 0; r < 15; ++r)
            for (int c = 0; c < 15; ++c) p[r * 15 + c] = 2.0 * r + 3.0 * c + 0.5;
        double out[297];
        lsr::apply_ringwise_saab(p.data(), k3, out);
        const auto& pos = lsr::geom::type3_positions();
        for (std::size_t i = 0; i < pos.size(); ++i) {
            auto ref = matmul_window(p, pos[i].first, pos[i].second, k3);
            for (int k = 0; k < 9; ++k)
                CHECK_THAT(out[i * 9 + k], Catch::Matchers::WithinAbs(ref[k], 1e-10));
        }
    }
}

TEST_CASE("apply_type4") {
    SECTION("geometry: 49 stride-2 positions") {
        REQUIRE(lsr::geom::type4_positions().size() == 49);
        CHECK(lsr::geom::type4_positions().front() == std::pair{0, 0});
        CHECK(lsr::geom::type4_positions().back() == std::pair{12, 12});
    }
    SECTION("constant patch: LL = 2v, others 0") {
        // zero-mean PCA fit so the projections of a constant response stay
        // interpretable
        std::vector<double> resp;
        for (double a : {1.0, -1.0})
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) resp.push_back(i == j ? a * (i + 1) : 0.0);
        auto pca4 = lsr::fit_channel_pca(resp.data(), 8, 4);
        std::array<double, kPatchArea> p;
        p.fill(100.0);
        std::vector<double> out(392);
        lsr::apply_type4(p.data(), pca4, out.data());
        for (int pos = 0; pos < 49; ++pos) {
            CHECK(out[pos * 8 + 0] == 200.0);  // LL on a constant
            CHECK(out[pos * 8 + 1] == 0.0);
            CHECK(out[pos * 8 + 2] == 0.0);
            CHECK(out[pos * 8 + 3] == 0.0);
        }
    }
    SECTION("zero patch with zero-mean fit: all 392 zero") {
        std::vector<double> resp;
        for (double a : {2.0, -2.0, 5.0, -5.0})
            for (int i = 0; i < 4; ++i) resp.push_back(a * (i == 1 ? 1.0 : 0.25));
        auto pca4 = lsr::fit_channel_pca(resp.data(), 4, 4);
        for (double m : pca4.mean) REQUIRE(m == 0.0);
        std::array<double, kPatchArea> p{};
        std::vector<double> out(392);
        lsr::apply_type4(p.data(), pca4, out.data());
        for (double v : out) CHECK(v == 0.0);
    }
    SECTION("random patch matches filter-then-project reference") {
        auto fitp = random_windows(50, 15, 67);  // treat as 50 flat patches
        std::vector<double> resp;
        const auto& filters = lsr::geom::haar_filters();
        for (int s = 0; s < 50; ++s)
            for (const auto& [r, c] : lsr::geom::type4_positions())
                for (int f = 0; f < 4; ++f)
                    resp.push_back(lsr::window_dot(fitp.data() + s * kPatchArea, kPatchSide, r, c,
                                                   filters[f].data(), 2));
        auto pca4 = lsr::fit_channel_pca(resp.data(), resp.size() / 4, 4);

        auto p = random_patch(71);
        std::vector<double> out(392);
        lsr::apply_type4(p.data(), pca4, out.data());
        std::size_t o = 0;
        for (const auto& [r, c] : lsr::geom::type4_positions()) {
            double ref[4];
            for (int f = 0; f < 4; ++f) {
                ref[f] = 0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        ref[f] += filters[f][i * 2 + j] * p[(r + i) * kPatchSide + c + j];
            }
            for (int f = 0; f < 4; ++f)
                CHECK_THAT(out[o + f], Catch::Matchers::WithinAbs(ref[f], 1e-10));
            for (int k = 0; k < 4; ++k) {
                double proj = 0;
                for (int i = 0; i < 4; ++i)
                    proj += pca4.matrix[k * 4 + i] * (ref[i] - pca4.mean[i]);
                CHECK_THAT(out[o + 4 + k], Catch::Matchers::WithinAbs(proj, 1e-10));
            }
            o += 8;
        }
    }
}

TEST_CASE("apply_type5") {
    SECTION("filters: nine unit-norm kernels, zero-sum except the first") {
        const auto& f = lsr::geom::laws_filters();
        for (int k = 0; k < 9; ++k) {
            double norm2 = 0, sum = 0;
            for (double t : f[k]) {
                norm2 += t * t;
                sum += t;
            }
            CHECK_THAT(norm2, Catch::Matchers::WithinAbs(1.0, 1e-12));
            if (k == 0)
                CHECK_THAT(sum, Catch::Matchers::WithinAbs(16.0 / 6.0, 1e-12));
            else
                CHECK_THAT(sum, Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }
    SECTION("geometry: 25 stride-3 positions") {
        REQUIRE(lsr::geom::type5_positions().size() == 25);
    }
    SECTION("constant patch: only the smoothing filter responds") {
        std::vector<double> resp;  // zero-mean 9-channel fit data
        std::mt19937_64 rng(73);
        for (int s = 0; s < 60; ++s) {
            std::array<double, 9> v;
            for (double& x : v) x = lsr::uniform_real01(rng) - 0.5;
            for (double x : v) resp.push_back(x);
            for (double x : v) resp.push_back(-x);
        }
        auto pca9 = lsr::fit_channel_pca(resp.data(), 120, 9);
        std::array<double, kPatchArea> p;
        p.fill(30.0);
        std::vector<double> out(450);
        lsr::apply_type5(p.data(), pca9, out.data());
        for (int pos = 0; pos < 25; ++pos) {
            CHECK_THAT(out[pos * 18], Catch::Matchers::WithinAbs(30.0 * 16.0 / 6.0, 1e-9));
            // zero-sum filters cancel exactly on constants (separable form)
            for (int k = 1; k < 9; ++k) CHECK(out[pos * 18 + k] == 0.0);
        }
    }
    SECTION("zero patch: all raw responses 0") {
        auto fit = random_windows(20, 3, 79);  // 9-vectors
        auto pca9 = lsr::fit_channel_pca(fit.data(), 20, 9);
        std::array<double, kPatchArea> p{};
        std::vector<double> out(450);
        lsr::apply_type5(p.data(), pca9, out.data());
        for (int pos = 0; pos < 25; ++pos)
            for (int k = 0; k < 9; ++k) CHECK(out[pos * 18 + k] == 0.0);
    }
    SECTION("random patch matches filter-then-project reference") {
        auto fit = random_windows(40, 3, 83);
        auto pca9 = lsr::fit_channel_pca(fit.data(), 40, 9);
        auto p = random_patch(89);
        std::vector<double> out(450);
        lsr::apply_type5(p.data(), pca9, out.data());
        const auto& filters = lsr::geom::laws_filters();
        std::size_t o = 0;
        for (const auto& [r, c] : lsr::geom::type5_positions()) {
            double ref[9];
            for (int f = 0; f < 9; ++f) {
                ref[f] = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        ref[f] += filters[f][i * 3 + j] * p[(r + i) * kPatchSide + c + j];
            }
            for (int f = 0; f < 9; ++f)
                CHECK_THAT(out[o + f], Catch::Matchers::WithinAbs(ref[f], 1e-10));
            for (int k = 0; k < 9; ++k) {
                double proj = 0;
                for (int i = 0; i < 9; ++i)
                    proj += pca9.matrix[k * 9 + i] * (ref[i] - pca9.mean[i]);
                CHECK_THAT(out[o + 9 + k], Catch::Matchers::WithinAbs(proj, 1e-10));
            }
            o += 18;
        }
    }
}

TEST_CASE("build_pool") {
    lsr::ImagePair pair;
    pair.ilr = YImage(24, 20);
    pair.hr = pair.ilr;
    std::mt19937_64 rng(97);
    for (double& v : pair.ilr.data) v = 255.0 * lsr::uniform_real01(rng);
    pair.hr = pair.ilr;
    auto ds = lsr::extract_samples(pair, 1, false);

    SECTION("pool widths") {
        CHECK(lsr::RepresentationSpec::from_types({1, 2, 3, 4, 5}).pool_width() == 1438);
        CHECK(lsr::RepresentationSpec::from_types({1, 3}).pool_width() == 522);
        CHECK(lsr::RepresentationSpec::from_types({5}).pool_width() == 450);
        CHECK_THROWS_AS(lsr::RepresentationSpec::from_types({0}), lsr::Error);
        CHECK_THROWS_AS(lsr::RepresentationSpec::from_types({6}), lsr::Error);
    }
    SECTION("type-1-only pool is the raw patch") {
        auto spec = lsr::RepresentationSpec::from_types({1});
        lsr::Transforms none;
        auto pool = lsr::build_pool(ds.samples[37], spec, none);
        REQUIRE(pool.size() == 225);
        for (int i = 0; i < 225; ++i) CHECK(pool[i] == ds.samples[37].patch15[i]);
    }
    SECTION("missing transform raises a config error") {
        auto spec = lsr::RepresentationSpec::from_types({1, 2});
        lsr::Transforms none;
        CHECK_THROWS_AS(lsr::build_pool(ds.samples[0], spec, none), lsr::Error);
        try {
            lsr::build_pool(ds.samples[0], spec, none);
        } catch (const lsr::Error& e) {
            CHECK(e.kind() == lsr::ErrorKind::Config);
        }
    }
    SECTION("whole-image maps gather bit-identically to per-patch pools") {
        auto spec = lsr::RepresentationSpec::from_types({1, 2, 3, 4, 5});
        auto tf = lsr::fit_transforms(ds.samples, spec);
        auto maps = lsr::compute_feature_maps(pair.ilr, spec, tf);
        std::vector<double> gathered(spec.pool_width());
        std::size_t mismatches = 0;
        for (const auto& s : ds.samples) {
            auto pool = lsr::build_pool(s, spec, tf);
            maps.gather(s.row, s.col, gathered.data());
            for (int i = 0; i < spec.pool_width(); ++i)
                mismatches += (pool[static_cast<std::size_t>(i)] != gathered[static_cast<std::size_t>(i)]);
        }
        CHECK(mismatches == 0);
    }
    SECTION("feature maps are identical across thread counts") {
        auto spec = lsr::RepresentationSpec::from_types({1, 2, 3, 4, 5});
        auto tf = lsr::fit_transforms(ds.samples, spec);
        auto m1 = lsr::compute_feature_maps(pair.ilr, spec, tf, 1);
        auto m3 = lsr::compute_feature_maps(pair.ilr, spec, tf, 3);
        for (int k = 0; k < 25; ++k) REQUIRE(m1.c5[k].data == m3.c5[k].data);
        for (int k = 0; k < 49; ++k) REQUIRE(m1.c7[k].data == m3.c7[k].data);
        for (int k = 0; k < 9; ++k) REQUIRE(m1.c3[k].data == m3.c3[k].data);
        for (int k = 0; k < 4; ++k) {
            REQUIRE(m1.h4[k].data == m3.h4[k].data);
            REQUIRE(m1.p4[k].data == m3.p4[k].data);
        }
        for (int k = 0; k < 9; ++k) {
            REQUIRE(m1.l5[k].data == m3.l5[k].data);
            REQUIRE(m1.p5[k].data == m3.p5[k].data);
        }
    }
    SECTION("easy-branch subset pools use only their own transforms") {
        auto spec = lsr::RepresentationSpec::from_types({1, 3});
        auto tf = lsr::fit_transforms(ds.samples, spec);
        CHECK(tf.k5.window == 0);  // type 2 not requested, not fitted
        auto pool = lsr::build_pool(ds.samples[11], spec, tf);
        REQUIRE(pool.size() == 522);
        for (int i = 0; i < 225; ++i) REQUIRE(pool[i] == ds.samples[11].patch15[i]);
        double ring[297];
        lsr::apply_ringwise_saab(ds.samples[11].patch15.data(), tf.k3, ring);
        for (int i = 0; i < 297; ++i) REQUIRE(pool[225 + i] == ring[i]);
    }
}

TEST_CASE("feature_label") {
    auto full = lsr::RepresentationSpec::from_types({1, 2, 3, 4, 5});
    CHECK(lsr::feature_label(full, 0) == "type1.pixel[0,0]");
    CHECK(lsr::feature_label(full, 224) == "type1.pixel[14,14]");
    CHECK(lsr::feature_label(full, 225) == "type2.w5.c0");
    CHECK(lsr::feature_label(full, 250) == "type2.w7.c0");
    CHECK(lsr::feature_label(full, 299) == "type3.pos0.c0");
    CHECK(lsr::feature_label(full, 596) == "type4.pos0.LL");
    CHECK(lsr::feature_label(full, 600) == "type4.pos0.p0");
    CHECK(lsr::feature_label(full, 988) == "type5.pos0.raw0");
    CHECK(lsr::feature_label(full, 1437) == "type5.pos24.p8");
    CHECK_THROWS_AS(lsr::feature_label(full, 1438), lsr::Error);

    auto easy = lsr::RepresentationSpec::from_types({1, 3});
    CHECK(lsr::feature_label(easy, 225) == "type3.pos0.c0");
}
