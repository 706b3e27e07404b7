#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "lsr/model.hpp"
#include "lsr/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace lsr;

namespace {

// Small, fast configuration for end-to-end exercises: a handful of shallow
// trees per branch, two clusters, tiny sample caps.
RunConfig tiny_config() {
    RunConfig cfg = RunConfig::defaults(Variant::V1);
    cfg.easy_features = 8;
    cfg.hard_features = 16;
    cfg.easy_trees = 6;
    cfg.hard_trees = 10;
    cfg.max_depth = 3;
    cfg.clusters = 2;
    cfg.fusion = 2;
    cfg.max_base_easy = 600;
    cfg.max_base_hard = 600;
    cfg.max_rft_samples = 1200;
    cfg.max_fit_patches = 1200;
    cfg.train_stride = 3;
    return cfg;
}

std::vector<YImage> tiny_corpus() {
    synth::SceneOptions opt;
    opt.height = 72;
    opt.width = 96;
    return synth::scene_set(7, 4, opt);
}

LsrModel tiny_model() {
    static const LsrModel model = train_lsr(tiny_corpus(), tiny_config());
    return model;
}

auto has_kind(ErrorKind k) {
    return Catch::Matchers::Predicate<Error>([k](const Error& e) { return e.kind() == k; },
                                             "error kind matches");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::array<double, kPatchArea> random_patch(std::mt19937_64& rng, double amp) {
    std::uniform_real_distribution<double> u(-amp, amp);
    std::array<double, kPatchArea> p;
    for (double& v : p) v = 120.0 + u(rng);
    return p;
}

}  // namespace

TEST_CASE("training pair geometry") {
    YImage src(45, 63);
    for (int r = 0; r < 45; ++r)
        for (int c = 0; c < 63; ++c) src.at(r, c) = (r * 3 + c) % 251;
    const ImagePair pair = make_training_pair(src, 2);
    CHECK(pair.hr.height == 44);
    CHECK(pair.hr.width == 62);
    CHECK(pair.lr.height == 22);
    CHECK(pair.lr.width == 31);
    CHECK(pair.ilr.height == pair.hr.height);
    CHECK(pair.ilr.width == pair.hr.width);
    // modcrop keeps the top-left corner untouched
    CHECK(pair.hr.at(0, 0) == src.at(0, 0));
    CHECK(pair.hr.at(43, 61) == src.at(43, 61));
}

TEST_CASE("evenly spaced subsampling") {
    using lsr::detail::spaced_indices;
    for (std::size_t total : {1u, 2u, 7u, 100u, 1013u})
        for (std::size_t cap : {1u, 2u, 3u, 50u, 100u, 5000u}) {
            const auto idx = spaced_indices(total, cap);
            REQUIRE(idx.size() == std::min(total, cap));
            CHECK(idx.front() == 0);
            CHECK(idx.back() < total);
            for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
            if (total <= cap)
                for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx[i] == i);
        }
}

TEST_CASE("run configuration defaults and overrides") {
    const RunConfig v1 = RunConfig::defaults(Variant::V1);
    CHECK(v1.scale == 2);
    CHECK(v1.variance_threshold == 180.0);
    CHECK(v1.easy_features == 105);
    CHECK(v1.hard_features == 374);
    CHECK(v1.easy_trees == 50);
    CHECK(v1.hard_trees == 500);
    CHECK(v1.clusters == 8);
    CHECK(v1.fusion == 2);
    CHECK(v1.hard_spec().pool_width() == 1438);
    CHECK(v1.easy_spec().pool_width() == 522);

    const RunConfig v2 = RunConfig::defaults(Variant::V2);
    CHECK(v2.hard_features == 135);
    CHECK(v2.hard_spec().pool_width() == 450);

    SECTION("switching the variant re-derives the dependent default") {
        RunConfig cfg = RunConfig::defaults(Variant::V1);
        apply_setting(cfg, "variant", "v2");
        CHECK(cfg.variant == Variant::V2);
        CHECK(cfg.hard_features == 135);

        // an explicit override must survive a later variant switch
        RunConfig pinned = RunConfig::defaults(Variant::V1);
        apply_setting(pinned, "hard_features", "200");
        apply_setting(pinned, "variant", "v2");
        CHECK(pinned.hard_features == 200);
    }

    SECTION("unknown keys and malformed values are configuration errors") {
        RunConfig cfg = RunConfig::defaults(Variant::V1);
        CHECK_THROWS_MATCHES(apply_setting(cfg, "no_such_knob", "1"), Error,
                             has_kind(ErrorKind::Config));
        CHECK_THROWS_MATCHES(apply_setting(cfg, "hard_trees", "many"), Error,
                             has_kind(ErrorKind::Config));
    }

    SECTION("config text: comments, blanks, and located errors") {
        RunConfig cfg = RunConfig::defaults(Variant::V1);
        std::istringstream ok("# comment\n\n  hard_trees = 40 \nclusters=4\n");
        apply_config_text(cfg, ok, "inline");
        CHECK(cfg.hard_trees == 40);
        CHECK(cfg.clusters == 4);

        std::istringstream bad("seed=1\nbogus line without equals\n");
        try {
            apply_config_text(cfg, bad, "snippet.cfg");
            FAIL("expected a configuration error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Config);
            CHECK(std::string(e.what()).find("snippet.cfg:2") != std::string::npos);
        }
    }

    SECTION("validation rejects out-of-range settings") {
        auto rejects = [](auto&& mutate) {
            RunConfig cfg = RunConfig::defaults(Variant::V1);
            mutate(cfg);
            CHECK_THROWS_MATCHES(cfg.validate(), Error,
                                 has_kind(ErrorKind::Config));
        };
        rejects([](RunConfig& c) { c.scale = 3; });
        rejects([](RunConfig& c) { c.fusion = 3; });
        rejects([](RunConfig& c) { c.easy_features = 0; });
        rejects([](RunConfig& c) { c.hard_features = 9999; });
        rejects([](RunConfig& c) { c.variance_threshold = -1.0; });
        rejects([](RunConfig& c) { c.max_rft_samples = 1; });
        rejects([](RunConfig& c) { c.max_base_hard = 0; });
        rejects([](RunConfig& c) { c.clusters = 0; });
    }

    SECTION("manifest round trip") {
        RunConfig cfg = RunConfig::defaults(Variant::V2);
        cfg.hard_trees = 123;
        cfg.seed = 42;
        cfg.elbow = true;
        RunConfig replay = RunConfig::defaults(Variant::V1);
        std::istringstream manifest(config_manifest(cfg));
        apply_config_text(replay, manifest, "manifest");
        CHECK(config_manifest(replay) == config_manifest(cfg));
    }
}

TEST_CASE("dihedral transforms preserve variance and hardness") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_patch(rng, trial % 2 ? 40.0 : 5.0);
        const double v0 = patch_variance(p);
        for (int mode = 0; mode < kDihedralModes; ++mode) {
            const auto q = dihedral(p, mode);
            CHECK(patch_variance(q) == v0);  // exact: summation in sorted order
            CHECK(classify_hardness(patch_variance(q)) == classify_hardness(v0));
        }
        // center pixel is a fixed point of every mode
        for (int mode = 0; mode < kDihedralModes; ++mode)
            CHECK(dihedral(p, mode)[7 * kPatchSide + 7] == p[7 * kPatchSide + 7]);
    }
}

TEST_CASE("decision trees are piecewise constant between thresholds") {
    GbtRegressor reg;
    reg.base_score = 0.25;
    reg.learning_rate = 0.5;
    reg.max_depth = 1;
    GbtTree tree;
    tree.nodes.resize(3);
    tree.nodes[0].feature = 0;
    tree.nodes[0].threshold = 0.5;
    tree.nodes[0].left = 1;
    tree.nodes[0].right = 2;
    tree.nodes[1].weight = -1.0;
    tree.nodes[2].weight = 3.0;
    reg.trees.push_back(tree);

    const double lo = 0.25 + 0.5 * -1.0;
    const double hi = 0.25 + 0.5 * 3.0;
    for (double x : {-5.0, 0.0, 0.4999, 0.5}) CHECK(gbt_predict(reg, &x) == lo);
    for (double x : {0.5001, 0.7, 99.0}) CHECK(gbt_predict(reg, &x) == hi);
}

TEST_CASE("model serialization") {
    const LsrModel model = tiny_model();
    const auto path = temp_file("lsr_roundtrip.model");
    save_model(path.string(), model);
    const LsrModel loaded = load_model(path.string());

    SECTION("re-saving the loaded model is byte-identical") {
        const auto path2 = temp_file("lsr_roundtrip2.model");
        save_model(path2.string(), loaded);
        const bool identical = slurp(path) == slurp(path2);
        CHECK(identical);
    }

    SECTION("loaded model predicts identically") {
        CHECK(loaded.manifest == model.manifest);
        CHECK(loaded.variance_threshold == model.variance_threshold);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 25; ++i) {
            const auto p = random_patch(rng, i % 2 ? 45.0 : 4.0);
            PatchSample s;
            s.patch15 = p;
            s.variance = patch_variance(p);
            CHECK(predict_residual(loaded, s) == predict_residual(model, s));
        }
    }

    SECTION("corrupt inputs are data errors, missing files are I/O errors") {
        auto kind_of = [](const std::string& p) -> ErrorKind {
            try {
                (void)load_model(p);
                FAIL("expected load_model to reject " + p);
            } catch (const Error& e) {
                return e.kind();
            }
            return ErrorKind::Parameter;  // unreachable
        };
        CHECK(kind_of((temp_file("lsr_missing.model")).string()) == ErrorKind::Io);

        std::string bytes = slurp(path);
        const auto bad = temp_file("lsr_bad.model");
        {
            std::string t = bytes;
            t[0] = 'X';  // magic
            std::ofstream(bad, std::ios::binary).write(t.data(), static_cast<long>(t.size()));
        }
        CHECK(kind_of(bad.string()) == ErrorKind::Data);
        {
            std::string t = bytes.substr(0, bytes.size() / 2);  // truncation
            std::ofstream(bad, std::ios::binary).write(t.data(), static_cast<long>(t.size()));
        }
        CHECK(kind_of(bad.string()) == ErrorKind::Data);
    }
}

TEST_CASE("model validation catches structural corruption") {
    auto expect_data_error = [](LsrModel m) {
        CHECK_THROWS_MATCHES(validate_model(m), Error,
                             has_kind(ErrorKind::Data));
    };
    const LsrModel good = tiny_model();
    CHECK_NOTHROW(validate_model(good));

    LsrModel m = good;
    m.hard.fusion = 3;
    expect_data_error(m);

    m = good;
    m.hard.regressors.pop_back();
    expect_data_error(m);

    m = good;
    m.easy.selected_ids[0] = m.easy.spec.pool_width();
    expect_data_error(m);

    m = good;
    REQUIRE(!m.hard.regressors[0].trees.empty());
    m.hard.regressors[0].trees[0].nodes[0].feature = 10000;
    expect_data_error(m);
}

TEST_CASE("training is deterministic for a fixed seed and any thread count") {
    const auto corpus = tiny_corpus();
    RunConfig cfg = tiny_config();
    cfg.threads = 1;
    const LsrModel a = train_lsr(corpus, cfg);
    cfg.threads = 3;
    const LsrModel b = train_lsr(corpus, cfg);

    const auto pa = temp_file("lsr_det_a.model");
    const auto pb = temp_file("lsr_det_b.model");
    save_model(pa.string(), a);
    save_model(pb.string(), b);
    const bool identical = slurp(pa) == slurp(pb);
    CHECK(identical);
}

TEST_CASE("super-resolution output decomposes exactly") {
    const LsrModel model = tiny_model();
    synth::SceneOptions opt;
    opt.height = 61;
    opt.width = 83;
    const YImage scene = synth::textured_scene(99, opt);
    const YImage lr = bicubic_downsample(modcrop(scene, 2), 2);

    const SrOutput out = superresolve_full(model, lr);
    CHECK(out.hr.height == lr.height * 2);
    CHECK(out.hr.width == lr.width * 2);

    const YImage ilr = lanczos_upscale(lr, 2);
    for (std::size_t i = 0; i < out.hr.data.size(); ++i) {
        CHECK(out.ilr.data[i] == ilr.data[i]);
        CHECK(out.hr.data[i] == std::clamp(out.ilr.data[i] + out.residual.data[i], 0.0, 255.0));
    }
    CHECK(superresolve(model, lr).data == out.hr.data);
}

TEST_CASE("sibling fusion collapses on symmetric patches") {
    BranchModel branch = tiny_model().hard;

    // mirror-symmetric patch: the horizontal-flip sibling sees the same values
    std::array<double, kPatchArea> sym{};
    for (int r = 0; r < kPatchSide; ++r)
        for (int c = 0; c < kPatchSide; ++c)
            sym[static_cast<std::size_t>(r) * kPatchSide + c] =
                100.0 + 11.0 * std::abs(c - 7) + 3.0 * r + 0.5 * r * std::abs(c - 7);

    branch.fusion = 1;
    const double f1 = predict_branch(branch, sym);
    branch.fusion = 2;
    const double f2 = predict_branch(branch, sym);
    CHECK(f2 == f1);  // averaging two bitwise-equal siblings is exact

    // fully 4-fold-symmetric patch: all four fusion siblings coincide
    std::array<double, kPatchArea> quad{};
    for (int r = 0; r < kPatchSide; ++r)
        for (int c = 0; c < kPatchSide; ++c)
            quad[static_cast<std::size_t>(r) * kPatchSide + c] =
                90.0 + 9.0 * std::abs(r - 7) + 9.0 * std::abs(c - 7) +
                2.0 * std::abs(r - 7) * std::abs(c - 7);
    branch.fusion = 1;
    const double q1 = predict_branch(branch, quad);
    branch.fusion = 4;
    const double q4 = predict_branch(branch, quad);
    CHECK(q4 == q1);

    // asymmetric patches generally do not collapse (fusion changes the output)
    std::mt19937_64 rng(5);
    int differing = 0;
    for (int i = 0; i < 10; ++i) {
        const auto p = random_patch(rng, 50.0);
        branch.fusion = 1;
        const double a = predict_branch(branch, p);
        branch.fusion = 2;
        if (predict_branch(branch, p) != a) ++differing;
    }
    CHECK(differing > 0);
}

TEST_CASE("easy and hard branches are routed by variance") {
    LsrModel model;
    model.manifest = "synthetic";
    auto stub_branch = [](double base) {
        BranchModel b;
        b.spec = RepresentationSpec{};  // no types enabled; no features needed
        b.fusion = 1;
        b.clusters.k = 1;
        b.clusters.dim = kHogDim;
        b.clusters.centroids.assign(kHogDim, 0.0);
        b.regressors.resize(1);
        b.regressors[0].base_score = base;
        return b;
    };
    model.easy = stub_branch(1.0);
    model.hard = stub_branch(2.0);
    validate_model(model);

    PatchSample s;
    s.patch15.fill(100.0);
    s.variance = patch_variance(s.patch15);
    CHECK(s.variance == 0.0);
    CHECK(predict_residual(model, s) == 1.0);

    for (int i = 0; i < kPatchArea; ++i) s.patch15[static_cast<std::size_t>(i)] = i % 2 ? 60.0 : 180.0;
    s.variance = patch_variance(s.patch15);
    CHECK(s.variance >= model.variance_threshold);
    CHECK(predict_residual(model, s) == 2.0);
}

TEST_CASE("degenerate corpora") {
    SECTION("constant images train to a zero-residual model") {
        YImage flat(40, 40);
        for (double& v : flat.data) v = 77.0;
        RunConfig cfg = tiny_config();
        cfg.clusters = 1;
        const LsrModel model = train_lsr({flat}, cfg);
        validate_model(model);

        YImage lr(12, 12);
        for (double& v : lr.data) v = 77.0;
        const YImage sr = superresolve(model, lr);
        for (double v : sr.data) CHECK_THAT(v, Catch::Matchers::WithinAbs(77.0, 1e-9));
    }

    SECTION("no images is a training error") {
        CHECK_THROWS_MATCHES(train_lsr({}, tiny_config()), Error,
                             has_kind(ErrorKind::Training));
    }

    SECTION("fewer hard samples than clusters is a training error") {
        // an almost-flat scene with one small striped block yields a handful
        // of hard patches; with augmentation off they cannot fill 8 clusters
        YImage img(48, 48);
        for (int r = 0; r < 48; ++r)
            for (int c = 0; c < 48; ++c) img.at(r, c) = 90.0 + 0.2 * r;
        for (int r = 20; r < 28; ++r)
            for (int c = 20; c < 28; ++c)
                img.at(r, c) = 90.0 + ((c / 3) % 2 ? 80.0 : -80.0);

        RunConfig cfg = tiny_config();
        cfg.augment = false;
        cfg.train_stride = 7;
        cfg.clusters = 8;

        // precondition: between 2 (degenerate floor) and 7 hard samples
        const Dataset probe = extract_samples(make_training_pair(img, 2), cfg.train_stride, true);
        int hard = 0;
        for (const PatchSample& s : probe.samples)
            if (s.variance >= cfg.variance_threshold) ++hard;
        REQUIRE(hard >= 2);
        REQUIRE(hard < cfg.clusters);

        try {
            (void)train_lsr({img}, cfg);
            FAIL("expected a training error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Training);
        }
    }
}

TEST_CASE("trained model embeds its configuration manifest") {
    const LsrModel model = tiny_model();
    CHECK(model.manifest.find("variant=v1") != std::string::npos);
    CHECK(model.manifest.find("hard_trees=10") != std::string::npos);
    CHECK(model.manifest == config_manifest(tiny_config()));
}
