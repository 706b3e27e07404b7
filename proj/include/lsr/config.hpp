#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "lsr/common.hpp"
#include "lsr/representations.hpp"

namespace lsr {

enum class Variant : std::uint8_t { V1 = 0, V2 = 1 };

inline const char* variant_name(Variant v) { return v == Variant::V1 ? "v1" : "v2"; }

inline Variant variant_from_name(const std::string& s) {
    if (s == "V1" || s == "v1") return Variant::V1;
    if (s == "V2" || s == "v2") return Variant::V2;
    fail(ErrorKind::Config, "unknown variant '" + s + "' (expected V1 or V2)");
}

/// Every knob of the training/inference pipeline. The defaults reproduce the
/// published parameter settings for V1: easy branch types {1,3} with 105
/// selected features, one 50-tree regressor; hard branch types {1..5} with 374
/// features, 8 clusters of 500-tree regressors, two-fold prediction fusion;
/// depth 6, 32 threshold bins, variance split at 180. V2 differs only in the
/// hard representation types ({5}) and feature count (135).
///
/// The sample caps are desk-scale controls: they bound how many base samples
/// per branch enter training (before 8x augmentation), and how many are used
/// for transform fitting and feature scoring. 0 means uncapped.
struct RunConfig {
    Variant variant = Variant::V1;
    int scale = 2;
    double variance_threshold = 180.0;
    int easy_features = 105;
    int hard_features = 374;
    int easy_trees = 50;
    int hard_trees = 500;
    int max_depth = 6;
    double learning_rate = 0.1;
    double lambda = 1.0;
    int clusters = 8;
    int fusion = 2;  // hard-branch sibling count f, one of {1, 2, 4}
    int rft_bins = 32;
    bool elbow = false;  // select features by loss-curve elbow instead of count
    std::uint64_t seed = 1;
    int train_stride = 1;
    bool augment = true;
    std::uint64_t max_base_easy = 20000;
    std::uint64_t max_base_hard = 20000;
    std::uint64_t max_rft_samples = 20000;
    std::uint64_t max_fit_patches = 20000;
    int threads = 1;

    static RunConfig defaults(Variant v) {
        RunConfig cfg;
        cfg.variant = v;
        if (v == Variant::V2) cfg.hard_features = 135;
        return cfg;
    }

    RepresentationSpec easy_spec() const { return RepresentationSpec::from_types({1, 3}); }

    RepresentationSpec hard_spec() const {
        return variant == Variant::V1 ? RepresentationSpec::from_types({1, 2, 3, 4, 5})
                                      : RepresentationSpec::from_types({5});
    }

    void validate() const {
        if (scale != 2) fail(ErrorKind::Config, "scale is fixed at 2");
        if (fusion != 1 && fusion != 2 && fusion != 4)
            fail(ErrorKind::Config, "fusion must be 1, 2, or 4");
        if (variance_threshold < 0) fail(ErrorKind::Config, "variance_threshold must be >= 0");
        if (easy_features < 1 || hard_features < 1)
            fail(ErrorKind::Config, "feature counts must be >= 1");
        if (easy_features > easy_spec().pool_width() ||
            hard_features > hard_spec().pool_width())
            fail(ErrorKind::Config, "feature count exceeds the representation pool width");
        if (easy_trees < 0 || hard_trees < 0) fail(ErrorKind::Config, "tree counts must be >= 0");
        if (max_depth < 1) fail(ErrorKind::Config, "max_depth must be >= 1");
        if (clusters < 1) fail(ErrorKind::Config, "clusters must be >= 1");
        if (rft_bins < 2) fail(ErrorKind::Config, "rft_bins must be >= 2");
        if (train_stride < 1) fail(ErrorKind::Config, "train_stride must be >= 1");
        if (threads < 0) fail(ErrorKind::Config, "threads must be >= 0");
        if (learning_rate <= 0 || lambda < 0)
            fail(ErrorKind::Config, "learning_rate must be > 0 and lambda >= 0");
        if (max_base_easy < 1 || max_base_hard < 1 || max_fit_patches < 1)
            fail(ErrorKind::Config, "sample caps must be >= 1");
        if (max_rft_samples < 2)
            fail(ErrorKind::Config, "max_rft_samples must be >= 2");
    }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    fail(ErrorKind::Config, "bad boolean for " + key + ": '" + v + "'");
}

inline long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        fail(ErrorKind::Config, "bad integer for " + key + ": '" + v + "'");
    }
}

inline double parse_real(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(ErrorKind::Config, "bad number for " + key + ": '" + v + "'");
    }
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Applies one `key=value` setting. Shared by the config-file reader and by
/// command-line overrides so both spell settings identically.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "variant") {
        const Variant v = variant_from_name(value);
        // switching variants re-derives the variant-dependent default
        const RunConfig fresh = RunConfig::defaults(v);
        if (cfg.hard_features == RunConfig::defaults(cfg.variant).hard_features)
            cfg.hard_features = fresh.hard_features;
        cfg.variant = v;
    } else if (key == "scale") {
        cfg.scale = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "variance_threshold") {
        cfg.variance_threshold = detail::parse_real(value, key);
    } else if (key == "easy_features") {
        cfg.easy_features = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "hard_features") {
        cfg.hard_features = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "easy_trees") {
        cfg.easy_trees = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "hard_trees") {
        cfg.hard_trees = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "max_depth") {
        cfg.max_depth = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "learning_rate") {
        cfg.learning_rate = detail::parse_real(value, key);
    } else if (key == "lambda") {
        cfg.lambda = detail::parse_real(value, key);
    } else if (key == "clusters") {
        cfg.clusters = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "fusion") {
        cfg.fusion = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "rft_bins") {
        cfg.rft_bins = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "elbow") {
        cfg.elbow = detail::parse_bool(value, key);
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(detail::parse_int(value, key));
    } else if (key == "train_stride") {
        cfg.train_stride = static_cast<int>(detail::parse_int(value, key));
    } else if (key == "augment") {
        cfg.augment = detail::parse_bool(value, key);
    } else if (key == "max_base_easy") {
        cfg.max_base_easy = static_cast<std::uint64_t>(detail::parse_int(value, key));
    } else if (key == "max_base_hard") {
        cfg.max_base_hard = static_cast<std::uint64_t>(detail::parse_int(value, key));
    } else if (key == "max_rft_samples") {
        cfg.max_rft_samples = static_cast<std::uint64_t>(detail::parse_int(value, key));
    } else if (key == "max_fit_patches") {
        cfg.max_fit_patches = static_cast<std::uint64_t>(detail::parse_int(value, key));
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(detail::parse_int(value, key));
    } else {
        fail(ErrorKind::Config, "unknown config key '" + key + "'");
    }
}

/// Flat `key=value` text, one setting per line; blank lines and lines starting
/// with '#' are ignored.
inline void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& origin) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::Config,
                 origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + t + "'");
        apply_setting(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
    apply_config_text(cfg, in, path);
}

/// Serializes the effective settings; the same text is embedded in model files
/// so a trained model records exactly how it was produced.
inline std::string config_manifest(const RunConfig& cfg) {
    std::ostringstream os;
    os << "variant=" << variant_name(cfg.variant) << '\n'
       << "scale=" << cfg.scale << '\n'
       << "variance_threshold=" << cfg.variance_threshold << '\n'
       << "easy_features=" << cfg.easy_features << '\n'
       << "hard_features=" << cfg.hard_features << '\n'
       << "easy_trees=" << cfg.easy_trees << '\n'
       << "hard_trees=" << cfg.hard_trees << '\n'
       << "max_depth=" << cfg.max_depth << '\n'
       << "learning_rate=" << cfg.learning_rate << '\n'
       << "lambda=" << cfg.lambda << '\n'
       << "clusters=" << cfg.clusters << '\n'
       << "fusion=" << cfg.fusion << '\n'
       << "rft_bins=" << cfg.rft_bins << '\n'
       << "elbow=" << (cfg.elbow ? 1 : 0) << '\n'
       << "seed=" << cfg.seed << '\n'
       << "train_stride=" << cfg.train_stride << '\n'
       << "augment=" << (cfg.augment ? 1 : 0) << '\n'
       << "max_base_easy=" << cfg.max_base_easy << '\n'
       << "max_base_hard=" << cfg.max_base_hard << '\n'
       << "max_rft_samples=" << cfg.max_rft_samples << '\n'
       << "max_fit_patches=" << cfg.max_fit_patches << '\n';
    return os.str();
}

}  // namespace lsr
