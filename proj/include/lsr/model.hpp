#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lsr/config.hpp"
#include "lsr/gbt.hpp"
#include "lsr/hog.hpp"
#include "lsr/kmeans.hpp"
#include "lsr/patches.hpp"
#include "lsr/representations.hpp"

namespace lsr {

/// One easy/hard branch: how to represent a patch, which pool entries feed the
/// regressors, how hard patches are routed to a cluster, and the per-cluster
/// regressors themselves. The easy branch is the k=1 degenerate case (one
/// regressor, no clustering, no fusion).
struct BranchModel {
    RepresentationSpec spec;
    Transforms transforms;
    std::vector<int> selected_ids;
    KMeansModel clusters;
    std::vector<GbtRegressor> regressors;
    int fusion = 1;
};

struct LsrModel {
    std::uint32_t version = 1;
    Variant variant = Variant::V1;
    int scale = 2;
    double variance_threshold = kVarianceThreshold;
    std::uint64_t seed = 0;
    BranchModel easy;
    BranchModel hard;
    std::string manifest;  // key=value record of the training configuration
};

/// Structural checks shared by save and load; violations are data errors.
inline void validate_model(const LsrModel& model) {
    if (model.scale != 2) fail(ErrorKind::Data, "model: scale must be 2");
    const auto check_branch = [](const BranchModel& b, const char* name) {
        if (b.fusion != 1 && b.fusion != 2 && b.fusion != 4)
            fail(ErrorKind::Data, std::string("model: bad fusion factor in ") + name);
        if (b.clusters.k < 1)
            fail(ErrorKind::Data, std::string("model: cluster count must be >= 1 in ") + name);
        if (b.regressors.size() != static_cast<std::size_t>(b.clusters.k))
            fail(ErrorKind::Data,
                 std::string("model: regressor count must match cluster count in ") + name);
        if (!b.selected_ids.empty()) {
            const int pw = b.spec.pool_width();
            for (int id : b.selected_ids)
                if (id < 0 || id >= pw)
                    fail(ErrorKind::Data,
                         std::string("model: selected feature id out of pool range in ") + name);
        }
        for (const GbtRegressor& reg : b.regressors)
            for (const GbtTree& tree : reg.trees)
                for (const GbtNode& nd : tree.nodes)
                    if (!nd.is_leaf() &&
                        nd.feature >= static_cast<int>(b.selected_ids.size()))
                        fail(ErrorKind::Data,
                             std::string("model: tree feature index exceeds selected count in ") +
                                 name);
    };
    check_branch(model.easy, "easy branch");
    check_branch(model.hard, "hard branch");
}

namespace detail {

inline void put_u64_at(std::string& buf, std::size_t pos, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf[pos + i] = static_cast<char>(v >> (8 * i));
}

inline void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

inline double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

inline void put_i32(std::ostream& os, std::int32_t v) {
    put_u32(os, static_cast<std::uint32_t>(v));
}

inline std::int32_t get_i32(std::istream& is) {
    return static_cast<std::int32_t>(get_u32(is));
}

inline void write_saab(std::ostream& os, const SaabKernelSet& s) {
    put_u32(os, static_cast<std::uint32_t>(s.window));
    os.put(s.completed ? 1 : 0);
    put_u64(os, s.kernels.size());
    for (double v : s.kernels) put_f64(os, v);
}

inline SaabKernelSet read_saab(std::istream& is) {
    SaabKernelSet s;
    s.window = static_cast<int>(get_u32(is));
    s.completed = is.get() != 0;
    s.kernels.resize(get_u64(is));
    for (double& v : s.kernels) v = get_f64(is);
    return s;
}

inline void write_pca(std::ostream& os, const ChannelPcaSet& p) {
    put_u32(os, static_cast<std::uint32_t>(p.channels));
    os.put(p.completed ? 1 : 0);
    put_u64(os, p.matrix.size());
    for (double v : p.matrix) put_f64(os, v);
    put_u64(os, p.mean.size());
    for (double v : p.mean) put_f64(os, v);
}

inline ChannelPcaSet read_pca(std::istream& is) {
    ChannelPcaSet p;
    p.channels = static_cast<int>(get_u32(is));
    p.completed = is.get() != 0;
    p.matrix.resize(get_u64(is));
    for (double& v : p.matrix) v = get_f64(is);
    p.mean.resize(get_u64(is));
    for (double& v : p.mean) v = get_f64(is);
    return p;
}

inline void write_branch(std::ostream& os, const BranchModel& b) {
    std::uint8_t bits = 0;
    for (int t = 1; t <= 5; ++t)
        if (b.spec.has(t)) bits |= static_cast<std::uint8_t>(1u << (t - 1));
    os.put(static_cast<char>(bits));
    put_u32(os, static_cast<std::uint32_t>(b.fusion));
    write_saab(os, b.transforms.k5);
    write_saab(os, b.transforms.k7);
    write_saab(os, b.transforms.k3);
    write_pca(os, b.transforms.pca4);
    write_pca(os, b.transforms.pca9);
    put_u64(os, b.selected_ids.size());
    for (int id : b.selected_ids) put_i32(os, id);
    put_u32(os, static_cast<std::uint32_t>(b.clusters.k));
    put_u32(os, static_cast<std::uint32_t>(b.clusters.dim));
    put_u64(os, b.clusters.centroids.size());
    for (double v : b.clusters.centroids) put_f64(os, v);
    put_u64(os, b.regressors.size());
    for (const GbtRegressor& reg : b.regressors) {
        put_f64(os, reg.base_score);
        put_f64(os, reg.learning_rate);
        put_u32(os, static_cast<std::uint32_t>(reg.max_depth));
        put_u64(os, reg.trees.size());
        for (const GbtTree& tree : reg.trees) {
            put_u64(os, tree.nodes.size());
            for (const GbtNode& nd : tree.nodes) {
                put_i32(os, nd.feature);
                put_f64(os, nd.threshold);
                put_f64(os, nd.weight);
                put_i32(os, nd.left);
                put_i32(os, nd.right);
            }
        }
    }
}

inline BranchModel read_branch(std::istream& is) {
    BranchModel b;
    const int bits = is.get();
    if (bits < 0) fail(ErrorKind::Data, "model: truncated branch section");
    for (int t = 1; t <= 5; ++t)
        b.spec.enabled[t - 1] = (bits >> (t - 1)) & 1;
    b.fusion = static_cast<int>(get_u32(is));
    b.transforms.k5 = read_saab(is);
    b.transforms.k7 = read_saab(is);
    b.transforms.k3 = read_saab(is);
    b.transforms.pca4 = read_pca(is);
    b.transforms.pca9 = read_pca(is);
    b.selected_ids.resize(get_u64(is));
    for (int& id : b.selected_ids) id = get_i32(is);
    b.clusters.k = static_cast<int>(get_u32(is));
    b.clusters.dim = static_cast<int>(get_u32(is));
    b.clusters.centroids.resize(get_u64(is));
    for (double& v : b.clusters.centroids) v = get_f64(is);
    b.regressors.resize(get_u64(is));
    for (GbtRegressor& reg : b.regressors) {
        reg.base_score = get_f64(is);
        reg.learning_rate = get_f64(is);
        reg.max_depth = static_cast<int>(get_u32(is));
        reg.trees.resize(get_u64(is));
        for (GbtTree& tree : reg.trees) {
            tree.nodes.resize(get_u64(is));
            for (GbtNode& nd : tree.nodes) {
                nd.feature = get_i32(is);
                nd.threshold = get_f64(is);
                nd.weight = get_f64(is);
                nd.left = get_i32(is);
                nd.right = get_i32(is);
            }
        }
    }
    return b;
}

/// Sections are tagged and length-prefixed so readers can validate framing.
inline void write_section(std::ostream& os, const char tag[4], const std::string& payload) {
    os.write(tag, 4);
    put_u64(os, payload.size());
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

inline std::string read_section(std::istream& is, const char tag[4]) {
    char got[4];
    is.read(got, 4);
    if (!is || std::memcmp(got, tag, 4) != 0)
        fail(ErrorKind::Data, std::string("model: missing section ") + std::string(tag, 4));
    const std::uint64_t len = get_u64(is);
    std::string payload(len, '\0');
    is.read(payload.data(), static_cast<std::streamsize>(len));
    if (!is) fail(ErrorKind::Data, "model: truncated section payload");
    return payload;
}

}  // namespace detail

inline void save_model(const std::string& path, const LsrModel& model) {
    validate_model(model);
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot create " + path);
    os.write("LSR1", 4);
    detail::put_u32(os, model.version);
    os.put(static_cast<char>(model.variant));
    detail::put_u32(os, static_cast<std::uint32_t>(model.scale));
    detail::put_f64(os, model.variance_threshold);
    detail::put_u64(os, model.seed);

    detail::write_section(os, "MANI", model.manifest);
    std::ostringstream easy, hard;
    detail::write_branch(easy, model.easy);
    detail::write_branch(hard, model.hard);
    detail::write_section(os, "EZBR", easy.str());
    detail::write_section(os, "HDBR", hard.str());
    if (!os) fail(ErrorKind::Io, "write failed: " + path);
}

inline LsrModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorKind::Io, "cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LSR1", 4) != 0)
        fail(ErrorKind::Data, "not a model file (bad magic): " + path);
    LsrModel model;
    model.version = detail::get_u32(is);
    if (model.version != 1u) fail(ErrorKind::Data, "unsupported model version");
    const int variant = is.get();
    if (variant != 0 && variant != 1) fail(ErrorKind::Data, "model: bad variant tag");
    model.variant = static_cast<Variant>(variant);
    model.scale = static_cast<int>(detail::get_u32(is));
    model.variance_threshold = detail::get_f64(is);
    model.seed = detail::get_u64(is);

    model.manifest = detail::read_section(is, "MANI");
    {
        std::istringstream easy(detail::read_section(is, "EZBR"));
        model.easy = detail::read_branch(easy);
        if (!easy) fail(ErrorKind::Data, "model: truncated easy branch");
    }
    {
        std::istringstream hard(detail::read_section(is, "HDBR"));
        model.hard = detail::read_branch(hard);
        if (!hard) fail(ErrorKind::Data, "model: truncated hard branch");
    }
    validate_model(model);
    return model;
}

}  // namespace lsr
