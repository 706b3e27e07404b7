#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lsr/common.hpp"
#include "lsr/hog.hpp"
#include "lsr/model.hpp"

namespace lsr {

/// One costed operation. Geometry fields are read per kind:
///  - pixelwise(h, w, channels, n): F = h*w*channels*n, M = 0
///  - matmul(t_h, t_w, n): F = (2*t_w - 1)*t_h*n, M = t_h*t_w*m_copies
///    (m_copies > 1 when only one of several stored operators runs per sample)
///  - conv3d(c_i, k_h, k_w, h_o, w_o, c_o): F = (2*c_i*k_h*k_w - 1 + bias)*h_o*w_o*c_o,
///    M = (c_i*k_h*k_w + bias_in_params)*c_o, both scaled by `repeat` stacked layers
///  - channelwise(c_i, k_h, k_w, c_o, n_type, f): per-pixel filter banks,
///    F_p = c_i*(2*k_h*k_w - 1)*c_o*n_type*f, M = c_i*k_h*k_w*c_o*n_type
///  - param_store(count): F = 0, M = count (stored indices, no arithmetic)
///  - cluster_pred(n_fc, n_c, f): F_p = max((3*n_fc - 1)*n_c, 0)*f, M = n_fc*n_c
///  - gbt_pred(n_tree, d_m, f, n_c): F_p = d_m*n_tree*f,
///    M = (2*(2^d_m - 1) + 2^d_m)*n_tree*n_c
///  - fusion(f): F_p = f when f > 1 (f-1 additions + 1 division), else 0; M = 0
struct OpDescriptor {
    enum class Kind {
        Pixelwise,
        Matmul,
        Conv3d,
        Channelwise,
        ParamStore,
        ClusterPred,
        GbtPred,
        Fusion
    };
    Kind kind = Kind::Pixelwise;
    long long h = 0, w = 0, channels = 0, n = 0;                      // pixelwise
    long long t_h = 0, t_w = 0, m_copies = 1;                         // matmul
    long long c_i = 0, k_h = 0, k_w = 0, h_o = 0, w_o = 0, c_o = 0;   // conv3d / channelwise
    bool bias = false;           // bias add counted in F
    bool bias_in_params = false; // bias term counted in M
    long long repeat = 1;        // stacked identical layers (conv3d)
    long long n_type = 0;        // channelwise filter bank count
    long long count = 0;         // param_store
    long long n_fc = 0, n_c = 0, n_tree = 0, d_m = 0;                 // cluster / gbt
    long long f = 1;             // fusion siblings sharing this op

    static OpDescriptor pixelwise(long long h, long long w, long long channels, long long n) {
        OpDescriptor op;
        op.kind = Kind::Pixelwise;
        op.h = h; op.w = w; op.channels = channels; op.n = n;
        return op;
    }
    static OpDescriptor matmul(long long t_h, long long t_w, long long n, long long m_copies = 1) {
        OpDescriptor op;
        op.kind = Kind::Matmul;
        op.t_h = t_h; op.t_w = t_w; op.n = n; op.m_copies = m_copies;
        return op;
    }
    static OpDescriptor conv3d(long long c_i, long long k_h, long long k_w, long long h_o,
                               long long w_o, long long c_o, bool bias, long long repeat = 1) {
        OpDescriptor op;
        op.kind = Kind::Conv3d;
        op.c_i = c_i; op.k_h = k_h; op.k_w = k_w;
        op.h_o = h_o; op.w_o = w_o; op.c_o = c_o;
        op.bias = bias;
        op.bias_in_params = bias;
        op.repeat = repeat;
        return op;
    }
    static OpDescriptor channelwise(long long c_i, long long k_h, long long k_w, long long c_o,
                                    long long n_type, long long f) {
        OpDescriptor op;
        op.kind = Kind::Channelwise;
        op.c_i = c_i; op.k_h = k_h; op.k_w = k_w; op.c_o = c_o;
        op.n_type = n_type; op.f = f;
        return op;
    }
    static OpDescriptor param_store(long long count) {
        OpDescriptor op;
        op.kind = Kind::ParamStore;
        op.count = count;
        return op;
    }
    static OpDescriptor cluster_pred(long long n_fc, long long n_c, long long f) {
        OpDescriptor op;
        op.kind = Kind::ClusterPred;
        op.n_fc = n_fc; op.n_c = n_c; op.f = f;
        return op;
    }
    static OpDescriptor gbt_pred(long long n_tree, long long d_m, long long f, long long n_c) {
        OpDescriptor op;
        op.kind = Kind::GbtPred;
        op.n_tree = n_tree; op.d_m = d_m; op.f = f; op.n_c = n_c;
        return op;
    }
    static OpDescriptor fusion(long long f) {
        OpDescriptor op;
        op.kind = Kind::Fusion;
        op.f = f;
        return op;
    }
};

/// Cost of one step. Whole-image ops define F and derive F_p = F / pixels;
/// per-pixel ops define F_p directly and leave F at 0 (the published LSR
/// tables never list whole-image FLOPs).
struct StepCost {
    double flops = 0.0;
    double flops_per_pixel = 0.0;
    double params = 0.0;
    bool whole_image = false;
};

inline StepCost eval_op(const OpDescriptor& op, long long pixel_basis) {
    if (pixel_basis < 1) fail(ErrorKind::Parameter, "complexity: pixel basis must be >= 1");
    const auto nonneg = [](long long v, const char* what) {
        if (v < 0) fail(ErrorKind::Parameter, std::string("complexity: ") + what + " must be >= 0");
        return static_cast<double>(v);
    };
    if (op.f < 1) fail(ErrorKind::Parameter, "complexity: fusion factor must be >= 1");
    StepCost cost;
    switch (op.kind) {
        case OpDescriptor::Kind::Pixelwise: {
            cost.flops = nonneg(op.h, "h") * nonneg(op.w, "w") * nonneg(op.channels, "channels") *
                         nonneg(op.n, "n");
            cost.whole_image = true;
            break;
        }
        case OpDescriptor::Kind::Matmul: {
            cost.flops = (2.0 * nonneg(op.t_w, "t_w") - 1.0) * nonneg(op.t_h, "t_h") *
                         nonneg(op.n, "n");
            cost.params = nonneg(op.t_h, "t_h") * nonneg(op.t_w, "t_w") *
                          nonneg(op.m_copies, "m_copies");
            cost.whole_image = true;
            break;
        }
        case OpDescriptor::Kind::Conv3d: {
            const double taps = nonneg(op.c_i, "c_i") * nonneg(op.k_h, "k_h") * nonneg(op.k_w, "k_w");
            const double outputs = nonneg(op.h_o, "h_o") * nonneg(op.w_o, "w_o") *
                                   nonneg(op.c_o, "c_o");
            const double layers = nonneg(op.repeat, "repeat");
            cost.flops = (2.0 * taps - (op.bias ? 0.0 : 1.0)) * outputs * layers;
            cost.params = (taps + (op.bias_in_params ? 1.0 : 0.0)) * nonneg(op.c_o, "c_o") * layers;
            cost.whole_image = true;
            break;
        }
        case OpDescriptor::Kind::Channelwise: {
            const double area = nonneg(op.k_h, "k_h") * nonneg(op.k_w, "k_w");
            cost.flops_per_pixel = nonneg(op.c_i, "c_i") * (2.0 * area - 1.0) *
                                   nonneg(op.c_o, "c_o") * nonneg(op.n_type, "n_type") *
                                   static_cast<double>(op.f);
            cost.params = nonneg(op.c_i, "c_i") * area * nonneg(op.c_o, "c_o") *
                          nonneg(op.n_type, "n_type");
            break;
        }
        case OpDescriptor::Kind::ParamStore: {
            cost.params = nonneg(op.count, "count");
            break;
        }
        case OpDescriptor::Kind::ClusterPred: {
            const double per_f = std::max((3.0 * nonneg(op.n_fc, "n_fc") - 1.0) *
                                              nonneg(op.n_c, "n_c"),
                                          0.0);
            cost.flops_per_pixel = per_f * static_cast<double>(op.f);
            cost.params = nonneg(op.n_fc, "n_fc") * nonneg(op.n_c, "n_c");
            break;
        }
        case OpDescriptor::Kind::GbtPred: {
            cost.flops_per_pixel = nonneg(op.d_m, "d_m") * nonneg(op.n_tree, "n_tree") *
                                   static_cast<double>(op.f);
            const double leaves = std::ldexp(1.0, static_cast<int>(op.d_m));  // 2^d_m
            cost.params = (2.0 * (leaves - 1.0) + leaves) * nonneg(op.n_tree, "n_tree") *
                          nonneg(op.n_c, "n_c");
            break;
        }
        case OpDescriptor::Kind::Fusion: {
            cost.flops_per_pixel = op.f > 1 ? static_cast<double>(op.f) : 0.0;
            break;
        }
    }
    if (cost.whole_image)
        cost.flops_per_pixel = cost.flops / static_cast<double>(pixel_basis);
    return cost;
}

struct Step {
    std::string label;
    OpDescriptor op;
};

struct Procedure {
    std::string name;
    std::vector<Step> steps;
};

/// A method is either a flat list of procedures (A+, SRCNN, VDSR) or an
/// easy/hard pair of lists combined by the partition weights (LSR).
struct MethodDescriptor {
    std::string name;   // lookup key, e.g. "lsr-v1"
    std::string title;  // display name, e.g. "LSR V1"
    long long basis_h = 344, basis_w = 228;
    std::vector<Procedure> shared;
    std::vector<Procedure> easy, hard;
    double w_easy = 0.0, w_hard = 0.0;

    bool partitioned() const { return !easy.empty() || !hard.empty(); }
    long long pixel_basis() const { return basis_h * basis_w; }
};

struct StepReport {
    std::string label;
    StepCost cost;
};

struct ProcedureReport {
    std::string name;
    std::vector<StepReport> steps;
    double flops = 0.0, flops_per_pixel = 0.0, params = 0.0;
};

struct ComplexityReport {
    std::string name, title;
    long long basis_h = 0, basis_w = 0;
    bool partitioned = false;
    std::vector<ProcedureReport> shared, easy, hard;
    // per-partition totals (partitioned methods only)
    double easy_fp = 0.0, easy_m = 0.0, hard_fp = 0.0, hard_m = 0.0;
    double w_easy = 0.0, w_hard = 0.0;
    // grand totals; for partitioned methods total_fp is the weighted value
    // rounded to an integer as printed, total_fp_exact the unrounded one
    double total_f = 0.0;
    double total_fp = 0.0;
    double total_fp_exact = 0.0;
    double total_m = 0.0;
};

namespace detail {

inline std::vector<ProcedureReport> eval_procedures(const std::vector<Procedure>& procedures,
                                                    long long pixel_basis) {
    std::vector<ProcedureReport> out;
    out.reserve(procedures.size());
    for (const Procedure& proc : procedures) {
        ProcedureReport pr;
        pr.name = proc.name;
        for (const Step& step : proc.steps) {
            StepReport sr{step.label, eval_op(step.op, pixel_basis)};
            pr.flops += sr.cost.flops;
            pr.flops_per_pixel += sr.cost.flops_per_pixel;
            pr.params += sr.cost.params;
            pr.steps.push_back(std::move(sr));
        }
        out.push_back(std::move(pr));
    }
    return out;
}

inline void sum_partition(const std::vector<ProcedureReport>& procedures, double& fp, double& m) {
    fp = 0.0;
    m = 0.0;
    for (const ProcedureReport& pr : procedures) {
        fp += pr.flops_per_pixel;
        m += pr.params;
    }
}

}  // namespace detail

inline ComplexityReport eval_method(const MethodDescriptor& method) {
    ComplexityReport rep;
    rep.name = method.name;
    rep.title = method.title;
    rep.basis_h = method.basis_h;
    rep.basis_w = method.basis_w;
    rep.partitioned = method.partitioned();
    const long long basis = method.pixel_basis();
    if (rep.partitioned) {
        if (std::abs(method.w_easy + method.w_hard - 1.0) > 1e-12)
            fail(ErrorKind::Parameter, "complexity: partition weights must sum to 1");
        rep.easy = detail::eval_procedures(method.easy, basis);
        rep.hard = detail::eval_procedures(method.hard, basis);
        detail::sum_partition(rep.easy, rep.easy_fp, rep.easy_m);
        detail::sum_partition(rep.hard, rep.hard_fp, rep.hard_m);
        rep.w_easy = method.w_easy;
        rep.w_hard = method.w_hard;
        rep.total_fp_exact = method.w_easy * rep.easy_fp + method.w_hard * rep.hard_fp;
        rep.total_fp = static_cast<double>(std::llround(rep.total_fp_exact));
        rep.total_m = rep.easy_m + rep.hard_m;
    } else {
        rep.shared = detail::eval_procedures(method.shared, basis);
        for (const ProcedureReport& pr : rep.shared) {
            rep.total_f += pr.flops;
            rep.total_fp_exact += pr.flops_per_pixel;
            rep.total_m += pr.params;
        }
        rep.total_fp = rep.total_fp_exact;
    }
    return rep;
}

// --- builtin method descriptors --------------------------------------------

inline MethodDescriptor method_aplus(long long basis_h = 344, long long basis_w = 228) {
    MethodDescriptor m;
    m.name = "aplus";
    m.title = "A+";
    m.basis_h = basis_h;
    m.basis_w = basis_w;
    // 18480 overlapping 6x6 patches drive the whole pipeline on the 344x228
    // reference image.
    const long long patches = 18480;
    Procedure ife{"ILR Feature Extraction (IFE)", {
        {"D1_w", OpDescriptor::conv3d(1, 1, 3, basis_h, basis_w, 1, false)},
        {"D1_h", OpDescriptor::conv3d(1, 3, 1, basis_h, basis_w, 1, false)},
        {"D2_w", OpDescriptor::conv3d(1, 1, 5, basis_h, basis_w, 1, false)},
        {"D2_h", OpDescriptor::conv3d(1, 5, 1, basis_h, basis_w, 1, false)},
    }};
    Procedure rpp{"Residue Patch Prediction (RPP)", {
        {"ILR Feat. Dim. Red.", OpDescriptor::matmul(28, 144, patches)},
        {"Dist. to ILR Atoms", OpDescriptor::matmul(1024, 28, patches)},
        // only the nearest atom's regressor runs, but all 1024 are stored
        {"Regression Prediction", OpDescriptor::matmul(36, 28, patches, 1024)},
    }};
    Procedure hip{"HR Image Prediction (HIP)", {
        {"Add. ILR to pred. Res.", OpDescriptor::pixelwise(6, 6, 1, patches)},
        {"Cumu. of pixel values", OpDescriptor::pixelwise(6, 6, 1, patches)},
        {"Div. by pixel counter", OpDescriptor::pixelwise(basis_h, basis_w, 1, 1)},
    }};
    m.shared = {std::move(ife), std::move(rpp), std::move(hip)};
    return m;
}

inline MethodDescriptor method_srcnn(long long basis_h = 344, long long basis_w = 228) {
    MethodDescriptor m;
    m.name = "srcnn";
    m.title = "SRCNN";
    m.basis_h = basis_h;
    m.basis_w = basis_w;
    m.shared = {Procedure{"Convolution Layers", {
        {"conv1", OpDescriptor::conv3d(1, 9, 9, basis_h, basis_w, 64, true)},
        {"conv2", OpDescriptor::conv3d(64, 5, 5, basis_h, basis_w, 32, true)},
        {"conv3", OpDescriptor::conv3d(32, 5, 5, basis_h, basis_w, 1, true)},
    }}};
    return m;
}

inline MethodDescriptor method_vdsr(long long basis_h = 344, long long basis_w = 228) {
    MethodDescriptor m;
    m.name = "vdsr";
    m.title = "VDSR";
    m.basis_h = basis_h;
    m.basis_w = basis_w;
    // Bias adds are counted in the FLOPs column but the parameter column
    // counts weights only; both conventions are kept as published.
    const auto conv = [&](long long c_i, long long c_o, long long layers) {
        OpDescriptor op = OpDescriptor::conv3d(c_i, 3, 3, basis_h, basis_w, c_o, true, layers);
        op.bias_in_params = false;
        return op;
    };
    m.shared = {Procedure{"Convolution Layers", {
        {"conv1", conv(1, 64, 1)},
        {"conv2 - 19", conv(64, 64, 18)},
        {"conv20", conv(64, 1, 1)},
        {"post-process", OpDescriptor::pixelwise(basis_h, basis_w, 1, 1)},
    }}};
    return m;
}

/// Everything the complexity tables need to know about one trained (or
/// hypothetical) LSR configuration.
struct LsrComplexitySettings {
    std::string name = "lsr-v1";
    std::string title = "LSR V1";
    RepresentationSpec easy_spec;
    RepresentationSpec hard_spec;
    long long easy_features = 105, hard_features = 374;
    long long easy_trees = 50, hard_trees = 500;
    long long max_depth = 6;
    long long clusters = 8;
    long long hog_dim = kHogDim;
    long long easy_fusion = 1, hard_fusion = 2;
    double w_easy = 0.56, w_hard = 0.44;
};

namespace detail {

/// The URL rows of one branch: every enabled representation type, listed in
/// the fixed type order with the branch's fusion multiplier.
inline Procedure url_procedure(const RepresentationSpec& spec, long long f) {
    Procedure proc{"Module 1: Unsupervised Representation Learning (URL)", {}};
    if (spec.has(1))
        proc.steps.push_back({"Type 1, Spatial", OpDescriptor::channelwise(1, 1, 1, 1, 0, f)});
    if (spec.has(2)) {
        proc.steps.push_back(
            {"Type 2, Central Saab 5x5", OpDescriptor::channelwise(1, 5, 5, 25, 1, f)});
        proc.steps.push_back(
            {"Type 2, Central Saab 7x7", OpDescriptor::channelwise(1, 7, 7, 49, 1, f)});
    }
    if (spec.has(3))
        proc.steps.push_back(
            {"Type 3, Ringwise Saab", OpDescriptor::channelwise(1, 3, 3, 9, 1, f)});
    if (spec.has(4))
        proc.steps.push_back({"Type 4, Haar & PCA", OpDescriptor::channelwise(1, 2, 2, 4, 2, f)});
    if (spec.has(5))
        proc.steps.push_back({"Type 5, Laws & PCA", OpDescriptor::channelwise(1, 3, 3, 9, 2, f)});
    return proc;
}

inline std::vector<Procedure> lsr_branch(const RepresentationSpec& spec, long long n_features,
                                         long long n_trees, long long depth, long long clusters,
                                         long long hog_dim, long long f, long long basis_h,
                                         long long basis_w) {
    std::vector<Procedure> procs;
    procs.push_back(url_procedure(spec, f));
    procs.push_back(Procedure{"Module 2: Supervised Feature Learning (SFL)", {
        {"RFT Selected Features", OpDescriptor::param_store(n_features)},
    }});
    procs.push_back(Procedure{"Module 3: Supervised Decision Learning (SDL)", {
        {"Cluster Pred.",
         OpDescriptor::cluster_pred(clusters > 1 ? hog_dim : 0, clusters, f)},
        {"Regressor Pred.", OpDescriptor::gbt_pred(n_trees, depth, f, clusters)},
        {"Prediction Fusion", OpDescriptor::fusion(f)},
    }});
    procs.push_back(Procedure{"Post-process", {
        {"Add. Res. to ILR", OpDescriptor::pixelwise(basis_h, basis_w, 1, 1)},
    }});
    return procs;
}

}  // namespace detail

inline MethodDescriptor method_lsr(const LsrComplexitySettings& s, long long basis_h = 344,
                                   long long basis_w = 228) {
    MethodDescriptor m;
    m.name = s.name;
    m.title = s.title;
    m.basis_h = basis_h;
    m.basis_w = basis_w;
    m.w_easy = s.w_easy;
    m.w_hard = s.w_hard;
    m.easy = detail::lsr_branch(s.easy_spec, s.easy_features, s.easy_trees, s.max_depth, 1,
                                s.hog_dim, s.easy_fusion, basis_h, basis_w);
    m.hard = detail::lsr_branch(s.hard_spec, s.hard_features, s.hard_trees, s.max_depth,
                                s.clusters, s.hog_dim, s.hard_fusion, basis_h, basis_w);
    return m;
}

inline LsrComplexitySettings lsr_settings_v1() {
    LsrComplexitySettings s;
    s.easy_spec = RepresentationSpec::from_types({1, 3});
    s.hard_spec = RepresentationSpec::from_types({1, 2, 3, 4, 5});
    return s;
}

inline LsrComplexitySettings lsr_settings_v2() {
    LsrComplexitySettings s = lsr_settings_v1();
    s.name = "lsr-v2";
    s.title = "LSR V2";
    s.hard_spec = RepresentationSpec::from_types({5});
    s.hard_features = 135;
    return s;
}

/// Reads the structure of a live trained model back into complexity settings,
/// so the published tables can be cross-checked against what was actually
/// trained. Partition weights are not stored in the model; the caller may
/// override the published defaults.
inline LsrComplexitySettings settings_from_model(const LsrModel& model, double w_easy = 0.56,
                                                 double w_hard = 0.44) {
    LsrComplexitySettings s;
    s.name = model.variant == Variant::V1 ? "lsr-v1" : "lsr-v2";
    s.title = model.variant == Variant::V1 ? "LSR V1" : "LSR V2";
    s.easy_spec = model.easy.spec;
    s.hard_spec = model.hard.spec;
    s.easy_features = static_cast<long long>(model.easy.selected_ids.size());
    s.hard_features = static_cast<long long>(model.hard.selected_ids.size());
    s.easy_trees = model.easy.regressors.empty()
                       ? 0
                       : static_cast<long long>(model.easy.regressors[0].trees.size());
    s.hard_trees = model.hard.regressors.empty()
                       ? 0
                       : static_cast<long long>(model.hard.regressors[0].trees.size());
    s.max_depth = model.hard.regressors.empty() ? 6 : model.hard.regressors[0].max_depth;
    s.clusters = model.hard.clusters.k;
    s.hog_dim = model.hard.clusters.dim;
    s.easy_fusion = model.easy.fusion;
    s.hard_fusion = model.hard.fusion;
    s.w_easy = w_easy;
    s.w_hard = w_hard;
    return s;
}

inline std::vector<MethodDescriptor> builtin_methods(long long basis_h = 344,
                                                     long long basis_w = 228) {
    return {method_aplus(basis_h, basis_w), method_srcnn(basis_h, basis_w),
            method_vdsr(basis_h, basis_w), method_lsr(lsr_settings_v1(), basis_h, basis_w),
            method_lsr(lsr_settings_v2(), basis_h, basis_w)};
}

inline MethodDescriptor find_method(const std::string& name, long long basis_h = 344,
                                    long long basis_w = 228) {
    for (MethodDescriptor& m : builtin_methods(basis_h, basis_w))
        if (m.name == name) return std::move(m);
    fail(ErrorKind::Parameter, "unknown method '" + name +
                                   "' (known: aplus, srcnn, vdsr, lsr-v1, lsr-v2)");
}

// --- report emission --------------------------------------------------------

namespace detail {

inline std::string fmt_num(double v) {
    char buf[64];
    if (v == std::floor(v) && std::abs(v) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.0f", v);
    else
        std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

inline void text_procedures(std::string& out, const std::vector<ProcedureReport>& procs,
                            bool show_flops) {
    for (const ProcedureReport& pr : procs) {
        out += "  " + pr.name + "\n";
        for (const StepReport& sr : pr.steps) {
            char line[192];
            if (show_flops)
                std::snprintf(line, sizeof(line), "    %-28s F %-14s F_p %-12s M %s\n",
                              sr.label.c_str(), fmt_num(sr.cost.flops).c_str(),
                              fmt_num(sr.cost.flops_per_pixel).c_str(),
                              fmt_num(sr.cost.params).c_str());
            else
                std::snprintf(line, sizeof(line), "    %-28s F_p %-12s M %s\n", sr.label.c_str(),
                              fmt_num(sr.cost.flops_per_pixel).c_str(),
                              fmt_num(sr.cost.params).c_str());
            out += line;
        }
        char line[192];
        if (show_flops)
            std::snprintf(line, sizeof(line), "    %-28s F %-14s F_p %-12s M %s\n", "Sub-total",
                          fmt_num(pr.flops).c_str(), fmt_num(pr.flops_per_pixel).c_str(),
                          fmt_num(pr.params).c_str());
        else
            std::snprintf(line, sizeof(line), "    %-28s F_p %-12s M %s\n", "Sub-total",
                          fmt_num(pr.flops_per_pixel).c_str(), fmt_num(pr.params).c_str());
        out += line;
    }
}

}  // namespace detail

inline std::string report_text(const ComplexityReport& rep) {
    std::string out = rep.title + " (pixel basis " + std::to_string(rep.basis_h) + "x" +
                      std::to_string(rep.basis_w) + ")\n";
    char line[192];
    if (rep.partitioned) {
        out += " easy partition\n";
        detail::text_procedures(out, rep.easy, false);
        std::snprintf(line, sizeof(line), "    %-28s F_p %-12s M %s\n", "Easy Sub-Total",
                      detail::fmt_num(rep.easy_fp).c_str(), detail::fmt_num(rep.easy_m).c_str());
        out += line;
        out += " hard partition\n";
        detail::text_procedures(out, rep.hard, false);
        std::snprintf(line, sizeof(line), "    %-28s F_p %-12s M %s\n", "Hard Sub-Total",
                      detail::fmt_num(rep.hard_fp).c_str(), detail::fmt_num(rep.hard_m).c_str());
        out += line;
        std::snprintf(line, sizeof(line),
                      "  Total F_p %s (= %.2f*%s + %.2f*%s = %.2f), M %s\n",
                      detail::fmt_num(rep.total_fp).c_str(), rep.w_easy,
                      detail::fmt_num(rep.easy_fp).c_str(), rep.w_hard,
                      detail::fmt_num(rep.hard_fp).c_str(), rep.total_fp_exact,
                      detail::fmt_num(rep.total_m).c_str());
        out += line;
    } else {
        detail::text_procedures(out, rep.shared, true);
        std::snprintf(line, sizeof(line), "  %-30s F %-14s F_p %-12s M %s\n", "Total",
                      detail::fmt_num(rep.total_f).c_str(), detail::fmt_num(rep.total_fp).c_str(),
                      detail::fmt_num(rep.total_m).c_str());
        out += line;
    }
    return out;
}

inline std::string report_csv(const ComplexityReport& rep) {
    std::string out = "method,partition,procedure,step,F,F_p,M\r\n";
    const auto emit = [&](const char* partition, const std::vector<ProcedureReport>& procs) {
        for (const ProcedureReport& pr : procs) {
            for (const StepReport& sr : pr.steps) {
                out += detail::csv_quote(rep.name) + "," + partition + "," +
                       detail::csv_quote(pr.name) + "," + detail::csv_quote(sr.label) + "," +
                       detail::fmt_num(sr.cost.flops) + "," +
                       detail::fmt_num(sr.cost.flops_per_pixel) + "," +
                       detail::fmt_num(sr.cost.params) + "\r\n";
            }
            out += detail::csv_quote(rep.name) + "," + partition + "," +
                   detail::csv_quote(pr.name) + ",Sub-total," + detail::fmt_num(pr.flops) + "," +
                   detail::fmt_num(pr.flops_per_pixel) + "," + detail::fmt_num(pr.params) +
                   "\r\n";
        }
    };
    if (rep.partitioned) {
        emit("easy", rep.easy);
        emit("hard", rep.hard);
        out += detail::csv_quote(rep.name) + ",easy,,Sub-Total,," +
               detail::fmt_num(rep.easy_fp) + "," + detail::fmt_num(rep.easy_m) + "\r\n";
        out += detail::csv_quote(rep.name) + ",hard,,Sub-Total,," +
               detail::fmt_num(rep.hard_fp) + "," + detail::fmt_num(rep.hard_m) + "\r\n";
        out += detail::csv_quote(rep.name) + ",,,Total,," + detail::fmt_num(rep.total_fp) + "," +
               detail::fmt_num(rep.total_m) + "\r\n";
    } else {
        emit("", rep.shared);
        out += detail::csv_quote(rep.name) + ",,,Total," + detail::fmt_num(rep.total_f) + "," +
               detail::fmt_num(rep.total_fp) + "," + detail::fmt_num(rep.total_m) + "\r\n";
    }
    return out;
}

/// The published five-method comparison: F_p multiples are relative to the
/// cheapest method (LSR V2), model-size multiples to the smallest (SRCNN).
struct ComparisonRow {
    std::string name, title;
    double fp = 0.0, m = 0.0;
    double fp_ratio = 0.0, m_ratio = 0.0;
};

inline std::vector<ComparisonRow> comparison_table(long long basis_h = 344,
                                                   long long basis_w = 228) {
    std::vector<ComparisonRow> rows;
    for (const MethodDescriptor& m : builtin_methods(basis_h, basis_w)) {
        const ComplexityReport rep = eval_method(m);
        rows.push_back({rep.name, rep.title, rep.total_fp, rep.total_m, 0.0, 0.0});
    }
    double fp_base = 0.0, m_base = 0.0;
    for (const ComparisonRow& r : rows) {
        if (r.name == "lsr-v2") fp_base = r.fp;
        if (r.name == "srcnn") m_base = r.m;
    }
    for (ComparisonRow& r : rows) {
        r.fp_ratio = r.fp / fp_base;
        r.m_ratio = r.m / m_base;
    }
    return rows;
}

}  // namespace lsr
