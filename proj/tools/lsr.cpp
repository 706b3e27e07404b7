// Command-line front end: train models, super-resolve images, evaluate
// against reference images, inspect model files, and print the complexity
// tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsr/complexity.hpp"
#include "lsr/metrics.hpp"
#include "lsr/model.hpp"
#include "lsr/pipeline.hpp"
#include "lsr/png_io.hpp"

namespace fs = std::filesystem;
using namespace lsr;

namespace {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::Parameter: return 2;
        case ErrorKind::Io:        return 3;
        case ErrorKind::Data:      return 4;
        case ErrorKind::Training:  return 5;
        case ErrorKind::Dimension: return 6;
    }
    return 1;
}

std::vector<fs::path> png_files(const std::string& dir) {
    if (!fs::is_directory(dir)) fail(ErrorKind::Io, "not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) fail(ErrorKind::Io, "no .png images found in " + dir);
    return files;
}

RunConfig build_config(const std::string& variant, const std::string& config_path,
                       const std::vector<std::string>& sets, int threads) {
    RunConfig cfg = RunConfig::defaults(Variant::V1);
    if (!variant.empty()) apply_setting(cfg, "variant", variant);
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (threads > 0) cfg.threads = threads;
    cfg.validate();
    return cfg;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

int cmd_train(const std::string& train_dir, const std::string& model_out, const RunConfig& cfg) {
    std::vector<YImage> images;
    for (const fs::path& p : png_files(train_dir)) {
        try {
            images.push_back(read_luma_png(p.string()));
        } catch (const Error& e) {
            std::cerr << "warning: skipping unreadable image " << p << ": " << e.what() << "\n";
        }
    }
    if (images.empty()) fail(ErrorKind::Io, "no readable training images in " + train_dir);
    const LsrModel model = train_lsr(images, cfg, &std::cerr);
    save_model(model_out, model);
    std::cout << "wrote " << model_out << "\n";
    return 0;
}

int cmd_sr(const std::string& model_path, const std::string& input, const std::string& output,
           bool color, int threads) {
    const LsrModel model = load_model(model_path);
    if (!color) {
        const YImage sr = superresolve(model, read_luma_png(input), threads);
        write_gray_png(output, sr);
    } else {
        const Rgb8Image rgb = read_rgb_png(input);
        YImage y(rgb.height, rgb.width), cb(rgb.height, rgb.width), cr(rgb.height, rgb.width);
        for (std::size_t i = 0; i < y.data.size(); ++i)
            rgb_to_ycbcr(rgb.r[i], rgb.g[i], rgb.b[i], y.data[i], cb.data[i], cr.data[i]);
        const YImage sr_y = superresolve(model, y, threads);
        // chroma carries little structure; the plain Lanczos upscale suffices
        const YImage up_cb = lanczos_upscale(cb, model.scale);
        const YImage up_cr = lanczos_upscale(cr, model.scale);
        Rgb8Image out;
        out.height = sr_y.height;
        out.width = sr_y.width;
        const std::size_t n = sr_y.data.size();
        out.r.resize(n);
        out.g.resize(n);
        out.b.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double r, g, b;
            ycbcr_to_rgb(sr_y.data[i], up_cb.data[i], up_cr.data[i], r, g, b);
            out.r[i] = static_cast<std::uint8_t>(std::clamp(std::round(r), 0.0, 255.0));
            out.g[i] = static_cast<std::uint8_t>(std::clamp(std::round(g), 0.0, 255.0));
            out.b[i] = static_cast<std::uint8_t>(std::clamp(std::round(b), 0.0, 255.0));
        }
        write_rgb_png(output, out);
    }
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& hr_dir, const std::string& csv_path,
             int threads) {
    const LsrModel model = load_model(model_path);
    struct Row {
        std::string name;
        double psnr_sr, ssim_sr, psnr_base, ssim_base;
    };
    std::vector<Row> rows;
    for (const fs::path& p : png_files(hr_dir)) {
        const YImage hr = modcrop(read_luma_png(p.string()), model.scale);
        const YImage lr = bicubic_downsample(hr, model.scale);
        const YImage base = lanczos_upscale(lr, model.scale);
        const YImage sr = superresolve(model, lr, threads);
        rows.push_back({p.filename().string(), psnr(hr, sr), ssim(hr, sr), psnr(hr, base),
                        ssim(hr, base)});
    }
    Row mean{"mean", 0, 0, 0, 0};
    for (const Row& r : rows) {
        mean.psnr_sr += r.psnr_sr / static_cast<double>(rows.size());
        mean.ssim_sr += r.ssim_sr / static_cast<double>(rows.size());
        mean.psnr_base += r.psnr_base / static_cast<double>(rows.size());
        mean.ssim_base += r.ssim_base / static_cast<double>(rows.size());
    }
    rows.push_back(mean);

    std::size_t name_w = 5;
    for (const Row& r : rows) name_w = std::max(name_w, r.name.size());
    std::printf("%-*s  %9s  %7s  %9s  %7s\n", static_cast<int>(name_w), "image", "PSNR", "SSIM",
                "PSNR-L", "SSIM-L");
    for (const Row& r : rows)
        std::printf("%-*s  %9.4f  %7.4f  %9.4f  %7.4f\n", static_cast<int>(name_w), r.name.c_str(),
                    r.psnr_sr, r.ssim_sr, r.psnr_base, r.ssim_base);

    if (!csv_path.empty()) {
        std::ofstream os(csv_path, std::ios::binary);
        if (!os) fail(ErrorKind::Io, "cannot write " + csv_path);
        os << "image,psnr,ssim,psnr_lanczos,ssim_lanczos\r\n";
        for (const Row& r : rows) {
            std::ostringstream line;
            line << csv_field(r.name) << ',' << r.psnr_sr << ',' << r.ssim_sr << ','
                 << r.psnr_base << ',' << r.ssim_base;
            os << line.str() << "\r\n";
        }
        std::cout << "wrote " << csv_path << "\n";
    }
    return 0;
}

int cmd_complexity(std::vector<std::string> names, long long height, long long width,
                   const std::string& csv_path) {
    const bool all =
        names.empty() || (names.size() == 1 && names[0] == "all");
    if (all) {
        names.clear();
        for (const MethodDescriptor& m : builtin_methods(height, width)) names.push_back(m.name);
    }
    std::vector<ComplexityReport> reports;
    for (const std::string& name : names)
        reports.push_back(eval_method(find_method(name, height, width)));

    if (!csv_path.empty()) {
        std::ofstream os(csv_path, std::ios::binary);
        if (!os) fail(ErrorKind::Io, "cannot write " + csv_path);
        for (std::size_t i = 0; i < reports.size(); ++i) {
            std::string csv = report_csv(reports[i]);
            if (i > 0) csv.erase(0, csv.find("\r\n") + 2);  // one shared header
            os << csv;
        }
        std::cout << "wrote " << csv_path << "\n";
        return 0;
    }

    for (const ComplexityReport& rep : reports) std::cout << report_text(rep) << "\n";
    if (all) {
        std::cout << "Relative cost (FLOPs/pixel vs lsr-v2, model size vs srcnn)\n";
        for (const ComparisonRow& row : comparison_table(height, width)) {
            std::printf("  %-7s  %8.2fX  %8.2fX\n", row.name.c_str(), row.fp_ratio, row.m_ratio);
        }
    }
    return 0;
}

int cmd_inspect(const std::string& model_path) {
    const LsrModel model = load_model(model_path);
    auto branch_line = [](const char* name, const BranchModel& b) {
        std::ostringstream os;
        os << name << ": types";
        for (int t = 1; t <= 5; ++t)
            if (b.spec.has(t)) os << ' ' << t;
        os << " (pool " << b.spec.pool_width() << "), " << b.selected_ids.size()
           << " selected features, " << b.clusters.k << " cluster(s), "
           << (b.regressors.empty() ? 0 : b.regressors[0].trees.size()) << " trees of depth "
           << (b.regressors.empty() ? 0 : b.regressors[0].max_depth) << ", fusion "
           << b.fusion;
        return os.str();
    };
    std::cout << "variant " << variant_name(model.variant) << ", scale x" << model.scale
              << ", variance threshold " << model.variance_threshold << ", seed " << model.seed
              << "\n";
    std::cout << branch_line("easy", model.easy) << "\n";
    std::cout << branch_line("hard", model.hard) << "\n";

    const ComplexityReport rep = eval_method(method_lsr(settings_from_model(model)));
    std::cout << "complexity: easy " << rep.easy_fp << " F_p / " << rep.easy_m << " M, hard "
              << rep.hard_fp << " F_p / " << rep.hard_m << " M, total " << rep.total_fp
              << " F_p / " << rep.total_m << " M\n";
    std::cout << "--- training manifest ---\n" << model.manifest;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LSR: lightweight example-based super-resolution (x2, luma)"};
    app.require_subcommand(1);

    std::string variant, config_path, model_path, train_dir, hr_dir, input, output, csv_path;
    std::vector<std::string> sets, methods;
    int threads = 0;
    bool color = false;
    long long height = 344, width = 228;

    CLI::App* train = app.add_subcommand("train", "Train a model on a directory of PNG images");
    train->add_option("--train-dir", train_dir, "directory of training images")->required();
    train->add_option("--out", output, "output model path")->required();
    train->add_option("--variant", variant, "model variant: v1 or v2");
    train->add_option("--config", config_path, "key=value configuration file");
    train->add_option("--set", sets, "override one setting, e.g. --set hard_trees=100");
    train->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI::App* sr = app.add_subcommand("sr", "Super-resolve one image by x2");
    sr->add_option("--model", model_path, "trained model file")->required();
    sr->add_option("--input", input, "low-resolution input PNG")->required();
    sr->add_option("--output", output, "output PNG path")->required();
    sr->add_flag("--color", color, "RGB output (luma model + Lanczos chroma)");
    sr->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI::App* eval = app.add_subcommand("eval", "Evaluate PSNR/SSIM against reference images");
    eval->add_option("--model", model_path, "trained model file")->required();
    eval->add_option("--hr-dir", hr_dir, "directory of reference images")->required();
    eval->add_option("--csv", csv_path, "also write results as CSV");
    eval->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI::App* cx = app.add_subcommand("complexity", "Print FLOPs and model-size tables");
    cx->add_option("methods", methods, "method names or 'all' (aplus, srcnn, vdsr, lsr-v1, lsr-v2)");
    cx->add_option("--height", height, "reference image height (default 344)");
    cx->add_option("--width", width, "reference image width (default 228)");
    cx->add_option("--csv", csv_path, "write the report as CSV instead of text");

    CLI::App* inspect = app.add_subcommand("inspect-model", "Describe a trained model file");
    inspect->add_option("--model", model_path, "trained model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed())
            return cmd_train(train_dir, output, build_config(variant, config_path, sets, threads));
        if (sr->parsed()) return cmd_sr(model_path, input, output, color, threads);
        if (eval->parsed()) return cmd_eval(model_path, hr_dir, csv_path, threads);
        if (cx->parsed()) return cmd_complexity(methods, height, width, csv_path);
        if (inspect->parsed()) return cmd_inspect(model_path);
    } catch (const Error& e) {
        std::cerr << "lsr: " << error_kind_name(e.kind()) << " error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "lsr: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
