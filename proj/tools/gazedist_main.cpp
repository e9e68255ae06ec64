// Command-line front end for the gaze-dispersion distraction pipeline.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 training error.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gazedist/evaluation.hpp"
#include "gazedist/render.hpp"
#include "gazedist/session_io.hpp"
#include "gazedist/synth.hpp"

namespace fs = std::filesystem;
using namespace gazedist;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitTraining = 4;

struct HeatmapFlags {
    double window_s = 30.0;
    double stride_s = 1.0;
    int fov_radius = 15;
    double sigma = 5.0;
    int kernel = 21;

    void attach(CLI::App* cmd) {
        cmd->add_option("--window", window_s, "Window size in seconds")
            ->capture_default_str();
        cmd->add_option("--stride", stride_s, "Window stride in seconds")
            ->capture_default_str();
        cmd->add_option("--fov-radius", fov_radius, "Field-of-view stamp radius in pixels")
            ->capture_default_str();
        cmd->add_option("--blur-sigma", sigma, "Gaussian blur sigma in pixels")
            ->capture_default_str();
        cmd->add_option("--blur-kernel", kernel, "Gaussian blur kernel size (odd)")
            ->capture_default_str();
    }
    HeatmapConfig config() const {
        HeatmapConfig cfg;
        cfg.window_s = window_s;
        cfg.stride_s = stride_s;
        cfg.fov_radius_px = fov_radius;
        cfg.blur_sigma_px = sigma;
        cfg.blur_kernel_px = kernel;
        return cfg;
    }
};

std::vector<fs::path> collect_gaze_files(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.path().extension() == ".gaze") files.push_back(entry.path());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

SessionHits project_session(const SessionRecording& rec) {
    SessionHits sh;
    sh.driver_id = rec.driver_id;
    sh.label = rec.label;
    if (!rec.samples.empty())
        sh.span = {rec.samples.front().timestamp_ms,
                   rec.samples.back().timestamp_ms + rec.sample_period_ms};
    for (const GazeSample& s : rec.samples)
        if (const auto hit = project_sample(s, rec.wall)) sh.hits.push_back(*hit);
    return sh;
}

std::vector<SessionHits> load_sessions(const std::vector<std::string>& inputs,
                                       VirtualWall& wall) {
    std::vector<SessionHits> sessions;
    for (const fs::path& f : collect_gaze_files(inputs)) {
        const SessionRecording rec = read_session(f);
        wall = rec.wall;
        sessions.push_back(project_session(rec));
    }
    return sessions;
}

std::vector<double> parse_windows(const std::string& list) {
    std::vector<double> out;
    std::string cell;
    std::stringstream ss(list);
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaze-dispersion heatmap pipeline for distraction detection"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "Worker threads for window processing")
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic gaze corpus");
    int drivers = 5;
    std::uint64_t seed = 42;
    double duration_s = 90.0;
    std::string out_dir = ".";
    synth->add_option("--drivers", drivers, "Number of drivers")->capture_default_str();
    synth->add_option("--seed", seed, "Generator seed")->capture_default_str();
    synth->add_option("--duration", duration_s, "Session duration in seconds")
        ->capture_default_str();
    synth->add_option("--out", out_dir, "Output directory")->required();

    // heatmap
    auto* heatmap = app.add_subcommand("heatmap", "Build sliding-window heatmaps");
    std::string hm_in;
    std::string hm_out;
    HeatmapFlags hm_flags;
    heatmap->add_option("--in", hm_in, "Input .gaze session")->required();
    heatmap->add_option("--out", hm_out, "Output directory")->required();
    hm_flags.attach(heatmap);

    // render
    auto* render = app.add_subcommand("render", "Render a heatmap to a color image");
    std::string render_in, render_out, colormap = "jet";
    render->add_option("--in", render_in, "Input heatmap .pgm")->required();
    render->add_option("--colormap", colormap, "Colormap name")->capture_default_str();
    render->add_option("--out", render_out, "Output .ppm image")->required();

    // features
    auto* features = app.add_subcommand("features", "Extract feature vectors from sessions");
    std::vector<std::string> feat_in;
    std::string feat_out;
    HeatmapFlags feat_flags;
    features->add_option("--in", feat_in, "Input .gaze files or directories")->required();
    features->add_option("--out", feat_out, "Output feature CSV")->required();
    feat_flags.attach(features);

    // train
    auto* train = app.add_subcommand("train", "Train the max-margin classifier");
    std::string train_features, train_out, train_scaling = "dataset";
    double train_c = 1.0, train_gamma = 0.0;
    std::uint64_t train_seed = 42;
    train->add_option("--features", train_features, "Input feature CSV")->required();
    train->add_option("--out", train_out, "Output model file")->required();
    train->add_option("--c", train_c, "Box constraint C")->capture_default_str();
    train->add_option("--gamma", train_gamma,
                      "RBF gamma; 0 derives 1/(n_features * mean variance)")
        ->capture_default_str();
    train->add_option("--seed", train_seed, "Training seed")->capture_default_str();
    train->add_option("--scaling", train_scaling, "dataset | per-heatmap")
        ->capture_default_str()
        ->check(CLI::IsMember({"dataset", "per-heatmap"}));

    // eval
    auto* eval = app.add_subcommand("eval", "Cross-validate or score a saved model");
    std::string eval_features, eval_out, eval_mode = "lodo", eval_model,
                eval_scaling = "dataset";
    double eval_c = 1.0, eval_gamma = 0.0;
    int eval_k = 10;
    std::uint64_t eval_seed = 42;
    eval->add_option("--features", eval_features, "Input feature CSV")->required();
    eval->add_option("--out", eval_out, "Output report JSON")->required();
    eval->add_option("--mode", eval_mode, "lodo | stratified")
        ->capture_default_str()
        ->check(CLI::IsMember({"lodo", "stratified"}));
    eval->add_option("--k", eval_k, "Fold count for stratified mode")->capture_default_str();
    eval->add_option("--model", eval_model, "Score this saved model instead of running CV");
    eval->add_option("--c", eval_c, "Box constraint C")->capture_default_str();
    eval->add_option("--gamma", eval_gamma, "RBF gamma; 0 derives from data")
        ->capture_default_str();
    eval->add_option("--seed", eval_seed, "Seed for folds and training")
        ->capture_default_str();
    eval->add_option("--scaling", eval_scaling, "dataset | per-heatmap")
        ->capture_default_str()
        ->check(CLI::IsMember({"dataset", "per-heatmap"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Window-size sweep over a session corpus");
    std::vector<std::string> sweep_in;
    std::string sweep_windows = "5,10,15,20,25,30", sweep_mode = "lodo", sweep_out;
    double sweep_stride = 1.0, sweep_c = 1.0, sweep_gamma = 0.0;
    std::uint64_t sweep_seed = 42;
    sweep->add_option("--in", sweep_in, "Input .gaze files or directories")->required();
    sweep->add_option("--windows", sweep_windows, "Comma-separated window sizes in seconds")
        ->capture_default_str();
    sweep->add_option("--stride", sweep_stride, "Window stride in seconds")
        ->capture_default_str();
    sweep->add_option("--mode", sweep_mode, "lodo | stratified")
        ->capture_default_str()
        ->check(CLI::IsMember({"lodo", "stratified"}));
    sweep->add_option("--c", sweep_c, "Box constraint C")->capture_default_str();
    sweep->add_option("--gamma", sweep_gamma, "RBF gamma; 0 derives from data")
        ->capture_default_str();
    sweep->add_option("--seed", sweep_seed, "Seed for folds and training")
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "Optional output file for the table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*synth) {
            if (drivers < 2) {
                std::cerr << "synth: --drivers must be >= 2\n";
                return kExitUsage;
            }
            fs::create_directories(out_dir);
            const VirtualWall wall;
            const auto corpus = make_corpus(drivers, duration_s, seed, wall);
            for (const SessionRecording& rec : corpus) {
                const fs::path path = fs::path(out_dir) / (rec.driver_id + "_" + rec.label +
                                                           ".gaze");
                write_session(path, rec);
                std::cout << path.string() << ' ' << rec.samples.size() << " samples\n";
            }
        } else if (*heatmap) {
            const SessionRecording rec = read_session(hm_in);
            if (rec.samples.empty()) {
                std::cerr << "heatmap: " << hm_in << " contains no samples\n";
                return 0;
            }
            fs::create_directories(hm_out);
            const SessionHits sh = project_session(rec);
            const HeatmapConfig cfg = hm_flags.config();
            const auto windows = window_hits(sh.hits, sh.span, cfg);
            const std::string stem = fs::path(hm_in).stem().string();
            for (const HitWindow& w : windows) {
                Heatmap hm = build_heatmap_from_hits(w.hits, w.range, rec.wall, cfg);
                hm.driver_id = rec.driver_id;
                hm.ground_truth = rec.label;
                char name[128];
                std::snprintf(name, sizeof(name), "%s_w%08lld.pgm", stem.c_str(),
                              static_cast<long long>(w.range.start_ms));
                write_heatmap(fs::path(hm_out) / name, hm);
            }
            if (windows.empty())
                std::cerr << "heatmap: session shorter than the window, nothing written\n";
        } else if (*render) {
            if (colormap != "jet") {
                std::cerr << "render: unsupported colormap '" << colormap << "'\n";
                return kExitUsage;
            }
            const Heatmap hm = read_heatmap(render_in);
            render_ppm(render_out, hm.grid);
        } else if (*features) {
            VirtualWall wall;
            const auto sessions = load_sessions(feat_in, wall);
            if (sessions.empty()) {
                std::cerr << "features: no input sessions\n";
                return kExitData;
            }
            const Dataset ds = build_dataset(sessions, wall, feat_flags.config(), jobs);
            write_features(feat_out, ds);
        } else if (*train) {
            const Dataset ds = read_features(train_features);
            std::vector<FeatureVector> raw;
            std::vector<int> labels;
            for (const DatasetEntry& e : ds.entries) {
                raw.push_back(train_scaling == "per-heatmap"
                                  ? standardize_per_vector(e.features)
                                  : e.features);
                labels.push_back(e.label);
            }
            FeatureScaler scaler;
            if (train_scaling == "per-heatmap") {
                scaler.mean.assign(kFeatureCount, 0.0);
                scaler.stddev.assign(kFeatureCount, 1.0);
            } else {
                scaler = fit_scaler(raw);
            }
            std::vector<std::vector<double>> x;
            for (const FeatureVector& v : raw) {
                const auto scaled = apply_scaler(scaler, v);
                x.emplace_back(scaled.begin(), scaled.end());
            }
            try {
                TrainedModel model = train_svm(x, labels, {train_gamma, train_c}, train_seed);
                model.scaler = scaler;
                write_model(train_out, model);
            } catch (const std::invalid_argument& e) {
                std::cerr << "train: " << e.what() << '\n';
                return kExitTraining;
            }
        } else if (*eval) {
            const Dataset ds = read_features(eval_features);
            EvalConfig cfg;
            cfg.stride_s = 0.0;  // unknown at this stage; echoed as given
            cfg.params = {eval_gamma, eval_c};
            cfg.seed = eval_seed;
            cfg.mode = eval_mode;
            cfg.k = eval_k;
            cfg.scaling = eval_scaling;
            EvalReport report;
            if (!eval_model.empty()) {
                const TrainedModel model = read_model(eval_model);
                FoldSplit all;
                for (std::size_t i = 0; i < ds.entries.size(); ++i) all.test.push_back(i);
                std::vector<int> actual, predicted;
                for (const std::size_t i : all.test) {
                    const auto v = eval_scaling == "per-heatmap"
                                       ? standardize_per_vector(ds.entries[i].features)
                                       : ds.entries[i].features;
                    const auto scaled = apply_scaler(model.scaler, v);
                    actual.push_back(ds.entries[i].label);
                    predicted.push_back(predict(model, scaled));
                }
                report.config = cfg;
                FoldResult r;
                for (std::size_t i = 0; i < actual.size(); ++i)
                    ++r.counts[actual[i] == kLabelDistracted ? 1 : 0]
                              [predicted[i] == kLabelDistracted ? 1 : 0];
                const double total = static_cast<double>(actual.size());
                r.accuracy_percent =
                    100.0 * static_cast<double>(r.counts[0][0] + r.counts[1][1]) / total;
                const double tp = static_cast<double>(r.counts[1][1]);
                const double fp = static_cast<double>(r.counts[0][1]);
                const double fn = static_cast<double>(r.counts[1][0]);
                r.f1 = (2 * tp + fp + fn) > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
                report.folds.push_back(r);
                report.accuracy_percent = r.accuracy_percent;
                report.f1 = r.f1;
                for (int row = 0; row < 2; ++row) {
                    const double rt = static_cast<double>(r.counts[row][0] + r.counts[row][1]);
                    for (int col = 0; col < 2; ++col)
                        report.confusion[row][col] =
                            rt > 0 ? static_cast<double>(r.counts[row][col]) / rt
                                   : (row == col ? 1.0 : 0.0);
                }
            } else {
                try {
                    const auto splits = eval_mode == "stratified"
                                            ? split_stratified_kfold(ds, eval_k, eval_seed)
                                            : split_leave_one_driver_out(ds);
                    report = run_cv(ds, splits, cfg);
                } catch (const std::invalid_argument& e) {
                    std::cerr << "eval: " << e.what() << '\n';
                    return kExitData;
                }
            }
            write_report(eval_out, report);
            std::cout << report_text_table(report);
        } else if (*sweep) {
            VirtualWall wall;
            const auto sessions = load_sessions(sweep_in, wall);
            if (sessions.empty()) {
                std::cerr << "sweep: no input sessions\n";
                return kExitData;
            }
            HeatmapConfig base;
            base.stride_s = sweep_stride;
            EvalConfig ecfg;
            ecfg.stride_s = sweep_stride;
            ecfg.params = {sweep_gamma, sweep_c};
            ecfg.seed = sweep_seed;
            ecfg.mode = sweep_mode;
            const auto rows = window_sweep(sessions, parse_windows(sweep_windows), wall,
                                           base, ecfg);
            const std::string table = sweep_text_table(rows);
            std::cout << table;
            if (!sweep_out.empty()) {
                std::ofstream out(sweep_out);
                out << table;
            }
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.what() && std::string(e.what()).find("training") != std::string::npos
                   ? kExitTraining
                   : kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
