// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails. argv[1] must be the CLI binary.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gazedist/evaluation.hpp"
#include "gazedist/features.hpp"
#include "gazedist/heatmap.hpp"
#include "gazedist/session_io.hpp"
#include "gazedist/svm.hpp"
#include "gazedist/synth.hpp"

using namespace gazedist;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, double seconds,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void run_criterion(int criterion, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(criterion, name, ok, seconds, detail);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion 1: projection geometry ----

bool geometry_criterion(std::string& detail) {
    const VirtualWall wall;
    std::mt19937_64 rng(1001);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> dx(0.0, 640.0), dy(0.0, 400.0);

    for (int i = 0; i < 1000; ++i) {
        // plane residual: a hit substituted back into the ray equation
        const GazeSample s{i, {0.3 * n(rng), 0.3 * n(rng), 0.3 * n(rng)},
                           Vec3{n(rng), n(rng), std::abs(n(rng)) + 0.2}.normalized(), true};
        if (const auto p = intersect_ray_plane(s, wall)) {
            const double t = (*p - s.head_position).norm();
            const Vec3 back = s.head_position + s.gaze_direction * t;
            if ((back - *p).norm() >= 1e-9) {
                detail = "plane residual exceeded 1e-9";
                return false;
            }
        }
        // pixel round trip
        const double px = dx(rng), py = dy(rng);
        const auto hit = wall_point_to_pixel(pixel_to_wall_point(px, py, wall), wall);
        if (!hit || std::abs(hit->px - px) >= 1e-6 || std::abs(hit->py - py) >= 1e-6) {
            detail = "pixel round trip exceeded 1e-6";
            return false;
        }
        // translation equivariance
        const Vec3 shift{n(rng), n(rng), n(rng)};
        VirtualWall moved_wall = wall;
        moved_wall.center = wall.center + shift;
        GazeSample moved = s;
        moved.head_position = s.head_position + shift;
        const auto a = project_sample(s, wall);
        const auto b = project_sample(moved, moved_wall);
        if (a.has_value() != b.has_value()) {
            detail = "translation changed hit/miss";
            return false;
        }
        if (a && (std::abs(a->px - b->px) >= 1e-9 || std::abs(a->py - b->py) >= 1e-9)) {
            detail = "translation equivariance exceeded 1e-9";
            return false;
        }
    }
    detail = "1000 randomized cases";
    return true;
}

// ---- criterion 2: heatmap pipeline invariants ----

bool heatmap_criterion(std::string& detail) {
    const VirtualWall wall;
    HeatmapConfig cfg;
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> dx(0.0, 640.0), dy(0.0, 400.0);
    std::uniform_int_distribution<int> count(1, 80);

    for (int w = 0; w < 200; ++w) {
        std::vector<WallHit> hits;
        const int m = count(rng);
        for (int i = 0; i < m; ++i) hits.push_back({i * 50, dx(rng), dy(rng)});
        const Heatmap a = build_heatmap_from_hits(hits, {0, 30000}, wall, cfg);
        const Heatmap b = build_heatmap_from_hits(hits, {0, 30000}, wall, cfg);
        if (!(a.grid == b.grid)) {
            detail = "rerun was not bit-identical";
            return false;
        }
        for (std::size_t i = 0; i < a.grid.size(); ++i)
            if (a.grid.data()[i] < 0.0 || a.grid.data()[i] > 1.0) {
                detail = "intensity left [0,1]";
                return false;
            }
    }

    // disc support: one centered stamp covers exactly the lattice disc
    const Grid g = stamp_accumulate({{{0, 320.0, 200.0}}}, 640, 400, cfg.fov_radius_px);
    int support = 0, expected = 0;
    for (std::size_t i = 0; i < g.size(); ++i) support += g.data()[i] != 0.0 ? 1 : 0;
    const int r = cfg.fov_radius_px;
    for (int ddx = -r; ddx <= r; ++ddx)
        for (int ddy = -r; ddy <= r; ++ddy)
            if (ddx * ddx + ddy * ddy <= r * r) ++expected;
    if (support != expected) {
        detail = "stamp support != lattice disc";
        return false;
    }

    // stamp additivity over concatenated hit lists
    std::vector<WallHit> h1, h2;
    for (int i = 0; i < 30; ++i) h1.push_back({i * 50, dx(rng), dy(rng)});
    for (int i = 0; i < 30; ++i) h2.push_back({i * 50, dx(rng), dy(rng)});
    std::vector<WallHit> both = h1;
    both.insert(both.end(), h2.begin(), h2.end());
    const Grid s1 = stamp_accumulate(h1, 640, 400, r);
    const Grid s2 = stamp_accumulate(h2, 640, 400, r);
    const Grid sb = stamp_accumulate(both, 640, 400, r);
    for (std::size_t i = 0; i < sb.size(); ++i)
        if (sb.data()[i] != s1.data()[i] + s2.data()[i]) {
            detail = "stamping is not additive";
            return false;
        }

    // blur preserves a constant field
    Grid c(640, 400, 0.42);
    gaussian_blur(c, cfg.blur_sigma_px, cfg.blur_kernel_px);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (std::abs(c.data()[i] - 0.42) >= 1e-9) {
            detail = "blur distorted a constant field";
            return false;
        }

    detail = "200 randomized windows";
    return true;
}

// ---- criterion 3: feature extraction vs a naive reference ----

bool features_criterion(std::string& detail) {
    const VirtualWall wall;
    HeatmapConfig cfg;
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> dx(40.0, 600.0), dy(40.0, 360.0);
    std::uniform_int_distribution<int> count(3, 50);

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<WallHit> hits;
        const int m = count(rng);
        for (int i = 0; i < m; ++i) hits.push_back({i * 50, dx(rng), dy(rng)});
        Heatmap hm = build_heatmap_from_hits(hits, {0, 30000}, wall, cfg);
        const FeatureVector f = extract_features(hm);

        // naive histogram tally straight off the grid
        std::array<std::int64_t, kHistogramBins> naive_hist{};
        for (std::size_t i = 0; i < hm.grid.size(); ++i) {
            const double v = hm.grid.data()[i];
            int bin = static_cast<int>(v * kHistogramBins);
            if (bin >= kHistogramBins) bin = kHistogramBins - 1;
            ++naive_hist[bin];
        }
        for (int b = 0; b < kHistogramBins; ++b)
            if (f[b] != static_cast<double>(naive_hist[b])) {
                detail = "histogram disagreed with the naive tally";
                return false;
            }

        // naive per-zone area/perimeter/centroid on the thresholded masks
        double prev_area = static_cast<double>(hm.grid.size()) + 1.0;
        for (int z = 0; z < kZoneCount; ++z) {
            const double thr = 0.2 * (z + 1);
            double area = 0.0, perim = 0.0, cx = 0.0, cy = 0.0;
            const int w = hm.grid.width(), h = hm.grid.height();
            const auto in_zone = [&](int x, int y) {
                return x >= 0 && x < w && y >= 0 && y < h && hm.grid.at(x, y) >= thr;
            };
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    if (!in_zone(x, y)) continue;
                    area += 1.0;
                    cx += x;
                    cy += y;
                    if (!in_zone(x - 1, y) || !in_zone(x + 1, y) || !in_zone(x, y - 1) ||
                        !in_zone(x, y + 1))
                        perim += 1.0;
                }
            const std::size_t base = kHistogramBins + static_cast<std::size_t>(z) *
                                                          kZoneStatCount;
            if (f[base + 14] != area || f[base + 15] != perim) {
                detail = "zone area/perimeter disagreed with the naive scan";
                return false;
            }
            if (area > 0.0) {
                if (std::abs(f[base + 2] - cx / area) >= 1e-9 ||
                    std::abs(f[base + 3] - cy / area) >= 1e-9) {
                    detail = "zone centroid disagreed with the naive scan";
                    return false;
                }
                if (f[base + 16] != 1.0) {
                    detail = "present flag wrong for a populated zone";
                    return false;
                }
            } else if (f[base + 16] != 0.0) {
                detail = "present flag wrong for an empty zone";
                return false;
            }
            // monotonicity: higher thresholds can only shrink the zone
            if (area > prev_area) {
                detail = "zone areas are not nested";
                return false;
            }
            prev_area = area;
        }
    }
    detail = "100 randomized heatmaps";
    return true;
}

// ---- criterion 4: SMO vs an independent QP reference ----

std::vector<double> project_feasible(std::vector<double> v, const std::vector<int>& y,
                                     double c) {
    const auto residual = [&](double lambda) {
        double r = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            r += y[i] * std::clamp(v[i] - lambda * y[i], 0.0, c);
        return r;
    };
    double lo = -1e6, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::clamp(v[i] - lambda * y[i], 0.0, c);
    return v;
}

bool svm_criterion(std::string& detail) {
    std::mt19937_64 rng(4004);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double gamma = 0.5, c = 1.0;

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (int i = 0; i < 10; ++i) {
            const double shift = i < 5 ? -0.6 : 0.6;
            x.push_back({noise(rng) + shift, noise(rng) + shift, noise(rng)});
            y.push_back(i < 5 ? -1 : 1);
        }
        const TrainedModel model = train_svm(x, y, {gamma, c}, 4000 + trial);

        std::vector<std::vector<double>> k(10, std::vector<double>(10));
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) k[i][j] = rbf_kernel(x[i], x[j], gamma);

        // dual objective from the trained model
        double smo_obj = 0.0;
        const auto nsv = model.support_vectors.size();
        for (std::size_t i = 0; i < nsv; ++i) smo_obj += std::abs(model.dual_coefs[i]);
        for (std::size_t i = 0; i < nsv; ++i)
            for (std::size_t j = 0; j < nsv; ++j)
                smo_obj -= 0.5 * model.dual_coefs[i] * model.dual_coefs[j] *
                           rbf_kernel(model.support_vectors[i], model.support_vectors[j],
                                      gamma);

        // independent projected-gradient reference
        std::vector<double> alpha(10, 0.0);
        for (int it = 0; it < 50000; ++it) {
            std::vector<double> next(10);
            for (int i = 0; i < 10; ++i) {
                double grad = 1.0;
                for (int j = 0; j < 10; ++j) grad -= alpha[j] * y[i] * y[j] * k[i][j];
                next[i] = alpha[i] + 0.05 * grad;
            }
            alpha = project_feasible(std::move(next), y, c);
        }
        double ref_obj = 0.0;
        for (int i = 0; i < 10; ++i) ref_obj += alpha[i];
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                ref_obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];

        if (std::abs(smo_obj - ref_obj) >= 1e-4) {
            detail = "dual objective off the reference by " +
                     std::to_string(std::abs(smo_obj - ref_obj));
            return false;
        }

        // KKT conditions at tolerance scale, matching alphas by vector identity
        for (int i = 0; i < 10; ++i) {
            double a_i = 0.0;
            for (std::size_t s = 0; s < nsv; ++s)
                if (model.support_vectors[s] == x[i]) a_i = std::abs(model.dual_coefs[s]);
            const double margin = y[i] * decision_value(model, x[i]);
            if (a_i < 1e-9 && margin < 1.0 - 5e-3) {
                detail = "KKT: zero-alpha point inside the margin";
                return false;
            }
            if (a_i > c - 1e-9 && margin > 1.0 + 5e-3) {
                detail = "KKT: bound point outside the margin";
                return false;
            }
            if (a_i > 1e-9 && a_i < c - 1e-9 && std::abs(margin - 1.0) > 5e-3) {
                detail = "KKT: free point off the margin";
                return false;
            }
        }

        // decision values agree with a brute-force kernel sum
        for (int probe = 0; probe < 20; ++probe) {
            const std::vector<double> q{noise(rng), noise(rng), noise(rng)};
            double ref = model.bias;
            for (std::size_t s = 0; s < nsv; ++s)
                ref += model.dual_coefs[s] * rbf_kernel(model.support_vectors[s], q, gamma);
            if (std::abs(decision_value(model, q) - ref) >= 1e-9) {
                detail = "decision value disagreed with the kernel sum";
                return false;
            }
        }
    }
    detail = "20 randomized quadratic programs";
    return true;
}

// ---- criteria 5 and 6 share one synthetic corpus ----

std::vector<SessionHits> project_corpus(const std::vector<SessionRecording>& corpus) {
    std::vector<SessionHits> sessions;
    for (const SessionRecording& rec : corpus) {
        SessionHits sh;
        sh.driver_id = rec.driver_id;
        sh.label = rec.label;
        if (!rec.samples.empty())
            sh.span = {rec.samples.front().timestamp_ms,
                       rec.samples.back().timestamp_ms + rec.sample_period_ms};
        for (const GazeSample& s : rec.samples)
            if (const auto hit = project_sample(s, rec.wall)) sh.hits.push_back(*hit);
        sessions.push_back(std::move(sh));
    }
    return sessions;
}

bool end_to_end_criterion(const std::vector<SessionHits>& sessions, std::string& detail) {
    const VirtualWall wall;
    HeatmapConfig cfg;
    cfg.window_s = 30.0;
    cfg.stride_s = 1.0;
    const Dataset ds = build_dataset(sessions, wall, cfg);
    EvalConfig ecfg;
    ecfg.window_s = 30.0;
    ecfg.seed = 42;
    const auto splits = split_leave_one_driver_out(ds);
    const EvalReport report = run_cv(ds, splits, ecfg);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "accuracy %.2f%%, F1 %.3f over %zu windows",
                  report.accuracy_percent, report.f1, ds.entries.size());
    detail = buf;
    return report.accuracy_percent >= 80.0 && report.f1 >= 0.75;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i] / n;
        mb += rb[i] / n;
    }
    double num = 0, da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    return num / std::sqrt(da * db);
}

bool sweep_criterion(const std::vector<SessionHits>& sessions, std::string& detail) {
    const VirtualWall wall;
    HeatmapConfig base;
    EvalConfig ecfg;
    ecfg.seed = 42;
    const std::vector<double> windows{5, 10, 15, 20, 25, 30};
    const auto rows = window_sweep(sessions, windows, wall, base, ecfg);
    std::vector<double> acc;
    std::string table;
    for (const SweepRow& r : rows) {
        acc.push_back(r.accuracy_percent);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g:%.1f%% ", r.window_s, r.accuracy_percent);
        table += buf;
    }
    const double rho = spearman(windows, acc);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "spearman %.3f", rho);
    detail = table + buf;
    return rho >= 0.8;
}

// ---- criterion 7: dual-window combination fixture ----

bool dual_window_criterion(std::string& detail) {
    constexpr int N = kLabelNeutral, D = kLabelDistracted;
    const std::vector<Verdict> fast{{10000, N}, {11000, D}, {12000, D}, {13000, N},
                                    {15000, N}, {60000, D}, {61000, N}, {62000, N}};
    const std::vector<Verdict> slow{{12000, D}, {14000, N}, {15000, N}, {90000, N}};
    const std::vector<Alert> expected{{11000, AlertKind::Onset},
                                      {12000, AlertKind::Confirmed},
                                      {14000, AlertKind::Cleared},
                                      {60000, AlertKind::Onset},
                                      {61000, AlertKind::Cleared}};
    const auto alerts = dual_window_combine(fast, slow, 30.0);
    if (alerts != expected) {
        detail = "alert stream differed from the scripted expectation (" +
                 std::to_string(alerts.size()) + " alerts)";
        return false;
    }
    detail = "scripted onset/confirm/clear fixture";
    return true;
}

// ---- criterion 8: CLI reproducibility ----

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool identical_trees(const fs::path& a, const fs::path& b, std::string& detail) {
    std::vector<fs::path> rel;
    for (const auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), a));
    std::sort(rel.begin(), rel.end());
    if (rel.empty()) {
        detail = "no output files produced";
        return false;
    }
    for (const fs::path& r : rel) {
        if (!fs::exists(b / r)) {
            detail = "missing " + r.string() + " on rerun";
            return false;
        }
        if (slurp(a / r) != slurp(b / r)) {
            detail = r.string() + " differed between reruns";
            return false;
        }
    }
    return true;
}

bool cli_criterion(const std::string& cli, std::string& detail) {
    const fs::path root = fs::temp_directory_path() / "gazedist_acceptance";
    fs::remove_all(root);
    const fs::path run1 = root / "run1", run2 = root / "run2";

    for (const fs::path& run : {run1, run2}) {
        const std::string dir = (run / "corpus").string();
        if (run_cli(cli, "synth --drivers 2 --duration 60 --seed 7 --out \"" + dir + "\"") !=
            0) {
            detail = "synth failed";
            return false;
        }
        const std::string gaze = dir + "/driver01_neutral.gaze";
        if (run_cli(cli, "heatmap --in \"" + gaze + "\" --out \"" + (run / "hm").string() +
                             "\"") != 0) {
            detail = "heatmap failed";
            return false;
        }
        // pick a deterministic pgm for rendering
        std::vector<fs::path> pgms;
        for (const auto& e : fs::directory_iterator(run / "hm"))
            if (e.path().extension() == ".pgm") pgms.push_back(e.path());
        std::sort(pgms.begin(), pgms.end());
        if (pgms.empty()) {
            detail = "no heatmaps written";
            return false;
        }
        if (run_cli(cli, "render --in \"" + pgms.front().string() + "\" --out \"" +
                             (run / "frame.ppm").string() + "\"") != 0) {
            detail = "render failed";
            return false;
        }
        const std::string csv = (run / "features.csv").string();
        if (run_cli(cli, "features --in \"" + dir + "\" --out \"" + csv + "\"") != 0) {
            detail = "features failed";
            return false;
        }
        if (run_cli(cli, "train --features \"" + csv + "\" --seed 42 --out \"" +
                             (run / "svm.model.json").string() + "\"") != 0) {
            detail = "train failed";
            return false;
        }
        if (run_cli(cli, "eval --features \"" + csv + "\" --seed 42 --out \"" +
                             (run / "eval.report.json").string() + "\"") != 0) {
            detail = "eval failed";
            return false;
        }
    }
    if (!identical_trees(run1, run2, detail)) return false;
    detail = "synth/heatmap/render/features/train/eval reruns byte-identical";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <cli-binary>\n");
        return 2;
    }
    const std::string cli = argv[1];

    run_criterion(1, "ray projection geometry", geometry_criterion);
    run_criterion(2, "heatmap pipeline invariants", heatmap_criterion);
    run_criterion(3, "feature extraction vs naive reference", features_criterion);
    run_criterion(4, "SMO optimality vs independent QP reference", svm_criterion);

    const VirtualWall wall;
    const auto t0 = std::chrono::steady_clock::now();
    const auto corpus = make_corpus(5, 180.0, 42, wall);
    const auto sessions = project_corpus(corpus);
    std::printf("       corpus: 5 drivers x 2 x 180 s generated in %.1fs\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    run_criterion(5, "cross-validated detection quality",
                  [&](std::string& d) { return end_to_end_criterion(sessions, d); });
    run_criterion(6, "window-size sweep trend",
                  [&](std::string& d) { return sweep_criterion(sessions, d); });
    run_criterion(7, "dual-window alert policy", dual_window_criterion);
    run_criterion(8, "CLI byte-level reproducibility",
                  [&](std::string& d) { return cli_criterion(cli, d); });

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
