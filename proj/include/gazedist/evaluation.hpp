#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gazedist/features.hpp"
#include "gazedist/heatmap.hpp"
#include "gazedist/svm.hpp"

namespace gazedist {

struct DatasetEntry {
    FeatureVector features{};
    int label = kLabelNeutral;
    std::string driver_id;
    std::int64_t window_start_ms = 0;
};

struct Dataset {
    std::vector<DatasetEntry> entries;
};

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::set<std::string> held_out_drivers;
    bool single_class_test = false;  // flagged, never silently dropped
};

struct FoldResult {
    double accuracy_percent = 0.0;
    double f1 = 0.0;
    std::array<std::array<std::int64_t, 2>, 2> counts{};  // [actual][predicted], 0=neutral
    std::set<std::string> held_out_drivers;
    bool single_class_test = false;
};

struct EvalConfig {
    double window_s = 30.0;
    double stride_s = 1.0;
    KernelParams params;
    std::uint64_t seed = 0;
    std::string mode = "lodo";  // "lodo" | "stratified"
    int k = 10;                 // stratified fold count
    std::string scaling = "dataset";  // "dataset" | "per-heatmap"
};

struct EvalReport {
    double accuracy_percent = 0.0;  // mean over folds
    double f1 = 0.0;                // mean over folds
    std::array<std::array<double, 2>, 2> confusion{};  // row-normalized, averaged
    std::vector<FoldResult> folds;
    EvalConfig config;
};

/// Projected wall hits of one session, ready for window sweeps.
struct SessionHits {
    std::string driver_id;
    std::string label;  // "neutral" | "distracted"
    std::vector<WallHit> hits;
    TimeRange span;
};

/// One fold per driver; the fold's test set is that driver's heatmaps.
std::vector<FoldSplit> split_leave_one_driver_out(const Dataset& dataset);

/// Stratified k-fold with driver grouping: all of a driver's windows land
/// in the same fold, and fold class ratios track the global ratio.
/// Throws std::invalid_argument when k exceeds the smallest class count
/// or the driver-group count.
std::vector<FoldSplit> split_stratified_kfold(const Dataset& dataset, int k,
                                              std::uint64_t seed);

/// Per fold: fit scaler on train, standardize, train, predict test.
EvalReport run_cv(const Dataset& dataset, std::span<const FoldSplit> splits,
                  const EvalConfig& cfg);

/// Heatmaps + features for every sliding window of every session.
/// Output order is by session then window start, independent of jobs.
Dataset build_dataset(std::span<const SessionHits> sessions, const VirtualWall& wall,
                      const HeatmapConfig& cfg, int jobs = 1);

struct SweepRow {
    double window_s = 0.0;
    double accuracy_percent = 0.0;
    double f1 = 0.0;
};

/// Rebuilds features per window size and cross-validates each.
std::vector<SweepRow> window_sweep(std::span<const SessionHits> sessions,
                                   std::span<const double> window_sizes,
                                   const VirtualWall& wall, const HeatmapConfig& base_cfg,
                                   const EvalConfig& eval_cfg);

struct Verdict {
    std::int64_t t_ms = 0;
    int label = kLabelNeutral;
};

enum class AlertKind { Onset, Confirmed, Cleared };

struct Alert {
    std::int64_t t_ms = 0;
    AlertKind kind = AlertKind::Onset;
    bool operator==(const Alert&) const = default;
};

/// Two-classifier deployment policy: the fast (10 s) model raises the
/// onset, the slow (30 s) model confirms it within its next window, and
/// the alarm clears when both report neutral.
std::vector<Alert> dual_window_combine(std::span<const Verdict> fast,
                                       std::span<const Verdict> slow,
                                       double slow_window_s);

}  // namespace gazedist
