#pragma once

#include <filesystem>
#include <string>

#include "gazedist/evaluation.hpp"
#include "gazedist/heatmap.hpp"
#include "gazedist/svm.hpp"
#include "gazedist/synth.hpp"

namespace gazedist {

inline constexpr int kSchemaVersion = 1;

/// Fixed float formatting (17 significant digits) keeps every writer
/// byte-deterministic for identical inputs.
std::string format_double(double v);

// .gaze: one JSON header line, then one line per sample
// (timestamp_ms head.xyz gaze.xyz valid).
void write_session(const std::filesystem::path& path, const SessionRecording& rec);
SessionRecording read_session(const std::filesystem::path& path);

// .pgm (binary, 16-bit) plus a .json sidecar with window metadata.
void write_heatmap(const std::filesystem::path& pgm_path, const Heatmap& hm);
Heatmap read_heatmap(const std::filesystem::path& pgm_path);

// .csv: 75 feature columns, then driver_id, window_start_ms, ground_truth.
void write_features(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_features(const std::filesystem::path& path);

// .model.json
void write_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel read_model(const std::filesystem::path& path);

// .report.json plus a text table in the layout of the results tables.
void write_report(const std::filesystem::path& path, const EvalReport& report);
std::string report_text_table(const EvalReport& report);
std::string sweep_text_table(std::span<const SweepRow> rows);

}  // namespace gazedist
