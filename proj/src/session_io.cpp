#include "gazedist/session_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gazedist {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
    fail(path, "line " + std::to_string(line) + ": " + what);
}

void check_schema(const json& j, const std::filesystem::path& path) {
    const int found = j.value("schema_version", -1);
    if (found != kSchemaVersion)
        fail(path, "schema_version mismatch: file has " + std::to_string(found) +
                       ", reader expects " + std::to_string(kSchemaVersion));
}

json wall_to_json(const VirtualWall& w) {
    return json{{"center", {w.center.x, w.center.y, w.center.z}},
                {"normal", {w.normal.x, w.normal.y, w.normal.z}},
                {"physical_width", w.physical_width},
                {"physical_height", w.physical_height},
                {"grid_width", w.grid_width},
                {"grid_height", w.grid_height}};
}

VirtualWall wall_from_json(const json& j) {
    VirtualWall w;
    w.center = {j.at("center")[0], j.at("center")[1], j.at("center")[2]};
    w.normal = {j.at("normal")[0], j.at("normal")[1], j.at("normal")[2]};
    w.physical_width = j.at("physical_width");
    w.physical_height = j.at("physical_height");
    w.grid_width = j.at("grid_width");
    w.grid_height = j.at("grid_height");
    return w;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) fail(path, "cannot open for reading");
    return in;
}

const std::array<std::string, kZoneStatCount> kZoneStatNames = {
    "std_x", "std_y", "centroid_x", "centroid_y", "min_x", "max_x", "min_y", "max_y",
    "q1_x", "med_x", "q3_x", "q1_y", "med_y", "q3_y", "area", "perimeter", "present"};

std::vector<std::string> feature_column_names() {
    std::vector<std::string> names;
    for (int b = 0; b < kHistogramBins; ++b) names.push_back("hist_" + std::to_string(b));
    for (int z = 1; z <= kZoneCount; ++z)
        for (const auto& stat : kZoneStatNames)
            names.push_back("zone" + std::to_string(z) + "_" + stat);
    names.push_back("lac");
    return names;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_session(const std::filesystem::path& path, const SessionRecording& rec) {
    auto out = open_out(path);
    const json header{{"schema_version", kSchemaVersion},
                      {"driver_id", rec.driver_id},
                      {"label", rec.label},
                      {"seed", rec.seed},
                      {"sample_period_ms", rec.sample_period_ms},
                      {"wall", wall_to_json(rec.wall)},
                      {"generator", "synthgaze"}};
    out << header.dump() << '\n';
    for (const GazeSample& s : rec.samples) {
        out << s.timestamp_ms << ' ' << format_double(s.head_position.x) << ' '
            << format_double(s.head_position.y) << ' ' << format_double(s.head_position.z)
            << ' ' << format_double(s.gaze_direction.x) << ' '
            << format_double(s.gaze_direction.y) << ' ' << format_double(s.gaze_direction.z)
            << ' ' << (s.valid ? 1 : 0) << '\n';
    }
    if (!out) fail(path, "write failed");
}

SessionRecording read_session(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) fail_line(path, 1, "missing header");
    json header;
    try {
        header = json::parse(line);
    } catch (const json::parse_error& e) {
        fail_line(path, 1, std::string("bad header: ") + e.what());
    }
    check_schema(header, path);

    SessionRecording rec;
    rec.driver_id = header.at("driver_id");
    rec.label = header.at("label");
    rec.seed = header.at("seed");
    rec.sample_period_ms = header.at("sample_period_ms");
    rec.wall = wall_from_json(header.at("wall"));

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        GazeSample s;
        int valid = 0;
        const int got = std::sscanf(line.c_str(),
                                    "%" SCNd64 " %lf %lf %lf %lf %lf %lf %d",
                                    &s.timestamp_ms, &s.head_position.x, &s.head_position.y,
                                    &s.head_position.z, &s.gaze_direction.x,
                                    &s.gaze_direction.y, &s.gaze_direction.z, &valid);
        if (got != 8) fail_line(path, lineno, "malformed sample record");
        s.valid = valid != 0;
        rec.samples.push_back(s);
    }
    return rec;
}

void write_heatmap(const std::filesystem::path& pgm_path, const Heatmap& hm) {
    {
        auto out = open_out(pgm_path, /*binary=*/true);
        out << "P5\n" << hm.grid.width() << ' ' << hm.grid.height() << "\n65535\n";
        const double* p = hm.grid.data();
        std::vector<unsigned char> row(static_cast<std::size_t>(hm.grid.width()) * 2);
        for (int y = 0; y < hm.grid.height(); ++y) {
            for (int x = 0; x < hm.grid.width(); ++x) {
                const auto v = static_cast<std::uint16_t>(
                    std::lround(std::clamp(p[static_cast<std::size_t>(y) * hm.grid.width() + x],
                                           0.0, 1.0) * 65535.0));
                row[2 * x] = static_cast<unsigned char>(v >> 8);
                row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
            }
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size()));
        }
        if (!out) fail(pgm_path, "write failed");
    }
    json sidecar{{"schema_version", kSchemaVersion},
                 {"window_start_ms", hm.window_start_ms},
                 {"window_end_ms", hm.window_end_ms},
                 {"lac", hm.lac},
                 {"driver_id", hm.driver_id},
                 {"ground_truth", hm.ground_truth ? json(*hm.ground_truth) : json(nullptr)}};
    auto side_path = pgm_path;
    side_path += ".json";
    auto out = open_out(side_path);
    out << sidecar.dump(2) << '\n';
}

Heatmap read_heatmap(const std::filesystem::path& pgm_path) {
    Heatmap hm;
    auto in = open_in(pgm_path, /*binary=*/true);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || w <= 0 || h <= 0 || maxval != 65535)
        fail(pgm_path, "not a 16-bit binary PGM");
    in.get();  // single whitespace after maxval
    hm.grid = Grid(w, h);
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * 2);
    for (int y = 0; y < h; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (!in) fail(pgm_path, "truncated pixel data at row " + std::to_string(y));
        for (int x = 0; x < w; ++x) {
            const int v = (row[2 * x] << 8) | row[2 * x + 1];
            hm.grid.at(x, y) = v / 65535.0;
        }
    }

    auto side_path = pgm_path;
    side_path += ".json";
    auto side = open_in(side_path);
    json sidecar;
    try {
        sidecar = json::parse(side);
    } catch (const json::parse_error& e) {
        fail(side_path, std::string("bad sidecar: ") + e.what());
    }
    check_schema(sidecar, side_path);
    hm.window_start_ms = sidecar.at("window_start_ms");
    hm.window_end_ms = sidecar.at("window_end_ms");
    hm.lac = sidecar.at("lac");
    hm.driver_id = sidecar.at("driver_id");
    if (!sidecar.at("ground_truth").is_null())
        hm.ground_truth = sidecar.at("ground_truth").get<std::string>();
    return hm;
}

void write_features(const std::filesystem::path& path, const Dataset& dataset) {
    auto out = open_out(path);
    const auto names = feature_column_names();
    for (const auto& n : names) out << n << ',';
    out << "driver_id,window_start_ms,ground_truth\n";
    for (const DatasetEntry& e : dataset.entries) {
        for (const double v : e.features) out << format_double(v) << ',';
        out << e.driver_id << ',' << e.window_start_ms << ','
            << (e.label == kLabelDistracted ? "distracted" : "neutral") << '\n';
    }
    if (!out) fail(path, "write failed");
}

Dataset read_features(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) fail_line(path, 1, "missing CSV header");
    Dataset ds;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        DatasetEntry e;
        for (int j = 0; j < kFeatureCount; ++j) {
            if (!std::getline(ss, cell, ','))
                fail_line(path, lineno, "expected " + std::to_string(kFeatureCount) +
                                            " feature columns");
            try {
                e.features[j] = std::stod(cell);
            } catch (const std::exception&) {
                fail_line(path, lineno, "bad numeric value '" + cell + "'");
            }
        }
        std::string ground_truth;
        std::string start_ms;
        if (!std::getline(ss, e.driver_id, ',') || !std::getline(ss, start_ms, ',') ||
            !std::getline(ss, ground_truth, ','))
            fail_line(path, lineno, "missing metadata columns");
        try {
            e.window_start_ms = std::stoll(start_ms);
        } catch (const std::exception&) {
            fail_line(path, lineno, "bad window_start_ms '" + start_ms + "'");
        }
        e.label = ground_truth == "distracted" ? kLabelDistracted : kLabelNeutral;
        ds.entries.push_back(std::move(e));
    }
    return ds;
}

void write_model(const std::filesystem::path& path, const TrainedModel& model) {
    json j{{"schema_version", kSchemaVersion},
           {"kernel", {{"gamma", model.kernel.gamma}, {"c", model.kernel.c}}},
           {"scaler", {{"mean", model.scaler.mean}, {"stddev", model.scaler.stddev}}},
           {"support_vectors", model.support_vectors},
           {"dual_coefs", model.dual_coefs},
           {"bias", model.bias},
           {"label_map", {{"-1", "neutral"}, {"+1", "distracted"}}}};
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

TrainedModel read_model(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path, std::string("bad model file: ") + e.what());
    }
    check_schema(j, path);
    TrainedModel model;
    model.kernel.gamma = j.at("kernel").at("gamma");
    model.kernel.c = j.at("kernel").at("c");
    model.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    model.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    model.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    model.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
    model.bias = j.at("bias");
    return model;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
    json folds = json::array();
    for (const FoldResult& f : report.folds) {
        folds.push_back({{"accuracy_percent", f.accuracy_percent},
                         {"f1", f.f1},
                         {"counts", {{f.counts[0][0], f.counts[0][1]},
                                     {f.counts[1][0], f.counts[1][1]}}},
                         {"held_out_drivers", f.held_out_drivers},
                         {"single_class_test", f.single_class_test}});
    }
    json j{{"schema_version", kSchemaVersion},
           {"accuracy_percent", report.accuracy_percent},
           {"f1", report.f1},
           {"confusion", {{report.confusion[0][0], report.confusion[0][1]},
                          {report.confusion[1][0], report.confusion[1][1]}}},
           {"folds", folds},
           {"config", {{"window_s", report.config.window_s},
                       {"stride_s", report.config.stride_s},
                       {"gamma", report.config.params.gamma},
                       {"c", report.config.params.c},
                       {"seed", report.config.seed},
                       {"mode", report.config.mode},
                       {"k", report.config.k}}}};
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::string report_text_table(const EvalReport& report) {
    char buf[256];
    std::string s;
    std::snprintf(buf, sizeof(buf), "Accuracy: %.3f%%  F1 Score: %.3f\n",
                  report.accuracy_percent, report.f1);
    s += buf;
    s += "                    Predicted\n";
    s += "                    Neutral  Distracted\n";
    std::snprintf(buf, sizeof(buf), "Actual  Neutral     %.3f    %.3f\n",
                  report.confusion[0][0], report.confusion[0][1]);
    s += buf;
    std::snprintf(buf, sizeof(buf), "        Distracted  %.3f    %.3f\n",
                  report.confusion[1][0], report.confusion[1][1]);
    s += buf;
    return s;
}

std::string sweep_text_table(std::span<const SweepRow> rows) {
    std::string s = "Window Size  Accuracy  F1-Score\n";
    char buf[128];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-12.0f %-9.3f %.3f\n", r.window_s,
                      r.accuracy_percent, r.f1);
        s += buf;
    }
    return s;
}

}  // namespace gazedist
