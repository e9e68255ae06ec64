#include "gazedist/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace gazedist {

namespace {

FoldResult score_fold(const FoldSplit& split,
                      std::span<const int> actual, std::span<const int> predicted) {
    FoldResult r;
    r.held_out_drivers = split.held_out_drivers;
    r.single_class_test = split.single_class_test;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const int row = actual[i] == kLabelDistracted ? 1 : 0;
        const int col = predicted[i] == kLabelDistracted ? 1 : 0;
        ++r.counts[row][col];
    }
    const auto total = static_cast<double>(actual.size());
    const double correct = static_cast<double>(r.counts[0][0] + r.counts[1][1]);
    r.accuracy_percent = total > 0.0 ? 100.0 * correct / total : 0.0;
    const double tp = static_cast<double>(r.counts[1][1]);
    const double fp = static_cast<double>(r.counts[0][1]);
    const double fn = static_cast<double>(r.counts[1][0]);
    const double denom = 2.0 * tp + fp + fn;
    r.f1 = denom > 0.0 ? 2.0 * tp / denom : 0.0;
    return r;
}

}  // namespace

std::vector<FoldSplit> split_leave_one_driver_out(const Dataset& dataset) {
    std::map<std::string, std::vector<std::size_t>> by_driver;
    for (std::size_t i = 0; i < dataset.entries.size(); ++i)
        by_driver[dataset.entries[i].driver_id].push_back(i);
    if (by_driver.size() < 2)
        throw std::invalid_argument("split_leave_one_driver_out: need at least 2 drivers");

    std::vector<FoldSplit> folds;
    for (const auto& [driver, test_idx] : by_driver) {
        FoldSplit fold;
        fold.test = test_idx;
        fold.held_out_drivers = {driver};
        for (const auto& [other, idx] : by_driver)
            if (other != driver) fold.train.insert(fold.train.end(), idx.begin(), idx.end());
        std::set<int> test_labels;
        for (const std::size_t i : test_idx) test_labels.insert(dataset.entries[i].label);
        fold.single_class_test = test_labels.size() < 2;
        folds.push_back(std::move(fold));
    }
    return folds;
}

std::vector<FoldSplit> split_stratified_kfold(const Dataset& dataset, int k,
                                              std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("split_stratified_kfold: k must be >= 2");
    std::int64_t n_pos = 0, n_neg = 0;
    for (const auto& e : dataset.entries)
        (e.label == kLabelDistracted ? n_pos : n_neg)++;
    if (k > std::min(n_pos, n_neg))
        throw std::invalid_argument("split_stratified_kfold: k exceeds smallest class count");

    // Driver groups keep overlapping windows of one driver on a single side
    // of every split.
    std::map<std::string, std::vector<std::size_t>> by_driver;
    for (std::size_t i = 0; i < dataset.entries.size(); ++i)
        by_driver[dataset.entries[i].driver_id].push_back(i);
    if (static_cast<int>(by_driver.size()) < k)
        throw std::invalid_argument("split_stratified_kfold: k exceeds driver-group count");

    struct Group {
        std::vector<std::size_t> idx;
        std::array<std::int64_t, 2> class_counts{};
    };
    std::vector<Group> groups;
    for (const auto& [driver, idx] : by_driver) {
        Group g;
        g.idx = idx;
        for (const std::size_t i : idx)
            ++g.class_counts[dataset.entries[i].label == kLabelDistracted ? 1 : 0];
        groups.push_back(std::move(g));
    }
    std::mt19937_64 rng(seed);
    std::shuffle(groups.begin(), groups.end(), rng);
    std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        return a.idx.size() > b.idx.size();
    });

    // Greedy assignment: put each group where its dominant class is rarest.
    std::vector<std::array<std::int64_t, 2>> fold_counts(k, {0, 0});
    std::vector<std::vector<std::size_t>> fold_test(k);
    for (const Group& g : groups) {
        const int dominant = g.class_counts[1] >= g.class_counts[0] ? 1 : 0;
        int best = 0;
        for (int f = 1; f < k; ++f) {
            const auto best_total = fold_counts[best][0] + fold_counts[best][1];
            const auto f_total = fold_counts[f][0] + fold_counts[f][1];
            if (fold_counts[f][dominant] < fold_counts[best][dominant] ||
                (fold_counts[f][dominant] == fold_counts[best][dominant] &&
                 f_total < best_total))
                best = f;
        }
        fold_counts[best][0] += g.class_counts[0];
        fold_counts[best][1] += g.class_counts[1];
        fold_test[best].insert(fold_test[best].end(), g.idx.begin(), g.idx.end());
    }

    std::vector<FoldSplit> folds(k);
    for (int f = 0; f < k; ++f) {
        folds[f].test = fold_test[f];
        std::sort(folds[f].test.begin(), folds[f].test.end());
        for (int g = 0; g < k; ++g)
            if (g != f)
                folds[f].train.insert(folds[f].train.end(), fold_test[g].begin(),
                                      fold_test[g].end());
        std::sort(folds[f].train.begin(), folds[f].train.end());
        std::set<int> labels;
        for (const std::size_t i : folds[f].test) {
            folds[f].held_out_drivers.insert(dataset.entries[i].driver_id);
            labels.insert(dataset.entries[i].label);
        }
        folds[f].single_class_test = labels.size() < 2;
    }
    return folds;
}

EvalReport run_cv(const Dataset& dataset, std::span<const FoldSplit> splits,
                  const EvalConfig& cfg) {
    EvalReport report;
    report.config = cfg;
    const bool per_heatmap = cfg.scaling == "per-heatmap";
    const auto entry_features = [&](std::size_t i) {
        return per_heatmap ? standardize_per_vector(dataset.entries[i].features)
                           : dataset.entries[i].features;
    };
    for (const FoldSplit& split : splits) {
        std::vector<FeatureVector> train_raw;
        train_raw.reserve(split.train.size());
        for (const std::size_t i : split.train) train_raw.push_back(entry_features(i));
        FeatureScaler scaler;
        std::vector<std::vector<double>> train_x;
        std::vector<int> train_y;
        try {
            if (per_heatmap) {
                scaler.mean.assign(kFeatureCount, 0.0);
                scaler.stddev.assign(kFeatureCount, 1.0);
            } else {
                scaler = fit_scaler(train_raw);
            }
            for (std::size_t r = 0; r < split.train.size(); ++r) {
                const auto scaled = apply_scaler(scaler, train_raw[r]);
                train_x.emplace_back(scaled.begin(), scaled.end());
                train_y.push_back(dataset.entries[split.train[r]].label);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("run_cv: fold holding out {" +
                                     *split.held_out_drivers.begin() + "}: " + e.what());
        }

        TrainedModel model;
        try {
            model = train_svm(train_x, train_y, cfg.params, cfg.seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_cv: training failed on fold holding out {" +
                                     (split.held_out_drivers.empty()
                                          ? std::string("?")
                                          : *split.held_out_drivers.begin()) +
                                     "}: " + e.what());
        }
        model.scaler = scaler;

        std::vector<int> actual, predicted;
        for (const std::size_t i : split.test) {
            const auto scaled = apply_scaler(scaler, entry_features(i));
            actual.push_back(dataset.entries[i].label);
            predicted.push_back(predict(model, scaled));
        }
        report.folds.push_back(score_fold(split, actual, predicted));
    }

    const double nf = static_cast<double>(report.folds.size());
    for (const FoldResult& f : report.folds) {
        report.accuracy_percent += f.accuracy_percent / nf;
        report.f1 += f.f1 / nf;
        for (int r = 0; r < 2; ++r) {
            const double row_total =
                static_cast<double>(f.counts[r][0] + f.counts[r][1]);
            for (int c = 0; c < 2; ++c) {
                // Row-normalize per fold, then average; empty rows count as
                // the identity row so averages stay stochastic.
                const double cell = row_total > 0.0
                                        ? static_cast<double>(f.counts[r][c]) / row_total
                                        : (r == c ? 1.0 : 0.0);
                report.confusion[r][c] += cell / nf;
            }
        }
    }
    return report;
}

Dataset build_dataset(std::span<const SessionHits> sessions, const VirtualWall& wall,
                      const HeatmapConfig& cfg, int jobs) {
    std::vector<std::vector<DatasetEntry>> per_session(sessions.size());
    const auto process = [&](std::size_t si) {
        const SessionHits& s = sessions[si];
        for (const HitWindow& w : window_hits(s.hits, s.span, cfg)) {
            Heatmap hm = build_heatmap_from_hits(w.hits, w.range, wall, cfg);
            hm.driver_id = s.driver_id;
            hm.ground_truth = s.label;
            DatasetEntry entry;
            entry.features = extract_features(hm);
            entry.label = s.label == "distracted" ? kLabelDistracted : kLabelNeutral;
            entry.driver_id = s.driver_id;
            entry.window_start_ms = w.range.start_ms;
            per_session[si].push_back(std::move(entry));
        }
    };
    if (jobs <= 1 || sessions.size() <= 1) {
        for (std::size_t si = 0; si < sessions.size(); ++si) process(si);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int n_workers = std::min<int>(jobs, static_cast<int>(sessions.size()));
        for (int t = 0; t < n_workers; ++t)
            workers.emplace_back([&] {
                for (std::size_t si = next.fetch_add(1); si < sessions.size();
                     si = next.fetch_add(1))
                    process(si);
            });
        for (auto& w : workers) w.join();
    }
    Dataset ds;
    for (auto& chunk : per_session)
        for (auto& e : chunk) ds.entries.push_back(std::move(e));
    return ds;
}

std::vector<SweepRow> window_sweep(std::span<const SessionHits> sessions,
                                   std::span<const double> window_sizes,
                                   const VirtualWall& wall, const HeatmapConfig& base_cfg,
                                   const EvalConfig& eval_cfg) {
    std::vector<SweepRow> rows;
    for (const double w : window_sizes) {
        HeatmapConfig cfg = base_cfg;
        cfg.window_s = w;
        const Dataset ds = build_dataset(sessions, wall, cfg);
        EvalConfig ecfg = eval_cfg;
        ecfg.window_s = w;
        const auto splits = ecfg.mode == "stratified"
                                ? split_stratified_kfold(ds, ecfg.k, ecfg.seed)
                                : split_leave_one_driver_out(ds);
        const EvalReport report = run_cv(ds, splits, ecfg);
        rows.push_back({w, report.accuracy_percent, report.f1});
    }
    return rows;
}

std::vector<Alert> dual_window_combine(std::span<const Verdict> fast,
                                       std::span<const Verdict> slow,
                                       double slow_window_s) {
    struct Event {
        std::int64_t t_ms;
        bool is_fast;
        int label;
    };
    std::vector<Event> events;
    events.reserve(fast.size() + slow.size());
    for (const Verdict& v : fast) events.push_back({v.t_ms, true, v.label});
    for (const Verdict& v : slow) events.push_back({v.t_ms, false, v.label});
    // Fast verdicts sort first on ties so an onset can be confirmed by a
    // slow verdict carrying the same timestamp.
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.t_ms != b.t_ms) return a.t_ms < b.t_ms;
        return a.is_fast && !b.is_fast;
    });

    const auto slow_window_ms = static_cast<std::int64_t>(slow_window_s * 1000.0);
    std::vector<Alert> alerts;
    int last_fast = kLabelNeutral;
    int last_slow = kLabelNeutral;
    bool alarmed = false;
    bool awaiting_confirm = false;
    std::int64_t onset_ms = 0;
    for (const Event& e : events) {
        (e.is_fast ? last_fast : last_slow) = e.label;
        if (e.is_fast && e.label == kLabelDistracted && !alarmed) {
            alarmed = true;
            awaiting_confirm = true;
            onset_ms = e.t_ms;
            alerts.push_back({e.t_ms, AlertKind::Onset});
        } else if (!e.is_fast && e.label == kLabelDistracted && alarmed && awaiting_confirm &&
                   e.t_ms >= onset_ms && e.t_ms <= onset_ms + slow_window_ms) {
            awaiting_confirm = false;
            alerts.push_back({e.t_ms, AlertKind::Confirmed});
        }
        if (alarmed && last_fast == kLabelNeutral && last_slow == kLabelNeutral) {
            alarmed = false;
            awaiting_confirm = false;
            alerts.push_back({e.t_ms, AlertKind::Cleared});
        }
    }
    return alerts;
}

}  // namespace gazedist
