#include "gazedist/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace gazedist {

namespace {

struct WallFrame {
    const VirtualWall* wall;
    PlaneBasis basis;

    Vec3 point(double u, double v) const {
        return wall->center + basis.u * u + basis.v * v;
    }
    double max_u() const { return wall->physical_width / 2.0 - 0.05; }
    double max_v() const { return wall->physical_height / 2.0 - 0.05; }
};

void validate_profile(const BehaviorProfile& p) {
    if (p.dispersion_u <= 0.0 || p.dispersion_v <= 0.0)
        throw std::invalid_argument("BehaviorProfile: dispersions must be positive");
    if (p.mirror_check_rate_per_min < 0.0 || p.offplane_rate_per_min < 0.0 ||
        p.pursuit_rate_per_min < 0.0)
        throw std::invalid_argument("BehaviorProfile: rates must be non-negative");
    if (p.fixation_median_s <= 0.0)
        throw std::invalid_argument("BehaviorProfile: fixation duration must be positive");
}

enum class SegmentKind { Fixation, Pursuit, MirrorCheck, Dropout };

}  // namespace

BehaviorProfile neutral_profile() {
    BehaviorProfile p;
    p.label = "neutral";
    p.dispersion_u = 0.9;
    p.dispersion_v = 0.35;
    p.fixation_median_s = 0.4;
    p.road_dwell_fraction = 0.55;
    p.pursuit_rate_per_min = 2.0;
    p.mirror_check_rate_per_min = 6.0;
    return p;
}

BehaviorProfile distracted_profile() {
    // Cognitive distraction comes in bursts: a tight stare with long
    // fixations and suppressed mirror checks, book-ended by stretches of
    // ordinary driving. Short windows therefore often miss the episode.
    BehaviorProfile p;
    p.label = "distracted";
    p.dispersion_u = 0.06;
    p.dispersion_v = 0.04;
    p.fixation_median_s = 2.5;
    p.road_dwell_fraction = 0.0;
    p.pursuit_rate_per_min = 0.0;
    p.mirror_check_rate_per_min = 0.3;
    p.episode_mean_s = 9.0;
    p.episode_gap_mean_s = 13.0;
    return p;
}

std::vector<AoiRect> default_interior_aois() {
    // Measured in the vehicle frame; all of them sit behind or beside the
    // driver's forward cone, so excursion rays never land inside the wall.
    return {
        {"left_mirror", {-0.95, 0.0, -0.2}, 0.12, 0.08, Vec3{0.55, 0.0, -0.84}.normalized()},
        {"right_mirror", {0.95, 0.0, -0.2}, 0.12, 0.08, Vec3{-0.55, 0.0, -0.84}.normalized()},
        {"central_mirror", {0.15, 0.45, -0.3}, 0.14, 0.08, Vec3{-0.2, -0.3, -0.93}.normalized()},
        {"instrument_cluster", {-0.35, -0.25, -0.45}, 0.18, 0.1,
         Vec3{0.0, 0.45, -0.89}.normalized()},
    };
}

SessionRecording simulate_session(const SessionSpec& spec, const VirtualWall& wall) {
    if (spec.duration_s <= 0.0)
        throw std::invalid_argument("SessionSpec: duration must be positive");
    validate_profile(spec.profile);

    const BehaviorProfile& prof = spec.profile;
    const bool episodic = prof.episode_mean_s > 0.0;
    if (episodic) {
        validate_profile(spec.gap_profile);
        if (prof.episode_gap_mean_s <= 0.0)
            throw std::invalid_argument("BehaviorProfile: episodic profiles need a gap length");
    }
    const WallFrame frame{&wall, plane_basis(wall.normal)};
    const std::vector<AoiRect> aois = default_interior_aois();

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const auto draw_fixation_target = [&](const BehaviorProfile& p, double& u, double& v) {
        const bool road = unif(rng) < p.road_dwell_fraction;
        const double su = road ? p.road_dwell_dispersion_u : p.dispersion_u;
        const double sv = road ? p.road_dwell_dispersion_v : p.dispersion_v;
        u = std::clamp(p.fixation_center_u + su * unit_normal(rng), -frame.max_u(),
                       frame.max_u());
        v = std::clamp(p.fixation_center_v + sv * unit_normal(rng), -frame.max_v(),
                       frame.max_v());
    };
    const auto fixation_duration_s = [&](const BehaviorProfile& p) {
        return p.fixation_median_s * std::exp(p.fixation_sigma * unit_normal(rng));
    };

    SessionRecording rec;
    rec.driver_id = spec.driver_id;
    rec.label = prof.label;
    rec.seed = spec.seed;
    rec.wall = wall;

    const int total = static_cast<int>(std::llround(spec.duration_s * 1000.0)) /
                      rec.sample_period_ms;
    rec.samples.reserve(total);

    double cursor_ms = 0.0;
    int emitted = 0;
    double cur_u = prof.fixation_center_u;
    double cur_v = prof.fixation_center_v;

    // Episode scheduling: phases alternate with +-50% jittered lengths.
    bool in_episode = false;
    double next_switch_ms = 0.0;
    const auto phase_length_ms = [&](double mean_s) {
        return (0.5 + unif(rng)) * mean_s * 1000.0;
    };
    if (episodic) next_switch_ms = phase_length_ms(prof.episode_gap_mean_s);

    const BehaviorProfile* active = &prof;

    const auto emit_wall_sample = [&](double u, double v) {
        const double ju = active->jitter_m * unit_normal(rng);
        const double jv = active->jitter_m * unit_normal(rng);
        GazeSample s;
        s.timestamp_ms = static_cast<std::int64_t>(emitted) * rec.sample_period_ms;
        s.head_position = spec.head_position;
        s.gaze_direction = (frame.point(u + ju, v + jv) - spec.head_position).normalized();
        s.valid = true;
        rec.samples.push_back(s);
        ++emitted;
    };
    const auto segment_end_reached = [&](double seg_end_ms) {
        return emitted >= total ||
               static_cast<double>(emitted) * rec.sample_period_ms >= seg_end_ms;
    };

    while (emitted < total) {
        if (episodic) {
            while (cursor_ms >= next_switch_ms) {
                in_episode = !in_episode;
                next_switch_ms += phase_length_ms(in_episode ? prof.episode_mean_s
                                                             : prof.episode_gap_mean_s);
            }
            active = in_episode ? &prof : &spec.gap_profile;
        }

        // Segment-type mix scaled so per-minute event rates come out right
        // on average (one segment ~ one fixation).
        const double mean_seg_s =
            active->fixation_median_s *
            std::exp(0.5 * active->fixation_sigma * active->fixation_sigma);
        const double p_mirror =
            std::min(0.45, active->mirror_check_rate_per_min * mean_seg_s / 60.0);
        const double p_drop = std::min(0.25, active->offplane_rate_per_min * mean_seg_s / 60.0);
        const double p_pursuit =
            std::min(0.25, active->pursuit_rate_per_min * mean_seg_s / 60.0);

        const double roll = unif(rng);
        SegmentKind kind = SegmentKind::Fixation;
        if (roll < p_mirror) kind = SegmentKind::MirrorCheck;
        else if (roll < p_mirror + p_drop) kind = SegmentKind::Dropout;
        else if (roll < p_mirror + p_drop + p_pursuit) kind = SegmentKind::Pursuit;

        switch (kind) {
            case SegmentKind::Fixation: {
                double nu, nv;
                draw_fixation_target(*active, nu, nv);
                // Ballistic saccade toward the new target.
                const double sacc_end = cursor_ms + active->saccade_duration_ms;
                const double su = cur_u, sv = cur_v;
                while (!segment_end_reached(sacc_end)) {
                    const double f = (static_cast<double>(emitted) * rec.sample_period_ms -
                                      cursor_ms) / active->saccade_duration_ms;
                    emit_wall_sample(su + f * (nu - su), sv + f * (nv - sv));
                }
                cursor_ms = sacc_end;
                const double fix_end = cursor_ms + fixation_duration_s(*active) * 1000.0;
                while (!segment_end_reached(fix_end)) emit_wall_sample(nu, nv);
                cursor_ms = fix_end;
                cur_u = nu;
                cur_v = nv;
                break;
            }
            case SegmentKind::Pursuit: {
                const double speed = 0.1 + 0.2 * unif(rng);  // m/s, lateral
                const double dir = unif(rng) < 0.5 ? -1.0 : 1.0;
                const double dur_ms = 500.0 + 1000.0 * unif(rng);
                const double seg_start = cursor_ms;
                const double seg_end = cursor_ms + dur_ms;
                while (!segment_end_reached(seg_end)) {
                    const double dt_s = (static_cast<double>(emitted) * rec.sample_period_ms -
                                         seg_start) / 1000.0;
                    const double u = std::clamp(cur_u + dir * speed * dt_s, -frame.max_u(),
                                                frame.max_u());
                    emit_wall_sample(u, cur_v);
                    cur_u = u;
                }
                cursor_ms = seg_end;
                break;
            }
            case SegmentKind::MirrorCheck: {
                const auto& aoi = aois[static_cast<std::size_t>(unif(rng) * aois.size()) %
                                       aois.size()];
                const double dur_ms = 500.0 + 1000.0 * unif(rng);
                const double seg_end = cursor_ms + dur_ms;
                while (!segment_end_reached(seg_end)) {
                    GazeSample s;
                    s.timestamp_ms = static_cast<std::int64_t>(emitted) * rec.sample_period_ms;
                    s.head_position = spec.head_position;
                    const Vec3 jitter{0.005 * unit_normal(rng), 0.005 * unit_normal(rng), 0.0};
                    s.gaze_direction = (aoi.center + jitter - spec.head_position).normalized();
                    s.valid = true;
                    rec.samples.push_back(s);
                    ++emitted;
                }
                cursor_ms = seg_end;
                break;
            }
            case SegmentKind::Dropout: {
                const double dur_ms = 300.0 + 700.0 * unif(rng);
                const double seg_end = cursor_ms + dur_ms;
                while (!segment_end_reached(seg_end)) {
                    GazeSample s;
                    s.timestamp_ms = static_cast<std::int64_t>(emitted) * rec.sample_period_ms;
                    s.head_position = spec.head_position;
                    s.gaze_direction = {0.0, 0.0, 1.0};
                    s.valid = false;
                    rec.samples.push_back(s);
                    ++emitted;
                }
                cursor_ms = seg_end;
                break;
            }
        }
    }
    return rec;
}

std::vector<SessionRecording> make_corpus(int n_drivers, double duration_s,
                                          std::uint64_t seed, const VirtualWall& wall) {
    if (n_drivers < 2)
        throw std::invalid_argument("make_corpus: need at least 2 drivers");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> perturb(0.8, 1.2);
    std::normal_distribution<double> head_jitter(0.0, 0.05);

    std::vector<SessionRecording> corpus;
    corpus.reserve(2 * static_cast<std::size_t>(n_drivers));
    for (int d = 0; d < n_drivers; ++d) {
        char id[16];
        std::snprintf(id, sizeof(id), "driver%02d", d + 1);

        const double disp_scale = perturb(rng);
        const double dur_scale = perturb(rng);
        const double rate_scale = perturb(rng);
        const Vec3 head{-0.4 + head_jitter(rng), 0.25 + head_jitter(rng),
                        -0.6 + head_jitter(rng)};

        const auto personalize = [&](BehaviorProfile prof) {
            prof.dispersion_u *= disp_scale;
            prof.dispersion_v *= disp_scale;
            prof.fixation_median_s *= dur_scale;
            prof.mirror_check_rate_per_min *= rate_scale;
            prof.pursuit_rate_per_min *= rate_scale;
            prof.episode_mean_s *= dur_scale;
            prof.episode_gap_mean_s *= dur_scale;
            return prof;
        };
        const BehaviorProfile baseline = personalize(neutral_profile());

        for (const BehaviorProfile& prof :
             {baseline, personalize(distracted_profile())}) {
            SessionSpec spec;
            spec.driver_id = id;
            spec.duration_s = duration_s;
            spec.seed = seed ^ (static_cast<std::uint64_t>(d) * 0x9e3779b97f4a7c15ULL) ^
                        (prof.label == "neutral" ? 0x1ULL : 0x2ULL) * 0xbf58476d1ce4e5b9ULL;
            spec.head_position = head;
            spec.profile = prof;
            spec.gap_profile = baseline;
            corpus.push_back(simulate_session(spec, wall));
        }
    }
    return corpus;
}

}  // namespace gazedist
