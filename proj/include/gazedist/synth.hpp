#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gazedist/geometry.hpp"

namespace gazedist {

/// Parameters of one driving condition. Distracted profiles must have
/// componentwise smaller fixation dispersion than neutral ones.
struct BehaviorProfile {
    std::string label;              // "neutral" | "distracted"
    double fixation_center_u = 0.0;  // wall-local meters, rightward
    double fixation_center_v = 0.0;  // wall-local meters, upward
    double dispersion_u = 0.9;       // std of fixation targets, meters
    double dispersion_v = 0.35;
    double fixation_median_s = 0.4;  // log-normal median
    double fixation_sigma = 0.5;     // log-normal shape
    double road_dwell_fraction = 0.0;  // fraction of fixations pinned near road center
    double road_dwell_dispersion_u = 0.18;
    double road_dwell_dispersion_v = 0.10;
    double pursuit_rate_per_min = 0.0;   // smooth pursuits (lateral drift)
    double mirror_check_rate_per_min = 6.0;
    double offplane_rate_per_min = 2.0;  // tracker dropouts
    double saccade_duration_ms = 40.0;
    double jitter_m = 0.01;  // within-fixation gaze jitter on the wall

    // Episodic behavior: when episode_mean_s > 0 the profile is only active
    // in bursts of roughly that length, separated by gaps of roughly
    // episode_gap_mean_s in which the session falls back to a baseline
    // profile. Zero means the behavior is continuous.
    double episode_mean_s = 0.0;
    double episode_gap_mean_s = 0.0;
};

BehaviorProfile neutral_profile();
BehaviorProfile distracted_profile();

struct SessionSpec {
    std::string driver_id;
    double duration_s = 1320.0;  // one 22-minute lap
    std::uint64_t seed = 0;
    Vec3 head_position{-0.4, 0.25, -0.6};
    BehaviorProfile profile;
    BehaviorProfile gap_profile = neutral_profile();  // used between episodes
};

struct SessionRecording {
    std::string driver_id;
    std::string label;
    std::uint64_t seed = 0;
    VirtualWall wall;
    int sample_period_ms = 50;
    std::vector<GazeSample> samples;
};

/// Mirrors and instrument cluster used for gaze excursions.
std::vector<AoiRect> default_interior_aois();

/// One sample every 50 ms, fully reproducible from the spec's seed.
/// Throws std::invalid_argument when the profile violates its invariants.
SessionRecording simulate_session(const SessionSpec& spec, const VirtualWall& wall);

/// One neutral and one distracted session per driver, with per-driver
/// head-position and profile perturbation (within +-20%).
std::vector<SessionRecording> make_corpus(int n_drivers, double duration_s,
                                          std::uint64_t seed,
                                          const VirtualWall& wall);

}  // namespace gazedist
