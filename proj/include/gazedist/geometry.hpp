#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gazedist/vec3.hpp"

namespace gazedist {

/// One 50 ms gaze observation from the tracker.
struct GazeSample {
    std::int64_t timestamp_ms = 0;
    Vec3 head_position;
    Vec3 gaze_direction;  // unit vector when valid
    bool valid = false;
};

/// Imaginary plane ahead of the vehicle onto which gaze rays are projected.
/// Wall-local u points rightward, v upward, both measured from the center.
struct VirtualWall {
    Vec3 center{0.0, 0.0, 4.0};
    Vec3 normal{0.0, 0.0, -1.0};  // faces the driver
    double physical_width = 4.15;
    double physical_height = 2.59;
    int grid_width = 640;
    int grid_height = 400;
};

/// Rectangular area of interest (mirror, instrument cluster, ...).
struct AoiRect {
    std::string name;
    Vec3 center;
    double half_extent_u = 0.0;
    double half_extent_v = 0.0;
    Vec3 normal;
};

/// Continuous pixel coordinates of a gaze/wall intersection.
/// px in [0, grid_width), py in [0, grid_height), row 0 at the top.
struct WallHit {
    std::int64_t timestamp_ms = 0;
    double px = 0.0;
    double py = 0.0;
};

/// In-plane basis for a plane with the given normal (u rightward, v upward).
struct PlaneBasis {
    Vec3 u;
    Vec3 v;
};
PlaneBasis plane_basis(const Vec3& normal);

/// Forward ray/plane intersection. Absent when the ray is parallel to the
/// plane (|dir.normal| <= 1e-9) or points away from it (t <= 0).
std::optional<Vec3> intersect_ray_plane(const GazeSample& sample, const VirtualWall& wall);

/// Maps an on-plane point to continuous pixel coordinates; absent outside
/// the wall extent. The point must satisfy |(p - center).normal| < 1e-6 m.
std::optional<WallHit> wall_point_to_pixel(const Vec3& p, const VirtualWall& wall,
                                           std::int64_t timestamp_ms = 0);

/// Inverse of wall_point_to_pixel on its range.
Vec3 pixel_to_wall_point(double px, double py, const VirtualWall& wall);

/// Full projection: validity gate, ray/plane intersection, pixel mapping.
std::optional<WallHit> project_sample(const GazeSample& sample, const VirtualWall& wall);

/// True iff the gaze ray hits the AOI rectangle within its half-extents.
bool aoi_hit(const GazeSample& sample, const AoiRect& aoi);

}  // namespace gazedist
