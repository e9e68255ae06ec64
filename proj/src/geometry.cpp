#include "gazedist/geometry.hpp"

#include <cmath>

namespace gazedist {

namespace {
constexpr double kParallelTol = 1e-9;
constexpr double kOnPlaneTol = 1e-6;

// Forward intersection of the gaze ray with an arbitrary plane.
std::optional<Vec3> ray_plane(const Vec3& head, const Vec3& dir, const Vec3& plane_point,
                              const Vec3& normal) {
    const double denom = dir.dot(normal);
    if (std::abs(denom) <= kParallelTol) return std::nullopt;
    const double t = (plane_point - head).dot(normal) / denom;
    if (t <= 0.0) return std::nullopt;
    return head + dir * t;
}
}  // namespace

PlaneBasis plane_basis(const Vec3& normal) {
    const Vec3 up{0.0, 1.0, 0.0};
    Vec3 u = cross(normal, up);
    if (u.norm() < 1e-12) u = cross(normal, Vec3{0.0, 0.0, 1.0});
    u = u.normalized();
    const Vec3 v = cross(u, normal).normalized();
    return {u, v};
}

std::optional<Vec3> intersect_ray_plane(const GazeSample& sample, const VirtualWall& wall) {
    if (!sample.valid) return std::nullopt;
    return ray_plane(sample.head_position, sample.gaze_direction, wall.center, wall.normal);
}

std::optional<WallHit> wall_point_to_pixel(const Vec3& p, const VirtualWall& wall,
                                           std::int64_t timestamp_ms) {
    const Vec3 d = p - wall.center;
    if (std::abs(d.dot(wall.normal)) >= kOnPlaneTol) return std::nullopt;
    const auto [u_axis, v_axis] = plane_basis(wall.normal);
    const double u = d.dot(u_axis);
    const double v = d.dot(v_axis);
    const double px = (u / wall.physical_width + 0.5) * wall.grid_width;
    const double py = (0.5 - v / wall.physical_height) * wall.grid_height;
    if (px < 0.0 || px >= wall.grid_width || py < 0.0 || py >= wall.grid_height)
        return std::nullopt;
    return WallHit{timestamp_ms, px, py};
}

Vec3 pixel_to_wall_point(double px, double py, const VirtualWall& wall) {
    const auto [u_axis, v_axis] = plane_basis(wall.normal);
    const double u = (px / wall.grid_width - 0.5) * wall.physical_width;
    const double v = (0.5 - py / wall.grid_height) * wall.physical_height;
    return wall.center + u_axis * u + v_axis * v;
}

std::optional<WallHit> project_sample(const GazeSample& sample, const VirtualWall& wall) {
    const auto p = intersect_ray_plane(sample, wall);
    if (!p) return std::nullopt;
    return wall_point_to_pixel(*p, wall, sample.timestamp_ms);
}

bool aoi_hit(const GazeSample& sample, const AoiRect& aoi) {
    if (!sample.valid) return false;
    const auto p = ray_plane(sample.head_position, sample.gaze_direction, aoi.center, aoi.normal);
    if (!p) return false;
    const Vec3 d = *p - aoi.center;
    const auto [u_axis, v_axis] = plane_basis(aoi.normal);
    return std::abs(d.dot(u_axis)) <= aoi.half_extent_u &&
           std::abs(d.dot(v_axis)) <= aoi.half_extent_v;
}

}  // namespace gazedist
