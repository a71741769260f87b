#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "identispace/geometry.hpp"
#include "identispace/mesh.hpp"

namespace identispace {

struct WireframeSpec {
    SurfaceParams surface{};
    int outer_density{8};        // capsules per i-step
    int inner_density{8};        // capsules per j-step
    double thickness{1.2};       // capsule radius, mm
    int capsule_resolution{12};  // sides around the axis
    /// Reproduce the literal loop bounds of the original modeling script,
    /// which run one substep past each grid cell.
    bool legacy_overshoot{false};
};

inline void check(const WireframeSpec& s)
{
    check(s.surface);
    if (!(s.thickness > 0.0) || !std::isfinite(s.thickness))
        throw std::invalid_argument("thickness must be > 0");
    if (s.outer_density < 1) throw std::invalid_argument("outer-density must be >= 1");
    if (s.inner_density < 1) throw std::invalid_argument("inner-density must be >= 1");
    if (s.capsule_resolution < 4) throw std::invalid_argument("resolution must be >= 4");
}

enum class Direction : std::uint8_t { Outer = 0, Inner = 1 };

struct SegmentKey {
    int i{0};
    int j{0};
    Direction direction{Direction::Outer};
    int step{0};

    friend auto operator<=>(const SegmentKey&, const SegmentKey&) = default;
};

struct Segment {
    Vec3 a;
    Vec3 b;
    double radius{0.0};
    SegmentKey key;
};

struct Capsule {
    Vec3 center_a;
    Vec3 center_b;
    double radius{0.0};
};

/// Below this center distance a capsule is emitted as a single sphere.
inline constexpr double kCoincidentCenters = 1e-9;  // mm

/// Capsules along every grid line of the parameter square, i in [0, 2*lat_ribs],
/// j in [0, long_ribs], ordered by key.
inline std::vector<Segment> plan_segments(const WireframeSpec& spec)
{
    check(spec);
    const SurfaceParams& p = spec.surface;
    const int extra = spec.legacy_overshoot ? 1 : 0;
    const int outer_steps = spec.outer_density + extra;
    const int inner_steps = spec.inner_density + extra;

    std::vector<Segment> plan;
    plan.reserve(static_cast<std::size_t>(2 * p.lat_ribs + 1) * (p.long_ribs + 1) *
                 (outer_steps + inner_steps));
    for (int i = 0; i <= 2 * p.lat_ribs; ++i) {
        for (int j = 0; j <= p.long_ribs; ++j) {
            for (int k = 0; k < outer_steps; ++k) {
                const double x0 = i + static_cast<double>(k) / spec.outer_density;
                const double x1 = i + static_cast<double>(k + 1) / spec.outer_density;
                plan.push_back({surface_point(x0, j, p), surface_point(x1, j, p), spec.thickness,
                                {i, j, Direction::Outer, k}});
            }
            for (int k = 0; k < inner_steps; ++k) {
                const double y0 = j + static_cast<double>(k) / spec.inner_density;
                const double y1 = j + static_cast<double>(k + 1) / spec.inner_density;
                plan.push_back({surface_point(i, y0, p), surface_point(i, y1, p), spec.thickness,
                                {i, j, Direction::Inner, k}});
            }
        }
    }
    return plan;
}

inline bool is_sphere_capsule(const Capsule& c)
{
    return distance(c.center_a, c.center_b) < kCoincidentCenters;
}

/// Latitude bands per hemisphere.
constexpr int capsule_bands(int resolution) { return (resolution + 1) / 2; }

constexpr std::size_t capsule_vertex_count(int resolution, bool sphere)
{
    const auto n = static_cast<std::size_t>(capsule_bands(resolution));
    return (sphere ? 2 * n - 1 : 2 * n) * resolution + 2;
}

constexpr std::size_t capsule_triangle_count(int resolution, bool sphere)
{
    const auto n = static_cast<std::size_t>(capsule_bands(resolution));
    return (sphere ? 4 * n - 2 : 4 * n) * resolution;
}

namespace detail {

/// Orthonormal frame (e1, e2, axis), right handed. e1 comes from the global
/// axis least aligned with `axis` so neighbouring capsules on a rib agree.
inline void capsule_frame(const Vec3& axis, Vec3& e1, Vec3& e2)
{
    const double ax = std::abs(axis.x), ay = std::abs(axis.y), az = std::abs(axis.z);
    Vec3 pick{1, 0, 0};
    if (ay < ax && ay <= az) pick = {0, 1, 0};
    else if (az < ax && az < ay) pick = {0, 0, 1};
    e1 = normalized(pick - dot(pick, axis) * axis);
    e2 = cross(axis, e1);
}

/// Rings stacked along the axis from the bottom pole to the top pole, fanned
/// and banded with outward-facing winding.
inline void append_capsule(TriangleMesh& mesh, const Capsule& c, int resolution, std::uint32_t component)
{
    if (!is_finite(c.center_a) || !is_finite(c.center_b) || !std::isfinite(c.radius))
        throw std::invalid_argument("capsule centers must be finite");
    if (!(c.radius > 0.0)) throw std::invalid_argument("capsule radius must be > 0");
    if (resolution < 4) throw std::invalid_argument("capsule resolution must be >= 4");

    const bool sphere = is_sphere_capsule(c);
    const int n = capsule_bands(resolution);
    Vec3 axis{0, 0, 1}, e1{1, 0, 0}, e2{0, 1, 0};
    if (!sphere) {
        axis = normalized(c.center_b - c.center_a);
        capsule_frame(axis, e1, e2);
    }
    const double r = c.radius;

    // (center, ring radius) per ring, bottom to top. Polar angle theta is
    // measured from the bottom pole.
    struct Ring { Vec3 center; double radius; };
    std::vector<Ring> rings;
    if (sphere) {
        for (int k = 1; k < 2 * n; ++k) {
            const double theta = 180.0 * k / (2 * n);
            rings.push_back({c.center_a - r * cos_deg(theta) * axis, r * sin_deg(theta)});
        }
    } else {
        for (int k = 1; k <= n; ++k) {
            const double theta = 90.0 * k / n;
            rings.push_back({c.center_a - r * cos_deg(theta) * axis, r * sin_deg(theta)});
        }
        for (int k = n; k >= 1; --k) {
            const double theta = 90.0 * k / n;
            rings.push_back({c.center_b + r * cos_deg(theta) * axis, r * sin_deg(theta)});
        }
    }
    const Vec3 bottom = c.center_a - r * axis;
    const Vec3 top = (sphere ? c.center_a : c.center_b) + r * axis;

    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    const auto res = static_cast<std::uint32_t>(resolution);
    mesh.vertices.push_back(bottom);
    for (const Ring& ring : rings) {
        for (int m = 0; m < resolution; ++m) {
            const double phi = 360.0 * m / resolution;
            mesh.vertices.push_back(ring.center + ring.radius * (cos_deg(phi) * e1 + sin_deg(phi) * e2));
        }
    }
    mesh.vertices.push_back(top);

    const auto ring_count = static_cast<std::uint32_t>(rings.size());
    const std::uint32_t top_index = base + 1 + ring_count * res;
    auto at = [&](std::uint32_t ring, std::uint32_t m) { return base + 1 + ring * res + (m % res); };
    auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t d) {
        mesh.triangles.push_back({a, b, d});
        mesh.component_ids.push_back(component);
    };

    for (std::uint32_t m = 0; m < res; ++m) emit(base, at(0, m + 1), at(0, m));
    for (std::uint32_t q = 0; q + 1 < ring_count; ++q) {
        for (std::uint32_t m = 0; m < res; ++m) {
            emit(at(q, m), at(q, m + 1), at(q + 1, m + 1));
            emit(at(q, m), at(q + 1, m + 1), at(q + 1, m));
        }
    }
    for (std::uint32_t m = 0; m < res; ++m) emit(top_index, at(ring_count - 1, m), at(ring_count - 1, m + 1));
}

}  // namespace detail

/// Closed, outward-oriented mesh of the convex hull of two equal spheres:
/// a `resolution`-sided cylinder capped by two hemispheres. Coincident centers
/// yield a UV sphere.
inline TriangleMesh capsule_mesh(const Capsule& c, int resolution)
{
    TriangleMesh mesh;
    const bool sphere = is_finite(c.center_a) && is_finite(c.center_b) && is_sphere_capsule(c);
    mesh.vertices.reserve(capsule_vertex_count(resolution < 4 ? 4 : resolution, sphere));
    detail::append_capsule(mesh, c, resolution, 0);
    return mesh;
}

inline std::size_t count_sphere_capsules(const std::vector<Segment>& plan)
{
    std::size_t n = 0;
    for (const Segment& s : plan)
        if (distance(s.a, s.b) < kCoincidentCenters) ++n;
    return n;
}

/// Union of one capsule per planned segment, in plan order; capsule k gets
/// component id k. Capsules are never welded to each other.
inline TriangleMesh build_wireframe(const WireframeSpec& spec, const std::vector<Segment>& plan)
{
    check(spec);
    std::size_t vertex_total = 0, triangle_total = 0;
    for (const Segment& s : plan) {
        const bool sphere = distance(s.a, s.b) < kCoincidentCenters;
        vertex_total += capsule_vertex_count(spec.capsule_resolution, sphere);
        triangle_total += capsule_triangle_count(spec.capsule_resolution, sphere);
    }
    TriangleMesh mesh;
    mesh.vertices.reserve(vertex_total);
    mesh.triangles.reserve(triangle_total);
    mesh.component_ids.reserve(triangle_total);
    for (std::size_t k = 0; k < plan.size(); ++k)
        detail::append_capsule(mesh, {plan[k].a, plan[k].b, plan[k].radius}, spec.capsule_resolution,
                               static_cast<std::uint32_t>(k));
    return mesh;
}

inline TriangleMesh build_wireframe(const WireframeSpec& spec)
{
    return build_wireframe(spec, plan_segments(spec));
}

}  // namespace identispace
