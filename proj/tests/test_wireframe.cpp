#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "identispace/wireframe.hpp"
#include "oracles.hpp"

using namespace identispace;

namespace {

WireframeSpec small_spec(SurfaceKind kind, int lat, int lon, int od, int id, int res = 4)
{
    WireframeSpec s;
    s.surface.kind = kind;
    s.surface.lat_ribs = lat;
    s.surface.long_ribs = lon;
    s.outer_density = od;
    s.inner_density = id;
    s.capsule_resolution = res;
    return s;
}

double distance_to_segment(const Vec3& p, const Vec3& a, const Vec3& b)
{
    const Vec3 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + t * ab);
}

double signed_volume(const TriangleMesh& m)
{
    double v = 0;
    for (const Triangle& t : m.triangles)
        v += dot(m.vertices[t[0]], cross(m.vertices[t[1]], m.vertices[t[2]])) / 6.0;
    return v;
}

}  // namespace

TEST(PlanSegments, CountForThreeByThreeGrid)
{
    const auto plan = plan_segments(small_spec(SurfaceKind::Torus, 3, 3, 1, 1));
    EXPECT_EQ(oracle::enumerate_segments(3, 3, 1, 1, false), 56u);
    EXPECT_EQ(plan.size(), 56u);
}

TEST(PlanSegments, DensitiesAddPerCell)
{
    const auto plan = plan_segments(small_spec(SurfaceKind::Klein, 3, 3, 2, 3));
    EXPECT_EQ(plan.size(), oracle::enumerate_segments(3, 3, 2, 3, false));
    EXPECT_EQ(plan.size(), 7u * 4u * 5u);
    std::size_t at_origin = std::count_if(plan.begin(), plan.end(),
                                          [](const Segment& s) { return s.key.i == 0 && s.key.j == 0; });
    EXPECT_EQ(at_origin, 5u);
}

TEST(PlanSegments, LegacyOvershootAddsOneSubstepPerDirection)
{
    auto spec = small_spec(SurfaceKind::Torus, 4, 5, 3, 2);
    spec.legacy_overshoot = true;
    const auto plan = plan_segments(spec);
    EXPECT_EQ(plan.size(), oracle::enumerate_segments(4, 5, 3, 2, true));
    EXPECT_EQ(plan.size(), 9u * 6u * (4u + 3u));
}

TEST(PlanSegments, KeysAscendAndAreUnique)
{
    const auto plan = plan_segments(small_spec(SurfaceKind::Roman, 4, 4, 3, 2));
    for (std::size_t k = 1; k < plan.size(); ++k) EXPECT_LT(plan[k - 1].key, plan[k].key);
}

TEST(PlanSegments, EndpointsAreConsecutiveSamples)
{
    const auto spec = small_spec(SurfaceKind::Klein, 5, 6, 3, 4);
    const auto plan = plan_segments(spec);
    for (const Segment& s : plan) {
        const bool outer = s.key.direction == Direction::Outer;
        const double density = outer ? spec.outer_density : spec.inner_density;
        const double from = s.key.step / density, to = (s.key.step + 1) / density;
        const double i0 = outer ? s.key.i + from : s.key.i, i1 = outer ? s.key.i + to : s.key.i;
        const double j0 = outer ? s.key.j : s.key.j + from, j1 = outer ? s.key.j : s.key.j + to;
        EXPECT_EQ(s.a, surface_point(i0, j0, spec.surface));
        EXPECT_EQ(s.b, surface_point(i1, j1, spec.surface));
        EXPECT_EQ(s.radius, spec.thickness);
    }
}

TEST(PlanSegments, TorusOuterSamplesLieOnTheirLatitudeCircle)
{
    const auto spec = small_spec(SurfaceKind::Torus, 18, 36, 8, 8);
    const SurfaceParams& p = spec.surface;
    for (const Segment& s : plan_segments(spec)) {
        if (s.key.direction != Direction::Outer) continue;
        const double x0 = s.key.i + static_cast<double>(s.key.step) / spec.outer_density;
        const double x1 = s.key.i + static_cast<double>(s.key.step + 1) / spec.outer_density;
        auto ring_radius = [&](double x) { return p.outer_radius + p.inner_radius * std::cos(x * 2 * std::numbers::pi / p.lat_ribs); };
        EXPECT_NEAR(std::hypot(s.a.x, s.a.y), ring_radius(x0), 1e-9);
        EXPECT_NEAR(std::hypot(s.b.x, s.b.y), ring_radius(x1), 1e-9);
    }
}

TEST(PlanSegments, Deterministic)
{
    const auto spec = small_spec(SurfaceKind::Klein, 6, 8, 2, 2);
    const auto a = plan_segments(spec);
    const auto b = plan_segments(spec);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].a, b[k].a);
        EXPECT_EQ(a[k].b, b[k].b);
        EXPECT_EQ(a[k].key, b[k].key);
    }
}

TEST(PlanSegments, RejectsInvalidSpec)
{
    auto spec = small_spec(SurfaceKind::Klein, 6, 8, 2, 2);
    spec.thickness = 0;
    EXPECT_THROW(plan_segments(spec), std::invalid_argument);
    spec = small_spec(SurfaceKind::Klein, 6, 8, 0, 2);
    EXPECT_THROW(plan_segments(spec), std::invalid_argument);
    spec = small_spec(SurfaceKind::Klein, 6, 8, 2, 2, 3);
    EXPECT_THROW(plan_segments(spec), std::invalid_argument);
}

TEST(CapsuleMesh, CoincidentCentersGiveASphere)
{
    const TriangleMesh m = capsule_mesh({{1, 2, 3}, {1, 2, 3}, 1.0}, 8);
    EXPECT_EQ(m.triangles.size(), capsule_triangle_count(8, true));
    EXPECT_EQ(m.vertices.size(), capsule_vertex_count(8, true));
    const MeshReport r = validate(m);
    ASSERT_EQ(r.component_count, 1u);
    EXPECT_TRUE(r.edge_manifold_per_component[0]);
    EXPECT_EQ(r.euler_characteristic_per_component[0], 2);
    for (const Vec3& v : m.vertices) EXPECT_NEAR(distance(v, {1, 2, 3}), 1.0, 1e-12);
}

TEST(CapsuleMesh, AxisAlignedBoundingBox)
{
    const TriangleMesh m = capsule_mesh({{0, 0, 0}, {0, 0, 2}, 1.0}, 8);
    const MeshReport r = validate(m);
    EXPECT_NEAR(r.bbox_min.x, -1, 1e-12);
    EXPECT_NEAR(r.bbox_min.y, -1, 1e-12);
    EXPECT_NEAR(r.bbox_min.z, -1, 1e-12);
    EXPECT_NEAR(r.bbox_max.x, 1, 1e-12);
    EXPECT_NEAR(r.bbox_max.y, 1, 1e-12);
    EXPECT_NEAR(r.bbox_max.z, 3, 1e-12);
}

TEST(CapsuleMesh, RandomCapsulesAreClosedSpheres)
{
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> coord(-50, 50), rad(0.1, 3);
    std::uniform_int_distribution<int> res(4, 16);
    for (int n = 0; n < 50; ++n) {
        const Capsule c{{coord(rng), coord(rng), coord(rng)}, {coord(rng), coord(rng), coord(rng)}, rad(rng)};
        const int resolution = res(rng);
        const TriangleMesh m = capsule_mesh(c, resolution);
        // chi from raw counts: V - E + F with E = 3F/2 for a closed surface
        const auto V = static_cast<long long>(m.vertices.size());
        const auto F = static_cast<long long>(m.triangles.size());
        EXPECT_EQ(F % 2, 0);
        EXPECT_EQ(V - 3 * F / 2 + F, 2);
        const MeshReport r = validate(m);
        ASSERT_EQ(r.component_count, 1u);
        EXPECT_TRUE(r.edge_manifold_per_component[0]);
        EXPECT_TRUE(r.watertight_per_component[0]);
        EXPECT_EQ(r.euler_characteristic_per_component[0], 2);
        EXPECT_EQ(r.degenerate_count, 0u);
        EXPECT_EQ(m.triangles.size(), capsule_triangle_count(resolution, false));
    }
}

TEST(CapsuleMesh, VerticesStayOnTheCapsuleSurface)
{
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> coord(-10, 10), rad(0.2, 2);
    for (int n = 0; n < 40; ++n) {
        const Capsule c{{coord(rng), coord(rng), coord(rng)}, {coord(rng), coord(rng), coord(rng)}, rad(rng)};
        const TriangleMesh m = capsule_mesh(c, 4 + n % 13);
        for (const Vec3& v : m.vertices) {
            const double d = distance_to_segment(v, c.center_a, c.center_b);
            EXPECT_LE(d, c.radius + 1e-6);
            EXPECT_GE(d, c.radius - 1e-6);
        }
    }
}

TEST(CapsuleMesh, SupportFunctionCoversBothEndSpheres)
{
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> coord(-10, 10), rad(0.2, 2);
    std::normal_distribution<double> g;
    for (int n = 0; n < 40; ++n) {
        const int resolution = 4 + n % 13;
        const Capsule c{{coord(rng), coord(rng), coord(rng)}, {coord(rng), coord(rng), coord(rng)}, rad(rng)};
        const TriangleMesh m = capsule_mesh(c, resolution);
        const double slack = 2 * c.radius * std::pow(std::sin(std::numbers::pi / resolution), 2);
        std::vector<Vec3> dirs{normalized(c.center_b - c.center_a), normalized(c.center_a - c.center_b)};
        for (int k = 0; k < resolution; ++k) dirs.push_back(normalized({g(rng), g(rng), g(rng)}));
        for (const Vec3& w : dirs) {
            double mesh_support = -1e300;
            for (const Vec3& v : m.vertices) mesh_support = std::max(mesh_support, dot(v, w));
            const double hull_support = std::max(dot(c.center_a, w), dot(c.center_b, w)) + c.radius;
            EXPECT_GE(mesh_support, hull_support - slack - 1e-9);
            EXPECT_LE(mesh_support, hull_support + 1e-9);
        }
    }
}

TEST(CapsuleMesh, NormalsPointOutward)
{
    const Capsule c{{1, -2, 0.5}, {4, 1, 2}, 0.8};
    const TriangleMesh m = capsule_mesh(c, 24);
    const double length = distance(c.center_a, c.center_b);
    const double exact = std::numbers::pi * c.radius * c.radius * (length + 4.0 / 3.0 * c.radius);
    const double v = signed_volume(m);
    EXPECT_GT(v, 0.95 * exact);
    EXPECT_LT(v, exact);
}

TEST(CapsuleMesh, RejectsNonFiniteCenters)
{
    EXPECT_THROW(capsule_mesh({{NAN, 0, 0}, {1, 0, 0}, 1}, 8), std::invalid_argument);
    EXPECT_THROW(capsule_mesh({{0, 0, 0}, {1, INFINITY, 0}, 1}, 8), std::invalid_argument);
    EXPECT_THROW(capsule_mesh({{0, 0, 0}, {1, 0, 0}, 0}, 8), std::invalid_argument);
    EXPECT_THROW(capsule_mesh({{0, 0, 0}, {1, 0, 0}, 1}, 3), std::invalid_argument);
}

TEST(CapsuleMesh, FrameIsStableAlongAStraightRib)
{
    // Collinear capsules get the same frame, so their end rings coincide.
    const TriangleMesh first = capsule_mesh({{0, 0, 0}, {1, 0.1, 0}, 0.5}, 8);
    const TriangleMesh second = capsule_mesh({{1, 0.1, 0}, {2, 0.2, 0}, 0.5}, 8);
    const std::size_t ring = 8;
    const std::size_t n = capsule_bands(8);
    for (std::size_t m = 0; m < ring; ++m) {
        const Vec3& top_equator = first.vertices[1 + n * ring + m];      // first ring at b
        const Vec3& bottom_equator = second.vertices[1 + (n - 1) * ring + m];  // last ring at a
        EXPECT_LT(distance(top_equator, bottom_equator), 1e-12);
    }
}

TEST(BuildWireframe, TriangleCountIsSumOfCapsules)
{
    const auto spec = small_spec(SurfaceKind::Torus, 3, 3, 1, 1, 4);
    const TriangleMesh mesh = build_wireframe(spec);
    const std::size_t per_capsule = capsule_mesh({{0, 0, 0}, {1, 0, 0}, 1}, 4).triangles.size();
    EXPECT_EQ(per_capsule, 32u);
    EXPECT_EQ(mesh.triangles.size(), 56u * per_capsule);
    EXPECT_EQ(mesh.component_ids.size(), mesh.triangles.size());
    EXPECT_EQ(mesh.component_ids.back(), 55u);
}

TEST(BuildWireframe, EveryComponentIsAClosedSphere)
{
    for (SurfaceKind kind : {SurfaceKind::Torus, SurfaceKind::Klein, SurfaceKind::Roman}) {
        const auto spec = small_spec(kind, 6, 8, 2, 3, 6);
        const TriangleMesh mesh = build_wireframe(spec);
        const MeshReport r = validate(mesh);
        EXPECT_EQ(r.component_count, plan_segments(spec).size());
        EXPECT_TRUE(r.all_watertight());
        EXPECT_TRUE(r.all_edge_manifold());
        for (auto chi : r.euler_characteristic_per_component) EXPECT_EQ(chi, 2);
        EXPECT_EQ(r.degenerate_count, 0u);
    }
}

TEST(BuildWireframe, Deterministic)
{
    const auto spec = small_spec(SurfaceKind::Klein, 5, 7, 2, 2, 6);
    EXPECT_EQ(build_wireframe(spec), build_wireframe(spec));
}

TEST(BuildWireframe, RomanPolesBecomeSpheres)
{
    // lat_ribs divisible by 4 puts a j-rib on the collapsed pole u = 90.
    const auto spec = small_spec(SurfaceKind::Roman, 8, 6, 2, 2, 6);
    const auto plan = plan_segments(spec);
    const std::size_t spheres = count_sphere_capsules(plan);
    EXPECT_GT(spheres, 0u);
    const TriangleMesh mesh = build_wireframe(spec, plan);
    std::size_t expected = 0;
    for (const Segment& s : plan)
        expected += capsule_triangle_count(spec.capsule_resolution, distance(s.a, s.b) < kCoincidentCenters);
    EXPECT_EQ(mesh.triangles.size(), expected);
    const MeshReport r = validate(mesh);
    EXPECT_TRUE(r.all_edge_manifold());
    EXPECT_EQ(r.degenerate_count, 0u);
}
