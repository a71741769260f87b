#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include "identispace/stl.hpp"
#include "identispace/wireframe.hpp"

using namespace identispace;

namespace {

std::uint32_t count_field(const std::string& bytes)
{
    std::uint32_t n = 0;
    for (int b = 0; b < 4; ++b) n |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[80 + b])) << (8 * b);
    return n;
}

using Corner = std::array<std::uint32_t, 3>;

/// Every triangle corner as float bit patterns, in triangle order.
std::vector<Corner> corners(const TriangleMesh& m)
{
    std::vector<Corner> out;
    for (const Triangle& t : m.triangles)
        for (auto v : t) {
            const Vec3& p = m.vertices[v];
            out.push_back({std::bit_cast<std::uint32_t>(static_cast<float>(p.x)),
                           std::bit_cast<std::uint32_t>(static_cast<float>(p.y)),
                           std::bit_cast<std::uint32_t>(static_cast<float>(p.z))});
        }
    return out;
}

TriangleMesh one_triangle()
{
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    m.component_ids = {0};
    return m;
}

}  // namespace

TEST(WriteStl, EmptyMeshIsHeaderOnly)
{
    const std::string bytes = write_stl(TriangleMesh{});
    EXPECT_EQ(bytes.size(), 84u);
    EXPECT_EQ(count_field(bytes), 0u);
    EXPECT_EQ(bytes.substr(0, kStlHeaderTag.size()), kStlHeaderTag);
    for (std::size_t k = kStlHeaderTag.size(); k < 80; ++k) EXPECT_EQ(bytes[k], '\0');
}

TEST(WriteStl, SingleTriangleLayout)
{
    const std::string bytes = write_stl(one_triangle());
    ASSERT_EQ(bytes.size(), 134u);
    EXPECT_EQ(count_field(bytes), 1u);
    float f[12];
    std::memcpy(f, bytes.data() + 84, sizeof f);  // host is little-endian
    const float want[12] = {0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0};
    for (int k = 0; k < 12; ++k) EXPECT_EQ(f[k], want[k]) << k;
    EXPECT_EQ(bytes[132], '\0');
    EXPECT_EQ(bytes[133], '\0');
}

TEST(WriteStl, FileSizeLaw)
{
    for (int res : {4, 7, 12}) {
        const TriangleMesh m = capsule_mesh({{0, 0, 0}, {1, 2, 3}, 0.5}, res);
        EXPECT_EQ(write_stl(m).size(), 84u + 50u * m.triangles.size());
    }
}

TEST(WriteStl, RejectsNonFiniteVertex)
{
    TriangleMesh m = one_triangle();
    m.vertices[1].y = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(write_stl(m), StlError);
    EXPECT_THROW(write_stl(m, StlMode::Ascii), StlError);
}

TEST(WriteStl, AsciiShape)
{
    const std::string text = write_stl(one_triangle(), StlMode::Ascii);
    EXPECT_TRUE(text.starts_with("solid identispace-forge\n"));
    EXPECT_NE(text.find("facet normal 0 0 1"), std::string::npos);
    EXPECT_NE(text.find("vertex 1 0 0"), std::string::npos);
    EXPECT_TRUE(text.ends_with("endsolid identispace-forge\n"));
}

TEST(ReadStl, BinaryRoundTripPreservesCorners)
{
    WireframeSpec spec;
    spec.surface.kind = SurfaceKind::Klein;
    spec.surface.lat_ribs = 4;
    spec.surface.long_ribs = 5;
    spec.outer_density = spec.inner_density = 2;
    spec.capsule_resolution = 6;
    const TriangleMesh m = build_wireframe(spec);
    const TriangleMesh back = read_stl(write_stl(m));
    EXPECT_EQ(back.triangles.size(), m.triangles.size());
    EXPECT_EQ(corners(back), corners(m));

    auto sorted_unique = [](std::vector<Corner> c) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        return c;
    };
    EXPECT_EQ(sorted_unique(corners(back)), sorted_unique(corners(m)));
    EXPECT_EQ(back.vertices.size(), sorted_unique(corners(m)).size());
}

TEST(ReadStl, AsciiAndBinaryParseToTheSameMesh)
{
    const TriangleMesh capsule = capsule_mesh({{0.1, -3.7, 12.25}, {1.3, 2.9, 8.0}, 1.2}, 12);
    const TriangleMesh from_binary = read_stl(write_stl(capsule, StlMode::Binary));
    const TriangleMesh from_ascii = read_stl(write_stl(capsule, StlMode::Ascii));
    EXPECT_EQ(from_ascii, from_binary);
}

TEST(ReadStl, TruncatedByOneByte)
{
    const std::string bytes = write_stl(capsule_mesh({{0, 0, 0}, {1, 0, 0}, 1}, 6));
    EXPECT_THROW(read_stl(std::string_view(bytes).substr(0, bytes.size() - 1)), StlError);
    EXPECT_THROW(read_stl(std::string_view(bytes).substr(0, 50)), StlError);
}

TEST(ReadStl, TrailingBytesAreALengthMismatch)
{
    std::string bytes = write_stl(one_triangle());
    bytes += "xyz";
    try {
        read_stl(bytes);
        FAIL() << "expected StlError";
    } catch (const StlError& e) {
        EXPECT_NE(std::string(e.what()).find("mismatch"), std::string::npos);
    }
}

TEST(ReadStl, MalformedAscii)
{
    EXPECT_THROW(read_stl("solid x\n facet normal 0 0 1\n outer loop\n vertex 1 2\n"), StlError);
    EXPECT_THROW(read_stl("solid x\n facet normal 0 0 one\n"), StlError);
    EXPECT_THROW(read_stl("solid x\n"), StlError);
}

TEST(ReadStl, BinaryWithSolidHeaderFallsBack)
{
    std::string bytes = write_stl(one_triangle());
    std::memcpy(bytes.data(), "solid but binary", 16);
    const TriangleMesh m = read_stl(bytes);
    EXPECT_EQ(m.triangles.size(), 1u);
    EXPECT_EQ(m.vertices.size(), 3u);
}

TEST(ReadStl, WeldsOnlyBitIdenticalVertices)
{
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1e-3, 0, 0}};
    m.triangles = {{0, 1, 2}, {3, 2, 4}};
    m.component_ids = {0, 0};
    const TriangleMesh back = read_stl(write_stl(m));
    EXPECT_EQ(back.vertices.size(), 4u);
    EXPECT_EQ(back.triangles[1][0], back.triangles[0][1]);
}

TEST(ReadStl, RoundTripKeepsValidationVerdict)
{
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> coord(-20, 20);
    TriangleMesh m;
    for (std::uint32_t k = 0; k < 20; ++k)
        m.append(capsule_mesh({{coord(rng), coord(rng), coord(rng)}, {coord(rng), coord(rng), coord(rng)}, 1.0}, 8), k);
    const MeshReport before = validate(m);
    const MeshReport after = validate(read_stl(write_stl(m)));
    EXPECT_EQ(before.all_watertight(), after.all_watertight());
    EXPECT_EQ(before.triangle_count, after.triangle_count);
    EXPECT_EQ(before.component_count, after.component_count);
}
