#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "identispace/geometry.hpp"

namespace identispace {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle soup. component_ids labels each triangle with the
/// primitive that produced it (capsule index for generated wireframes,
/// 0 for meshes read back from disk).
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<std::uint32_t> component_ids;

    std::size_t triangle_count() const { return triangles.size(); }

    /// Appends `other` with its indices shifted; every appended triangle gets `component`.
    void append(const TriangleMesh& other, std::uint32_t component)
    {
        const auto base = static_cast<std::uint32_t>(vertices.size());
        vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
        triangles.reserve(triangles.size() + other.triangles.size());
        for (const Triangle& t : other.triangles)
            triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
        component_ids.insert(component_ids.end(), other.triangles.size(), component);
    }

    friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;
};

inline constexpr double kDegenerateArea = 1e-12;  // mm^2

inline double triangle_area(const TriangleMesh& m, const Triangle& t)
{
    const Vec3& a = m.vertices[t[0]];
    return 0.5 * norm(cross(m.vertices[t[1]] - a, m.vertices[t[2]] - a));
}

inline bool is_degenerate(const TriangleMesh& m, const Triangle& t)
{
    return t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || !(triangle_area(m, t) > kDegenerateArea);
}

struct MeshReport {
    std::size_t component_count{0};
    /// Closed and consistently oriented: every edge is traversed equally
    /// often in both directions, i.e. the component is a union of closed
    /// oriented surfaces.
    std::vector<bool> watertight_per_component;
    /// Strict two-manifold edges: every edge used by exactly two triangles
    /// traversing it in opposite directions.
    std::vector<bool> edge_manifold_per_component;
    std::vector<long long> euler_characteristic_per_component;
    Vec3 bbox_min{};
    Vec3 bbox_max{};
    std::size_t triangle_count{0};
    std::size_t degenerate_count{0};
    /// Edges whose forward and backward use counts differ (boundary or flipped).
    std::size_t open_edge_count{0};
    /// Balanced edges used by more than two triangles.
    std::size_t nonmanifold_edge_count{0};

    bool all_watertight() const
    {
        return std::all_of(watertight_per_component.begin(), watertight_per_component.end(),
                           [](bool b) { return b; });
    }
    bool all_edge_manifold() const
    {
        return std::all_of(edge_manifold_per_component.begin(), edge_manifold_per_component.end(),
                           [](bool b) { return b; });
    }
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent_[a] = b;
    }

private:
    std::vector<std::uint32_t> parent_;
};

struct EdgeUse {
    std::uint32_t lo;
    std::uint32_t hi;
    bool forward;  // traversed lo -> hi

    friend bool operator<(const EdgeUse& a, const EdgeUse& b)
    {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    }
};

}  // namespace detail

/// Components are formed by vertex sharing only; overlapping but unwelded
/// pieces stay separate.
inline MeshReport validate(const TriangleMesh& mesh)
{
    MeshReport report;
    report.triangle_count = mesh.triangles.size();
    if (mesh.triangles.empty()) return report;

    detail::DisjointSets sets(mesh.vertices.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    Vec3 lo{inf, inf, inf}, hi{-inf, -inf, -inf};
    for (const Triangle& t : mesh.triangles) {
        sets.unite(t[0], t[1]);
        sets.unite(t[1], t[2]);
        for (auto v : t) {
            const Vec3& p = mesh.vertices[v];
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        if (is_degenerate(mesh, t)) ++report.degenerate_count;
    }
    report.bbox_min = lo;
    report.bbox_max = hi;

    // Component index in order of first appearance, then bucket triangles.
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> root_to_component(mesh.vertices.size(), unset);
    std::vector<std::uint32_t> tri_component(mesh.triangles.size());
    std::uint32_t components = 0;
    for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
        const auto root = sets.find(mesh.triangles[f][0]);
        if (root_to_component[root] == unset) root_to_component[root] = components++;
        tri_component[f] = root_to_component[root];
    }
    std::vector<std::size_t> offsets(components + 1, 0);
    for (auto c : tri_component) ++offsets[c + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<std::uint32_t> order(mesh.triangles.size());
    {
        auto cursor = offsets;
        for (std::size_t f = 0; f < tri_component.size(); ++f)
            order[cursor[tri_component[f]]++] = static_cast<std::uint32_t>(f);
    }

    report.component_count = components;
    report.watertight_per_component.resize(components);
    report.edge_manifold_per_component.resize(components);
    report.euler_characteristic_per_component.resize(components);

    std::vector<detail::EdgeUse> edges;
    std::vector<std::uint32_t> verts;
    for (std::uint32_t c = 0; c < components; ++c) {
        edges.clear();
        verts.clear();
        for (std::size_t k = offsets[c]; k < offsets[c + 1]; ++k) {
            const Triangle& t = mesh.triangles[order[k]];
            for (int e = 0; e < 3; ++e) {
                const auto a = t[e], b = t[(e + 1) % 3];
                edges.push_back({std::min(a, b), std::max(a, b), a < b});
                verts.push_back(a);
            }
        }
        std::sort(edges.begin(), edges.end());
        std::sort(verts.begin(), verts.end());
        const auto vertex_count = static_cast<long long>(
            std::unique(verts.begin(), verts.end()) - verts.begin());

        bool closed = true, manifold = true;
        long long edge_count = 0;
        for (std::size_t e = 0; e < edges.size();) {
            std::size_t forward = 0, backward = 0, end = e;
            for (; end < edges.size() && !(edges[e] < edges[end]) && !(edges[end] < edges[e]); ++end)
                (edges[end].forward ? forward : backward) += 1;
            ++edge_count;
            if (forward != backward) {
                closed = false;
                ++report.open_edge_count;
            } else if (forward + backward > 2) {
                ++report.nonmanifold_edge_count;
            }
            if (!(forward == 1 && backward == 1)) manifold = false;
            e = end;
        }
        const auto face_count = static_cast<long long>(offsets[c + 1] - offsets[c]);
        report.watertight_per_component[c] = closed;
        report.edge_manifold_per_component[c] = manifold;
        report.euler_characteristic_per_component[c] = vertex_count - edge_count + face_count;
    }
    return report;
}

}  // namespace identispace
