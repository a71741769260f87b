// Builds a coarse Klein bottle wireframe, checks it and writes klein_coarse.stl.

#include <iostream>

#include "identispace/stl.hpp"
#include "identispace/wireframe.hpp"

int main()
{
    using namespace identispace;
    WireframeSpec spec;
    spec.surface.kind = SurfaceKind::Klein;
    spec.surface.lat_ribs = 8;
    spec.surface.long_ribs = 12;
    spec.outer_density = 4;
    spec.inner_density = 4;
    spec.capsule_resolution = 8;

    const TriangleMesh mesh = build_wireframe(spec);
    const MeshReport report = validate(mesh);
    std::cout << report.triangle_count << " triangles in " << report.component_count << " capsules, "
              << (report.all_watertight() ? "watertight" : "NOT watertight") << '\n';
    write_stl_file("klein_coarse.stl", mesh);
    return report.all_watertight() ? 0 : 1;
}
