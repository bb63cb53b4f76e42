#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "corrode/config.hpp"
#include "corrode/mesh.hpp"
#include "test_support.hpp"

using namespace corrode;

namespace {

const char* kUnitSquare = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
2
1 11 "Outer"
2 1 "Concrete"
$EndPhysicalNames
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
6
1 1 2 11 11 1 2
2 1 2 11 11 2 3
3 1 2 11 11 3 4
4 1 2 11 11 4 1
5 2 2 1 1 1 2 3
6 2 2 1 1 1 3 4
$EndElements
)";

GeometrySpec validation_geometry() {
    GeometrySpec g;
    g.width = 0.1;
    g.height = 0.1;
    g.rebars = {{0.05, 0.072, 0.016}};
    return g;
}

}  // namespace

TEST(MshImport, UnitSquare) {
    const auto path = test_support::write_temp("unit_square.msh", kUnitSquare);
    const Mesh m = import_msh(path);
    EXPECT_EQ(m.node_count(), 4u);
    EXPECT_EQ(m.triangle_count(), 2u);
    EXPECT_EQ(m.boundary_edges.size(), 4u);
    EXPECT_NEAR(m.total_area(), 1e-6, 1e-18);  // file coordinates are millimetres
}

TEST(MshImport, DegenerateTriangleIsRejected) {
    std::string text = kUnitSquare;
    text.replace(text.find("6 2 2 1 1 1 3 4"), 15, "6 2 2 1 1 1 2 2");
    const auto path = test_support::write_temp("degenerate.msh", text);
    EXPECT_THROW(import_msh(path), MeshError);
}

TEST(MshImport, RoundTripThroughWriter) {
    const Mesh m = generate_rebar_cross_section(validation_geometry(), 0.4e-3, 2e-3);
    const auto path = test_support::temp_path("roundtrip.msh");
    write_msh(m, path);
    const Mesh back = import_msh(path);
    ASSERT_EQ(back.node_count(), m.node_count());
    ASSERT_EQ(back.triangle_count(), m.triangle_count());
    EXPECT_EQ(back.regions, m.regions);
    EXPECT_NEAR(back.region_area(Region::SCI), m.region_area(Region::SCI), 1e-15);
}

TEST(BarMesh, CountsAndWeakBand) {
    const Mesh m = generate_bar_mesh(0.1, 0.01, 1e-3);
    EXPECT_EQ(m.triangle_count(), 100u * 10u * 2u);
    double band = 0.0;
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
        if (m.weak_band[t]) band += m.area(t);
    }
    EXPECT_NEAR(band, 8e-3 * 0.01, 1e-15);
    EXPECT_THROW(generate_bar_mesh(0.1, 0.01, 0.1), MeshError);
}

TEST(CrossSection, SciAnnulusAreaMatchesAnalytic) {
    const Mesh m = generate_rebar_cross_section(validation_geometry(), 0.2e-3, 0.6e-3);
    const double annulus = M_PI * (std::pow(8.2e-3, 2) - std::pow(8e-3, 2));
    EXPECT_NEAR(m.region_area(Region::SCI), annulus, 0.02 * annulus);
    EXPECT_NEAR(m.region_area(Region::Steel), M_PI * 64e-6, 0.01 * M_PI * 64e-6);
    EXPECT_NEAR(m.total_area(), 0.01, 1e-6 * 0.01);
}

TEST(CrossSection, RebarSurfaceEdgesSeparateSteelFromPorousMaterial) {
    const Mesh m = generate_rebar_cross_section(validation_geometry(), 0.2e-3, 0.6e-3);
    EXPECT_NO_THROW(check_mesh(m));
    std::size_t count = 0;
    for (const auto& e : m.boundary_edges) {
        if (e.tag != BoundaryTag::RebarSurface) continue;
        ++count;
        ASSERT_GE(e.parent, 0);
        ASSERT_GE(e.steel_parent, 0);
        EXPECT_EQ(m.regions[e.steel_parent], Region::Steel);
        EXPECT_NE(m.regions[e.parent], Region::Steel);
    }
    EXPECT_GT(count, 100u);
}

TEST(CrossSection, SciElementsAreWellBelowTheLengthScale) {
    for (const char* name : {"test1", "test2", "test3"}) {
        const auto c = load_config(std::string(CORRODE_SOURCE_DIR) + "/configs/" + name + ".yaml");
        const Mesh m = build_mesh(c);
        const MeshQuality q = mesh_quality(m);
        EXPECT_LE(q.max_sci_edge, c.phase_field.length_scale / 5.0) << name;
        EXPECT_GT(q.min_angle_deg, 20.0) << name;
    }
}

TEST(CrossSection, NodeCountInvariantUnderQuarterTurn) {
    // A centred bar in a square: rotating the specification by 90 degrees
    // leaves the geometry unchanged, so the mesher must produce the same size.
    GeometrySpec g;
    g.width = 0.06;
    g.height = 0.06;
    g.rebars = {{0.03, 0.03, 0.012}};
    GeometrySpec rotated = g;
    rotated.rebars[0] = {g.height - g.rebars[0].y, g.rebars[0].x, g.rebars[0].diameter};
    const Mesh a = generate_rebar_cross_section(g, 0.3e-3, 1e-3);
    const Mesh b = generate_rebar_cross_section(rotated, 0.3e-3, 1e-3);
    EXPECT_EQ(a.node_count(), b.node_count());
}

TEST(CrossSection, OverlappingRebarsAreRejected) {
    GeometrySpec g = validation_geometry();
    g.rebars = {{0.04, 0.05, 0.016}, {0.05, 0.05, 0.016}};
    EXPECT_THROW(generate_rebar_cross_section(g, 0.2e-3, 0.6e-3), MeshError);
}

TEST(CrossSection, MultiRebarGeometriesMesh) {
    for (const char* name : {"rebars2", "rebars3", "rebars4"}) {
        const auto c = load_config(std::string(CORRODE_SOURCE_DIR) + "/configs/" + name + ".yaml");
        const Mesh m = build_mesh(c);
        EXPECT_NO_THROW(check_mesh(m)) << name;
        EXPECT_NEAR(m.total_area(), c.geometry.width * c.geometry.height, 1e-9) << name;
    }
}
