#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrode/config.hpp"

namespace corrode {

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Region : std::uint8_t { Concrete = 0, Steel = 1, SCI = 2 };
enum class BoundaryTag : std::uint8_t { Outer = 0, RebarSurface = 1, TopSurface = 2 };

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct BoundaryEdge {
    std::array<int, 2> nodes{};
    BoundaryTag tag = BoundaryTag::Outer;
    int parent = -1;        // non-steel triangle owning the edge
    int steel_parent = -1;  // steel neighbour, only for rebar-surface edges
};

struct Mesh {
    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> triangles;  // counter-clockwise
    std::vector<Region> regions;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<double> porosity;        // per triangle, 0 on steel
    std::vector<std::uint8_t> weak_band; // per triangle, bar benchmark only
    std::vector<Rebar> rebars;           // geometric description, if known

    std::size_t node_count() const { return nodes.size(); }
    std::size_t triangle_count() const { return triangles.size(); }
    double area(std::size_t tri) const;
    Point centroid(std::size_t tri) const;
    double total_area() const;
    double region_area(Region r) const;
};

bool is_porous(Region r);

// Sets per-triangle porosity: sci value on SCI, bulk on concrete, 0 on steel.
void assign_porosity(Mesh& mesh, double bulk, double sci);

// Throws MeshError describing the first violated structural invariant.
void check_mesh(const Mesh& mesh);

// Rebuilds boundary edges from triangle adjacency: single-parent edges become
// Outer (TopSurface when both ends lie on y = top_y), steel/non-steel
// interfaces become RebarSurface. Explicit tags win over derived ones.
void derive_boundary_edges(Mesh& mesh, double top_y, const std::map<std::pair<int, int>, BoundaryTag>& explicit_tags = {});

// ASCII MSH version 2 with physical names Concrete, Steel, SCI, Outer,
// RebarSurface, TopSurface. Coordinates in the file are millimetres.
Mesh import_msh(const std::string& path);
void write_msh(const Mesh& mesh, const std::string& path);

// Structured bar with alternating diagonals; elements whose centroid lies in
// the central 8 mm are flagged in weak_band.
Mesh generate_bar_mesh(double length, double height, double element_size);

struct CrossSectionOptions {
    double sci_thickness = 0.2e-3;
    double max_size = 5e-3;
    double refine_distance = 0.0;  // 0: cover + 5 mm per rebar
    double grading = 0.25;         // size increase per unit distance
    std::uint64_t seed = 7;
    int smoothing_passes = 3;
};

Mesh generate_rebar_cross_section(const GeometrySpec& geometry, double h_sci, double h_bulk,
                                  const CrossSectionOptions& options = {});

// Mesh from a config: imports mesh.file when set, otherwise generates.
Mesh build_mesh(const SimulationConfig& config);

struct NodalField {
    std::string name;
    int components = 1;          // 1 or 2 (stored in-plane, written as 3D vectors)
    std::vector<double> values;  // node-major
};

// Contents of a legacy ASCII VTK unstructured grid of triangles.
struct VtkGrid {
    double time = 0.0;
    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> regions;
    std::vector<NodalField> fields;
};

VtkGrid read_vtk(const std::string& path);

struct MeshQuality {
    double min_angle_deg = 0.0;
    double max_edge = 0.0;
    double max_sci_edge = 0.0;
    double max_concrete_edge = 0.0;
    std::size_t rebar_surface_edges = 0;
    std::size_t top_surface_edges = 0;
};
MeshQuality mesh_quality(const Mesh& mesh);

}  // namespace corrode
