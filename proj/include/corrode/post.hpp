#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "corrode/mesh.hpp"

namespace corrode {

// Degradation evaluated at a damage value inside a given triangle.
using DegradationFn = std::function<double(double phi, int triangle)>;

// Integral over top-surface edges of (1 - g(phi)) (eps_x - eps*_x), with
// two-point Gauss on each edge. strain is per triangle; phi and the
// volumetric eigenstrain are nodal.
double crack_width(const Mesh& mesh, const std::vector<std::array<double, 3>>& strain,
                   const std::vector<double>& phi, const std::vector<double>& eigenstrain,
                   const DegradationFn& degradation);

// Bin-accelerated point location with barycentric weights.
class PointLocator {
public:
    explicit PointLocator(const Mesh& mesh);
    // Triangle containing p or -1; weights are the barycentric coordinates.
    int locate(const Point& p, std::array<double, 3>& weights) const;
    double interpolate(const std::vector<double>& nodal, const Point& p, bool* inside = nullptr) const;

private:
    const Mesh& mesh_;
    double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> bins_;
};

struct ProbeSample {
    double coordinate;  // distance along the ray or angle in radians
    double value;
};

struct Probe {
    std::vector<ProbeSample> samples;
    bool truncated = false;
};

// Samples along a ray from the rebar surface outwards; radial distance is
// measured from the centre.
Probe probe_radial(const PointLocator& locator, const std::vector<double>& nodal, const Rebar& rebar, double angle,
                   double length, int samples);
Probe probe_circumferential(const PointLocator& locator, const std::vector<double>& nodal, const Rebar& rebar,
                            double radius, int samples);

struct Snapshot {
    double time = 0.0;
    std::vector<NodalField> fields;
};

void write_vtk(const Mesh& mesh, const Snapshot& snapshot, const std::string& path);

struct TimeRecord {
    double time = 0.0;
    double width = 0.0;
    double relative_width = 0.0;
    double precipitate_volume = 0.0;  // m3 per m thickness
    double mass_drift = 0.0;
    double max_phi = 0.0;
    int phase_field_iterations = 0;
};

void write_csv(const std::vector<TimeRecord>& series, const std::string& path);
std::vector<TimeRecord> read_csv(const std::string& path);

// Averages element values to nodes weighted by element area.
std::vector<double> element_to_nodal(const Mesh& mesh, const std::vector<double>& element_values);

}  // namespace corrode
