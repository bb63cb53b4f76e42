#include "corrode/post.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace corrode {

double crack_width(const Mesh& mesh, const std::vector<std::array<double, 3>>& strain,
                   const std::vector<double>& phi, const std::vector<double>& eigenstrain,
                   const DegradationFn& degradation) {
    static const double gauss = 0.5 / std::sqrt(3.0);
    bool tagged = false;
    double width = 0.0;
    for (const BoundaryEdge& e : mesh.boundary_edges) {
        if (e.tag != BoundaryTag::TopSurface) continue;
        tagged = true;
        const int a = e.nodes[0];
        const int b = e.nodes[1];
        const double length = std::hypot(mesh.nodes[b].x - mesh.nodes[a].x, mesh.nodes[b].y - mesh.nodes[a].y);
        const double ex = strain[static_cast<std::size_t>(e.parent)][0];
        for (double s : {0.5 - gauss, 0.5 + gauss}) {
            const double ph = (1.0 - s) * phi[a] + s * phi[b];
            const double star = (1.0 - s) * eigenstrain[a] + s * eigenstrain[b];
            width += 0.5 * length * (1.0 - degradation(ph, e.parent)) * (ex - star);
        }
    }
    if (!tagged) throw std::runtime_error("crack width needs edges tagged TopSurface");
    return width;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(mesh) {
    double x1 = -std::numeric_limits<double>::infinity();
    double y1 = x1;
    x0_ = y0_ = std::numeric_limits<double>::infinity();
    for (const Point& p : mesh.nodes) {
        x0_ = std::min(x0_, p.x);
        y0_ = std::min(y0_, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    const double span = std::max(x1 - x0_, y1 - y0_);
    const double target = std::sqrt(std::max<std::size_t>(mesh.triangles.size(), 1) / 2.0);
    cell_ = std::max(span / target, 1e-12);
    nx_ = static_cast<int>((x1 - x0_) / cell_) + 1;
    ny_ = static_cast<int>((y1 - y0_) / cell_) + 1;
    bins_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        double lx = std::numeric_limits<double>::infinity(), ly = lx, hx = -lx, hy = -lx;
        for (int v : mesh.triangles[t]) {
            lx = std::min(lx, mesh.nodes[v].x);
            ly = std::min(ly, mesh.nodes[v].y);
            hx = std::max(hx, mesh.nodes[v].x);
            hy = std::max(hy, mesh.nodes[v].y);
        }
        const int i0 = std::clamp(static_cast<int>((lx - x0_) / cell_), 0, nx_ - 1);
        const int i1 = std::clamp(static_cast<int>((hx - x0_) / cell_), 0, nx_ - 1);
        const int j0 = std::clamp(static_cast<int>((ly - y0_) / cell_), 0, ny_ - 1);
        const int j1 = std::clamp(static_cast<int>((hy - y0_) / cell_), 0, ny_ - 1);
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) bins_[static_cast<std::size_t>(j * nx_ + i)].push_back(static_cast<int>(t));
        }
    }
}

int PointLocator::locate(const Point& p, std::array<double, 3>& w) const {
    const int i = static_cast<int>(std::floor((p.x - x0_) / cell_));
    const int j = static_cast<int>(std::floor((p.y - y0_) / cell_));
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    const double tol = 1e-12;
    for (int t : bins_[static_cast<std::size_t>(j * nx_ + i)]) {
        const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
        const Point& a = mesh_.nodes[tri[0]];
        const Point& b = mesh_.nodes[tri[1]];
        const Point& c = mesh_.nodes[tri[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
        const double l0 = 1.0 - l1 - l2;
        if (l0 >= -tol && l1 >= -tol && l2 >= -tol) {
            w = {l0, l1, l2};
            return t;
        }
    }
    return -1;
}

double PointLocator::interpolate(const std::vector<double>& nodal, const Point& p, bool* inside) const {
    std::array<double, 3> w{};
    const int t = locate(p, w);
    if (inside) *inside = t >= 0;
    if (t < 0) return 0.0;
    const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
    return w[0] * nodal[tri[0]] + w[1] * nodal[tri[1]] + w[2] * nodal[tri[2]];
}

Probe probe_radial(const PointLocator& locator, const std::vector<double>& nodal, const Rebar& rebar, double angle,
                   double length, int samples) {
    Probe probe;
    const double r0 = 0.5 * rebar.diameter;
    const int n = std::max(samples, 2);
    for (int k = 0; k < n; ++k) {
        const double r = r0 + length * k / (n - 1);
        const Point p{rebar.x + r * std::cos(angle), rebar.y + r * std::sin(angle)};
        bool inside = false;
        const double v = locator.interpolate(nodal, p, &inside);
        if (!inside) {
            probe.truncated = true;
            break;
        }
        probe.samples.push_back({r, v});
    }
    return probe;
}

Probe probe_circumferential(const PointLocator& locator, const std::vector<double>& nodal, const Rebar& rebar,
                            double radius, int samples) {
    Probe probe;
    const int n = std::max(samples, 1);
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * M_PI * k / n;
        const Point p{rebar.x + radius * std::cos(angle), rebar.y + radius * std::sin(angle)};
        bool inside = false;
        const double v = locator.interpolate(nodal, p, &inside);
        if (!inside) {
            probe.truncated = true;
            continue;
        }
        probe.samples.push_back({angle, v});
    }
    return probe;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::string& path) {
    File f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

void close_checked(File f, const std::string& path) {
    std::FILE* raw = f.release();
    const bool failed = std::ferror(raw) != 0;
    if (std::fclose(raw) != 0 || failed) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_vtk(const Mesh& mesh, const Snapshot& snap, const std::string& path) {
    File f = open_for_write(path);
    std::FILE* out = f.get();
    std::fprintf(out, "# vtk DataFile Version 3.0\ncorrode snapshot time=%.17g\nASCII\nDATASET UNSTRUCTURED_GRID\n",
                 snap.time);
    std::fprintf(out, "POINTS %zu double\n", mesh.nodes.size());
    for (const Point& p : mesh.nodes) std::fprintf(out, "%.17g %.17g 0\n", p.x, p.y);
    std::fprintf(out, "CELLS %zu %zu\n", mesh.triangles.size(), 4 * mesh.triangles.size());
    for (const auto& t : mesh.triangles) std::fprintf(out, "3 %d %d %d\n", t[0], t[1], t[2]);
    std::fprintf(out, "CELL_TYPES %zu\n", mesh.triangles.size());
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) std::fputs("5\n", out);
    std::fprintf(out, "CELL_DATA %zu\nSCALARS region int 1\nLOOKUP_TABLE default\n", mesh.triangles.size());
    for (Region r : mesh.regions) std::fprintf(out, "%d\n", static_cast<int>(r));
    std::fprintf(out, "POINT_DATA %zu\n", mesh.nodes.size());
    for (const NodalField& field : snap.fields) {
        if (field.values.size() != mesh.nodes.size() * static_cast<std::size_t>(field.components)) {
            throw std::invalid_argument("field " + field.name + " does not match the node count");
        }
        if (field.components == 1) {
            std::fprintf(out, "SCALARS %s double 1\nLOOKUP_TABLE default\n", field.name.c_str());
            for (double v : field.values) std::fprintf(out, "%.17g\n", v);
        } else {
            std::fprintf(out, "VECTORS %s double\n", field.name.c_str());
            for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
                std::fprintf(out, "%.17g %.17g 0\n", field.values[2 * i], field.values[2 * i + 1]);
            }
        }
    }
    close_checked(std::move(f), path);
}

void write_csv(const std::vector<TimeRecord>& series, const std::string& path) {
    File f = open_for_write(path);
    std::FILE* out = f.get();
    std::fputs("# time [s], width [m], relative_width [-], precipitate_volume [m3/m], mass_drift [-], max_phi [-], "
               "pf_iterations [-]\n",
               out);
    std::fputs("time,width,relative_width,precipitate_volume,mass_drift,max_phi,pf_iterations\n", out);
    for (const TimeRecord& r : series) {
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.time, r.width, r.relative_width,
                     r.precipitate_volume, r.mass_drift, r.max_phi, r.phase_field_iterations);
    }
    close_checked(std::move(f), path);
}

std::vector<TimeRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<TimeRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        TimeRecord r;
        row >> r.time >> r.width >> r.relative_width >> r.precipitate_volume >> r.mass_drift >> r.max_phi >>
            r.phase_field_iterations;
        if (!row) throw std::runtime_error(path + ": malformed row '" + line + "'");
        out.push_back(r);
    }
    return out;
}

std::vector<double> element_to_nodal(const Mesh& mesh, const std::vector<double>& values) {
    std::vector<double> sum(mesh.nodes.size(), 0.0);
    std::vector<double> weight(mesh.nodes.size(), 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const double a = mesh.area(t);
        for (int v : mesh.triangles[t]) {
            sum[v] += a * values[t];
            weight[v] += a;
        }
    }
    for (std::size_t i = 0; i < sum.size(); ++i) {
        if (weight[i] > 0.0) sum[i] /= weight[i];
    }
    return sum;
}

}  // namespace corrode
