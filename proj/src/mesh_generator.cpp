// Cross-section mesher: places points (graded concentric rings around each
// rebar, a boundary walk, a size-driven quadtree fill), smooths the free
// points and triangulates with Delaunay. The outer boundary is the convex
// hull of the points; rebar and SCI interface edges are recovered because the
// ring spacing keeps each of them Gabriel (empty diametral circle).

#include <algorithm>
#include <cmath>
#include <random>

#include "corrode/delaunay.hpp"
#include "corrode/mesh.hpp"

namespace corrode {

namespace {

enum class PointKind : std::uint8_t { Boundary, Ring, Fill };

struct Seed {
    Point p;
    PointKind kind;
};

struct RebarZone {
    Point center;
    double radius;
    double ring_end;     // distance beyond the surface covered by rings
    double refine_end;   // distance beyond the surface kept at bulk size
};

class PointGrid {
public:
    PointGrid(double width, double height, double cell)
        : cell_(cell),
          nx_(static_cast<int>(std::ceil(width / cell)) + 1),
          ny_(static_cast<int>(std::ceil(height / cell)) + 1),
          bins_(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)) {}

    void add(const Point& p) {
        bins_[bin(p)].push_back(p);
    }

    bool has_within(const Point& p, double r) const {
        const int reach = static_cast<int>(std::ceil(r / cell_));
        const int ix = std::clamp(static_cast<int>(p.x / cell_), 0, nx_ - 1);
        const int iy = std::clamp(static_cast<int>(p.y / cell_), 0, ny_ - 1);
        const double r2 = r * r;
        for (int j = std::max(0, iy - reach); j <= std::min(ny_ - 1, iy + reach); ++j) {
            for (int i = std::max(0, ix - reach); i <= std::min(nx_ - 1, ix + reach); ++i) {
                for (const Point& q : bins_[static_cast<std::size_t>(j) * nx_ + i]) {
                    const double dx = q.x - p.x, dy = q.y - p.y;
                    if (dx * dx + dy * dy < r2) return true;
                }
            }
        }
        return false;
    }

private:
    double cell_;
    int nx_, ny_;
    std::vector<std::vector<Point>> bins_;

    std::size_t bin(const Point& p) const {
        const int ix = std::clamp(static_cast<int>(p.x / cell_), 0, nx_ - 1);
        const int iy = std::clamp(static_cast<int>(p.y / cell_), 0, ny_ - 1);
        return static_cast<std::size_t>(iy) * nx_ + ix;
    }
};

class CrossSectionMesher {
public:
    CrossSectionMesher(const GeometrySpec& g, double h_sci, double h_bulk, const CrossSectionOptions& o)
        : g_(g), h_sci_(h_sci), h_bulk_(h_bulk), opt_(o), rng_(o.seed),
          grid_(g.width, g.height, std::max(0.5 * h_bulk, 1e-3 * std::max(g.width, g.height))) {}

    Mesh build() {
        check_geometry();
        setup_zones();
        for (std::size_t i = 0; i < zones_.size(); ++i) add_rings(i);
        add_boundary();
        add_fill(0.0, 0.0, std::max(g_.width, g_.height), 0);

        std::vector<Point> pts = assemble_points();
        for (int pass = 0; pass < opt_.smoothing_passes; ++pass) smooth(pts);
        return finish(pts);
    }

private:
    const GeometrySpec& g_;
    double h_sci_, h_bulk_;
    CrossSectionOptions opt_;
    std::mt19937_64 rng_;
    PointGrid grid_;
    std::vector<RebarZone> zones_;
    std::vector<Seed> seeds_;
    std::vector<Point> ghosts_;

    double jitter(double scale) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        return scale * u(rng_);
    }

    void check_geometry() {
        if (!(h_sci_ > 0) || h_sci_ > h_bulk_) throw MeshError("mesh sizes must satisfy 0 < h_sci <= h_bulk");
        if (!(g_.width > 0) || !(g_.height > 0)) throw MeshError("geometry error: rectangle must have positive size");
        for (std::size_t i = 0; i < g_.rebars.size(); ++i) {
            const auto& a = g_.rebars[i];
            const double ra = 0.5 * a.diameter;
            if (!(a.diameter > 0)) throw MeshError("geometry error: rebar diameter must be positive");
            if (a.x - ra <= 0 || a.x + ra >= g_.width || a.y - ra <= 0 || a.y + ra >= g_.height) {
                throw MeshError("geometry error: rebar " + std::to_string(i) + " leaves the rectangle");
            }
            for (std::size_t j = 0; j < i; ++j) {
                const auto& b = g_.rebars[j];
                const double dist = std::hypot(a.x - b.x, a.y - b.y);
                if (dist < ra + 0.5 * b.diameter + 2.0 * opt_.sci_thickness) {
                    throw MeshError("geometry error: rebars " + std::to_string(j) + " and " + std::to_string(i) +
                                    " overlap");
                }
            }
        }
    }

    void setup_zones() {
        for (const auto& bar : g_.rebars) {
            RebarZone z;
            z.center = {bar.x, bar.y};
            z.radius = 0.5 * bar.diameter;
            const double cover = std::min({bar.x - z.radius, g_.width - bar.x - z.radius, bar.y - z.radius,
                                           g_.height - bar.y - z.radius});
            z.refine_end = opt_.refine_distance > 0 ? opt_.refine_distance : cover + 5e-3;
            z.ring_end = opt_.sci_thickness;
            zones_.push_back(z);
        }
    }

    double size_at(const Point& p) const {
        double h = opt_.max_size;
        for (const auto& z : zones_) {
            const double d = std::hypot(p.x - z.center.x, p.y - z.center.y) - z.radius;
            double hz;
            if (d <= opt_.sci_thickness) hz = h_sci_;
            else if (d <= z.refine_end) hz = std::min(h_bulk_, h_sci_ + opt_.grading * (d - opt_.sci_thickness));
            else hz = std::min(opt_.max_size, h_bulk_ + opt_.grading * (d - z.refine_end));
            h = std::min(h, hz);
        }
        if (zones_.empty()) h = std::min(h, h_bulk_);
        return h;
    }

    bool inside_rect(const Point& p, double margin) const {
        return p.x >= margin && p.y >= margin && p.x <= g_.width - margin && p.y <= g_.height - margin;
    }

    void push(const Point& p, PointKind kind) {
        seeds_.push_back({p, kind});
        grid_.add(p);
    }

    void add_ring(const RebarZone& z, double r, int count, double phase, PointKind kind, double spacing,
                  bool filter) {
        const double step = 2.0 * M_PI / count;
        for (int k = 0; k < count; ++k) {
            // Tangential and tiny radial jitter break exact cocircularity.
            const double ang = phase + step * (k + jitter(1e-3));
            const double rr = r * (1.0 + jitter(1e-9));
            const Point p{z.center.x + rr * std::cos(ang), z.center.y + rr * std::sin(ang)};
            if (!inside_rect(p, 0.6 * spacing)) continue;
            if (filter && grid_.has_within(p, 0.5 * spacing)) continue;
            push(p, kind);
        }
    }

    void add_rings(std::size_t index) {
        RebarZone& z = zones_[index];
        const double d_sci = opt_.sci_thickness;
        const int layers = d_sci > 0 ? std::max(2, static_cast<int>(std::ceil(d_sci / h_sci_ - 1e-9))) : 0;
        const double dr0 = layers > 0 ? d_sci / layers : 0.5 * h_sci_;
        const double s_interface = std::min(h_sci_, 1.6 * dr0);
        const int n_interface = std::max(12, static_cast<int>(std::ceil(2.0 * M_PI * z.radius / s_interface)));

        // Interface ring and the SCI layers share angular positions.
        for (int k = 0; k <= layers; ++k) add_ring(z, z.radius + k * dr0, n_interface, 0.0, PointKind::Ring, dr0, false);

        double r = z.radius + layers * dr0;
        double dr = dr0;
        int ring = 0;
        while (true) {
            const double target = size_at({z.center.x + r + dr, z.center.y});
            dr = std::min(dr * 1.3, std::max(target, dr0));
            r += dr;
            const int n = std::max(12, static_cast<int>(std::ceil(2.0 * M_PI * r / dr)));
            add_ring(z, r, n, (++ring % 2) * M_PI / n, PointKind::Ring, dr, true);
            if (dr >= 0.999 * std::min(h_bulk_, target) || r - z.radius > z.refine_end) break;
        }
        z.ring_end = r - z.radius;

        // Steel interior: coarsening rings towards the centre.
        const double h_steel = std::max(h_bulk_, 0.25 * z.radius);
        r = z.radius;
        dr = dr0;
        ring = 0;
        while (true) {
            dr = std::min(dr * 1.3, h_steel);
            if (r - dr < 0.6 * dr) break;
            r -= dr;
            const int n = std::max(6, static_cast<int>(std::ceil(2.0 * M_PI * r / dr)));
            add_ring(z, r, n, (++ring % 2) * M_PI / n, PointKind::Ring, dr, false);
        }
        push({z.center.x + jitter(1e-6 * dr), z.center.y + jitter(1e-6 * dr)}, PointKind::Ring);
    }

    void walk_side(const Point& a, const Point& b, const Point& outward) {
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
        std::vector<double> pos{0.0};
        while (true) {
            const double s = pos.back();
            const double h = size_at({a.x + ux * s, a.y + uy * s});
            if (s + h >= len) {
                if (len - s < 0.5 * h && pos.size() > 1) pos.pop_back();
                break;
            }
            pos.push_back(s + h);
        }
        // Rescale so the step after the last point lands exactly on the far corner.
        const double scale = len / (pos.back() + size_at({a.x + ux * pos.back(), a.y + uy * pos.back()}));
        const std::size_t m = pos.size();
        std::vector<double> t(m);
        for (std::size_t k = 0; k < m; ++k) t[k] = pos[k] * scale;
        for (std::size_t k = 0; k < m; ++k) {
            const double h = size_at({a.x + ux * t[k], a.y + uy * t[k]});
            const double tj = (k == 0) ? t[k] : t[k] + jitter(1e-3 * h);
            const Point p{a.x + ux * tj, a.y + uy * tj};
            // Snap to the exact side line so boundary points stay collinear.
            const Point q{std::abs(ux) < 0.5 ? a.x : p.x, std::abs(uy) < 0.5 ? a.y : p.y};
            push(q, PointKind::Boundary);
            ghosts_.push_back({q.x + outward.x * 0.8 * h, q.y + outward.y * 0.8 * h});
            if (k == 0) {
                // Corner: extra ghosts along the incoming side normal and diagonal.
                ghosts_.push_back({q.x + (outward.x - uy) * 0.8 * h, q.y + (outward.y + ux) * 0.8 * h});
                ghosts_.push_back({q.x - uy * 0.8 * h, q.y + ux * 0.8 * h});
            }
        }
    }

    void add_boundary() {
        const double w = g_.width, h = g_.height;
        walk_side({0, 0}, {w, 0}, {0, -1});
        walk_side({w, 0}, {w, h}, {1, 0});
        walk_side({w, h}, {0, h}, {0, 1});
        walk_side({0, h}, {0, 0}, {-1, 0});
    }

    bool fill_allowed(const Point& p, double h) const {
        if (!inside_rect(p, 0.7 * h)) return false;
        for (const auto& z : zones_) {
            const double d = std::hypot(p.x - z.center.x, p.y - z.center.y) - z.radius;
            if (d < z.ring_end + 0.6 * h) return false;
        }
        return true;
    }

    void add_fill(double x0, double y0, double s, int depth) {
        if (x0 >= g_.width || y0 >= g_.height) return;
        const Point c{x0 + 0.5 * s, y0 + 0.5 * s};
        const Point cc{std::min(c.x, g_.width), std::min(c.y, g_.height)};
        const double h = size_at(cc);
        if (s * (1.0 + 0.75 * opt_.grading) > h && depth < 40) {
            const double half = 0.5 * s;
            add_fill(x0, y0, half, depth + 1);
            add_fill(x0 + half, y0, half, depth + 1);
            add_fill(x0, y0 + half, half, depth + 1);
            add_fill(x0 + half, y0 + half, half, depth + 1);
            return;
        }
        const Point p{c.x + jitter(1e-3 * h), c.y + jitter(1e-3 * h)};
        if (!fill_allowed(p, h) || grid_.has_within(p, 0.6 * h)) return;
        push(p, PointKind::Fill);
    }

    std::vector<Point> assemble_points() const {
        std::vector<Point> pts;
        pts.reserve(seeds_.size() + ghosts_.size());
        for (const auto& s : seeds_) pts.push_back(s.p);
        for (const auto& gp : ghosts_) pts.push_back(gp);
        return pts;
    }

    void smooth(std::vector<Point>& pts) const {
        const std::size_t n_real = seeds_.size();
        const auto tris = delaunay_triangulate(pts);
        std::vector<double> sx(n_real, 0.0), sy(n_real, 0.0);
        std::vector<int> cnt(n_real, 0);
        std::vector<std::uint8_t> touches_ghost(n_real, 0);
        for (const auto& t : tris) {
            for (int i = 0; i < 3; ++i) {
                const int a = t[i];
                if (static_cast<std::size_t>(a) >= n_real) continue;
                for (int j = 1; j <= 2; ++j) {
                    const int b = t[(i + j) % 3];
                    if (static_cast<std::size_t>(b) >= n_real) {
                        touches_ghost[a] = 1;
                        continue;
                    }
                    sx[a] += pts[b].x;
                    sy[a] += pts[b].y;
                    ++cnt[a];
                }
            }
        }
        for (std::size_t i = 0; i < n_real; ++i) {
            if (seeds_[i].kind != PointKind::Fill || cnt[i] == 0 || touches_ghost[i]) continue;
            const Point target{sx[i] / cnt[i], sy[i] / cnt[i]};
            const double h = size_at(target);
            if (!inside_rect(target, 0.5 * h)) continue;
            bool ok = true;
            for (const auto& z : zones_) {
                const double d = std::hypot(target.x - z.center.x, target.y - z.center.y) - z.radius;
                if (d < z.ring_end + 0.4 * h) ok = false;
            }
            if (ok) pts[i] = target;
        }
    }

    Mesh finish(const std::vector<Point>& pts) const {
        // Boundary points lie exactly on the rectangle sides, so the hull of
        // the real points is the rectangle itself; ghosts only guide smoothing.
        const std::size_t n_real = seeds_.size();
        const auto tris = delaunay_triangulate(std::vector<Point>(pts.begin(), pts.begin() + n_real));

        Mesh mesh;
        std::vector<int> remap(n_real, -1);
        for (const auto& t : tris) {
            if (static_cast<std::size_t>(t[0]) >= n_real || static_cast<std::size_t>(t[1]) >= n_real ||
                static_cast<std::size_t>(t[2]) >= n_real) {
                continue;
            }
            std::array<int, 3> tri{};
            for (int i = 0; i < 3; ++i) {
                int& slot = remap[t[i]];
                if (slot < 0) {
                    slot = static_cast<int>(mesh.nodes.size());
                    mesh.nodes.push_back(pts[t[i]]);
                }
                tri[i] = slot;
            }
            mesh.triangles.push_back(tri);
        }

        const double expected = g_.width * g_.height;
        double total = 0.0;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) total += mesh.area(t);
        if (std::abs(total - expected) > 1e-9 * expected) {
            throw MeshError("mesher failed to recover the rectangle: area " + std::to_string(total) + " vs " +
                            std::to_string(expected));
        }

        mesh.regions.resize(mesh.triangles.size(), Region::Concrete);
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const Point c = mesh.centroid(t);
            for (const auto& z : zones_) {
                const double dist = std::hypot(c.x - z.center.x, c.y - z.center.y);
                if (dist < z.radius) {
                    mesh.regions[t] = Region::Steel;
                    break;
                }
                if (dist - z.radius <= opt_.sci_thickness) mesh.regions[t] = Region::SCI;
            }
        }
        mesh.rebars = g_.rebars;
        derive_boundary_edges(mesh, g_.height);
        check_mesh(mesh);
        return mesh;
    }
};

}  // namespace

Mesh generate_rebar_cross_section(const GeometrySpec& geometry, double h_sci, double h_bulk,
                                  const CrossSectionOptions& options) {
    CrossSectionMesher mesher(geometry, h_sci, h_bulk, options);
    return mesher.build();
}

}  // namespace corrode
