#include "corrode/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace corrode {

double orient2d(const Point& a, const Point& b, const Point& c) {
    const long double acx = static_cast<long double>(a.x) - c.x;
    const long double bcx = static_cast<long double>(b.x) - c.x;
    const long double acy = static_cast<long double>(a.y) - c.y;
    const long double bcy = static_cast<long double>(b.y) - c.y;
    return static_cast<double>(acx * bcy - acy * bcx);
}

double incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
    const long double adx = static_cast<long double>(a.x) - d.x;
    const long double ady = static_cast<long double>(a.y) - d.y;
    const long double bdx = static_cast<long double>(b.x) - d.x;
    const long double bdy = static_cast<long double>(b.y) - d.y;
    const long double cdx = static_cast<long double>(c.x) - d.x;
    const long double cdy = static_cast<long double>(c.y) - d.y;
    const long double alift = adx * adx + ady * ady;
    const long double blift = bdx * bdx + bdy * bdy;
    const long double clift = cdx * cdx + cdy * cdy;
    return static_cast<double>(alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                               clift * (adx * bdy - bdx * ady));
}

namespace {

struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // neighbour opposite v[i], -1 on the hull
    bool alive;
};

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
    const std::uint32_t n = 1u << order;
    std::uint64_t d = 0;
    for (std::uint32_t s = n >> 1; s > 0; s >>= 1) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

class Triangulator {
public:
    explicit Triangulator(std::vector<Point> pts) : p_(std::move(pts)) {}

    std::vector<std::array<int, 3>> run(std::size_t real_count) {
        real_ = static_cast<int>(real_count);
        add_super_triangle();
        order_and_insert();
        std::vector<std::array<int, 3>> out;
        out.reserve(tris_.size());
        for (const auto& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= real_ || t.v[1] >= real_ || t.v[2] >= real_) continue;
            out.push_back(t.v);
        }
        return out;
    }

private:
    std::vector<Point> p_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<int> mark_;
    int stamp_ = 0;
    int last_ = 0;
    int real_ = 0;

    void add_super_triangle() {
        double xmin = p_[0].x, xmax = p_[0].x, ymin = p_[0].y, ymax = p_[0].y;
        for (const auto& q : p_) {
            xmin = std::min(xmin, q.x);
            xmax = std::max(xmax, q.x);
            ymin = std::min(ymin, q.y);
            ymax = std::max(ymax, q.y);
        }
        const double cx = 0.5 * (xmin + xmax);
        const double cy = 0.5 * (ymin + ymax);
        const double m = std::max({xmax - xmin, ymax - ymin, 1e-30}) * 50.0;
        p_.push_back({cx - 2.0 * m, cy - m});
        p_.push_back({cx + 2.0 * m, cy - m});
        p_.push_back({cx, cy + 2.0 * m});
        tris_.push_back({{real_, real_ + 1, real_ + 2}, {-1, -1, -1}, true});
        mark_.push_back(0);
    }

    void order_and_insert() {
        std::vector<int> order(static_cast<std::size_t>(real_));
        std::iota(order.begin(), order.end(), 0);
        if (real_ == 0) return;
        double xmin = p_[0].x, xmax = p_[0].x, ymin = p_[0].y, ymax = p_[0].y;
        for (int i = 0; i < real_; ++i) {
            xmin = std::min(xmin, p_[i].x);
            xmax = std::max(xmax, p_[i].x);
            ymin = std::min(ymin, p_[i].y);
            ymax = std::max(ymax, p_[i].y);
        }
        const double span = std::max({xmax - xmin, ymax - ymin, 1e-30});
        std::vector<std::uint64_t> key(static_cast<std::size_t>(real_));
        constexpr int kOrder = 16;
        const double scale = ((1u << kOrder) - 1) / span;
        for (int i = 0; i < real_; ++i) {
            const auto gx = static_cast<std::uint32_t>((p_[i].x - xmin) * scale);
            const auto gy = static_cast<std::uint32_t>((p_[i].y - ymin) * scale);
            key[i] = hilbert_index(gx, gy, kOrder);
        }
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
        for (int idx : order) insert(idx);
    }

    bool in_circle(int t, int pi) const {
        const auto& v = tris_[t].v;
        return incircle(p_[v[0]], p_[v[1]], p_[v[2]], p_[pi]) > 0.0;
    }

    int locate(int pi) {
        int t = last_;
        if (!tris_[t].alive) {
            for (t = static_cast<int>(tris_.size()) - 1; t >= 0 && !tris_[t].alive; --t) {
            }
        }
        const Point& q = p_[pi];
        std::size_t guard = 0;
        int rot = 0;
        while (true) {
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const int i = (k + rot) % 3;
                const auto& tr = tris_[t];
                const int a = tr.v[(i + 1) % 3];
                const int b = tr.v[(i + 2) % 3];
                if (orient2d(p_[a], p_[b], q) < 0.0 && tr.n[i] >= 0) {
                    t = tr.n[i];
                    moved = true;
                    break;
                }
            }
            rot = (rot + 1) % 3;
            if (!moved) return t;
            if (++guard > 4 * tris_.size() + 100) break;
        }
        // Walk failed to terminate (cannot happen for a valid triangulation
        // with non-degenerate input); fall back to a scan.
        for (std::size_t s = 0; s < tris_.size(); ++s) {
            const auto& tr = tris_[s];
            if (!tr.alive) continue;
            if (orient2d(p_[tr.v[0]], p_[tr.v[1]], q) >= 0 && orient2d(p_[tr.v[1]], p_[tr.v[2]], q) >= 0 &&
                orient2d(p_[tr.v[2]], p_[tr.v[0]], q) >= 0) {
                return static_cast<int>(s);
            }
        }
        throw MeshError("delaunay: point location failed");
    }

    int new_tri(const Tri& t) {
        if (!free_.empty()) {
            const int id = free_.back();
            free_.pop_back();
            tris_[id] = t;
            mark_[id] = 0;
            return id;
        }
        tris_.push_back(t);
        mark_.push_back(0);
        return static_cast<int>(tris_.size()) - 1;
    }

    struct CavityEdge {
        int a, b, outside;
    };

    void insert(int pi) {
        const int t0 = locate(pi);
        ++stamp_;
        std::vector<int> cavity{t0};
        mark_[t0] = stamp_;
        for (std::size_t k = 0; k < cavity.size(); ++k) {
            const auto& tr = tris_[cavity[k]];
            for (int i = 0; i < 3; ++i) {
                const int nb = tr.n[i];
                if (nb >= 0 && mark_[nb] != stamp_ && in_circle(nb, pi)) {
                    mark_[nb] = stamp_;
                    cavity.push_back(nb);
                }
            }
        }

        std::vector<CavityEdge> edges;
        // Grow the cavity until every boundary edge is strictly visible from
        // the new point, which guarantees a valid fan.
        while (true) {
            edges.clear();
            int bad = -1;
            for (int t : cavity) {
                const auto& tr = tris_[t];
                for (int i = 0; i < 3; ++i) {
                    const int nb = tr.n[i];
                    if (nb >= 0 && mark_[nb] == stamp_) continue;
                    const int a = tr.v[(i + 1) % 3];
                    const int b = tr.v[(i + 2) % 3];
                    if (orient2d(p_[a], p_[b], p_[pi]) <= 0.0) {
                        if (nb < 0) throw MeshError("delaunay: point outside the enclosing triangle");
                        bad = nb;
                    }
                    edges.push_back({a, b, nb});
                }
            }
            if (bad < 0) break;
            mark_[bad] = stamp_;
            cavity.push_back(bad);
        }

        for (int t : cavity) {
            tris_[t].alive = false;
            free_.push_back(t);
        }
        // free_ slots are reused below, so record outside links first.
        std::vector<int> created(edges.size());
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& e = edges[k];
            created[k] = new_tri({{e.a, e.b, pi}, {-1, -1, e.outside}, true});
        }
        // Link fan neighbours: the triangle starting at b shares edge (b, p).
        std::vector<std::pair<int, int>> by_start;
        by_start.reserve(edges.size());
        for (std::size_t k = 0; k < edges.size(); ++k) by_start.emplace_back(edges[k].a, created[k]);
        std::sort(by_start.begin(), by_start.end());
        auto find_start = [&](int vertex) {
            auto it = std::lower_bound(by_start.begin(), by_start.end(), std::make_pair(vertex, -1));
            if (it == by_start.end() || it->first != vertex) throw MeshError("delaunay: broken cavity boundary");
            return it->second;
        };
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const int t = created[k];
            const auto& e = edges[k];
            const int next = find_start(e.b);
            tris_[t].n[0] = next;   // opposite a: edge (b, p)
            tris_[next].n[1] = t;   // opposite its own b: edge (p, its a) = (p, e.b)
            if (e.outside >= 0) {
                auto& o = tris_[e.outside];
                for (int i = 0; i < 3; ++i) {
                    const int oa = o.v[(i + 1) % 3];
                    const int ob = o.v[(i + 2) % 3];
                    if (oa == e.b && ob == e.a) {
                        o.n[i] = t;
                        break;
                    }
                }
            }
        }
        last_ = created.empty() ? last_ : created.front();
    }
};

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Point>& points) {
    if (points.size() < 3) return {};
    Triangulator tri(points);
    return tri.run(points.size());
}

}  // namespace corrode
