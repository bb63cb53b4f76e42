#include "corrode/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace corrode {

double Mesh::area(std::size_t tri) const {
    const auto& t = triangles[tri];
    const Point& a = nodes[t[0]];
    const Point& b = nodes[t[1]];
    const Point& c = nodes[t[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point Mesh::centroid(std::size_t tri) const {
    const auto& t = triangles[tri];
    return {(nodes[t[0]].x + nodes[t[1]].x + nodes[t[2]].x) / 3.0,
            (nodes[t[0]].y + nodes[t[1]].y + nodes[t[2]].y) / 3.0};
}

double Mesh::total_area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) s += area(t);
    return s;
}

double Mesh::region_area(Region r) const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        if (regions[t] == r) s += area(t);
    }
    return s;
}

bool is_porous(Region r) { return r != Region::Steel; }

void assign_porosity(Mesh& mesh, double bulk, double sci) {
    mesh.porosity.assign(mesh.triangles.size(), 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        switch (mesh.regions[t]) {
            case Region::Concrete: mesh.porosity[t] = bulk; break;
            case Region::SCI: mesh.porosity[t] = sci; break;
            case Region::Steel: mesh.porosity[t] = 0.0; break;
        }
    }
}

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

struct EdgeParents {
    int first = -1;
    int second = -1;
};

std::map<std::pair<int, int>, EdgeParents> edge_parents(const Mesh& mesh) {
    std::map<std::pair<int, int>, EdgeParents> edges;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            auto& slot = edges[edge_key(tri[i], tri[(i + 1) % 3])];
            if (slot.first < 0) slot.first = static_cast<int>(t);
            else if (slot.second < 0) slot.second = static_cast<int>(t);
            else throw MeshError("edge shared by more than two triangles at triangle " + std::to_string(t));
        }
    }
    return edges;
}

}  // namespace

void derive_boundary_edges(Mesh& mesh, double top_y, const std::map<std::pair<int, int>, BoundaryTag>& explicit_tags) {
    mesh.boundary_edges.clear();
    const double tol = 1e-9 * std::max(1.0, std::abs(top_y));
    for (const auto& [key, parents] : edge_parents(mesh)) {
        BoundaryEdge e;
        e.nodes = {key.first, key.second};
        if (parents.second < 0) {
            e.parent = parents.first;
            const bool on_top = std::abs(mesh.nodes[key.first].y - top_y) <= tol &&
                                std::abs(mesh.nodes[key.second].y - top_y) <= tol;
            e.tag = on_top ? BoundaryTag::TopSurface : BoundaryTag::Outer;
        } else {
            const bool s1 = mesh.regions[parents.first] == Region::Steel;
            const bool s2 = mesh.regions[parents.second] == Region::Steel;
            if (s1 == s2) continue;
            e.tag = BoundaryTag::RebarSurface;
            e.parent = s1 ? parents.second : parents.first;
            e.steel_parent = s1 ? parents.first : parents.second;
        }
        if (auto it = explicit_tags.find(key); it != explicit_tags.end()) e.tag = it->second;
        // Keep node order consistent with the parent's counter-clockwise winding.
        const auto& tri = mesh.triangles[e.parent];
        for (int i = 0; i < 3; ++i) {
            if (edge_key(tri[i], tri[(i + 1) % 3]) == key) {
                e.nodes = {tri[i], tri[(i + 1) % 3]};
                break;
            }
        }
        mesh.boundary_edges.push_back(e);
    }
}

void check_mesh(const Mesh& mesh) {
    const std::size_t nt = mesh.triangles.size();
    if (mesh.regions.size() != nt) throw MeshError("region tags do not cover every triangle");
    if (!mesh.porosity.empty() && mesh.porosity.size() != nt) throw MeshError("porosity size mismatch");
    for (std::size_t t = 0; t < nt; ++t) {
        for (int v : mesh.triangles[t]) {
            if (v < 0 || static_cast<std::size_t>(v) >= mesh.nodes.size()) {
                throw MeshError("triangle " + std::to_string(t) + " references a missing node");
            }
        }
        if (!(mesh.area(t) > 0.0)) throw MeshError("triangle " + std::to_string(t) + " is inverted or degenerate");
    }
    const auto parents = edge_parents(mesh);
    for (const auto& e : mesh.boundary_edges) {
        const auto it = parents.find(edge_key(e.nodes[0], e.nodes[1]));
        if (it == parents.end()) throw MeshError("boundary edge not found in triangulation");
        if (e.tag == BoundaryTag::RebarSurface) {
            if (it->second.second < 0) throw MeshError("rebar-surface edge with a single parent");
            const bool s1 = mesh.regions[it->second.first] == Region::Steel;
            const bool s2 = mesh.regions[it->second.second] == Region::Steel;
            if (s1 == s2) throw MeshError("rebar-surface edge does not separate steel from concrete");
        } else if (it->second.second >= 0) {
            throw MeshError("outer boundary edge shared by two triangles");
        }
    }
}

// ---------------------------------------------------------------------------
// MSH v2 import / export

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void expect_line(std::istream& in, const std::string& token, const std::string& path) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == token) return;
        throw MeshError(path + ": expected " + token + ", found '" + line + "'");
    }
    throw MeshError(path + ": unexpected end of file, expected " + token);
}

}  // namespace

Mesh import_msh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path + "'");

    std::map<int, std::string> physical;
    std::map<long, int> node_index;
    Mesh mesh;
    std::map<std::pair<int, int>, BoundaryTag> line_tags;
    std::vector<long> tri_ids;

    std::string section;
    while (in >> section) {
        if (section == "$MeshFormat") {
            double version = 0;
            int file_type = 0, data_size = 0;
            in >> version >> file_type >> data_size;
            if (version < 2.0 || version >= 3.0 || file_type != 0) {
                throw MeshError(path + ": only ASCII MSH version 2 is supported");
            }
            expect_line(in, "$EndMeshFormat", path);
        } else if (section == "$PhysicalNames") {
            int n = 0;
            in >> n;
            for (int i = 0; i < n; ++i) {
                int dim = 0, tag = 0;
                std::string name;
                in >> dim >> tag;
                std::getline(in, name);
                const auto q1 = name.find('"');
                const auto q2 = name.rfind('"');
                if (q1 == std::string::npos || q2 == q1) throw MeshError(path + ": malformed physical name");
                physical[tag] = lower(name.substr(q1 + 1, q2 - q1 - 1));
            }
            expect_line(in, "$EndPhysicalNames", path);
        } else if (section == "$Nodes") {
            std::size_t n = 0;
            in >> n;
            mesh.nodes.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                long id = 0;
                double x = 0, y = 0, z = 0;
                if (!(in >> id >> x >> y >> z)) throw MeshError(path + ": truncated node block");
                node_index[id] = static_cast<int>(mesh.nodes.size());
                mesh.nodes.push_back({x * 1e-3, y * 1e-3});
            }
            expect_line(in, "$EndNodes", path);
        } else if (section == "$Elements") {
            std::size_t n = 0;
            in >> n;
            std::string line;
            std::getline(in, line);
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::getline(in, line)) throw MeshError(path + ": truncated element block");
                std::istringstream ls(line);
                long id = 0;
                int type = 0, ntags = 0;
                ls >> id >> type >> ntags;
                std::vector<int> tags(static_cast<std::size_t>(ntags));
                for (auto& t : tags) ls >> t;
                const int phys = ntags > 0 ? tags[0] : -1;
                auto resolve = [&](long nid) {
                    const auto it = node_index.find(nid);
                    if (it == node_index.end()) throw MeshError(path + ": element " + std::to_string(id) + " references unknown node");
                    return it->second;
                };
                const auto name_it = physical.find(phys);
                const std::string name = name_it == physical.end() ? std::string() : name_it->second;
                if (type == 2) {
                    long a = 0, b = 0, c = 0;
                    ls >> a >> b >> c;
                    Region r;
                    if (name == "concrete") r = Region::Concrete;
                    else if (name == "steel") r = Region::Steel;
                    else if (name == "sci") r = Region::SCI;
                    else throw MeshError(path + ": triangle " + std::to_string(id) + " has unknown physical group '" + name + "'");
                    mesh.triangles.push_back({resolve(a), resolve(b), resolve(c)});
                    mesh.regions.push_back(r);
                    tri_ids.push_back(id);
                } else if (type == 1) {
                    long a = 0, b = 0;
                    ls >> a >> b;
                    BoundaryTag tag;
                    if (name == "outer") tag = BoundaryTag::Outer;
                    else if (name == "rebarsurface") tag = BoundaryTag::RebarSurface;
                    else if (name == "topsurface") tag = BoundaryTag::TopSurface;
                    else throw MeshError(path + ": line " + std::to_string(id) + " has unknown physical group '" + name + "'");
                    line_tags[edge_key(resolve(a), resolve(b))] = tag;
                } else if (type == 15) {
                    continue;
                } else {
                    throw MeshError(path + ": unsupported element type " + std::to_string(type));
                }
            }
            expect_line(in, "$EndElements", path);
        } else if (!section.empty() && section[0] == '$' && section.rfind("$End", 0) != 0) {
            // Skip unknown sections such as $Periodic.
            const std::string end = "$End" + section.substr(1);
            std::string tok;
            while (in >> tok && tok != end) {
            }
        }
    }
    if (mesh.triangles.empty()) throw MeshError(path + ": no triangles");

    double xmin = mesh.nodes[0].x, xmax = xmin, ymin = mesh.nodes[0].y, ymax = ymin;
    for (const auto& p : mesh.nodes) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double tol = 1e-12 * (xmax - xmin) * (ymax - ymin);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const double a = mesh.area(t);
        if (std::abs(a) <= tol) throw MeshError(path + ": degenerate element " + std::to_string(tri_ids[t]));
        if (a < 0) std::swap(mesh.triangles[t][1], mesh.triangles[t][2]);
    }
    // Lines from the file refine the derived tags; untagged top edges stay Outer.
    derive_boundary_edges(mesh, std::numeric_limits<double>::infinity(), line_tags);
    check_mesh(mesh);
    return mesh;
}

void write_msh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file '" + path + "'");
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$PhysicalNames\n6\n";
    out << "1 11 \"Outer\"\n1 12 \"RebarSurface\"\n1 13 \"TopSurface\"\n";
    out << "2 1 \"Concrete\"\n2 2 \"Steel\"\n2 3 \"SCI\"\n$EndPhysicalNames\n";
    out << "$Nodes\n" << mesh.nodes.size() << "\n";
    char buf[128];
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g 0\n", i + 1, mesh.nodes[i].x * 1e3, mesh.nodes[i].y * 1e3);
        out << buf;
    }
    out << "$EndNodes\n$Elements\n" << mesh.boundary_edges.size() + mesh.triangles.size() << "\n";
    std::size_t id = 1;
    for (const auto& e : mesh.boundary_edges) {
        const int phys = e.tag == BoundaryTag::Outer ? 11 : e.tag == BoundaryTag::RebarSurface ? 12 : 13;
        out << id++ << " 1 2 " << phys << " " << phys << " " << e.nodes[0] + 1 << " " << e.nodes[1] + 1 << "\n";
    }
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const int phys = static_cast<int>(mesh.regions[t]) + 1;
        const auto& tri = mesh.triangles[t];
        out << id++ << " 2 2 " << phys << " " << phys << " " << tri[0] + 1 << " " << tri[1] + 1 << " " << tri[2] + 1
            << "\n";
    }
    out << "$EndElements\n";
}

// ---------------------------------------------------------------------------
// Bar benchmark mesh

Mesh generate_bar_mesh(double length, double height, double element_size) {
    constexpr double kWeakBand = 8e-3;
    if (!(length > 0) || !(height > 0) || !(element_size > 0)) throw MeshError("bar dimensions must be positive");
    if (element_size > kWeakBand) {
        throw MeshError("element size exceeds the 8 mm weakened band; refine the bar mesh");
    }
    const double fx = length / element_size;
    const double fy = height / element_size;
    const long nx = std::lround(fx);
    const long ny = std::lround(fy);
    if (std::abs(fx - nx) > 1e-9 * fx || std::abs(fy - ny) > 1e-9 * fy) {
        throw MeshError("element size must divide the bar length and height");
    }
    if (nx < 2 || ny < 2) throw MeshError("bar mesh needs at least two elements per direction");

    Mesh mesh;
    const double dx = length / static_cast<double>(nx);
    const double dy = height / static_cast<double>(ny);
    for (long j = 0; j <= ny; ++j) {
        for (long i = 0; i <= nx; ++i) mesh.nodes.push_back({static_cast<double>(i) * dx, static_cast<double>(j) * dy});
    }
    auto id = [nx](long i, long j) { return static_cast<int>(j * (nx + 1) + i); };
    for (long j = 0; j < ny; ++j) {
        for (long i = 0; i < nx; ++i) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            // Alternating diagonals make the mesh mirror-symmetric about midspan.
            if ((i + j) % 2 == 0) {
                mesh.triangles.push_back({a, b, c});
                mesh.triangles.push_back({a, c, d});
            } else {
                mesh.triangles.push_back({a, b, d});
                mesh.triangles.push_back({b, c, d});
            }
        }
    }
    mesh.regions.assign(mesh.triangles.size(), Region::Concrete);
    mesh.weak_band.assign(mesh.triangles.size(), 0);
    const double mid = 0.5 * length;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        mesh.weak_band[t] = std::abs(mesh.centroid(t).x - mid) <= 0.5 * kWeakBand ? 1 : 0;
    }
    derive_boundary_edges(mesh, height);
    check_mesh(mesh);
    return mesh;
}

// ---------------------------------------------------------------------------

MeshQuality mesh_quality(const Mesh& mesh) {
    MeshQuality q;
    q.min_angle_deg = 180.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        double len[3];
        for (int i = 0; i < 3; ++i) {
            const Point& a = mesh.nodes[tri[(i + 1) % 3]];
            const Point& b = mesh.nodes[tri[(i + 2) % 3]];
            len[i] = std::hypot(a.x - b.x, a.y - b.y);
        }
        for (int i = 0; i < 3; ++i) {
            const double b = len[(i + 1) % 3], c = len[(i + 2) % 3];
            const double cosang = std::clamp((b * b + c * c - len[i] * len[i]) / (2 * b * c), -1.0, 1.0);
            q.min_angle_deg = std::min(q.min_angle_deg, std::acos(cosang) * 180.0 / M_PI);
        }
        const double longest = std::max({len[0], len[1], len[2]});
        q.max_edge = std::max(q.max_edge, longest);
        if (mesh.regions[t] == Region::SCI) q.max_sci_edge = std::max(q.max_sci_edge, longest);
        if (mesh.regions[t] == Region::Concrete) q.max_concrete_edge = std::max(q.max_concrete_edge, longest);
    }
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag == BoundaryTag::RebarSurface) ++q.rebar_surface_edges;
        if (e.tag == BoundaryTag::TopSurface) ++q.top_surface_edges;
    }
    return q;
}

Mesh build_mesh(const SimulationConfig& config) {
    Mesh mesh;
    if (!config.mesh.file.empty()) {
        mesh = import_msh(config.mesh.file);
        mesh.rebars = config.geometry.rebars;
    } else {
        CrossSectionOptions opt;
        opt.sci_thickness = config.transport.sci_thickness;
        opt.max_size = config.mesh.max_size;
        opt.refine_distance = config.mesh.refine_distance;
        mesh = generate_rebar_cross_section(config.geometry, config.mesh.sci_size, config.mesh.bulk_size, opt);
    }
    assign_porosity(mesh, config.transport.bulk_porosity, config.transport.sci_porosity);
    return mesh;
}

VtkGrid read_vtk(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open " + path);
    VtkGrid grid;
    std::string line;
    std::getline(in, line);  // version
    std::getline(in, line);  // title
    const auto pos = line.find("time=");
    if (pos != std::string::npos) grid.time = std::strtod(line.c_str() + pos + 5, nullptr);
    std::string token;
    enum class Section { None, Points, Cells } data = Section::None;
    std::size_t count = 0;
    while (in >> token) {
        if (token == "ASCII" || token == "DATASET") {
            if (token == "DATASET") in >> token;
        } else if (token == "POINTS") {
            std::string type;
            in >> count >> type;
            grid.nodes.resize(count);
            for (auto& p : grid.nodes) {
                double z = 0.0;
                in >> p.x >> p.y >> z;
            }
        } else if (token == "CELLS") {
            std::size_t n = 0, total = 0;
            in >> n >> total;
            grid.triangles.resize(n);
            for (auto& t : grid.triangles) {
                int k = 0;
                in >> k;
                if (k != 3) throw MeshError(path + ": only triangle cells are supported");
                in >> t[0] >> t[1] >> t[2];
            }
        } else if (token == "CELL_TYPES") {
            std::size_t n = 0;
            in >> n;
            for (std::size_t i = 0; i < n; ++i) in >> token;
        } else if (token == "CELL_DATA") {
            in >> count;
            data = Section::Cells;
        } else if (token == "POINT_DATA") {
            in >> count;
            data = Section::Points;
        } else if (token == "SCALARS") {
            std::string name, type;
            in >> name >> type;
            std::getline(in, line);  // optional component count
            in >> token >> token;    // LOOKUP_TABLE default
            if (data == Section::Cells) {
                grid.regions.resize(count);
                for (auto& r : grid.regions) in >> r;
            } else {
                NodalField f{name, 1, std::vector<double>(count)};
                for (auto& v : f.values) in >> v;
                grid.fields.push_back(std::move(f));
            }
        } else if (token == "VECTORS") {
            std::string name, type;
            in >> name >> type;
            NodalField f{name, 2, std::vector<double>(2 * count)};
            for (std::size_t i = 0; i < count; ++i) {
                double z = 0.0;
                in >> f.values[2 * i] >> f.values[2 * i + 1] >> z;
            }
            grid.fields.push_back(std::move(f));
        } else {
            throw MeshError(path + ": unexpected token '" + token + "'");
        }
        if (!in) throw MeshError(path + ": truncated file");
    }
    return grid;
}

}  // namespace corrode
