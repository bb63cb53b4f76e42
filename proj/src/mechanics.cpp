#include "corrode/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "corrode/simd/kernels.hpp"

namespace corrode {

double free_volumetric_strain(const RustParams& rust, const IronParams& iron) {
    if (!(rust.porosity < 1.0)) throw std::invalid_argument("rust porosity must be below 1");
    return iron.density * rust.molar_mass / ((1.0 - rust.porosity) * rust.density * iron.molar_mass) - 1.0;
}

EigenstrainModel::EigenstrainModel(const ConcreteParams& concrete, const RustParams& rust, const IronParams& iron)
    : concrete_(concrete),
      rust_(rust),
      free_strain_(free_volumetric_strain(rust, iron)),
      rust_bulk_(derive_lame_and_moduli(rust.young_modulus, rust.poisson_ratio).bulk) {}

double EigenstrainModel::coefficient(double theta_p) const {
    const double f = std::clamp(theta_p, 0.0, 1.0);
    const double e = (1.0 - f) * concrete_.young_modulus + f * rust_.young_modulus;
    const double nu = (1.0 - f) * concrete_.poisson_ratio + f * rust_.poisson_ratio;
    const double k = derive_lame_and_moduli(e, nu).bulk;
    return (1.0 - nu) * rust_bulk_ / ((1.0 + nu) * rust_bulk_ + (2.0 - 4.0 * nu) * k) * free_strain_;
}

double eigenstrain_coefficient(double theta_p, const ConcreteParams& concrete, const RustParams& rust,
                               const IronParams& iron) {
    return EigenstrainModel(concrete, rust, iron).coefficient(theta_p);
}

std::vector<int> nodes_on_site(const Mesh& mesh, BoundarySite site) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const Point& p : mesh.nodes) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double tol = 1e-9 * std::max(x1 - x0, y1 - y0);
    auto nearest = [&](double x, double y) {
        int best = -1;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
            const double d = std::hypot(mesh.nodes[i].x - x, mesh.nodes[i].y - y);
            if (d < dist) {
                dist = d;
                best = static_cast<int>(i);
            }
        }
        return std::vector<int>{best};
    };
    std::vector<int> out;
    auto collect = [&](auto pred) {
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
            if (pred(mesh.nodes[i])) out.push_back(static_cast<int>(i));
        }
        return out;
    };
    switch (site) {
        case BoundarySite::Bottom: return collect([&](const Point& p) { return p.y <= y0 + tol; });
        case BoundarySite::Top: return collect([&](const Point& p) { return p.y >= y1 - tol; });
        case BoundarySite::Left: return collect([&](const Point& p) { return p.x <= x0 + tol; });
        case BoundarySite::Right: return collect([&](const Point& p) { return p.x >= x1 - tol; });
        case BoundarySite::BottomLeft: return nearest(x0, y0);
        case BoundarySite::BottomRight: return nearest(x1, y0);
        case BoundarySite::TopLeft: return nearest(x0, y1);
        case BoundarySite::TopRight: return nearest(x1, y1);
    }
    return out;
}

Constraints constraint_dofs(const Mesh& mesh, const std::vector<DisplacementConstraint>& constraints) {
    std::vector<char> fixed(2 * mesh.nodes.size(), 0);
    for (const auto& c : constraints) {
        for (int v : nodes_on_site(mesh, c.site)) {
            if (c.fix_x) fixed[static_cast<std::size_t>(2 * v)] = 1;
            if (c.fix_y) fixed[static_cast<std::size_t>(2 * v + 1)] = 1;
        }
    }
    Constraints out;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (fixed[i]) out.emplace_back(static_cast<int>(i), 0.0);
    }
    return out;
}

MechanicsSolver::MechanicsSolver(const Mesh& mesh, const ConcreteParams& concrete, const SteelParams& steel)
    : mesh_(mesh),
      material_(mesh.triangles.size(), 0),
      materials_{plane_strain_matrix(concrete.young_modulus, concrete.poisson_ratio),
                 plane_strain_matrix(steel.young_modulus, steel.poisson_ratio)},
      assembler_(2 * mesh.nodes.size(), 6, vector_element_dofs(mesh)) {
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (mesh.regions[t] == Region::Steel) material_[t] = 1;
    }
}

MechanicalState MechanicsSolver::initial_state() const {
    MechanicalState s;
    s.displacement = Vector::Zero(static_cast<Eigen::Index>(2 * mesh_.nodes.size()));
    s.strain.assign(mesh_.triangles.size(), {0.0, 0.0, 0.0});
    s.stress.assign(mesh_.triangles.size(), {0.0, 0.0, 0.0});
    return s;
}

void MechanicsSolver::solve(MechanicalState& state, const std::vector<double>& stiffness,
                            const std::vector<double>& eigen_load, const std::vector<double>& eigenstrain,
                            const Constraints& constraints) {
    ElasticityInput in;
    in.material = &material_;
    in.materials = &materials_;
    in.stiffness_factor = &stiffness;
    in.eigen_load = &eigen_load;
    Vector rhs;
    assemble_elasticity(mesh_, in, assembler_, rhs);
    SparseMatrix k = assembler_.matrix();
    apply_dirichlet(k, rhs, constraints);
    state.displacement = solver_.solve(k, rhs);

    state.strain.resize(mesh_.triangles.size());
    state.stress.resize(mesh_.triangles.size());
    for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
        const ElementKernel kern = make_kernel(mesh_, t);
        const auto eps = element_strain(kern, mesh_.triangles[t], state.displacement);
        const double star = eigenstrain.empty() ? 0.0 : eigenstrain[t];
        const std::array<double, 3> elastic{eps[0] - star, eps[1] - star, eps[2]};
        const Constitutive& d = materials_[static_cast<std::size_t>(material_[t])];
        std::array<double, 3> sig{};
        for (int r = 0; r < 3; ++r) sig[r] = d[r][0] * elastic[0] + d[r][1] * elastic[1] + d[r][2] * elastic[2];
        state.strain[t] = eps;
        state.stress[t] = sig;
    }
}

double update_driving_force(const std::array<double, 3>& stress, double elongation_modulus, double tensile_strength,
                            double previous) {
    const double inv = 1.0 / (2.0 * elongation_modulus);
    const double threshold = tensile_strength * tensile_strength * inv;
    double h = previous;
    simd::scalar_kernels().rankine_history(&stress[0], &stress[1], &stress[2], &inv, &threshold, 1, &h);
    return h;
}

void update_history(const MechanicalState& state, const std::vector<int>& elements,
                    const std::vector<double>& inv_two_modulus, const std::vector<double>& threshold,
                    std::vector<double>& history) {
    const std::size_t n = elements.size();
    std::vector<double> sxx(n), syy(n), sxy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = state.stress[static_cast<std::size_t>(elements[i])];
        sxx[i] = s[0];
        syy[i] = s[1];
        sxy[i] = s[2];
    }
    simd::kernels().rankine_history(sxx.data(), syy.data(), sxy.data(), inv_two_modulus.data(), threshold.data(), n,
                                    history.data());
}

}  // namespace corrode
