#pragma once

#include <array>
#include <utility>
#include <vector>

#include "corrode/config.hpp"
#include "corrode/fem.hpp"
#include "corrode/mesh.hpp"

namespace corrode {

// Volume change of iron turning into porous rust without confinement.
double free_volumetric_strain(const RustParams& rust, const IronParams& iron);

// Coefficient C in eps* = C S_p 1. Concrete properties are mixed linearly
// with rust by the local precipitate fraction theta_p.
double eigenstrain_coefficient(double theta_p, const ConcreteParams& concrete, const RustParams& rust,
                               const IronParams& iron);

class EigenstrainModel {
public:
    EigenstrainModel(const ConcreteParams& concrete, const RustParams& rust, const IronParams& iron);
    double coefficient(double theta_p) const;
    double free_strain() const { return free_strain_; }

private:
    ConcreteParams concrete_;
    RustParams rust_;
    double free_strain_;
    double rust_bulk_;
};

struct MechanicalState {
    Vector displacement;                          // 2 per node
    std::vector<std::array<double, 3>> strain;    // per triangle, engineering shear
    std::vector<std::array<double, 3>> stress;    // effective (undegraded), per triangle
};

using Constraints = std::vector<std::pair<int, double>>;

// Zero-displacement dofs for the listed boundary sites, located on the mesh
// bounding box.
Constraints constraint_dofs(const Mesh& mesh, const std::vector<DisplacementConstraint>& constraints);

// Nodes on one side of the bounding box (within a relative tolerance).
std::vector<int> nodes_on_site(const Mesh& mesh, BoundarySite site);

class MechanicsSolver {
public:
    // Concrete and SCI share the concrete stiffness; steel has its own.
    MechanicsSolver(const Mesh& mesh, const ConcreteParams& concrete, const SteelParams& steel);

    // stiffness: per-triangle mean degradation (residual included by the
    // caller); eigen_load: per-triangle mean of g * eps*; eigenstrain: the
    // undegraded per-triangle mean eps* used for the effective stress.
    void solve(MechanicalState& state, const std::vector<double>& stiffness, const std::vector<double>& eigen_load,
               const std::vector<double>& eigenstrain, const Constraints& constraints);

    MechanicalState initial_state() const;
    // K u with the stiffness of the last solve (no eigenstrain load).
    Vector internal_force(const Vector& displacement) const { return assembler_.matrix() * displacement; }
    const std::vector<int>& material() const { return material_; }
    const std::vector<Constitutive>& materials() const { return materials_; }

private:
    const Mesh& mesh_;
    std::vector<int> material_;
    std::vector<Constitutive> materials_;
    PatternAssembler assembler_;
    LinearSolver solver_;
};

// H = max(H_prev, H~, <s1>^2 / (2 E~)) for one effective stress state.
double update_driving_force(const std::array<double, 3>& stress, double elongation_modulus, double tensile_strength,
                            double previous);

// Vectorised history update over selected triangles. `elements` maps the
// history slots to triangles; inv_two_modulus and threshold are per slot.
void update_history(const MechanicalState& state, const std::vector<int>& elements,
                    const std::vector<double>& inv_two_modulus, const std::vector<double>& threshold,
                    std::vector<double>& history);

}  // namespace corrode
