#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "corrode/mesh.hpp"

namespace corrode {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

// Linear-triangle kernel: constant gradients, area, and the symmetric
// three-point rule (barycentric 2/3, 1/6, 1/6) which is exact for quadratics.
struct ElementKernel {
    std::array<double, 3> dndx{};
    std::array<double, 3> dndy{};
    double area = 0.0;

    static constexpr int kQuadPoints = 3;
    // Shape-function values at quadrature point q.
    static std::array<double, 3> shape(int q);
    double weight(int /*q*/) const { return area / 3.0; }
};

ElementKernel make_kernel(const Mesh& mesh, std::size_t tri);

using Matrix3 = std::array<std::array<double, 3>, 3>;
Matrix3 element_diffusion_matrix(const ElementKernel& k, double kappa);

// Degree-of-freedom numbering over a subset of triangles (porous region for
// transport and phase field, whole mesh for elasticity).
struct ScalarSpace {
    std::vector<int> elements;
    std::vector<int> node_to_dof;  // -1 when the node is outside the space
    std::vector<int> dof_to_node;
    std::vector<double> lumped_area;  // per dof, sum of A/3 over the space

    std::size_t size() const { return dof_to_node.size(); }
};

ScalarSpace make_scalar_space(const Mesh& mesh, const std::function<bool(Region)>& include);

// Element-to-dof table (three per element) for a scalar space.
std::vector<int> scalar_element_dofs(const ScalarSpace& space, const Mesh& mesh);

// Sparse matrix whose nonzero pattern is built once from element
// connectivity; later assemblies only overwrite values.
class PatternAssembler {
public:
    PatternAssembler(std::size_t n_dofs, int dofs_per_element, std::vector<int> element_dofs);

    void zero();
    void add(std::size_t element, const double* local);  // row-major k x k
    void add_diagonal(int dof, double value);
    SparseMatrix& matrix() { return matrix_; }
    const SparseMatrix& matrix() const { return matrix_; }
    int dofs_per_element() const { return k_; }
    const int* element_dofs(std::size_t e) const { return dofs_.data() + e * static_cast<std::size_t>(k_); }

private:
    int k_;
    std::vector<int> dofs_;
    std::vector<int> slots_;     // per element, k*k value indices
    std::vector<int> diagonal_;  // value index of each diagonal entry
    SparseMatrix matrix_;
};

struct SparseSystem {
    SparseMatrix matrix;
    Vector rhs;
    std::vector<std::pair<int, double>> dirichlet;
};

// Symmetric elimination of the constraints listed in system.dirichlet. The
// constrained diagonal keeps its magnitude so conditioning is unaffected.
void apply_dirichlet(SparseMatrix& matrix, Vector& rhs, const std::vector<std::pair<int, double>>& constraints);

// Factorization with a cached symbolic analysis. LLT is tried first; LDLT
// serves symmetric matrices that are not positive definite.
class LinearSolver {
public:
    LinearSolver();
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    Vector solve(const SparseMatrix& matrix, const Vector& rhs);
    // Forget the symbolic analysis (call when the pattern changes).
    void reset();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Applies the constraints and solves; residual <= 1e-10 relative to the RHS
// or SolverError.
Vector solve_sparse(const SparseSystem& system);

struct DiffusionReactionInput {
    const std::vector<double>* kappa = nullptr;     // per space element (mean over quadrature)
    const std::vector<double>* capacity = nullptr;  // per dof
    const std::vector<double>* sink = nullptr;      // per dof, linear reaction coefficient [1/s]
    const std::vector<double>* previous = nullptr;  // per dof, capacity_old * c_old
    const std::vector<double>* source = nullptr;    // per dof, volumetric source [mol/m3/s]
    const std::vector<double>* boundary_flux = nullptr;  // per dof, integrated influx [mol/s per m]
    double dt = 0.0;
};

// Backward-Euler system (A C/dt + K + A S) c = A prev/dt + A src + flux with
// lumped nodal areas A.
void assemble_scalar_diffusion_reaction(const ScalarSpace& space, const Mesh& mesh,
                                        const DiffusionReactionInput& in, PatternAssembler& assembler,
                                        Vector& rhs);
SparseSystem assemble_scalar_diffusion_reaction(const ScalarSpace& space, const Mesh& mesh,
                                                const DiffusionReactionInput& in);

// Lumps a uniform normal influx over edges with the given tag onto dofs.
std::vector<double> lumped_edge_flux(const ScalarSpace& space, const Mesh& mesh, BoundaryTag tag, double flux);

// Plane-strain constitutive matrix in Voigt order (xx, yy, xy engineering).
using Constitutive = std::array<std::array<double, 3>, 3>;
Constitutive plane_strain_matrix(double young_modulus, double poisson_ratio);

struct ElasticityInput {
    const std::vector<int>* material = nullptr;            // per triangle index into materials
    const std::vector<Constitutive>* materials = nullptr;
    const std::vector<double>* stiffness_factor = nullptr;  // per triangle, mean g over quadrature
    const std::vector<double>* eigen_load = nullptr;        // per triangle, mean of g * volumetric eigenstrain
};

// Element-to-dof table for two displacement components per node.
std::vector<int> vector_element_dofs(const Mesh& mesh);

void assemble_elasticity(const Mesh& mesh, const ElasticityInput& in, PatternAssembler& assembler, Vector& rhs);
SparseSystem assemble_elasticity(const Mesh& mesh, const ElasticityInput& in);

// Strain (xx, yy, engineering xy) of one triangle from nodal displacements.
std::array<double, 3> element_strain(const ElementKernel& k, const std::array<int, 3>& tri, const Vector& u);

}  // namespace corrode
