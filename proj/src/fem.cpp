#include "corrode/fem.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace corrode {

std::array<double, 3> ElementKernel::shape(int q) {
    constexpr double a = 2.0 / 3.0, b = 1.0 / 6.0;
    switch (q) {
        case 0: return {a, b, b};
        case 1: return {b, a, b};
        default: return {b, b, a};
    }
}

ElementKernel make_kernel(const Mesh& mesh, std::size_t tri) {
    const auto& t = mesh.triangles[tri];
    const Point& p0 = mesh.nodes[t[0]];
    const Point& p1 = mesh.nodes[t[1]];
    const Point& p2 = mesh.nodes[t[2]];
    const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    ElementKernel k;
    k.area = 0.5 * det;
    k.dndx = {(p1.y - p2.y) / det, (p2.y - p0.y) / det, (p0.y - p1.y) / det};
    k.dndy = {(p2.x - p1.x) / det, (p0.x - p2.x) / det, (p1.x - p0.x) / det};
    return k;
}

Matrix3 element_diffusion_matrix(const ElementKernel& k, double kappa) {
    Matrix3 m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = kappa * k.area * (k.dndx[i] * k.dndx[j] + k.dndy[i] * k.dndy[j]);
    }
    return m;
}

ScalarSpace make_scalar_space(const Mesh& mesh, const std::function<bool(Region)>& include) {
    ScalarSpace s;
    s.node_to_dof.assign(mesh.nodes.size(), -1);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (!include(mesh.regions[t])) continue;
        s.elements.push_back(static_cast<int>(t));
        for (int v : mesh.triangles[t]) {
            if (s.node_to_dof[v] < 0) {
                s.node_to_dof[v] = static_cast<int>(s.dof_to_node.size());
                s.dof_to_node.push_back(v);
            }
        }
    }
    s.lumped_area.assign(s.dof_to_node.size(), 0.0);
    for (int t : s.elements) {
        const double a = mesh.area(static_cast<std::size_t>(t)) / 3.0;
        for (int v : mesh.triangles[t]) s.lumped_area[s.node_to_dof[v]] += a;
    }
    return s;
}

// ---------------------------------------------------------------------------

PatternAssembler::PatternAssembler(std::size_t n_dofs, int dofs_per_element, std::vector<int> element_dof_table)
    : k_(dofs_per_element), dofs_(std::move(element_dof_table)) {
    const std::size_t n_el = dofs_.size() / static_cast<std::size_t>(k_);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n_el * k_ * k_ + n_dofs);
    for (std::size_t e = 0; e < n_el; ++e) {
        const int* d = this->element_dofs(e);
        for (int i = 0; i < k_; ++i) {
            for (int j = 0; j < k_; ++j) trips.emplace_back(d[i], d[j], 0.0);
        }
    }
    for (std::size_t i = 0; i < n_dofs; ++i) trips.emplace_back(static_cast<int>(i), static_cast<int>(i), 0.0);
    matrix_.resize(static_cast<Eigen::Index>(n_dofs), static_cast<Eigen::Index>(n_dofs));
    matrix_.setFromTriplets(trips.begin(), trips.end());
    matrix_.makeCompressed();

    auto slot_of = [this](int row, int col) {
        const int* outer = matrix_.outerIndexPtr();
        const int* inner = matrix_.innerIndexPtr();
        const int* begin = inner + outer[col];
        const int* end = inner + outer[col + 1];
        const int* it = std::lower_bound(begin, end, row);
        return static_cast<int>(it - inner);
    };
    slots_.resize(n_el * k_ * k_);
    for (std::size_t e = 0; e < n_el; ++e) {
        const int* d = this->element_dofs(e);
        for (int i = 0; i < k_; ++i) {
            for (int j = 0; j < k_; ++j) slots_[(e * k_ + i) * k_ + j] = slot_of(d[i], d[j]);
        }
    }
    diagonal_.resize(n_dofs);
    for (std::size_t i = 0; i < n_dofs; ++i) diagonal_[i] = slot_of(static_cast<int>(i), static_cast<int>(i));
}

void PatternAssembler::zero() {
    std::fill(matrix_.valuePtr(), matrix_.valuePtr() + matrix_.nonZeros(), 0.0);
}

void PatternAssembler::add(std::size_t element, const double* local) {
    double* values = matrix_.valuePtr();
    const int* slot = slots_.data() + element * k_ * k_;
    for (int i = 0; i < k_ * k_; ++i) values[slot[i]] += local[i];
}

void PatternAssembler::add_diagonal(int dof, double value) { matrix_.valuePtr()[diagonal_[dof]] += value; }

// ---------------------------------------------------------------------------

void apply_dirichlet(SparseMatrix& matrix, Vector& rhs, const std::vector<std::pair<int, double>>& constraints) {
    if (constraints.empty()) return;
    const Eigen::Index n = matrix.rows();
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    Vector value = Vector::Zero(n);
    for (const auto& [dof, v] : constraints) {
        fixed[dof] = 1;
        value[dof] = v;
    }
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
            const Eigen::Index row = it.row();
            if (fixed[col] && !fixed[row]) rhs[row] -= it.value() * value[col];
        }
    }
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
            const Eigen::Index row = it.row();
            if (!fixed[row] && !fixed[col]) continue;
            if (row == col) {
                double d = std::abs(it.value());
                if (d == 0.0) d = 1.0;
                it.valueRef() = d;
                rhs[row] = d * value[row];
            } else {
                it.valueRef() = 0.0;
            }
        }
    }
}

struct LinearSolver::Impl {
    Eigen::SimplicialLLT<SparseMatrix> llt;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    bool llt_analyzed = false;
    bool ldlt_analyzed = false;
    Eigen::Index size = -1;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::reset() { impl_ = std::make_unique<Impl>(); }

namespace {

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
    const double bn = b.norm();
    const double rn = (a * x - b).norm();
    return bn > 0 ? rn / bn : rn;
}

}  // namespace

Vector LinearSolver::solve(const SparseMatrix& matrix, const Vector& rhs) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
        throw SolverError("linear system dimensions are inconsistent");
    }
    const Eigen::Index n = matrix.rows();
    if (n == 0) return Vector();
    if (rhs.norm() == 0.0) return Vector::Zero(n);
    if (impl_->size != n) {
        reset();
        impl_->size = n;
    }

    auto refine = [&](auto& factor, Vector x) {
        for (int it = 0; it < 3 && relative_residual(matrix, x, rhs) > 1e-10; ++it) {
            x += factor.solve(rhs - matrix * x);
        }
        return x;
    };

    if (!impl_->llt_analyzed) {
        impl_->llt.analyzePattern(matrix);
        impl_->llt_analyzed = true;
    }
    impl_->llt.factorize(matrix);
    if (impl_->llt.info() == Eigen::Success) {
        Vector x = refine(impl_->llt, impl_->llt.solve(rhs));
        const double res = relative_residual(matrix, x, rhs);
        if (res <= 1e-10 && x.allFinite()) return x;
    }

    if (!impl_->ldlt_analyzed) {
        impl_->ldlt.analyzePattern(matrix);
        impl_->ldlt_analyzed = true;
    }
    impl_->ldlt.factorize(matrix);
    if (impl_->ldlt.info() != Eigen::Success) {
        throw SolverError("sparse factorization broke down (matrix singular or not symmetric), n=" +
                          std::to_string(n));
    }
    Vector x = refine(impl_->ldlt, impl_->ldlt.solve(rhs));
    const double res = relative_residual(matrix, x, rhs);
    if (!(res <= 1e-10) || !x.allFinite()) {
        std::ostringstream msg;
        msg << "linear solve did not reach tolerance: relative residual " << res << " (n=" << n << ")";
        throw SolverError(msg.str());
    }
    return x;
}

Vector solve_sparse(const SparseSystem& system) {
    SparseMatrix a = system.matrix;
    Vector b = system.rhs;
    apply_dirichlet(a, b, system.dirichlet);
    LinearSolver solver;
    return solver.solve(a, b);
}

// ---------------------------------------------------------------------------

std::vector<int> scalar_element_dofs(const ScalarSpace& space, const Mesh& mesh) {
    std::vector<int> dofs;
    dofs.reserve(space.elements.size() * 3);
    for (int t : space.elements) {
        for (int v : mesh.triangles[t]) dofs.push_back(space.node_to_dof[v]);
    }
    return dofs;
}

void assemble_scalar_diffusion_reaction(const ScalarSpace& space, const Mesh& mesh,
                                        const DiffusionReactionInput& in, PatternAssembler& assembler,
                                        Vector& rhs) {
    if (!(in.dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const std::size_t n = space.size();
    assembler.zero();
    rhs = Vector::Zero(static_cast<Eigen::Index>(n));
    double local[9];
    for (std::size_t e = 0; e < space.elements.size(); ++e) {
        const double kappa = in.kappa ? (*in.kappa)[e] : 0.0;
        if (kappa == 0.0) continue;
        const ElementKernel k = make_kernel(mesh, static_cast<std::size_t>(space.elements[e]));
        const Matrix3 m = element_diffusion_matrix(k, kappa);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) local[i * 3 + j] = m[i][j];
        }
        assembler.add(e, local);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double a = space.lumped_area[i];
        const double cap = in.capacity ? (*in.capacity)[i] : 1.0;
        const double sink = in.sink ? (*in.sink)[i] : 0.0;
        assembler.add_diagonal(static_cast<int>(i), a * (cap / in.dt + sink));
        double r = 0.0;
        if (in.previous) r += a * (*in.previous)[i] / in.dt;
        if (in.source) r += a * (*in.source)[i];
        if (in.boundary_flux) r += (*in.boundary_flux)[i];
        rhs[static_cast<Eigen::Index>(i)] = r;
    }
}

SparseSystem assemble_scalar_diffusion_reaction(const ScalarSpace& space, const Mesh& mesh,
                                                const DiffusionReactionInput& in) {
    PatternAssembler assembler(space.size(), 3, scalar_element_dofs(space, mesh));
    SparseSystem sys;
    assemble_scalar_diffusion_reaction(space, mesh, in, assembler, sys.rhs);
    sys.matrix = assembler.matrix();
    return sys;
}

std::vector<double> lumped_edge_flux(const ScalarSpace& space, const Mesh& mesh, BoundaryTag tag, double flux) {
    std::vector<double> out(space.size(), 0.0);
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != tag) continue;
        const Point& a = mesh.nodes[e.nodes[0]];
        const Point& b = mesh.nodes[e.nodes[1]];
        const double half = 0.5 * std::hypot(b.x - a.x, b.y - a.y) * flux;
        for (int v : e.nodes) {
            const int d = space.node_to_dof[v];
            if (d >= 0) out[d] += half;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Constitutive plane_strain_matrix(double young_modulus, double poisson_ratio) {
    const double e = young_modulus, nu = poisson_ratio;
    const double lambda = e * nu / ((1 + nu) * (1 - 2 * nu));
    const double mu = e / (2 * (1 + nu));
    return {{{lambda + 2 * mu, lambda, 0.0}, {lambda, lambda + 2 * mu, 0.0}, {0.0, 0.0, mu}}};
}

std::vector<int> vector_element_dofs(const Mesh& mesh) {
    std::vector<int> dofs;
    dofs.reserve(mesh.triangles.size() * 6);
    for (const auto& t : mesh.triangles) {
        for (int v : t) {
            dofs.push_back(2 * v);
            dofs.push_back(2 * v + 1);
        }
    }
    return dofs;
}

namespace {

// B is 3 x 6 with columns (u0x, u0y, u1x, u1y, u2x, u2y).
using BMatrix = std::array<std::array<double, 6>, 3>;

BMatrix strain_displacement(const ElementKernel& k) {
    BMatrix b{};
    for (int i = 0; i < 3; ++i) {
        b[0][2 * i] = k.dndx[i];
        b[1][2 * i + 1] = k.dndy[i];
        b[2][2 * i] = k.dndy[i];
        b[2][2 * i + 1] = k.dndx[i];
    }
    return b;
}

}  // namespace

void assemble_elasticity(const Mesh& mesh, const ElasticityInput& in, PatternAssembler& assembler, Vector& rhs) {
    assembler.zero();
    rhs = Vector::Zero(static_cast<Eigen::Index>(2 * mesh.nodes.size()));
    double local[36];
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const ElementKernel k = make_kernel(mesh, t);
        const BMatrix b = strain_displacement(k);
        const Constitutive& d = (*in.materials)[in.material ? (*in.material)[t] : 0];
        const double g = in.stiffness_factor ? (*in.stiffness_factor)[t] : 1.0;
        // DB (3 x 6)
        std::array<std::array<double, 6>, 3> db{};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 6; ++c) db[r][c] = d[r][0] * b[0][c] + d[r][1] * b[1][c] + d[r][2] * b[2][c];
        }
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                local[i * 6 + j] = g * k.area * (b[0][i] * db[0][j] + b[1][i] * db[1][j] + b[2][i] * db[2][j]);
            }
        }
        assembler.add(t, local);

        const double eig = in.eigen_load ? (*in.eigen_load)[t] : 0.0;
        if (eig != 0.0) {
            // f = A B^T D (eig, eig, 0)
            const double sx = (d[0][0] + d[0][1]) * eig;
            const double sy = (d[1][0] + d[1][1]) * eig;
            const double sxy = (d[2][0] + d[2][1]) * eig;
            const auto& tri = mesh.triangles[t];
            for (int i = 0; i < 3; ++i) {
                rhs[2 * tri[i]] += k.area * (b[0][2 * i] * sx + b[2][2 * i] * sxy);
                rhs[2 * tri[i] + 1] += k.area * (b[1][2 * i + 1] * sy + b[2][2 * i + 1] * sxy);
            }
        }
    }
}

SparseSystem assemble_elasticity(const Mesh& mesh, const ElasticityInput& in) {
    PatternAssembler assembler(2 * mesh.nodes.size(), 6, vector_element_dofs(mesh));
    SparseSystem sys;
    assemble_elasticity(mesh, in, assembler, sys.rhs);
    sys.matrix = assembler.matrix();
    return sys;
}

std::array<double, 3> element_strain(const ElementKernel& k, const std::array<int, 3>& tri, const Vector& u) {
    std::array<double, 3> eps{};
    for (int i = 0; i < 3; ++i) {
        const double ux = u[2 * tri[i]];
        const double uy = u[2 * tri[i] + 1];
        eps[0] += k.dndx[i] * ux;
        eps[1] += k.dndy[i] * uy;
        eps[2] += k.dndy[i] * ux + k.dndx[i] * uy;
    }
    return eps;
}

}  // namespace corrode
