#include "corrode/phasefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "corrode/simd/kernels.hpp"

namespace corrode {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("softening calibration: ") + name + " must be positive");
    }
}

SofteningCalibration calibrate_from_betas(double beta_w, double beta_k, double f_t, double g_f, double e_tilde,
                                          double ell, double structure_size) {
    require_positive(f_t, "tensile strength");
    require_positive(g_f, "fracture energy");
    require_positive(e_tilde, "elongation modulus");
    require_positive(ell, "length scale");
    SofteningCalibration c;
    c.p = 2.0;
    c.beta_w = beta_w;
    c.beta_k = beta_k;
    c.irwin_length = e_tilde * g_f / (f_t * f_t);
    c.critical_opening = 2.0 * beta_w * g_f / f_t;
    c.initial_slope = -0.5 * beta_k * f_t * f_t / g_f;
    c.a1 = 4.0 / kPi * c.irwin_length / ell;
    c.a2 = 2.0 * std::cbrt(beta_k * beta_k) - c.p - 0.5;
    c.a3 = 0.5 * beta_w * beta_w - c.a2 - 1.0;
    const double bound = std::min(8.0 * c.irwin_length / (3.0 * kPi), structure_size / 50.0);
    c.length_warning = ell > bound;
    return c;
}

}  // namespace

SofteningCalibration calibrate_cornelissen(double f_t, double g_f, double e_tilde, double ell, double structure_size) {
    return calibrate_from_betas(5.1361 / 2.0, 2.0 * 1.3546, f_t, g_f, e_tilde, ell, structure_size);
}

SofteningCalibration calibrate_linear(double f_t, double g_f, double e_tilde, double ell, double structure_size) {
    return calibrate_from_betas(1.0, 1.0, f_t, g_f, e_tilde, ell, structure_size);
}

SofteningCalibration calibrate(SofteningLaw law, double f_t, double g_f, double e_tilde, double ell,
                               double structure_size) {
    return law == SofteningLaw::Linear ? calibrate_linear(f_t, g_f, e_tilde, ell, structure_size)
                                       : calibrate_cornelissen(f_t, g_f, e_tilde, ell, structure_size);
}

namespace {

DegradationValue rational_degradation(double phi, double a1, double a2, double a3) {
    const double om = 1.0 - phi;
    const double p = om * om;
    const double dp = -2.0 * om;
    const double q = a1 * phi * (1.0 + (a2 + a3 * phi) * phi);
    const double dq = a1 * (1.0 + (2.0 * a2 + 3.0 * a3 * phi) * phi);
    const double d2q = a1 * (2.0 * a2 + 6.0 * a3 * phi);
    const double s = p + q;
    const double ds = dp + dq;
    const double num = dp * q - p * dq;
    const double dnum = 2.0 * q - p * d2q;
    DegradationValue v;
    v.g = p / s;
    v.dg = num / (s * s);
    v.d2g = dnum / (s * s) - 2.0 * num * ds / (s * s * s);
    return v;
}

}  // namespace

DegradationValue degradation(double phi, const SofteningCalibration& cal) {
    return rational_degradation(phi, cal.a1, cal.a2, cal.a3);
}

DissipationValue dissipation(double phi) { return {2.0 * phi - phi * phi, 2.0 - 2.0 * phi}; }

double at2_length_from_strength(double f_t, double e, double g_f) {
    require_positive(f_t, "tensile strength");
    require_positive(e, "Young modulus");
    require_positive(g_f, "fracture energy");
    return 81.0 / 256.0 * e * g_f / (3.0 * f_t * f_t);
}

double at2_strength_from_length(double ell, double e, double g_f) {
    require_positive(ell, "length scale");
    require_positive(e, "Young modulus");
    require_positive(g_f, "fracture energy");
    return 9.0 / 16.0 * std::sqrt(e * g_f / (3.0 * ell));
}

DegradationValue PhaseFieldModel::local_degradation(double phi, std::size_t element) const {
    if (variant == ModelVariant::PFCZM) return rational_degradation(phi, elements[element].a1, a2, a3);
    const double om = 1.0 - phi;
    return {om * om, -2.0 * om, 2.0};
}

std::array<double, 2> PhaseFieldModel::local_dissipation(double phi) const {
    if (variant == ModelVariant::PFCZM) return {2.0 - 2.0 * phi, -2.0};
    return {2.0 * phi, 2.0};
}

void PhaseFieldModel::quadrature_degradation(const std::vector<double>& phi_q, std::vector<double>& g_q) const {
    const std::size_t n = phi_q.size();
    g_q.resize(n);
    if (variant != ModelVariant::PFCZM) {
        for (std::size_t i = 0; i < n; ++i) g_q[i] = (1.0 - phi_q[i]) * (1.0 - phi_q[i]);
        return;
    }
    std::vector<double> dg(n);
    const auto& table = simd::kernels();
    if (uniform && !elements.empty()) {
        table.degradation(phi_q.data(), n, {elements.front().a1, a2, a3}, g_q.data(), dg.data());
        return;
    }
    for (std::size_t e = 0; e < elements.size(); ++e) {
        table.degradation(phi_q.data() + 3 * e, 3, {elements[e].a1, a2, a3}, g_q.data() + 3 * e, dg.data() + 3 * e);
    }
}

PhaseFieldModel make_phase_field_model(ModelVariant variant, SofteningLaw law, double ell,
                                       const std::vector<MaterialPoint>& points) {
    require_positive(ell, "length scale");
    PhaseFieldModel model;
    model.variant = variant;
    model.elements.resize(points.size());
    for (std::size_t e = 0; e < points.size(); ++e) {
        const MaterialPoint& m = points[e];
        PhaseFieldElement& pe = model.elements[e];
        switch (variant) {
            case ModelVariant::PFCZM: {
                const SofteningCalibration cal =
                    calibrate(law, m.tensile_strength, m.fracture_energy, m.elongation_modulus, ell);
                model.a2 = cal.a2;
                model.a3 = cal.a3;
                pe.a1 = cal.a1;
                pe.local_coeff = m.fracture_energy / (kPi * ell);
                pe.gradient_coeff = 2.0 * ell * m.fracture_energy / kPi;
                pe.threshold = m.tensile_strength * m.tensile_strength / (2.0 * m.elongation_modulus);
                if (pe.a1 != model.elements.front().a1) model.uniform = false;
                break;
            }
            case ModelVariant::AT2:
                pe.local_coeff = m.fracture_energy / (2.0 * ell);
                pe.gradient_coeff = m.fracture_energy * ell;
                break;
            case ModelVariant::StressBased:
                pe.local_coeff = 1.0;
                pe.gradient_coeff = 2.0 * ell * ell;
                break;
        }
    }
    return model;
}

double principal_stress_major(double sxx, double syy, double sxy) {
    const double mid = 0.5 * (sxx + syy);
    const double dev = 0.5 * (sxx - syy);
    return mid + std::sqrt(dev * dev + sxy * sxy);
}

double driving_force(ModelVariant variant, const std::array<double, 3>& s, const std::array<double, 3>& strain,
                     const MaterialPoint& mat, double xi) {
    switch (variant) {
        case ModelVariant::PFCZM: {
            const double s1 = std::max(principal_stress_major(s[0], s[1], s[2]), 0.0);
            return s1 * s1 / (2.0 * mat.elongation_modulus);
        }
        case ModelVariant::AT2:
            return 0.5 * (s[0] * strain[0] + s[1] * strain[1] + s[2] * strain[2]);
        case ModelVariant::StressBased: {
            const double mid = 0.5 * (s[0] + s[1]);
            const double rad = std::sqrt(0.25 * (s[0] - s[1]) * (s[0] - s[1]) + s[2] * s[2]);
            const double p1 = std::max(mid + rad, 0.0);
            const double p2 = std::max(mid - rad, 0.0);
            const double ft2 = mat.tensile_strength * mat.tensile_strength;
            return xi * std::max((p1 * p1 + p2 * p2) / ft2 - 1.0, 0.0);
        }
    }
    throw std::invalid_argument("unsupported phase-field variant");
}

void assemble_phasefield(const Mesh& mesh, const ScalarSpace& space, const PhaseFieldModel& model,
                         const std::vector<double>& history, const Vector& phi, PatternAssembler* tangent,
                         Vector& residual) {
    residual.setZero(static_cast<Eigen::Index>(space.size()));
    if (tangent != nullptr) tangent->zero();
    for (std::size_t e = 0; e < space.elements.size(); ++e) {
        const int tri = space.elements[e];
        const ElementKernel k = make_kernel(mesh, static_cast<std::size_t>(tri));
        const PhaseFieldElement& pe = model.elements[e];
        std::array<int, 3> dofs{};
        std::array<double, 3> nodal{};
        for (int a = 0; a < 3; ++a) {
            dofs[a] = space.node_to_dof[static_cast<std::size_t>(mesh.triangles[static_cast<std::size_t>(tri)][a])];
            nodal[a] = phi[dofs[a]];
        }
        const Matrix3 lap = element_diffusion_matrix(k, pe.gradient_coeff);
        std::array<double, 9> local{};
        std::array<double, 3> r{};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                r[a] += lap[a][b] * nodal[b];
                local[a * 3 + b] = lap[a][b];
            }
        }
        const double h = history[e];
        for (int q = 0; q < ElementKernel::kQuadPoints; ++q) {
            const auto n = ElementKernel::shape(q);
            const double w = k.weight(q);
            const double phi_q = n[0] * nodal[0] + n[1] * nodal[1] + n[2] * nodal[2];
            const DegradationValue g = model.local_degradation(phi_q, e);
            const auto diss = model.local_dissipation(phi_q);
            const double f = g.dg * h + pe.local_coeff * diss[0];
            const double df = g.d2g * h + pe.local_coeff * diss[1];
            for (int a = 0; a < 3; ++a) {
                r[a] += w * n[a] * f;
                for (int b = 0; b < 3; ++b) local[a * 3 + b] += w * n[a] * n[b] * df;
            }
        }
        for (int a = 0; a < 3; ++a) residual[dofs[a]] += r[a];
        if (tangent != nullptr) tangent->add(e, local.data());
    }
}

PhaseFieldSolver::PhaseFieldSolver(const Mesh& mesh, const ScalarSpace& space, PhaseFieldModel model)
    : mesh_(mesh),
      space_(space),
      model_(std::move(model)),
      assembler_(space.size(), 3, scalar_element_dofs(space, mesh)) {
    if (model_.elements.size() != space.elements.size()) {
        throw std::invalid_argument("phase-field model does not match the element space");
    }
}

PhaseFieldReport PhaseFieldSolver::solve(const std::vector<double>& history, const Vector& phi_prev, Vector& phi) {
    const Eigen::Index n = static_cast<Eigen::Index>(space_.size());
    PhaseFieldReport report;

    // Nothing can grow when every element sits at or below its no-growth level
    // and the previous field is intact.
    bool quiescent = phi_prev.size() == 0 || phi_prev.maxCoeff() <= 0.0;
    for (std::size_t e = 0; quiescent && e < history.size(); ++e) {
        if (history[e] > model_.elements[e].threshold) quiescent = false;
    }
    if (quiescent) {
        phi = phi_prev;
        report.skipped = true;
        return report;
    }

    auto project = [&](Vector& x) {
        for (Eigen::Index i = 0; i < n; ++i) x[i] = std::clamp(x[i], phi_prev[i], 1.0);
    };
    // Residual with the components of active bounds removed.
    auto projected = [&](const Vector& x, const Vector& r, std::vector<char>& active) {
        Vector out = r;
        active.assign(static_cast<std::size_t>(n), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool at_lower = x[i] <= phi_prev[i] && r[i] > 0.0;
            const bool at_upper = x[i] >= 1.0 && r[i] < 0.0;
            if (at_lower || at_upper) {
                active[static_cast<std::size_t>(i)] = 1;
                out[i] = 0.0;
            }
        }
        return out;
    };

    double scale = 0.0;
    for (std::size_t e = 0; e < space_.elements.size(); ++e) {
        scale += 2.0 * model_.elements[e].local_coeff * mesh_.area(static_cast<std::size_t>(space_.elements[e]));
    }
    const double absolute_floor = 1e-12 * scale;

    project(phi);
    Vector residual;
    std::vector<char> active;
    std::vector<char> trial_active;
    assemble_phasefield(mesh_, space_, model_, history, phi, &assembler_, residual);
    Vector pr = projected(phi, residual, active);
    double norm = pr.norm();
    const double reference = std::max(norm, absolute_floor);

    for (int it = 0; it < max_iterations; ++it) {
        report.iterations = it;
        report.residual = norm;
        if (norm <= relative_tolerance * reference || norm <= absolute_floor) return report;

        SparseMatrix& k = assembler_.matrix();
        Vector rhs = -pr;
        std::vector<std::pair<int, double>> fixed;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (active[static_cast<std::size_t>(i)]) fixed.emplace_back(static_cast<int>(i), 0.0);
        }
        SparseMatrix tangent = k;
        apply_dirichlet(tangent, rhs, fixed);
        const Vector step = solver_.solve(tangent, rhs);

        double lambda = 1.0;
        Vector trial;
        Vector trial_residual;
        Vector trial_pr;
        double trial_norm = 0.0;
        for (int ls = 0; ls < 8; ++ls) {
            trial = phi + lambda * step;
            project(trial);
            assemble_phasefield(mesh_, space_, model_, history, trial, nullptr, trial_residual);
            trial_pr = projected(trial, trial_residual, trial_active);
            trial_norm = trial_pr.norm();
            if (trial_norm < norm) break;
            lambda *= 0.5;
        }
        phi = trial;
        assemble_phasefield(mesh_, space_, model_, history, phi, &assembler_, residual);
        pr = projected(phi, residual, active);
        norm = pr.norm();
    }
    report.iterations = max_iterations;
    report.residual = norm;
    if (norm <= relative_tolerance * reference || norm <= absolute_floor) return report;
    throw SolverError("phase-field Newton did not converge in " + std::to_string(max_iterations) +
                      " iterations; reduce the time step");
}

}  // namespace corrode
