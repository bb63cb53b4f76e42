#pragma once

#include <array>
#include <limits>
#include <vector>

#include "corrode/config.hpp"
#include "corrode/fem.hpp"
#include "corrode/mesh.hpp"

namespace corrode {

// Parameters of the rational degradation function calibrated to a softening
// curve. `critical_opening` and `initial_slope` describe the target traction
// separation law: w_c and k_0.
struct SofteningCalibration {
    double p = 2.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double beta_w = 0.0;
    double beta_k = 0.0;
    double irwin_length = 0.0;
    double critical_opening = 0.0;
    double initial_slope = 0.0;
    bool length_warning = false;  // length scale above the admissible bound
};

SofteningCalibration calibrate_cornelissen(double tensile_strength, double fracture_energy, double elongation_modulus,
                                           double length_scale,
                                           double structure_size = std::numeric_limits<double>::infinity());
SofteningCalibration calibrate_linear(double tensile_strength, double fracture_energy, double elongation_modulus,
                                      double length_scale,
                                      double structure_size = std::numeric_limits<double>::infinity());
SofteningCalibration calibrate(SofteningLaw law, double tensile_strength, double fracture_energy,
                               double elongation_modulus, double length_scale,
                               double structure_size = std::numeric_limits<double>::infinity());

struct DegradationValue {
    double g;
    double dg;
    double d2g;
};

DegradationValue degradation(double phi, const SofteningCalibration& cal);

struct DissipationValue {
    double alpha;
    double dalpha;
};

// Geometric crack function of the cohesive model: 2 phi - phi^2.
DissipationValue dissipation(double phi);

double at2_length_from_strength(double tensile_strength, double young_modulus, double fracture_energy);
double at2_strength_from_length(double length_scale, double young_modulus, double fracture_energy);

// Per-element data of the phase-field equation
//   g'(phi) H + c_loc alpha'(phi) - c_grad lap(phi) = 0.
struct PhaseFieldElement {
    double a1 = 0.0;         // cohesive variant only
    double local_coeff = 0.0;
    double gradient_coeff = 0.0;
    double threshold = 0.0;  // history floor (no-growth level)
};

struct PhaseFieldModel {
    ModelVariant variant = ModelVariant::PFCZM;
    double a2 = 0.0;
    double a3 = 0.0;
    std::vector<PhaseFieldElement> elements;  // per space element

    bool uniform = true;  // all elements share a1

    DegradationValue local_degradation(double phi, std::size_t element) const;
    // g at three quadrature values per element (phi_q has 3 entries per element).
    void quadrature_degradation(const std::vector<double>& phi_q, std::vector<double>& g_q) const;
    // alpha', alpha''
    std::array<double, 2> local_dissipation(double phi) const;
};

struct MaterialPoint {
    double tensile_strength;
    double fracture_energy;
    double elongation_modulus;
};

// Builds the per-element model for the chosen variant. For AT2 the length is
// `length_scale` as given (callers derive it from the strength when wanted).
PhaseFieldModel make_phase_field_model(ModelVariant variant, SofteningLaw law, double length_scale,
                                       const std::vector<MaterialPoint>& elements);

// Crack driving state of one element from effective stress and elastic
// strain (Voigt, engineering shear). PF-CZM: <s1>^2 / (2 E~). AT2: elastic
// energy density. Stress-based: xi <sum <s_i>^2 / f_t^2 - 1>.
double driving_force(ModelVariant variant, const std::array<double, 3>& stress,
                     const std::array<double, 3>& elastic_strain, const MaterialPoint& mat, double xi);

double principal_stress_major(double sxx, double syy, double sxy);

// Residual and consistent tangent on the space (dofs = space dofs).
void assemble_phasefield(const Mesh& mesh, const ScalarSpace& space, const PhaseFieldModel& model,
                         const std::vector<double>& history, const Vector& phi, PatternAssembler* tangent,
                         Vector& residual);

struct PhaseFieldReport {
    int iterations = 0;
    double residual = 0.0;
    bool skipped = false;
};

class PhaseFieldSolver {
public:
    PhaseFieldSolver(const Mesh& mesh, const ScalarSpace& space, PhaseFieldModel model);

    // Newton with bound projection: phi in [phi_prev, 1]. `phi` holds the
    // initial guess on entry and the solution on exit (space dofs).
    PhaseFieldReport solve(const std::vector<double>& history, const Vector& phi_prev, Vector& phi);

    const PhaseFieldModel& model() const { return model_; }
    int max_iterations = 50;
    double relative_tolerance = 1e-8;

private:
    const Mesh& mesh_;
    const ScalarSpace& space_;
    PhaseFieldModel model_;
    PatternAssembler assembler_;
    LinearSolver solver_;
};

}  // namespace corrode
