#pragma once

#include <vector>

#include "corrode/config.hpp"
#include "corrode/fem.hpp"
#include "corrode/mesh.hpp"

namespace corrode {

// Nodal fields on the porous space (concrete and SCI dofs).
struct SpeciesState {
    std::vector<double> ferrous;     // c_II [mol/m3 of pore solution]
    std::vector<double> ferric;      // c_III
    std::vector<double> precipitate; // theta_p, volume fraction
};

struct ReactionRates {
    double ferrous;
    double ferric;
    double precipitation;
};

ReactionRates reaction_rates(double c_ii, double c_iii, double oxygen, double k_ii_iii, double k_iii_p);

// Fe2+ release flux for an anodic current density: 2 i_a / (z F) with z = 2.
double faraday_influx(double current_density, double faraday);

// theta_l (1 - phi) D_m + phi D_c
double effective_diffusivity(double liquid_fraction, double phi, double intact, double cracked);

// Backward-Euler closed form of d theta_p/dt = (M_p / rho_p) theta_l k c_III with
// theta_l = p0 - theta_p, clamped to [theta_p, p0].
double update_precipitate(double theta_p, double c_iii, double dt, double molar_mass, double density, double rate,
                          double pore_capacity);

// Liquid fractions below this value are treated as clogged.
inline constexpr double kClogFloor = 1e-6;

struct TransportStepReport {
    double injected = 0.0;       // mol per unit thickness added this step
    double min_concentration = 0.0;
};

class TransportSolver {
public:
    TransportSolver(const Mesh& mesh, const ScalarSpace& space, const TransportParams& transport,
                    const RustParams& rust);

    SpeciesState initial_state() const;

    // One split step; `phi` is nodal damage on the same space.
    TransportStepReport step(SpeciesState& state, const std::vector<double>& phi, double dt);

    // Fe in moles per unit thickness: dissolved plus precipitated.
    double iron_content(const SpeciesState& state) const;
    // Integrated Fe2+ influx per unit thickness and second.
    double influx_rate() const { return influx_rate_; }

    const std::vector<double>& pore_capacity() const { return p0_; }
    double bulk_porosity() const { return params_.bulk_porosity; }
    std::vector<double> liquid_fraction(const SpeciesState& state) const;
    std::vector<double> saturation(const SpeciesState& state) const;
    // Element-mean diffusion coefficients on the space elements.
    std::vector<double> element_diffusivity(const std::vector<double>& theta_l, const std::vector<double>& phi,
                                            double intact, double cracked) const;

private:
    const Mesh& mesh_;
    const ScalarSpace& space_;
    TransportParams params_;
    RustParams rust_;
    std::vector<double> p0_;
    std::vector<double> influx_;
    double influx_rate_ = 0.0;
    PatternAssembler assembler_;
    LinearSolver solver_;
};

// Lumped nodal pore capacity: area-weighted average of adjacent element porosities.
std::vector<double> nodal_porosity(const Mesh& mesh, const ScalarSpace& space);

}  // namespace corrode
