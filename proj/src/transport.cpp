#include "corrode/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "corrode/simd/kernels.hpp"

namespace corrode {

ReactionRates reaction_rates(double c_ii, double c_iii, double oxygen, double k_ii_iii, double k_iii_p) {
    ReactionRates r{};
    simd::scalar_kernels().reaction_rates(&c_ii, &c_iii, 1, oxygen, k_ii_iii, k_iii_p, &r.ferrous, &r.ferric,
                                          &r.precipitation);
    return r;
}

double faraday_influx(double current_density, double faraday) {
    constexpr double valence = 2.0;
    return 2.0 * current_density / (valence * faraday);
}

double effective_diffusivity(double liquid_fraction, double phi, double intact, double cracked) {
    double out = 0.0;
    simd::scalar_kernels().effective_diffusivity(&liquid_fraction, &phi, 1, intact, cracked, &out);
    return out;
}

double update_precipitate(double theta_p, double c_iii, double dt, double molar_mass, double density, double rate,
                          double pore_capacity) {
    double out = theta_p;
    simd::scalar_kernels().precipitate_update(&theta_p, &c_iii, &pore_capacity, 1, dt * molar_mass / density * rate,
                                              kClogFloor, &out);
    return out;
}

std::vector<double> nodal_porosity(const Mesh& mesh, const ScalarSpace& space) {
    std::vector<double> p0(space.size(), 0.0);
    for (int t : space.elements) {
        const double share = mesh.area(static_cast<std::size_t>(t)) / 3.0 * mesh.porosity[static_cast<std::size_t>(t)];
        for (int v : mesh.triangles[static_cast<std::size_t>(t)]) p0[static_cast<std::size_t>(space.node_to_dof[v])] += share;
    }
    for (std::size_t i = 0; i < p0.size(); ++i) p0[i] /= space.lumped_area[i];
    return p0;
}

TransportSolver::TransportSolver(const Mesh& mesh, const ScalarSpace& space, const TransportParams& transport,
                                 const RustParams& rust)
    : mesh_(mesh),
      space_(space),
      params_(transport),
      rust_(rust),
      p0_(nodal_porosity(mesh, space)),
      assembler_(space.size(), 3, scalar_element_dofs(space, mesh)) {
    const double flux = faraday_influx(params_.current_density, params_.faraday);
    influx_ = lumped_edge_flux(space_, mesh_, BoundaryTag::RebarSurface, flux);
    influx_rate_ = 0.0;
    for (double f : influx_) influx_rate_ += f;
}

SpeciesState TransportSolver::initial_state() const {
    const std::size_t n = space_.size();
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

std::vector<double> TransportSolver::liquid_fraction(const SpeciesState& state) const {
    std::vector<double> out(p0_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p0_[i] - state.precipitate[i];
    return out;
}

std::vector<double> TransportSolver::saturation(const SpeciesState& state) const {
    std::vector<double> out(state.precipitate.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state.precipitate[i] / params_.bulk_porosity;
    return out;
}

std::vector<double> TransportSolver::element_diffusivity(const std::vector<double>& theta_l,
                                                         const std::vector<double>& phi, double intact,
                                                         double cracked) const {
    const std::size_t n_el = space_.elements.size();
    std::vector<double> theta_q(3 * n_el);
    std::vector<double> phi_q(3 * n_el);
    for (std::size_t e = 0; e < n_el; ++e) {
        const auto& tri = mesh_.triangles[static_cast<std::size_t>(space_.elements[e])];
        std::array<double, 3> th{};
        std::array<double, 3> ph{};
        for (int a = 0; a < 3; ++a) {
            const auto d = static_cast<std::size_t>(space_.node_to_dof[tri[a]]);
            th[a] = std::max(theta_l[d], 0.0);
            ph[a] = phi.empty() ? 0.0 : phi[d];
        }
        for (int q = 0; q < 3; ++q) {
            const auto s = ElementKernel::shape(q);
            theta_q[3 * e + q] = s[0] * th[0] + s[1] * th[1] + s[2] * th[2];
            phi_q[3 * e + q] = s[0] * ph[0] + s[1] * ph[1] + s[2] * ph[2];
        }
    }
    std::vector<double> kappa_q(3 * n_el);
    simd::kernels().effective_diffusivity(theta_q.data(), phi_q.data(), 3 * n_el, intact, cracked, kappa_q.data());
    std::vector<double> kappa(n_el);
    for (std::size_t e = 0; e < n_el; ++e) {
        kappa[e] = (kappa_q[3 * e] + kappa_q[3 * e + 1] + kappa_q[3 * e + 2]) / 3.0;
    }
    return kappa;
}

double TransportSolver::iron_content(const SpeciesState& state) const {
    const double solid = rust_.density / rust_.molar_mass;
    double total = 0.0;
    for (std::size_t i = 0; i < p0_.size(); ++i) {
        const double cap = std::max(p0_[i] - state.precipitate[i], kClogFloor);
        total += space_.lumped_area[i] * (cap * (state.ferrous[i] + state.ferric[i]) + state.precipitate[i] * solid);
    }
    return total;
}

TransportStepReport TransportSolver::step(SpeciesState& state, const std::vector<double>& phi, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("transport step requires dt > 0");
    const std::size_t n = space_.size();
    TransportStepReport report;

    std::vector<double> theta_l = liquid_fraction(state);
    std::vector<double> capacity(n);
    for (std::size_t i = 0; i < n; ++i) capacity[i] = std::max(theta_l[i], kClogFloor);

    // Undamaged coefficients are configured as theta_l D_m at bulk porosity.
    const double intact_ii = params_.scaled_diffusivity_ii / params_.bulk_porosity;
    const double intact_iii = params_.scaled_diffusivity_iii / params_.bulk_porosity;
    const double oxidation = params_.rate_ii_to_iii * params_.oxygen_concentration;

    auto check = [&](const Vector& c, const char* name) {
        const double top = std::max(c.maxCoeff(), 0.0);
        const double low = c.minCoeff();
        if (low < -1e-10 * top && low < -1e-300) {
            throw SolverError(std::string("negative ") + name + " concentration " + std::to_string(low) +
                              "; reduce the time step");
        }
        report.min_concentration = std::min(report.min_concentration, low);
    };

    std::vector<double> previous(n);
    std::vector<double> sink(n);
    Vector rhs;

    // Fe2+ with implicit oxidation sink and Faraday influx.
    std::vector<double> kappa = element_diffusivity(theta_l, phi, intact_ii, params_.cracked_diffusivity_ii);
    for (std::size_t i = 0; i < n; ++i) {
        previous[i] = capacity[i] * state.ferrous[i];
        sink[i] = capacity[i] * oxidation;
    }
    DiffusionReactionInput in;
    in.kappa = &kappa;
    in.capacity = &capacity;
    in.sink = &sink;
    in.previous = &previous;
    in.boundary_flux = &influx_;
    in.dt = dt;
    assemble_scalar_diffusion_reaction(space_, mesh_, in, assembler_, rhs);
    const Vector ferrous = solver_.solve(assembler_.matrix(), rhs);
    check(ferrous, "Fe(II)");
    report.injected = influx_rate_ * dt;

    // Fe3+ with implicit precipitation sink and the oxidation source.
    kappa = element_diffusivity(theta_l, phi, intact_iii, params_.cracked_diffusivity_iii);
    std::vector<double> source(n);
    for (std::size_t i = 0; i < n; ++i) {
        previous[i] = capacity[i] * state.ferric[i];
        sink[i] = capacity[i] * params_.rate_iii_to_p;
        source[i] = capacity[i] * oxidation * std::max(ferrous[static_cast<Eigen::Index>(i)], 0.0);
    }
    in.kappa = &kappa;
    in.sink = &sink;
    in.source = &source;
    in.boundary_flux = nullptr;
    assemble_scalar_diffusion_reaction(space_, mesh_, in, assembler_, rhs);
    const Vector ferric = solver_.solve(assembler_.matrix(), rhs);
    check(ferric, "Fe(III)");

    // Precipitation from the new Fe3+; whatever the implicit sink removed
    // beyond the precipitated amount goes back into solution.
    std::vector<double> c3(n);
    for (std::size_t i = 0; i < n; ++i) c3[i] = std::max(ferric[static_cast<Eigen::Index>(i)], 0.0);
    std::vector<double> next(n);
    const double coef = dt * rust_.molar_mass / rust_.density * params_.rate_iii_to_p;
    simd::kernels().precipitate_update(state.precipitate.data(), c3.data(), p0_.data(), n, coef, kClogFloor,
                                       next.data());
    const double solid = rust_.density / rust_.molar_mass;
    for (std::size_t i = 0; i < n; ++i) {
        const double removed = dt * capacity[i] * params_.rate_iii_to_p * c3[i];
        const double deposited = (next[i] - state.precipitate[i]) * solid;
        c3[i] += std::max(removed - deposited, 0.0) / capacity[i];
    }

    // Dissolved moles are kept while the liquid volume shrinks.
    for (std::size_t i = 0; i < n; ++i) {
        const double cap_next = std::max(p0_[i] - next[i], kClogFloor);
        const double ratio = capacity[i] / cap_next;
        state.ferrous[i] = std::max(ferrous[static_cast<Eigen::Index>(i)], 0.0) * ratio;
        state.ferric[i] = c3[i] * ratio;
    }
    state.precipitate = std::move(next);
    return report;
}

}  // namespace corrode
