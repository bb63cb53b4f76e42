#include "corrode/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "corrode/simd/kernels.hpp"

namespace corrode {

namespace {

constexpr double kResidualStiffness = 1e-6;

ConcreteParams checked(const SimulationConfig& config) {
    validate(config);
    return config.concrete;
}

}  // namespace

std::vector<MaterialPoint> material_points(const ConcreteParams& concrete, std::size_t count) {
    const double e_tilde = derive_lame_and_moduli(concrete.young_modulus, concrete.poisson_ratio).elongation;
    std::vector<MaterialPoint> out(count, {concrete.tensile_strength, concrete.fracture_energy, e_tilde});
    if (concrete.heterogeneity > 0.0) {
        std::mt19937_64 rng(concrete.seed);
        auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
        for (MaterialPoint& m : out) {
            m.tensile_strength *= 1.0 + concrete.heterogeneity * uniform();
            m.fracture_energy *= 1.0 + concrete.heterogeneity * uniform();
        }
    }
    return out;
}

Simulation::Simulation(const SimulationConfig& config) : Simulation(config, build_mesh(config)) {}

Simulation::Simulation(const SimulationConfig& config, Mesh mesh)
    : config_(config),
      mesh_(std::move(mesh)),
      space_(make_scalar_space(mesh_, is_porous)),
      eigen_(checked(config), config.rust, config.iron) {
    if (mesh_.porosity.size() != mesh_.triangles.size()) {
        assign_porosity(mesh_, config_.transport.bulk_porosity, config_.transport.sci_porosity);
    }
    space_slot_.assign(mesh_.triangles.size(), -1);
    for (std::size_t e = 0; e < space_.elements.size(); ++e) space_slot_[static_cast<std::size_t>(space_.elements[e])] = static_cast<int>(e);

    materials_ = material_points(config_.concrete, space_.elements.size());
    inv_two_modulus_.resize(materials_.size());
    threshold_.resize(materials_.size());
    for (std::size_t e = 0; e < materials_.size(); ++e) {
        inv_two_modulus_[e] = 1.0 / (2.0 * materials_[e].elongation_modulus);
        threshold_[e] = materials_[e].tensile_strength * materials_[e].tensile_strength * inv_two_modulus_[e];
    }
    const auto& constraints =
        config_.geometry.constraints.empty() ? default_constraints() : config_.geometry.constraints;
    constraints_ = constraint_dofs(mesh_, constraints);

    transport_ = std::make_unique<TransportSolver>(mesh_, space_, config_.transport, config_.rust);
    mechanics_ = std::make_unique<MechanicsSolver>(mesh_, config_.concrete, config_.steel);
    PhaseFieldModel model = make_phase_field_model(ModelVariant::PFCZM, config_.phase_field.softening,
                                                   config_.phase_field.length_scale, materials_);
    phase_field_ = std::make_unique<PhaseFieldSolver>(mesh_, space_, std::move(model));
}

Simulation::~Simulation() = default;

SimulationState Simulation::initial_state() const {
    SimulationState s;
    s.species = transport_->initial_state();
    s.mechanics = mechanics_->initial_state();
    s.phi.assign(space_.size(), 0.0);
    s.history = threshold_;
    return s;
}

void Simulation::eigenstrain_fields(const SimulationState& state, std::vector<double>& strain_q) const {
    const std::size_t n_el = space_.elements.size();
    strain_q.resize(3 * n_el);
    const double bulk = config_.transport.bulk_porosity;
    for (std::size_t e = 0; e < n_el; ++e) {
        const auto& tri = mesh_.triangles[static_cast<std::size_t>(space_.elements[e])];
        std::array<double, 3> th{};
        for (int a = 0; a < 3; ++a) th[a] = state.species.precipitate[static_cast<std::size_t>(space_.node_to_dof[tri[a]])];
        for (int q = 0; q < 3; ++q) {
            const auto s = ElementKernel::shape(q);
            const double theta = s[0] * th[0] + s[1] * th[1] + s[2] * th[2];
            strain_q[3 * e + q] = eigen_.coefficient(theta) * theta / bulk;
        }
    }
}

void Simulation::staggered_step(SimulationState& state, double dt) {
    const TransportStepReport tr = transport_->step(state.species, state.phi, dt);
    state.injected += tr.injected;

    std::vector<double> strain_q;
    eigenstrain_fields(state, strain_q);

    const std::size_t n_tri = mesh_.triangles.size();
    const std::size_t n_el = space_.elements.size();
    std::vector<double> stiffness(n_tri, 1.0);
    std::vector<double> load(n_tri, 0.0);
    std::vector<double> mean_strain(n_tri, 0.0);
    for (std::size_t e = 0; e < n_el; ++e) {
        mean_strain[static_cast<std::size_t>(space_.elements[e])] =
            (strain_q[3 * e] + strain_q[3 * e + 1] + strain_q[3 * e + 2]) / 3.0;
    }

    const std::vector<double> phi_start = state.phi;
    const std::vector<double> history_start = state.history;
    Vector phi_prev = Eigen::Map<const Vector>(phi_start.data(), static_cast<Eigen::Index>(phi_start.size()));
    Vector phi = phi_prev;
    std::vector<double> phi_q(3 * n_el);
    std::vector<double> g_q;
    const PhaseFieldModel& model = phase_field_->model();
    const int passes = std::max(1, config_.time.staggered_iterations);
    StepDiagnostics diag;
    diag.min_concentration = tr.min_concentration;
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t e = 0; e < n_el; ++e) {
            const auto& tri = mesh_.triangles[static_cast<std::size_t>(space_.elements[e])];
            std::array<double, 3> ph{};
            for (int a = 0; a < 3; ++a) ph[a] = phi[space_.node_to_dof[tri[a]]];
            for (int q = 0; q < 3; ++q) {
                const auto s = ElementKernel::shape(q);
                phi_q[3 * e + q] = s[0] * ph[0] + s[1] * ph[1] + s[2] * ph[2];
            }
        }
        model.quadrature_degradation(phi_q, g_q);
        for (std::size_t e = 0; e < n_el; ++e) {
            const auto t = static_cast<std::size_t>(space_.elements[e]);
            stiffness[t] = (g_q[3 * e] + g_q[3 * e + 1] + g_q[3 * e + 2]) / 3.0 + kResidualStiffness;
            load[t] = (g_q[3 * e] * strain_q[3 * e] + g_q[3 * e + 1] * strain_q[3 * e + 1] +
                       g_q[3 * e + 2] * strain_q[3 * e + 2]) /
                      3.0;
        }
        mechanics_->solve(state.mechanics, stiffness, load, mean_strain, constraints_);

        state.history = history_start;
        update_history(state.mechanics, space_.elements, inv_two_modulus_, threshold_, state.history);

        Vector next = phi;
        const PhaseFieldReport report = phase_field_->solve(state.history, phi_prev, next);
        diag.phase_field_iterations += report.iterations;
        diag.phase_field_residual = report.residual;
        diag.staggered_passes = pass + 1;
        const double change = phi.size() ? (next - phi).cwiseAbs().maxCoeff() : 0.0;
        phi = next;
        if (change <= config_.time.staggered_tolerance) break;
    }
    state.phi.assign(phi.data(), phi.data() + phi.size());
    state.time += dt;
    diag.halvings = state.diagnostics.halvings;
    state.diagnostics = diag;
}

void Simulation::advance_level(SimulationState& state, double dt, int depth) {
    SimulationState backup = state;
    try {
        staggered_step(state, dt);
    } catch (const SolverError&) {
        if (depth >= config_.time.max_halvings) throw;
        state = std::move(backup);
        advance_level(state, 0.5 * dt, depth + 1);
        advance_level(state, 0.5 * dt, depth + 1);
        state.diagnostics.halvings = std::max(state.diagnostics.halvings, depth + 1);
    }
}

void Simulation::advance(SimulationState& state, double dt) {
    state.diagnostics.halvings = 0;
    advance_level(state, dt, 0);
    ++state.step;
}

std::vector<double> Simulation::to_nodes(const std::vector<double>& values) const {
    std::vector<double> out(mesh_.nodes.size(), 0.0);
    for (std::size_t d = 0; d < space_.size(); ++d) out[static_cast<std::size_t>(space_.dof_to_node[d])] = values[d];
    return out;
}

std::vector<double> Simulation::nodal_eigenstrain(const SimulationState& state) const {
    std::vector<double> per_dof(space_.size());
    const double bulk = config_.transport.bulk_porosity;
    for (std::size_t d = 0; d < per_dof.size(); ++d) {
        const double theta = state.species.precipitate[d];
        per_dof[d] = eigen_.coefficient(theta) * theta / bulk;
    }
    return to_nodes(per_dof);
}

std::vector<double> Simulation::major_principal_stress(const SimulationState& state) const {
    std::vector<double> out(mesh_.triangles.size(), 0.0);
    for (std::size_t t = 0; t < out.size() && t < state.mechanics.stress.size(); ++t) {
        const auto& s = state.mechanics.stress[t];
        out[t] = principal_stress_major(s[0], s[1], s[2]);
    }
    return out;
}

double Simulation::degradation(double phi, int triangle) const {
    const int slot = space_slot_[static_cast<std::size_t>(triangle)];
    if (slot < 0) return 1.0;
    return phase_field_->model().local_degradation(phi, static_cast<std::size_t>(slot)).g;
}

double Simulation::crack_width(const SimulationState& state) const {
    return corrode::crack_width(mesh_, state.mechanics.strain, to_nodes(state.phi), nodal_eigenstrain(state),
                                [this](double phi, int tri) { return degradation(phi, tri); });
}

double Simulation::mass_drift(const SimulationState& state) const {
    const double content = transport_->iron_content(state.species);
    if (state.injected <= 0.0) return content == 0.0 ? 0.0 : 1.0;
    return (content - state.injected) / state.injected;
}

double Simulation::precipitate_volume(const SimulationState& state) const {
    double v = 0.0;
    for (std::size_t d = 0; d < space_.size(); ++d) v += space_.lumped_area[d] * state.species.precipitate[d];
    return v;
}

TimeRecord Simulation::record(const SimulationState& state) const {
    TimeRecord r;
    r.time = state.time;
    r.width = mesh_.boundary_edges.empty() ? 0.0 : crack_width(state);
    r.relative_width = r.width / config_.output.width_normalizer;
    r.precipitate_volume = precipitate_volume(state);
    r.mass_drift = mass_drift(state);
    r.max_phi = state.phi.empty() ? 0.0 : *std::max_element(state.phi.begin(), state.phi.end());
    r.phase_field_iterations = state.diagnostics.phase_field_iterations;
    return r;
}

Snapshot Simulation::snapshot(const SimulationState& state) const {
    Snapshot snap;
    snap.time = state.time;
    snap.fields.push_back({"c_II", 1, to_nodes(state.species.ferrous)});
    snap.fields.push_back({"c_III", 1, to_nodes(state.species.ferric)});
    snap.fields.push_back({"theta_p", 1, to_nodes(state.species.precipitate)});
    snap.fields.push_back({"S_p", 1, to_nodes(transport_->saturation(state.species))});
    snap.fields.push_back({"phi", 1, to_nodes(state.phi)});
    const Vector& u = state.mechanics.displacement;
    snap.fields.push_back({"u", 2, std::vector<double>(u.data(), u.data() + u.size())});
    snap.fields.push_back({"sigma1", 1, element_to_nodal(mesh_, major_principal_stress(state))});
    return snap;
}

std::string config_hash(const SimulationConfig& config) {
    const std::string text = write_config(config);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double width_at(const std::vector<TimeRecord>& series, double time) {
    if (series.empty()) return 0.0;
    if (time <= series.front().time) return series.front().width;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].time >= time) {
            const TimeRecord& a = series[i - 1];
            const TimeRecord& b = series[i];
            const double s = (time - a.time) / (b.time - a.time);
            return a.width + s * (b.width - a.width);
        }
    }
    return series.back().width;
}

RunOutput run(const SimulationConfig& config, const RunOptions& options) {
    Simulation sim(config);
    return run(sim, options);
}

RunOutput run(Simulation& sim, const RunOptions& options) {
    namespace fs = std::filesystem;
    const SimulationConfig& cfg = sim.config();
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    out.directory = options.directory.empty() ? (fs::path(cfg.output.directory) / cfg.name).string() : options.directory;
    const bool snapshots = options.write_files && cfg.output.snapshots;
    if (options.write_files) fs::create_directories(out.directory);
    if (snapshots) fs::create_directories(fs::path(out.directory) / "snapshots");

    int snap_index = 0;
    auto emit_snapshot = [&](const SimulationState& s) {
        if (!snapshots) return;
        char name[32];
        std::snprintf(name, sizeof name, "snap_%04d.vtk", snap_index++);
        write_vtk(sim.mesh(), sim.snapshot(s), (fs::path(out.directory) / "snapshots" / name).string());
    };

    SimulationState state = sim.initial_state();
    out.series.push_back(sim.record(state));
    if (options.observer) options.observer(sim, state);
    emit_snapshot(state);

    const double duration = cfg.time.duration;
    const double dt = cfg.time.step;
    const long n_steps = duration > 0.0 ? static_cast<long>(std::ceil(duration / dt - 1e-9)) : 0;
    const double interval = cfg.time.output_interval > 0.0 ? cfg.time.output_interval : duration;
    for (long k = 1; k <= n_steps; ++k) {
        const double previous = state.time;
        const double target = std::min(static_cast<double>(k) * dt, duration);
        try {
            sim.advance(state, target - previous);
        } catch (const std::exception& e) {
            out.abort_reason = e.what();
            break;
        }
        state.time = target;
        out.steps = k;
        const TimeRecord rec = sim.record(state);
        out.series.push_back(rec);
        if (options.observer) options.observer(sim, state);
        const double eps = 1e-6 * dt;
        const bool crossed =
            interval > 0.0 && std::floor((target + eps) / interval) > std::floor((previous + eps) / interval);
        if (crossed || k == n_steps) emit_snapshot(state);
        if (options.progress && cfg.output.progress_every > 0 &&
            (k % cfg.output.progress_every == 0 || k == n_steps)) {
            std::printf("run=%s step=%ld time_d=%.4f max_phi=%.6f width_mm=%.6f drift=%.3e pf_iter=%d halvings=%d\n",
                        cfg.name.c_str(), k, target / 86400.0, rec.max_phi, rec.width * 1e3, rec.mass_drift,
                        rec.phase_field_iterations, state.diagnostics.halvings);
            std::fflush(stdout);
        }
    }
    out.completed = out.abort_reason.empty();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (options.write_files) {
        write_csv(out.series, (fs::path(out.directory) / "timeseries.csv").string());
        std::ofstream meta(fs::path(out.directory) / "meta.txt");
        meta << "name=" << cfg.name << "\n"
             << "config_hash=" << config_hash(cfg) << "\n"
             << "seed=" << cfg.concrete.seed << "\n"
             << "version=" << CORRODE_VERSION << "\n"
             << "kernels=" << (simd::active_isa() == simd::Isa::Avx2 ? "avx2" : "scalar") << "\n"
             << "nodes=" << sim.mesh().nodes.size() << "\n"
             << "triangles=" << sim.mesh().triangles.size() << "\n"
             << "steps=" << out.steps << "\n"
             << "wall_seconds=" << out.wall_seconds << "\n"
             << "status=" << (out.completed ? "completed" : "aborted") << "\n";
        if (!out.completed) meta << "abort_reason=" << out.abort_reason << "\n";
        std::ofstream(fs::path(out.directory) / "config.yaml") << write_config(cfg);
    }
    return out;
}

// ---------------------------------------------------------------------------

BarResult run_bar_benchmark(const BarOptions& opt) {
    BarResult result;
    result.mesh = generate_bar_mesh(opt.length, opt.height, opt.element_size);
    Mesh& mesh = result.mesh;
    mesh.porosity.assign(mesh.triangles.size(), 0.0);
    const ConcreteParams& c = opt.concrete;
    const double e_tilde = derive_lame_and_moduli(c.young_modulus, c.poisson_ratio).elongation;

    double ell = opt.length_scale;
    if (opt.variant == ModelVariant::AT2) {
        ell = opt.at2_length > 0.0 ? opt.at2_length
                                   : at2_length_from_strength(c.tensile_strength, c.young_modulus, c.fracture_energy);
        result.reference_strength = at2_strength_from_length(ell, c.young_modulus, opt.weak_factor * c.fracture_energy);
    } else {
        result.reference_strength = opt.weak_factor * c.tensile_strength;
    }
    result.length_scale = ell;

    const ScalarSpace space = make_scalar_space(mesh, [](Region) { return true; });
    std::vector<MaterialPoint> mats(space.elements.size(), {c.tensile_strength, c.fracture_energy, e_tilde});
    for (std::size_t e = 0; e < mats.size(); ++e) {
        if (!mesh.weak_band[static_cast<std::size_t>(space.elements[e])]) continue;
        if (opt.variant == ModelVariant::AT2) {
            mats[e].fracture_energy *= opt.weak_factor;
        } else {
            mats[e].tensile_strength *= opt.weak_factor;
        }
    }
    PhaseFieldSolver pf(mesh, space, make_phase_field_model(opt.variant, opt.softening, ell, mats));
    const PhaseFieldModel& model = pf.model();
    MechanicsSolver mech(mesh, c, SteelParams{});

    std::vector<double> inv_two(mats.size()), threshold(mats.size());
    for (std::size_t e = 0; e < mats.size(); ++e) {
        inv_two[e] = 1.0 / (2.0 * mats[e].elongation_modulus);
        threshold[e] = model.elements[e].threshold;
    }

    const std::vector<int> left = nodes_on_site(mesh, BoundarySite::Left);
    const std::vector<int> right = nodes_on_site(mesh, BoundarySite::Right);
    const int corner = nodes_on_site(mesh, BoundarySite::BottomLeft).front();

    const std::size_t n_tri = mesh.triangles.size();
    MechanicalState state = mech.initial_state();
    std::vector<double> history = threshold;
    Vector phi = Vector::Zero(static_cast<Eigen::Index>(space.size()));
    std::vector<double> stiffness(n_tri, 1.0), zeros(n_tri, 0.0), phi_q(3 * n_tri), g_q;
    const double strain_unit = result.reference_strength / c.young_modulus;
    result.min_phi_increment = 0.0;

    result.curve.push_back({0.0, 0.0, 0});
    for (int k = 1; k <= opt.increments; ++k) {
        const double strain = opt.max_strain * k / opt.increments;
        const double u_end = strain * strain_unit * opt.length;
        Constraints bc;
        for (int v : left) bc.emplace_back(2 * v, 0.0);
        bc.emplace_back(2 * corner + 1, 0.0);
        for (int v : right) bc.emplace_back(2 * v, u_end);

        const Vector phi_prev = phi;
        const std::vector<double> history_prev = history;
        int pass = 0;
        for (; pass < opt.max_staggered; ++pass) {
            for (std::size_t e = 0; e < space.elements.size(); ++e) {
                const auto& tri = mesh.triangles[static_cast<std::size_t>(space.elements[e])];
                for (int q = 0; q < 3; ++q) {
                    const auto s = ElementKernel::shape(q);
                    phi_q[3 * e + q] = s[0] * phi[space.node_to_dof[tri[0]]] + s[1] * phi[space.node_to_dof[tri[1]]] +
                                       s[2] * phi[space.node_to_dof[tri[2]]];
                }
            }
            model.quadrature_degradation(phi_q, g_q);
            for (std::size_t e = 0; e < space.elements.size(); ++e) {
                stiffness[static_cast<std::size_t>(space.elements[e])] =
                    (g_q[3 * e] + g_q[3 * e + 1] + g_q[3 * e + 2]) / 3.0 + kResidualStiffness;
            }
            mech.solve(state, stiffness, zeros, zeros, bc);

            history = history_prev;
            if (opt.variant == ModelVariant::PFCZM) {
                update_history(state, space.elements, inv_two, threshold, history);
            } else {
                for (std::size_t e = 0; e < space.elements.size(); ++e) {
                    const auto t = static_cast<std::size_t>(space.elements[e]);
                    history[e] = std::max(history[e], driving_force(opt.variant, state.stress[t], state.strain[t],
                                                                    mats[e], opt.xi));
                }
            }
            Vector next = phi;
            pf.solve(history, phi_prev, next);
            const double change = (next - phi).cwiseAbs().maxCoeff();
            phi = next;
            if (change <= opt.staggered_tolerance) break;
        }
        // Reaction from the equilibrium state at the converged damage.
        for (std::size_t e = 0; e < space.elements.size(); ++e) {
            const auto& tri = mesh.triangles[static_cast<std::size_t>(space.elements[e])];
            for (int q = 0; q < 3; ++q) {
                const auto s = ElementKernel::shape(q);
                phi_q[3 * e + q] = s[0] * phi[space.node_to_dof[tri[0]]] + s[1] * phi[space.node_to_dof[tri[1]]] +
                                   s[2] * phi[space.node_to_dof[tri[2]]];
            }
        }
        model.quadrature_degradation(phi_q, g_q);
        for (std::size_t e = 0; e < space.elements.size(); ++e) {
            stiffness[static_cast<std::size_t>(space.elements[e])] =
                (g_q[3 * e] + g_q[3 * e + 1] + g_q[3 * e + 2]) / 3.0 + kResidualStiffness;
        }
        mech.solve(state, stiffness, zeros, zeros, bc);
        const Vector force = mech.internal_force(state.displacement);
        double reaction = 0.0;
        for (int v : right) reaction += force[2 * v];

        result.min_phi_increment = std::min(result.min_phi_increment, (phi - phi_prev).minCoeff());
        result.curve.push_back({strain, reaction / opt.height / result.reference_strength, pass + 1});
    }
    result.min_phi = phi.minCoeff();
    result.max_phi = phi.maxCoeff();
    result.phi.assign(mesh.nodes.size(), 0.0);
    for (std::size_t d = 0; d < space.size(); ++d) result.phi[static_cast<std::size_t>(space.dof_to_node[d])] = phi[static_cast<Eigen::Index>(d)];
    return result;
}

}  // namespace corrode
