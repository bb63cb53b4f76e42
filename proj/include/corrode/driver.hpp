#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "corrode/config.hpp"
#include "corrode/mechanics.hpp"
#include "corrode/mesh.hpp"
#include "corrode/phasefield.hpp"
#include "corrode/post.hpp"
#include "corrode/transport.hpp"

namespace corrode {

struct StepDiagnostics {
    int phase_field_iterations = 0;
    double phase_field_residual = 0.0;
    int staggered_passes = 0;
    int halvings = 0;
    double min_concentration = 0.0;
};

struct SimulationState {
    double time = 0.0;
    long step = 0;
    SpeciesState species;
    MechanicalState mechanics;
    std::vector<double> phi;      // per porous dof
    std::vector<double> history;  // per porous element
    double injected = 0.0;        // cumulative Fe influx, mol per m thickness
    StepDiagnostics diagnostics;
};

// Owns the mesh and all sub-solvers of one coupled simulation. Not copyable:
// the solvers keep references to the mesh.
class Simulation {
public:
    explicit Simulation(const SimulationConfig& config);
    Simulation(const SimulationConfig& config, Mesh mesh);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    SimulationState initial_state() const;

    // Staggered step of length dt; failed sub-solves are retried with two
    // half steps, at most time.max_halvings levels deep.
    void advance(SimulationState& state, double dt);

    const SimulationConfig& config() const { return config_; }
    const Mesh& mesh() const { return mesh_; }
    const ScalarSpace& space() const { return space_; }
    const TransportSolver& transport() const { return *transport_; }
    const PhaseFieldModel& phase_field_model() const { return phase_field_->model(); }

    // Expands a porous-dof field to all nodes (zero on steel-only nodes).
    std::vector<double> to_nodes(const std::vector<double>& dof_values) const;
    std::vector<double> nodal_eigenstrain(const SimulationState& state) const;
    std::vector<double> major_principal_stress(const SimulationState& state) const;
    double degradation(double phi, int triangle) const;

    double crack_width(const SimulationState& state) const;
    double mass_drift(const SimulationState& state) const;
    double precipitate_volume(const SimulationState& state) const;
    TimeRecord record(const SimulationState& state) const;
    Snapshot snapshot(const SimulationState& state) const;

private:
    void staggered_step(SimulationState& state, double dt);
    void advance_level(SimulationState& state, double dt, int depth);
    void eigenstrain_fields(const SimulationState& state, std::vector<double>& mean_strain) const;

    SimulationConfig config_;
    Mesh mesh_;
    ScalarSpace space_;
    std::vector<int> space_slot_;  // triangle -> porous element index or -1
    std::vector<MaterialPoint> materials_;
    std::vector<double> inv_two_modulus_;
    std::vector<double> threshold_;
    EigenstrainModel eigen_;
    Constraints constraints_;
    std::unique_ptr<TransportSolver> transport_;
    std::unique_ptr<MechanicsSolver> mechanics_;
    std::unique_ptr<PhaseFieldSolver> phase_field_;
};

// Per-element strength and toughness with optional uniform scatter.
std::vector<MaterialPoint> material_points(const ConcreteParams& concrete, std::size_t count);

using StepObserver = std::function<void(const Simulation&, const SimulationState&)>;

struct RunOptions {
    bool write_files = true;
    std::string directory;  // empty: <output.directory>/<name>
    bool progress = true;
    StepObserver observer;  // called after every completed step and at t = 0
};

struct RunOutput {
    std::vector<TimeRecord> series;
    std::string directory;
    std::string abort_reason;  // empty when the run completed
    bool completed = false;
    long steps = 0;
    double wall_seconds = 0.0;
};

RunOutput run(const SimulationConfig& config, const RunOptions& options = {});
RunOutput run(Simulation& sim, const RunOptions& options = {});

// Width at a given time by linear interpolation of a time series.
double width_at(const std::vector<TimeRecord>& series, double time);

std::string config_hash(const SimulationConfig& config);

// ---------------------------------------------------------------------------
// Elongated bar under displacement control with a weakened central band.

struct BarOptions {
    ModelVariant variant = ModelVariant::PFCZM;
    SofteningLaw softening = SofteningLaw::Cornelissen;
    ConcreteParams concrete;
    double length = 0.1;
    double height = 0.01;
    double element_size = 1e-3;
    double length_scale = 3e-3;
    double at2_length = 0.0;   // 0: derived from the strength relation
    double xi = 1.0;
    double weak_factor = 0.98;
    double max_strain = 10.0;  // in units of f_t,min / E
    int increments = 400;
    int max_staggered = 500;
    double staggered_tolerance = 1e-6;
};

struct BarPoint {
    double strain = 0.0;  // end strain / (f_t,min / E)
    double stress = 0.0;  // reaction stress / f_t,min
    int staggered_passes = 0;
};

struct BarResult {
    std::vector<BarPoint> curve;
    double reference_strength = 0.0;  // f_t,min
    double length_scale = 0.0;
    std::vector<double> phi;             // final nodal damage
    double min_phi_increment = 0.0;      // over all increments and nodes
    double min_phi = 0.0;
    double max_phi = 0.0;
    Mesh mesh;
};

BarResult run_bar_benchmark(const BarOptions& options);

}  // namespace corrode
