#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrode {

// Raised for malformed files, unknown keys and invariant violations. The
// field is the dotted key path ("concrete.poisson_ratio"); line is 1-based
// or 0 when no source position is known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, int line, const std::string& message);
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

enum class SofteningLaw { Cornelissen, Linear };
enum class ModelVariant { PFCZM, AT2, StressBased };

struct ConcreteParams {
    double young_modulus = 36e9;
    double poisson_ratio = 0.2;
    double tensile_strength = 3.9e6;
    double fracture_energy = 114.0;
    double heterogeneity = 0.0;  // relative uniform amplitude on f_t and G_f
    std::uint64_t seed = 1;
};

struct RustParams {
    double young_modulus = 440e6;
    double poisson_ratio = 0.4;
    double porosity = 0.16;
    double molar_mass = 0.10685;
    double density = 3560.0;
};

struct IronParams {
    double molar_mass = 0.05585;
    double density = 7870.0;
};

struct SteelParams {
    double young_modulus = 205e9;
    double poisson_ratio = 0.28;
};

struct TransportParams {
    double bulk_porosity = 0.26;
    double sci_porosity = 0.52;
    double sci_thickness = 0.2e-3;
    // Configured as the product of liquid fraction and molecular diffusivity.
    double scaled_diffusivity_ii = 1e-11;
    double scaled_diffusivity_iii = 1e-11;
    double cracked_diffusivity_ii = 7e-10;
    double cracked_diffusivity_iii = 7e-10;
    double rate_ii_to_iii = 0.1;
    double rate_iii_to_p = 2e-4;
    double oxygen_concentration = 0.28;
    double current_density = 0.1;
    double faraday = 96485.33212;
};

struct PhaseFieldParams {
    double length_scale = 3e-3;
    SofteningLaw softening = SofteningLaw::Cornelissen;
    ModelVariant variant = ModelVariant::PFCZM;
    double stress_based_xi = 1.0;
    // AT2 length for the bar benchmark; 0 means "derive from f_t, E, G_f".
    double at2_length = 0.0;
};

struct Rebar {
    double x = 0.0;
    double y = 0.0;
    double diameter = 0.0;
};

enum class BoundarySite { Bottom, Top, Left, Right, BottomLeft, BottomRight, TopLeft, TopRight };

struct DisplacementConstraint {
    BoundarySite site = BoundarySite::Bottom;
    bool fix_x = false;
    bool fix_y = false;
};

struct GeometrySpec {
    double width = 0.1;
    double height = 0.1;
    std::vector<Rebar> rebars;
    std::vector<DisplacementConstraint> constraints;
};

struct MeshOptions {
    double sci_size = 0.2e-3;
    double bulk_size = 0.6e-3;
    double max_size = 5e-3;
    // Fine bulk size is kept within this distance of any rebar surface;
    // 0 means "up to the nearest outer boundary plus 5 mm".
    double refine_distance = 0.0;
    std::string file;  // optional MSH v2 file; overrides generation
};

struct TimeControl {
    double duration = 60.0 * 86400.0;
    double step = 0.1 * 86400.0;
    int staggered_iterations = 1;
    double staggered_tolerance = 1e-4;
    double output_interval = 5.0 * 86400.0;
    int max_halvings = 5;
};

struct OutputOptions {
    std::string directory = "out";
    double width_normalizer = 0.25e-3;
    bool snapshots = true;
    int progress_every = 10;  // steps between progress lines, 0 = silent
};

struct SimulationConfig {
    std::string name = "run";
    ConcreteParams concrete;
    RustParams rust;
    IronParams iron;
    SteelParams steel;
    TransportParams transport;
    PhaseFieldParams phase_field;
    GeometrySpec geometry;
    MeshOptions mesh;
    TimeControl time;
    OutputOptions output;
};

struct ElasticModuli {
    double lambda;
    double mu;
    double bulk;
    double elongation;  // lambda + 2 mu
};

ElasticModuli derive_lame_and_moduli(double young_modulus, double poisson_ratio);

// Measured concrete tables for the two curing ages ("28d", "147d").
ConcreteParams concrete_preset(const std::string& age);

// Overrides are "section.key=value" strings applied on top of the file.
SimulationConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
SimulationConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
std::string write_config(const SimulationConfig& config);
void validate(const SimulationConfig& config);

// Default constraint set: bottom edge on rollers, bottom-left corner pinned.
std::vector<DisplacementConstraint> default_constraints();

std::string to_string(ModelVariant v);
std::string to_string(SofteningLaw s);
ModelVariant parse_variant(const std::string& text);

}  // namespace corrode
