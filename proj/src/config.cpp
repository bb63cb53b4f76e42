#include "corrode/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "corrode/units.hpp"

namespace corrode {

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

ElasticModuli derive_lame_and_moduli(double young_modulus, double poisson_ratio) {
    if (!(young_modulus > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
    if (!(poisson_ratio >= 0.0) || poisson_ratio >= 0.5) {
        throw std::invalid_argument("Poisson ratio must lie in [0, 0.5); 0.5 is incompressible and singular");
    }
    const double e = young_modulus;
    const double nu = poisson_ratio;
    ElasticModuli m{};
    m.lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    m.mu = e / (2.0 * (1.0 + nu));
    m.bulk = e / (3.0 * (1.0 - 2.0 * nu));
    m.elongation = m.lambda + 2.0 * m.mu;
    return m;
}

ConcreteParams concrete_preset(const std::string& age) {
    ConcreteParams c;
    if (age == "28d") {
        c.tensile_strength = 2.2e6;
        c.young_modulus = 33e9;
        c.fracture_energy = 95.0;
    } else if (age == "147d") {
        c.tensile_strength = 3.9e6;
        c.young_modulus = 36e9;
        c.fracture_energy = 114.0;
    } else {
        throw std::invalid_argument("unknown concrete preset '" + age + "' (expected 28d or 147d)");
    }
    c.poisson_ratio = 0.2;
    return c;
}

std::vector<DisplacementConstraint> default_constraints() {
    return {{BoundarySite::Bottom, false, true}, {BoundarySite::BottomLeft, true, false}};
}

std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::PFCZM: return "pfczm";
        case ModelVariant::AT2: return "at2";
        case ModelVariant::StressBased: return "stress";
    }
    return "?";
}

std::string to_string(SofteningLaw s) { return s == SofteningLaw::Cornelissen ? "cornelissen" : "linear"; }

ModelVariant parse_variant(const std::string& text) {
    if (text == "pfczm") return ModelVariant::PFCZM;
    if (text == "at2") return ModelVariant::AT2;
    if (text == "stress") return ModelVariant::StressBased;
    throw std::invalid_argument("unknown model variant '" + text + "' (expected pfczm, at2 or stress)");
}

namespace {

using Accessor = std::function<double&(SimulationConfig&)>;

struct NumericField {
    std::string section;
    std::string key;
    Dimension dim;
    Accessor ref;
};

template <class Section>
NumericField field(const char* section, const char* key, Dimension dim, Section SimulationConfig::*sec,
                   double Section::*member) {
    return {section, key, dim, [sec, member](SimulationConfig& c) -> double& { return (c.*sec).*member; }};
}

const std::vector<NumericField>& numeric_fields() {
    using D = Dimension;
    using S = SimulationConfig;
    static const std::vector<NumericField> fields = {
        field("concrete", "young_modulus", D::Pressure, &S::concrete, &ConcreteParams::young_modulus),
        field("concrete", "poisson_ratio", D::Dimensionless, &S::concrete, &ConcreteParams::poisson_ratio),
        field("concrete", "tensile_strength", D::Pressure, &S::concrete, &ConcreteParams::tensile_strength),
        field("concrete", "fracture_energy", D::EnergyPerArea, &S::concrete, &ConcreteParams::fracture_energy),
        field("concrete", "heterogeneity", D::Dimensionless, &S::concrete, &ConcreteParams::heterogeneity),
        field("rust", "young_modulus", D::Pressure, &S::rust, &RustParams::young_modulus),
        field("rust", "poisson_ratio", D::Dimensionless, &S::rust, &RustParams::poisson_ratio),
        field("rust", "porosity", D::Dimensionless, &S::rust, &RustParams::porosity),
        field("rust", "molar_mass", D::MolarMass, &S::rust, &RustParams::molar_mass),
        field("rust", "density", D::Density, &S::rust, &RustParams::density),
        field("iron", "molar_mass", D::MolarMass, &S::iron, &IronParams::molar_mass),
        field("iron", "density", D::Density, &S::iron, &IronParams::density),
        field("steel", "young_modulus", D::Pressure, &S::steel, &SteelParams::young_modulus),
        field("steel", "poisson_ratio", D::Dimensionless, &S::steel, &SteelParams::poisson_ratio),
        field("transport", "bulk_porosity", D::Dimensionless, &S::transport, &TransportParams::bulk_porosity),
        field("transport", "sci_porosity", D::Dimensionless, &S::transport, &TransportParams::sci_porosity),
        field("transport", "sci_thickness", D::Length, &S::transport, &TransportParams::sci_thickness),
        field("transport", "scaled_diffusivity_ii", D::Diffusivity, &S::transport,
              &TransportParams::scaled_diffusivity_ii),
        field("transport", "scaled_diffusivity_iii", D::Diffusivity, &S::transport,
              &TransportParams::scaled_diffusivity_iii),
        field("transport", "cracked_diffusivity_ii", D::Diffusivity, &S::transport,
              &TransportParams::cracked_diffusivity_ii),
        field("transport", "cracked_diffusivity_iii", D::Diffusivity, &S::transport,
              &TransportParams::cracked_diffusivity_iii),
        field("transport", "rate_ii_to_iii", D::SecondOrderRate, &S::transport, &TransportParams::rate_ii_to_iii),
        field("transport", "rate_iii_to_p", D::FirstOrderRate, &S::transport, &TransportParams::rate_iii_to_p),
        field("transport", "oxygen_concentration", D::Concentration, &S::transport,
              &TransportParams::oxygen_concentration),
        field("transport", "current_density", D::CurrentDensity, &S::transport, &TransportParams::current_density),
        field("transport", "faraday", D::ChargePerMole, &S::transport, &TransportParams::faraday),
        field("phase_field", "length_scale", D::Length, &S::phase_field, &PhaseFieldParams::length_scale),
        field("phase_field", "stress_based_xi", D::Dimensionless, &S::phase_field,
              &PhaseFieldParams::stress_based_xi),
        field("phase_field", "at2_length", D::Length, &S::phase_field, &PhaseFieldParams::at2_length),
        field("geometry", "width", D::Length, &S::geometry, &GeometrySpec::width),
        field("geometry", "height", D::Length, &S::geometry, &GeometrySpec::height),
        field("mesh", "sci_size", D::Length, &S::mesh, &MeshOptions::sci_size),
        field("mesh", "bulk_size", D::Length, &S::mesh, &MeshOptions::bulk_size),
        field("mesh", "max_size", D::Length, &S::mesh, &MeshOptions::max_size),
        field("mesh", "refine_distance", D::Length, &S::mesh, &MeshOptions::refine_distance),
        field("time", "duration", D::Time, &S::time, &TimeControl::duration),
        field("time", "step", D::Time, &S::time, &TimeControl::step),
        field("time", "staggered_tolerance", D::Dimensionless, &S::time, &TimeControl::staggered_tolerance),
        field("time", "output_interval", D::Time, &S::time, &TimeControl::output_interval),
        field("output", "width_normalizer", D::Length, &S::output, &OutputOptions::width_normalizer),
    };
    return fields;
}

int line_of(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.is_null() ? 0 : mark.line + 1;
}

std::string scalar_text(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) throw ConfigError(path, line_of(node), "expected a scalar value");
    return node.Scalar();
}

double quantity(const YAML::Node& node, const std::string& path, Dimension dim) {
    const std::string text = scalar_text(node, path);
    try {
        return parse_quantity(text, dim);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, line_of(node), e.what());
    }
}

long integer(const YAML::Node& node, const std::string& path) {
    const std::string text = scalar_text(node, path);
    char* end = nullptr;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0') throw ConfigError(path, line_of(node), "expected an integer, got '" + text + "'");
    return value;
}

bool boolean(const YAML::Node& node, const std::string& path) {
    const std::string text = scalar_text(node, path);
    if (text == "true" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "no" || text == "off") return false;
    throw ConfigError(path, line_of(node), "expected true or false, got '" + text + "'");
}

BoundarySite parse_site(const YAML::Node& node, const std::string& path) {
    static const std::map<std::string, BoundarySite> sites = {
        {"bottom", BoundarySite::Bottom},           {"top", BoundarySite::Top},
        {"left", BoundarySite::Left},               {"right", BoundarySite::Right},
        {"bottom_left", BoundarySite::BottomLeft},  {"bottom_right", BoundarySite::BottomRight},
        {"top_left", BoundarySite::TopLeft},        {"top_right", BoundarySite::TopRight},
    };
    const std::string text = scalar_text(node, path);
    const auto it = sites.find(text);
    if (it == sites.end()) throw ConfigError(path, line_of(node), "unknown boundary site '" + text + "'");
    return it->second;
}

std::string site_name(BoundarySite s) {
    switch (s) {
        case BoundarySite::Bottom: return "bottom";
        case BoundarySite::Top: return "top";
        case BoundarySite::Left: return "left";
        case BoundarySite::Right: return "right";
        case BoundarySite::BottomLeft: return "bottom_left";
        case BoundarySite::BottomRight: return "bottom_right";
        case BoundarySite::TopLeft: return "top_left";
        case BoundarySite::TopRight: return "top_right";
    }
    return "?";
}

std::vector<Rebar> parse_rebars(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) throw ConfigError(path, line_of(node), "expected a list of rebars");
    std::vector<Rebar> bars;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const YAML::Node item = node[i];
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        if (!item.IsMap()) throw ConfigError(item_path, line_of(item), "expected a map with x, y, diameter");
        Rebar bar;
        bool has_x = false, has_y = false, has_d = false;
        for (const auto& kv : item) {
            const std::string key = kv.first.Scalar();
            const std::string key_path = item_path + "." + key;
            if (key == "x") {
                bar.x = quantity(kv.second, key_path, Dimension::Length);
                has_x = true;
            } else if (key == "y") {
                bar.y = quantity(kv.second, key_path, Dimension::Length);
                has_y = true;
            } else if (key == "diameter") {
                bar.diameter = quantity(kv.second, key_path, Dimension::Length);
                has_d = true;
            } else {
                throw ConfigError(key_path, line_of(kv.first), "unknown key");
            }
        }
        if (!has_x || !has_y || !has_d) throw ConfigError(item_path, line_of(item), "rebar needs x, y and diameter");
        bars.push_back(bar);
    }
    return bars;
}

std::vector<DisplacementConstraint> parse_constraints(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) throw ConfigError(path, line_of(node), "expected a list of constraints");
    std::vector<DisplacementConstraint> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const YAML::Node item = node[i];
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        if (!item.IsMap()) throw ConfigError(item_path, line_of(item), "expected a map with site and fix");
        DisplacementConstraint c;
        bool has_site = false, has_fix = false;
        for (const auto& kv : item) {
            const std::string key = kv.first.Scalar();
            const std::string key_path = item_path + "." + key;
            if (key == "site") {
                c.site = parse_site(kv.second, key_path);
                has_site = true;
            } else if (key == "fix") {
                const std::string fix = scalar_text(kv.second, key_path);
                if (fix != "x" && fix != "y" && fix != "xy") {
                    throw ConfigError(key_path, line_of(kv.second), "fix must be x, y or xy");
                }
                c.fix_x = fix.find('x') != std::string::npos;
                c.fix_y = fix.find('y') != std::string::npos;
                has_fix = true;
            } else {
                throw ConfigError(key_path, line_of(kv.first), "unknown key");
            }
        }
        if (!has_site || !has_fix) throw ConfigError(item_path, line_of(item), "constraint needs site and fix");
        out.push_back(c);
    }
    return out;
}

void apply_overrides(YAML::Node& root, const std::vector<std::string>& overrides) {
    for (const auto& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError(entry, 0, "override must look like section.key=value");
        }
        const std::string path = entry.substr(0, eq);
        const std::string value = entry.substr(eq + 1);
        std::vector<std::string> parts;
        std::stringstream ss(path);
        for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
        YAML::Node parsed;
        try {
            parsed = YAML::Load(value);
        } catch (const YAML::Exception& e) {
            throw ConfigError(path, 0, std::string("cannot parse override value: ") + e.what());
        }
        if (parts.size() == 1) {
            root[parts[0]] = parsed;
        } else if (parts.size() == 2) {
            YAML::Node section = root[parts[0]];
            section[parts[1]] = parsed;
        } else {
            throw ConfigError(path, 0, "override paths have the form section.key");
        }
    }
}

SimulationConfig from_yaml(const YAML::Node& root) {
    SimulationConfig cfg;
    cfg.geometry.constraints = default_constraints();
    if (!root.IsDefined() || root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError("", line_of(root), "top level must be a map of sections");

    static const std::vector<std::string> sections = {"concrete", "rust",     "iron", "steel", "transport",
                                                      "phase_field", "geometry", "mesh", "time",  "output"};

    // Presets are applied before any explicit concrete key regardless of order.
    if (const YAML::Node concrete = root["concrete"]; concrete && concrete.IsMap()) {
        if (const YAML::Node preset = concrete["preset"]) {
            try {
                cfg.concrete = concrete_preset(scalar_text(preset, "concrete.preset"));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("concrete.preset", line_of(preset), e.what());
            }
        }
    }

    for (const auto& top : root) {
        const std::string section = top.first.Scalar();
        if (section == "name") {
            cfg.name = scalar_text(top.second, "name");
            continue;
        }
        if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
            throw ConfigError(section, line_of(top.first), "unknown section");
        }
        if (!top.second.IsMap()) throw ConfigError(section, line_of(top.second), "section must be a map");

        for (const auto& kv : top.second) {
            const std::string key = kv.first.Scalar();
            const std::string path = section + "." + key;
            const YAML::Node& value = kv.second;

            bool handled = false;
            for (const auto& f : numeric_fields()) {
                if (f.section == section && f.key == key) {
                    f.ref(cfg) = quantity(value, path, f.dim);
                    handled = true;
                    break;
                }
            }
            if (handled) continue;

            if (path == "concrete.preset") {
                continue;
            } else if (path == "concrete.seed") {
                cfg.concrete.seed = static_cast<std::uint64_t>(integer(value, path));
            } else if (path == "phase_field.softening") {
                const std::string s = scalar_text(value, path);
                if (s == "cornelissen") cfg.phase_field.softening = SofteningLaw::Cornelissen;
                else if (s == "linear") cfg.phase_field.softening = SofteningLaw::Linear;
                else throw ConfigError(path, line_of(value), "expected cornelissen or linear");
            } else if (path == "phase_field.variant") {
                try {
                    cfg.phase_field.variant = parse_variant(scalar_text(value, path));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(path, line_of(value), e.what());
                }
            } else if (path == "geometry.rebars") {
                cfg.geometry.rebars = parse_rebars(value, path);
            } else if (path == "geometry.constraints") {
                cfg.geometry.constraints = parse_constraints(value, path);
            } else if (path == "mesh.file") {
                cfg.mesh.file = scalar_text(value, path);
            } else if (path == "time.staggered_iterations") {
                cfg.time.staggered_iterations = static_cast<int>(integer(value, path));
            } else if (path == "time.max_halvings") {
                cfg.time.max_halvings = static_cast<int>(integer(value, path));
            } else if (path == "output.directory") {
                cfg.output.directory = scalar_text(value, path);
            } else if (path == "output.snapshots") {
                cfg.output.snapshots = boolean(value, path);
            } else if (path == "output.progress_every") {
                cfg.output.progress_every = static_cast<int>(integer(value, path));
            } else {
                throw ConfigError(path, line_of(kv.first), "unknown key");
            }
        }
    }
    return cfg;
}

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, 0, message);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void validate(const SimulationConfig& c) {
    const auto& co = c.concrete;
    require(co.young_modulus > 0, "concrete.young_modulus", "must be positive");
    require(co.poisson_ratio >= 0 && co.poisson_ratio < 0.5, "concrete.poisson_ratio", "must lie in [0, 0.5)");
    require(co.tensile_strength > 0, "concrete.tensile_strength", "must be positive");
    require(co.fracture_energy > 0, "concrete.fracture_energy", "must be positive");
    require(co.heterogeneity >= 0 && co.heterogeneity < 0.5, "concrete.heterogeneity", "must lie in [0, 0.5)");

    const auto& r = c.rust;
    require(r.young_modulus > 0, "rust.young_modulus", "must be positive");
    require(r.poisson_ratio >= 0 && r.poisson_ratio < 0.5, "rust.poisson_ratio", "must lie in [0, 0.5)");
    require(r.porosity >= 0 && r.porosity < 1, "rust.porosity", "must lie in [0, 1)");
    require(r.molar_mass > 0, "rust.molar_mass", "must be positive");
    require(r.density > 0, "rust.density", "must be positive");
    require(c.iron.molar_mass > 0, "iron.molar_mass", "must be positive");
    require(c.iron.density > 0, "iron.density", "must be positive");
    require(c.steel.young_modulus > 0, "steel.young_modulus", "must be positive");
    require(c.steel.poisson_ratio >= 0 && c.steel.poisson_ratio < 0.5, "steel.poisson_ratio", "must lie in [0, 0.5)");

    const auto& t = c.transport;
    require(t.bulk_porosity > 0 && t.bulk_porosity < 1, "transport.bulk_porosity", "must lie in (0, 1)");
    require(t.sci_porosity > 0 && t.sci_porosity < 1, "transport.sci_porosity", "must lie in (0, 1)");
    require(t.sci_thickness >= 0, "transport.sci_thickness", "must be non-negative");
    require(t.scaled_diffusivity_ii >= 0, "transport.scaled_diffusivity_ii", "must be non-negative");
    require(t.scaled_diffusivity_iii >= 0, "transport.scaled_diffusivity_iii", "must be non-negative");
    require(t.cracked_diffusivity_ii >= 0, "transport.cracked_diffusivity_ii", "must be non-negative");
    require(t.cracked_diffusivity_iii >= 0, "transport.cracked_diffusivity_iii", "must be non-negative");
    require(t.rate_ii_to_iii >= 0, "transport.rate_ii_to_iii", "must be non-negative");
    require(t.rate_iii_to_p >= 0, "transport.rate_iii_to_p", "must be non-negative");
    require(t.oxygen_concentration >= 0, "transport.oxygen_concentration", "must be non-negative");
    require(t.current_density >= 0, "transport.current_density", "must be non-negative");
    require(t.faraday > 0, "transport.faraday", "must be positive");

    const auto& p = c.phase_field;
    require(p.length_scale > 0, "phase_field.length_scale", "must be positive");
    require(p.variant != ModelVariant::StressBased || p.stress_based_xi > 0, "phase_field.stress_based_xi",
            "must be positive for the stress-based variant");
    require(p.at2_length >= 0, "phase_field.at2_length", "must be non-negative");

    const auto& g = c.geometry;
    require(g.width > 0, "geometry.width", "must be positive");
    require(g.height > 0, "geometry.height", "must be positive");
    for (const auto& bar : g.rebars) {
        require(bar.diameter > 0, "geometry.rebars", "diameters must be positive");
        const double rad = 0.5 * bar.diameter;
        require(bar.x - rad > 0 && bar.x + rad < g.width && bar.y - rad > 0 && bar.y + rad < g.height,
                "geometry.rebars", "rebars must lie inside the rectangle with positive clearance");
    }
    bool fixes_x = false, fixes_y = false;
    for (const auto& con : g.constraints) {
        fixes_x = fixes_x || con.fix_x;
        fixes_y = fixes_y || con.fix_y;
    }
    require(fixes_x && fixes_y, "geometry.constraints", "must restrain rigid-body motion in both directions");

    const auto& m = c.mesh;
    require(m.sci_size > 0, "mesh.sci_size", "must be positive");
    require(m.bulk_size >= m.sci_size, "mesh.bulk_size", "must be at least mesh.sci_size");
    require(m.max_size >= m.bulk_size, "mesh.max_size", "must be at least mesh.bulk_size");
    require(m.refine_distance >= 0, "mesh.refine_distance", "must be non-negative");

    const auto& tc = c.time;
    require(tc.duration >= 0, "time.duration", "must be non-negative");
    require(tc.step > 0 && (tc.duration == 0 || tc.step <= tc.duration), "time.step",
            "must satisfy 0 < step <= duration");
    require(tc.staggered_iterations >= 1, "time.staggered_iterations", "must be at least 1");
    require(tc.staggered_tolerance > 0, "time.staggered_tolerance", "must be positive");
    require(tc.output_interval > 0, "time.output_interval", "must be positive");
    require(tc.max_halvings >= 0, "time.max_halvings", "must be non-negative");
    require(c.output.width_normalizer > 0, "output.width_normalizer", "must be positive");
}

SimulationConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", e.mark.line + 1, e.msg);
    }
    if (!overrides.empty()) {
        if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
        apply_overrides(root, overrides);
    }
    SimulationConfig cfg = from_yaml(root);
    validate(cfg);
    return cfg;
}

SimulationConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

std::string write_config(const SimulationConfig& c) {
    std::ostringstream out;
    out << "# Resolved configuration, SI units throughout\n";
    out << "name: \"" << c.name << "\"\n";
    // Numeric keys are emitted from the same table the parser reads, so the
    // round trip cannot drift out of sync.
    std::string current;
    SimulationConfig copy = c;
    auto open = [&](const std::string& section) {
        if (section != current) {
            out << section << ":\n";
            current = section;
        }
    };
    for (const auto& f : numeric_fields()) {
        open(f.section);
        out << "  " << f.key << ": " << num(f.ref(copy)) << "\n";
        if (f.section == "concrete" && f.key == "heterogeneity") out << "  seed: " << c.concrete.seed << "\n";
        if (f.section == "phase_field" && f.key == "at2_length") {
            out << "  softening: " << to_string(c.phase_field.softening) << "\n";
            out << "  variant: " << to_string(c.phase_field.variant) << "\n";
        }
        if (f.section == "geometry" && f.key == "height") {
            out << "  rebars:\n";
            for (const auto& bar : c.geometry.rebars) {
                out << "    - {x: " << num(bar.x) << ", y: " << num(bar.y) << ", diameter: " << num(bar.diameter)
                    << "}\n";
            }
            out << "  constraints:\n";
            for (const auto& con : c.geometry.constraints) {
                out << "    - {site: " << site_name(con.site)
                    << ", fix: " << (con.fix_x && con.fix_y ? "xy" : con.fix_x ? "x" : "y") << "}\n";
            }
        }
        if (f.section == "mesh" && f.key == "refine_distance" && !c.mesh.file.empty()) {
            out << "  file: \"" << c.mesh.file << "\"\n";
        }
        if (f.section == "time" && f.key == "output_interval") {
            out << "  staggered_iterations: " << c.time.staggered_iterations << "\n";
            out << "  max_halvings: " << c.time.max_halvings << "\n";
        }
        if (f.section == "output" && f.key == "width_normalizer") {
            out << "  directory: \"" << c.output.directory << "\"\n";
            out << "  snapshots: " << (c.output.snapshots ? "true" : "false") << "\n";
            out << "  progress_every: " << c.output.progress_every << "\n";
        }
    }
    return out.str();
}

}  // namespace corrode
