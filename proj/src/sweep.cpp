#include "corrode/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <thread>

#include "corrode/units.hpp"

namespace corrode {

const std::vector<SweepParameter>& sweepable_parameters() {
    static const std::vector<SweepParameter> params = {
        {"d", "mm", "rebar diameter (cover kept)"},
        {"c", "mm", "concrete cover above the rebars"},
        {"p_0", "-", "bulk porosity"},
        {"i_a", "uA/cm2", "corrosion current density"},
        {"E_p", "MPa", "rust Young's modulus"},
        {"nu_p", "-", "rust Poisson's ratio"},
        {"f_t", "MPa", "tensile strength with matched fracture energy and modulus"},
        {"theta_D_m", "m2/s", "undamaged scaled diffusivity of both species"},
        {"k_ii_iii", "m3/(mol*s)", "oxidation rate constant"},
        {"c_ox", "mol/m3", "oxygen concentration"},
        {"d_sci", "mm", "steel-concrete interface thickness"},
        {"k_iii_p", "1/s", "precipitation rate constant"},
    };
    return params;
}

ConcreteParams concrete_for_strength(double f_t) {
    const ConcreteParams low = concrete_preset("28d");
    const ConcreteParams high = concrete_preset("147d");
    const double s = (f_t - low.tensile_strength) / (high.tensile_strength - low.tensile_strength);
    ConcreteParams c = high;
    c.tensile_strength = f_t;
    c.fracture_energy = low.fracture_energy + s * (high.fracture_energy - low.fracture_energy);
    c.young_modulus = low.young_modulus + s * (high.young_modulus - low.young_modulus);
    return c;
}

namespace {

double read_value(const SweepParameter& p, const std::string& text, Dimension dim) {
    const bool has_unit = std::any_of(text.begin(), text.end(), [](unsigned char ch) {
        return std::isalpha(ch) && ch != 'e' && ch != 'E';
    });
    return parse_quantity(has_unit || p.unit == "-" ? text : text + " " + p.unit, dim);
}

double current_cover(const GeometrySpec& g) {
    if (g.rebars.empty()) throw std::invalid_argument("sweep needs at least one rebar");
    double cover = g.height;
    for (const Rebar& r : g.rebars) cover = std::min(cover, g.height - r.y - 0.5 * r.diameter);
    return cover;
}

}  // namespace

SimulationConfig apply_sweep_value(const SimulationConfig& base, const std::string& name, const std::string& text) {
    const auto& params = sweepable_parameters();
    const auto it = std::find_if(params.begin(), params.end(), [&](const SweepParameter& p) { return p.name == name; });
    if (it == params.end()) {
        std::string list;
        for (const auto& p : params) list += (list.empty() ? "" : ", ") + p.name;
        throw std::invalid_argument("unknown sweep parameter '" + name + "'; sweepable: " + list);
    }
    SimulationConfig c = base;
    auto& g = c.geometry;
    if (name == "d") {
        const double cover = current_cover(g);
        const double d = read_value(*it, text, Dimension::Length);
        for (Rebar& r : g.rebars) {
            r.diameter = d;
            r.y = g.height - cover - 0.5 * d;
        }
    } else if (name == "c") {
        const double cover = read_value(*it, text, Dimension::Length);
        for (Rebar& r : g.rebars) r.y = g.height - cover - 0.5 * r.diameter;
    } else if (name == "p_0") {
        c.transport.bulk_porosity = read_value(*it, text, Dimension::Dimensionless);
    } else if (name == "i_a") {
        c.transport.current_density = read_value(*it, text, Dimension::CurrentDensity);
    } else if (name == "E_p") {
        c.rust.young_modulus = read_value(*it, text, Dimension::Pressure);
    } else if (name == "nu_p") {
        c.rust.poisson_ratio = read_value(*it, text, Dimension::Dimensionless);
    } else if (name == "f_t") {
        const ConcreteParams m = concrete_for_strength(read_value(*it, text, Dimension::Pressure));
        c.concrete.tensile_strength = m.tensile_strength;
        c.concrete.fracture_energy = m.fracture_energy;
        c.concrete.young_modulus = m.young_modulus;
    } else if (name == "theta_D_m") {
        const double v = read_value(*it, text, Dimension::Diffusivity);
        c.transport.scaled_diffusivity_ii = v;
        c.transport.scaled_diffusivity_iii = v;
    } else if (name == "k_ii_iii") {
        c.transport.rate_ii_to_iii = read_value(*it, text, Dimension::SecondOrderRate);
    } else if (name == "c_ox") {
        c.transport.oxygen_concentration = read_value(*it, text, Dimension::Concentration);
    } else if (name == "d_sci") {
        c.transport.sci_thickness = read_value(*it, text, Dimension::Length);
    } else if (name == "k_iii_p") {
        c.transport.rate_iii_to_p = read_value(*it, text, Dimension::FirstOrderRate);
    }
    std::string tag = text;
    for (char& ch : tag) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
    }
    c.name = base.name + "-" + name + "-" + tag;
    validate(c);
    return c;
}

int default_workers() {
    if (const char* env = std::getenv("CORRODE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::vector<SweepRow> run_sweep(const SimulationConfig& base, const std::string& parameter,
                                const std::vector<std::string>& values, const SweepOptions& options) {
    std::vector<SimulationConfig> configs;
    configs.reserve(values.size());
    for (const auto& v : values) configs.push_back(apply_sweep_value(base, parameter, v));

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = values[i];
            RunOptions ro;
            ro.write_files = options.write_files;
            ro.progress = options.progress;
            ro.observer = options.observer;
            if (!options.directory.empty()) {
                ro.directory = (std::filesystem::path(options.directory) / configs[i].name).string();
            }
            try {
                const RunOutput out = run(configs[i], ro);
                row.completed = out.completed;
                row.abort_reason = out.abort_reason;
                row.directory = out.directory;
                for (double day : sweep_report_days()) row.widths.push_back(width_at(out.series, day * 86400.0));
            } catch (const std::exception& e) {
                row.abort_reason = e.what();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(options.workers > 0 ? options.workers : default_workers(),
                                                  static_cast<int>(configs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string sweep_table_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
    std::string out = parameter;
    for (double d : sweep_report_days()) {
        char buf[48];
        std::snprintf(buf, sizeof buf, ",w_%gd_mm,w_rel_%gd", d, d);
        out += buf;
    }
    out += ",status\n";
    for (const SweepRow& r : rows) {
        out += r.value;
        for (double w : r.widths) {
            char buf[64];
            std::snprintf(buf, sizeof buf, ",%.9g,%.9g", w * 1e3, w / 0.25e-3);
            out += buf;
        }
        for (std::size_t k = r.widths.size(); k < sweep_report_days().size(); ++k) out += ",,";
        out += r.completed ? ",completed\n" : ",aborted\n";
    }
    return out;
}

}  // namespace corrode
