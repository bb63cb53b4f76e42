// Command-line front end: single runs, parameter sweeps, the bar benchmark
// and mesh statistics.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corrode/config.hpp"
#include "corrode/driver.hpp"
#include "corrode/mesh.hpp"
#include "corrode/sweep.hpp"
#include "corrode/units.hpp"

namespace fs = std::filesystem;
using namespace corrode;

namespace {

std::vector<std::string> split_values(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

int cmd_run(const std::string& path, const std::vector<std::string>& sets, const std::string& out_dir,
            bool no_snapshots, bool quiet) {
    SimulationConfig config = load_config(path, sets);
    if (no_snapshots) config.output.snapshots = false;
    RunOptions options;
    options.directory = out_dir;
    options.progress = !quiet;
    const RunOutput out = run(config, options);
    std::printf("output: %s\n", out.directory.c_str());
    if (!out.series.empty()) {
        const TimeRecord& last = out.series.back();
        std::printf("final: time_d=%.6g width_mm=%.6g relative=%.6g drift=%.3e\n", last.time / 86400.0,
                    last.width * 1e3, last.relative_width, last.mass_drift);
    }
    if (!out.completed) {
        std::fprintf(stderr, "run aborted: %s\n", out.abort_reason.c_str());
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::string& path, const std::vector<std::string>& sets, const std::string& param,
              const std::string& values_text, int workers, const std::string& out_dir, bool snapshots, bool quiet) {
    SimulationConfig base = load_config(path, sets);
    base.output.snapshots = snapshots;
    const std::vector<std::string> values = split_values(values_text);
    if (values.empty()) throw std::invalid_argument("--values needs at least one entry");

    SweepOptions options;
    options.workers = workers;
    options.progress = !quiet;
    options.directory = out_dir.empty() ? (fs::path(base.output.directory) / (base.name + "-sweep-" + param)).string()
                                        : out_dir;
    const auto rows = run_sweep(base, param, values, options);
    const std::string table = sweep_table_csv(param, rows);
    fs::create_directories(options.directory);
    std::ofstream(fs::path(options.directory) / "sweep.csv") << table;
    std::cout << table;
    int status = 0;
    for (const auto& r : rows) {
        if (!r.completed) {
            std::fprintf(stderr, "%s=%s aborted: %s\n", param.c_str(), r.value.c_str(), r.abort_reason.c_str());
            status = 2;
        }
    }
    return status;
}

int cmd_bench_bar(const std::string& variant, const std::string& softening, double length_mm, double ell_mm,
                  double element_mm, int increments, const std::string& out_file) {
    BarOptions o;
    o.variant = parse_variant(variant);
    o.softening = softening == "linear" ? SofteningLaw::Linear : SofteningLaw::Cornelissen;
    o.concrete = concrete_preset("147d");
    if (length_mm > 0) o.length = length_mm * 1e-3;
    if (ell_mm > 0) {
        o.length_scale = ell_mm * 1e-3;
        o.at2_length = ell_mm * 1e-3;
    }
    if (element_mm > 0) o.element_size = element_mm * 1e-3;
    if (increments > 0) o.increments = increments;
    const BarResult r = run_bar_benchmark(o);

    std::ostringstream csv;
    csv << "# variant=" << variant << " length_m=" << o.length << " length_scale_m=" << r.length_scale
        << " reference_strength_Pa=" << r.reference_strength << "\n";
    csv << "strain_normalized,stress_normalized,staggered_passes\n";
    char buf[96];
    for (const BarPoint& p : r.curve) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d\n", p.strain, p.stress, p.staggered_passes);
        csv << buf;
    }
    if (out_file.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream(out_file) << csv.str();
    }
    double peak = 0.0;
    for (const BarPoint& p : r.curve) peak = std::max(peak, p.stress);
    std::fprintf(stderr, "peak normalized stress %.6f, max phi %.6f\n", peak, r.max_phi);
    return 0;
}

int cmd_mesh_info(const std::string& path, const std::vector<std::string>& sets, const std::string& export_msh) {
    const SimulationConfig config = load_config(path, sets);
    const Mesh mesh = build_mesh(config);
    check_mesh(mesh);
    const MeshQuality q = mesh_quality(mesh);
    std::size_t counts[3] = {0, 0, 0};
    for (Region r : mesh.regions) ++counts[static_cast<int>(r)];
    std::printf("nodes: %zu\ntriangles: %zu (concrete %zu, sci %zu, steel %zu)\n", mesh.node_count(),
                mesh.triangle_count(), counts[0], counts[2], counts[1]);
    std::printf("area_m2: concrete %.9g sci %.9g steel %.9g\n", mesh.region_area(Region::Concrete),
                mesh.region_area(Region::SCI), mesh.region_area(Region::Steel));
    std::printf("min_angle_deg: %.3f\nmax_edge_mm: %.4f (sci %.4f, concrete %.4f)\n", q.min_angle_deg,
                q.max_edge * 1e3, q.max_sci_edge * 1e3, q.max_concrete_edge * 1e3);
    std::printf("rebar_surface_edges: %zu\ntop_surface_edges: %zu\n", q.rebar_surface_edges, q.top_surface_edges);
    if (!export_msh.empty()) write_msh(mesh, export_msh);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corrosion-induced cracking simulator for reinforced concrete cross-sections"};
    app.require_subcommand(0, 1);

    std::string dump_path;
    std::vector<std::string> sets;
    app.add_option("--dump-config", dump_path, "Print the fully resolved SI configuration and exit");
    app.add_option("--set", sets, "Override a configuration value, e.g. --set \"transport.current_density=5 uA/cm2\"");

    std::string config_path, out_dir;
    bool quiet = false;

    auto* run_cmd = app.add_subcommand("run", "Run one simulation");
    bool no_snapshots = false;
    run_cmd->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "Output directory (default <output.directory>/<name>)");
    run_cmd->add_flag("--no-snapshots", no_snapshots, "Skip VTK snapshots");
    run_cmd->add_flag("-q,--quiet", quiet, "No progress lines");
    run_cmd->add_option("--set", sets, "Configuration override");

    auto* sweep_cmd = app.add_subcommand("sweep", "One run per parameter value; prints the crack width table");
    std::string param, values;
    int workers = 0;
    bool snapshots = false;
    sweep_cmd->add_option("config", config_path, "Base configuration file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--param", param, "Parameter name")->required();
    sweep_cmd->add_option("--values", values, "Comma separated values; bare numbers use the default unit")
        ->required();
    sweep_cmd->add_option("--workers", workers, "Concurrent runs (default CORRODE_WORKERS or 1)");
    sweep_cmd->add_option("--out", out_dir, "Parent output directory");
    sweep_cmd->add_flag("--snapshots", snapshots, "Also write VTK snapshots for each run");
    sweep_cmd->add_flag("-q,--quiet", quiet, "No progress lines");
    sweep_cmd->add_option("--set", sets, "Configuration override");

    auto* bar_cmd = app.add_subcommand("bench-bar", "Bar under displacement control; prints the normalised curve");
    std::string variant = "pfczm", softening = "cornelissen", bar_out;
    double length_mm = 0, ell_mm = 0, element_mm = 0;
    int increments = 0;
    bar_cmd->add_option("--variant", variant, "pfczm | at2 | stress")
        ->check(CLI::IsMember({"pfczm", "at2", "stress"}));
    bar_cmd->add_option("--softening", softening, "cornelissen | linear")
        ->check(CLI::IsMember({"cornelissen", "linear"}));
    bar_cmd->add_option("--length-mm", length_mm, "Bar length");
    bar_cmd->add_option("--ell-mm", ell_mm, "Length scale (for at2 overrides the strength relation)");
    bar_cmd->add_option("--element-mm", element_mm, "Element size");
    bar_cmd->add_option("--increments", increments, "Displacement increments");
    bar_cmd->add_option("-o,--output", bar_out, "CSV file (default stdout)");

    auto* mesh_cmd = app.add_subcommand("mesh-info", "Mesh statistics for a configuration");
    std::string export_msh;
    mesh_cmd->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    mesh_cmd->add_option("--export", export_msh, "Write the mesh as MSH v2");
    mesh_cmd->add_option("--set", sets, "Configuration override");

    auto* params_cmd = app.add_subcommand("sweep-params", "List sweepable parameters");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!dump_path.empty()) {
            std::cout << write_config(load_config(dump_path, sets));
            return 0;
        }
        if (*run_cmd) return cmd_run(config_path, sets, out_dir, no_snapshots, quiet);
        if (*sweep_cmd) return cmd_sweep(config_path, sets, param, values, workers, out_dir, snapshots, quiet);
        if (*bar_cmd) return cmd_bench_bar(variant, softening, length_mm, ell_mm, element_mm, increments, bar_out);
        if (*mesh_cmd) return cmd_mesh_info(config_path, sets, export_msh);
        if (*params_cmd) {
            for (const auto& p : sweepable_parameters())
                std::printf("%-10s %-12s %s\n", p.name.c_str(), p.unit.c_str(), p.description.c_str());
            return 0;
        }
        std::cout << app.help();
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
