#pragma once

#include <string>
#include <vector>

#include "corrode/config.hpp"
#include "corrode/driver.hpp"

namespace corrode {

struct SweepParameter {
    std::string name;
    std::string unit;  // unit assumed for bare numbers
    std::string description;
};

const std::vector<SweepParameter>& sweepable_parameters();

// Applies one sweep value to a copy of the base configuration. Bare numbers
// are read in the parameter's default unit. Throws std::invalid_argument for
// unknown names, listing the valid ones.
SimulationConfig apply_sweep_value(const SimulationConfig& base, const std::string& parameter,
                                   const std::string& value);

// Concrete properties along the measured strength relation: modulus and
// fracture energy interpolated linearly in f_t between the two curing ages.
ConcreteParams concrete_for_strength(double tensile_strength);

inline const std::vector<double>& sweep_report_days() {
    static const std::vector<double> days{5.0, 20.0, 40.0, 60.0};
    return days;
}

struct SweepRow {
    std::string value;
    std::vector<double> widths;  // at sweep_report_days(), m
    bool completed = false;
    std::string abort_reason;
    std::string directory;
};

struct SweepOptions {
    int workers = 0;  // 0: CORRODE_WORKERS or 1
    bool write_files = true;
    bool progress = true;
    std::string directory;  // parent directory for per-value runs
    StepObserver observer;  // shared by all runs; must be thread-safe
};

int default_workers();

std::vector<SweepRow> run_sweep(const SimulationConfig& base, const std::string& parameter,
                                const std::vector<std::string>& values, const SweepOptions& options = {});

std::string sweep_table_csv(const std::string& parameter, const std::vector<SweepRow>& rows);

}  // namespace corrode
