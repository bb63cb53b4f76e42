#include "corrode/units.hpp"

#include <array>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace corrode {

namespace {

// factor = multiplier * 10^exponent10, with the multiplier an integer so the
// only rounding is the decimal-to-binary conversion (plus one product when
// the multiplier is not 1, e.g. days).
struct UnitEntry {
    std::string_view symbol;
    Dimension dim;
    long multiplier;
    int exponent10;
};

constexpr std::array kUnits{
    UnitEntry{"m", Dimension::Length, 1, 0},
    UnitEntry{"cm", Dimension::Length, 1, -2},
    UnitEntry{"mm", Dimension::Length, 1, -3},
    UnitEntry{"um", Dimension::Length, 1, -6},
    UnitEntry{"s", Dimension::Time, 1, 0},
    UnitEntry{"min", Dimension::Time, 60, 0},
    UnitEntry{"h", Dimension::Time, 3600, 0},
    UnitEntry{"d", Dimension::Time, 86400, 0},
    UnitEntry{"day", Dimension::Time, 86400, 0},
    UnitEntry{"days", Dimension::Time, 86400, 0},
    UnitEntry{"Pa", Dimension::Pressure, 1, 0},
    UnitEntry{"kPa", Dimension::Pressure, 1, 3},
    UnitEntry{"MPa", Dimension::Pressure, 1, 6},
    UnitEntry{"GPa", Dimension::Pressure, 1, 9},
    UnitEntry{"N/m", Dimension::EnergyPerArea, 1, 0},
    UnitEntry{"J/m2", Dimension::EnergyPerArea, 1, 0},
    UnitEntry{"N/mm", Dimension::EnergyPerArea, 1, 3},
    UnitEntry{"A/m2", Dimension::CurrentDensity, 1, 0},
    UnitEntry{"mA/m2", Dimension::CurrentDensity, 1, -3},
    UnitEntry{"uA/cm2", Dimension::CurrentDensity, 1, -2},
    UnitEntry{"mA/cm2", Dimension::CurrentDensity, 1, 1},
    UnitEntry{"m2/s", Dimension::Diffusivity, 1, 0},
    UnitEntry{"cm2/s", Dimension::Diffusivity, 1, -4},
    UnitEntry{"mm2/s", Dimension::Diffusivity, 1, -6},
    UnitEntry{"m3/mol/s", Dimension::SecondOrderRate, 1, 0},
    UnitEntry{"m3/(mol*s)", Dimension::SecondOrderRate, 1, 0},
    UnitEntry{"1/s", Dimension::FirstOrderRate, 1, 0},
    UnitEntry{"s-1", Dimension::FirstOrderRate, 1, 0},
    UnitEntry{"mol/m3", Dimension::Concentration, 1, 0},
    UnitEntry{"mol/L", Dimension::Concentration, 1, 3},
    UnitEntry{"mmol/L", Dimension::Concentration, 1, 0},
    UnitEntry{"kg/mol", Dimension::MolarMass, 1, 0},
    UnitEntry{"g/mol", Dimension::MolarMass, 1, -3},
    UnitEntry{"kg/m3", Dimension::Density, 1, 0},
    UnitEntry{"g/cm3", Dimension::Density, 1, 3},
    UnitEntry{"C/mol", Dimension::ChargePerMole, 1, 0},
    UnitEntry{"-", Dimension::Dimensionless, 1, 0},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits a decimal literal into mantissa text and integer exponent, then
// re-emits it with the exponent shifted so strtod performs a single
// correctly rounded conversion.
double scaled_decimal(std::string_view number, int shift) {
    std::string mantissa(number);
    long exponent = 0;
    if (auto pos = mantissa.find_first_of("eE"); pos != std::string::npos) {
        const std::string exp_text = mantissa.substr(pos + 1);
        char* end = nullptr;
        errno = 0;
        exponent = std::strtol(exp_text.c_str(), &end, 10);
        if (exp_text.empty() || *end != '\0' || errno != 0) {
            throw std::invalid_argument("malformed exponent in '" + std::string(number) + "'");
        }
        mantissa.resize(pos);
    }
    const std::string rebuilt = mantissa + "e" + std::to_string(exponent + shift);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(rebuilt.c_str(), &end);
    if (mantissa.empty() || *end != '\0' || errno == ERANGE) {
        throw std::invalid_argument("malformed number '" + std::string(number) + "'");
    }
    return value;
}

}  // namespace

std::string_view dimension_name(Dimension dim) {
    switch (dim) {
        case Dimension::Dimensionless: return "dimensionless";
        case Dimension::Length: return "length";
        case Dimension::Time: return "time";
        case Dimension::Pressure: return "pressure";
        case Dimension::EnergyPerArea: return "energy per area";
        case Dimension::CurrentDensity: return "current density";
        case Dimension::Diffusivity: return "diffusivity";
        case Dimension::SecondOrderRate: return "second-order rate constant";
        case Dimension::FirstOrderRate: return "first-order rate constant";
        case Dimension::Concentration: return "concentration";
        case Dimension::MolarMass: return "molar mass";
        case Dimension::Density: return "density";
        case Dimension::ChargePerMole: return "charge per mole";
    }
    return "unknown";
}

std::string_view si_symbol(Dimension dim) {
    switch (dim) {
        case Dimension::Dimensionless: return "-";
        case Dimension::Length: return "m";
        case Dimension::Time: return "s";
        case Dimension::Pressure: return "Pa";
        case Dimension::EnergyPerArea: return "N/m";
        case Dimension::CurrentDensity: return "A/m2";
        case Dimension::Diffusivity: return "m2/s";
        case Dimension::SecondOrderRate: return "m3/mol/s";
        case Dimension::FirstOrderRate: return "1/s";
        case Dimension::Concentration: return "mol/m3";
        case Dimension::MolarMass: return "kg/mol";
        case Dimension::Density: return "kg/m3";
        case Dimension::ChargePerMole: return "C/mol";
    }
    return "?";
}

double parse_quantity(std::string_view text, Dimension expected) {
    const std::string_view body = trim(text);
    if (body.empty()) throw std::invalid_argument("empty value");

    std::size_t split = 0;
    while (split < body.size() && !std::isspace(static_cast<unsigned char>(body[split]))) ++split;
    const std::string_view number = body.substr(0, split);
    const std::string_view unit = trim(body.substr(split));

    if (unit.empty()) return scaled_decimal(number, 0);

    for (const auto& entry : kUnits) {
        if (entry.symbol != unit) continue;
        if (entry.dim != expected) {
            throw std::invalid_argument("unit '" + std::string(unit) + "' is a " +
                                        std::string(dimension_name(entry.dim)) + ", expected " +
                                        std::string(dimension_name(expected)));
        }
        const double scaled = scaled_decimal(number, entry.exponent10);
        return entry.multiplier == 1 ? scaled : scaled * static_cast<double>(entry.multiplier);
    }
    throw std::invalid_argument("unknown unit '" + std::string(unit) + "'");
}

}  // namespace corrode
