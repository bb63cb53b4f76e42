#pragma once

#include <string>
#include <string_view>

namespace corrode {

// Physical dimension expected by a configuration entry. A bare number is
// taken to be in SI base units; a number followed by a unit symbol must
// carry a unit of the matching dimension.
enum class Dimension {
    Dimensionless,
    Length,
    Time,
    Pressure,
    EnergyPerArea,
    CurrentDensity,
    Diffusivity,
    SecondOrderRate,
    FirstOrderRate,
    Concentration,
    MolarMass,
    Density,
    ChargePerMole,
};

std::string_view dimension_name(Dimension dim);

// Parses "<number> [unit]" into SI. Throws std::invalid_argument with a
// human-readable message on malformed numbers, unknown units, or a unit of
// the wrong dimension. The decimal scaling is folded into the decimal
// exponent before conversion, so "10 uA/cm2" yields exactly the double
// nearest to 0.1.
double parse_quantity(std::string_view text, Dimension expected);

// Canonical SI unit symbol for a dimension (used in dumps and CSV headers).
std::string_view si_symbol(Dimension dim);

}  // namespace corrode
