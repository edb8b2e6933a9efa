#pragma once

#include <string>
#include <string_view>

namespace mad {

enum class SourceMode { Zero, General };

/// lap(u) + k u = f in the domain, u = g on its boundary. k = 0 gives
/// Laplace (zero source) or Poisson (general source).
struct EquationSpec {
    double k = 0.0;
    SourceMode source = SourceMode::Zero;

    static EquationSpec laplace() { return {0.0, SourceMode::Zero}; }
    static EquationSpec poisson() { return {0.0, SourceMode::General}; }
    static EquationSpec helmholtz(double k, SourceMode source = SourceMode::Zero) { return {k, source}; }

    friend bool operator==(const EquationSpec&, const EquationSpec&) = default;
};

/// "laplace", "poisson" or "helmholtz"; k and source mode decide the name.
std::string equation_name(const EquationSpec& eq);

/// Builds an EquationSpec from a CLI family name. `laplace` forces k = 0 and a
/// zero source, `poisson` forces k = 0 and a general source; `helmholtz` keeps
/// the given k (must be > 0) and source mode.
EquationSpec parse_equation(std::string_view family, double k, SourceMode source);

std::string_view to_string(SourceMode m);

}  // namespace mad
