#include "mad/equation.hpp"

#include <stdexcept>

#include "mad/random.hpp"

namespace mad {

std::string equation_name(const EquationSpec& eq) {
    if (eq.k != 0.0) return "helmholtz";
    return eq.source == SourceMode::Zero ? "laplace" : "poisson";
}

EquationSpec parse_equation(std::string_view family, double k, SourceMode source) {
    if (family == "laplace") return EquationSpec::laplace();
    if (family == "poisson") return EquationSpec::poisson();
    if (family == "helmholtz") {
        if (!(k > 0.0)) throw std::invalid_argument("helmholtz requires --k > 0");
        return EquationSpec::helmholtz(k, source);
    }
    throw std::invalid_argument("unknown equation: " + std::string(family));
}

std::string_view to_string(SourceMode m) { return m == SourceMode::Zero ? "zero" : "general"; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
    return splitmix64(h ^ index);
}

}  // namespace mad
