#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mad/equation.hpp"
#include "mad/geometry.hpp"

namespace mad {

enum class Generator : std::uint8_t { Mad0 = 0, Mad1 = 1, Mad2 = 2, PinnGrf = 3, FdOracle = 4 };
enum class Provenance : std::uint8_t { Train = 0, TestSet1 = 1, TestSet2 = 2 };

std::string_view to_string(Generator g);
Generator parse_generator(std::string_view s);
std::string_view to_string(Provenance p);

/// One record: boundary values g at the Mb boundary samples, optional source
/// f and solution u at the grid nodes. Absent fields are empty vectors.
struct FieldSample {
    std::vector<double> g;
    std::vector<double> f;
    std::vector<double> u;
    std::uint64_t seed = 0;
};

struct DatasetMeta {
    Generator generator = Generator::Mad1;
    Provenance provenance = Provenance::Train;
    EquationSpec equation;
    DomainKind domain = DomainKind::UnitSquare;
    GridSpec grid;
    std::uint64_t master_seed = 0;
    double generation_seconds = 0.0;
    // Generator parameters; zero when not applicable.
    std::uint32_t n_centers = 0;
    std::uint32_t n_terms = 0;
    double length_scale = 0.0;
    double sigma = 0.0;
    double h_oracle = 0.0;

    /// Equality of everything except the wall-clock generation time.
    bool same_content(const DatasetMeta& o) const;
};

/// N records stored as contiguous row-major N x Mb / N x M blocks.
struct Dataset {
    DatasetMeta meta;
    std::size_t n = 0;
    std::size_t boundary_size = 0;  // Mb
    std::size_t grid_size = 0;      // nodes carrying f and u
    bool has_f = false;
    bool has_u = false;
    std::vector<double> g;
    std::vector<double> f;
    std::vector<double> u;

    std::span<const double> g_row(std::size_t i) const { return {g.data() + i * boundary_size, boundary_size}; }
    std::span<const double> f_row(std::size_t i) const { return {f.data() + i * grid_size, grid_size}; }
    std::span<const double> u_row(std::size_t i) const { return {u.data() + i * grid_size, grid_size}; }

    /// Record-level seed, re-derived from the master seed and provenance.
    std::uint64_t sample_seed(std::size_t i) const;

    /// Content equality ignoring generation time.
    bool same_content(const Dataset& o) const;
};

/// Stream used for per-sample seeds of a given provenance.
std::uint64_t sample_seed_for(Provenance p, std::uint64_t master, std::size_t index);

/// Assembles a dataset from records; all records must share field presence and sizes.
Dataset assemble_dataset(const DatasetMeta& meta, const Domain& d, const std::vector<FieldSample>& samples);

/// Domain described by a dataset header.
Domain domain_of(const Dataset& ds);

}  // namespace mad
