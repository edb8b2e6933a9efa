#include "mad/dataset.hpp"

#include <stdexcept>
#include <string>

#include "mad/random.hpp"

namespace mad {

std::string_view to_string(Generator g) {
    switch (g) {
        case Generator::Mad0: return "mad0";
        case Generator::Mad1: return "mad1";
        case Generator::Mad2: return "mad2";
        case Generator::PinnGrf: return "pinn-grf";
        case Generator::FdOracle: return "fd-oracle";
    }
    return "unknown";
}

Generator parse_generator(std::string_view s) {
    if (s == "mad0") return Generator::Mad0;
    if (s == "mad1") return Generator::Mad1;
    if (s == "mad2") return Generator::Mad2;
    if (s == "pinn-grf") return Generator::PinnGrf;
    if (s == "fd-oracle") return Generator::FdOracle;
    throw std::invalid_argument("unknown generator: " + std::string(s));
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Train: return "train";
        case Provenance::TestSet1: return "test-set-1";
        case Provenance::TestSet2: return "test-set-2";
    }
    return "unknown";
}

bool DatasetMeta::same_content(const DatasetMeta& o) const {
    return generator == o.generator && provenance == o.provenance && equation == o.equation &&
           domain == o.domain && grid.resolution == o.grid.resolution &&
           grid.boundary_count == o.grid.boundary_count && master_seed == o.master_seed &&
           n_centers == o.n_centers && n_terms == o.n_terms && length_scale == o.length_scale &&
           sigma == o.sigma && h_oracle == o.h_oracle;
}

std::uint64_t sample_seed_for(Provenance p, std::uint64_t master, std::size_t index) {
    const SeedStream stream = p == Provenance::Train ? SeedStream::Train : SeedStream::Test;
    return derive_seed(master, stream, index);
}

std::uint64_t Dataset::sample_seed(std::size_t i) const { return sample_seed_for(meta.provenance, meta.master_seed, i); }

bool Dataset::same_content(const Dataset& o) const {
    return meta.same_content(o.meta) && n == o.n && boundary_size == o.boundary_size &&
           grid_size == o.grid_size && has_f == o.has_f && has_u == o.has_u && g == o.g && f == o.f && u == o.u;
}

Dataset assemble_dataset(const DatasetMeta& meta, const Domain& d, const std::vector<FieldSample>& samples) {
    Dataset ds;
    ds.meta = meta;
    ds.n = samples.size();
    ds.boundary_size = d.boundary_points().size();
    ds.grid_size = d.grid_nodes().size();
    ds.has_f = !samples.empty() && !samples.front().f.empty();
    ds.has_u = !samples.empty() && !samples.front().u.empty();
    ds.g.reserve(ds.n * ds.boundary_size);
    if (ds.has_f) ds.f.reserve(ds.n * ds.grid_size);
    if (ds.has_u) ds.u.reserve(ds.n * ds.grid_size);
    for (const auto& s : samples) {
        if (s.g.size() != ds.boundary_size || s.f.size() != (ds.has_f ? ds.grid_size : 0) ||
            s.u.size() != (ds.has_u ? ds.grid_size : 0)) {
            throw std::invalid_argument("assemble_dataset: inconsistent record sizes");
        }
        ds.g.insert(ds.g.end(), s.g.begin(), s.g.end());
        ds.f.insert(ds.f.end(), s.f.begin(), s.f.end());
        ds.u.insert(ds.u.end(), s.u.begin(), s.u.end());
    }
    return ds;
}

Domain domain_of(const Dataset& ds) { return build_domain(ds.meta.domain, ds.meta.grid); }

}  // namespace mad
