#include "mad/harness/dataset_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "../detail/binary_io.hpp"

namespace mad {
namespace {

constexpr char kMagic[4] = {'M', 'A', 'D', 'S'};

template <class T>
T read(std::istream& is, const char* what) {
    try {
        return detail::get_le<T>(is, what);
    } catch (const detail::FormatError& e) {
        throw DatasetFormatError(e.what());
    }
}

std::size_t record_doubles(std::size_t mb, std::size_t m, bool has_f, bool has_u) {
    return mb + (has_f ? m : 0) + (has_u ? m : 0);
}

}  // namespace

std::size_t dataset_payload_bytes(const Dataset& ds) {
    return ds.n * record_doubles(ds.boundary_size, ds.grid_size, ds.has_f, ds.has_u) * sizeof(double);
}

void save_dataset(const Dataset& ds, std::ostream& os) {
    if (ds.g.size() != ds.n * ds.boundary_size || ds.f.size() != (ds.has_f ? ds.n * ds.grid_size : 0) ||
        ds.u.size() != (ds.has_u ? ds.n * ds.grid_size : 0)) {
        throw std::invalid_argument("save_dataset: arrays disagree with the declared counts");
    }
    const auto& m = ds.meta;
    os.write(kMagic, 4);
    detail::put_le<std::uint16_t>(os, kDatasetFormatVersion);
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(m.generator));
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(m.provenance));
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(m.equation.source));
    detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(m.domain));
    detail::put_le<std::uint8_t>(os, ds.has_f ? 1 : 0);
    detail::put_le<std::uint8_t>(os, ds.has_u ? 1 : 0);
    detail::put_le<std::uint32_t>(os, 0);
    detail::put_le<double>(os, m.equation.k);
    detail::put_le<std::int32_t>(os, m.grid.resolution);
    detail::put_le<std::int32_t>(os, m.grid.boundary_count);
    detail::put_le<std::uint64_t>(os, m.master_seed);
    detail::put_le<double>(os, m.generation_seconds);
    detail::put_le<std::uint32_t>(os, m.n_centers);
    detail::put_le<std::uint32_t>(os, m.n_terms);
    detail::put_le<double>(os, m.length_scale);
    detail::put_le<double>(os, m.sigma);
    detail::put_le<double>(os, m.h_oracle);
    detail::put_le<std::uint64_t>(os, ds.n);
    detail::put_le<std::uint64_t>(os, ds.boundary_size);
    detail::put_le<std::uint64_t>(os, ds.grid_size);
    detail::put_le<std::uint64_t>(os, dataset_payload_bytes(ds));
    for (std::size_t i = 0; i < ds.n; ++i) {
        detail::put_f64_block(os, ds.g_row(i));
        if (ds.has_f) detail::put_f64_block(os, ds.f_row(i));
        if (ds.has_u) detail::put_f64_block(os, ds.u_row(i));
    }
    if (!os) throw std::runtime_error("save_dataset: write failed");
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    save_dataset(ds, os);
}

Dataset load_dataset(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw DatasetFormatError("not a dataset file (bad magic)");
    }
    const auto version = read<std::uint16_t>(is, "version");
    if (version != kDatasetFormatVersion) {
        throw DatasetFormatError("unsupported dataset format version " + std::to_string(version) + " (expected " +
                                 std::to_string(kDatasetFormatVersion) + ")");
    }
    Dataset ds;
    auto& m = ds.meta;
    const auto gen = read<std::uint8_t>(is, "generator");
    const auto prov = read<std::uint8_t>(is, "provenance");
    const auto src = read<std::uint8_t>(is, "source mode");
    const auto dom = read<std::uint8_t>(is, "domain");
    const auto has_f = read<std::uint8_t>(is, "presence flags");
    const auto has_u = read<std::uint8_t>(is, "presence flags");
    read<std::uint32_t>(is, "reserved");
    if (gen > 4 || prov > 2 || src > 1 || dom > 3 || has_f > 1 || has_u > 1) {
        throw DatasetFormatError("dataset header has out-of-range enum fields");
    }
    m.generator = static_cast<Generator>(gen);
    m.provenance = static_cast<Provenance>(prov);
    m.equation.source = static_cast<SourceMode>(src);
    m.domain = static_cast<DomainKind>(dom);
    ds.has_f = has_f != 0;
    ds.has_u = has_u != 0;
    m.equation.k = read<double>(is, "k");
    m.grid.resolution = read<std::int32_t>(is, "resolution");
    m.grid.boundary_count = read<std::int32_t>(is, "boundary count");
    m.master_seed = read<std::uint64_t>(is, "seed");
    m.generation_seconds = read<double>(is, "generation time");
    m.n_centers = read<std::uint32_t>(is, "n_centers");
    m.n_terms = read<std::uint32_t>(is, "n_terms");
    m.length_scale = read<double>(is, "length scale");
    m.sigma = read<double>(is, "sigma");
    m.h_oracle = read<double>(is, "h_oracle");
    ds.n = read<std::uint64_t>(is, "N");
    ds.boundary_size = read<std::uint64_t>(is, "Mb");
    ds.grid_size = read<std::uint64_t>(is, "M");
    const auto payload = read<std::uint64_t>(is, "payload length");

    Domain d;
    try {
        d = domain_of(ds);
    } catch (const std::exception& e) {
        throw DatasetFormatError(std::string("dataset header describes an invalid domain: ") + e.what());
    }
    if (d.boundary_points().size() != ds.boundary_size || d.grid_nodes().size() != ds.grid_size) {
        throw DatasetFormatError("dataset counts disagree with the declared domain and grid");
    }
    const std::size_t per = record_doubles(ds.boundary_size, ds.grid_size, ds.has_f, ds.has_u);
    if (ds.n > 0 && per > 0 && payload / (per * sizeof(double)) != ds.n) {
        throw DatasetFormatError("declared record count disagrees with the payload length");
    }
    if (payload != dataset_payload_bytes(ds)) {
        throw DatasetFormatError("declared payload length disagrees with the record counts");
    }
    const auto here = is.tellg();
    if (here != std::streampos(-1)) {
        is.seekg(0, std::ios::end);
        const auto end = is.tellg();
        is.seekg(here);
        const auto remaining = static_cast<std::uint64_t>(end - here);
        if (remaining < payload) throw DatasetFormatError("truncated payload");
        if (remaining > payload) throw DatasetFormatError("trailing bytes after the declared payload");
    }
    ds.g.resize(ds.n * ds.boundary_size);
    if (ds.has_f) ds.f.resize(ds.n * ds.grid_size);
    if (ds.has_u) ds.u.resize(ds.n * ds.grid_size);
    try {
        for (std::size_t i = 0; i < ds.n; ++i) {
            detail::get_f64_block(is, {ds.g.data() + i * ds.boundary_size, ds.boundary_size}, "g");
            if (ds.has_f) detail::get_f64_block(is, {ds.f.data() + i * ds.grid_size, ds.grid_size}, "f");
            if (ds.has_u) detail::get_f64_block(is, {ds.u.data() + i * ds.grid_size, ds.grid_size}, "u");
        }
    } catch (const detail::FormatError& e) {
        throw DatasetFormatError(e.what());
    }
    return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return load_dataset(is);
}

}  // namespace mad
