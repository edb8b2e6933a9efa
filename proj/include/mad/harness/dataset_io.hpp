#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "mad/dataset.hpp"

namespace mad {

inline constexpr std::uint16_t kDatasetFormatVersion = 1;
/// Fixed little-endian header preceding the record payload.
inline constexpr std::size_t kDatasetHeaderBytes = 112;

class DatasetFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Payload bytes: N * (Mb + [M if f] + [M if u]) * 8.
std::size_t dataset_payload_bytes(const Dataset& ds);

void save_dataset(const Dataset& ds, std::ostream& os);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

/// Throws DatasetFormatError on bad magic, unknown version, header counts
/// that disagree with the declared domain, or a payload whose length does
/// not match the counts.
Dataset load_dataset(std::istream& is);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace mad
