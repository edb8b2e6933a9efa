#pragma once

#include <filesystem>
#include <iosfwd>

#include "mad/neural/deeponet.hpp"

namespace mad::nn {

inline constexpr std::uint16_t kModelFormatVersion = 1;

/// Binary model file: "MADN", u16 version, u32 manifest length, JSON
/// architecture manifest, then one (u64 count, f64 values) block per network
/// in parameter order. All integers and floats are little-endian.
void save_model(const OperatorModel& model, std::ostream& os);
void save_model(const OperatorModel& model, const std::filesystem::path& path);
OperatorModel load_model(std::istream& is);
OperatorModel load_model(const std::filesystem::path& path);

}  // namespace mad::nn
