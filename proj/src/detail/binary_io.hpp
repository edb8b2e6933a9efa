#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace mad::detail {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is, const char* what) {
    std::uint8_t b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw FormatError(std::string("truncated file reading ") + what);
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

inline void put_f64_block(std::ostream& os, std::span<const double> v) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        for (double x : v) put_le(os, x);
    }
}

inline void get_f64_block(std::istream& is, std::span<double> v, const char* what) {
    if constexpr (std::endian::native == std::endian::little) {
        const auto bytes = static_cast<std::streamsize>(v.size() * sizeof(double));
        if (!is.read(reinterpret_cast<char*>(v.data()), bytes)) {
            throw FormatError(std::string("truncated payload reading ") + what);
        }
    } else {
        for (double& x : v) x = get_le<double>(is, what);
    }
}

}  // namespace mad::detail
