#include "msbsde/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace msbsde {

std::string format_roundtrip(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string format_sig(double value, int digits) {
    std::array<char, 64> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

}  // namespace msbsde
