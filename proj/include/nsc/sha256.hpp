#pragma once

#include <cstdint>
#include <string>

namespace nsc {

std::string sha256_hex(const void* data, std::size_t len);
inline std::string sha256_hex(const std::string& data) {
    return sha256_hex(data.data(), data.size());
}
std::string sha256_file(const std::string& path);

}  // namespace nsc
