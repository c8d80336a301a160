#pragma once

#include <cstdint>
#include <string>

// Hex digest of the SHA-256 of a byte string; used for manifest content
// hashes.
std::string sha256_hex(const std::string& data);
