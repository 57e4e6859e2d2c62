// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dspt5::util {

/// SHA-256 digest of `data`, as a lowercase hex string.
std::string sha256_hex(std::string_view data);

}  // namespace dspt5::util
