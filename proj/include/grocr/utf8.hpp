// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace grocr {

/// Decodes UTF-8 into Unicode scalar values. Invalid byte sequences become
/// U+FFFD, one replacement per bad byte.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);

void append_utf8(std::string& out, char32_t c);

}  // namespace grocr
