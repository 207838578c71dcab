// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace grocr {

enum class Family {
  reading,
  detection,
  conditional_detection,
  localized_reading,
};

enum class OutputFormat {
  text,
  text2d,
  lines,
  paragraphs,
  box,
};

std::string to_string(Family f);
std::string to_string(OutputFormat f);

/// Throws std::invalid_argument on unknown names.
Family family_from_string(std::string_view s);
OutputFormat output_format_from_string(std::string_view s);

}  // namespace grocr
