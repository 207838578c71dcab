// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/format.hpp"

#include <stdexcept>

namespace grocr {

std::string to_string(Family f) {
  switch (f) {
    case Family::reading: return "reading";
    case Family::detection: return "detection";
    case Family::conditional_detection: return "conditional_detection";
    case Family::localized_reading: return "localized_reading";
  }
  throw std::logic_error("unknown Family");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::text: return "text";
    case OutputFormat::text2d: return "text2d";
    case OutputFormat::lines: return "lines";
    case OutputFormat::paragraphs: return "paragraphs";
    case OutputFormat::box: return "box";
  }
  throw std::logic_error("unknown OutputFormat");
}

Family family_from_string(std::string_view s) {
  if (s == "reading") return Family::reading;
  if (s == "detection") return Family::detection;
  if (s == "conditional_detection") return Family::conditional_detection;
  if (s == "localized_reading") return Family::localized_reading;
  throw std::invalid_argument("unknown task family: " + std::string(s));
}

OutputFormat output_format_from_string(std::string_view s) {
  if (s == "text") return OutputFormat::text;
  if (s == "text2d") return OutputFormat::text2d;
  if (s == "lines") return OutputFormat::lines;
  if (s == "paragraphs") return OutputFormat::paragraphs;
  if (s == "box") return OutputFormat::box;
  throw std::invalid_argument("unknown output format: " + std::string(s));
}

}  // namespace grocr
