// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/textnorm.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>
#include <vector>

#include "grocr/embedded_assets.hpp"
#include "grocr/utf8.hpp"

namespace grocr {

namespace {

Charmap& active_charmap() {
  static Charmap table = charmap_from_tsv(embedded::kCharmapTsv);
  return table;
}

std::string nfkc(std::string_view s) {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFKCInstance(ec);
  if (U_FAILURE(ec)) {
    throw std::runtime_error("ICU NFKC instance unavailable");
  }
  const icu::UnicodeString in =
      icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int>(s.size())));
  const icu::UnicodeString out = norm->normalize(in, ec);
  if (U_FAILURE(ec)) {
    throw std::runtime_error("ICU NFKC normalization failed");
  }
  std::string utf8;
  out.toUTF8String(utf8);
  return utf8;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

// Non-whitespace control and format characters would poison edit distances.
bool is_dropped_control(char32_t c) {
  const auto type = u_charType(static_cast<UChar32>(c));
  return type == U_CONTROL_CHAR || type == U_FORMAT_CHAR;
}

bool is_line_separator(char32_t c) {
  return c == U'\n' || c == 0x85 || c == 0x2028 || c == 0x2029;
}

// NFKC followed by the quote/dash/bullet table.
std::u32string canonicalize(std::string_view s) {
  const std::u32string cps = decode_utf8(nfkc(s));
  const Charmap& map = active_charmap();
  std::u32string out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    auto it = map.find(c);
    if (it != map.end()) {
      out.append(it->second);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

Charmap charmap_from_tsv(std::string_view tsv) {
  Charmap table;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= tsv.size()) {
    const std::size_t eol = tsv.find('\n', pos);
    std::string_view line = tsv.substr(pos, eol == std::string_view::npos ? tsv.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? tsv.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.substr(0, 2) != "U+") {
      throw std::runtime_error("charmap: malformed line " + std::to_string(line_no));
    }
    char32_t cp = 0;
    for (char ch : line.substr(2, tab - 2)) {
      int digit;
      if (ch >= '0' && ch <= '9') digit = ch - '0';
      else if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
      else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
      else throw std::runtime_error("charmap: bad codepoint on line " + std::to_string(line_no));
      cp = cp * 16 + static_cast<char32_t>(digit);
    }
    table[cp] = decode_utf8(line.substr(tab + 1));
  }
  return table;
}

const Charmap& default_charmap() {
  static const Charmap table = charmap_from_tsv(embedded::kCharmapTsv);
  return table;
}

void set_charmap(Charmap table) { active_charmap() = std::move(table); }

std::string normalize(std::string_view s) {
  const std::u32string cps = canonicalize(s);
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (is_whitespace(c) || is_line_separator(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (is_dropped_control(c)) continue;
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return encode_utf8(out);
}

std::string normalize_2d(std::string_view s) {
  const std::u32string cps = canonicalize(s);
  std::u32string flat;
  flat.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (c == U'\r') {
      if (i + 1 < cps.size() && cps[i + 1] == U'\n') continue;
      flat.push_back(U'\n');
    } else if (is_line_separator(c)) {
      flat.push_back(U'\n');
    } else if (is_whitespace(c)) {
      flat.push_back(U' ');
    } else if (is_dropped_control(c)) {
      // dropped
    } else {
      flat.push_back(c);
    }
  }

  // Strip trailing spaces per row, then trailing blank rows.
  std::vector<std::u32string> rows;
  rows.emplace_back();
  for (char32_t c : flat) {
    if (c == U'\n') {
      rows.emplace_back();
    } else {
      rows.back().push_back(c);
    }
  }
  for (auto& row : rows) {
    while (!row.empty() && row.back() == U' ') row.pop_back();
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();

  std::u32string joined;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) joined.push_back(U'\n');
    joined.append(rows[i]);
  }
  return encode_utf8(joined);
}

}  // namespace grocr
