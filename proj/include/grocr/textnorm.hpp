// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>

namespace grocr {

/// Codepoint -> replacement table applied after NFKC (quotes, dashes,
/// bullets). The repository ships the authoritative copy as a versioned
/// data asset; see charmap_from_tsv().
using Charmap = std::map<char32_t, std::u32string>;

/// The built-in table, identical to assets/charmap.tsv.
const Charmap& default_charmap();

/// Parses the TSV asset format ("U+XXXX<TAB>replacement", '#' comments).
/// Throws std::runtime_error on malformed lines.
Charmap charmap_from_tsv(std::string_view tsv);

/// Installs a process-wide replacement table (loaded at startup by the CLI).
void set_charmap(Charmap table);

/// Normalization applied before every 1D text metric: NFKC, character
/// canonicalization, every whitespace character to a single space, control
/// characters dropped, runs collapsed, ends trimmed. Total and idempotent.
std::string normalize(std::string_view s);

/// The 2D-preserving variant used for text2d scoring: same canonicalization,
/// but newlines survive, intra-line spacing is kept as-is, trailing spaces
/// per row and trailing blank rows are removed.
std::string normalize_2d(std::string_view s);

}  // namespace grocr
