// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace grocr {

/// Word-level alignment decomposition: substitutions, deletions, insertions,
/// and the reference word count.
struct EditCounts {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t ref_words = 0;

  bool operator==(const EditCounts&) const = default;
};

/// Minimal single-character edit distance over Unicode scalar values.
/// Operates on the strings as given; callers normalize first.
std::int64_t levenshtein(std::string_view a, std::string_view b);

/// Character error rate with the longer-string denominator. Inputs are raw;
/// normalize (or normalize_2d when two_d is set) is applied internally.
/// Both sides empty -> 0; exactly one empty -> 1. Always in [0,1].
double cer(std::string_view pred, std::string_view ref, bool two_d = false);

/// (S+D+I)/max(1,N) over a minimal word-level alignment of the normalized
/// strings. Both empty -> 0; exactly one side empty -> 1. Not clamped above 1.
double wer(std::string_view pred, std::string_view ref);

/// The (S,D,I,N) decomposition behind wer. S+D+I equals the word-level
/// Levenshtein distance; any cost-minimal alignment gives the same sum.
EditCounts word_align_counts(std::string_view pred, std::string_view ref);

}  // namespace grocr
