// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/textmetrics.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "grocr/textnorm.hpp"
#include "grocr/utf8.hpp"

namespace grocr {

namespace {

template <typename Seq>
std::int64_t edit_distance(const Seq& a, const Seq& b) {
  const Seq& shorter = a.size() <= b.size() ? a : b;
  const Seq& longer = a.size() <= b.size() ? b : a;
  const std::size_t m = shorter.size();
  std::vector<std::int64_t> row(m + 1);
  for (std::size_t i = 0; i <= m; ++i) row[i] = static_cast<std::int64_t>(i);
  for (std::size_t j = 1; j <= longer.size(); ++j) {
    std::int64_t diag = row[0];
    row[0] = static_cast<std::int64_t>(j);
    for (std::size_t i = 1; i <= m; ++i) {
      const std::int64_t saved = row[i];
      if (shorter[i - 1] == longer[j - 1]) {
        row[i] = diag;
      } else {
        row[i] = 1 + std::min({row[i - 1], row[i], diag});
      }
      diag = saved;
    }
  }
  return row[m];
}

std::vector<std::string> split_words(const std::string& normalized) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::size_t sp = normalized.find(' ', pos);
    if (sp == std::string::npos) {
      words.push_back(normalized.substr(pos));
      break;
    }
    if (sp > pos) words.push_back(normalized.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return words;
}

}  // namespace

std::int64_t levenshtein(std::string_view a, std::string_view b) {
  return edit_distance(decode_utf8(a), decode_utf8(b));
}

double cer(std::string_view pred, std::string_view ref, bool two_d) {
  const std::string np = two_d ? normalize_2d(pred) : normalize(pred);
  const std::string nr = two_d ? normalize_2d(ref) : normalize(ref);
  if (np.empty() && nr.empty()) return 0.0;
  if (np.empty() || nr.empty()) return 1.0;
  const std::u32string up = decode_utf8(np);
  const std::u32string ur = decode_utf8(nr);
  const auto longer = static_cast<std::int64_t>(std::max(up.size(), ur.size()));
  return static_cast<double>(edit_distance(up, ur)) / static_cast<double>(std::max<std::int64_t>(1, longer));
}

EditCounts word_align_counts(std::string_view pred, std::string_view ref) {
  const std::vector<std::string> p = split_words(normalize(pred));
  const std::vector<std::string> r = split_words(normalize(ref));
  const std::size_t m = p.size();
  const std::size_t n = r.size();

  // Full DP matrix with backtrace; word counts stay small enough per page.
  std::vector<std::vector<std::int32_t>> d(m + 1, std::vector<std::int32_t>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = static_cast<std::int32_t>(i);
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int32_t sub = d[i - 1][j - 1] + (p[i - 1] == r[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  EditCounts counts;
  counts.ref_words = static_cast<std::int64_t>(n);
  std::size_t i = m;
  std::size_t j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + (p[i - 1] == r[j - 1] ? 0 : 1)) {
      if (p[i - 1] != r[j - 1]) ++counts.substitutions;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++counts.insertions;  // extra predicted word
      --i;
    } else {
      ++counts.deletions;  // reference word with no counterpart
      --j;
    }
  }
  return counts;
}

double wer(std::string_view pred, std::string_view ref) {
  const std::string np = normalize(pred);
  const std::string nr = normalize(ref);
  if (np.empty() && nr.empty()) return 0.0;
  if (np.empty() || nr.empty()) return 1.0;
  const EditCounts c = word_align_counts(pred, ref);
  const std::int64_t errors = c.substitutions + c.deletions + c.insertions;
  return static_cast<double>(errors) / static_cast<double>(std::max<std::int64_t>(1, c.ref_words));
}

}  // namespace grocr
