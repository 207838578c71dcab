// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/fixtures.hpp"

#include <algorithm>
#include <string>

#include "grocr/rng.hpp"

namespace grocr {

namespace {

std::string random_word(Rng& rng) {
  const int len = rng.int_in(3, 8);
  std::string word;
  word.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) word.push_back(static_cast<char>('a' + rng.below(26)));
  return word;
}

std::string random_text(Rng& rng) {
  const int words = rng.int_in(2, 8);
  std::string text;
  for (int i = 0; i < words; ++i) {
    if (i) text.push_back(' ');
    text += random_word(rng);
  }
  return text;
}

Box union_box(const Box& a, const Box& b) {
  return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

PageRecord generate_page(std::uint64_t seed, int index) {
  Rng rng(hash_combine(seed, static_cast<std::uint64_t>(index)));
  PageRecord page;
  page.id = "page" + std::to_string(index);
  page.dims.width = rng.int_in(500, 1300);
  page.dims.height = rng.int_in(600, 1600);
  static const char* kDatasets[] = {"synth-a", "synth-b", "synth-c"};
  page.dataset = kDatasets[rng.below(3)];

  const int target_lines = static_cast<int>(rng.below(29));  // occasional empty pages
  const bool two_column = rng.below(4) == 0;
  const int line_height = rng.int_in(12, 25);
  int y = rng.int_in(20, 50);

  while (static_cast<int>(page.lines.size()) < target_lines &&
         y + line_height <= page.dims.height - 10) {
    if (two_column && rng.below(2) == 0 && page.dims.width >= 700) {
      const int mid = page.dims.width / 2;
      const int left_x1 = rng.int_in(15, 50);
      const int left_x2 = left_x1 + rng.int_in(120, mid - left_x1 - 30);
      const int right_x1 = mid + rng.int_in(10, 40);
      const int right_x2 = right_x1 + rng.int_in(120, page.dims.width - right_x1 - 15);
      page.lines.push_back({random_text(rng), {left_x1, y, left_x2, y + line_height}});
      page.lines.push_back({random_text(rng), {right_x1, y, right_x2, y + line_height}});
    } else {
      const int x1 = rng.int_in(15, 80);
      const int x2 = x1 + rng.int_in(150, page.dims.width - x1 - 15);
      page.lines.push_back({random_text(rng), {x1, y, x2, y + line_height}});
    }
    // A vertical gap of at least 2px keeps every line box disjoint.
    int gap = rng.int_in(2, 10);
    if (rng.below(6) == 0) gap += line_height + static_cast<int>(rng.below(40));
    y += line_height + gap;
  }

  // Group consecutive lines into paragraphs of 1-4 members.
  std::vector<GroundedSpan> paragraphs;
  std::size_t i = 0;
  while (i < page.lines.size()) {
    const std::size_t members =
        std::min<std::size_t>(1 + rng.below(4), page.lines.size() - i);
    GroundedSpan para = page.lines[i];
    for (std::size_t k = 1; k < members; ++k) {
      para.text += " " + page.lines[i + k].text;
      para.bbox = union_box(para.bbox, page.lines[i + k].bbox);
    }
    paragraphs.push_back(std::move(para));
    i += members;
  }
  page.paragraphs = std::move(paragraphs);
  return page;
}

}  // namespace

std::vector<PageRecord> generate_fixture_pages(std::uint64_t seed, int n) {
  std::vector<PageRecord> pages;
  pages.reserve(static_cast<std::size_t>(std::max(0, n)));
  for (int i = 0; i < n; ++i) pages.push_back(generate_page(seed, i));
  return pages;
}

}  // namespace grocr
