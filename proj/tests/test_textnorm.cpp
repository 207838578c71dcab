// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/textnorm.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "grocr/rng.hpp"
#include "grocr/utf8.hpp"

using namespace grocr;

namespace {

// Random strings mixing ASCII, whitespace variants, and mapped codepoints.
std::string fuzz_string(Rng& rng) {
  static const std::u32string pool =
      U"abcXYZ019 \t\n\r ‘’“”–—•ﬁＡé";
  std::u32string s;
  const int len = rng.int_in(0, 24);
  for (int i = 0; i < len; ++i) s.push_back(pool[rng.below(pool.size())]);
  return encode_utf8(s);
}

std::string collapse_spaces(const std::string& s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ') {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("normalize trims and collapses whitespace") {
  CHECK(normalize("  x  ") == "x");
  CHECK(normalize("a  b") == "a b");
  CHECK(normalize("a \t\r\n b") == "a b");
  CHECK(normalize("") == "");
  CHECK(normalize("   ") == "");
}

TEST_CASE("normalize applies compatibility normalization") {
  CHECK(normalize("ﬁle") == "file");      // fi ligature
  CHECK(normalize("Ｈｉ") == "Hi");    // fullwidth
  CHECK(normalize("①") == "1");           // circled one
}

TEST_CASE("normalize canonicalizes quotes, dashes, bullets") {
  CHECK(normalize("‘a’") == "'a'");
  CHECK(normalize("“q”") == "\"q\"");
  CHECK(normalize("a – b") == "a - b");
  CHECK(normalize("A — B") == "A - B");
  CHECK(normalize("• item") == "- item");
  CHECK(normalize("◦ x ▪ y") == "- x - y");
}

TEST_CASE("normalize never folds case") {
  CHECK(normalize("MiXeD Case") == "MiXeD Case");
}

TEST_CASE("normalize drops control characters") {
  CHECK(normalize("a\x01\x02z") == "az");
  CHECK(normalize("a​b") == "ab");  // zero-width space is a format char
}

TEST_CASE("normalize_2d preserves layout whitespace") {
  CHECK(normalize_2d("A   B \n") == "A   B");
  CHECK(normalize_2d("A\n\nB") == "A\n\nB");
  CHECK(normalize_2d("A — B") == "A - B");
  CHECK(normalize_2d("  lead kept") == "  lead kept");
  CHECK(normalize_2d("a\r\nb\rc") == "a\nb\nc");
  CHECK(normalize_2d("x\n\n\n") == "x");
  CHECK(normalize_2d("\n\n") == "");
}

TEST_CASE("normalization is idempotent") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string s = fuzz_string(rng);
    const std::string once = normalize(s);
    CHECK(normalize(once) == once);
    const std::string once2d = normalize_2d(s);
    CHECK(normalize_2d(once2d) == once2d);
  }
}

TEST_CASE("normalize output has no forbidden characters") {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string out = normalize(fuzz_string(rng));
    CHECK(out.find('\t') == std::string::npos);
    CHECK(out.find('\n') == std::string::npos);
    CHECK(out.find('\r') == std::string::npos);
    CHECK(out.find(" ") == std::string::npos);
    if (!out.empty()) {
      CHECK(out.front() != ' ');
      CHECK(out.back() != ' ');
      CHECK(out.find("  ") == std::string::npos);
    }
  }
}

TEST_CASE("single-line inputs agree across both normalizers") {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s = fuzz_string(rng);
    std::erase_if(s, [](char c) { return c == '\n' || c == '\r'; });
    CHECK(normalize(s) == collapse_spaces(normalize_2d(s)));
  }
}

TEST_CASE("charmap TSV asset matches the built-in table") {
  std::ifstream in(GROCR_TEST_ASSET_DIR "/charmap.tsv", std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(charmap_from_tsv(buf.str()) == default_charmap());
}

TEST_CASE("charmap parser rejects malformed lines") {
  CHECK_THROWS(charmap_from_tsv("not a line"));
  CHECK_THROWS(charmap_from_tsv("U+ZZZZ\t-"));
  const Charmap table = charmap_from_tsv("# comment\nU+2014\t-\n");
  CHECK(table.at(0x2014) == U"-");
}
