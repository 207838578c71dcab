// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/outparse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace grocr {

using nlohmann::json;

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

ParsedOutput make_invalid(std::vector<std::string> diagnostics) {
  ParsedOutput out;
  out.kind = ParseKind::invalid;
  if (diagnostics.empty()) diagnostics.emplace_back("invalid output");
  out.diagnostics = std::move(diagnostics);
  return out;
}

// ---------------------------------------------------------------------------
// Structural repair
// ---------------------------------------------------------------------------

class Rewriter {
 public:
  explicit Rewriter(std::string_view src) : src_(src) {}

  std::string run(std::vector<std::string>& notes) {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '/' && peek(1) == '/') {
        skip_line_comment();
      } else if (c == '/' && peek(1) == '*') {
        skip_block_comment();
      } else if (c == '"') {
        copy_double_string();
      } else if (c == '\'') {
        convert_single_string();
      } else if (c == '{' || c == '[') {
        stack_.push_back({c, c == '{'});
        out_.push_back(c);
        ++pos_;
      } else if (c == '}' || c == ']') {
        handle_closer(c);
      } else if (c == ',') {
        handle_comma();
      } else if (c == ':') {
        if (!stack_.empty() && stack_.back().is_object) stack_.back().expect_key = false;
        out_.push_back(c);
        ++pos_;
      } else if (in_key_position() && is_ident_start(c)) {
        quote_bare_key();
      } else {
        out_.push_back(c);
        ++pos_;
      }
    }
    finish();
    notes = std::move(notes_);
    return std::move(out_);
  }

 private:
  struct Ctx {
    char opener;
    bool is_object;
    bool expect_key = true;
  };

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void note(const std::string& msg) {
    if (std::find(notes_.begin(), notes_.end(), msg) == notes_.end()) notes_.push_back(msg);
  }

  bool in_key_position() const {
    return !stack_.empty() && stack_.back().is_object && stack_.back().expect_key;
  }

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '-' ||
           c == '.';
  }

  char last_significant() const {
    for (auto it = out_.rbegin(); it != out_.rend(); ++it) {
      if (!is_ws(*it)) return *it;
    }
    return '\0';
  }

  void skip_line_comment() {
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    note("removed line comment");
  }

  void skip_block_comment() {
    pos_ += 2;
    while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) ++pos_;
    pos_ = std::min(pos_ + 2, src_.size());
    note("removed block comment");
  }

  // Copies a double-quoted string, closing it at line end or EOF and
  // escaping raw control characters so the strict parser accepts it.
  void copy_double_string() {
    out_.push_back('"');
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        out_.push_back('\\');
        out_.push_back(src_[pos_ + 1]);
        pos_ += 2;
        continue;
      }
      if (c == '"') {
        out_.push_back('"');
        ++pos_;
        return;
      }
      if (c == '\n' || c == '\r') {
        out_.push_back('"');
        note("closed unterminated string at line end");
        return;  // the newline re-enters the structural walk
      }
      if (static_cast<unsigned char>(c) < 0x20) {
        if (c == '\t') {
          out_ += "\\t";
        } else {
          out_ += "\\u00";
          out_ += two_hex(c);
        }
        note("escaped control character in string");
        ++pos_;
        continue;
      }
      out_.push_back(c);
      ++pos_;
    }
    out_.push_back('"');
    note("closed unterminated string at end of input");
  }

  static std::string two_hex(char c) {
    static const char* digits = "0123456789abcdef";
    const auto u = static_cast<unsigned char>(c);
    return std::string{digits[(u >> 4) & 0xF], digits[u & 0xF]};
  }

  void convert_single_string() {
    out_.push_back('"');
    ++pos_;
    note("converted single-quoted string");
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\' && peek(1) == '\'') {
        out_.push_back('\'');
        pos_ += 2;
        continue;
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        out_.push_back('\\');
        out_.push_back(src_[pos_ + 1]);
        pos_ += 2;
        continue;
      }
      if (c == '\'') {
        out_.push_back('"');
        ++pos_;
        return;
      }
      if (c == '"') {
        out_ += "\\\"";
        ++pos_;
        continue;
      }
      if (c == '\n' || c == '\r') {
        out_.push_back('"');
        note("closed unterminated string at line end");
        return;
      }
      if (static_cast<unsigned char>(c) < 0x20) {
        if (c == '\t') {
          out_ += "\\t";
        } else {
          out_ += "\\u00";
          out_ += two_hex(c);
        }
        note("escaped control character in string");
        ++pos_;
        continue;
      }
      out_.push_back(c);
      ++pos_;
    }
    out_.push_back('"');
    note("closed unterminated string at end of input");
  }

  void handle_closer(char c) {
    const char expected_opener = c == '}' ? '{' : '[';
    if (!stack_.empty() && stack_.back().opener == expected_opener) {
      stack_.pop_back();
      out_.push_back(c);
    } else {
      note("dropped mismatched closing bracket");
    }
    ++pos_;
  }

  // Next significant position at or after p, skipping whitespace and comments.
  std::size_t next_significant(std::size_t p) const {
    while (p < src_.size()) {
      const char c = src_[p];
      if (is_ws(c)) {
        ++p;
      } else if (c == '/' && p + 1 < src_.size() && src_[p + 1] == '/') {
        while (p < src_.size() && src_[p] != '\n') ++p;
      } else if (c == '/' && p + 1 < src_.size() && src_[p + 1] == '*') {
        p += 2;
        while (p < src_.size() && !(src_[p] == '*' && p + 1 < src_.size() && src_[p + 1] == '/')) ++p;
        p = std::min(p + 2, src_.size());
      } else {
        break;
      }
    }
    return p;
  }

  void handle_comma() {
    const std::size_t next = next_significant(pos_ + 1);
    if (next >= src_.size() || src_[next] == '}' || src_[next] == ']') {
      note("removed trailing comma");
      ++pos_;
      return;
    }
    if (!stack_.empty() && stack_.back().is_object) stack_.back().expect_key = true;
    out_.push_back(',');
    ++pos_;
  }

  void quote_bare_key() {
    std::size_t end = pos_;
    while (end < src_.size() && is_ident_char(src_[end])) ++end;
    out_.push_back('"');
    out_.append(src_.substr(pos_, end - pos_));
    out_.push_back('"');
    note("quoted bare key");
    pos_ = end;
  }

  void finish() {
    if (!stack_.empty()) {
      if (last_significant() == ':') {
        out_ += "null";
        note("completed dangling key with null");
      }
      while (!stack_.empty()) {
        out_.push_back(stack_.back().opener == '{' ? '}' : ']');
        stack_.pop_back();
      }
      note("closed unbalanced brackets at end");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::string out_;
  std::vector<Ctx> stack_;
  std::vector<std::string> notes_;
};

// ---------------------------------------------------------------------------
// Record normalization helpers
// ---------------------------------------------------------------------------

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> to_number(const json& v, bool& coerced) {
  if (v.is_number()) return v.get<double>();
  if (v.is_boolean() || v.is_null()) return std::nullopt;
  if (v.is_string()) {
    const std::string_view s = trim(v.get_ref<const std::string&>());
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), parsed);
    if (ec == std::errc() && ptr == s.data() + s.size()) {
      coerced = true;
      return parsed;
    }
  }
  return std::nullopt;
}

std::optional<std::array<double, 4>> to_coords(const json& v, std::vector<std::string>& diags) {
  if (!v.is_array() || v.size() != 4) return std::nullopt;
  std::array<double, 4> coords{};
  bool coerced = false;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto num = to_number(v[i], coerced);
    if (!num || !std::isfinite(*num)) return std::nullopt;
    coords[i] = *num;
  }
  if (coerced) {
    diags.emplace_back("coerced numeric string inside bbox");
  }
  return coords;
}

std::optional<Box> coords_to_box(std::array<double, 4> coords, const ImageDims& dims,
                                 CoordSpace space) {
  if (space == CoordSpace::normalized_1000) {
    coords[0] = coords[0] * dims.width / 1000.0;
    coords[2] = coords[2] * dims.width / 1000.0;
    coords[1] = coords[1] * dims.height / 1000.0;
    coords[3] = coords[3] * dims.height / 1000.0;
  }
  return clip_box(coords, dims);
}

// Key selection priority: exact "text", then any key containing "text",
// then any key containing "label"; within a tier the lexicographically
// smallest key wins (object keys are already sorted).
const json* find_text_value(const json& obj) {
  const json* contains_text = nullptr;
  const json* contains_label = nullptr;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = lowercase(it.key());
    if (key == "text") return &it.value();
    if (!contains_text && key.find("text") != std::string::npos) contains_text = &it.value();
    if (!contains_label && key.find("label") != std::string::npos) contains_label = &it.value();
  }
  return contains_text ? contains_text : contains_label;
}

const json* find_box_value(const json& obj) {
  const json* contains_box = nullptr;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = lowercase(it.key());
    if (key == "bbox") return &it.value();
    if (!contains_box && key.find("box") != std::string::npos) contains_box = &it.value();
  }
  return contains_box;
}

bool looks_like_coords(const json& v) {
  if (!v.is_array() || v.size() != 4) return false;
  for (const auto& item : v) {
    bool coerced = false;
    if (!to_number(item, coerced)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(ParseKind k) {
  switch (k) {
    case ParseKind::plain_text: return "PlainText";
    case ParseKind::spans: return "Spans";
    case ParseKind::boxes: return "Boxes";
    case ParseKind::invalid: return "Invalid";
  }
  throw std::logic_error("unknown ParseKind");
}

std::string strip_code_fence(std::string_view raw) {
  // Line-oriented: content between the first fence line and its closer (or
  // EOF). Anything outside the fence is dropped.
  std::size_t pos = 0;
  std::optional<std::size_t> content_start;
  while (pos <= raw.size()) {
    const std::size_t eol = raw.find('\n', pos);
    const std::size_t line_end = eol == std::string_view::npos ? raw.size() : eol;
    const std::string_view line = trim(raw.substr(pos, line_end - pos));
    if (line.substr(0, 3) == "```") {
      if (!content_start) {
        content_start = line_end == raw.size() ? raw.size() : line_end + 1;
      } else {
        std::string_view content = raw.substr(*content_start, pos - *content_start);
        if (!content.empty() && content.back() == '\n') content.remove_suffix(1);
        return std::string(content);
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  if (content_start) {
    return std::string(raw.substr(*content_start));
  }
  return std::string(raw);
}

std::string extract_candidate(std::string_view raw) {
  const std::string stripped = strip_code_fence(raw);
  // Largest balanced [...] or {...} region, skipping double-quoted strings.
  std::size_t best_start = 0;
  std::size_t best_len = 0;
  std::vector<char> stack;
  std::size_t region_start = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < stripped.size(); ++i) {
    const char c = stripped[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      if (stack.empty()) region_start = i;
      stack.push_back(c);
    } else if (c == ']' || c == '}') {
      const char opener = c == ']' ? '[' : '{';
      if (!stack.empty() && stack.back() == opener) {
        stack.pop_back();
        if (stack.empty()) {
          const std::size_t len = i - region_start + 1;
          if (len > best_len) {
            best_len = len;
            best_start = region_start;
          }
        }
      } else {
        stack.clear();
      }
    }
  }
  if (best_len == 0) return stripped;
  return stripped.substr(best_start, best_len);
}

RepairResult repair(std::string_view candidate) {
  RepairResult result;
  Rewriter rewriter(candidate);
  const std::string repaired = rewriter.run(result.notes);
  if (trim(repaired).empty()) {
    result.notes.emplace_back("empty candidate");
    return result;
  }
  try {
    result.value = json::parse(repaired);
  } catch (const json::parse_error& e) {
    result.notes.emplace_back("unrecoverable at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return result;
}

ParsedOutput normalize_records(const json& value, const ImageDims& dims, CoordSpace coords) {
  ParsedOutput out;
  if (!value.is_array()) {
    return make_invalid({"top-level value is not an array"});
  }

  // A bare [x1,y1,x2,y2] counts as a single box.
  if (looks_like_coords(value)) {
    out.kind = ParseKind::boxes;
    const auto c = to_coords(value, out.diagnostics);
    if (!c) {
      out.diagnostics.emplace_back("dropped malformed box entry");
    } else if (auto box = coords_to_box(*c, dims, coords)) {
      out.boxes.push_back(*box);
    } else {
      out.diagnostics.emplace_back("dropped degenerate box");
    }
    if (out.boxes.empty()) return make_invalid(std::move(out.diagnostics));
    return out;
  }

  bool any_object = false;
  bool any_array = false;
  for (const auto& item : value) {
    if (item.is_object()) {
      any_object = true;
    } else if (item.is_array()) {
      any_array = true;
    } else {
      return make_invalid({"array items are neither records nor boxes"});
    }
  }
  if (any_object && any_array) {
    return make_invalid({"mixed record shapes in one array"});
  }

  if (any_array || value.empty()) {
    out.kind = ParseKind::boxes;
    for (const auto& item : value) {
      const auto c = to_coords(item, out.diagnostics);
      if (!c) {
        out.diagnostics.emplace_back("dropped malformed box entry");
        continue;
      }
      if (auto box = coords_to_box(*c, dims, coords)) {
        out.boxes.push_back(*box);
      } else {
        out.diagnostics.emplace_back("dropped degenerate box");
      }
    }
    // "[]" is an explicit empty prediction; a nonempty array where nothing
    // survived yields no usable boxes and counts as invalid.
    if (out.boxes.empty() && !value.empty()) {
      return make_invalid(std::move(out.diagnostics));
    }
    return out;
  }

  out.kind = ParseKind::spans;
  for (const auto& item : value) {
    const json* box_value = find_box_value(item);
    if (!box_value) {
      out.diagnostics.emplace_back("dropped record without a box key");
      continue;
    }
    const auto c = to_coords(*box_value, out.diagnostics);
    if (!c) {
      out.diagnostics.emplace_back("dropped record with malformed bbox");
      continue;
    }
    const auto box = coords_to_box(*c, dims, coords);
    if (!box) {
      out.diagnostics.emplace_back("dropped degenerate box");
      continue;
    }
    GroundedSpan span;
    span.bbox = *box;
    if (const json* text_value = find_text_value(item)) {
      if (text_value->is_string()) {
        span.text = text_value->get<std::string>();
      } else {
        out.diagnostics.emplace_back("non-string text value treated as empty");
      }
    } else {
      out.diagnostics.emplace_back("record missing a text key");
    }
    out.spans.push_back(std::move(span));
  }
  if (out.spans.empty() && !value.empty()) {
    return make_invalid(std::move(out.diagnostics));
  }
  return out;
}

ParsedOutput parse_prediction(std::string_view raw, OutputFormat expected, const ImageDims& dims,
                              CoordSpace coords) {
  if (expected == OutputFormat::text || expected == OutputFormat::text2d) {
    ParsedOutput out;
    out.kind = ParseKind::plain_text;
    out.text = strip_code_fence(raw);
    return out;
  }

  const std::string candidate = extract_candidate(raw);
  RepairResult repaired = repair(candidate);
  if (!repaired.value) {
    return make_invalid(std::move(repaired.notes));
  }
  ParsedOutput out = normalize_records(*repaired.value, dims, coords);
  out.diagnostics.insert(out.diagnostics.begin(), repaired.notes.begin(), repaired.notes.end());
  if (out.kind == ParseKind::invalid) {
    return out;
  }

  if (expected == OutputFormat::box) {
    if (out.kind == ParseKind::spans) {
      // Grounded records where bare boxes were expected: keep the geometry.
      out.kind = ParseKind::boxes;
      for (auto& span : out.spans) out.boxes.push_back(span.bbox);
      out.spans.clear();
      out.diagnostics.emplace_back("span records supplied for a box task; texts ignored");
    }
    return out;
  }

  // lines / paragraphs expect text+bbox records.
  if (out.kind == ParseKind::boxes) {
    if (out.boxes.empty()) {
      out.kind = ParseKind::spans;  // "[]" is a valid empty prediction
      return out;
    }
    auto diags = std::move(out.diagnostics);
    diags.emplace_back("bare boxes supplied where text+bbox records were expected");
    return make_invalid(std::move(diags));
  }
  return out;
}

}  // namespace grocr
