// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <string>
#include <vector>

#include "codecarta/miner.hpp"

namespace codecarta {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Strips comment delimiters, returning the bare text lines.
std::vector<std::string> comment_lines(std::string_view raw) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  bool block = false;
  while (start <= raw.size()) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view s = line;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    bool opened = false;
    for (std::string_view p : {"///<", "//!<", "///", "//!"}) {
      if (s.starts_with(p)) {
        s.remove_prefix(p.size());
        opened = true;
        break;
      }
    }
    if (!opened) {
      for (std::string_view p : {"/**<", "/*!<", "/**", "/*!"}) {
        if (s.starts_with(p)) {
          s.remove_prefix(p.size());
          block = true;
          opened = true;
          break;
        }
      }
    }
    if (block) {
      bool closes = false;
      if (const auto close = s.rfind("*/"); close != std::string_view::npos) {
        s = s.substr(0, close);
        closes = true;
      }
      if (!opened) {
        std::string_view t = s;
        while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
        // Decorative leading asterisks of block comments.
        if (t.starts_with("*")) {
          while (t.starts_with("*")) t.remove_prefix(1);
          s = t;
        }
      }
      if (closes) block = false;
    }
    if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    lines.emplace_back(s);
    if (end == raw.size()) break;
  }
  return lines;
}

class Reducer {
 public:
  std::vector<std::string> run(const std::vector<std::string>& lines) {
    for (const std::string& line : lines) {
      const std::string_view t = trim(line);
      if (in_code_) {
        if (t.starts_with("@endcode") || t.starts_with("\\endcode") || t.starts_with("```")) {
          code_ += '`';
          paragraphs_.push_back(code_);
          code_.clear();
          in_code_ = false;
        } else if (!t.empty()) {
          if (code_.size() > 1) code_ += ' ';
          code_ += t;
        }
        continue;
      }
      if (t.starts_with("@code") || t.starts_with("\\code") || t.starts_with("```")) {
        flush();
        in_code_ = true;
        code_ = "`";
        continue;
      }
      if (t.empty()) {
        flush();
        continue;
      }
      process(t);
    }
    if (in_code_ && code_.size() > 1) paragraphs_.push_back(code_ + "`");
    flush();
    return std::move(paragraphs_);
  }

 private:
  void flush() {
    std::string collapsed;
    for (char c : current_) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!collapsed.empty() && collapsed.back() != ' ') collapsed += ' ';
      } else {
        collapsed += c;
      }
    }
    const std::string_view t = trim(collapsed);
    // A lone label such as "Returns:" carries nothing.
    if (!t.empty() && !(t.back() == ':' && t.find(' ') == std::string_view::npos)) paragraphs_.emplace_back(t);
    current_.clear();
  }

  void append(std::string_view text) { current_ += text; }

  void space() {
    if (!current_.empty() && current_.back() != ' ') current_ += ' ';
  }

  static std::string_view next_word(std::string_view s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::string_view w = s.substr(start, i - start);
    // Trailing punctuation stays outside the span.
    while (!w.empty() && (w.back() == '.' || w.back() == ',' || w.back() == ';' || w.back() == ':' || w.back() == ')')) {
      w.remove_suffix(1);
      --i;
    }
    return w;
  }

  void command(std::string_view name, std::string_view s, std::size_t& i) {
    if (name == "brief" || name == "short" || name == "details" || name == "summary") {
      if (name == "details") flush();
      return;
    }
    if (name == "c" || name == "p") {
      const std::string_view w = next_word(s, i);
      if (!w.empty()) {
        append("`");
        append(w);
        append("`");
      }
      return;
    }
    if (name == "a" || name == "e" || name == "em" || name == "b") {
      append(next_word(s, i));
      return;
    }
    if (name == "param" || name == "tparam") {
      while (i < s.size() && s[i] == ' ') ++i;
      if (i < s.size() && s[i] == '[') {
        const auto close = s.find(']', i);
        if (close != std::string_view::npos) i = close + 1;
      }
      const std::string_view w = next_word(s, i);
      flush();
      if (!w.empty()) {
        append("`");
        append(w);
        append("`:");
      }
      return;
    }
    std::string_view label;
    if (name == "return" || name == "returns" || name == "retval" || name == "result") label = "Returns:";
    if (name == "note" || name == "remark" || name == "remarks") label = "Note:";
    if (name == "see" || name == "sa") label = "See:";
    if (name == "throws" || name == "throw" || name == "exception") label = "Throws:";
    if (name == "deprecated") label = "Deprecated:";
    if (name == "warning") label = "Warning:";
    if (name == "pre") label = "Requires:";
    if (name == "post") label = "Ensures:";
    flush();
    append(label);
  }

  // Returns the number of characters consumed by a recognised XML tag.
  std::size_t tag(std::string_view s, std::size_t i) {
    const std::size_t close = s.find('>', i);
    if (close == std::string_view::npos) return 0;
    std::string_view body = s.substr(i + 1, close - i - 1);
    const bool end = body.starts_with("/");
    if (end) body.remove_prefix(1);
    const bool self_closing = body.ends_with("/");
    if (self_closing) body.remove_suffix(1);
    std::size_t n = 0;
    while (n < body.size() && std::isalpha(static_cast<unsigned char>(body[n]))) ++n;
    const std::string_view name = body.substr(0, n);
    if (name.empty()) return 0;
    if (name == "c" || name == "code" || name == "tt") {
      append("`");
      return close - i + 1;
    }
    if (name == "para" || name == "summary" || name == "remarks" || name == "p") {
      flush();
      return close - i + 1;
    }
    if (name == "returns") {
      flush();
      if (!end) append("Returns:");
      return close - i + 1;
    }
    if (name == "see" || name == "seealso" || name == "paramref" || name == "typeparamref") {
      for (std::string_view attr : {"cref=\"", "name=\"", "langword=\""}) {
        const auto at = body.find(attr);
        if (at == std::string_view::npos) continue;
        const auto stop = body.find('"', at + attr.size());
        if (stop == std::string_view::npos) break;
        append("`");
        append(body.substr(at + attr.size(), stop - at - attr.size()));
        append("`");
        break;
      }
      return close - i + 1;
    }
    if (name == "param" || name == "typeparam") {
      flush();
      if (!end) {
        const auto at = body.find("name=\"");
        if (at != std::string_view::npos) {
          const auto stop = body.find('"', at + 6);
          if (stop != std::string_view::npos) {
            append("`");
            append(body.substr(at + 6, stop - at - 6));
            append("`:");
          }
        }
      }
      return close - i + 1;
    }
    if (name == "b" || name == "i" || name == "em" || name == "strong" || name == "br") return close - i + 1;
    return 0;
  }

  void process(std::string_view s) {
    space();
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (c == '`') {
        const auto close = s.find('`', i + 1);
        if (close != std::string_view::npos) {
          append(s.substr(i, close - i + 1));
          i = close + 1;
          continue;
        }
      }
      if ((c == '@' || c == '\\') && i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1])) &&
          (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '(')) {
        std::size_t j = i + 1;
        while (j < s.size() && word_char(s[j])) ++j;
        const std::string_view name = s.substr(i + 1, j - i - 1);
        i = j;
        command(name, s, i);
        continue;
      }
      if (c == '<') {
        if (const std::size_t n = tag(s, i)) {
          i += n;
          continue;
        }
      }
      current_ += c;
      ++i;
    }
  }

  std::vector<std::string> paragraphs_;
  std::string current_;
  std::string code_;
  bool in_code_ = false;
};

}  // namespace

std::optional<DocComment> extract_doc_comment(std::string_view raw) {
  DocComment doc{Reducer().run(comment_lines(raw))};
  if (doc.paragraphs.empty()) return std::nullopt;
  return doc;
}

}  // namespace codecarta
