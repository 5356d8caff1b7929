// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"

#include <cctype>

namespace codecarta::miner {

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexedFile run() {
    for (char c : src_) {
      if (c == '\0') throw LexError{1, 1, "binary content"};
    }
    while (pos_ < src_.size()) step();
    Tok end;
    end.kind = Tok::Kind::End;
    end.line = end.end_line = line_;
    end.column = end.end_column = col_;
    attach_pending(end);
    out_.tokens.push_back(std::move(end));
    out_.last_line = line_;
    return std::move(out_);
  }

 private:
  struct Cond {
    bool taking = true;
    bool taken_any = false;
    bool parent_taking = true;
  };

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
      at_line_start_ = true;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool skipping() const { return !conds_.empty() && !conds_.back().taking; }

  void step() {
    const char c = peek();
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      advance();
      return;
    }
    if (c == '#' && at_line_start_) {
      directive();
      return;
    }
    if (skipping()) {
      // Inside a discarded branch only directives matter.
      while (pos_ < src_.size() && peek() != '\n') advance();
      return;
    }
    at_line_start_ = false;
    if (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
      advance();
      while (peek() != '\n') advance();
      advance();
      return;
    }
    if (c == '/' && peek(1) == '/') {
      line_comment();
      return;
    }
    if (c == '/' && peek(1) == '*') {
      block_comment();
      return;
    }
    token();
  }

  void directive() {
    const std::uint32_t line = line_;
    std::string text;
    advance();  // '#'
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
        while (peek() != '\n') advance();
        advance();
        text += ' ';
        continue;
      }
      if (c == '\n') break;
      if (c == '/' && peek(1) == '*') {
        // Comments inside directives may span lines.
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw LexError{line, 1, "unterminated comment"};
        advance();
        advance();
        text += ' ';
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
        break;
      }
      text += c;
      advance();
    }
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
    const std::string name = text.substr(i, j - i);
    std::string rest = text.substr(j);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.erase(rest.begin());
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();

    if (name == "if" || name == "ifdef" || name == "ifndef") {
      Cond cond;
      cond.parent_taking = !skipping();
      const bool zero = name == "if" && rest == "0";
      cond.taking = cond.parent_taking && !zero;
      cond.taken_any = !zero;
      conds_.push_back(cond);
    } else if (name == "elif" || name == "elifdef" || name == "elifndef") {
      if (!conds_.empty()) {
        Cond& cond = conds_.back();
        const bool zero = name == "elif" && rest == "0";
        cond.taking = cond.parent_taking && !cond.taken_any && !zero;
        cond.taken_any = cond.taken_any || !zero;
      }
    } else if (name == "else") {
      if (!conds_.empty()) {
        Cond& cond = conds_.back();
        cond.taking = cond.parent_taking && !cond.taken_any;
        cond.taken_any = true;
      }
    } else if (name == "endif") {
      if (!conds_.empty()) conds_.pop_back();
    }
  }

  static std::string_view trim_left(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
  }

  void line_comment() {
    const std::uint32_t line = line_;
    const std::size_t start = pos_;
    while (pos_ < src_.size() && peek() != '\n') advance();
    std::string_view body = src_.substr(start, pos_ - start);
    if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
    const bool doc = (body.starts_with("///") && !body.starts_with("////")) || body.starts_with("//!");
    if (!doc) return;
    const bool trailing = body.size() > 3 && body[3] == '<';
    if (trailing) {
      add_trailing(std::string(body), line);
      return;
    }
    if (pending_doc_ >= 0 && pending_kind_ == PendingKind::Line && pending_line_ + 1 == line) {
      out_.docs[static_cast<std::size_t>(pending_doc_)] += '\n';
      out_.docs[static_cast<std::size_t>(pending_doc_)] += body;
    } else {
      out_.docs.emplace_back(body);
      pending_doc_ = static_cast<int>(out_.docs.size() - 1);
    }
    pending_kind_ = PendingKind::Line;
    pending_line_ = line;
  }

  void block_comment() {
    const std::uint32_t line = line_, col = col_;
    const std::size_t start = pos_;
    advance();
    advance();
    while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
    if (pos_ >= src_.size()) throw LexError{line, col, "unterminated comment"};
    advance();
    advance();
    const std::string_view body = src_.substr(start, pos_ - start);
    const bool doc = (body.starts_with("/**") && !body.starts_with("/***") && body != "/**/") || body.starts_with("/*!");
    if (!doc) return;
    if (body.size() > 3 && body[3] == '<') {
      add_trailing(std::string(body), line);
      return;
    }
    out_.docs.emplace_back(body);
    pending_doc_ = static_cast<int>(out_.docs.size() - 1);
    pending_kind_ = PendingKind::Block;
    pending_line_ = line_;
  }

  void add_trailing(std::string body, std::uint32_t line) {
    if (out_.tokens.empty()) return;
    Tok& last = out_.tokens.back();
    if (last.doc_after >= 0 && trailing_line_ + 1 == line) {
      out_.docs[static_cast<std::size_t>(last.doc_after)] += '\n';
      out_.docs[static_cast<std::size_t>(last.doc_after)] += body;
    } else if (last.doc_after < 0) {
      out_.docs.push_back(std::move(body));
      last.doc_after = static_cast<int>(out_.docs.size() - 1);
    }
    trailing_line_ = line;
  }

  void attach_pending(Tok& tok) {
    tok.doc_before = pending_doc_;
    pending_doc_ = -1;
  }

  void quoted(char quote, std::uint32_t line, std::uint32_t col) {
    advance();
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') {
        throw LexError{line, col, quote == '"' ? "unterminated string literal" : "unterminated character literal"};
      }
      if (peek() == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (peek() == quote) {
        advance();
        return;
      }
      advance();
    }
  }

  void raw_string(std::uint32_t line, std::uint32_t col) {
    advance();  // '"'
    std::string delim;
    while (pos_ < src_.size() && peek() != '(') {
      if (peek() == '\n' || delim.size() > 16) throw LexError{line, col, "malformed raw string delimiter"};
      delim += peek();
      advance();
    }
    if (pos_ >= src_.size()) throw LexError{line, col, "unterminated raw string literal"};
    advance();
    const std::string close = ")" + delim + "\"";
    const std::size_t end = src_.find(close, pos_);
    if (end == std::string_view::npos) throw LexError{line, col, "unterminated raw string literal"};
    while (pos_ < end + close.size()) advance();
  }

  void token() {
    Tok tok;
    tok.line = line_;
    tok.column = col_;
    const std::size_t start = pos_;
    const auto c = static_cast<unsigned char>(peek());
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(peek()))) advance();
      const std::string_view word = src_.substr(start, pos_ - start);
      const bool prefix = word == "R" || word == "u8R" || word == "uR" || word == "UR" || word == "LR";
      const bool char_prefix = word == "u8" || word == "u" || word == "U" || word == "L";
      if (prefix && peek() == '"') {
        raw_string(tok.line, tok.column);
        tok.kind = Tok::Kind::String;
      } else if (char_prefix && (peek() == '"' || peek() == '\'')) {
        const char q = peek();
        quoted(q, tok.line, tok.column);
        tok.kind = q == '"' ? Tok::Kind::String : Tok::Kind::Char;
      } else {
        tok.kind = Tok::Kind::Ident;
      }
    } else if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      while (pos_ < src_.size()) {
        const char d = peek();
        if ((d == 'e' || d == 'E' || d == 'p' || d == 'P') && (peek(1) == '+' || peek(1) == '-')) {
          advance();
          advance();
          continue;
        }
        if (d == '\'' && std::isalnum(static_cast<unsigned char>(peek(1)))) {
          advance();
          continue;
        }
        if (!std::isalnum(static_cast<unsigned char>(d)) && d != '.' && d != '_') break;
        advance();
      }
      tok.kind = Tok::Kind::Number;
    } else if (c == '"' || c == '\'') {
      quoted(static_cast<char>(c), tok.line, tok.column);
      tok.kind = c == '"' ? Tok::Kind::String : Tok::Kind::Char;
    } else {
      tok.kind = Tok::Kind::Punct;
      const std::string_view rest = src_.substr(pos_);
      std::size_t n = 1;
      if (rest.starts_with("...")) {
        n = 3;
      } else if (rest.starts_with("::") || rest.starts_with("->")) {
        n = 2;
      }
      for (std::size_t k = 0; k < n; ++k) advance();
    }
    tok.text = std::string(src_.substr(start, pos_ - start));
    tok.end_line = line_;
    tok.end_column = col_ - 1;
    attach_pending(tok);
    out_.tokens.push_back(std::move(tok));
  }

  enum class PendingKind { Line, Block };

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
  bool at_line_start_ = true;
  std::vector<Cond> conds_;
  LexedFile out_;
  int pending_doc_ = -1;
  PendingKind pending_kind_ = PendingKind::Line;
  std::uint32_t pending_line_ = 0;
  std::uint32_t trailing_line_ = 0;
};

}  // namespace

LexedFile lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace codecarta::miner
