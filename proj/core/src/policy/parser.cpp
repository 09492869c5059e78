#include "signcast/policy/parser.hpp"

#include <charconv>
#include <vector>

namespace signcast::policy {

PolicyParseError::PolicyParseError(const std::string& message, std::size_t position)
    : ArgumentError("policy syntax error at " + std::to_string(position) + ": " + message), position_(position) {}

namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool IsDelimiter(char c) { return IsSpace(c) || c == '(' || c == ')' || c == ',' || c == '@'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  AccessTree Parse() {
    AccessTree tree = ParseOr(1);
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return tree;
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const { throw PolicyParseError(message, pos_); }

  void SkipSpace() {
    while (pos_ < text_.size() && IsSpace(text_[pos_])) ++pos_;
  }

  // Next bare word without consuming it.
  std::string_view PeekWord() {
    SkipSpace();
    std::size_t end = pos_;
    while (end < text_.size() && !IsDelimiter(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  bool ConsumeKeyword(std::string_view kw) {
    if (PeekWord() != kw) return false;
    pos_ += kw.size();
    return true;
  }

  AccessTree Wrap(std::size_t start, std::size_t k, std::vector<AccessTree> items) {
    try {
      return AccessTree::Gate(k, std::move(items));
    } catch (const PolicyParseError&) {
      throw;
    } catch (const ArgumentError& e) {
      throw PolicyParseError(e.what(), start);
    }
  }

  AccessTree ParseOr(std::size_t level) {
    SkipSpace();
    const std::size_t start = pos_;
    std::vector<AccessTree> items{ParseAnd(level)};
    while (ConsumeKeyword("or")) items.push_back(ParseAnd(level));
    if (items.size() == 1) return std::move(items.front());
    return Wrap(start, 1, std::move(items));
  }

  AccessTree ParseAnd(std::size_t level) {
    SkipSpace();
    const std::size_t start = pos_;
    std::vector<AccessTree> items{ParsePrimary(level)};
    while (ConsumeKeyword("and")) items.push_back(ParsePrimary(level));
    if (items.size() == 1) return std::move(items.front());
    const std::size_t n = items.size();
    return Wrap(start, n, std::move(items));
  }

  AccessTree ParsePrimary(std::size_t level) {
    if (level > kMaxDepth * 2) Fail("policy nested too deeply");
    SkipSpace();
    if (pos_ >= text_.size()) Fail("expected attribute or '('");
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<AccessTree> items{ParseOr(level + 1)};
      SkipSpace();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        items.push_back(ParseOr(level + 1));
        SkipSpace();
      }
      if (pos_ >= text_.size() || text_[pos_] != ')') Fail("expected ')' or ','");
      ++pos_;
      SkipSpace();
      if (pos_ < text_.size() && text_[pos_] == '@') {
        ++pos_;
        SkipSpace();
        const std::size_t kpos = pos_;
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), k);
        if (ec != std::errc() || ptr == text_.data() + pos_) Fail("expected threshold after '@'");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        if (k < 1 || k > items.size()) {
          throw PolicyParseError("threshold " + std::to_string(k) + " out of range 1.." +
                                     std::to_string(items.size()),
                                 kpos);
        }
        return Wrap(start, k, std::move(items));
      }
      if (items.size() != 1) Fail("expected '@k' after a child list");
      return std::move(items.front());
    }
    if (IsDelimiter(c)) Fail(std::string("unexpected '") + c + "'");
    std::string_view word = PeekWord();
    if (word == "and" || word == "or") Fail("expected attribute, found keyword '" + std::string(word) + "'");
    pos_ += word.size();
    return AccessTree::Leaf(std::string(word));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

AccessTree ParsePolicy(std::string_view text) { return Parser(text).Parse(); }

}  // namespace signcast::policy
