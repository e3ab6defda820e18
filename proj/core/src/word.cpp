#include "cms/word.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "cms/error.hpp"

namespace cms {

namespace {

void validate(const std::vector<Symbol>& symbols) {
  if (symbols.empty()) throw InvalidArgument("empty word");
  if (std::find(symbols.begin(), symbols.end(), Symbol{0}) != symbols.end()) {
    throw InvalidArgument("symbol 0 is not in the alphabet");
  }
}

}  // namespace

Word::Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) { validate(symbols_); }

Word::Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) { validate(symbols_); }

Word Word::parse(std::string_view text) {
  std::vector<Symbol> out;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(current, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad symbol '" + current + "' in word '" + std::string(text) + "'");
    }
    if (used != current.size()) throw InvalidArgument("bad symbol '" + current + "'");
    out.push_back(v);
    current.clear();
  };
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  if (!body.empty() && (body.front() == '(' || body.front() == '[')) {
    char close = body.front() == '(' ? ')' : ']';
    if (body.back() != close) throw InvalidArgument("unbalanced word '" + std::string(text) + "'");
    body = body.substr(1, body.size() - 2);
  }
  for (char c : body) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      current.push_back(c);
    } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      throw InvalidArgument("unexpected character '" + std::string(1, c) + "' in word '" + std::string(text) + "'");
    }
  }
  flush();
  return Word(std::move(out));
}

std::uint64_t Word::weight() const noexcept {
  std::uint64_t total = 0;
  for (Symbol s : symbols_) {
    if (total > std::numeric_limits<std::uint64_t>::max() - s) return std::numeric_limits<std::uint64_t>::max();
    total += s;
  }
  return total;
}

Symbol Word::max_symbol() const noexcept { return *std::max_element(symbols_.begin(), symbols_.end()); }

Word Word::prefix(std::size_t n) const {
  if (n == 0 || n > symbols_.size()) throw InvalidArgument("prefix length out of range");
  return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::appended(Symbol s) const {
  std::vector<Symbol> v = symbols_;
  v.push_back(s);
  return Word(std::move(v));
}

Word Word::concat(const Word& tail) const {
  std::vector<Symbol> v = symbols_;
  v.insert(v.end(), tail.symbols_.begin(), tail.symbols_.end());
  return Word(std::move(v));
}

bool Word::starts_with(std::span<const Symbol> prefix) const noexcept {
  return prefix.size() <= symbols_.size() && std::equal(prefix.begin(), prefix.end(), symbols_.begin());
}

std::string Word::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(symbols_[i]);
  }
  s += ')';
  return s;
}

bool canonical_less(const Word& a, const Word& b) noexcept {
  auto wa = a.weight();
  auto wb = b.weight();
  if (wa != wb) return wa < wb;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace cms
