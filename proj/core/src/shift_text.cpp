#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "cms/builtins.hpp"
#include "cms/error.hpp"

namespace cms {

namespace {

enum class DefaultRule { All, None, List };

class TextShift final : public ShiftDefinition {
 public:
  std::string name_ = "user";
  std::optional<Symbol> alphabet_;
  DefaultRule rule_ = DefaultRule::None;
  std::vector<Symbol> default_row_;
  std::map<Symbol, std::vector<Symbol>> rows_;

  std::string name() const override { return name_; }

  bool allowed(Symbol i, Symbol j) const override {
    if (alphabet_ && (i > *alphabet_ || j > *alphabet_)) return false;
    if (auto it = rows_.find(i); it != rows_.end()) return std::binary_search(it->second.begin(), it->second.end(), j);
    switch (rule_) {
      case DefaultRule::All:
        return true;
      case DefaultRule::None:
        return false;
      case DefaultRule::List:
        return std::binary_search(default_row_.begin(), default_row_.end(), j);
    }
    return false;
  }

  std::optional<Row> successors_hint(Symbol i, Symbol cap) const override {
    if (alphabet_ && i > *alphabet_) return Row{{}, false};
    const std::vector<Symbol>* list = nullptr;
    if (auto it = rows_.find(i); it != rows_.end()) {
      list = &it->second;
    } else if (rule_ == DefaultRule::List) {
      list = &default_row_;
    } else if (rule_ == DefaultRule::None) {
      return Row{{}, false};
    } else {
      return std::nullopt;
    }
    Row row;
    row.truncated = false;
    for (Symbol j : *list) {
      if (alphabet_ && j > *alphabet_) continue;
      if (j > cap) {
        row.truncated = true;
        break;
      }
      row.symbols.push_back(j);
    }
    return row;
  }

  Symbol symbol_cap_default() const override {
    if (alphabet_) return *alphabet_;
    Symbol hi = 1;
    for (const auto& [i, row] : rows_) {
      hi = std::max(hi, i);
      if (!row.empty()) hi = std::max(hi, row.back());
    }
    if (!default_row_.empty()) hi = std::max(hi, default_row_.back());
    return std::max<Symbol>(hi, 16);
  }

  ShiftTraits traits() const override {
    bool row_finite = alphabet_.has_value() || rule_ != DefaultRule::All;
    return {false, row_finite, row_finite, alphabet_};
  }
};

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<Symbol> parse_symbols(const std::string& text, std::size_t line_no) {
  std::vector<Symbol> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    Rational r;
    try {
      r = parse_rational(tok);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": bad symbol '" + tok + "'");
    }
    if (r.get_den() != 1 || r <= 0 || !r.get_num().fits_ulong_p()) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": symbols must be positive integers");
    }
    out.push_back(r.get_num().get_ui());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ShiftSpec parse_shift_text(std::istream& in) {
  auto def = std::make_shared<TextShift>();
  std::string line;
  std::size_t line_no = 0;
  bool saw_default = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'key: values'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "name") {
      if (value.empty()) throw InvalidArgument("line " + std::to_string(line_no) + ": empty name");
      def->name_ = value;
    } else if (key == "alphabet") {
      auto v = parse_symbols(value, line_no);
      if (v.size() != 1) throw InvalidArgument("line " + std::to_string(line_no) + ": alphabet takes one bound");
      def->alphabet_ = v.front();
    } else if (key == "default") {
      if (saw_default) throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate default rule");
      saw_default = true;
      if (value == "all") {
        def->rule_ = DefaultRule::All;
      } else if (value == "none") {
        def->rule_ = DefaultRule::None;
      } else {
        def->rule_ = DefaultRule::List;
        def->default_row_ = parse_symbols(value, line_no);
      }
    } else {
      auto id = parse_symbols(key, line_no);
      if (id.size() != 1) throw InvalidArgument("line " + std::to_string(line_no) + ": row key must be one symbol");
      if (!def->rows_.emplace(id.front(), parse_symbols(value, line_no)).second) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate row " + std::to_string(id.front()));
      }
    }
  }
  if (def->rows_.empty() && def->rule_ == DefaultRule::None) throw InvalidArgument("shift text defines no transitions");
  return ShiftSpec(std::move(def));
}

ShiftSpec parse_shift_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_shift_text(in);
}

ShiftSpec load_shift_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open shift file '" + path + "'");
  return parse_shift_text(in);
}

}  // namespace cms
