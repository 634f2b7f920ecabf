#include "bpn/formula.hpp"

#include <cctype>

#include "bpn/error.hpp"

namespace bpn {

struct Formula::Rep {
  Kind kind;
  std::string name;
  Formula a, b;
  std::string text;
};

namespace {

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

Formula::Formula() : Formula(one()) {}

Formula Formula::pos(const std::string& name) {
  if (!valid_name(name)) throw Error(ErrorCode::ParseError, "bad atom name '" + name + "'");
  auto r = std::make_shared<Rep>(Rep{Kind::Pos, name, {}, {}, name + "+"});
  return Formula(std::move(r));
}

Formula Formula::neg(const std::string& name) {
  if (!valid_name(name)) throw Error(ErrorCode::ParseError, "bad atom name '" + name + "'");
  auto r = std::make_shared<Rep>(Rep{Kind::Neg, name, {}, {}, name + "-"});
  return Formula(std::move(r));
}

Formula Formula::one() {
  static const Formula f(std::shared_ptr<const Rep>(new Rep{Kind::One, "", Formula(nullptr), Formula(nullptr), "1"}));
  return f;
}

Formula Formula::bot() {
  static const Formula f(std::shared_ptr<const Rep>(new Rep{Kind::Bot, "", Formula(nullptr), Formula(nullptr), "bot"}));
  return f;
}

Formula Formula::tensor(const Formula& a, const Formula& b) {
  return Formula(std::make_shared<Rep>(Rep{Kind::Tensor, "", a, b, "(" + a.str() + " * " + b.str() + ")"}));
}

Formula Formula::par(const Formula& a, const Formula& b) {
  return Formula(std::make_shared<Rep>(Rep{Kind::Par, "", a, b, "(" + a.str() + " | " + b.str() + ")"}));
}

Formula::Kind Formula::kind() const { return rep_->kind; }
const std::string& Formula::name() const { return rep_->name; }
const Formula& Formula::left() const { return rep_->a; }
const Formula& Formula::right() const { return rep_->b; }
std::string Formula::str() const { return rep_->text; }

bool Formula::operator==(const Formula& o) const { return rep_ == o.rep_ || rep_->text == o.rep_->text; }

Formula Formula::dual() const {
  switch (kind()) {
    case Kind::Pos: return neg(name());
    case Kind::Neg: return pos(name());
    case Kind::One: return bot();
    case Kind::Bot: return one();
    case Kind::Tensor: return par(left().dual(), right().dual());
    case Kind::Par: return tensor(left().dual(), right().dual());
  }
  return *this;
}

std::set<std::string> Formula::atom_names() const {
  if (is_atom()) return {name()};
  if (is_unit()) return {};
  auto s = left().atom_names();
  auto t = right().atom_names();
  s.insert(t.begin(), t.end());
  return s;
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(i) + " in '" + s + "'");
  }
  Formula parse() {
    skip();
    if (i >= s.size()) fail("unexpected end");
    if (s[i] == '(') {
      ++i;
      Formula a = parse();
      skip();
      if (i >= s.size() || (s[i] != '*' && s[i] != '|')) fail("expected '*' or '|'");
      char op = s[i++];
      Formula b = parse();
      skip();
      if (i >= s.size() || s[i] != ')') fail("expected ')'");
      ++i;
      return op == '*' ? Formula::tensor(a, b) : Formula::par(a, b);
    }
    std::size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    std::string word = s.substr(start, i - start);
    if (word == "1") return Formula::one();
    if (word == "bot") return Formula::bot();
    if (word.empty()) fail("expected a formula");
    if (i < s.size() && s[i] == '+') {
      ++i;
      return Formula::pos(word);
    }
    if (i < s.size() && s[i] == '-') {
      ++i;
      return Formula::neg(word);
    }
    fail("atom needs a polarity");
  }
};

}  // namespace

Formula Formula::parse(const std::string& text) {
  Parser p{text};
  Formula f = p.parse();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return f;
}

}  // namespace bpn
