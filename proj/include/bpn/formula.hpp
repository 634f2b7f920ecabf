#pragma once

#include <memory>
#include <set>
#include <string>

namespace bpn {

// Immutable MLL formula with units. Negation is computed by De Morgan.
class Formula {
 public:
  enum class Kind { Pos, Neg, One, Bot, Tensor, Par };

  Formula();  // the unit 1

  static Formula pos(const std::string& name);
  static Formula neg(const std::string& name);
  static Formula one();
  static Formula bot();
  static Formula tensor(const Formula& a, const Formula& b);
  static Formula par(const Formula& a, const Formula& b);

  // Accepts "X+", "X-", "1", "bot", "(F * G)", "(F | G)".
  static Formula parse(const std::string& text);

  Kind kind() const;
  const std::string& name() const;  // atoms only
  const Formula& left() const;
  const Formula& right() const;

  bool is_atom() const { return kind() == Kind::Pos || kind() == Kind::Neg; }
  bool is_positive_atom() const { return kind() == Kind::Pos; }
  bool is_negative_atom() const { return kind() == Kind::Neg; }
  bool is_unit() const { return kind() == Kind::One || kind() == Kind::Bot; }

  Formula dual() const;
  std::set<std::string> atom_names() const;
  std::string str() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  bool operator<(const Formula& o) const { return str() < o.str(); }

 private:
  struct Rep;
  explicit Formula(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

}  // namespace bpn
