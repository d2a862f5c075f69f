#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "conelab/jet.hpp"

namespace conelab {

/// Parsed arithmetic expression over named coordinates. The grammar
/// (documented in docs/grammar.md) covers +, -, *, /, ^, exp, sin, cos,
/// numeric literals, the constants pi and e, and the declared coordinate
/// names. Expressions evaluate over doubles or jets.
class Expression {
 public:
  static Expression parse(const std::string& text,
                          std::span<const std::string> coord_names);

  double eval(std::span<const double> coords) const;
  Jet eval(std::span<const Jet> coords) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Thrown on malformed input or unknown identifiers.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace conelab
