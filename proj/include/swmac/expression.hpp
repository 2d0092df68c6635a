#pragma once

#include <memory>
#include <string>

namespace swmac {

/// Compiled arithmetic expression in the variables x, y and t.
///
/// Grammar: numbers, x, y, t, pi, unary +/-, binary + - * / ^ (right
/// associative, binds tighter than unary minus), comparisons < <= > >= == !=
/// (1 or 0), parentheses and the functions sin cos tan sqrt exp log abs
/// floor, max(a, b), min(a, b), if(c, a, b).
class Expression {
 public:
  Expression() = default;
  /// Throws ConfigError with the column of the offending token.
  static Expression parse(const std::string& text);

  double operator()(double x, double y, double t = 0) const;
  const std::string& text() const { return text_; }
  bool empty() const { return !root_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace swmac
