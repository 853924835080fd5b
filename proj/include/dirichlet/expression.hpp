#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dirichlet {

// Compiled arithmetic expression in one real parameter.
//
// Grammar: numbers, the parameter symbol (t, theta or lambda), the constants
// pi, e and L (the period), binary + - * / ^, unary minus, parentheses and the
// functions sin, cos, tan, ln (alias log) and abs. Evaluation is pure.
class Expression {
 public:
  static Expression parse(std::string_view text, double period);

  double operator()(double t) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const std::vector<Node>> nodes, int root)
      : text_(std::move(text)), nodes_(std::move(nodes)), root_(root) {}

  std::string text_;
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
};

}  // namespace dirichlet
