#include "dirichlet/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "dirichlet/error.hpp"

namespace dirichlet {

struct Expression::Node {
  enum class Op { Constant, Parameter, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Ln, Abs };
  Op op = Op::Constant;
  double value = 0.0;
  int lhs = -1;
  int rhs = -1;
};

namespace {

using Node = Expression::Node;
using Op = Node::Op;

class Parser {
 public:
  Parser(std::string_view text, double period) : text_(text), period_(period) {}

  int parse() {
    int root = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

  std::vector<Node> take_nodes() { return std::move(nodes_); }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ExpressionSyntax,
                what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Op op, int lhs = -1, int rhs = -1, double value = 0.0) {
    nodes_.push_back(Node{op, value, lhs, rhs});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = push(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = push(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = push(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return push(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (accept('^')) return push(Op::Pow, base, parse_unary());
    return base;
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  int parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return push(Op::Constant, -1, -1, value);
  }

  int parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "t" || name == "theta" || name == "lambda") return push(Op::Parameter);
    if (name == "pi") return push(Op::Constant, -1, -1, std::numbers::pi);
    if (name == "e") return push(Op::Constant, -1, -1, std::numbers::e);
    if (name == "L") return push(Op::Constant, -1, -1, period_);

    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "tan") op = Op::Tan;
    else if (name == "ln" || name == "log") op = Op::Ln;
    else if (name == "abs") op = Op::Abs;
    else fail("unknown identifier '" + name + "'");

    if (!accept('(')) fail("expected '(' after " + name);
    int arg = parse_sum();
    if (!accept(')')) fail("expected ')'");
    return push(op, arg);
  }

  std::string_view text_;
  double period_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

double eval(const std::vector<Node>& nodes, int index, double t) {
  const Node& n = nodes[static_cast<std::size_t>(index)];
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Parameter: return t;
    case Op::Add: return eval(nodes, n.lhs, t) + eval(nodes, n.rhs, t);
    case Op::Sub: return eval(nodes, n.lhs, t) - eval(nodes, n.rhs, t);
    case Op::Mul: return eval(nodes, n.lhs, t) * eval(nodes, n.rhs, t);
    case Op::Div: return eval(nodes, n.lhs, t) / eval(nodes, n.rhs, t);
    case Op::Pow: return std::pow(eval(nodes, n.lhs, t), eval(nodes, n.rhs, t));
    case Op::Neg: return -eval(nodes, n.lhs, t);
    case Op::Sin: return std::sin(eval(nodes, n.lhs, t));
    case Op::Cos: return std::cos(eval(nodes, n.lhs, t));
    case Op::Tan: return std::tan(eval(nodes, n.lhs, t));
    case Op::Ln: return std::log(eval(nodes, n.lhs, t));
    case Op::Abs: return std::abs(eval(nodes, n.lhs, t));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text, double period) {
  Parser parser(text, period);
  int root = parser.parse();
  auto nodes = std::make_shared<const std::vector<Node>>(parser.take_nodes());
  return Expression(std::string(text), std::move(nodes), root);
}

double Expression::operator()(double t) const { return eval(*nodes_, root_, t); }

}  // namespace dirichlet
