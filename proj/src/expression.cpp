#include "swmac/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "swmac/error.hpp"

namespace swmac {

struct Expression::Node {
  enum class Op {
    Const, X, Y, T,
    Neg, Add, Sub, Mul, Div, Pow,
    Lt, Le, Gt, Ge, Eq, Ne,
    Sin, Cos, Tan, Sqrt, Exp, Log, Abs, Floor,
    Max, Min, If,
  };
  Op op = Op::Const;
  double value = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double v = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = v;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = comparison();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "', column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(std::string_view(&c, 1))) fail(std::string("expected '") + c + "'");
  }

  NodePtr comparison() {
    NodePtr l = sum();
    struct Cmp {
      std::string_view tok;
      Op op;
    };
    // two-character operators first
    static constexpr Cmp ops[] = {{"<=", Op::Le}, {">=", Op::Ge}, {"==", Op::Eq}, {"!=", Op::Ne},
                                  {"<", Op::Lt},  {">", Op::Gt}};
    for (const Cmp& c : ops)
      if (accept(c.tok)) return make(c.op, {l, sum()});
    return l;
  }

  NodePtr sum() {
    NodePtr l = product();
    for (;;) {
      if (accept("+")) l = make(Op::Add, {l, product()});
      else if (accept("-")) l = make(Op::Sub, {l, product()});
      else return l;
    }
  }

  NodePtr product() {
    NodePtr l = unary();
    for (;;) {
      if (accept("*")) l = make(Op::Mul, {l, unary()});
      else if (accept("/")) l = make(Op::Div, {l, unary()});
      else return l;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make(Op::Neg, {unary()});
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept("(")) {
      NodePtr n = comparison();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0;
    const char* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Op::Const, {}, v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "x") return make(Op::X);
    if (id == "y") return make(Op::Y);
    if (id == "t") return make(Op::T);
    if (id == "pi") return make(Op::Const, {}, std::numbers::pi);

    struct Fn {
      std::string_view name;
      Op op;
      int arity;
    };
    static constexpr Fn fns[] = {
        {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1}, {"tan", Op::Tan, 1}, {"sqrt", Op::Sqrt, 1},
        {"exp", Op::Exp, 1},   {"log", Op::Log, 1}, {"abs", Op::Abs, 1}, {"floor", Op::Floor, 1},
        {"max", Op::Max, 2},   {"min", Op::Min, 2}, {"if", Op::If, 3},
    };
    for (const Fn& f : fns) {
      if (id != f.name) continue;
      expect('(');
      std::vector<NodePtr> args{comparison()};
      for (int k = 1; k < f.arity; ++k) {
        expect(',');
        args.push_back(comparison());
      }
      expect(')');
      return make(f.op, std::move(args));
    }
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double x, double y, double t) {
  auto a = [&](int k) { return eval(*n.args[k], x, y, t); };
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::X: return x;
    case Op::Y: return y;
    case Op::T: return t;
    case Op::Neg: return -a(0);
    case Op::Add: return a(0) + a(1);
    case Op::Sub: return a(0) - a(1);
    case Op::Mul: return a(0) * a(1);
    case Op::Div: return a(0) / a(1);
    case Op::Pow: return std::pow(a(0), a(1));
    case Op::Lt: return a(0) < a(1) ? 1.0 : 0.0;
    case Op::Le: return a(0) <= a(1) ? 1.0 : 0.0;
    case Op::Gt: return a(0) > a(1) ? 1.0 : 0.0;
    case Op::Ge: return a(0) >= a(1) ? 1.0 : 0.0;
    case Op::Eq: return a(0) == a(1) ? 1.0 : 0.0;
    case Op::Ne: return a(0) != a(1) ? 1.0 : 0.0;
    case Op::Sin: return std::sin(a(0));
    case Op::Cos: return std::cos(a(0));
    case Op::Tan: return std::tan(a(0));
    case Op::Sqrt: return std::sqrt(a(0));
    case Op::Exp: return std::exp(a(0));
    case Op::Log: return std::log(a(0));
    case Op::Abs: return std::abs(a(0));
    case Op::Floor: return std::floor(a(0));
    case Op::Max: return std::max(a(0), a(1));
    case Op::Min: return std::min(a(0), a(1));
    case Op::If: return a(0) != 0.0 ? a(1) : a(2);
  }
  return 0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(double x, double y, double t) const {
  if (!root_) throw ConfigError("empty expression evaluated");
  return eval(*root_, x, y, t);
}

}  // namespace swmac
