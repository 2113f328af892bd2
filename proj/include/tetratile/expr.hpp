#pragma once
// Expression DAG over {+, -, *, /, sqr, sqrt, sin, cos, constants, variables}.
// Nodes are hash-consed, so structurally identical subexpressions share one
// node and get evaluated once. A Program is a compiled, self-contained tape for
// a chosen set of outputs; it evaluates on double or on Interval.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "interval.hpp"

namespace tetratile {

inline double sqr(double x) { return x * x; }

enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, Sqr, Sqrt, Sin, Cos };

class ExprGraph;

struct Expr {
  ExprGraph* g = nullptr;
  int id = -1;
};

class ExprGraph {
 public:
  struct Node {
    Op op;
    int a = -1, b = -1;
    int var = -1;
    double value = 0;  // Const: a double inside the enclosure
    Interval enclosure;
  };

  explicit ExprGraph(int num_vars = 0) : num_vars_(num_vars) {}
  ExprGraph(const ExprGraph&) = delete;
  ExprGraph& operator=(const ExprGraph&) = delete;

  int num_vars() const { return num_vars_; }
  const Node& node(int id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  Expr var(int i) {
    if (i >= num_vars_) num_vars_ = i + 1;
    return intern({Op::Var, -1, -1, i, 0, {}});
  }
  Expr constant(double x) { return intern({Op::Const, -1, -1, -1, x, Interval(x)}); }
  // A constant known only through an enclosure, e.g. cos(pi/4).
  Expr constant(const Interval& enc, double approx) { return intern({Op::Const, -1, -1, -1, approx, enc}); }
  Expr pi_multiple(const PiRational& q) { return constant(pi_rational(q), q.radians()); }

  bool is_const(Expr e, double x) const {
    const Node& n = nodes_[e.id];
    return n.op == Op::Const && n.enclosure.lo == x && n.enclosure.hi == x;
  }

  Expr apply(Op op, Expr a, Expr b = {}) {
    const Node& na = nodes_[a.id];
    bool ca = na.op == Op::Const;
    bool cb = b.id >= 0 && nodes_[b.id].op == Op::Const;
    switch (op) {
      case Op::Add:
        if (is_const(a, 0)) return b;
        if (is_const(b, 0)) return a;
        break;
      case Op::Sub:
        if (is_const(b, 0)) return a;
        if (a.id == b.id) return constant(0.0);
        break;
      case Op::Mul:
        if (is_const(a, 0) || is_const(b, 0)) return constant(0.0);
        if (is_const(a, 1)) return b;
        if (is_const(b, 1)) return a;
        break;
      case Op::Div:
        if (is_const(b, 1)) return a;
        break;
      default: break;
    }
    bool binary = op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
    if (ca && (!binary || cb)) {
      const Node& nb = binary ? nodes_[b.id] : na;
      return constant(apply_op(op, na.enclosure, nb.enclosure), apply_op(op, na.value, nb.value));
    }
    // Canonical operand order for commutative ops improves sharing.
    if ((op == Op::Add || op == Op::Mul) && b.id < a.id) std::swap(a, b);
    return intern({op, a.id, binary ? b.id : -1, -1, 0, {}});
  }

  // d e / d x_v, built in this graph and memoized.
  Expr diff(Expr e, int v) {
    auto key = std::make_pair(e.id, v);
    if (auto it = diff_memo_.find(key); it != diff_memo_.end()) return {this, it->second};
    Node n = nodes_[e.id];
    Expr a{this, n.a}, b{this, n.b};
    Expr r;
    switch (n.op) {
      case Op::Const: r = constant(0.0); break;
      case Op::Var: r = constant(n.var == v ? 1.0 : 0.0); break;
      case Op::Add: r = apply(Op::Add, diff(a, v), diff(b, v)); break;
      case Op::Sub: r = apply(Op::Sub, diff(a, v), diff(b, v)); break;
      case Op::Mul:
        r = apply(Op::Add, apply(Op::Mul, diff(a, v), b), apply(Op::Mul, a, diff(b, v)));
        break;
      case Op::Div: {
        Expr num = apply(Op::Sub, apply(Op::Mul, diff(a, v), b), apply(Op::Mul, a, diff(b, v)));
        r = apply(Op::Div, num, apply(Op::Sqr, b));
        break;
      }
      case Op::Neg: r = apply(Op::Neg, diff(a, v)); break;
      case Op::Sqr: r = apply(Op::Mul, apply(Op::Mul, constant(2.0), a), diff(a, v)); break;
      case Op::Sqrt:
        r = apply(Op::Div, diff(a, v), apply(Op::Mul, constant(2.0), e));
        break;
      case Op::Sin: r = apply(Op::Mul, apply(Op::Cos, a), diff(a, v)); break;
      case Op::Cos: r = apply(Op::Neg, apply(Op::Mul, apply(Op::Sin, a), diff(a, v))); break;
    }
    diff_memo_[key] = r.id;
    return r;
  }

  template <class T>
  static T apply_op(Op op, const T& x, const T& y) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    switch (op) {
      case Op::Add: return x + y;
      case Op::Sub: return x - y;
      case Op::Mul: return x * y;
      case Op::Div: return x / y;
      case Op::Neg: return -x;
      case Op::Sqr: return sqr(x);
      case Op::Sqrt: return sqrt(x);
      case Op::Sin: return sin(x);
      case Op::Cos: return cos(x);
      default: return x;
    }
  }

  std::string to_string(Expr e) const {
    const Node& n = nodes_[e.id];
    auto sub = [&](int id) { return to_string(Expr{const_cast<ExprGraph*>(this), id}); };
    switch (n.op) {
      case Op::Const: return std::to_string(n.value);
      case Op::Var: return "x" + std::to_string(n.var);
      case Op::Add: return "(" + sub(n.a) + " + " + sub(n.b) + ")";
      case Op::Sub: return "(" + sub(n.a) + " - " + sub(n.b) + ")";
      case Op::Mul: return sub(n.a) + "*" + sub(n.b);
      case Op::Div: return sub(n.a) + "/" + sub(n.b);
      case Op::Neg: return "-" + sub(n.a);
      case Op::Sqr: return "sqr(" + sub(n.a) + ")";
      case Op::Sqrt: return "sqrt(" + sub(n.a) + ")";
      case Op::Sin: return "sin(" + sub(n.a) + ")";
      case Op::Cos: return "cos(" + sub(n.a) + ")";
    }
    return "?";
  }

 private:
  Expr intern(const Node& n) {
    auto key = std::make_tuple(static_cast<int>(n.op), n.a, n.b, n.var, n.enclosure.lo, n.enclosure.hi,
                               n.op == Op::Const ? n.value : 0.0);
    if (auto it = cse_.find(key); it != cse_.end()) return {this, it->second};
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    cse_.emplace(key, id);
    return {this, id};
  }

  int num_vars_;
  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, int, int, double, double, double>, int> cse_;
  std::map<std::pair<int, int>, int> diff_memo_;
};

inline Expr operator+(Expr a, Expr b) { return a.g->apply(Op::Add, a, b); }
inline Expr operator-(Expr a, Expr b) { return a.g->apply(Op::Sub, a, b); }
inline Expr operator*(Expr a, Expr b) { return a.g->apply(Op::Mul, a, b); }
inline Expr operator/(Expr a, Expr b) { return a.g->apply(Op::Div, a, b); }
inline Expr operator-(Expr a) { return a.g->apply(Op::Neg, a); }
inline Expr operator+(Expr a, double b) { return a + a.g->constant(b); }
inline Expr operator+(double a, Expr b) { return b.g->constant(a) + b; }
inline Expr operator-(Expr a, double b) { return a - a.g->constant(b); }
inline Expr operator-(double a, Expr b) { return b.g->constant(a) - b; }
inline Expr operator*(double a, Expr b) { return b.g->constant(a) * b; }
inline Expr operator*(Expr a, double b) { return a * a.g->constant(b); }
inline Expr operator/(Expr a, double b) { return a / a.g->constant(b); }
inline Expr sqr(Expr a) { return a.g->apply(Op::Sqr, a); }
inline Expr sqrt(Expr a) { return a.g->apply(Op::Sqrt, a); }
inline Expr sin(Expr a) { return a.g->apply(Op::Sin, a); }
inline Expr cos(Expr a) { return a.g->apply(Op::Cos, a); }

// Compiled straight-line evaluation of a set of outputs. Immutable once built,
// so one Program can be evaluated from many threads with separate scratch space.
class Program {
 public:
  Program() = default;
  Program(const ExprGraph& g, const std::vector<Expr>& outputs) {
    std::vector<char> need(g.size(), 0);
    std::function<void(int)> mark = [&](int id) {
      if (need[id]) return;
      need[id] = 1;
      const auto& n = g.node(id);
      if (n.a >= 0) mark(n.a);
      if (n.b >= 0) mark(n.b);
    };
    for (const auto& e : outputs) mark(e.id);
    std::vector<int> slot(g.size(), -1);
    for (std::size_t id = 0; id < g.size(); ++id) {
      if (!need[id]) continue;
      auto n = g.node(static_cast<int>(id));
      Instr in{n.op, n.a >= 0 ? slot[n.a] : -1, n.b >= 0 ? slot[n.b] : -1, n.var, n.value, n.enclosure};
      slot[id] = static_cast<int>(code_.size());
      code_.push_back(in);
    }
    for (const auto& e : outputs) outputs_.push_back(slot[e.id]);
    num_vars_ = g.num_vars();
  }

  std::size_t num_outputs() const { return outputs_.size(); }
  std::size_t length() const { return code_.size(); }
  int num_vars() const { return num_vars_; }

  template <class T>
  void eval(std::span<const T> x, std::vector<T>& scratch, std::vector<T>& out) const {
    scratch.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
      const Instr& in = code_[i];
      switch (in.op) {
        case Op::Const:
          if constexpr (std::is_same_v<T, Interval>)
            scratch[i] = in.enclosure;
          else
            scratch[i] = in.value;
          break;
        case Op::Var: scratch[i] = x[in.var]; break;
        default:
          scratch[i] = ExprGraph::apply_op<T>(in.op, scratch[in.a], in.b >= 0 ? scratch[in.b] : scratch[in.a]);
      }
    }
    out.resize(outputs_.size());
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = scratch[outputs_[k]];
  }

  template <class T>
  std::vector<T> operator()(std::span<const T> x) const {
    std::vector<T> scratch, out;
    eval<T>(x, scratch, out);
    return out;
  }
  template <class T>
  std::vector<T> operator()(const std::vector<T>& x) const {
    return (*this)(std::span<const T>(x));
  }

 private:
  struct Instr {
    Op op;
    int a, b, var;
    double value;
    Interval enclosure;
  };
  std::vector<Instr> code_;
  std::vector<int> outputs_;
  int num_vars_ = 0;
};

// ieval: interval image of a single expression over a box of variable ranges.
inline Interval ieval(Expr e, const std::vector<Interval>& box) {
  Program p(*e.g, {e});
  return p(box)[0];
}

inline double eval(Expr e, const std::vector<double>& x) {
  Program p(*e.g, {e});
  return p(x)[0];
}

}  // namespace tetratile
