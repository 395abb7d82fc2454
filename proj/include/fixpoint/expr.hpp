#pragma once

// One-variable expression language: recursive-descent parser, immutable AST,
// pretty-printer and evaluator.
//
// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | NUMBER | 'x' | '(' expr ')' | call
//   call    := ('abs'|'min'|'max'|'piecewise') '(' args ')'
//   piecewise args := cmp ',' expr ',' expr
//   cmp     := expr ('<'|'<='|'=='|'>='|'>') expr

#include <cctype>
#include <charconv>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fixpoint {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

enum class BinOp { Add, Sub, Mul, Div };
enum class CmpOp { Lt, Le, Eq, Ge, Gt };
enum class FnOp { Abs, Min, Max };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Const {
    double value;
  };
  struct Var {};
  struct Neg {
    ExprPtr arg;
  };
  struct Bin {
    BinOp op;
    ExprPtr lhs, rhs;
  };
  struct Fn {
    FnOp op;
    ExprPtr a;
    ExprPtr b;  // null for abs
  };
  struct Piecewise {
    CmpOp cmp;
    ExprPtr cmp_lhs, cmp_rhs;
    ExprPtr then_val, else_val;
  };

  std::variant<Const, Var, Neg, Bin, Fn, Piecewise> node;
};

inline ExprPtr make_const(double v) { return std::make_shared<Expr>(Expr{Expr::Const{v}}); }
inline ExprPtr make_var() { return std::make_shared<Expr>(Expr{Expr::Var{}}); }
inline ExprPtr make_neg(ExprPtr a) { return std::make_shared<Expr>(Expr{Expr::Neg{std::move(a)}}); }
inline ExprPtr make_bin(BinOp op, ExprPtr l, ExprPtr r) {
  return std::make_shared<Expr>(Expr{Expr::Bin{op, std::move(l), std::move(r)}});
}
inline ExprPtr make_fn(FnOp op, ExprPtr a, ExprPtr b = nullptr) {
  return std::make_shared<Expr>(Expr{Expr::Fn{op, std::move(a), std::move(b)}});
}
inline ExprPtr make_piecewise(CmpOp cmp, ExprPtr cl, ExprPtr cr, ExprPtr t, ExprPtr e) {
  return std::make_shared<Expr>(
      Expr{Expr::Piecewise{cmp, std::move(cl), std::move(cr), std::move(t), std::move(e)}});
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Eq {
    const Expr& rhs;
    bool operator()(const Expr::Const& n) const {
      return n.value == std::get<Expr::Const>(rhs.node).value;
    }
    bool operator()(const Expr::Var&) const { return true; }
    bool operator()(const Expr::Neg& n) const {
      return expr_equal(n.arg, std::get<Expr::Neg>(rhs.node).arg);
    }
    bool operator()(const Expr::Bin& n) const {
      const auto& o = std::get<Expr::Bin>(rhs.node);
      return n.op == o.op && expr_equal(n.lhs, o.lhs) && expr_equal(n.rhs, o.rhs);
    }
    bool operator()(const Expr::Fn& n) const {
      const auto& o = std::get<Expr::Fn>(rhs.node);
      if (n.op != o.op || !expr_equal(n.a, o.a)) return false;
      if (!n.b && !o.b) return true;
      return n.b && o.b && expr_equal(n.b, o.b);
    }
    bool operator()(const Expr::Piecewise& n) const {
      const auto& o = std::get<Expr::Piecewise>(rhs.node);
      return n.cmp == o.cmp && expr_equal(n.cmp_lhs, o.cmp_lhs) &&
             expr_equal(n.cmp_rhs, o.cmp_rhs) && expr_equal(n.then_val, o.then_val) &&
             expr_equal(n.else_val, o.else_val);
    }
  };
  return std::visit(Eq{*b}, a->node);
}

inline double eval_expr(const ExprPtr& e, double x) {
  struct Ev {
    double x;
    double operator()(const Expr::Const& n) const { return n.value; }
    double operator()(const Expr::Var&) const { return x; }
    double operator()(const Expr::Neg& n) const { return -eval_expr(n.arg, x); }
    double operator()(const Expr::Bin& n) const {
      const double l = eval_expr(n.lhs, x), r = eval_expr(n.rhs, x);
      switch (n.op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div: return l / r;
      }
      return 0;
    }
    double operator()(const Expr::Fn& n) const {
      const double a = eval_expr(n.a, x);
      switch (n.op) {
        case FnOp::Abs: return std::abs(a);
        case FnOp::Min: return std::min(a, eval_expr(n.b, x));
        case FnOp::Max: return std::max(a, eval_expr(n.b, x));
      }
      return 0;
    }
    double operator()(const Expr::Piecewise& n) const {
      const double l = eval_expr(n.cmp_lhs, x), r = eval_expr(n.cmp_rhs, x);
      bool take = false;
      switch (n.cmp) {
        case CmpOp::Lt: take = l < r; break;
        case CmpOp::Le: take = l <= r; break;
        case CmpOp::Eq: take = l == r; break;
        case CmpOp::Ge: take = l >= r; break;
        case CmpOp::Gt: take = l > r; break;
      }
      return take ? eval_expr(n.then_val, x) : eval_expr(n.else_val, x);
    }
  };
  return std::visit(Ev{x}, e->node);
}

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, LParen, RParen, Comma, Cmp, End };

struct Token {
  Tok tag;
  std::size_t pos;
  double number;
  std::string text;  // identifier name or comparison operator

  Token(Tok tag, std::size_t pos, double number = 0, std::string text = {})
      : tag(tag), pos(pos), number(number), text(std::move(text)) {}
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    const std::size_t pos = i_;
    if (i_ >= src_.size()) return {Tok::End, pos};
    const char c = src_[i_];
    switch (c) {
      case '+': ++i_; return {Tok::Plus, pos};
      case '-': ++i_; return {Tok::Minus, pos};
      case '*': ++i_; return {Tok::Star, pos};
      case '/': ++i_; return {Tok::Slash, pos};
      case '(': ++i_; return {Tok::LParen, pos};
      case ')': ++i_; return {Tok::RParen, pos};
      case ',': ++i_; return {Tok::Comma, pos};
      case '<':
      case '>':
      case '=': {
        std::string op(1, c);
        ++i_;
        if (i_ < src_.size() && src_[i_] == '=') {
          op += '=';
          ++i_;
        }
        if (op == "=") throw ParseError("expected '==' ", pos);
        return {Tok::Cmp, pos, 0, op};
      }
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i_;
      while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) ++j;
      if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
        if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
          ++k;
          while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
          j = k;
        }
      }
      double value = 0;
      const auto res = std::from_chars(src_.data() + i_, src_.data() + j, value);
      if (res.ec != std::errc() || res.ptr != src_.data() + j)
        throw ParseError("malformed number", pos);
      i_ = j;
      return {Tok::Number, pos, value};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      Token t{Tok::Ident, pos, 0, src_.substr(i_, j - i_)};
      i_ = j;
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

 private:
  const std::string& src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    if (cur_.tag != Tok::End) throw ParseError("unexpected trailing input", cur_.pos);
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (cur_.tag == Tok::Plus || cur_.tag == Tok::Minus) {
      const BinOp op = cur_.tag == Tok::Plus ? BinOp::Add : BinOp::Sub;
      advance();
      e = make_bin(op, std::move(e), parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (cur_.tag == Tok::Star || cur_.tag == Tok::Slash) {
      const BinOp op = cur_.tag == Tok::Star ? BinOp::Mul : BinOp::Div;
      advance();
      e = make_bin(op, std::move(e), parse_factor());
    }
    return e;
  }

  ExprPtr parse_factor() {
    switch (cur_.tag) {
      case Tok::Minus: {
        advance();
        return make_neg(parse_factor());
      }
      case Tok::Number: {
        const double v = cur_.number;
        advance();
        return make_const(v);
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        const std::string name = cur_.text;
        const std::size_t pos = cur_.pos;
        advance();
        if (name == "x") return make_var();
        if (name == "abs" || name == "min" || name == "max") return parse_call(name, pos);
        if (name == "piecewise") return parse_piecewise(pos);
        throw ParseError("unknown identifier '" + name + "'", pos);
      }
      default:
        throw ParseError("syntax error at token '" + token_text() + "'", cur_.pos);
    }
  }

  ExprPtr parse_call(const std::string& name, std::size_t pos) {
    expect(Tok::LParen, "'('");
    ExprPtr a = parse_expr();
    if (name == "abs") {
      expect(Tok::RParen, "')'");
      return make_fn(FnOp::Abs, std::move(a));
    }
    expect(Tok::Comma, "','");
    ExprPtr b = parse_expr();
    expect(Tok::RParen, "')'");
    (void)pos;
    return make_fn(name == "min" ? FnOp::Min : FnOp::Max, std::move(a), std::move(b));
  }

  ExprPtr parse_piecewise(std::size_t pos) {
    (void)pos;
    expect(Tok::LParen, "'('");
    ExprPtr cl = parse_expr();
    if (cur_.tag != Tok::Cmp)
      throw ParseError("piecewise: expected comparison operator", cur_.pos);
    const CmpOp cmp = cmp_from(cur_.text, cur_.pos);
    advance();
    ExprPtr cr = parse_expr();
    expect(Tok::Comma, "','");
    ExprPtr t = parse_expr();
    expect(Tok::Comma, "','");
    ExprPtr e = parse_expr();
    expect(Tok::RParen, "')'");
    return make_piecewise(cmp, std::move(cl), std::move(cr), std::move(t), std::move(e));
  }

  static CmpOp cmp_from(const std::string& s, std::size_t pos) {
    if (s == "<") return CmpOp::Lt;
    if (s == "<=") return CmpOp::Le;
    if (s == "==") return CmpOp::Eq;
    if (s == ">=") return CmpOp::Ge;
    if (s == ">") return CmpOp::Gt;
    throw ParseError("bad comparison operator '" + s + "'", pos);
  }

  void expect(Tok tag, const char* what) {
    if (cur_.tag != tag)
      throw ParseError(std::string("expected ") + what + ", got '" + token_text() + "'", cur_.pos);
    advance();
  }

  std::string token_text() const {
    switch (cur_.tag) {
      case Tok::Number: return "number";
      case Tok::Ident: return cur_.text;
      case Tok::Plus: return "+";
      case Tok::Minus: return "-";
      case Tok::Star: return "*";
      case Tok::Slash: return "/";
      case Tok::LParen: return "(";
      case Tok::RParen: return ")";
      case Tok::Comma: return ",";
      case Tok::Cmp: return cur_.text;
      case Tok::End: return "<end>";
    }
    return "?";
  }

  Lexer lex_;
  Token cur_{Tok::End, 0};
};

}  // namespace detail

inline ExprPtr parse_expression(const std::string& src) {
  if (src.empty()) throw ParseError("empty expression", 0);
  return detail::Parser(src).parse();
}

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

// Precedence levels: additive 1, multiplicative 2, unary 3, atoms 4.
inline void print_expr(const ExprPtr& e, int min_level, std::string& out) {
  struct Pr {
    int min_level;
    std::string& out;
    void operator()(const Expr::Const& n) const { out += format_double(n.value); }
    void operator()(const Expr::Var&) const { out += 'x'; }
    void operator()(const Expr::Neg& n) const {
      const bool parens = min_level > 3;
      if (parens) out += '(';
      out += '-';
      print_expr(n.arg, 3, out);
      if (parens) out += ')';
    }
    void operator()(const Expr::Bin& n) const {
      const int level = (n.op == BinOp::Add || n.op == BinOp::Sub) ? 1 : 2;
      const bool parens = level < min_level;
      if (parens) out += '(';
      print_expr(n.lhs, level, out);
      switch (n.op) {
        case BinOp::Add: out += " + "; break;
        case BinOp::Sub: out += " - "; break;
        case BinOp::Mul: out += " * "; break;
        case BinOp::Div: out += " / "; break;
      }
      // right operand one level up so right-nested trees keep their shape
      print_expr(n.rhs, level + 1, out);
      if (parens) out += ')';
    }
    void operator()(const Expr::Fn& n) const {
      out += n.op == FnOp::Abs ? "abs" : n.op == FnOp::Min ? "min" : "max";
      out += '(';
      print_expr(n.a, 0, out);
      if (n.b) {
        out += ", ";
        print_expr(n.b, 0, out);
      }
      out += ')';
    }
    void operator()(const Expr::Piecewise& n) const {
      out += "piecewise(";
      print_expr(n.cmp_lhs, 0, out);
      out += ' ';
      out += cmp_text(n.cmp);
      out += ' ';
      print_expr(n.cmp_rhs, 0, out);
      out += ", ";
      print_expr(n.then_val, 0, out);
      out += ", ";
      print_expr(n.else_val, 0, out);
      out += ')';
    }
  };
  std::visit(Pr{min_level, out}, e->node);
}

}  // namespace detail

inline std::string pretty_print(const ExprPtr& e) {
  std::string out;
  detail::print_expr(e, 0, out);
  return out;
}

// Comparison predicate over the scalar variable, e.g. "x < 1".
struct GuardExpr {
  CmpOp op;
  ExprPtr lhs, rhs;

  bool eval(double x) const {
    const double l = eval_expr(lhs, x), r = eval_expr(rhs, x);
    switch (op) {
      case CmpOp::Lt: return l < r;
      case CmpOp::Le: return l <= r;
      case CmpOp::Eq: return l == r;
      case CmpOp::Ge: return l >= r;
      case CmpOp::Gt: return l > r;
    }
    return false;
  }
};

inline GuardExpr parse_guard(const std::string& src) {
  detail::Lexer lex(src);
  // reuse the expression parser by splitting at the comparison token
  std::size_t cmp_pos = std::string::npos;
  std::string cmp_text;
  {
    detail::Lexer scan(src);
    for (auto t = scan.next(); t.tag != detail::Tok::End; t = scan.next()) {
      if (t.tag == detail::Tok::Cmp) {
        cmp_pos = t.pos;
        cmp_text = t.text;
        break;
      }
    }
  }
  if (cmp_pos == std::string::npos) throw ParseError("guard: missing comparison operator", 0);
  const std::string left = src.substr(0, cmp_pos);
  const std::string right = src.substr(cmp_pos + cmp_text.size());
  GuardExpr g;
  g.lhs = parse_expression(left);
  g.rhs = parse_expression(right);
  if (cmp_text == "<") g.op = CmpOp::Lt;
  else if (cmp_text == "<=") g.op = CmpOp::Le;
  else if (cmp_text == "==") g.op = CmpOp::Eq;
  else if (cmp_text == ">=") g.op = CmpOp::Ge;
  else if (cmp_text == ">") g.op = CmpOp::Gt;
  else throw ParseError("guard: bad comparison '" + cmp_text + "'", cmp_pos);
  return g;
}

inline std::string guard_to_string(const GuardExpr& g) {
  return pretty_print(g.lhs) + " " + detail::cmp_text(g.op) + " " + pretty_print(g.rhs);
}

}  // namespace fixpoint
