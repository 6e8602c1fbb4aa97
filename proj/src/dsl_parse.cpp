#include <cctype>
#include <cstdlib>
#include <stdexcept>

#include "pspace/dsl.hpp"

namespace pspace {

namespace {

enum class Tok {
  Ident, Int, String,
  LBrace, RBrace, LParen, RParen,
  Colon, Semi, Comma, Assign,  // :=
  DotDot, Plus, Minus,
  Eq, Ne, Lt, Le, Gt, Ge,
  End, Error,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  SourceSpan at;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.at = {line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
      // 3.5 is a fractional volume, not a range: range dots come in pairs
      if (pos_ + 1 < src_.size() && src_[pos_] == '.' && src_[pos_ + 1] != '.') {
        t.kind = Tok::Error;
        t.text = "fractional values are not supported; volumes are integers";
        return t;
      }
      t.kind = Tok::Int;
      std::string digits(src_.substr(start, pos_ - start));
      if (digits.size() > 18) {
        t.kind = Tok::Error;
        t.text = "integer literal too large";
        return t;
      }
      t.number = std::strtoll(digits.c_str(), nullptr, 10);
      return t;
    }
    switch (c) {
      case '{': advance(); t.kind = Tok::LBrace; return t;
      case '}': advance(); t.kind = Tok::RBrace; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case ';': advance(); t.kind = Tok::Semi; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '+': advance(); t.kind = Tok::Plus; return t;
      case '-': advance(); t.kind = Tok::Minus; return t;
      case ':':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Assign; } else t.kind = Tok::Colon;
        return t;
      case '=': advance(); t.kind = Tok::Eq; return t;
      case '!':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Ne; return t; }
        t.kind = Tok::Error; t.text = "expected '=' after '!'";
        return t;
      case '<':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Le; } else t.kind = Tok::Lt;
        return t;
      case '>':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Ge; } else t.kind = Tok::Gt;
        return t;
      case '.':
        advance();
        if (peek() == '.') { advance(); t.kind = Tok::DotDot; return t; }
        t.kind = Tok::Error; t.text = "unexpected '.'";
        return t;
      case '"': {
        advance();
        size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') advance();
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          t.kind = Tok::Error; t.text = "unterminated string";
          return t;
        }
        t.kind = Tok::String;
        t.text = std::string(src_.substr(start, pos_ - start));
        advance();  // closing quote
        return t;
      }
      default:
        advance();
        t.kind = Tok::Error;
        t.text = std::string("unexpected character '") + c + "'";
        return t;
    }
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') { line_++; col_ = 1; } else col_++;
    pos_++;
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  static const char* kw[] = {"space", "var",  "unit", "op",   "pre",  "eff",
                             "constraint", "no_undo", "no_loop", "failure",
                             "instance", "of", "init", "goal", "and", "or",
                             "not", "min", "max", "cap", "sum"};
  for (const char* k : kw)
    if (s == k) return true;
  return false;
}

struct ParseError {
  SourceSpan at;
  std::string message;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { bump(); }

  ParseResult run() {
    ParseResult result;
    SpecDocument doc;
    bool have_space = false;
    try {
      while (cur_.kind != Tok::End) {
        if (at_ident("space")) {
          if (have_space)
            fail("document already declares space '" + doc.space.name + "'");
          parse_space(doc);
          have_space = true;
        } else if (at_ident("instance")) {
          if (!have_space) fail("instance declared before any space");
          parse_instance(doc);
        } else {
          fail("expected 'space' or 'instance' declaration");
        }
      }
      if (!have_space) fail("empty document: expected a space declaration");
      result.doc = std::move(doc);
    } catch (const ParseError& e) {
      result.diagnostics.push_back({e.at, e.message});
    }
    return result;
  }

 private:
  [[noreturn]] void fail(std::string msg) { throw ParseError{cur_.at, std::move(msg)}; }
  [[noreturn]] void fail_at(SourceSpan at, std::string msg) { throw ParseError{at, std::move(msg)}; }

  void bump() {
    cur_ = lex_.next();
    if (cur_.kind == Tok::Error) fail(cur_.text);
  }

  bool at_ident(std::string_view kw) const {
    return cur_.kind == Tok::Ident && cur_.text == kw;
  }

  void expect_keyword(std::string_view kw) {
    if (!at_ident(kw)) fail("expected '" + std::string(kw) + "'");
    bump();
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    bump();
  }

  std::string expect_name(const char* what) {
    if (cur_.kind != Tok::Ident) fail(std::string("expected ") + what);
    if (is_keyword(cur_.text)) fail("'" + cur_.text + "' is a reserved word");
    std::string name = cur_.text;
    bump();
    return name;
  }

  std::int64_t expect_int() {
    if (cur_.kind != Tok::Int) fail("expected integer");
    std::int64_t v = cur_.number;
    bump();
    return v;
  }

  // ---- expressions -------------------------------------------------------
  // Unified grammar, type-checked after the fact:
  //   or > and > not > comparison > additive > primary

  ExprPtr parse_expr(std::span<const std::string> scope, bool allow_sum) {
    SourceSpan start = cur_.at;
    ExprPtr e = parse_or(scope, allow_sum);
    if (expr_depth(*e) > kMaxExprDepth)
      fail_at(start, "expression nesting exceeds depth limit");
    return e;
  }

  ExprPtr parse_or(std::span<const std::string> scope, bool allow_sum) {
    ExprPtr e = parse_and(scope, allow_sum);
    while (at_ident("or")) {
      bump();
      e = Expr::logical_or(e, parse_and(scope, allow_sum));
    }
    return e;
  }

  ExprPtr parse_and(std::span<const std::string> scope, bool allow_sum) {
    ExprPtr e = parse_not(scope, allow_sum);
    while (at_ident("and")) {
      bump();
      e = Expr::logical_and(e, parse_not(scope, allow_sum));
    }
    return e;
  }

  ExprPtr parse_not(std::span<const std::string> scope, bool allow_sum) {
    if (at_ident("not")) {
      bump();
      return Expr::logical_not(parse_not(scope, allow_sum));
    }
    return parse_rel(scope, allow_sum);
  }

  ExprPtr parse_rel(std::span<const std::string> scope, bool allow_sum) {
    ExprPtr lhs = parse_add(scope, allow_sum);
    CmpOp op;
    switch (cur_.kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: return lhs;
    }
    bump();
    return Expr::cmp(op, lhs, parse_add(scope, allow_sum));
  }

  ExprPtr parse_add(std::span<const std::string> scope, bool allow_sum) {
    ExprPtr e = parse_primary(scope, allow_sum);
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      bool plus = cur_.kind == Tok::Plus;
      bump();
      ExprPtr rhs = parse_primary(scope, allow_sum);
      e = plus ? Expr::add(e, rhs) : Expr::sub(e, rhs);
    }
    return e;
  }

  int lookup(std::span<const std::string> scope, const std::string& name, SourceSpan at) {
    for (size_t i = 0; i < scope.size(); i++)
      if (scope[i] == name) return static_cast<int>(i);
    fail_at(at, "unknown name '" + name + "'");
  }

  ExprPtr parse_primary(std::span<const std::string> scope, bool allow_sum) {
    if (cur_.kind == Tok::Int) {
      std::int64_t v = cur_.number;
      bump();
      return Expr::int_const(v);
    }
    if (cur_.kind == Tok::LParen) {
      bump();
      ExprPtr e = parse_or(scope, allow_sum);
      expect(Tok::RParen, "')'");
      return e;
    }
    if (cur_.kind != Tok::Ident) fail("expected expression");
    SourceSpan at = cur_.at;
    std::string name = cur_.text;
    if (name == "cap") {
      bump();
      expect(Tok::LParen, "'('");
      SourceSpan vat = cur_.at;
      std::string vn = expect_name("variable name");
      expect(Tok::RParen, "')'");
      return Expr::cap_of(lookup(scope, vn, vat));
    }
    if (name == "sum") {
      bump();
      expect(Tok::LParen, "'('");
      expect(Tok::RParen, "')'");
      if (!allow_sum) fail_at(at, "sum() is not available in operator bodies");
      return Expr::sum_all();
    }
    if (name == "min" || name == "max") {
      bool is_min = name == "min";
      bump();
      expect(Tok::LParen, "'('");
      ExprPtr a = parse_or(scope, allow_sum);
      expect(Tok::Comma, "','");
      ExprPtr b = parse_or(scope, allow_sum);
      expect(Tok::RParen, "')'");
      return is_min ? Expr::min2(a, b) : Expr::max2(a, b);
    }
    if (is_keyword(name)) fail("'" + name + "' is a reserved word");
    bump();
    return Expr::var_ref(lookup(scope, name, at));
  }

  ExprPtr typed_expr(std::span<const std::string> scope, bool allow_sum,
                     ExprType want, const char* what) {
    SourceSpan at = cur_.at;
    ExprPtr e = parse_expr(scope, allow_sum);
    try {
      if (type_of(*e) != want)
        fail_at(at, std::string(what) + " must be " +
                        (want == ExprType::Bool ? "a condition" : "an integer expression"));
    } catch (const std::invalid_argument& err) {
      fail_at(at, std::string(what) + ": " + err.what());
    }
    return e;
  }

  // ---- declarations ------------------------------------------------------

  void parse_space(SpecDocument& doc) {
    SourceSpan at = cur_.at;
    bump();  // 'space'
    doc.space.name = expect_name("space name");
    doc.decl_spans["space"] = at;
    expect(Tok::LBrace, "'{'");
    while (cur_.kind != Tok::RBrace) {
      if (at_ident("var")) parse_var(doc);
      else if (at_ident("op")) parse_op(doc);
      else if (at_ident("constraint")) parse_constraint(doc);
      else if (at_ident("failure")) parse_failure(doc);
      else fail("expected 'var', 'op', 'constraint' or 'failure'");
    }
    bump();  // '}'
    if (doc.space.vars.empty())
      fail_at(at, "space '" + doc.space.name + "' declares no variables");
  }

  void parse_var(SpecDocument& doc) {
    SourceSpan at = cur_.at;
    bump();  // 'var'
    VarSpec v;
    v.name = expect_name("variable name");
    if (doc.space.var_index(v.name) >= 0)
      fail_at(at, "duplicate variable '" + v.name + "'");
    expect(Tok::Colon, "':'");
    SourceSpan lo_at = cur_.at;
    std::int64_t lo = expect_int();
    if (lo != 0) fail_at(lo_at, "variable ranges start at 0");
    expect(Tok::DotDot, "'..'");
    SourceSpan hi_at = cur_.at;
    std::int64_t hi = expect_int();
    if (hi < 1 || hi > 1000000) fail_at(hi_at, "capacity out of supported range");
    v.capacity = static_cast<int>(hi);
    if (at_ident("unit")) {
      bump();
      if (cur_.kind != Tok::String) fail("expected unit label string");
      v.unit_label = cur_.text;
      bump();
    }
    expect(Tok::Semi, "';'");
    doc.decl_spans["var:" + v.name] = at;
    doc.space.vars.push_back(std::move(v));
  }

  void parse_op(SpecDocument& doc) {
    SourceSpan at = cur_.at;
    bump();  // 'op'
    OperatorSchema schema;
    schema.name = expect_name("operator name");
    for (const OperatorSchema& s : doc.space.schemas)
      if (s.name == schema.name) fail_at(at, "duplicate operator '" + schema.name + "'");
    expect(Tok::LParen, "'('");
    if (cur_.kind != Tok::RParen) {
      for (;;) {
        std::string p = expect_name("parameter name");
        for (const std::string& q : schema.params)
          if (q == p) fail("duplicate parameter '" + p + "'");
        schema.params.push_back(p);
        if (cur_.kind != Tok::Comma) break;
        bump();
      }
    }
    expect(Tok::RParen, "')'");
    if (schema.params.empty()) fail_at(at, "operator needs at least one parameter");
    if (schema.params.size() > doc.space.vars.size())
      fail_at(at, "operator '" + schema.name + "' has more parameters than variables");
    expect(Tok::LBrace, "'{'");
    expect_keyword("pre");
    expect(Tok::Colon, "':'");
    schema.precondition = typed_expr(schema.params, false, ExprType::Bool, "precondition");
    expect(Tok::Semi, "';'");
    if (!at_ident("eff")) fail("operator needs at least one effect");
    while (at_ident("eff")) {
      bump();
      expect(Tok::Colon, "':'");
      SourceSpan slot_at = cur_.at;
      std::string slot_name = expect_name("parameter name");
      int slot = -1;
      for (size_t i = 0; i < schema.params.size(); i++)
        if (schema.params[i] == slot_name) slot = static_cast<int>(i);
      if (slot < 0) fail_at(slot_at, "effect target '" + slot_name + "' is not a parameter");
      for (const auto& [s, _] : schema.effects)
        if (s == slot) fail_at(slot_at, "parameter '" + slot_name + "' assigned twice");
      expect(Tok::Assign, "':='");
      ExprPtr rhs = typed_expr(schema.params, false, ExprType::Int, "effect");
      expect(Tok::Semi, "';'");
      schema.effects.emplace_back(slot, std::move(rhs));
    }
    expect(Tok::RBrace, "'}'");
    if (cur_.kind == Tok::Semi) bump();  // tolerated after an op block
    doc.decl_spans["op:" + schema.name] = at;
    doc.space.schemas.push_back(std::move(schema));
  }

  void parse_constraint(SpecDocument& doc) {
    bump();  // 'constraint'
    if (at_ident("no_undo")) doc.space.no_undo = true;
    else if (at_ident("no_loop")) doc.space.no_loop = true;
    else fail("expected 'no_undo' or 'no_loop'");
    bump();
    expect(Tok::Semi, "';'");
  }

  void parse_failure(SpecDocument& doc) {
    SourceSpan at = cur_.at;
    bump();  // 'failure'
    if (doc.space.failure) fail_at(at, "duplicate failure predicate");
    expect(Tok::Colon, "':'");
    auto names = doc.space.var_names();
    doc.space.failure = typed_expr(names, true, ExprType::Bool, "failure predicate");
    expect(Tok::Semi, "';'");
    doc.decl_spans["failure"] = at;
  }

  void parse_instance(SpecDocument& doc) {
    SourceSpan at = cur_.at;
    bump();  // 'instance'
    ProblemInstance inst;
    inst.label = expect_name("instance label");
    for (const ProblemInstance& p : doc.instances)
      if (p.label == inst.label) fail_at(at, "duplicate instance '" + inst.label + "'");
    expect_keyword("of");
    SourceSpan of_at = cur_.at;
    std::string space_name = expect_name("space name");
    if (space_name != doc.space.name)
      fail_at(of_at, "unknown space '" + space_name + "'");
    expect(Tok::LBrace, "'{'");
    expect_keyword("init");
    expect(Tok::Colon, "':'");
    inst.initial.values.assign(doc.space.vars.size(), -1);
    for (;;) {
      SourceSpan vat = cur_.at;
      std::string vn = expect_name("variable name");
      int vi = doc.space.var_index(vn);
      if (vi < 0) fail_at(vat, "unknown variable '" + vn + "'");
      if (inst.initial.values[static_cast<size_t>(vi)] >= 0)
        fail_at(vat, "variable '" + vn + "' initialized twice");
      expect(Tok::Eq, "'='");
      SourceSpan nat = cur_.at;
      std::int64_t v = expect_int();
      if (v < 0 || v > doc.space.vars[static_cast<size_t>(vi)].capacity)
        fail_at(nat, "initial value " + std::to_string(v) + " out of bounds for '" + vn + "'");
      inst.initial.values[static_cast<size_t>(vi)] = static_cast<int>(v);
      if (cur_.kind != Tok::Comma) break;
      bump();
    }
    expect(Tok::Semi, "';'");
    for (size_t i = 0; i < inst.initial.values.size(); i++)
      if (inst.initial.values[i] < 0)
        fail_at(at, "variable '" + doc.space.vars[i].name + "' not initialized");
    if (at_ident("goal")) {
      SourceSpan gat = cur_.at;
      bump();
      expect(Tok::Colon, "':'");
      auto names = doc.space.var_names();
      inst.goal = typed_expr(names, true, ExprType::Bool, "goal");
      expect(Tok::Semi, "';'");
      doc.decl_spans["goal:" + inst.label] = gat;
    }
    expect(Tok::RBrace, "'}'");
    doc.decl_spans["instance:" + inst.label] = at;
    doc.instances.push_back(std::move(inst));
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

ParseResult parse_spec(std::string_view source) {
  return Parser(source).run();
}

}  // namespace pspace
