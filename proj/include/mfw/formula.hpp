#pragma once

// Modal formulas as immutable shared trees, plus the parser/printer pair,
// substitution, and the axiom/theory catalogue used everywhere else.
//
// Grammar (loosest to tightest): <->  ->  |  &  {~ [] <>}.
// -> and <-> associate to the right, & and | to the left.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mfw {

class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when a requested computation would exceed a configured size bound.
class budget_error : public error {
public:
  using error::error;
};

class parse_error : public error {
public:
  parse_error(const std::string& msg, int line, int column, std::string expected)
      : error(msg), line_(line), column_(column), expected_(std::move(expected)) {}
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

private:
  int line_;
  int column_;
  std::string expected_;
};

enum class Kind : unsigned char { Atom, Top, Bot, Not, Box, Diamond, And, Or, Implies, Iff };

inline bool is_unary(Kind k) { return k == Kind::Not || k == Kind::Box || k == Kind::Diamond; }
inline bool is_binary(Kind k) {
  return k == Kind::And || k == Kind::Or || k == Kind::Implies || k == Kind::Iff;
}

class Formula {
public:
  Formula() : node_(top_node()) {}  // default is "true"

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  Formula child() const { return Formula(node_->lhs); }  // unary operand

  // Stable identity of the underlying node; used as a memoisation key.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    return equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  static Formula make_atom(std::string name) {
    return Formula(std::make_shared<Node>(Node{Kind::Atom, std::move(name), nullptr, nullptr}));
  }
  static Formula make_top() { return Formula(top_node()); }
  static Formula make_bot() { return Formula(bot_node()); }
  static Formula make_unary(Kind k, Formula f) {
    return Formula(std::make_shared<Node>(Node{k, {}, f.node_, nullptr}));
  }
  static Formula make_binary(Kind k, Formula a, Formula b) {
    return Formula(std::make_shared<Node>(Node{k, {}, a.node_, b.node_}));
  }

private:
  struct Node {
    Kind kind;
    std::string name;  // Atom only
    std::shared_ptr<const Node> lhs, rhs;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static const std::shared_ptr<const Node>& top_node() {
    static const std::shared_ptr<const Node> n =
        std::make_shared<Node>(Node{Kind::Top, {}, nullptr, nullptr});
    return n;
  }
  static const std::shared_ptr<const Node>& bot_node() {
    static const std::shared_ptr<const Node> n =
        std::make_shared<Node>(Node{Kind::Bot, {}, nullptr, nullptr});
    return n;
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::Atom: return a->name == b->name;
      case Kind::Top:
      case Kind::Bot: return true;
      case Kind::Not:
      case Kind::Box:
      case Kind::Diamond: return equal(a->lhs.get(), b->lhs.get());
      default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
    }
  }

  std::shared_ptr<const Node> node_;
};

inline Formula atom(std::string name) { return Formula::make_atom(std::move(name)); }
inline Formula top() { return Formula::make_top(); }
inline Formula bot() { return Formula::make_bot(); }
inline Formula neg(Formula f) { return Formula::make_unary(Kind::Not, std::move(f)); }
inline Formula box(Formula f) { return Formula::make_unary(Kind::Box, std::move(f)); }
inline Formula dia(Formula f) { return Formula::make_unary(Kind::Diamond, std::move(f)); }
inline Formula conj(Formula a, Formula b) {
  return Formula::make_binary(Kind::And, std::move(a), std::move(b));
}
inline Formula disj(Formula a, Formula b) {
  return Formula::make_binary(Kind::Or, std::move(a), std::move(b));
}
inline Formula imp(Formula a, Formula b) {
  return Formula::make_binary(Kind::Implies, std::move(a), std::move(b));
}
inline Formula equiv(Formula a, Formula b) {
  return Formula::make_binary(Kind::Iff, std::move(a), std::move(b));
}

// Left fold; the empty conjunction is "true", the empty disjunction "false".
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
  return r;
}
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
  return r;
}

// ---------------------------------------------------------------------------
// Printing.  Levels: <-> 1, -> 2, | 3, & 4, unary 5, leaves 6.  A child is
// parenthesised exactly when omitting the parentheses would re-associate it,
// so parse(render(f)) == f and no redundant parentheses are emitted.

namespace detail {

inline int prec(Kind k) {
  switch (k) {
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond: return 5;
    default: return 6;
  }
}

inline void render_into(const Formula& f, std::string& out) {
  auto emit = [&out](const Formula& g, bool parens) {
    if (parens) out += '(';
    render_into(g, out);
    if (parens) out += ')';
  };
  const int lvl = prec(f.kind());
  switch (f.kind()) {
    case Kind::Atom: out += f.atom_name(); break;
    case Kind::Top: out += "true"; break;
    case Kind::Bot: out += "false"; break;
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond: {
      out += f.kind() == Kind::Not ? "~" : f.kind() == Kind::Box ? "[]" : "<>";
      emit(f.child(), prec(f.child().kind()) < lvl);
      break;
    }
    case Kind::And:
    case Kind::Or: {  // left-associative
      emit(f.left(), prec(f.left().kind()) < lvl);
      out += f.kind() == Kind::And ? " & " : " | ";
      emit(f.right(), prec(f.right().kind()) <= lvl);
      break;
    }
    case Kind::Implies:
    case Kind::Iff: {  // right-associative
      emit(f.left(), prec(f.left().kind()) <= lvl);
      out += f.kind() == Kind::Implies ? " -> " : " <-> ";
      emit(f.right(), prec(f.right().kind()) < lvl);
      break;
    }
  }
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

enum class Tok : unsigned char {
  LParen, RParen, Not, And, Or, Imp, Iff, Box, Dia, True, False, Ident, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

inline std::string token_desc(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    const int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      std::string word(src_.substr(start, pos_ - start));
      if (word == "true") return {Tok::True, word, line, col};
      if (word == "false") return {Tok::False, word, line, col};
      return {Tok::Ident, word, line, col};
    }
    switch (c) {
      case '(': advance(); return {Tok::LParen, "(", line, col};
      case ')': advance(); return {Tok::RParen, ")", line, col};
      case '~': advance(); return {Tok::Not, "~", line, col};
      case '&': advance(); return {Tok::And, "&", line, col};
      case '|': advance(); return {Tok::Or, "|", line, col};
      case '[':
        advance();
        expect(']', line, col, "'[]'");
        return {Tok::Box, "[]", line, col};
      case '-':
        advance();
        expect('>', line, col, "'->'");
        return {Tok::Imp, "->", line, col};
      case '<':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '-') {
          advance();
          expect('>', line, col, "'<->'");
          return {Tok::Iff, "<->", line, col};
        }
        expect('>', line, col, "'<>' or '<->'");
        return {Tok::Dia, "<>", line, col};
      default:
        throw parse_error(pos__msg(line, col, std::string("unexpected character '") + c + "'"),
                          line, col, "a formula token");
    }
  }

  static std::string pos__msg(int line, int col, const std::string& what) {
    return std::to_string(line) + ":" + std::to_string(col) + ": " + what;
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void expect(char c, int line, int col, const std::string& forming) {
    if (pos_ >= src_.size() || src_[pos_] != c)
      throw parse_error(pos__msg(line, col, "malformed operator, expected " + forming), line, col,
                        forming);
    advance();
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
        advance();
      else
        break;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  Formula parse_all() {
    Formula f = parse_iff();
    if (cur_.kind != Tok::End) fail("end of input");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& expected) {
    throw parse_error(Lexer::pos__msg(cur_.line, cur_.col,
                                      "expected " + expected + ", found " + token_desc(cur_)),
                      cur_.line, cur_.col, expected);
  }

  void bump() { cur_ = lex_.next(); }

  Formula parse_iff() {
    Formula lhs = parse_imp();
    if (cur_.kind == Tok::Iff) {
      bump();
      return equiv(std::move(lhs), parse_iff());
    }
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (cur_.kind == Tok::Imp) {
      bump();
      return imp(std::move(lhs), parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (cur_.kind == Tok::Or) {
      bump();
      lhs = disj(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (cur_.kind == Tok::And) {
      bump();
      lhs = conj(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    switch (cur_.kind) {
      case Tok::Not: bump(); return neg(parse_unary());
      case Tok::Box: bump(); return box(parse_unary());
      case Tok::Dia: bump(); return dia(parse_unary());
      case Tok::LParen: {
        bump();
        Formula f = parse_iff();
        if (cur_.kind != Tok::RParen) fail("')'");
        bump();
        return f;
      }
      case Tok::True: bump(); return top();
      case Tok::False: bump(); return bot();
      case Tok::Ident: {
        Formula f = atom(cur_.text);
        bump();
        return f;
      }
      default: fail("a formula");
    }
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Structural operations.

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.kind() == Kind::Atom)
      out.insert(g.atom_name());
    else if (is_unary(g.kind()))
      stack.push_back(g.child());
    else if (is_binary(g.kind())) {
      stack.push_back(g.left());
      stack.push_back(g.right());
    }
  }
  return out;
}

inline int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot: return 0;
    case Kind::Not: return modal_depth(f.child());
    case Kind::Box:
    case Kind::Diamond: return 1 + modal_depth(f.child());
    default: return std::max(modal_depth(f.left()), modal_depth(f.right()));
  }
}

// Simultaneous substitution: replacements are not themselves re-substituted.
namespace detail {
inline Formula substitute_memo(const Formula& f, const std::map<std::string, Formula>& sub,
                               std::unordered_map<const void*, Formula>& memo) {
  auto it = memo.find(f.id());
  if (it != memo.end()) return it->second;
  Formula result = f;
  switch (f.kind()) {
    case Kind::Atom: {
      auto s = sub.find(f.atom_name());
      if (s != sub.end()) result = s->second;
      break;
    }
    case Kind::Top:
    case Kind::Bot: break;
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond: {
      Formula c = substitute_memo(f.child(), sub, memo);
      result = Formula::make_unary(f.kind(), std::move(c));
      break;
    }
    default: {
      Formula l = substitute_memo(f.left(), sub, memo);
      Formula r = substitute_memo(f.right(), sub, memo);
      result = Formula::make_binary(f.kind(), std::move(l), std::move(r));
      break;
    }
  }
  memo.emplace(f.id(), result);
  return result;
}
}  // namespace detail

inline Formula substitute(const Formula& f, const std::map<std::string, Formula>& sub) {
  std::unordered_map<const void*, Formula> memo;
  return detail::substitute_memo(f, sub, memo);
}

// ---------------------------------------------------------------------------
// Axiom catalogue.  Schema letters are instantiated with the atoms p and q.

enum class Axiom : unsigned char { K, Dual, S, Four, Dot2, Five, M, W5, Dot3, Dm, Grz, Loeb, H, Dir };

inline const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> v{Axiom::K,  Axiom::Dual, Axiom::S,   Axiom::Four, Axiom::Dot2,
                                    Axiom::Five, Axiom::M,  Axiom::W5,  Axiom::Dot3, Axiom::Dm,
                                    Axiom::Grz,  Axiom::Loeb, Axiom::H, Axiom::Dir};
  return v;
}

inline std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::K: return "K";
    case Axiom::Dual: return "Dual";
    case Axiom::S: return "S";
    case Axiom::Four: return "4";
    case Axiom::Dot2: return ".2";
    case Axiom::Five: return "5";
    case Axiom::M: return "M";
    case Axiom::W5: return "W5";
    case Axiom::Dot3: return ".3";
    case Axiom::Dm: return "Dm";
    case Axiom::Grz: return "Grz";
    case Axiom::Loeb: return "L\303\266b";  // UTF-8
    case Axiom::H: return "H";
    case Axiom::Dir: return "Dir";
  }
  throw error("unknown axiom id");
}

inline std::optional<Axiom> axiom_by_name(std::string_view name) {
  for (Axiom a : all_axioms())
    if (axiom_name(a) == name) return a;
  if (name == "Lob" || name == "Loeb") return Axiom::Loeb;  // ASCII aliases
  return std::nullopt;
}

inline Formula axiom_formula(Axiom a) {
  const Formula p = atom("p"), q = atom("q");
  switch (a) {
    case Axiom::K: return imp(box(imp(p, q)), imp(box(p), box(q)));
    case Axiom::Dual: return equiv(neg(dia(p)), box(neg(p)));
    case Axiom::S: return imp(box(p), p);
    case Axiom::Four: return imp(box(p), box(box(p)));
    case Axiom::Dot2: return imp(dia(box(p)), box(dia(p)));
    case Axiom::Five: return imp(dia(box(p)), p);
    case Axiom::M: return imp(box(dia(p)), dia(box(p)));
    case Axiom::W5: return imp(dia(box(p)), imp(p, box(p)));
    case Axiom::Dot3:
      return imp(conj(dia(p), dia(q)),
                 disj_all({dia(conj(p, dia(q))), dia(conj(p, q)), dia(conj(q, dia(p)))}));
    case Axiom::Dm: return imp(box(imp(box(imp(p, box(p))), p)), imp(dia(box(p)), p));
    case Axiom::Grz: return imp(box(imp(box(imp(p, box(p))), p)), p);
    case Axiom::Loeb: return imp(box(imp(box(p), p)), box(p));
    case Axiom::H: return imp(p, box(imp(dia(p), p)));
    case Axiom::Dir: return imp(conj(dia(box(p)), dia(box(q))), dia(box(conj(p, q))));
  }
  throw error("unknown axiom id");
}

// ---------------------------------------------------------------------------
// Theories: named axiom sets, listed in catalogue order.

enum class Theory : unsigned char {
  K, K4, S4, S4_1, S4_2, S4_2_1, S4_3, S4W5, S5, Dm, Dm_2, Grz, GL, K4H
};

inline const std::vector<Theory>& all_theories() {
  static const std::vector<Theory> v{Theory::K,    Theory::K4,  Theory::S4,   Theory::S4_1,
                                     Theory::S4_2, Theory::S4_2_1, Theory::S4_3, Theory::S4W5,
                                     Theory::S5,   Theory::Dm,  Theory::Dm_2, Theory::Grz,
                                     Theory::GL,   Theory::K4H};
  return v;
}

inline std::string theory_name(Theory t) {
  switch (t) {
    case Theory::K: return "K";
    case Theory::K4: return "K4";
    case Theory::S4: return "S4";
    case Theory::S4_1: return "S4.1";
    case Theory::S4_2: return "S4.2";
    case Theory::S4_2_1: return "S4.2.1";
    case Theory::S4_3: return "S4.3";
    case Theory::S4W5: return "S4W5";
    case Theory::S5: return "S5";
    case Theory::Dm: return "Dm";
    case Theory::Dm_2: return "Dm.2";
    case Theory::Grz: return "Grz";
    case Theory::GL: return "GL";
    case Theory::K4H: return "K4H";
  }
  throw error("unknown theory id");
}

inline std::optional<Theory> theory_by_name(std::string_view name) {
  for (Theory t : all_theories())
    if (theory_name(t) == name) return t;
  return std::nullopt;
}

inline std::vector<Axiom> theory_axiom_list(Theory t) {
  using A = Axiom;
  switch (t) {
    case Theory::K: return {A::K, A::Dual};
    case Theory::K4: return {A::K, A::Dual, A::Four};
    case Theory::S4: return {A::K, A::Dual, A::S, A::Four};
    case Theory::S4_1: return {A::K, A::Dual, A::S, A::Four, A::M};
    case Theory::S4_2: return {A::K, A::Dual, A::S, A::Four, A::Dot2};
    case Theory::S4_2_1: return {A::K, A::Dual, A::S, A::Four, A::Dot2, A::M};
    case Theory::S4_3: return {A::K, A::Dual, A::S, A::Four, A::Dot3};
    case Theory::S4W5: return {A::K, A::Dual, A::S, A::Four, A::W5};
    case Theory::S5: return {A::K, A::Dual, A::S, A::Four, A::Five};
    case Theory::Dm: return {A::K, A::Dual, A::S, A::Four, A::Dm};
    case Theory::Dm_2: return {A::K, A::Dual, A::S, A::Four, A::Dot2, A::Dm};
    case Theory::Grz: return {A::K, A::Dual, A::Grz};
    case Theory::GL: return {A::K, A::Dual, A::Four, A::Loeb};
    case Theory::K4H: return {A::K, A::Dual, A::Four, A::H};
  }
  throw error("unknown theory id");
}

inline std::vector<Formula> theory_axioms(Theory t) {
  std::vector<Formula> out;
  for (Axiom a : theory_axiom_list(t)) out.push_back(axiom_formula(a));
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic formula enumeration (seedless "fuzzer").  Formulas are listed
// by node count; within one size, unary constructions (~, [], <>) come before
// binary ones (&, |, ->, <->), each walking smaller formulas in list order.

inline std::vector<Formula> enumerate_formulas(const std::vector<std::string>& atom_names,
                                               std::size_t max_nodes) {
  std::vector<std::vector<Formula>> by_size(max_nodes + 1);
  if (max_nodes == 0) return {};
  for (const auto& a : atom_names) by_size[1].push_back(atom(a));
  by_size[1].push_back(top());
  by_size[1].push_back(bot());
  static constexpr Kind unary_ops[] = {Kind::Not, Kind::Box, Kind::Diamond};
  static constexpr Kind binary_ops[] = {Kind::And, Kind::Or, Kind::Implies, Kind::Iff};
  for (std::size_t s = 2; s <= max_nodes; ++s) {
    for (Kind op : unary_ops)
      for (const Formula& f : by_size[s - 1]) by_size[s].push_back(Formula::make_unary(op, f));
    for (Kind op : binary_ops)
      for (std::size_t i = 1; i + 1 < s; ++i)
        for (const Formula& l : by_size[i])
          for (const Formula& r : by_size[s - 1 - i])
            by_size[s].push_back(Formula::make_binary(op, l, r));
  }
  std::vector<Formula> out;
  for (std::size_t s = 1; s <= max_nodes; ++s)
    out.insert(out.end(), by_size[s].begin(), by_size[s].end());
  return out;
}

}  // namespace mfw
