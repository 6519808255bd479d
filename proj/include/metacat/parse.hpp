#pragma once

// Lexer and recursive-descent parser for the .mcat surface format.
//
//   file   := item*
//   item   := "syntax" IDENT ":" NAT
//           | "rule"  IDENT "(" IDENT* ")" ":" ctx "=>" ctx
//           | "thm"   IDENT "(" IDENT* ")" ":" ctx "=>" ctx "{" dexpr "}"
//   ctx    := "[" (term ("," term)*)? "]"
//   term   := IDENT | IDENT "(" (term ("," term)*)? ")"
//   dexpr  := dseq ;  dseq := dpar (";" dpar)* ;  dpar := datom ("*" datom)*
//   datom  := IDENT | "id" NAT | "sym" NAT NAT | "dup" | "drop" | "(" dexpr ")"
//
// Whitespace-insensitive; // starts a line comment.

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metacat/errors.hpp"

namespace metacat {

struct TermNode {
  std::string name;
  bool applied = false;  // distinguishes `c()` from a bare `c`
  std::vector<TermNode> args;
  SourcePos pos;
};

struct DerivExpr {
  enum class Kind { Name, Id, Sym, Dup, Drop, Seq, Par };
  Kind kind = Kind::Name;
  std::string name;
  std::size_t a = 0, b = 0;  // Id width in a; Sym blocks in a,b
  std::vector<DerivExpr> kids;
  SourcePos pos;
};

struct SyntaxDecl {
  std::string name;
  std::size_t arity = 0;
  SourcePos pos;
};

struct RuleDecl {
  bool is_theorem = false;
  std::string name;
  std::vector<std::string> params;
  std::vector<TermNode> hypotheses;
  std::vector<TermNode> conclusions;
  std::optional<DerivExpr> body;  // present iff is_theorem
  SourcePos pos;
};

using Item = std::variant<SyntaxDecl, RuleDecl>;

struct SourceFile {
  std::vector<Item> items;
};

namespace detail {

enum class TokKind {
  Ident,
  Nat,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Colon,
  Comma,
  Semicolon,
  Star,
  Arrow,
  End,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  std::size_t value = 0;  // for Nat
  SourcePos pos;
};

inline const char* token_name(TokKind k) {
  switch (k) {
    case TokKind::Ident: return "identifier";
    case TokKind::Nat: return "number";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::LBracket: return "'['";
    case TokKind::RBracket: return "']'";
    case TokKind::LBrace: return "'{'";
    case TokKind::RBrace: return "'}'";
    case TokKind::Colon: return "':'";
    case TokKind::Comma: return "','";
    case TokKind::Semicolon: return "';'";
    case TokKind::Star: return "'*'";
    case TokKind::Arrow: return "'=>'";
    case TokKind::End: return "end of input";
  }
  return "token";
}

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

inline std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto pos = [&]() { return SourcePos{line, col}; };
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (text[i] == '\n') {
        line += 1;
        col = 1;
      } else {
        col += 1;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourcePos at = pos();
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({TokKind::Ident, std::string(text.substr(i, j - i)), 0, at});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i, value = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        value = value * 10 + static_cast<std::size_t>(text[j] - '0');
        if (value > 1000000)
          fail(ErrorKind::ParseError, "number too large", at);
        ++j;
      }
      out.push_back({TokKind::Nat, std::string(text.substr(i, j - i)), value, at});
      advance(j - i);
      continue;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({TokKind::Arrow, "=>", 0, at});
      advance(2);
      continue;
    }
    TokKind kind;
    switch (c) {
      case '(': kind = TokKind::LParen; break;
      case ')': kind = TokKind::RParen; break;
      case '[': kind = TokKind::LBracket; break;
      case ']': kind = TokKind::RBracket; break;
      case '{': kind = TokKind::LBrace; break;
      case '}': kind = TokKind::RBrace; break;
      case ':': kind = TokKind::Colon; break;
      case ',': kind = TokKind::Comma; break;
      case ';': kind = TokKind::Semicolon; break;
      case '*': kind = TokKind::Star; break;
      default:
        fail(ErrorKind::ParseError,
             std::string("unexpected character '") + c + "'", at);
    }
    out.push_back({kind, std::string(1, c), 0, at});
    advance(1);
  }
  out.push_back({TokKind::End, "", 0, pos()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  SourceFile file() {
    SourceFile out;
    while (peek().kind != TokKind::End) out.items.push_back(item());
    return out;
  }

 private:
  const Token& peek() const { return tokens_[cursor_]; }
  Token take() { return tokens_[cursor_++]; }

  Token expect(TokKind kind, const char* context) {
    if (peek().kind != kind)
      fail(ErrorKind::ParseError,
           std::string("expected ") + token_name(kind) + " in " + context + ", found " +
               describe(peek()),
           peek().pos);
    return take();
  }

  static std::string describe(const Token& t) {
    if (t.kind == TokKind::End) return "end of input";
    return "'" + t.text + "'";
  }

  Item item() {
    const Token head = expect(TokKind::Ident, "item");
    if (head.text == "syntax") {
      SyntaxDecl decl;
      decl.pos = head.pos;
      decl.name = expect(TokKind::Ident, "syntax declaration").text;
      expect(TokKind::Colon, "syntax declaration");
      decl.arity = expect(TokKind::Nat, "syntax declaration").value;
      return decl;
    }
    if (head.text == "rule" || head.text == "thm") {
      RuleDecl decl;
      decl.pos = head.pos;
      decl.is_theorem = head.text == "thm";
      decl.name = expect(TokKind::Ident, "declaration").text;
      expect(TokKind::LParen, "parameter list");
      while (peek().kind == TokKind::Ident) decl.params.push_back(take().text);
      expect(TokKind::RParen, "parameter list");
      expect(TokKind::Colon, "declaration");
      decl.hypotheses = ctx();
      expect(TokKind::Arrow, "declaration");
      decl.conclusions = ctx();
      if (decl.is_theorem) {
        expect(TokKind::LBrace, "theorem body");
        decl.body = dexpr();
        expect(TokKind::RBrace, "theorem body");
      }
      return decl;
    }
    fail(ErrorKind::ParseError,
         "expected 'syntax', 'rule' or 'thm', found '" + head.text + "'", head.pos);
  }

  std::vector<TermNode> ctx() {
    expect(TokKind::LBracket, "context");
    std::vector<TermNode> terms;
    if (peek().kind != TokKind::RBracket) {
      terms.push_back(term());
      while (peek().kind == TokKind::Comma) {
        take();
        terms.push_back(term());
      }
    }
    expect(TokKind::RBracket, "context");
    return terms;
  }

  TermNode term() {
    const Token head = expect(TokKind::Ident, "term");
    TermNode node;
    node.name = head.text;
    node.pos = head.pos;
    if (peek().kind == TokKind::LParen) {
      take();
      node.applied = true;
      if (peek().kind != TokKind::RParen) {
        node.args.push_back(term());
        while (peek().kind == TokKind::Comma) {
          take();
          node.args.push_back(term());
        }
      }
      expect(TokKind::RParen, "term");
    }
    return node;
  }

  DerivExpr dexpr() {
    DerivExpr left = dpar();
    while (peek().kind == TokKind::Semicolon) {
      const SourcePos at = take().pos;
      DerivExpr right = dpar();
      DerivExpr seq;
      seq.kind = DerivExpr::Kind::Seq;
      seq.pos = at;
      seq.kids = {std::move(left), std::move(right)};
      left = std::move(seq);
    }
    return left;
  }

  DerivExpr dpar() {
    DerivExpr left = datom();
    while (peek().kind == TokKind::Star) {
      const SourcePos at = take().pos;
      DerivExpr right = datom();
      DerivExpr par;
      par.kind = DerivExpr::Kind::Par;
      par.pos = at;
      par.kids = {std::move(left), std::move(right)};
      left = std::move(par);
    }
    return left;
  }

  DerivExpr datom() {
    if (peek().kind == TokKind::LParen) {
      take();
      DerivExpr inner = dexpr();
      expect(TokKind::RParen, "derivation expression");
      return inner;
    }
    const Token head = expect(TokKind::Ident, "derivation expression");
    DerivExpr atom;
    atom.pos = head.pos;
    if (head.text == "id") {
      atom.kind = DerivExpr::Kind::Id;
      atom.a = expect(TokKind::Nat, "id atom").value;
    } else if (head.text == "sym") {
      atom.kind = DerivExpr::Kind::Sym;
      atom.a = expect(TokKind::Nat, "sym atom").value;
      atom.b = expect(TokKind::Nat, "sym atom").value;
    } else if (head.text == "dup") {
      atom.kind = DerivExpr::Kind::Dup;
    } else if (head.text == "drop") {
      atom.kind = DerivExpr::Kind::Drop;
    } else {
      atom.kind = DerivExpr::Kind::Name;
      atom.name = head.text;
    }
    return atom;
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

}  // namespace detail

inline SourceFile parse(std::string_view text) { return detail::Parser(text).file(); }

}  // namespace metacat
