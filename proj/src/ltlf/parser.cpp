#include "ecrl/ltlf/parser.hpp"

#include <cctype>
#include <vector>

namespace ecrl::ltlf {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  Not,
  And,
  Or,
  Implies,
  Iff,
  End,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      tokens.push_back({Tok::Ident, text.substr(i, j - i), i});
      i = j;
      continue;
    }
    auto single = [&](Tok kind) {
      tokens.push_back({kind, text.substr(i, 1), i});
      ++i;
    };
    switch (c) {
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '!': single(Tok::Not); continue;
      case '&': single(Tok::And); continue;
      case '|': single(Tok::Or); continue;
      default: break;
    }
    if (text.substr(i, 2) == "->") {
      tokens.push_back({Tok::Implies, text.substr(i, 2), i});
      i += 2;
      continue;
    }
    if (text.substr(i, 3) == "<->") {
      tokens.push_back({Tok::Iff, text.substr(i, 3), i});
      i += 3;
      continue;
    }
    throw SyntaxError(i, std::string("unexpected character '") + c + "'");
  }
  tokens.push_back({Tok::End, {}, text.size()});
  return tokens;
}

class Parser {
 public:
  Parser(std::string_view text, const AtomSet& atoms)
      : tokens_(lex(text)), atoms_(atoms) {}

  Formula run() {
    auto f = iff();
    if (peek().kind != Tok::End)
      throw SyntaxError(peek().offset,
                        "unexpected '" + std::string(peek().text) + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool keyword(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }

  Formula iff() {
    auto f = implies();
    while (peek().kind == Tok::Iff) {
      take();
      f = Formula::iff(f, implies());
    }
    return f;
  }

  Formula implies() {
    auto f = disjunction();
    if (peek().kind == Tok::Implies) {
      take();
      return Formula::implies(f, implies());
    }
    return f;
  }

  Formula disjunction() {
    auto f = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    auto f = until();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::conj(f, until());
    }
    return f;
  }

  Formula until() {
    auto f = unary();
    if (keyword("U")) {
      take();
      return Formula::until(f, until());
    }
    return f;
  }

  Formula unary() {
    if (peek().kind == Tok::Not) {
      take();
      return Formula::negation(unary());
    }
    if (keyword("X")) {
      take();
      return Formula::next(unary());
    }
    if (keyword("N")) {
      take();
      return Formula::weak_next(unary());
    }
    if (keyword("F")) {
      take();
      return Formula::eventually(unary());
    }
    if (keyword("G")) {
      take();
      return Formula::always(unary());
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        take();
        auto f = iff();
        if (peek().kind != Tok::RParen)
          throw SyntaxError(peek().offset, "expected ')'");
        take();
        return f;
      }
      case Tok::Ident: {
        if (t.text == "true") return take(), Formula::top();
        if (t.text == "false") return take(), Formula::bottom();
        if (t.text == "last") return take(), Formula::last();
        if (t.text == "U")
          throw SyntaxError(t.offset, "'U' is missing its left operand");
        take();
        return Formula::atom(atoms_.index_of(t.text));
      }
      case Tok::End:
        throw SyntaxError(t.offset, "unexpected end of input");
      default:
        throw SyntaxError(t.offset,
                          "unexpected '" + std::string(t.text) + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const AtomSet& atoms_;
};

}  // namespace

Formula parse(std::string_view text, const AtomSet& atoms) {
  return Parser(text, atoms).run();
}

}  // namespace ecrl::ltlf
