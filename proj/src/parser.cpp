#include "kpool/parser.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpool/error.hpp"

namespace kpool {

namespace {

bool lower_token(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

bool is_meta_formula(std::string_view s) { return s == "PHI" || s == "PSI" || s == "CHI"; }
bool is_meta_agent(std::string_view s) { return s.size() == 1 && std::isupper(static_cast<unsigned char>(s[0])); }

enum class Tok { Ident, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
      continue;
    }
    for (std::string_view sym : {"<->", "->", "~", "&", "|", "(", ")", "{", "}", "[", "]", ">", ",", ";"}) {
      if (src.substr(i, sym.size()) == sym) {
        out.push_back({Tok::Sym, std::string(sym), line, col});
        advance(sym.size());
        goto next;
      }
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  next:;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : toks_(tokenize(src)), opts_(opts) {}

  Formula run() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool at_sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool accept(std::string_view s) {
    if (!at_sym(s)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek()); }
  [[noreturn]] static void fail_at(const std::string& msg, const Token& t) { throw ParseError(msg, t.line, t.col); }
  void expect(std::string_view s) {
    if (!accept(s)) {
      fail("expected '" + std::string(s) + "'" +
           (peek().kind == Tok::End ? std::string(" at end of input") : ", found '" + peek().text + "'"));
    }
  }

  Formula formula() {
    Formula l = imp();
    while (accept("<->")) l = Formula::iff(l, imp());
    return l;
  }
  Formula imp() {
    Formula l = disj();
    if (accept("->")) return Formula::imp(l, imp());
    return l;
  }
  Formula disj() {
    Formula l = conj();
    while (accept("|")) l = Formula::disj(l, conj());
    return l;
  }
  Formula conj() {
    Formula l = unary();
    while (accept("&")) l = Formula::conj(l, unary());
    return l;
  }
  Formula unary() {
    if (accept("~")) return Formula::neg(unary());
    return modal();
  }

  Agent agent() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && (is_agent_name(t.text) || (opts_.allow_meta && is_meta_agent(t.text)))) {
      ++pos_;
      return t.text;
    }
    fail(t.kind == Tok::End ? "expected agent name at end of input" : "expected agent name, found '" + t.text + "'");
  }

  std::vector<Agent> agent_list(std::string_view close) {
    std::vector<Agent> out;
    if (at_sym(close)) fail("empty agent group");
    out.push_back(agent());
    while (accept(",")) out.push_back(agent());
    return out;
  }

  template <class Build>
  Formula guarded(const Token& at, Build&& build) {
    try {
      return build();
    } catch (const std::invalid_argument& e) {
      fail_at(e.what(), at);
    }
  }

  Formula modal() {
    const Token t = peek();
    if (t.kind == Tok::Sym) {
      if (accept("(")) {
        Formula f = formula();
        expect(")");
        return f;
      }
      if (accept("[")) {
        Agent a = agent();
        expect(">");
        Agent b = agent();
        expect("]");
        return Formula::share(a, b, unary());
      }
      fail(t.text.empty() ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
    if (t.kind == Tok::End) fail("unexpected end of input");
    ++pos_;
    const std::string& w = t.text;
    if (w == "true") return Formula::top();
    if (w == "false") return Formula::bot();
    if (w == "O") return Formula::ideal();
    if (w == "K") {
      expect("{");
      Agent k = agent();
      std::vector<Agent> deps;
      if (accept("|")) deps = agent_list("}");
      expect("}");
      Formula body = unary();
      return guarded(t, [&] { return Formula::know(k, deps, body); });
    }
    if (w == "D" || w == "E" || w == "Ri") {
      expect("{");
      auto g = agent_list("}");
      expect("}");
      Formula body = unary();
      return guarded(t, [&] {
        if (w == "D") return Formula::dist(g, body);
        if (w == "E") return Formula::everybody(g, body);
        return Formula::resolve_info(g, body);
      });
    }
    if (w == "Rk") {
      expect("{");
      auto g = agent_list("}");
      if (g.size() == 1 && accept(";")) {
        auto group = agent_list("}");
        expect("}");
        Formula body = unary();
        return guarded(t, [&] { return Formula::resolve_knowledge_from(g[0], group, body); });
      }
      expect("}");
      Formula body = unary();
      return guarded(t, [&] { return Formula::resolve_knowledge(g, body); });
    }
    if (w == "P" || w == "Ob" || w == "Ok") {
      expect("{");
      Agent a = agent();
      expect("}");
      if (w == "Ok") return Formula::ok(a);
      Formula body = unary();
      return w == "P" ? Formula::permit_know(a, body) : Formula::ought_know(a, body);
    }
    if (w == "Perm") {
      expect("(");
      Agent a = agent();
      expect(">");
      Agent b = agent();
      expect(")");
      return Formula::permit_share(a, b);
    }
    if (opts_.allow_meta && is_meta_formula(w)) return Formula::meta(w);
    if (is_atom_name(w)) return Formula::atom(w);
    fail_at("unknown operator '" + w + "'", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
};

}  // namespace

bool is_agent_name(std::string_view s) { return lower_token(s) && s != "true" && s != "false"; }
bool is_atom_name(std::string_view s) { return is_agent_name(s); }

Formula parse(std::string_view text, const ParseOptions& opts) { return Parser(text, opts).run(); }

}  // namespace kpool
