#include <cctype>
#include <string>
#include <utility>

#include "rhopol/surface.hpp"

namespace rhopol {

namespace surface {

namespace {

std::shared_ptr<SurfaceNode> make(SurfaceKind k) {
  auto n = std::make_shared<SurfaceNode>();
  n->kind = k;
  return n;
}

}  // namespace

SurfaceName name(std::string id) {
  SurfaceName n;
  n.ident = std::move(id);
  return n;
}

SurfaceName quote(SurfaceProgram p) {
  SurfaceName n;
  n.kind = SurfaceName::Kind::Quote;
  n.quoted = std::move(p);
  return n;
}

SurfaceProgram zero() { return make(SurfaceKind::Zero); }

SurfaceProgram int_lit(std::int64_t v) {
  auto n = make(SurfaceKind::Int);
  n->ival = v;
  return n;
}

SurfaceProgram str_lit(std::string s) {
  auto n = make(SurfaceKind::Str);
  n->sval = std::move(s);
  return n;
}

SurfaceProgram undefined_lit() { return make(SurfaceKind::Undefined); }

SurfaceProgram ref(std::string id) {
  auto n = make(SurfaceKind::Ref);
  n->ident = std::move(id);
  return n;
}

SurfaceProgram drop(SurfaceName x) {
  auto n = make(SurfaceKind::Drop);
  n->chan = std::move(x);
  return n;
}

SurfaceProgram input(SurfaceName chan, std::vector<std::string> binders, SurfaceProgram body) {
  auto n = make(SurfaceKind::Input);
  n->chan = std::move(chan);
  for (auto& b : binders) n->binders.push_back(SurfaceBinder{false, std::move(b), {}});
  n->kids.push_back(std::move(body));
  return n;
}

SurfaceProgram pattern_input(SurfaceName chan, std::string label, std::vector<std::string> args,
                             SurfaceProgram body) {
  auto n = make(SurfaceKind::Input);
  n->chan = std::move(chan);
  n->label = std::move(label);
  for (auto& b : args) n->binders.push_back(SurfaceBinder{false, std::move(b), {}});
  n->kids.push_back(std::move(body));
  return n;
}

SurfaceProgram output(SurfaceName chan, std::vector<SurfaceProgram> args) {
  auto n = make(SurfaceKind::Output);
  n->chan = std::move(chan);
  n->kids = std::move(args);
  return n;
}

SurfaceProgram message(SurfaceName chan, std::string label, std::vector<SurfaceProgram> args) {
  auto n = make(SurfaceKind::Output);
  n->chan = std::move(chan);
  n->label = std::move(label);
  n->kids = std::move(args);
  return n;
}

SurfaceProgram par(std::vector<SurfaceProgram> statements) {
  auto n = make(SurfaceKind::Par);
  n->kids = std::move(statements);
  return n;
}

SurfaceProgram block(std::vector<SurfaceProgram> statements) {
  auto n = make(SurfaceKind::Block);
  n->kids = std::move(statements);
  return n;
}

SurfaceProgram match(std::vector<SurfaceProgram> branches) {
  auto n = make(SurfaceKind::Match);
  n->kids = std::move(branches);
  return n;
}

SurfaceProgram new_(std::vector<std::string> names, SurfaceProgram body) {
  auto n = make(SurfaceKind::New);
  n->params = std::move(names);
  n->kids.push_back(std::move(body));
  return n;
}

SurfaceProgram def(std::string name, std::vector<std::string> params, SurfaceProgram body) {
  auto n = make(SurfaceKind::Def);
  n->ident = std::move(name);
  n->params = std::move(params);
  n->kids.push_back(std::move(body));
  return n;
}

SurfaceProgram apply(std::string name, std::vector<SurfaceProgram> args) {
  auto n = make(SurfaceKind::Apply);
  n->ident = std::move(name);
  n->kids = std::move(args);
  return n;
}

SurfaceProgram arith(ArithOp op, SurfaceProgram lhs, SurfaceProgram rhs) {
  auto n = make(SurfaceKind::Arith);
  n->op = op;
  n->kids = {std::move(lhs), std::move(rhs)};
  return n;
}

SurfaceProgram import(std::string name) {
  auto n = make(SurfaceKind::Import);
  n->ident = std::move(name);
  return n;
}

}  // namespace surface

namespace {

enum class Tok { Ident, Int, String, Sym, Newline, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t ival = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (c == '\n') {
        advance();
        t.kind = Tok::Newline;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
        try {
          t.ival = std::stoll(t.text);
        } catch (const std::out_of_range&) {
          throw ParseError(t.pos, "integer literal out of range");
        }
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        while (true) {
          if (at_end() || peek() == '\n') throw ParseError(t.pos, "unterminated string literal");
          char d = advance();
          if (d == '"') break;
          if (d == '\\') {
            if (at_end()) throw ParseError(t.pos, "unterminated string literal");
            char e = advance();
            switch (e) {
              case 'n': t.text += '\n'; break;
              case 't': t.text += '\t'; break;
              default: t.text += e;
            }
          } else {
            t.text += d;
          }
        }
      } else if (src_.substr(pos_, 2) == "=>") {
        t.kind = Tok::Sym;
        t.text = "=>";
        advance();
        advance();
      } else if (src_.substr(pos_, 3) == "\xE2\x87\x92") {  // U+21D2
        t.kind = Tok::Sym;
        t.text = "=>";
        pos_ += 3;
        ++col_;
      } else if (std::string_view("?!|*@(){},;+-").find(c) != std::string_view::npos) {
        t.kind = Tok::Sym;
        t.text = std::string(1, advance());
      } else {
        throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SurfaceProgram program() {
    auto stmts = statements(/*closing=*/"");
    expect_end();
    auto n = surface::par(std::move(stmts));
    return n;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& ahead(std::size_t k = 1) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  bool is_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_ident(const char* s) const { return cur().kind == Tok::Ident && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found;
    switch (cur().kind) {
      case Tok::End: found = "end of input"; break;
      case Tok::Newline: found = "newline"; break;
      default: found = "'" + cur().text + "'";
    }
    throw ParseError(cur().pos, msg + ", found " + found);
  }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++i_;
  }

  void expect_end() {
    if (cur().kind != Tok::End) fail("expected end of input");
  }

  void skip_newlines() {
    while (cur().kind == Tok::Newline) ++i_;
  }

  std::string identifier() {
    if (cur().kind != Tok::Ident) fail("expected identifier");
    if (is_keyword(cur().text)) fail("keyword used as identifier");
    return toks_[i_++].text;
  }

  static bool is_keyword(const std::string& s) {
    return s == "def" || s == "new" || s == "match" || s == "import" || s == "undefined";
  }

  // Statements separated by newlines or ';' up to `closing` (or end).
  std::vector<SurfaceProgram> statements(const std::string& closing) {
    std::vector<SurfaceProgram> out;
    while (true) {
      while (cur().kind == Tok::Newline || is_sym(";")) ++i_;
      if (closing.empty() ? cur().kind == Tok::End : is_sym(closing.c_str())) break;
      if (cur().kind == Tok::End) fail("expected '" + closing + "'");
      out.push_back(statement());
      if (!(cur().kind == Tok::Newline || is_sym(";") || cur().kind == Tok::End ||
            (!closing.empty() && is_sym(closing.c_str())))) {
        fail("expected newline or ';' between statements");
      }
    }
    return out;
  }

  SurfaceProgram statement() {
    if (is_ident("def")) {
      SourcePos pos = cur().pos;
      ++i_;
      std::string name = identifier();
      auto params = ident_list();
      expect_sym("=>");
      skip_newlines();
      auto body = prefix();
      auto d = std::const_pointer_cast<SurfaceNode>(surface::def(name, params, body));
      d->pos = pos;
      return d;
    }
    if (is_ident("import")) {
      SourcePos pos = cur().pos;
      ++i_;
      auto n = std::const_pointer_cast<SurfaceNode>(surface::import(identifier()));
      n->pos = pos;
      return n;
    }
    return par_expr();
  }

  SurfaceProgram par_expr() {
    SourcePos pos = cur().pos;
    std::vector<SurfaceProgram> parts{arith_expr()};
    while (is_sym("|")) {
      ++i_;
      skip_newlines();
      parts.push_back(arith_expr());
    }
    if (parts.size() == 1) return parts.front();
    auto b = std::const_pointer_cast<SurfaceNode>(surface::block(std::move(parts)));
    b->pos = pos;
    return b;
  }

  SurfaceProgram arith_expr() {
    auto lhs = prefix();
    while (is_sym("+") || is_sym("-")) {
      SourcePos pos = cur().pos;
      ArithOp op = cur().text == "+" ? ArithOp::Add : ArithOp::Sub;
      ++i_;
      skip_newlines();
      auto rhs = prefix();
      auto n = std::const_pointer_cast<SurfaceNode>(surface::arith(op, lhs, rhs));
      n->pos = pos;
      lhs = n;
    }
    return lhs;
  }

  std::vector<std::string> ident_list() {
    expect_sym("(");
    skip_newlines();
    std::vector<std::string> out;
    if (!is_sym(")")) {
      while (true) {
        out.push_back(identifier());
        skip_newlines();
        if (is_sym(",")) {
          ++i_;
          skip_newlines();
          continue;
        }
        break;
      }
    }
    expect_sym(")");
    return out;
  }

  std::vector<SurfaceProgram> arg_list() {
    expect_sym("(");
    skip_newlines();
    std::vector<SurfaceProgram> out;
    if (!is_sym(")")) {
      while (true) {
        out.push_back(par_expr());
        skip_newlines();
        if (is_sym(",")) {
          ++i_;
          skip_newlines();
          continue;
        }
        break;
      }
    }
    expect_sym(")");
    return out;
  }

  std::vector<SurfaceBinder> binder_list() {
    expect_sym("(");
    skip_newlines();
    std::vector<SurfaceBinder> out;
    if (!is_sym(")")) {
      while (true) {
        SurfaceBinder b;
        if (is_sym("@")) {
          ++i_;
          b.literal = true;
          b.name = quoted_name_body();
        } else {
          b.ident = identifier();
        }
        out.push_back(std::move(b));
        skip_newlines();
        if (is_sym(",")) {
          ++i_;
          skip_newlines();
          continue;
        }
        break;
      }
    }
    expect_sym(")");
    return out;
  }

  // After '@': the quoted process, written as an atom.
  SurfaceName quoted_name_body() {
    SourcePos pos = cur().pos;
    SurfaceName n = surface::quote(atom_for_quote());
    n.pos = pos;
    return n;
  }

  SurfaceProgram atom_for_quote() {
    if (is_sym("{") || is_sym("(") || is_sym("*") || is_sym("+") || is_sym("-") ||
        cur().kind == Tok::Int || cur().kind == Tok::String || is_ident("undefined")) {
      return prefix();
    }
    if (cur().kind == Tok::Ident) {
      // @x names the quote of the reference *x, i.e. x itself.
      SourcePos pos = cur().pos;
      auto r = std::const_pointer_cast<SurfaceNode>(surface::ref(identifier()));
      r->pos = pos;
      return r;
    }
    fail("expected a process after '@'");
  }

  SurfaceName name_expr() {
    SourcePos pos = cur().pos;
    if (is_sym("@")) {
      ++i_;
      return quoted_name_body();
    }
    SurfaceName n = surface::name(identifier());
    n.pos = pos;
    return n;
  }

  SurfaceProgram after_channel(SurfaceName chan, SourcePos pos) {
    if (is_sym("?")) {
      ++i_;
      skip_newlines();
      auto n = std::make_shared<SurfaceNode>();
      n->kind = SurfaceKind::Input;
      n->pos = pos;
      n->chan = std::move(chan);
      if (cur().kind == Tok::Ident) n->label = identifier();
      n->binders = binder_list();
      skip_newlines();
      expect_sym("=>");
      skip_newlines();
      n->kids.push_back(prefix());
      return n;
    }
    if (is_sym("!")) {
      ++i_;
      skip_newlines();
      auto n = std::make_shared<SurfaceNode>();
      n->kind = SurfaceKind::Output;
      n->pos = pos;
      n->chan = std::move(chan);
      if (cur().kind == Tok::Ident) n->label = identifier();
      n->kids = arg_list();
      return n;
    }
    fail("expected '?' or '!' after channel");
  }

  SurfaceProgram prefix() {
    SourcePos pos = cur().pos;
    auto located = [&](SurfaceProgram p) {
      auto n = std::const_pointer_cast<SurfaceNode>(p);
      n->pos = pos;
      return SurfaceProgram(n);
    };
    const Token& t = cur();
    if (t.kind == Tok::Int) {
      ++i_;
      if (t.ival == 0 && t.text == "0") return located(surface::zero());
      return located(surface::int_lit(t.ival));
    }
    if (t.kind == Tok::String) {
      if (!t.text.empty() && t.text[0] == '#') {
        throw ParseError(t.pos, "string literals starting with '#' are reserved");
      }
      ++i_;
      return located(surface::str_lit(t.text));
    }
    if (is_sym("+") || is_sym("-")) {
      bool neg = t.text == "-";
      ++i_;
      if (cur().kind != Tok::Int) fail("expected integer after sign");
      std::int64_t v = cur().ival;
      ++i_;
      return located(surface::int_lit(neg ? -v : v));
    }
    if (is_sym("*")) {
      ++i_;
      return located(surface::drop(name_expr()));
    }
    if (is_sym("{")) {
      ++i_;
      auto stmts = statements("}");
      expect_sym("}");
      return located(surface::block(std::move(stmts)));
    }
    if (is_sym("(")) {
      ++i_;
      skip_newlines();
      auto inner = par_expr();
      skip_newlines();
      expect_sym(")");
      return inner;
    }
    if (is_sym("@")) {
      SurfaceName chan = name_expr();
      return after_channel(std::move(chan), pos);
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "undefined") {
        ++i_;
        return located(surface::undefined_lit());
      }
      if (t.text == "match") {
        ++i_;
        skip_newlines();
        expect_sym("{");
        auto branches = statements("}");
        expect_sym("}");
        return located(surface::match(std::move(branches)));
      }
      if (t.text == "new") {
        ++i_;
        auto names = ident_list();
        skip_newlines();
        auto body = prefix();
        return located(surface::new_(std::move(names), std::move(body)));
      }
      if (t.text == "def" || t.text == "import") {
        fail("'" + t.text + "' is only allowed as a statement");
      }
      std::string id = identifier();
      if (is_sym("(")) {
        auto args = arg_list();
        return located(surface::apply(id, std::move(args)));
      }
      if (is_sym("?") || is_sym("!")) {
        SurfaceName chan = surface::name(id);
        chan.pos = pos;
        return after_channel(std::move(chan), pos);
      }
      return located(surface::ref(id));
    }
    fail("expected a process");
  }
};

}  // namespace

SurfaceProgram parse_surface(std::string_view source) {
  Lexer lex(source);
  Parser parser(lex.run());
  return parser.program();
}

}  // namespace rhopol
