#include "rhopol/ocapjs.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "rhopol/sugar.hpp"

namespace rhopol {

namespace {

constexpr std::size_t kMaxObjectEntries = 4;

struct Tok {
  enum class Kind { Ident, Num, Punct, End } kind = Kind::End;
  std::string text;
  SourcePos pos;
};

std::vector<Tok> lex(std::string_view src) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
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
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      SourcePos start{line, col};
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError(start, "unterminated comment");
      advance(end + 2 - i);
      continue;
    }
    Tok t;
    t.pos = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == '$'))
        ++j;
      t.kind = Tok::Kind::Ident;
      t.text = std::string(src.substr(i, j - i));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Kind::Num;
      t.text = std::string(src.substr(i, j - i));
    } else if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != c) j += src[j] == '\\' ? 2 : 1;
      if (j >= src.size()) throw ParseError(t.pos, "unterminated string");
      t.kind = Tok::Kind::Punct;
      t.text = std::string(src.substr(i, j + 1 - i));
    } else {
      static const char* multi[] = {"===", "!==", "=>", "+=", "-=", "==", "!=", "&&", "||", "++", "--"};
      t.kind = Tok::Kind::Punct;
      t.text = std::string(1, c);
      for (const char* m : multi) {
        if (src.substr(i, std::char_traits<char>::length(m)) == m) {
          t.text = m;
          break;
        }
      }
    }
    advance(t.text.size());
    out.push_back(std::move(t));
  }
  out.push_back(Tok{Tok::Kind::End, "", {line, col}});
  return out;
}

class JsParser {
 public:
  explicit JsParser(std::string_view src) : toks_(lex(src)) {}

  JsProgram program() {
    JsProgram p;
    while (peek().kind != Tok::Kind::End) {
      if (is(";")) {
        ++i_;
        continue;
      }
      p.statements.push_back(statement());
    }
    return p;
  }

 private:
  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }
  bool is(std::string_view text, std::size_t ahead = 0) const {
    const Tok& t = peek(ahead);
    return t.kind == Tok::Kind::Punct && t.text == text;
  }
  Tok next() { return toks_[std::min(i_++, toks_.size() - 1)]; }

  void expect(std::string_view text) {
    if (!is(text)) {
      const Tok& t = peek();
      throw ParseError(t.pos, "expected '" + std::string(text) + "', found " + describe(t));
    }
    ++i_;
  }

  static std::string describe(const Tok& t) {
    if (t.kind == Tok::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

  std::string ident() {
    const Tok& t = peek();
    if (t.kind != Tok::Kind::Ident) throw ParseError(t.pos, "expected identifier, found " + describe(t));
    check_reserved(t);
    return next().text;
  }

  static void check_reserved(const Tok& t) {
    static const std::set<std::string> kw{"function", "return", "if", "else", "while", "for",
                                          "let", "const", "new", "this", "class", "throw",
                                          "try", "typeof", "delete", "switch", "do"};
    if (kw.count(t.text)) throw UnsupportedConstruct(t.pos, "'" + t.text + "'");
  }

  void end_statement() {
    if (is(";")) {
      ++i_;
      return;
    }
    if (peek().kind == Tok::Kind::End || is("}")) return;
    const Tok& t = peek();
    if (t.kind == Tok::Kind::Punct) throw UnsupportedConstruct(t.pos, "operator '" + t.text + "'");
    throw ParseError(t.pos, "expected ';', found " + describe(t));
  }

  JsStmt statement() {
    const Tok& t = peek();
    JsStmt s;
    s.pos = t.pos;
    if (t.kind == Tok::Kind::Ident && t.text == "var") {
      ++i_;
      s.kind = JsStmt::Kind::VarDecl;
      s.target = ident();
      if (is("=")) {
        ++i_;
        s.value = expr();
      }
      if (is(",")) throw UnsupportedConstruct(peek().pos, "multiple declarators");
      end_statement();
      return s;
    }
    if (t.kind == Tok::Kind::Ident && !(is("(", 1) && t.text != "def")) {
      check_reserved(t);
      if (is("+=", 1)) {
        s.kind = JsStmt::Kind::PlusAssign;
        s.target = next().text;
        ++i_;
        s.value = expr();
        end_statement();
        return s;
      }
      if (is("=", 1)) {
        // Report a more specific construct on the right-hand side first.
        i_ += 2;
        expr();
        throw UnsupportedConstruct(t.pos, "assignment");
      }
    }
    s.kind = JsStmt::Kind::ExprStmt;
    s.value = expr();
    end_statement();
    return s;
  }

  JsExpr expr() {
    JsExpr lhs = primary();
    while (is("+")) {
      JsExpr e;
      e.kind = JsExpr::Kind::Add;
      e.pos = next().pos;
      e.kids.push_back(std::move(lhs));
      e.kids.push_back(primary());
      lhs = std::move(e);
    }
    const Tok& t = peek();
    if (t.kind == Tok::Kind::Punct &&
        (t.text == "." || t.text == "[" || t.text == "-" || t.text == "*" || t.text == "/" ||
         t.text == "===" || t.text == "!==" || t.text == "==" || t.text == "!=" ||
         t.text == "<" || t.text == ">" || t.text == "&&" || t.text == "||" || t.text == "?" ||
         t.text == "-=" || t.text == "++" || t.text == "--"))
      throw UnsupportedConstruct(t.pos, t.text == "." ? "member access" : "operator '" + t.text + "'");
    if (is("(")) throw UnsupportedConstruct(t.pos, "call");
    return lhs;
  }

  bool arrow_ahead() const {
    if (peek().kind == Tok::Kind::Ident && is("=>", 1)) return true;
    if (!is("(")) return false;
    int depth = 0;
    for (std::size_t a = 0; i_ + a < toks_.size(); ++a) {
      if (is("(", a)) ++depth;
      if (is(")", a) && --depth == 0) return is("=>", a + 1);
    }
    return false;
  }

  // Arrow bodies are kept opaque: skip to the end of the enclosing entry.
  JsExpr arrow() {
    JsExpr e;
    e.kind = JsExpr::Kind::Arrow;
    e.pos = peek().pos;
    int depth = 0;
    while (peek().kind != Tok::Kind::End) {
      if (depth == 0 && (is(",") || is("}") || is(")") || is(";"))) break;
      if (is("(") || is("{") || is("[")) ++depth;
      if (is(")") || is("}") || is("]")) --depth;
      ++i_;
    }
    return e;
  }

  JsExpr primary() {
    const Tok& t = peek();
    JsExpr e;
    e.pos = t.pos;
    if (arrow_ahead()) return arrow();
    if (t.kind == Tok::Kind::Num) {
      e.kind = JsExpr::Kind::Num;
      try {
        e.num = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError(t.pos, "integer literal out of range");
      }
      ++i_;
      return e;
    }
    if (t.kind == Tok::Kind::Ident) {
      check_reserved(t);
      if (t.text == "def" && is("(", 1)) return object();
      if (is("(", 1)) {
        if (t.text == "WeakMap") throw UnsupportedConstruct(t.pos, "WeakMap");
        if (t.text == "Q") throw UnsupportedConstruct(t.pos, "Q promise");
        throw UnsupportedConstruct(t.pos, "call of " + t.text);
      }
      ++i_;
      if (t.text == "undefined") {
        e.kind = JsExpr::Kind::Undefined;
        return e;
      }
      e.kind = JsExpr::Kind::Ident;
      e.ident = t.text;
      return e;
    }
    if (is("(")) {
      ++i_;
      JsExpr inner = expr();
      expect(")");
      return inner;
    }
    if (t.kind == Tok::Kind::Punct && (t.text[0] == '"' || t.text[0] == '\''))
      throw UnsupportedConstruct(t.pos, "string literal");
    if (is("{")) throw UnsupportedConstruct(t.pos, "object literal outside def");
    if (is("[")) throw UnsupportedConstruct(t.pos, "array literal");
    throw ParseError(t.pos, "expected expression, found " + describe(t));
  }

  JsExpr object() {
    JsExpr e;
    e.kind = JsExpr::Kind::Object;
    e.pos = next().pos;
    expect("(");
    expect("{");
    while (!is("}")) {
      const Tok& key = peek();
      if (key.kind != Tok::Kind::Ident) throw ParseError(key.pos, "expected property name, found " + describe(key));
      ++i_;
      for (const auto& [k, v] : e.entries) {
        if (k == key.text) throw ParseError(key.pos, "duplicate property '" + key.text + "'");
      }
      if (is("(")) throw UnsupportedConstruct(peek().pos, "method shorthand");
      if (is(",") || is("}")) {
        JsExpr v;
        v.kind = JsExpr::Kind::Ident;
        v.ident = key.text;
        v.pos = key.pos;
        e.entries.emplace_back(key.text, std::move(v));
      } else {
        expect(":");
        e.entries.emplace_back(key.text, expr());
      }
      if (!is(",")) break;
      ++i_;
    }
    expect("}");
    expect(")");
    if (e.entries.size() > kMaxObjectEntries)
      throw UnsupportedConstruct(e.pos, "def with more than " + std::to_string(kMaxObjectEntries) + " properties");
    return e;
  }

  std::vector<Tok> toks_;
  std::size_t i_ = 0;
};

void collect_reads(const JsExpr& e, std::vector<std::string>& out) {
  if (e.kind == JsExpr::Kind::Ident) out.push_back(e.ident);
  for (const auto& k : e.kids) collect_reads(k, out);
  for (const auto& [key, v] : e.entries) collect_reads(v, out);
}

using Cont = std::function<SurfaceProgram(SurfaceProgram)>;

class Translator {
 public:
  Translator(const JsProgram& p, const JsEnv& env) : prog_(p), channels_(env.channels), k_(env.k), cell_(env.cell) {
    if (cell_ != "Cell" && cell_ != "SafeCell" && cell_ != "AckCell") throw Error("unknown cell gadget '" + cell_ + "'");
    for (const auto& [src, chan] : env.channels) taken_.insert(chan);
    for (const auto& s : p.statements) {
      taken_.insert(s.target);
      std::vector<std::string> reads;
      if (s.value) collect_reads(*s.value, reads);
      taken_.insert(reads.begin(), reads.end());
    }
    taken_.insert(k_);
  }

  SurfaceProgram run() {
    SurfaceProgram body = stmts(0, k_);
    std::vector<SurfaceProgram> top;
    if (uses_cell_) top.push_back(surface::import(cell_));
    for (std::size_t n : maps_) top.push_back(surface::import("Map" + std::to_string(n)));
    top.push_back(body);
    return surface::par(std::move(top));
  }

 private:
  std::string fresh(const std::string& base) {
    for (;;) {
      std::string id = base + std::to_string(++counter_);
      if (taken_.insert(id).second) return id;
    }
  }

  const std::string& channel(const std::string& id, SourcePos pos) const {
    auto it = channels_.find(id);
    if (it == channels_.end()) throw ScopeError(pos, "unbound identifier '" + id + "'");
    return it->second;
  }

  static SurfaceName nm(const std::string& id) { return surface::name(id); }

  SurfaceProgram signal(const std::string& k) { return surface::output(nm(k), {}); }

  SurfaceProgram stmts(std::size_t i, const std::string& k) {
    if (i == prog_.statements.size()) return signal(k);
    const JsStmt& s = prog_.statements[i];
    switch (s.kind) {
      case JsStmt::Kind::VarDecl:
        return var_decl(s, i, k);
      case JsStmt::Kind::PlusAssign:
        return plus_assign(s, i, k);
      case JsStmt::Kind::ExprStmt:
        return expr_stmt(s, i, k);
    }
    return surface::zero();
  }

  SurfaceProgram var_decl(const JsStmt& s, std::size_t i, const std::string& k) {
    if (!channels_.count(s.target)) channels_[s.target] = s.target;
    std::string x = channels_.at(s.target);
    if (!s.value) {
      uses_cell_ = true;
      return surface::block({surface::apply(cell_, {surface::ref(x), surface::undefined_lit()}),
                             stmts(i + 1, k)});
    }
    std::string k1 = fresh("k");
    SurfaceProgram init;
    if (s.value->kind == JsExpr::Kind::Object) {
      init = object(*s.value, x, signal(k1));
    } else {
      uses_cell_ = true;
      init = value(*s.value, [&](SurfaceProgram t) {
        return surface::block({surface::apply(cell_, {surface::ref(x), t}), signal(k1)});
      });
    }
    return surface::new_({k1}, surface::block({init, surface::input(nm(k1), {}, stmts(i + 1, k))}));
  }

  SurfaceProgram plus_assign(const JsStmt& s, std::size_t i, const std::string& k) {
    std::string x = channel(s.target, s.pos);
    std::string r = fresh("r");
    std::string k1 = fresh("k");
    std::string b = fresh("b");
    SurfaceProgram update = value(*s.value, [&](SurfaceProgram t) {
      SurfaceProgram sum = surface::arith(ArithOp::Add, surface::ref(b), t);
      // An acknowledging cell signals k1 itself once the write has landed.
      if (cell_ == "AckCell") return surface::message(nm(x), "set", {sum, surface::ref(k1)});
      return surface::block({surface::message(nm(x), "set", {sum}), signal(k1)});
    });
    return surface::new_(
        {r, k1}, surface::block({surface::message(nm(x), "get", {surface::ref(r)}),
                                 surface::input(nm(r), {b}, update),
                                 surface::input(nm(k1), {}, stmts(i + 1, k))}));
  }

  SurfaceProgram expr_stmt(const JsStmt& s, std::size_t i, const std::string& k) {
    if (s.value->kind != JsExpr::Kind::Object)
      throw UnsupportedConstruct(s.pos, "expression statement without effect");
    std::string k1 = fresh("k");
    std::string o = fresh("o");
    SurfaceProgram first = surface::new_({o}, object(*s.value, o, signal(k1)));
    return surface::new_({k1}, surface::block({first, surface::input(nm(k1), {}, stmts(i + 1, k))}));
  }

  // Map on channel x holding the entries' values, in parallel with `then`.
  SurfaceProgram object(const JsExpr& e, const std::string& x, SurfaceProgram then) {
    maps_.insert(e.entries.size());
    if (e.entries.empty()) throw UnsupportedConstruct(e.pos, "def with no properties");
    std::vector<SurfaceProgram> vals;
    std::function<SurfaceProgram(std::size_t)> go = [&](std::size_t j) -> SurfaceProgram {
      if (j == e.entries.size()) {
        std::vector<SurfaceProgram> args{surface::ref(x)};
        for (std::size_t m = 0; m < e.entries.size(); ++m) {
          args.push_back(surface::str_lit(e.entries[m].first));
          args.push_back(vals[m]);
        }
        return surface::block(
            {surface::apply("Map" + std::to_string(e.entries.size()), std::move(args)), then});
      }
      const JsExpr& v = e.entries[j].second;
      if (v.kind == JsExpr::Kind::Arrow) {
        vals.push_back(surface::str_lit("fn:" + e.entries[j].first));
        return go(j + 1);
      }
      return value(v, [&, j](SurfaceProgram t) {
        vals.resize(j);
        vals.push_back(t);
        return go(j + 1);
      });
    };
    return go(0);
  }

  // Computes the value of e and passes it to c.
  SurfaceProgram value(const JsExpr& e, const Cont& c) {
    switch (e.kind) {
      case JsExpr::Kind::Num:
        return c(surface::int_lit(e.num));
      case JsExpr::Kind::Undefined:
        return c(surface::undefined_lit());
      case JsExpr::Kind::Ident: {
        std::string y = channel(e.ident, e.pos);
        std::string r = fresh("r");
        std::string t = fresh("t");
        return surface::new_({r}, surface::block({surface::message(nm(y), "get", {surface::ref(r)}),
                                                  surface::input(nm(r), {t}, c(surface::ref(t)))}));
      }
      case JsExpr::Kind::Add:
        return value(e.kids[0], [&](SurfaceProgram a) {
          return value(e.kids[1], [&](SurfaceProgram b) { return c(surface::arith(ArithOp::Add, a, b)); });
        });
      case JsExpr::Kind::Arrow:
        throw UnsupportedConstruct(e.pos, "arrow function outside def");
      case JsExpr::Kind::Object:
        throw UnsupportedConstruct(e.pos, "def nested in an expression");
    }
    return c(surface::zero());
  }

  const JsProgram& prog_;
  std::map<std::string, std::string> channels_;
  std::string k_;
  std::string cell_;
  std::set<std::string> taken_;
  std::set<std::size_t> maps_;
  bool uses_cell_ = false;
  int counter_ = 0;
};

}  // namespace

JsProgram parse_js(std::string_view source) { return JsParser(source).program(); }

std::vector<std::string> free_identifiers(const JsProgram& p) {
  std::set<std::string> declared;
  std::vector<std::string> out;
  auto note = [&](const std::string& id) {
    if (!declared.count(id) && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  for (const auto& s : p.statements) {
    std::vector<std::string> reads;
    if (s.value) collect_reads(*s.value, reads);
    for (const auto& id : reads) note(id);
    if (s.kind == JsStmt::Kind::PlusAssign) note(s.target);
    if (s.kind == JsStmt::Kind::VarDecl) declared.insert(s.target);
  }
  return out;
}

SurfaceProgram translate(const JsProgram& p, const JsEnv& env) { return Translator(p, env).run(); }

std::vector<SurfaceProgram> prelude() {
  std::vector<SurfaceProgram> out;
  for (const auto& n : prelude_names()) {
    if (n == "SafeCell" || n == "AckCell") continue;
    out.push_back(parse_surface(*prelude_source(n)));
  }
  return out;
}

}  // namespace rhopol
