#include <cctype>

#include "rhopol/error.hpp"
#include "rhopol/logic.hpp"
#include "rhopol/sugar.hpp"

namespace rhopol {

namespace fml {

namespace {

std::shared_ptr<FormulaNode> make(FormulaKind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  return n;
}

}  // namespace

Formula truth() { return make(FormulaKind::True); }
Formula null() { return make(FormulaKind::Null); }

Formula neg(Formula f) {
  auto n = make(FormulaKind::Not);
  n->kids = {std::move(f)};
  return n;
}

Formula conj(Formula a, Formula b) {
  auto n = make(FormulaKind::And);
  n->kids = {std::move(a), std::move(b)};
  return n;
}

Formula sep(Formula a, Formula b) {
  auto n = make(FormulaKind::Sep);
  n->kids = {std::move(a), std::move(b)};
  return n;
}

Formula disclosure(NameFormula b) {
  auto n = make(FormulaKind::Disclosure);
  n->name = std::move(b);
  return n;
}

Formula dissemination(NameFormula a, std::vector<Formula> args) {
  auto n = make(FormulaKind::Dissemination);
  n->name = std::move(a);
  n->kids = std::move(args);
  return n;
}

Formula reception(NameFormula a, std::string binder, Formula body) {
  auto n = make(FormulaKind::Reception);
  n->name = std::move(a);
  n->var = std::move(binder);
  n->kids = {std::move(body)};
  return n;
}

Formula gfp(std::string var, Formula body) {
  auto n = make(FormulaKind::Gfp);
  n->var = std::move(var);
  n->kids = {std::move(body)};
  return n;
}

Formula forall(std::string var, NameFormula domain, Formula body) {
  auto n = make(FormulaKind::Forall);
  n->var = std::move(var);
  n->name = std::move(domain);
  n->kids = {std::move(body)};
  return n;
}

Formula rely_guarantee(Formula hyp, std::vector<Name> hidden, Formula concl) {
  auto n = make(FormulaKind::RelyGuarantee);
  n->kids = {std::move(hyp), std::move(concl)};
  n->hidden = std::move(hidden);
  return n;
}

Formula prop_var(std::string var) {
  auto n = make(FormulaKind::PropVar);
  n->var = std::move(var);
  return n;
}

Formula congruent(Proc p) {
  auto n = make(FormulaKind::Congruent);
  n->proc = canonicalize(p).proc();
  return n;
}

Formula implies(Formula a, Formula b) { return neg(conj(std::move(a), neg(std::move(b)))); }
Formula disj(Formula a, Formula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }

NameFormula quote(Formula f) {
  auto n = std::make_shared<NameFormulaNode>();
  n->kind = NameFormulaKind::Quote;
  n->formula = std::move(f);
  return n;
}

NameFormula quote_proc(Proc p) {
  auto n = std::make_shared<NameFormulaNode>();
  n->kind = NameFormulaKind::QuoteProc;
  n->proc = canonicalize(p).proc();
  return n;
}

NameFormula name(const Name& x) { return quote_proc(canonical_name(x).process()); }

NameFormula complement(const Name& x) {
  return quote(neg(congruent(canonical_name(x).process())));
}

NameFormula var(std::string v) {
  auto n = std::make_shared<NameFormulaNode>();
  n->kind = NameFormulaKind::Var;
  n->var = std::move(v);
  return n;
}

}  // namespace fml

Formula sole_access(const Name& slot) {
  using namespace fml;
  return gfp("X", conj(reception(name(slot), "b", prop_var("X")),
                       neg(reception(complement(slot), "b", prop_var("X")))));
}

Formula no_access(const Name& slot) {
  using namespace fml;
  return gfp("X", neg(reception(name(slot), "b", prop_var("X"))));
}

Formula firewall(const NameFormula& ns) {
  using namespace fml;
  Formula inside;
  switch (ns->kind) {
    case NameFormulaKind::Quote: inside = ns->formula; break;
    case NameFormulaKind::QuoteProc: inside = congruent(*ns->proc); break;
    case NameFormulaKind::Var: throw Error("firewall: namespace must be closed");
  }
  return gfp("X", conj(reception(ns, "b", prop_var("X")),
                       neg(reception(quote(neg(inside)), "b", prop_var("X")))));
}

namespace {

// Visits every rec-variable occurrence with the parity of negations above it
// relative to its binder.
bool monotone_rec(const Formula& f, std::map<std::string, bool>& neg_parity, bool negated) {
  switch (f->kind) {
    case FormulaKind::PropVar: {
      auto it = neg_parity.find(f->var);
      if (it == neg_parity.end()) return true;
      return it->second == negated;
    }
    case FormulaKind::Not:
      return monotone_rec(f->kids[0], neg_parity, !negated);
    case FormulaKind::Gfp: {
      auto saved = neg_parity;
      neg_parity[f->var] = negated;
      bool ok = monotone_rec(f->kids[0], neg_parity, negated);
      neg_parity = std::move(saved);
      return ok;
    }
    case FormulaKind::RelyGuarantee:
      return monotone_rec(f->kids[0], neg_parity, !negated) &&
             monotone_rec(f->kids[1], neg_parity, negated);
    default: {
      bool ok = true;
      for (const auto& k : f->kids) ok = monotone_rec(k, neg_parity, negated) && ok;
      if (f->name && f->name->formula) ok = monotone_rec(f->name->formula, neg_parity, negated) && ok;
      return ok;
    }
  }
}

}  // namespace

bool is_monotone(const Formula& f) {
  std::map<std::string, bool> parity;
  return monotone_rec(f, parity, false);
}

bool is_output_blind(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::PropVar:
      return true;
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Reception:
    case FormulaKind::Gfp:
    case FormulaKind::Forall:
      for (const auto& k : f->kids) {
        if (!is_output_blind(k)) return false;
      }
      return true;
    default:
      return false;
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string print(const Formula& f, int prec);

std::string print_name(const NameFormula& a) {
  switch (a->kind) {
    case NameFormulaKind::Var: return a->var;
    case NameFormulaKind::QuoteProc: return "@{ " + to_string(*a->proc) + " }";
    case NameFormulaKind::Quote: return "@[ " + print(a->formula, 0) + " ]";
  }
  return "";
}

// Precedence levels: 0 rely, 1 implication, 2 or, 3 separation, 4 and, 5 unary.
std::string paren(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

std::string print(const Formula& f, int prec) {
  switch (f->kind) {
    case FormulaKind::True: return "true";
    case FormulaKind::Null: return "0";
    case FormulaKind::Not: return "~" + print(f->kids[0], 5);
    case FormulaKind::And:
      return paren(prec > 4, print(f->kids[0], 4) + " & " + print(f->kids[1], 5));
    case FormulaKind::Sep:
      return paren(prec > 3, print(f->kids[0], 3) + " | " + print(f->kids[1], 4));
    case FormulaKind::Disclosure: return "drop(" + print_name(f->name) + ")";
    case FormulaKind::Dissemination: {
      std::string s = "<" + print_name(f->name) + ">(";
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) s += ", ";
        s += print(f->kids[i], 0);
      }
      return s + ")";
    }
    case FormulaKind::Reception:
      return "<" + print_name(f->name) + " ? " + f->var + ">" + print(f->kids[0], 5);
    case FormulaKind::Gfp: return paren(prec > 0, "rec " + f->var + ". " + print(f->kids[0], 0));
    case FormulaKind::Forall:
      return paren(prec > 0, "forall " + f->var + " : " + print_name(f->name) + ". " +
                                 print(f->kids[0], 0));
    case FormulaKind::RelyGuarantee: {
      std::string s = print(f->kids[0], 1) + " |> {";
      for (std::size_t i = 0; i < f->hidden.size(); ++i) {
        if (i) s += ", ";
        s += "@{ " + to_string(canonical_name(f->hidden[i]).process()) + " }";
      }
      return paren(prec > 0, s + "} " + print(f->kids[1], 0));
    }
    case FormulaKind::PropVar: return f->var;
    case FormulaKind::Congruent: return "={ " + to_string(*f->proc) + " }";
  }
  return "";
}

}  // namespace

std::string to_string(const Formula& f) { return print(f, 0); }
std::string to_string(const NameFormula& a) { return print_name(a); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class FTok { Ident, Sym, Proc, End };

struct FToken {
  FTok kind = FTok::End;
  std::string text;  // identifier, symbol, or raw process source
  SourcePos pos;
  SourcePos body_pos;  // Proc: position of the first body character
};

class FormulaLexer {
 public:
  explicit FormulaLexer(std::string_view s) : src_(s) {}

  std::vector<FToken> run() {
    std::vector<FToken> out;
    while (true) {
      skip();
      FToken t;
      t.pos = {line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = FTok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if ((c == '@' || c == '=') && peek(1) == '{') {
        t.kind = FTok::Proc;
        t.text = std::string(1, c);
        advance();
        advance();
        t.body_pos = {line_, col_};
        t.text += raw_block(t.pos);
      } else {
        static const char* two[] = {"=>", "|>", "@["};
        t.kind = FTok::Sym;
        for (const char* s : two) {
          if (src_.substr(pos_, 2) == s) t.text = s;
        }
        if (t.text.empty()) {
          if (std::string_view("~&|()<>?.:,{}[]@0").find(c) == std::string_view::npos) {
            throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
          }
          t.text = std::string(1, c);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

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

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  // Text up to the brace matching an already consumed '{'.
  std::string raw_block(SourcePos start) {
    std::string out;
    int level = 1;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError(start, "unterminated process quote");
      char c = advance();
      if (c == '"') {
        out += c;
        while (true) {
          if (pos_ >= src_.size()) throw ParseError(start, "unterminated string literal");
          char d = advance();
          out += d;
          if (d == '\\' && pos_ < src_.size()) {
            out += advance();
          } else if (d == '"') {
            break;
          }
        }
        continue;
      }
      if (c == '{') ++level;
      if (c == '}' && --level == 0) return out;
      out += c;
    }
  }
};

class FormulaParser {
 public:
  explicit FormulaParser(std::vector<FToken> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = formula();
    if (cur().kind != FTok::End) fail("expected end of formula");
    return f;
  }

 private:
  std::vector<FToken> toks_;
  std::size_t i_ = 0;
  std::vector<std::string> prop_vars_;
  std::vector<std::string> name_vars_;

  const FToken& cur() const { return toks_[i_]; }
  bool sym(const char* s) const { return cur().kind == FTok::Sym && cur().text == s; }
  bool kw(const char* s) const { return cur().kind == FTok::Ident && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = cur().kind == FTok::End ? "end of input" : "'" + cur().text + "'";
    throw ParseError(cur().pos, msg + ", found " + found);
  }

  void expect(const char* s) {
    if (!sym(s)) fail(std::string("expected '") + s + "'");
    ++i_;
  }

  std::string ident() {
    if (cur().kind != FTok::Ident) fail("expected identifier");
    return toks_[i_++].text;
  }

  static bool bound(const std::vector<std::string>& scope, const std::string& v) {
    for (const auto& s : scope) {
      if (s == v) return true;
    }
    return false;
  }

  Proc proc_body(const FToken& t) {
    try {
      return parse_proc(std::string_view(t.text).substr(1));
    } catch (const LocatedError& e) {
      SourcePos p = e.pos();
      if (p.line == 1) {
        p.column += t.body_pos.column - 1;
      }
      p.line += t.body_pos.line - 1;
      throw ParseError(p, e.detail());
    }
  }

  Formula formula() {
    Formula lhs = implication();
    if (sym("|>")) {
      ++i_;
      expect("{");
      std::vector<Name> hidden;
      if (!sym("}")) {
        while (true) {
          hidden.push_back(plain_name());
          if (sym(",")) {
            ++i_;
            continue;
          }
          break;
        }
      }
      expect("}");
      return fml::rely_guarantee(lhs, std::move(hidden), formula());
    }
    return lhs;
  }

  Name plain_name() {
    if (cur().kind == FTok::Proc && cur().text[0] == '@') {
      return Name::quote(proc_body(toks_[i_++]));
    }
    return ident_name(ident());
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (sym("=>")) {
      ++i_;
      return fml::implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = separation();
    while (kw("or")) {
      ++i_;
      lhs = fml::disj(lhs, separation());
    }
    return lhs;
  }

  Formula separation() {
    Formula lhs = conjunction();
    while (sym("|")) {
      ++i_;
      lhs = fml::sep(lhs, conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (sym("&")) {
      ++i_;
      lhs = fml::conj(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    if (sym("~")) {
      ++i_;
      return fml::neg(unary());
    }
    if (kw("rec")) {
      ++i_;
      std::string x = ident();
      expect(".");
      prop_vars_.push_back(x);
      Formula body = formula();
      prop_vars_.pop_back();
      return fml::gfp(x, body);
    }
    if (kw("forall")) {
      ++i_;
      std::string n = ident();
      NameFormula domain = fml::quote(fml::truth());
      if (sym(":")) {
        ++i_;
        domain = name_formula();
      }
      expect(".");
      name_vars_.push_back(n);
      Formula body = formula();
      name_vars_.pop_back();
      return fml::forall(n, domain, body);
    }
    return atom();
  }

  Formula atom() {
    if (kw("true")) {
      ++i_;
      return fml::truth();
    }
    if (sym("0")) {
      ++i_;
      return fml::null();
    }
    if (kw("drop")) {
      ++i_;
      expect("(");
      NameFormula b = name_formula();
      expect(")");
      return fml::disclosure(b);
    }
    if (sym("(")) {
      ++i_;
      Formula f = formula();
      expect(")");
      return f;
    }
    if (cur().kind == FTok::Proc && cur().text[0] == '=') {
      return fml::congruent(proc_body(toks_[i_++]));
    }
    if (sym("<")) {
      ++i_;
      NameFormula a = name_formula();
      if (sym("?")) {
        ++i_;
        std::string b = ident();
        expect(">");
        name_vars_.push_back(b);
        Formula body = unary();
        name_vars_.pop_back();
        return fml::reception(a, b, body);
      }
      expect(">");
      expect("(");
      std::vector<Formula> args;
      if (!sym(")")) {
        while (true) {
          args.push_back(formula());
          if (sym(",")) {
            ++i_;
            continue;
          }
          break;
        }
      }
      expect(")");
      return fml::dissemination(a, std::move(args));
    }
    if (cur().kind == FTok::Ident) {
      if (!bound(prop_vars_, cur().text)) fail("unbound formula variable");
      return fml::prop_var(ident());
    }
    fail("expected a formula");
  }

  NameFormula name_formula() {
    if (sym("~")) {
      ++i_;
      NameFormula inner = name_formula();
      switch (inner->kind) {
        case NameFormulaKind::Quote: return fml::quote(fml::neg(inner->formula));
        case NameFormulaKind::QuoteProc:
          return fml::quote(fml::neg(fml::congruent(*inner->proc)));
        case NameFormulaKind::Var: fail("cannot complement a name variable");
      }
    }
    if (sym("@[")) {
      ++i_;
      Formula f = formula();
      expect("]");
      return fml::quote(f);
    }
    if (cur().kind == FTok::Proc && cur().text[0] == '@') {
      return fml::quote_proc(proc_body(toks_[i_++]));
    }
    if (cur().kind == FTok::Ident) {
      std::string id = ident();
      if (bound(name_vars_, id)) return fml::var(id);
      return fml::name(ident_name(id));
    }
    fail("expected a name formula");
  }
};

}  // namespace

Formula parse_formula(std::string_view source) {
  FormulaLexer lex(source);
  FormulaParser p(lex.run());
  return p.run();
}

}  // namespace rhopol
