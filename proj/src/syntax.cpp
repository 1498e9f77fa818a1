#include "rhopol/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rhopol {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running hash
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t string_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Proc finish(Node n, bool canonical) {
  std::uint64_t h = mix(0x51ed27f1ULL, static_cast<std::uint64_t>(n.kind));
  std::size_t size = 1;
  std::uint32_t depth = 0;
  if (n.name) {
    h = mix(h, n.name->hash());
    depth = std::max(depth, n.name->open_depth());
    if (!n.name->is_var()) size += n.name->process().size();
  }
  for (const Binder& b : n.binders) {
    if (b.pattern) {
      h = mix(h, mix(0xb1, b.pattern->hash()));
      depth = std::max(depth, b.pattern->open_depth());
    } else {
      h = mix(h, 0xb0);
    }
  }
  h = mix(h, n.binders.size());
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    const Proc& k = n.kids[i];
    h = mix(h, k.hash());
    size += k.size();
    std::uint32_t d = k.open_depth();
    if (n.kind == Kind::Input) d = d > 0 ? d - 1 : 0;
    depth = std::max(depth, d);
  }
  h = mix(h, n.kids.size());
  switch (n.kind) {
    case Kind::Int:
      h = mix(h, static_cast<std::uint64_t>(n.ival));
      break;
    case Kind::Str:
      h = mix(h, string_hash(n.sval));
      break;
    case Kind::Arith:
      h = mix(h, static_cast<std::uint64_t>(n.op));
      break;
    default:
      break;
  }
  n.hash = h;
  n.size = size;
  n.open_depth = depth;
  n.canonical = canonical;
  return Proc(std::make_shared<const Node>(std::move(n)));
}

Node make_node(Kind k) {
  Node n;
  n.kind = k;
  return n;
}

const Proc& stop_singleton() {
  static const Proc p = finish(make_node(Kind::Stop), true);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Proc / Name

Proc::Proc() : node_(stop_singleton().node_) {}

Kind Proc::kind() const { return node_->kind; }
std::uint64_t Proc::hash() const { return node_->hash; }
std::size_t Proc::size() const { return node_->size; }
std::uint32_t Proc::open_depth() const { return node_->open_depth; }
bool Proc::is_canonical() const { return node_->canonical; }

const Name& Proc::channel() const { return *node_->name; }
const Name& Proc::dropped() const { return *node_->name; }
const std::vector<Binder>& Proc::binders() const { return node_->binders; }
const Proc& Proc::body() const { return node_->kids.front(); }
const std::vector<Proc>& Proc::args() const { return node_->kids; }
const std::vector<Proc>& Proc::components() const { return node_->kids; }
std::int64_t Proc::int_value() const { return node_->ival; }
const std::string& Proc::str_value() const { return node_->sval; }
ArithOp Proc::arith_op() const { return node_->op; }
const Proc& Proc::lhs() const { return node_->kids[0]; }
const Proc& Proc::rhs() const { return node_->kids[1]; }

bool Proc::is_ground() const {
  switch (kind()) {
    case Kind::Int:
    case Kind::Str:
    case Kind::Undefined:
    case Kind::Arith:
      return true;
    default:
      return false;
  }
}

Name Name::quote(Proc p) {
  Name n;
  n.proc_ = std::move(p);
  return n;
}

Name Name::var(std::uint32_t index, std::uint32_t position) {
  Name n;
  n.is_var_ = true;
  n.index_ = index;
  n.position_ = position;
  return n;
}

bool Name::is_closed() const { return !is_var_ && proc_.open_depth() == 0; }

std::uint64_t Name::hash() const {
  if (is_var_) return mix(mix(0x7a7, index_), position_);
  return mix(0x9a0, proc_.hash());
}

std::uint32_t Name::open_depth() const {
  return is_var_ ? index_ + 1 : proc_.open_depth();
}

// ---------------------------------------------------------------------------
// Constructors

Proc stop() { return stop_singleton(); }

Proc input(Name chan, std::vector<Binder> binders, Proc body) {
  Node n = make_node(Kind::Input);
  n.name = std::move(chan);
  n.binders = std::move(binders);
  n.kids.push_back(std::move(body));
  return finish(std::move(n), false);
}

Proc input(Name chan, std::size_t arity, Proc body) {
  return input(std::move(chan), std::vector<Binder>(arity), std::move(body));
}

Proc output(Name chan, std::vector<Proc> args) {
  Node n = make_node(Kind::Output);
  n.name = std::move(chan);
  n.kids = std::move(args);
  return finish(std::move(n), false);
}

Proc choice(std::vector<Proc> branches) {
  for (const Proc& b : branches) {
    if (!b.is_io() && b.kind() != Kind::Choice) {
      throw std::invalid_argument("choice branches must be inputs or outputs");
    }
  }
  Node n = make_node(Kind::Choice);
  n.kids = std::move(branches);
  return finish(std::move(n), false);
}

Proc par(std::vector<Proc> components) {
  Node n = make_node(Kind::Par);
  n.kids = std::move(components);
  return finish(std::move(n), false);
}

Proc par(Proc a, Proc b) { return par(std::vector<Proc>{std::move(a), std::move(b)}); }

Proc drop(Name n) {
  Node node = make_node(Kind::Drop);
  node.name = std::move(n);
  return finish(std::move(node), false);
}

Proc int_lit(std::int64_t v) {
  Node n = make_node(Kind::Int);
  n.ival = v;
  return finish(std::move(n), true);
}

Proc str_lit(std::string s) {
  Node n = make_node(Kind::Str);
  n.sval = std::move(s);
  return finish(std::move(n), true);
}

Proc undefined_lit() {
  static const Proc p = finish(make_node(Kind::Undefined), true);
  return p;
}

Proc arith(ArithOp op, Proc lhs, Proc rhs) {
  Node n = make_node(Kind::Arith);
  n.op = op;
  n.kids = {std::move(lhs), std::move(rhs)};
  return finish(std::move(n), false);
}

Name ident_name(std::string_view id) { return Name::quote(str_lit(std::string(id))); }

// ---------------------------------------------------------------------------
// Ordering

namespace {

template <typename T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

int compare(const Name& a, const Name& b) {
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (a.is_var()) {
    if (int c = cmp3(a.index(), b.index())) return c;
    return cmp3(a.position(), b.position());
  }
  return compare(a.process(), b.process());
}

int compare(const Proc& a, const Proc& b) {
  if (a.same_node(b)) return 0;
  const Node& x = a.node();
  const Node& y = b.node();
  if (int c = cmp3(x.kind, y.kind)) return c;
  if (int c = cmp3(x.hash, y.hash)) return c;
  if (x.name.has_value() != y.name.has_value()) return x.name ? 1 : -1;
  if (x.name) {
    if (int c = compare(*x.name, *y.name)) return c;
  }
  if (int c = cmp3(x.binders.size(), y.binders.size())) return c;
  for (std::size_t i = 0; i < x.binders.size(); ++i) {
    const auto& p = x.binders[i].pattern;
    const auto& q = y.binders[i].pattern;
    if (p.has_value() != q.has_value()) return p ? 1 : -1;
    if (p) {
      if (int c = compare(*p, *q)) return c;
    }
  }
  if (int c = cmp3(x.kids.size(), y.kids.size())) return c;
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (int c = compare(x.kids[i], y.kids[i])) return c;
  }
  if (int c = cmp3(x.ival, y.ival)) return c;
  if (int c = x.sval.compare(y.sval)) return c < 0 ? -1 : 1;
  return cmp3(x.op, y.op);
}

bool identical(const Proc& a, const Proc& b) {
  return a.hash() == b.hash() && compare(a, b) == 0;
}

bool identical(const Name& a, const Name& b) {
  return a.hash() == b.hash() && compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

Proc canon(const Proc& p);

Name canon_name(const Name& n) {
  if (n.is_var()) return n;
  Proc c = canon(n.process());
  if (c.kind() == Kind::Drop) return c.dropped();  // @*x == x
  if (c.same_node(n.process())) return n;
  return Name::quote(std::move(c));
}

Proc rebuild(const Proc& p, std::optional<Name> name, std::vector<Binder> binders,
             std::vector<Proc> kids) {
  Node n = p.node();
  n.name = std::move(name);
  n.binders = std::move(binders);
  n.kids = std::move(kids);
  return finish(std::move(n), true);
}

void sort_procs(std::vector<Proc>& v) {
  std::sort(v.begin(), v.end(), ProcLess{});
}

Proc canon(const Proc& p) {
  if (p.is_canonical()) return p;
  switch (p.kind()) {
    case Kind::Stop:
    case Kind::Int:
    case Kind::Str:
    case Kind::Undefined:
      return p;
    case Kind::Input: {
      std::vector<Binder> bs;
      bs.reserve(p.binders().size());
      for (const Binder& b : p.binders()) {
        bs.push_back(b.pattern ? Binder::match(canon_name(*b.pattern)) : Binder::bind());
      }
      return rebuild(p, canon_name(p.channel()), std::move(bs), {canon(p.body())});
    }
    case Kind::Output: {
      std::vector<Proc> args;
      args.reserve(p.args().size());
      for (const Proc& a : p.args()) args.push_back(canon(a));
      return rebuild(p, canon_name(p.channel()), {}, std::move(args));
    }
    case Kind::Drop:
      return rebuild(p, canon_name(p.dropped()), {}, {});
    case Kind::Arith:
      return rebuild(p, std::nullopt, {}, {canon(p.lhs()), canon(p.rhs())});
    case Kind::Par: {
      std::vector<Proc> flat;
      for (const Proc& k : p.components()) {
        Proc c = canon(k);
        if (c.kind() == Kind::Stop) continue;
        if (c.kind() == Kind::Par) {
          flat.insert(flat.end(), c.components().begin(), c.components().end());
        } else {
          flat.push_back(std::move(c));
        }
      }
      if (flat.empty()) return stop();
      if (flat.size() == 1) return flat.front();
      sort_procs(flat);
      return rebuild(p, std::nullopt, {}, std::move(flat));
    }
    case Kind::Choice: {
      std::vector<Proc> flat;
      for (const Proc& k : p.components()) {
        Proc c = canon(k);
        if (c.kind() == Kind::Choice) {
          flat.insert(flat.end(), c.components().begin(), c.components().end());
        } else {
          flat.push_back(std::move(c));
        }
      }
      if (flat.empty()) return stop();
      if (flat.size() == 1) return flat.front();
      sort_procs(flat);
      return rebuild(p, std::nullopt, {}, std::move(flat));
    }
  }
  return p;
}

}  // namespace

CanonicalForm canonicalize(const Proc& p) { return CanonicalForm(canon(p)); }

Name canonical_name(const Name& n) { return canon_name(n); }

bool struct_congruent(const Proc& p, const Proc& q) {
  return canonicalize(p) == canonicalize(q);
}

bool name_equiv(const Name& x, const Name& y) {
  return identical(canon_name(x), canon_name(y));
}

std::vector<Proc> top_components(const CanonicalForm& c) {
  const Proc& p = c.proc();
  if (p.kind() == Kind::Stop) return {};
  if (p.kind() == Kind::Par) return p.components();
  return {p};
}

// ---------------------------------------------------------------------------
// Names

namespace {

void collect_names(const Proc& p, std::vector<Name>& out, bool into_quotes);

void collect_name(const Name& n, std::vector<Name>& out, bool into_quotes) {
  if (n.is_closed()) out.push_back(n);
  if (into_quotes && !n.is_var()) collect_names(n.process(), out, true);
}

void collect_names(const Proc& p, std::vector<Name>& out, bool into_quotes) {
  switch (p.kind()) {
    case Kind::Input:
      collect_name(p.channel(), out, into_quotes);
      for (const Binder& b : p.binders()) {
        if (b.pattern) collect_name(*b.pattern, out, into_quotes);
      }
      collect_names(p.body(), out, into_quotes);
      break;
    case Kind::Output:
      collect_name(p.channel(), out, into_quotes);
      for (const Proc& a : p.args()) collect_names(a, out, into_quotes);
      break;
    case Kind::Drop:
      collect_name(p.dropped(), out, into_quotes);
      break;
    case Kind::Par:
    case Kind::Choice:
    case Kind::Arith:
      for (const Proc& k : p.node().kids) collect_names(k, out, into_quotes);
      break;
    default:
      break;
  }
}

std::vector<Name> normalize_name_set(std::vector<Name> names) {
  for (Name& n : names) n = canon_name(n);
  std::sort(names.begin(), names.end(), NameLess{});
  names.erase(std::unique(names.begin(), names.end(),
                          [](const Name& a, const Name& b) { return identical(a, b); }),
              names.end());
  return names;
}

}  // namespace

std::vector<Name> free_names(const Proc& p) {
  std::vector<Name> out;
  collect_names(p, out, false);
  return normalize_name_set(std::move(out));
}

std::vector<Name> all_names(const Proc& p) {
  std::vector<Name> out;
  collect_names(p, out, true);
  return normalize_name_set(std::move(out));
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

struct NameMap {
  std::vector<std::pair<Name, Name>> entries;  // canonical key -> value

  const Name* find(const Name& n) const {
    if (!n.is_closed()) return nullptr;
    Name c = canon_name(n);
    for (const auto& [k, v] : entries) {
      if (identical(k, c)) return &v;
    }
    return nullptr;
  }
};

Proc subst_rec(const Proc& p, const NameMap& m);

Name subst_name(const Name& n, const NameMap& m) {
  if (const Name* v = m.find(n)) return *v;
  return n;
}

Proc subst_rec(const Proc& p, const NameMap& m) {
  switch (p.kind()) {
    case Kind::Input: {
      std::vector<Binder> bs;
      for (const Binder& b : p.binders()) {
        bs.push_back(b.pattern ? Binder::match(subst_name(*b.pattern, m)) : Binder::bind());
      }
      return input(subst_name(p.channel(), m), std::move(bs), subst_rec(p.body(), m));
    }
    case Kind::Output: {
      std::vector<Proc> args;
      for (const Proc& a : p.args()) args.push_back(subst_rec(a, m));
      return output(subst_name(p.channel(), m), std::move(args));
    }
    case Kind::Drop:
      if (const Name* v = m.find(p.dropped())) return v->process();
      return p;
    case Kind::Par: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(subst_rec(k, m));
      return par(std::move(ks));
    }
    case Kind::Choice: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(subst_rec(k, m));
      return choice(std::move(ks));
    }
    case Kind::Arith:
      return arith(p.arith_op(), subst_rec(p.lhs(), m), subst_rec(p.rhs(), m));
    default:
      return p;
  }
}

Proc inst_rec(const Proc& p, const std::vector<Name>& values, std::uint32_t depth);

Name inst_name(const Name& n, const std::vector<Name>& values, std::uint32_t depth) {
  if (n.open_depth() <= depth) return n;
  if (n.is_var()) {
    if (n.index() == depth) return values.at(n.position());
    return Name::var(n.index() - 1, n.position());
  }
  return Name::quote(inst_rec(n.process(), values, depth));
}

Proc inst_rec(const Proc& p, const std::vector<Name>& values, std::uint32_t depth) {
  if (p.open_depth() <= depth) return p;
  switch (p.kind()) {
    case Kind::Input: {
      std::vector<Binder> bs;
      for (const Binder& b : p.binders()) {
        bs.push_back(b.pattern ? Binder::match(inst_name(*b.pattern, values, depth))
                               : Binder::bind());
      }
      return input(inst_name(p.channel(), values, depth), std::move(bs),
                   inst_rec(p.body(), values, depth + 1));
    }
    case Kind::Output: {
      std::vector<Proc> args;
      for (const Proc& a : p.args()) args.push_back(inst_rec(a, values, depth));
      return output(inst_name(p.channel(), values, depth), std::move(args));
    }
    case Kind::Drop: {
      const Name& n = p.dropped();
      if (n.is_var() && n.index() == depth) return values.at(n.position()).process();
      return drop(inst_name(n, values, depth));
    }
    case Kind::Par: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(inst_rec(k, values, depth));
      return par(std::move(ks));
    }
    case Kind::Choice: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(inst_rec(k, values, depth));
      return choice(std::move(ks));
    }
    case Kind::Arith:
      return arith(p.arith_op(), inst_rec(p.lhs(), values, depth),
                   inst_rec(p.rhs(), values, depth));
    default:
      return p;
  }
}

Proc shift_rec(const Proc& p, std::uint32_t amount, std::uint32_t cutoff);

Name shift_name(const Name& n, std::uint32_t amount, std::uint32_t cutoff) {
  if (n.open_depth() <= cutoff) return n;
  if (n.is_var()) return Name::var(n.index() + amount, n.position());
  return Name::quote(shift_rec(n.process(), amount, cutoff));
}

Proc shift_rec(const Proc& p, std::uint32_t amount, std::uint32_t cutoff) {
  if (p.open_depth() <= cutoff) return p;
  switch (p.kind()) {
    case Kind::Input: {
      std::vector<Binder> bs;
      for (const Binder& b : p.binders()) {
        bs.push_back(b.pattern ? Binder::match(shift_name(*b.pattern, amount, cutoff))
                               : Binder::bind());
      }
      return input(shift_name(p.channel(), amount, cutoff), std::move(bs),
                   shift_rec(p.body(), amount, cutoff + 1));
    }
    case Kind::Output: {
      std::vector<Proc> args;
      for (const Proc& a : p.args()) args.push_back(shift_rec(a, amount, cutoff));
      return output(shift_name(p.channel(), amount, cutoff), std::move(args));
    }
    case Kind::Drop:
      return drop(shift_name(p.dropped(), amount, cutoff));
    case Kind::Par: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(shift_rec(k, amount, cutoff));
      return par(std::move(ks));
    }
    case Kind::Choice: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(shift_rec(k, amount, cutoff));
      return choice(std::move(ks));
    }
    case Kind::Arith:
      return arith(p.arith_op(), shift_rec(p.lhs(), amount, cutoff),
                   shift_rec(p.rhs(), amount, cutoff));
    default:
      return p;
  }
}

}  // namespace

Proc substitute(const Proc& p, const NameSubst& subst) {
  NameMap m;
  for (const auto& [k, v] : subst) {
    Name ck = canon_name(k);
    for (const auto& e : m.entries) {
      if (identical(e.first, ck)) {
        throw std::invalid_argument("substitution keys must be pairwise non-equivalent");
      }
    }
    m.entries.emplace_back(std::move(ck), v);
  }
  return subst_rec(p, m);
}

Proc instantiate(const Proc& body, const std::vector<Name>& values) {
  for (const Name& v : values) {
    if (!v.is_closed()) throw std::invalid_argument("instantiate: values must be closed names");
  }
  return inst_rec(body, values, 0);
}

Proc shift(const Proc& p, std::uint32_t amount, std::uint32_t cutoff) {
  if (amount == 0) return p;
  return shift_rec(p, amount, cutoff);
}

Name shift(const Name& n, std::uint32_t amount, std::uint32_t cutoff) {
  if (amount == 0) return n;
  return shift_name(n, amount, cutoff);
}

Proc eval_ground(const Proc& p) {
  if (p.kind() != Kind::Arith) return p;
  Proc l = eval_ground(p.lhs());
  Proc r = eval_ground(p.rhs());
  if (l.kind() == Kind::Int && r.kind() == Kind::Int) {
    return int_lit(p.arith_op() == ArithOp::Add ? l.int_value() + r.int_value()
                                                : l.int_value() - r.int_value());
  }
  return arith(p.arith_op(), std::move(l), std::move(r));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_keyword(std::string_view s) {
  return s == "def" || s == "new" || s == "match" || s == "import" || s == "undefined";
}

bool is_plain_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return !is_keyword(s);
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

class Printer {
 public:
  std::string full(const Proc& p) {
    if (p.kind() == Kind::Par) {
      if (p.components().empty()) return "0";
      std::string out;
      for (std::size_t i = 0; i < p.components().size(); ++i) {
        if (i) out += " | ";
        out += prefix(p.components()[i]);
      }
      return out;
    }
    return prefix(p);
  }

  std::string name(const Name& n) {
    if (n.is_var()) return var_name(n);
    const Proc& q = n.process();
    if (q.kind() == Kind::Str && is_plain_identifier(q.str_value())) return q.str_value();
    return "@" + atom(q);
  }

 private:
  std::vector<std::size_t> arities_;

  std::string binder_name(std::size_t level, std::size_t pos, std::size_t arity) {
    std::string s = "_" + std::to_string(level);
    if (arity != 1) s += "_" + std::to_string(pos);
    return s;
  }

  std::string var_name(const Name& n) {
    if (n.index() >= arities_.size()) {
      return "_free" + std::to_string(n.index() - arities_.size()) + "_" +
             std::to_string(n.position());
    }
    std::size_t level = arities_.size() - 1 - n.index();
    return binder_name(level, n.position(), arities_[level]);
  }

  // Literal binder: always in @-form so it never re-parses as a fresh binder.
  std::string literal(const Name& n) {
    if (n.is_var()) return "@*" + var_name(n);
    return "@" + atom(n.process());
  }

  std::string atom(const Proc& p) {
    switch (p.kind()) {
      case Kind::Stop:
      case Kind::Int:
      case Kind::Str:
      case Kind::Undefined:
      case Kind::Drop:
      case Kind::Arith:
        return prefix(p);
      default:
        return "{ " + full(p) + " }";
    }
  }

  static bool label_form(const Proc& first) {
    return first.kind() == Kind::Str && is_plain_identifier(first.str_value());
  }

  std::string prefix(const Proc& p) {
    switch (p.kind()) {
      case Kind::Stop:
        return "0";
      case Kind::Int:
        // bare `0` is the stopped process
        return p.int_value() == 0 ? "+0" : std::to_string(p.int_value());
      case Kind::Str:
        return quote_string(p.str_value());
      case Kind::Undefined:
        return "undefined";
      case Kind::Drop:
        return "*" + name(p.dropped());
      case Kind::Arith:
        return "(" + operand(p.lhs()) + (p.arith_op() == ArithOp::Add ? " + " : " - ") +
               operand(p.rhs()) + ")";
      case Kind::Par:
        return "{ " + full(p) + " }";
      case Kind::Choice: {
        std::string out = "match { ";
        for (std::size_t i = 0; i < p.components().size(); ++i) {
          if (i) out += " ; ";
          out += prefix(p.components()[i]);
        }
        return out + " }";
      }
      case Kind::Output:
        return output_text(p);
      case Kind::Input:
        return input_text(p);
    }
    return "?";
  }

  std::string operand(const Proc& p) {
    if (p.kind() == Kind::Par || p.is_io() || p.kind() == Kind::Choice) {
      return "(" + full(p) + ")";
    }
    return prefix(p);
  }

  std::string output_text(const Proc& p) {
    const auto& args = p.args();
    std::string out = name(p.channel());
    std::size_t first = 0;
    if (!args.empty() && label_form(args[0])) {
      out += " ! " + args[0].str_value() + "(";
      first = 1;
    } else {
      out += "!(";
    }
    for (std::size_t i = first; i < args.size(); ++i) {
      if (i > first) out += ", ";
      out += full(args[i]);
    }
    return out + ")";
  }

  std::string input_text(const Proc& p) {
    const auto& bs = p.binders();
    std::string out = name(p.channel());
    std::size_t level = arities_.size();
    std::size_t first = 0;
    bool pattern_form = !bs.empty() && bs[0].pattern && !bs[0].pattern->is_var() &&
                        label_form(bs[0].pattern->process());
    if (pattern_form) {
      out += " ? " + bs[0].pattern->process().str_value() + "(";
      first = 1;
    } else {
      out += "?(";
    }
    for (std::size_t i = first; i < bs.size(); ++i) {
      if (i > first) out += ", ";
      if (bs[i].pattern) {
        if (pattern_form && bs[i].pattern->is_var()) {
          out += var_name(*bs[i].pattern);
        } else {
          out += literal(*bs[i].pattern);
        }
      } else {
        out += binder_name(level, i, bs.size());
      }
    }
    out += ") => ";
    arities_.push_back(bs.size());
    const Proc& body = p.body();
    out += body.kind() == Kind::Par ? "{ " + full(body) + " }" : prefix(body);
    arities_.pop_back();
    return out;
  }
};

}  // namespace

std::string to_string(const Proc& p) { return Printer().full(p); }
std::string to_string(const Name& n) { return Printer().name(n); }
std::string to_string(const CanonicalForm& c) { return to_string(c.proc()); }

}  // namespace rhopol
