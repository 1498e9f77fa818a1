#include "rhopol/sugar.hpp"

#include <stdexcept>
#include <unordered_set>

namespace rhopol {

namespace {

struct Binding {
  enum class Kind { Var, Fresh, Def } kind = Kind::Var;
  std::string ident;
  std::uint32_t level = 0;  // Var: absolute binder level
  std::uint32_t pos = 0;    // Var: slot
  Name name;                // Fresh name or Def channel, valid at `depth`
  std::uint32_t depth = 0;
  std::size_t arity = 0;    // Def
};

struct PendingDef {
  SurfaceProgram def;
  Name chan;
  Name rep;
};

class Desugarer {
 public:
  explicit Desugarer(const DesugarOptions& opts) : opts_(opts) {}

  Proc top(const SurfaceProgram& p) {
    if (p->kind == SurfaceKind::Par || p->kind == SurfaceKind::Block) return block(p->kids);
    return proc(p);
  }

 private:
  const DesugarOptions& opts_;
  std::vector<Binding> scope_;
  std::vector<std::vector<std::uint32_t>> levels_;  // bound slots per binder level
  std::int64_t counter_ = 0;

  std::uint32_t depth() const { return static_cast<std::uint32_t>(levels_.size()); }

  const Binding* lookup(const std::string& id) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->ident == id) return &*it;
    }
    return nullptr;
  }

  Name at_depth(const Binding& b) const {
    if (b.kind == Binding::Kind::Var) return Name::var(depth() - 1 - b.level, b.pos);
    return shift(b.name, depth() - b.depth);
  }

  std::vector<Name> scope_vars() const {
    std::vector<Name> out;
    for (std::uint32_t l = 0; l < depth(); ++l) {
      for (std::uint32_t pos : levels_[l]) out.push_back(Name::var(depth() - 1 - l, pos));
    }
    return out;
  }

  Name mint(const std::string& tag) {
    std::string t = opts_.unit.empty() ? tag : opts_.unit + "/" + tag;
    return fresh_name(t, counter_++, scope_vars());
  }

  Name resolve(const SurfaceName& n) {
    if (n.kind == SurfaceName::Kind::Quote) return Name::quote(proc(n.quoted));
    if (const Binding* b = lookup(n.ident)) return at_depth(*b);
    return ident_name(n.ident);
  }

  void register_def(const SurfaceProgram& d, std::vector<PendingDef>& pending,
                    std::unordered_set<std::string>& seen) {
    if (!seen.insert(d->ident).second) {
      throw ScopeError(d->pos, "duplicate definition of '" + d->ident + "'");
    }
    PendingDef pd{d, mint(d->ident), mint(d->ident + ".rep")};
    Binding b;
    b.kind = Binding::Kind::Def;
    b.ident = d->ident;
    b.name = pd.chan;
    b.depth = depth();
    b.arity = d->params.size();
    scope_.push_back(std::move(b));
    pending.push_back(std::move(pd));
  }

  Proc block(const std::vector<SurfaceProgram>& kids) {
    std::size_t mark = scope_.size();
    std::vector<PendingDef> pending;
    std::unordered_set<std::string> seen;
    std::unordered_set<std::string> imported;
    for (const auto& s : kids) {
      if (s->kind == SurfaceKind::Def) {
        register_def(s, pending, seen);
      } else if (s->kind == SurfaceKind::Import) {
        if (!imported.insert(s->ident).second) continue;
        auto src = prelude_source(s->ident);
        if (!src) throw ScopeError(s->pos, "unknown prelude definition '" + s->ident + "'");
        auto lib = parse_surface(*src);
        for (const auto& d : lib->kids) register_def(d, pending, seen);
      }
    }
    std::vector<Proc> parts;
    for (const auto& pd : pending) parts.push_back(server(pd));
    for (const auto& s : kids) {
      if (s->kind == SurfaceKind::Def || s->kind == SurfaceKind::Import) continue;
      parts.push_back(proc(s));
    }
    scope_.resize(mark);
    if (parts.empty()) return stop();
    if (parts.size() == 1) return parts.front();
    return par(std::move(parts));
  }

  Proc server(const PendingDef& pd) {
    const auto& d = *pd.def;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d.params.size(); ++i) names.push_back(d.params[i]);
    std::vector<std::optional<std::string>> slots(names.begin(), names.end());
    Proc body = under_binder(slots, d.pos, d.kids.at(0));
    Proc guard = input(pd.chan, d.params.size(), body);
    return replicate_lazy(guard, pd.rep);
  }

  // Desugar `body` beneath a binder whose binding slots are the non-empty
  // entries of `slots`.
  Proc under_binder(const std::vector<std::optional<std::string>>& slots, SourcePos pos,
                    const SurfaceProgram& body) {
    std::size_t mark = scope_.size();
    std::unordered_set<std::string> seen;
    levels_.emplace_back();
    for (std::uint32_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) continue;
      if (!seen.insert(*slots[i]).second) {
        throw ScopeError(pos, "name '" + *slots[i] + "' bound twice");
      }
      levels_.back().push_back(i);
      Binding b;
      b.kind = Binding::Kind::Var;
      b.ident = *slots[i];
      b.level = depth() - 1;
      b.pos = i;
      scope_.push_back(std::move(b));
    }
    Proc out = proc(body);
    levels_.pop_back();
    scope_.resize(mark);
    return out;
  }

  Proc input_node(const SurfaceNode& n) {
    Name chan = resolve(n.chan);
    std::vector<Binder> binders;
    std::vector<std::optional<std::string>> slots;
    if (n.label) {
      binders.push_back(Binder::match(ident_name(*n.label)));
      slots.emplace_back();
    }
    for (const auto& b : n.binders) {
      if (b.literal) {
        binders.push_back(Binder::match(resolve(b.name)));
        slots.emplace_back();
      } else if (n.label && lookup(b.ident)) {
        // In a message pattern an identifier already in scope is matched.
        binders.push_back(Binder::match(at_depth(*lookup(b.ident))));
        slots.emplace_back();
      } else {
        binders.push_back(Binder::bind());
        slots.emplace_back(b.ident);
      }
    }
    Proc body = under_binder(slots, n.pos, n.kids.at(0));
    return input(chan, std::move(binders), body);
  }

  std::vector<Proc> procs(const std::vector<SurfaceProgram>& xs) {
    std::vector<Proc> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(proc(x));
    return out;
  }

  Proc proc(const SurfaceProgram& p) {
    const SurfaceNode& n = *p;
    switch (n.kind) {
      case SurfaceKind::Zero: return stop();
      case SurfaceKind::Int: return int_lit(n.ival);
      case SurfaceKind::Str: return str_lit(n.sval);
      case SurfaceKind::Undefined: return undefined_lit();
      case SurfaceKind::Ref: {
        const Binding* b = lookup(n.ident);
        if (b && b->kind == Binding::Kind::Def) {
          throw ScopeError(n.pos, "definition '" + n.ident + "' used without arguments");
        }
        return drop(b ? at_depth(*b) : ident_name(n.ident));
      }
      case SurfaceKind::Drop: return drop(resolve(n.chan));
      case SurfaceKind::Input: return input_node(n);
      case SurfaceKind::Output: {
        std::vector<Proc> args;
        if (n.label) args.push_back(str_lit(*n.label));
        for (auto& a : procs(n.kids)) args.push_back(std::move(a));
        return output(resolve(n.chan), std::move(args));
      }
      case SurfaceKind::Par:
      case SurfaceKind::Block: return block(n.kids);
      case SurfaceKind::Match: {
        std::vector<Proc> branches;
        for (const auto& k : n.kids) {
          if (k->kind == SurfaceKind::Def || k->kind == SurfaceKind::Import) {
            throw ScopeError(k->pos, "definitions are not allowed inside match");
          }
          Proc b = proc(k);
          if (!b.is_io()) throw ScopeError(k->pos, "match branch must be an input or output");
          branches.push_back(std::move(b));
        }
        if (branches.empty()) return stop();
        return choice(std::move(branches));
      }
      case SurfaceKind::New: {
        std::size_t mark = scope_.size();
        for (const auto& id : n.params) {
          Binding b;
          b.kind = Binding::Kind::Fresh;
          b.ident = id;
          b.name = mint(id);
          b.depth = depth();
          scope_.push_back(std::move(b));
        }
        Proc body = proc(n.kids.at(0));
        scope_.resize(mark);
        return body;
      }
      case SurfaceKind::Apply: {
        const Binding* b = lookup(n.ident);
        if (!b || b->kind != Binding::Kind::Def) {
          throw ScopeError(n.pos, "unknown definition '" + n.ident + "'");
        }
        if (b->arity != n.kids.size()) {
          throw ScopeError(n.pos, "'" + n.ident + "' expects " + std::to_string(b->arity) +
                                      " argument(s), got " + std::to_string(n.kids.size()));
        }
        Name chan = at_depth(*b);
        return output(chan, procs(n.kids));
      }
      case SurfaceKind::Arith:
        return arith(n.op, proc(n.kids.at(0)), proc(n.kids.at(1)));
      case SurfaceKind::Def:
      case SurfaceKind::Import:
        return block({p});
    }
    return stop();
  }
};

Name fresh_channel() { return ident_name("#fresh"); }
Name observer_channel() { return ident_name("#obs"); }

}  // namespace

Proc desugar(const SurfaceProgram& p, const DesugarOptions& opts) {
  Desugarer d(opts);
  return d.top(p);
}

Proc parse_proc(std::string_view source, const DesugarOptions& opts) {
  return desugar(parse_surface(source), opts);
}

Proc duplicator(const Name& x) {
  Name inner = shift(x, 1);
  Name y = Name::var(0, 0);
  return input(x, 1, par(output(inner, {drop(y)}), drop(y)));
}

Proc replicate_eager(const Proc& p, const Name& x) {
  return par(output(x, {par(duplicator(x), p)}), duplicator(x));
}

Proc replicate_lazy(const Proc& guard, const Name& x) {
  if (guard.kind() != Kind::Input) {
    throw std::invalid_argument("replicate_lazy: guard must be an input");
  }
  Proc rearmed = input(guard.channel(), guard.binders(),
                       par(duplicator(shift(x, 1)), guard.body()));
  return par(output(x, {rearmed}), duplicator(x));
}

Name fresh_name(std::string_view tag, std::int64_t k, const std::vector<Name>& scope) {
  std::vector<Proc> args{str_lit(std::string(tag)), int_lit(k)};
  for (const auto& s : scope) args.push_back(drop(s));
  return Name::quote(output(fresh_channel(), std::move(args)));
}

Name fresh_name(std::string_view tag, const Proc& avoid) {
  auto used = all_names(avoid);
  for (std::int64_t k = 0;; ++k) {
    Name c = fresh_name(tag, k);
    bool clash = false;
    for (const auto& u : used) {
      if (name_equiv(u, c)) {
        clash = true;
        break;
      }
    }
    if (!clash) return c;
  }
}

bool is_private_name(const Name& n) {
  Name c = canonical_name(n);
  if (c.is_var()) return false;
  const Proc& q = c.process();
  return q.kind() == Kind::Output && name_equiv(q.channel(), fresh_channel());
}

Name observer_name(std::int64_t k) {
  return Name::quote(output(observer_channel(), {int_lit(k)}));
}

}  // namespace rhopol
