#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "rhopol/error.hpp"
#include "rhopol/logic.hpp"
#include "rhopol/reduction.hpp"
#include "rhopol/sugar.hpp"

namespace rhopol {

namespace {

using StateSet = std::unordered_set<CanonicalForm, CanonicalHash>;

Verdict v_not(Verdict v) {
  if (v == Verdict::Holds) return Verdict::Fails;
  if (v == Verdict::Fails) return Verdict::Holds;
  return Verdict::Unknown;
}

Verdict v_and(Verdict a, Verdict b) {
  if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Holds;
}

Verdict v_or(Verdict a, Verdict b) { return v_not(v_and(v_not(a), v_not(b))); }

Verdict from_bool(bool b) { return b ? Verdict::Holds : Verdict::Fails; }

// ---------------------------------------------------------------------------
// Formula utilities

bool mentions_name_var(const Formula& f, const std::string& v);

bool name_mentions(const NameFormula& a, const std::string& v) {
  if (!a) return false;
  if (a->kind == NameFormulaKind::Var) return a->var == v;
  if (a->kind == NameFormulaKind::Quote) return mentions_name_var(a->formula, v);
  return false;
}

bool mentions_name_var(const Formula& f, const std::string& v) {
  if (name_mentions(f->name, v)) return true;
  bool binds = (f->kind == FormulaKind::Reception || f->kind == FormulaKind::Forall) && f->var == v;
  if (binds) return false;
  for (const auto& k : f->kids) {
    if (mentions_name_var(k, v)) return true;
  }
  return false;
}

Formula subst_name(const Formula& f, const std::string& v, const Name& x);

NameFormula subst_name(const NameFormula& a, const std::string& v, const Name& x) {
  if (!a) return a;
  if (a->kind == NameFormulaKind::Var) return a->var == v ? fml::name(x) : a;
  if (a->kind == NameFormulaKind::Quote) {
    Formula g = subst_name(a->formula, v, x);
    return g == a->formula ? a : fml::quote(g);
  }
  return a;
}

Formula subst_name(const Formula& f, const std::string& v, const Name& x) {
  NameFormula a = subst_name(f->name, v, x);
  bool binds = (f->kind == FormulaKind::Reception || f->kind == FormulaKind::Forall) && f->var == v;
  std::vector<Formula> kids = f->kids;
  bool changed = a != f->name;
  if (!binds) {
    for (auto& k : kids) {
      Formula g = subst_name(k, v, x);
      if (g != k) {
        k = g;
        changed = true;
      }
    }
  }
  if (!changed) return f;
  auto n = std::make_shared<FormulaNode>(*f);
  n->name = a;
  n->kids = std::move(kids);
  return n;
}

void formula_names(const Formula& f, std::vector<Name>& out) {
  auto from_name = [&](const NameFormula& a) {
    if (!a) return;
    if (a->kind == NameFormulaKind::QuoteProc) out.push_back(Name::quote(*a->proc));
    if (a->kind == NameFormulaKind::Quote) formula_names(a->formula, out);
  };
  from_name(f->name);
  if (f->kind == FormulaKind::Congruent) out.push_back(Name::quote(*f->proc));
  for (const auto& h : f->hidden) out.push_back(h);
  for (const auto& k : f->kids) formula_names(k, out);
}

std::vector<Name> dedup_names(std::vector<Name> names) {
  for (auto& n : names) n = canonical_name(n);
  std::sort(names.begin(), names.end(), NameLess{});
  names.erase(std::unique(names.begin(), names.end(),
                          [](const Name& a, const Name& b) { return identical(a, b); }),
              names.end());
  return names;
}

// ---------------------------------------------------------------------------
// Inert outputs

bool may_unify_proc(const Proc& pat, const Proc& q);

// `pat` is in canonical form.
bool may_unify(const Name& pat, const Name& x) {
  if (pat.is_var()) return true;
  if (pat.open_depth() == 0) return name_equiv(pat, x);
  return may_unify_proc(pat.process(), x.process());
}

bool may_unify_proc(const Proc& pat, const Proc& q) {
  if (pat.open_depth() == 0) return struct_congruent(pat, q);
  switch (pat.kind()) {
    case Kind::Output: {
      if (q.kind() != Kind::Output || q.args().size() != pat.args().size()) return false;
      if (!may_unify(canonical_name(pat.channel()), q.channel())) return false;
      for (std::size_t i = 0; i < pat.args().size(); ++i) {
        if (!may_unify_proc(pat.args()[i], q.args()[i])) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

struct InputShape {
  Name channel;
  std::size_t arity;
};

void collect_inputs(const Proc& p, std::vector<InputShape>& out);

void collect_inputs(const Name& n, std::vector<InputShape>& out) {
  if (!n.is_var()) collect_inputs(n.process(), out);
}

void collect_inputs(const Proc& p, std::vector<InputShape>& out) {
  switch (p.kind()) {
    case Kind::Input:
      out.push_back({p.channel(), p.binders().size()});
      collect_inputs(p.channel(), out);
      for (const auto& b : p.binders()) {
        if (b.pattern) collect_inputs(*b.pattern, out);
      }
      collect_inputs(p.body(), out);
      return;
    case Kind::Output:
      collect_inputs(p.channel(), out);
      for (const auto& a : p.args()) collect_inputs(a, out);
      return;
    case Kind::Drop:
      collect_inputs(p.dropped(), out);
      return;
    case Kind::Par:
    case Kind::Choice:
      for (const auto& k : p.components()) collect_inputs(k, out);
      return;
    case Kind::Arith:
      collect_inputs(p.lhs(), out);
      collect_inputs(p.rhs(), out);
      return;
    default:
      return;
  }
}

}  // namespace

CanonicalForm prune_inert(const CanonicalForm& c, const std::vector<Name>& extra) {
  auto comps = top_components(c);
  std::vector<InputShape> inputs;
  collect_inputs(c.proc(), inputs);
  for (const auto& n : extra) collect_inputs(n, inputs);
  for (auto& in : inputs) in.channel = canonical_name(in.channel);
  std::vector<Proc> kept;
  bool dropped = false;
  for (const auto& k : comps) {
    bool inert = false;
    if (k.kind() == Kind::Output && k.channel().open_depth() == 0 && !k.channel().is_var()) {
      inert = true;
      for (const auto& in : inputs) {
        if (in.arity == k.args().size() && may_unify(in.channel, k.channel())) {
          inert = false;
          break;
        }
      }
    }
    if (inert) {
      dropped = true;
    } else {
      kept.push_back(k);
    }
  }
  return dropped ? canonicalize(par(std::move(kept))) : c;
}

namespace {

// ---------------------------------------------------------------------------
// Checker

struct FixBinding {
  std::string var;
  const StateSet* members = nullptr;
  const StateSet* space = nullptr;  // explored states (minus mode)
  bool plus = true;                 // which approximation is being computed
  bool binder_negated = false;
  bool prune = false;
  bool exact = false;               // valuation: no polarity approximation
};

struct MemoKey {
  const FormulaNode* f;
  CanonicalForm s;
  bool operator==(const MemoKey& o) const { return f == o.f && s == o.s; }
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<const void*>()(k.f) ^ (k.s.hash() * 0x9e3779b97f4a7c15ULL);
  }
};

struct Closure {
  std::vector<CanonicalForm> states;
  bool truncated = false;
};

// An input at top level (or in a top-level choice) with its continuations
// over the universe.
struct Offer {
  Name channel;
  Proc input;
  std::vector<Proc> rest;
  bool ready = false;  // continuations computed
  bool capped = false;
  std::vector<CanonicalForm> continuations;
};

constexpr std::size_t kMaxSepComponents = 14;
constexpr std::size_t kMaxInstantiations = 4096;

class Checker {
 public:
  Checker(const CheckContext& ctx, std::vector<Name> universe)
      : ctx_(ctx), universe_(std::move(universe)) {
    for (const auto& [var, states] : ctx.valuation) {
      StateSet s(states.begin(), states.end());
      valuation_.emplace(var, std::move(s));
    }
  }

  Verdict eval(const CanonicalForm& s, const Formula& f, bool negated) {
    bool closed = free_prop_vars_closed(f);
    if (closed) {
      auto it = memo_.find(MemoKey{f.get(), s});
      if (it != memo_.end()) return it->second;
    }
    Verdict v = eval_raw(s, f, negated);
    if (closed) {
      memo_.emplace(MemoKey{f.get(), s}, v);
    }
    return v;
  }

  Verdict member(const Name& x0, const NameFormula& a, bool negated) {
    if (x0.is_var() || x0.open_depth() != 0) return Verdict::Fails;
    Name x = canonical_name(x0);
    if (is_private_name(x)) return Verdict::Fails;
    switch (a->kind) {
      case NameFormulaKind::QuoteProc:
        return from_bool(name_equiv(x, Name::quote(*a->proc)));
      case NameFormulaKind::Quote:
        return eval(canonicalize(x.process()), a->formula, negated);
      case NameFormulaKind::Var:
        throw Error("unbound name variable '" + a->var + "'");
    }
    return Verdict::Fails;
  }

  void note_bound(const std::string& why) {
    bounds_hit_ = true;
    if (unknown_reason_.empty()) unknown_reason_ = why;
  }

  bool bounds_hit() const { return bounds_hit_; }
  const std::string& unknown_reason() const { return unknown_reason_; }
  const std::vector<Name>& universe() const { return universe_; }

 private:
  const CheckContext& ctx_;
  std::vector<Name> universe_;
  std::unordered_map<std::string, StateSet> valuation_;
  std::vector<FixBinding> env_;
  std::unordered_map<MemoKey, Verdict, MemoHash> memo_;
  std::vector<Formula> keep_alive_;
  std::unordered_map<const FormulaNode*, bool> closed_cache_;
  std::unordered_map<CanonicalForm, Closure, CanonicalHash> closures_;
  std::unordered_map<CanonicalForm, std::vector<CanonicalForm>, CanonicalHash> successors_;
  std::unordered_map<CanonicalForm, std::vector<Offer>, CanonicalHash> offers_;
  std::unordered_map<CanonicalForm, CanonicalForm, CanonicalHash> pruned_;
  bool bounds_hit_ = false;
  std::string unknown_reason_;

  bool free_prop_vars_closed(const Formula& f) {
    auto it = closed_cache_.find(f.get());
    if (it != closed_cache_.end()) return it->second;
    std::vector<std::string> bound;
    bool closed = no_free_prop_vars(f, bound);
    closed_cache_.emplace(f.get(), closed);
    keep_alive_.push_back(f);  // pins the address used as a cache key
    return closed;
  }

  static bool no_free_prop_vars(const Formula& f, std::vector<std::string>& bound) {
    if (f->kind == FormulaKind::PropVar) {
      return std::find(bound.begin(), bound.end(), f->var) != bound.end();
    }
    if (f->kind == FormulaKind::Gfp) bound.push_back(f->var);
    bool ok = true;
    for (const auto& k : f->kids) ok = ok && no_free_prop_vars(k, bound);
    if (ok && f->name && f->name->formula) ok = no_free_prop_vars(f->name->formula, bound);
    if (f->kind == FormulaKind::Gfp) bound.pop_back();
    return ok;
  }

  const std::vector<CanonicalForm>& internal_successors(const CanonicalForm& s) {
    auto it = successors_.find(s);
    if (it != successors_.end()) return it->second;
    return successors_.emplace(s, successors(s)).first->second;
  }

  const CanonicalForm& pruned(const CanonicalForm& s) {
    auto it = pruned_.find(s);
    if (it != pruned_.end()) return it->second;
    return pruned_.emplace(s, prune_inert(s, universe_)).first->second;
  }

  std::vector<Offer>& offers(const CanonicalForm& t) {
    auto it = offers_.find(t);
    if (it != offers_.end()) return it->second;
    std::vector<Offer> out;
    for_each_input(t, [&](const Proc& in, const std::vector<Proc>& rest) {
      out.push_back(Offer{canonical_name(in.channel()), in, rest});
      return true;
    });
    return offers_.emplace(t, std::move(out)).first->second;
  }

  const std::vector<CanonicalForm>& continuations(Offer& o) {
    if (!o.ready) {
      for (const auto& vals : instantiations(o.input, o.capped)) {
        o.continuations.push_back(continuation(o.rest, o.input, vals));
      }
      o.ready = true;
    }
    if (o.capped) note_bound("too many reception instantiations over the universe");
    return o.continuations;
  }

  // Bounded breadth-first closure under internal steps, in the same layer
  // order and with the same bounds as explore().
  const Closure& weak_closure(const CanonicalForm& s) {
    auto it = closures_.find(s);
    if (it != closures_.end()) return it->second;
    Closure c;
    StateSet seen{s};
    c.states.push_back(s);
    std::vector<CanonicalForm> layer{s};
    const std::size_t cap = std::max<std::size_t>(ctx_.max_states, 1);
    for (std::size_t d = 0; !layer.empty(); ++d) {
      std::sort(layer.begin(), layer.end());
      std::vector<CanonicalForm> next;
      for (const auto& cur : layer) {
        for (const auto& t : internal_successors(cur)) {
          if (seen.count(t)) continue;
          if (d < ctx_.depth && c.states.size() < cap) {
            seen.insert(t);
            c.states.push_back(t);
            next.push_back(t);
          } else {
            c.truncated = true;
          }
        }
      }
      layer = std::move(next);
    }
    if (c.truncated) note_bound("internal reductions exceed the depth/state bound");
    return closures_.emplace(s, std::move(c)).first->second;
  }

  // Values for each binder slot: pattern slots fixed, bind slots from `z`.
  std::vector<std::vector<Name>> instantiations(const Proc& in, bool& capped) {
    std::vector<std::size_t> free_slots;
    for (std::size_t i = 0; i < in.binders().size(); ++i) {
      if (!in.binders()[i].pattern) free_slots.push_back(i);
    }
    std::vector<std::vector<Name>> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < free_slots.size(); ++i) {
      total *= std::max<std::size_t>(universe_.size(), 1);
      if (total > kMaxInstantiations) {
        capped = true;
        return out;
      }
    }
    if (!free_slots.empty() && universe_.empty()) return out;
    std::vector<std::size_t> idx(free_slots.size(), 0);
    while (true) {
      std::vector<Name> vals;
      std::size_t k = 0;
      for (std::size_t i = 0; i < in.binders().size(); ++i) {
        if (in.binders()[i].pattern) {
          vals.push_back(canonical_name(*in.binders()[i].pattern));
        } else {
          vals.push_back(universe_[idx[k++]]);
        }
      }
      out.push_back(std::move(vals));
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == universe_.size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
    return out;
  }

  static CanonicalForm continuation(const std::vector<Proc>& rest, const Proc& in,
                                    const std::vector<Name>& vals) {
    std::vector<Proc> parts = rest;
    parts.push_back(instantiate(in.body(), vals));
    return canonicalize(par(std::move(parts)));
  }

  template <typename F>
  static void for_each_input(const CanonicalForm& t, F&& fn) {
    auto comps = top_components(t);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::vector<Proc> branches =
          comps[i].kind() == Kind::Choice ? comps[i].components() : std::vector<Proc>{comps[i]};
      for (const auto& b : branches) {
        if (b.kind() != Kind::Input) continue;
        std::vector<Proc> rest;
        for (std::size_t j = 0; j < comps.size(); ++j) {
          if (j != i) rest.push_back(comps[j]);
        }
        if (!fn(b, rest)) return;
      }
    }
  }

  Verdict eval_reception(const CanonicalForm& s, const Formula& f, bool negated) {
    const Closure& cl = weak_closure(s);
    const Formula& body = f->kids[0];
    bool uses_b = mentions_name_var(body, f->var);
    Verdict result = Verdict::Fails;
    for (const auto& t : cl.states) {
      for (Offer& o : offers(t)) {
        Verdict m = member(o.channel, f->name, negated);
        if (m == Verdict::Fails) continue;
        const auto& conts = continuations(o);
        const std::size_t binders = o.input.binders().size();
        Verdict all_c = Verdict::Holds;
        std::size_t cs = uses_b ? universe_.size() : 1;
        for (std::size_t c = 0; c < cs && all_c != Verdict::Fails; ++c) {
          Formula bc = uses_b ? subst_name(body, f->var, universe_[c]) : body;
          Verdict some_z = Verdict::Fails;
          for (const auto& cont : conts) {
            some_z = v_or(some_z, eval(cont, bc, negated));
            if (some_z == Verdict::Holds) break;
          }
          if (some_z == Verdict::Fails && (!ctx_.universe_complete || conts.empty())) {
            if (!ctx_.universe_complete) note_bound("universe is capped");
            if (!ctx_.universe_complete || binders > 0) some_z = Verdict::Unknown;
          }
          all_c = v_and(all_c, some_z);
        }
        if (uses_b && all_c == Verdict::Holds && !ctx_.universe_complete) {
          note_bound("universe is capped");
          all_c = Verdict::Unknown;
        }
        result = v_or(result, v_and(m, all_c));
        if (result == Verdict::Holds) return result;
      }
    }
    if (cl.truncated && result == Verdict::Fails) return Verdict::Unknown;
    return result;
  }

  Verdict eval_sep(const CanonicalForm& s, const Formula& f, bool negated) {
    auto comps = top_components(s);
    if (comps.size() > kMaxSepComponents) {
      note_bound("too many parallel components to split");
      return Verdict::Unknown;
    }
    Verdict result = Verdict::Fails;
    std::unordered_set<CanonicalForm, CanonicalHash> seen_left;
    for (std::size_t mask = 0; mask < (std::size_t{1} << comps.size()); ++mask) {
      std::vector<Proc> l;
      std::vector<Proc> r;
      for (std::size_t i = 0; i < comps.size(); ++i) ((mask >> i) & 1 ? l : r).push_back(comps[i]);
      CanonicalForm lc = canonicalize(par(std::move(l)));
      if (!seen_left.insert(lc).second) continue;
      CanonicalForm rc = canonicalize(par(std::move(r)));
      Verdict a = eval(lc, f->kids[0], negated);
      if (a == Verdict::Fails) continue;
      result = v_or(result, v_and(a, eval(rc, f->kids[1], negated)));
      if (result == Verdict::Holds) break;
    }
    return result;
  }

  Verdict eval_forall(const CanonicalForm& s, const Formula& f, bool negated) {
    Verdict result = Verdict::Holds;
    for (const auto& x : universe_) {
      Verdict m = member(x, f->name, negated);
      if (m == Verdict::Fails) continue;
      result = v_and(result, v_or(v_not(m), eval(s, subst_name(f->kids[0], f->var, x), negated)));
      if (result == Verdict::Fails) return result;
    }
    if (result == Verdict::Holds && !ctx_.universe_complete) {
      note_bound("universe is capped");
      return Verdict::Unknown;
    }
    return result;
  }

  Verdict eval_rely(const CanonicalForm& s, const Formula& f, bool negated) {
    Verdict result = Verdict::Holds;
    for (std::size_t qi = 0; qi < ctx_.env_suite.size(); ++qi) {
      const Proc& q = ctx_.env_suite[qi];
      Verdict h = eval(canonicalize(q), f->kids[0], !negated);
      if (h == Verdict::Fails) continue;
      Proc composed = par(s.proc(), q);
      NameSubst hide;
      for (std::size_t i = 0; i < f->hidden.size(); ++i) {
        hide.emplace_back(canonical_name(f->hidden[i]),
                          fresh_name("hidden." + std::to_string(i), composed));
      }
      Verdict c = eval(canonicalize(substitute(composed, hide)), f->kids[1], negated);
      result = v_and(result, v_or(v_not(h), c));
      if (result == Verdict::Fails) return result;
    }
    return result;
  }

  Verdict eval_prop_var(const CanonicalForm& s, const Formula& f, bool negated) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->var != f->var) continue;
      const FixBinding& b = *it;
      const CanonicalForm& t = b.prune ? pruned(s) : s;
      bool positive = negated == b.binder_negated;
      if (b.exact) return from_bool(b.members->count(t) > 0);
      if (!positive) return b.plus ? Verdict::Holds : Verdict::Fails;
      if (b.members->count(t)) return Verdict::Holds;
      if (!b.plus && !b.space->count(t)) return Verdict::Holds;
      return Verdict::Fails;
    }
    auto v = valuation_.find(f->var);
    if (v != valuation_.end()) return from_bool(v->second.count(s) > 0);
    throw Error("unbound formula variable '" + f->var + "'");
  }

  struct Space {
    std::vector<CanonicalForm> states;
    std::vector<bool> frontier;
    bool truncated = false;
  };

  // States reachable by internal steps and by receptions on public channels
  // instantiated over the universe.
  Space explore_space(const CanonicalForm& root, bool prune) {
    Space sp;
    std::unordered_map<CanonicalForm, std::size_t, CanonicalHash> index;
    auto norm = [&](const CanonicalForm& c) { return prune ? pruned(c) : c; };
    auto add = [&](CanonicalForm c) {
      index.emplace(c, sp.states.size());
      sp.states.push_back(std::move(c));
      sp.frontier.push_back(false);
    };
    add(norm(root));
    std::vector<std::size_t> layer{0};
    for (std::size_t d = 0; !layer.empty(); ++d) {
      std::sort(layer.begin(), layer.end(),
                [&](std::size_t a, std::size_t b) { return sp.states[a] < sp.states[b]; });
      std::vector<std::size_t> next;
      for (std::size_t id : layer) {
        CanonicalForm cur = sp.states[id];
        std::vector<CanonicalForm> succ = internal_successors(cur);
        for (Offer& o : offers(cur)) {
          const Name& ch = o.channel;
          if (ch.is_var() || ch.open_depth() != 0 || is_private_name(ch)) continue;
          const auto& conts = continuations(o);
          succ.insert(succ.end(), conts.begin(), conts.end());
        }
        for (const auto& s0 : succ) {
          CanonicalForm s = norm(s0);
          if (index.count(s)) continue;
          if (d < ctx_.depth && sp.states.size() < ctx_.max_states) {
            next.push_back(sp.states.size());
            add(std::move(s));
          } else {
            sp.frontier[id] = true;
            sp.truncated = true;
          }
        }
      }
      layer = std::move(next);
    }
    return sp;
  }

  StateSet iterate(const Space& sp, const Formula& f, bool negated, bool plus, bool prune,
                   const StateSet& all) {
    StateSet members;
    for (std::size_t i = 0; i < sp.states.size(); ++i) {
      if (!plus || !sp.frontier[i]) members.insert(sp.states[i]);
    }
    env_.push_back(FixBinding{f->var, &members, &all, plus, negated, prune, false});
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < sp.states.size(); ++i) {
        const CanonicalForm& st = sp.states[i];
        if (!members.count(st) || (!plus && sp.frontier[i])) continue;
        Verdict v = eval(st, f->kids[0], negated);
        bool keep = plus ? v == Verdict::Holds : v != Verdict::Fails;
        if (!keep) {
          members.erase(st);
          changed = true;
        }
      }
    }
    env_.pop_back();
    return members;
  }

  // Top-down iteration S := {u : body holds at u with X := S} from the whole
  // space, Jacobi style. Returns nullopt if it does not settle.
  std::optional<StateSet> iterate_exact(const Space& sp, const Formula& f, bool negated,
                                        bool optimistic, bool prune) {
    StateSet members(sp.states.begin(), sp.states.end());
    std::vector<StateSet> seen;
    for (std::size_t round = 0; round <= sp.states.size() + 1; ++round) {
      env_.push_back(FixBinding{f->var, &members, &members, true, negated, prune, true});
      StateSet next;
      for (const auto& st : sp.states) {
        Verdict v = eval(st, f->kids[0], negated);
        if (v == Verdict::Holds || (optimistic && v == Verdict::Unknown)) next.insert(st);
      }
      env_.pop_back();
      if (next == members) return members;
      for (const auto& old : seen) {
        if (old == next) return std::nullopt;
      }
      seen.push_back(members);
      members = std::move(next);
    }
    return std::nullopt;
  }

  Verdict eval_gfp(const CanonicalForm& s, const Formula& f, bool negated) {
    bool prune = is_output_blind(f->kids[0]);
    Space sp = explore_space(s, prune);
    const CanonicalForm& root = sp.states.front();
    if (!sp.truncated) {
      auto pess = iterate_exact(sp, f, negated, false, prune);
      if (pess && pess->count(root)) return Verdict::Holds;
      auto opt = iterate_exact(sp, f, negated, true, prune);
      if (opt && !opt->count(root)) return Verdict::Fails;
      note_bound(pess && opt ? "fixpoint depends on undetermined subformulas"
                             : "fixpoint iteration does not settle (non-monotone body)");
      return Verdict::Unknown;
    }
    // Partial space: a post-fixed point of the body with negative occurrences
    // of X read as true proves membership; one with them read as false,
    // frontier states kept, bounds every post-fixed point from above.
    note_bound("fixpoint state space exceeds the depth/state bound");
    StateSet all(sp.states.begin(), sp.states.end());
    StateSet plus = iterate(sp, f, negated, true, prune, all);
    if (plus.count(root)) return Verdict::Holds;
    StateSet minus = iterate(sp, f, negated, false, prune, all);
    if (!minus.count(root)) return Verdict::Fails;
    return Verdict::Unknown;
  }

  Verdict eval_raw(const CanonicalForm& s, const Formula& f, bool negated) {
    const Proc& p = s.proc();
    switch (f->kind) {
      case FormulaKind::True: return Verdict::Holds;
      case FormulaKind::Null: return from_bool(p.kind() == Kind::Stop);
      case FormulaKind::Congruent: return from_bool(s == canonicalize(*f->proc));
      case FormulaKind::Not: return v_not(eval(s, f->kids[0], !negated));
      case FormulaKind::And: {
        Verdict a = eval(s, f->kids[0], negated);
        if (a == Verdict::Fails) return a;
        return v_and(a, eval(s, f->kids[1], negated));
      }
      case FormulaKind::Sep: return eval_sep(s, f, negated);
      case FormulaKind::Disclosure:
        if (p.kind() != Kind::Drop) return Verdict::Fails;
        return member(p.dropped(), f->name, negated);
      case FormulaKind::Dissemination: {
        if (p.kind() != Kind::Output || p.args().size() != f->kids.size()) return Verdict::Fails;
        Verdict v = member(p.channel(), f->name, negated);
        for (std::size_t i = 0; i < f->kids.size() && v != Verdict::Fails; ++i) {
          v = v_and(v, eval(canonicalize(p.args()[i]), f->kids[i], negated));
        }
        return v;
      }
      case FormulaKind::Reception: return eval_reception(s, f, negated);
      case FormulaKind::Gfp: return eval_gfp(s, f, negated);
      case FormulaKind::Forall: return eval_forall(s, f, negated);
      case FormulaKind::RelyGuarantee: return eval_rely(s, f, negated);
      case FormulaKind::PropVar: return eval_prop_var(s, f, negated);
    }
    return Verdict::Unknown;
  }
};

std::string describe_failure(Checker& ch, const CanonicalForm& s, const Formula& f) {
  if (f->kind == FormulaKind::And) {
    for (const auto& k : f->kids) {
      if (ch.eval(s, k, false) == Verdict::Fails) return describe_failure(ch, s, k);
    }
  }
  return "fails: " + to_string(f);
}

}  // namespace

std::vector<Name> default_universe(const Proc& p, const Formula& f,
                                   const std::vector<Proc>& env_suite) {
  std::vector<Name> names;
  auto add_public = [&](const Proc& q) {
    for (const auto& n : free_names(q)) {
      if (!is_private_name(n)) names.push_back(n);
    }
  };
  add_public(p);
  for (const auto& q : env_suite) add_public(q);
  formula_names(f, names);
  names.push_back(observer_name(0));
  names.push_back(observer_name(1));
  return dedup_names(std::move(names));
}

CheckResult check(const Proc& p, const Formula& f, const CheckContext& ctx) {
  std::vector<Name> universe =
      ctx.universe.empty() ? default_universe(p, f, ctx.env_suite) : dedup_names(ctx.universe);
  Checker ch(ctx, std::move(universe));
  CanonicalForm s = canonicalize(p);
  CheckResult r;
  r.verdict = ch.eval(s, f, false);
  r.bounds_hit = ch.bounds_hit();
  switch (r.verdict) {
    case Verdict::Holds:
      r.reason = "holds";
      break;
    case Verdict::Fails:
      r.reason = describe_failure(ch, s, f);
      r.witness = s;
      break;
    case Verdict::Unknown:
      r.reason = ch.unknown_reason().empty() ? "undetermined" : ch.unknown_reason();
      break;
  }
  return r;
}

std::vector<Name> name_denotation(const NameFormula& a, const CheckContext& ctx) {
  Checker ch(ctx, dedup_names(ctx.universe));
  std::vector<Name> out;
  for (const auto& x : ctx.universe) {
    if (ch.member(x, a, false) == Verdict::Holds) out.push_back(x);
  }
  return out;
}

}  // namespace rhopol
