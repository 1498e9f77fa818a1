#pragma once

// Random process generation and naive reference implementations used as
// oracles against the library's canonical-form based algorithms.

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "rhopol/reduction.hpp"
#include "rhopol/syntax.hpp"

namespace oracle {

using namespace rhopol;

// ---------------------------------------------------------------------------
// Generation

struct GenOptions {
  std::size_t max_size = 12;
  std::vector<Name> names = {ident_name("x"), ident_name("y"), ident_name("z")};
  bool choice = true;
  bool quotes = true;
  bool ground = true;
};

class Gen {
 public:
  Gen(std::uint64_t seed, GenOptions opts = {}) : rng_(seed), opts_(std::move(opts)) {}

  Proc proc() {
    std::size_t budget = 1 + pick(opts_.max_size);
    return proc(budget, 0);
  }

  // Parallel composition of 2 or 3 generated processes, for interaction.
  Proc system() {
    std::size_t k = 2 + pick(2);
    std::vector<Proc> parts;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t budget = 1 + pick(std::max<std::size_t>(opts_.max_size / k, 1));
      parts.push_back(pick(2) == 0 ? io_output(budget, 0) : proc(budget + 1, 0));
    }
    return par(parts);
  }

  Name name(std::uint32_t depth, std::size_t& budget) {
    std::size_t r = pick(10);
    if (depth > 0 && r < 4) return Name::var(static_cast<std::uint32_t>(pick(depth)), 0);
    if (opts_.quotes && r == 4 && budget >= 2) {
      std::size_t inner = 1 + pick(std::min<std::size_t>(budget - 1, 3));
      budget -= inner;
      return Name::quote(proc(inner, depth));
    }
    if (depth > 0 && r == 5) return Name::quote(drop(Name::var(static_cast<std::uint32_t>(pick(depth)), 0)));
    return opts_.names[pick(opts_.names.size())];
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  // A process of at most `budget` nodes whose variables are below `depth`.
  Proc proc(std::size_t budget, std::uint32_t depth) {
    if (budget <= 1) return leaf(depth, budget);
    std::size_t r = pick(10);
    --budget;
    if (r < 3) {
      std::size_t left = 1 + pick(budget);
      std::size_t right = budget - left;
      return par(proc(left, depth), right == 0 ? stop() : proc(right, depth));
    }
    if (r < 6) return io_input(budget, depth);
    if (r < 8) return io_output(budget, depth);
    if (r == 8 && opts_.choice && budget >= 2) {
      std::size_t left = 1 + pick(budget - 1);
      return choice({io_input(left, depth), io_input(budget - left, depth)});
    }
    return leaf(depth, budget);
  }

  Proc io_input(std::size_t budget, std::uint32_t depth) {
    Name chan = name(depth, budget);
    std::size_t arity = 1 + pick(2);
    std::vector<Binder> bs(arity, Binder::bind());
    return input(chan, bs, proc(std::max<std::size_t>(budget, 1), depth + 1));
  }

  Proc io_output(std::size_t budget, std::uint32_t depth) {
    Name chan = name(depth, budget);
    std::size_t arity = pick(3);
    std::vector<Proc> args;
    for (std::size_t i = 0; i < arity; ++i) {
      std::size_t share = budget / (arity - i);
      budget -= share;
      args.push_back(share == 0 ? stop() : proc(share, depth));
    }
    return output(chan, std::move(args));
  }

  Proc leaf(std::uint32_t depth, std::size_t& budget) {
    std::size_t r = pick(6);
    if (r == 0 && depth > 0) return drop(Name::var(static_cast<std::uint32_t>(pick(depth)), 0));
    if (r == 1) return drop(name(depth, budget));
    if (r == 2 && opts_.ground) return int_lit(static_cast<std::int64_t>(pick(3)));
    return stop();
  }

  std::mt19937_64 rng_;
  GenOptions opts_;
};

// ---------------------------------------------------------------------------
// Structural congruence by permutation search

bool congruent(const Proc& a, const Proc& b);

inline void flatten(const Proc& p, std::vector<Proc>& out) {
  switch (p.kind()) {
    case Kind::Stop:
      return;
    case Kind::Par:
      for (const Proc& k : p.components()) flatten(k, out);
      return;
    case Kind::Choice: {
      std::vector<Proc> branches;
      std::function<void(const Proc&)> walk = [&](const Proc& q) {
        if (q.kind() == Kind::Choice) {
          for (const Proc& k : q.components()) walk(k);
        } else {
          branches.push_back(q);
        }
      };
      walk(p);
      if (branches.size() == 1) {
        flatten(branches[0], out);
      } else if (!branches.empty()) {
        out.push_back(p);
      }
      return;
    }
    default:
      out.push_back(p);
  }
}

inline std::vector<Proc> branches_of(const Proc& p) {
  std::vector<Proc> out;
  std::function<void(const Proc&)> walk = [&](const Proc& q) {
    if (q.kind() == Kind::Choice) {
      for (const Proc& k : q.components()) walk(k);
    } else {
      out.push_back(q);
    }
  };
  walk(p);
  return out;
}

// Unwraps @*x to x, through Stop padding.
inline Name strip(Name n) {
  while (!n.is_var()) {
    std::vector<Proc> parts;
    flatten(n.process(), parts);
    if (parts.size() != 1 || parts[0].kind() != Kind::Drop) break;
    n = parts[0].dropped();
  }
  return n;
}

inline bool name_eq(const Name& x, const Name& y) {
  Name a = strip(x), b = strip(y);
  if (a.is_var() || b.is_var()) {
    return a.is_var() && b.is_var() && a.index() == b.index() && a.position() == b.position();
  }
  return congruent(a.process(), b.process());
}

bool atom_eq(const Proc& a, const Proc& b);

template <class Eq>
bool multiset_eq(const std::vector<Proc>& xs, const std::vector<Proc>& ys, Eq eq) {
  if (xs.size() != ys.size()) return false;
  std::vector<bool> used(ys.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == xs.size()) return true;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (used[j] || !eq(xs[i], ys[j])) continue;
      used[j] = true;
      if (go(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return go(0);
}

inline bool atom_eq(const Proc& a, const Proc& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Input: {
      if (!name_eq(a.channel(), b.channel())) return false;
      if (a.binders().size() != b.binders().size()) return false;
      for (std::size_t i = 0; i < a.binders().size(); ++i) {
        const Binder& x = a.binders()[i];
        const Binder& y = b.binders()[i];
        if (x.is_pattern() != y.is_pattern()) return false;
        if (x.is_pattern() && !name_eq(*x.pattern, *y.pattern)) return false;
      }
      return congruent(a.body(), b.body());
    }
    case Kind::Output: {
      if (!name_eq(a.channel(), b.channel()) || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (!congruent(a.args()[i], b.args()[i])) return false;
      }
      return true;
    }
    case Kind::Drop:
      return name_eq(a.dropped(), b.dropped());
    case Kind::Int:
      return a.int_value() == b.int_value();
    case Kind::Str:
      return a.str_value() == b.str_value();
    case Kind::Undefined:
    case Kind::Stop:
      return true;
    case Kind::Arith:
      return a.arith_op() == b.arith_op() && congruent(a.lhs(), b.lhs()) &&
             congruent(a.rhs(), b.rhs());
    case Kind::Choice:
      return multiset_eq(branches_of(a), branches_of(b), atom_eq);
    case Kind::Par:
      return congruent(a, b);
  }
  return false;
}

inline bool congruent(const Proc& a, const Proc& b) {
  std::vector<Proc> xs, ys;
  flatten(a, xs);
  flatten(b, ys);
  return multiset_eq(xs, ys, atom_eq);
}

// ---------------------------------------------------------------------------
// Substitution by direct recursion with oracle name equivalence

inline Proc naive_substitute(const Proc& p, const NameSubst& s) {
  auto lookup = [&](const Name& n) -> const Name* {
    if (!n.is_closed()) return nullptr;
    for (const auto& [k, v] : s) {
      if (name_eq(n, k)) return &v;
    }
    return nullptr;
  };
  auto sub_name = [&](const Name& n) {
    const Name* v = lookup(n);
    return v ? *v : n;
  };
  switch (p.kind()) {
    case Kind::Input: {
      std::vector<Binder> bs;
      for (const Binder& b : p.binders()) {
        bs.push_back(b.pattern ? Binder::match(sub_name(*b.pattern)) : Binder::bind());
      }
      return input(sub_name(p.channel()), bs, naive_substitute(p.body(), s));
    }
    case Kind::Output: {
      std::vector<Proc> args;
      for (const Proc& a : p.args()) args.push_back(naive_substitute(a, s));
      return output(sub_name(p.channel()), args);
    }
    case Kind::Drop: {
      const Name* v = lookup(p.dropped());
      return v ? v->process() : p;
    }
    case Kind::Par:
    case Kind::Choice: {
      std::vector<Proc> ks;
      for (const Proc& k : p.components()) ks.push_back(naive_substitute(k, s));
      return p.kind() == Kind::Par ? par(ks) : choice(ks);
    }
    case Kind::Arith:
      return arith(p.arith_op(), naive_substitute(p.lhs(), s), naive_substitute(p.rhs(), s));
    default:
      return p;
  }
}

// ---------------------------------------------------------------------------
// Reduction by direct search over top-level components

inline std::vector<Proc> naive_successors(const Proc& p) {
  std::vector<Proc> comps;
  flatten(p, comps);
  std::vector<Proc> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (const Proc& in : branches_of(comps[i])) {
      if (in.kind() != Kind::Input || !in.channel().is_closed()) continue;
      for (std::size_t j = 0; j < comps.size(); ++j) {
        if (j == i) continue;
        for (const Proc& o : branches_of(comps[j])) {
          if (o.kind() != Kind::Output || !name_eq(in.channel(), o.channel())) continue;
          if (o.args().size() != in.binders().size()) continue;
          std::vector<Name> vals;
          bool ok = true;
          for (std::size_t a = 0; a < o.args().size(); ++a) {
            Name v = Name::quote(eval_ground(o.args()[a]));
            const Binder& b = in.binders()[a];
            if (b.is_pattern() && !name_eq(*b.pattern, v)) ok = false;
            vals.push_back(v);
          }
          if (!ok) continue;
          std::vector<Proc> rest;
          for (std::size_t k = 0; k < comps.size(); ++k) {
            if (k != i && k != j) rest.push_back(comps[k]);
          }
          rest.push_back(instantiate(in.body(), vals));
          out.push_back(par(rest));
        }
      }
    }
  }
  return out;
}

// Reachable states up to `depth` steps, deduplicated by the oracle.
inline std::vector<Proc> naive_reachable(const Proc& p, std::size_t depth, std::size_t cap,
                                         bool* truncated = nullptr) {
  std::vector<Proc> seen{p};
  std::vector<Proc> layer{p};
  bool trunc = false;
  auto known = [&](const Proc& q) {
    return std::any_of(seen.begin(), seen.end(), [&](const Proc& s) { return congruent(s, q); });
  };
  for (std::size_t d = 0; d < depth && !layer.empty(); ++d) {
    std::vector<Proc> next;
    for (const Proc& s : layer) {
      for (const Proc& q : naive_successors(s)) {
        if (known(q)) continue;
        if (seen.size() >= cap) {
          trunc = true;
          continue;
        }
        seen.push_back(q);
        next.push_back(q);
      }
    }
    layer = std::move(next);
  }
  if (!layer.empty()) {
    for (const Proc& s : layer) {
      for (const Proc& q : naive_successors(s)) {
        if (!known(q)) trunc = true;
      }
    }
  }
  if (truncated) *truncated = trunc;
  return seen;
}

}  // namespace oracle
