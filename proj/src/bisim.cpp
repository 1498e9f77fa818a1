#include "rhopol/bisim.hpp"

#include <algorithm>

#include "rhopol/sugar.hpp"

namespace rhopol {

namespace {

std::vector<Name> dedup(std::vector<Name> names) {
  for (auto& n : names) n = canonical_name(n);
  std::sort(names.begin(), names.end(), NameLess{});
  names.erase(std::unique(names.begin(), names.end(),
                          [](const Name& a, const Name& b) { return identical(a, b); }),
              names.end());
  return names;
}

// Indices into the deduplicated observable.
std::vector<std::size_t> barb_indices(const CanonicalForm& c, const std::vector<Name>& n) {
  std::vector<std::size_t> out;
  auto consider = [&](const Proc& p) {
    if (p.kind() != Kind::Output) return;
    Name ch = canonical_name(p.channel());
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (identical(ch, n[i])) out.push_back(i);
    }
  };
  for (const auto& k : top_components(c)) {
    if (k.kind() == Kind::Choice) {
      for (const auto& b : k.components()) consider(b);
    } else {
      consider(k);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Joint exploration graph of both roots.
struct Joint {
  std::vector<CanonicalForm> states;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::vector<Redex>> redex;
  std::vector<bool> frontier;
  std::size_t left = 0;
  std::size_t right = 0;
  bool truncated = false;
};

Joint explore_joint(const Proc& p, const Proc& q, std::size_t depth, std::size_t max_states) {
  Joint j;
  std::unordered_map<CanonicalForm, std::size_t, CanonicalHash> index;
  auto add = [&](CanonicalForm c) {
    auto it = index.find(c);
    if (it != index.end()) return it->second;
    std::size_t id = j.states.size();
    index.emplace(c, id);
    j.states.push_back(std::move(c));
    j.succ.emplace_back();
    j.redex.emplace_back();
    j.frontier.push_back(false);
    return id;
  };
  j.left = add(canonicalize(p));
  j.right = add(canonicalize(q));
  std::vector<std::size_t> layer{j.left};
  if (j.right != j.left) layer.push_back(j.right);
  for (std::size_t d = 0; !layer.empty(); ++d) {
    std::sort(layer.begin(), layer.end(),
              [&](std::size_t a, std::size_t b) { return j.states[a] < j.states[b]; });
    std::vector<std::size_t> next;
    for (std::size_t id : layer) {
      CanonicalForm cur = j.states[id];
      auto rs = enumerate_redexes(cur);
      std::vector<std::size_t> edges;
      bool complete = true;
      for (const auto& r : rs) {
        CanonicalForm s = step(cur, r);
        auto it = index.find(s);
        if (it != index.end()) {
          edges.push_back(it->second);
        } else if (d < depth && j.states.size() < std::max<std::size_t>(max_states, 2)) {
          std::size_t nid = add(std::move(s));
          edges.push_back(nid);
          next.push_back(nid);
        } else {
          complete = false;
        }
      }
      if (complete) {
        j.succ[id] = std::move(edges);
        j.redex[id] = std::move(rs);
      } else {
        j.frontier[id] = true;
        j.truncated = true;
      }
    }
    layer = std::move(next);
  }
  return j;
}

}  // namespace

std::vector<Name> barbs(const Proc& p, const Observable& n) {
  auto obs = dedup(n);
  std::vector<Name> out;
  for (std::size_t i : barb_indices(canonicalize(p), obs)) out.push_back(obs[i]);
  return out;
}

WeakBarbs weak_barbs(const Proc& p, const Observable& n, std::size_t depth,
                     std::size_t max_states) {
  auto obs = dedup(n);
  StateGraph g = explore(p, depth, max_states);
  std::vector<bool> seen(obs.size(), false);
  for (const auto& s : g.states) {
    for (std::size_t i : barb_indices(s, obs)) seen[i] = true;
  }
  WeakBarbs w;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (seen[i]) w.names.push_back(obs[i]);
  }
  w.truncated = g.truncated;
  return w;
}

Observable default_observable(const Proc& p, const Proc& q) {
  std::vector<Name> out;
  for (const Proc* x : {&p, &q}) {
    for (const auto& n : free_names(*x)) {
      if (!is_private_name(n)) out.push_back(n);
    }
  }
  return dedup(std::move(out));
}

std::string to_string(BisimVerdict v) {
  switch (v) {
    case BisimVerdict::Equivalent: return "equivalent";
    case BisimVerdict::Distinguished: return "distinguished";
    case BisimVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::string Distinction::describe() const {
  std::string who = left_moves ? "left" : "right";
  std::string other = left_moves ? "right" : "left";
  if (clause == Clause::Barb) {
    return who + " has barb " + to_string(*barb) + " that " + other + " never weakly exhibits";
  }
  return who + " reduces on " + to_string(redex->channel) + " to " + to_string(*result) +
         ", which " + other + " cannot weakly match";
}

BisimResult bisim(const Proc& p, const Proc& q, const Observable& n, std::size_t depth,
                  std::size_t max_states) {
  auto obs = dedup(n);
  Joint g = explore_joint(p, q, depth, max_states);
  const std::size_t count = g.states.size();
  const std::size_t lhs = g.left;
  const std::size_t rhs_id = g.right;

  // Weak closure under internal steps, and whether it meets the frontier.
  std::vector<std::vector<std::size_t>> weak(count);
  std::vector<bool> open(count, false);
  std::vector<std::vector<std::size_t>> barb(count);
  std::vector<std::vector<bool>> weak_barb(count, std::vector<bool>(obs.size(), false));
  for (std::size_t s = 0; s < count; ++s) {
    barb[s] = barb_indices(g.states[s], obs);
    std::vector<bool> seen(count, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      weak[s].push_back(u);
      if (g.frontier[u]) open[s] = true;
      for (std::size_t v : g.succ[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t u : weak[s]) {
      for (std::size_t b : barb[u]) weak_barb[s][b] = true;
    }
  }

  // Greatest relation; pairs touching unexplored behaviour are kept.
  std::vector<std::vector<bool>> rel(count, std::vector<bool>(count, true));
  auto barbs_ok = [&](std::size_t a, std::size_t b) {
    if (open[b]) return true;
    for (std::size_t x : barb[a]) {
      if (!weak_barb[b][x]) return false;
    }
    return true;
  };
  auto steps_ok = [&](std::size_t a, std::size_t b) {
    if (open[b]) return true;
    for (std::size_t a2 : g.succ[a]) {
      bool matched = false;
      for (std::size_t b2 : weak[b]) {
        if (rel[a2][b2]) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  };
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      if (!barbs_ok(a, b) || !barbs_ok(b, a)) rel[a][b] = false;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = a; b < count; ++b) {
        if (!rel[a][b]) continue;
        if (!steps_ok(a, b) || !steps_ok(b, a)) {
          rel[a][b] = rel[b][a] = false;
          changed = true;
        }
      }
    }
  }

  BisimResult r;
  r.depth_checked = depth;
  r.states = count;
  r.truncated = g.truncated;
  if (lhs == rhs_id) {
    // Congruent roots: the identity relation is a bisimulation at any bound.
    r.verdict = BisimVerdict::Equivalent;
    return r;
  }
  if (rel[lhs][rhs_id]) {
    r.verdict = g.truncated ? BisimVerdict::Unknown : BisimVerdict::Equivalent;
    return r;
  }
  r.verdict = BisimVerdict::Distinguished;
  Distinction d;
  for (int side = 0; side < 2 && !r.distinguishing; ++side) {
    std::size_t a = side == 0 ? lhs : rhs_id;
    std::size_t b = side == 0 ? rhs_id : lhs;
    d.left_moves = side == 0;
    if (!barbs_ok(a, b)) {
      d.clause = Distinction::Clause::Barb;
      for (std::size_t x : barb[a]) {
        if (!weak_barb[b][x]) {
          d.barb = obs[x];
          break;
        }
      }
      r.distinguishing = d;
    } else if (!steps_ok(a, b)) {
      d.clause = Distinction::Clause::Reduction;
      for (std::size_t k = 0; k < g.succ[a].size(); ++k) {
        std::size_t a2 = g.succ[a][k];
        bool matched = false;
        for (std::size_t b2 : weak[b]) matched = matched || rel[a2][b2];
        if (!matched) {
          d.redex = g.redex[a][k];
          d.result = g.states[a2];
          break;
        }
      }
      r.distinguishing = d;
    }
  }
  return r;
}

}  // namespace rhopol
