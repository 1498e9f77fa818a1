#include "rhopol/reduction.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rhopol/error.hpp"

namespace rhopol {

namespace {

const Proc& branch_of(const std::vector<Proc>& comps, std::size_t c, std::size_t b) {
  const Proc& p = comps[c];
  return p.kind() == Kind::Choice ? p.components()[b] : p;
}

// Quoted, evaluated arguments if `in` and `out` can communicate.
std::optional<std::vector<Name>> comm_values(const Proc& in, const Proc& out) {
  if (in.kind() != Kind::Input || out.kind() != Kind::Output) return std::nullopt;
  if (in.binders().size() != out.args().size()) return std::nullopt;
  if (!name_equiv(in.channel(), out.channel())) return std::nullopt;
  std::vector<Name> values;
  values.reserve(out.args().size());
  for (std::size_t i = 0; i < out.args().size(); ++i) {
    // Not canonicalized: `@*y` must deliver `*y` to a drop, not the process of y.
    Name v = Name::quote(eval_ground(out.args()[i]));
    const Binder& b = in.binders()[i];
    if (b.pattern && !name_equiv(*b.pattern, v)) return std::nullopt;
    values.push_back(std::move(v));
  }
  return values;
}

std::size_t branch_count(const Proc& p) {
  return p.kind() == Kind::Choice ? p.components().size() : 1;
}

}  // namespace

std::vector<Redex> enumerate_redexes(const CanonicalForm& c) {
  auto comps = top_components(c);
  std::vector<Redex> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t ib = 0; ib < branch_count(comps[i]); ++ib) {
      const Proc& in = branch_of(comps, i, ib);
      if (in.kind() != Kind::Input) continue;
      for (std::size_t o = 0; o < comps.size(); ++o) {
        if (o == i) continue;
        for (std::size_t ob = 0; ob < branch_count(comps[o]); ++ob) {
          const Proc& outp = branch_of(comps, o, ob);
          if (comm_values(in, outp)) out.push_back(Redex{i, ib, o, ob, in.channel()});
        }
      }
    }
  }
  return out;
}

std::vector<Redex> enumerate_redexes(const Proc& p) { return enumerate_redexes(canonicalize(p)); }

CanonicalForm step(const CanonicalForm& c, const Redex& r) {
  auto comps = top_components(c);
  auto stale = [] { return StaleRedexError("redex does not match the process"); };
  if (r.input_component >= comps.size() || r.output_component >= comps.size() ||
      r.input_component == r.output_component ||
      r.input_branch >= branch_count(comps[r.input_component]) ||
      r.output_branch >= branch_count(comps[r.output_component])) {
    throw stale();
  }
  const Proc& in = branch_of(comps, r.input_component, r.input_branch);
  const Proc& out = branch_of(comps, r.output_component, r.output_branch);
  auto values = comm_values(in, out);
  if (!values || !name_equiv(in.channel(), r.channel)) throw stale();

  std::vector<Proc> rest;
  rest.reserve(comps.size() - 1);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (k != r.input_component && k != r.output_component) rest.push_back(comps[k]);
  }
  rest.push_back(instantiate(in.body(), *values));
  return canonicalize(par(std::move(rest)));
}

Proc step(const Proc& p, const Redex& r) { return step(canonicalize(p), r).proc(); }

std::vector<CanonicalForm> successors(const CanonicalForm& c) {
  std::vector<CanonicalForm> out;
  for (const auto& r : enumerate_redexes(c)) out.push_back(step(c, r));
  return out;
}

Trace run(const Proc& p, std::uint64_t seed, std::size_t max_steps) {
  Trace t;
  t.initial = canonicalize(p);
  t.seed = seed;
  std::mt19937_64 rng(seed);
  CanonicalForm cur = t.initial;
  while (true) {
    auto rs = enumerate_redexes(cur);
    if (rs.empty()) {
      t.terminated = true;
      break;
    }
    if (t.steps.size() >= max_steps) {
      t.truncated = true;
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, rs.size() - 1);
    const Redex& r = rs[pick(rng)];
    cur = step(cur, r);
    t.steps.push_back(TraceStep{r, cur});
  }
  return t;
}

std::string trace_to_jsonl(const Trace& t) {
  using nlohmann::json;
  std::ostringstream out;
  json header = {{"schema", "rhopol/1"},
                 {"kind", "trace"},
                 {"seed", t.seed},
                 {"steps", t.steps.size()},
                 {"terminated", t.terminated},
                 {"truncated", t.truncated},
                 {"initial", to_string(t.initial)}};
  out << header.dump() << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    json rec = {{"step", i + 1},
                {"channel", to_string(t.steps[i].redex.channel)},
                {"result", to_string(t.steps[i].result)}};
    out << rec.dump() << "\n";
  }
  return out.str();
}

std::string trace_to_text(const Trace& t) {
  std::ostringstream out;
  out << "   " << to_string(t.initial) << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    out << "-> [" << (i + 1) << " on " << to_string(t.steps[i].redex.channel) << "] "
        << to_string(t.steps[i].result) << "\n";
  }
  out << (t.terminated ? "(terminated)" : t.truncated ? "(step bound reached)" : "") << "\n";
  return out.str();
}

StateGraph explore(const Proc& p, std::size_t max_depth, std::size_t max_states) {
  StateGraph g;
  auto add = [&](CanonicalForm c, std::size_t d) {
    std::size_t id = g.states.size();
    g.index.emplace(c, id);
    g.states.push_back(std::move(c));
    g.succ.emplace_back();
    g.depth.push_back(d);
    g.frontier.push_back(false);
    return id;
  };
  add(canonicalize(p), 0);
  std::vector<std::size_t> layer{0};
  for (std::size_t d = 0; !layer.empty(); ++d) {
    std::sort(layer.begin(), layer.end(),
              [&](std::size_t a, std::size_t b) { return g.states[a] < g.states[b]; });
    std::vector<std::size_t> next;
    for (std::size_t id : layer) {
      auto succs = successors(g.states[id]);
      std::vector<std::size_t> edges;
      bool complete = true;
      for (auto& s : succs) {
        if (const std::size_t* known = g.find(s)) {
          edges.push_back(*known);
        } else if (d < max_depth && g.states.size() < std::max<std::size_t>(max_states, 1)) {
          std::size_t nid = add(std::move(s), d + 1);
          edges.push_back(nid);
          next.push_back(nid);
        } else {
          complete = false;
        }
      }
      if (complete) {
        g.succ[id] = std::move(edges);
      } else {
        g.frontier[id] = true;
        g.truncated = true;
      }
    }
    layer = std::move(next);
  }
  return g;
}

ReachableSet reachable(const Proc& p, std::size_t max_depth, std::size_t max_states) {
  StateGraph g = explore(p, max_depth, max_states);
  ReachableSet r;
  r.states = g.states;
  std::sort(r.states.begin(), r.states.end());
  r.truncated = g.truncated;
  return r;
}

}  // namespace rhopol
