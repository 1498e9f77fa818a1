#pragma once

// Reduction: Comm between a top-level input and output, with the Par and
// structural-congruence context rules realized by canonicalization.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rhopol/syntax.hpp"

namespace rhopol {

// Positions index top_components() of the canonical form the redex was
// enumerated from. `*_branch` is the branch of a Choice, 0 otherwise.
struct Redex {
  std::size_t input_component = 0;
  std::size_t input_branch = 0;
  std::size_t output_component = 0;
  std::size_t output_branch = 0;
  Name channel;
};

std::vector<Redex> enumerate_redexes(const CanonicalForm& c);
std::vector<Redex> enumerate_redexes(const Proc& p);

// Throws StaleRedexError if `r` is not a redex of `c`.
CanonicalForm step(const CanonicalForm& c, const Redex& r);
Proc step(const Proc& p, const Redex& r);

// One successor per redex, in redex order.
std::vector<CanonicalForm> successors(const CanonicalForm& c);

struct TraceStep {
  Redex redex;
  CanonicalForm result;
};

struct Trace {
  CanonicalForm initial;
  std::vector<TraceStep> steps;
  bool terminated = false;  // no redex remains
  bool truncated = false;   // max_steps reached with redexes left
  std::uint64_t seed = 0;
};

Trace run(const Proc& p, std::uint64_t seed, std::size_t max_steps);

// Line-delimited records: a schema header, then one record per step.
std::string trace_to_jsonl(const Trace& t);
std::string trace_to_text(const Trace& t);

struct StateGraph {
  std::vector<CanonicalForm> states;             // states[0] is the root
  std::vector<std::vector<std::size_t>> succ;    // one entry per redex
  std::vector<std::size_t> depth;
  std::vector<bool> frontier;                    // successors not explored
  std::unordered_map<CanonicalForm, std::size_t, CanonicalHash> index;
  bool truncated = false;

  std::size_t size() const { return states.size(); }
  const std::size_t* find(const CanonicalForm& c) const {
    auto it = index.find(c);
    return it == index.end() ? nullptr : &it->second;
  }
};

// Breadth-first exploration; layers are expanded in canonical order so the
// explored subset under truncation is deterministic. A state is a frontier
// state when its depth is max_depth or the state budget ran out before it
// was expanded; truncated is set iff some frontier state has a successor
// outside the graph.
StateGraph explore(const Proc& p, std::size_t max_depth, std::size_t max_states);

struct ReachableSet {
  std::vector<CanonicalForm> states;  // sorted
  bool truncated = false;
};

ReachableSet reachable(const Proc& p, std::size_t max_depth, std::size_t max_states);

}  // namespace rhopol
