#pragma once

// N-barbed weak bisimulation over bounded state spaces.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rhopol/reduction.hpp"
#include "rhopol/syntax.hpp"

namespace rhopol {

// Barb-eligible names. Deduplicated modulo name equivalence on use.
using Observable = std::vector<Name>;

// Channels of unguarded top-level outputs (including output branches of a
// top-level choice) that are equivalent to a member of n.
std::vector<Name> barbs(const Proc& p, const Observable& n);

struct WeakBarbs {
  std::vector<Name> names;
  bool truncated = false;
};

WeakBarbs weak_barbs(const Proc& p, const Observable& n, std::size_t depth,
                     std::size_t max_states = 20000);

// Public free names of both processes.
Observable default_observable(const Proc& p, const Proc& q);

enum class BisimVerdict { Equivalent, Distinguished, Unknown };
std::string to_string(BisimVerdict v);

struct Distinction {
  enum class Clause { Reduction, Barb } clause = Clause::Barb;
  bool left_moves = true;          // which process exhibits the behaviour
  std::optional<Name> barb;        // Barb: the unmatched barb
  std::optional<Redex> redex;      // Reduction: the unmatched step
  std::optional<CanonicalForm> result;
  std::string describe() const;
};

struct BisimResult {
  BisimVerdict verdict = BisimVerdict::Unknown;
  std::size_t depth_checked = 0;
  std::size_t states = 0;
  bool truncated = false;
  std::optional<Distinction> distinguishing;
};

BisimResult bisim(const Proc& p, const Proc& q, const Observable& n, std::size_t depth,
                  std::size_t max_states = 20000);

}  // namespace rhopol
