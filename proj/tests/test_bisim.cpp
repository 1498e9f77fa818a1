#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rhopol/bisim.hpp"
#include "rhopol/logic.hpp"
#include "rhopol/sugar.hpp"
#include "support.hpp"

using namespace rhopol;

namespace {

const Name x = ident_name("x");
const Name y = ident_name("y");
const Name u = ident_name("u");
const Name slot = ident_name("slot");

bool contains(const std::vector<Name>& ns, const Name& n) {
  for (const Name& m : ns) {
    if (name_equiv(m, n)) return true;
  }
  return false;
}

// Replays a distinguishing witness against the two processes.
bool replays(const BisimResult& r, const Proc& p, const Proc& q, const Observable& n,
             std::size_t depth) {
  if (!r.distinguishing) return false;
  const Distinction& d = *r.distinguishing;
  const Proc& mover = d.left_moves ? p : q;
  const Proc& other = d.left_moves ? q : p;
  if (d.clause == Distinction::Clause::Barb) {
    WeakBarbs w = weak_barbs(other, n, depth);
    return d.barb && contains(barbs(mover, n), *d.barb) && !contains(w.names, *d.barb);
  }
  return d.redex && d.result && step(canonicalize(mover), *d.redex) == *d.result;
}

Proc restricted_cell(const std::string& inner) {
  return parse_proc("import Cell\nnew(slot) { " + inner + " }");
}

}  // namespace

TEST_CASE("barbs") {
  Proc q = output(u, {stop()});
  CHECK(barbs(output(x, {q}), {x}).size() == 1);
  CHECK(barbs(input(x, 1, stop()), {x}).empty());
  auto b = barbs(par(output(x, {q}), input(y, 1, stop())), {x, y});
  REQUIRE(b.size() == 1);
  CHECK(name_equiv(b[0], x));
  CHECK(barbs(output(x, {q}), {y}).empty());
  CHECK(barbs(output(Name::quote(drop(x)), {}), {x}).size() == 1);
}

TEST_CASE("weak barbs") {
  Proc p = parse_proc("x?(y) => 0 | x!(x!(0))");
  CHECK(barbs(p, {x}).size() == 1);
  for (std::size_t d : {0u, 1u, 4u}) CHECK(weak_barbs(p, {x}, d).names.size() == 1);
  CHECK(weak_barbs(stop(), {x}, 5).names.empty());
  CHECK(weak_barbs(parse_proc("x?(a) => y!(0) | x!(0)"), {y}, 3).names.size() == 1);
  CHECK(weak_barbs(parse_proc("x?(a) => y!(0) | x!(0)"), {y}, 0).truncated);
  for (std::size_t d : {0u, 4u, 16u}) {
    CHECK(weak_barbs(restricted_cell("Cell(slot, s)"), {x, u, ident_name("s")}, d).names.empty());
  }
}

TEST_CASE("bisimulation examples") {
  Proc p = parse_proc("x!(0) | x?(y) => 0");
  for (std::size_t d : {0u, 2u, 4u}) CHECK(bisim(p, p, {x}, d).verdict == BisimVerdict::Equivalent);

  BisimResult r = bisim(p, stop(), {x}, 4);
  CHECK(r.verdict == BisimVerdict::Distinguished);
  CHECK(replays(r, p, stop(), {x}, 4));
  BisimResult flipped = bisim(stop(), p, {x}, 4);
  CHECK(flipped.verdict == BisimVerdict::Distinguished);
  CHECK(replays(flipped, stop(), p, {x}, 4));

  Observable n = {x, u, ident_name("s")};
  BisimResult cell = bisim(restricted_cell("Cell(slot, s)"), stop(), n, 16);
  CHECK(cell.verdict == BisimVerdict::Equivalent);
  CHECK_FALSE(cell.truncated);
}

TEST_CASE("reduction witnesses replay") {
  // Left steps to a state with barb y; right can never produce y.
  Proc p = parse_proc("x?(a) => y!(0) | x!(0)");
  Proc q = parse_proc("x?(a) => 0 | x!(0)");
  Observable n = {y};
  BisimResult r = bisim(p, q, n, 4);
  REQUIRE(r.verdict == BisimVerdict::Distinguished);
  CHECK(replays(r, p, q, n, 4));
  CHECK_FALSE(r.distinguishing->describe().empty());
}

TEST_CASE("truncation yields unknown") {
  Proc bang = replicate_eager(output(y, {}), x);
  Proc other = parse_proc("y!(0)");
  BisimResult r = bisim(bang, bang, {y}, 3, 5);
  CHECK(r.verdict != BisimVerdict::Distinguished);
  CHECK(bisim(bang, other, {x}, 3, 5).verdict != BisimVerdict::Equivalent);
}

TEST_CASE("deniability instances") {
  const char* clients[] = {"0", "u!(0)", "u?(a) => x!(*a)", "x?(a) => u!(0) | x!(1)",
                           "match { u?(a) => 0\n x!(2) }"};
  for (const char* client : clients) {
    CAPTURE(client);
    Proc p = parse_proc(client);
    REQUIRE(check(p, no_access(slot)).verdict == Verdict::Holds);
    for (const char* s : {"0", "7", "\"v\""}) {
      Proc lhs = restricted_cell(std::string(client) + " | Cell(slot, " + s + ")");
      Observable n = default_observable(p, p);
      n.push_back(u);
      n.push_back(x);
      BisimResult r = bisim(lhs, p, n, 12);
      CHECK(r.verdict == BisimVerdict::Equivalent);
    }
  }
}

TEST_CASE("property: reflexive and symmetric") {
  oracle::Gen gen(61, {.max_size = 8});
  Observable n = {x, y, ident_name("z")};
  for (int i = 0; i < 80; ++i) {
    Proc p = gen.system(), q = gen.system();
    CHECK(bisim(p, p, n, 6).verdict == BisimVerdict::Equivalent);
    CHECK(bisim(p, q, n, 6).verdict == bisim(q, p, n, 6).verdict);
  }
}

TEST_CASE("property: congruent processes are equivalent at depth zero") {
  oracle::Gen gen(62, {.max_size = 8});
  Observable n = {x, y, ident_name("z")};
  for (int i = 0; i < 80; ++i) {
    Proc p = gen.system(), q = gen.proc();
    CHECK(bisim(par(p, q), par({q, stop(), p}), n, 0).verdict == BisimVerdict::Equivalent);
  }
}

TEST_CASE("property: distinguishing is monotone in depth and witnesses replay") {
  oracle::Gen gen(63, {.max_size = 8});
  Observable n = {x, y};
  std::size_t distinguished = 0;
  for (int i = 0; i < 80; ++i) {
    Proc p = gen.system(), q = gen.system();
    BisimResult r = bisim(p, q, n, 3);
    if (r.verdict != BisimVerdict::Distinguished) continue;
    ++distinguished;
    CHECK(replays(r, p, q, n, 3));
    for (std::size_t d : {4u, 6u}) CHECK(bisim(p, q, n, d).verdict == BisimVerdict::Distinguished);
  }
  CHECK(distinguished > 10);
}

TEST_CASE("property: scope extrusion for a slot-free client") {
  oracle::Gen gen(64, {.max_size = 6});
  Observable n = {x, y, ident_name("z")};
  for (int i = 0; i < 25; ++i) {
    Proc p = gen.system();
    Proc inside = par(p, parse_proc("import Cell\nCell(slot, 1)"));
    Proc lhs = substitute(inside, {{slot, fresh_name("slot", inside)}});
    Proc rhs = par(p, restricted_cell("Cell(slot, 1)"));
    BisimResult r = bisim(lhs, rhs, n, 8);
    CAPTURE(to_string(p));
    CHECK(r.verdict != BisimVerdict::Distinguished);
    if (!r.truncated) CHECK(r.verdict == BisimVerdict::Equivalent);
  }
}
