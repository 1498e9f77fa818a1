#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rhopol/sugar.hpp"
#include "rhopol/syntax.hpp"
#include "support.hpp"

using namespace rhopol;

namespace {

const Name x = ident_name("x");
const Name y = ident_name("y");
const Name z = ident_name("z");

bool same_set(std::vector<Name> a, std::vector<Name> b) {
  auto covered = [](const std::vector<Name>& xs, const std::vector<Name>& ys) {
    for (const Name& n : xs) {
      bool hit = false;
      for (const Name& m : ys) hit = hit || name_equiv(n, m);
      if (!hit) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace

TEST_CASE("parse: stop and smallest output") {
  CHECK(parse_proc("0").kind() == Kind::Stop);
  Proc p = parse_proc("@0!(0)");
  REQUIRE(p.kind() == Kind::Output);
  CHECK(name_equiv(p.channel(), Name::quote(stop())));
  REQUIRE(p.args().size() == 1);
  CHECK(p.args()[0].kind() == Kind::Stop);
}

TEST_CASE("free names follow the recursive equations") {
  CHECK(free_names(stop()).empty());
  CHECK(same_set(free_names(output(x, {stop()})), {x}));
  Proc in = input(x, 1, output(Name::var(0, 0), {stop()}));
  CHECK(same_set(free_names(in), {x}));
  CHECK(same_set(free_names(parse_proc("x?(a) => y!(*a) | *z")), {x, y, z}));
}

TEST_CASE("monoid laws and alpha equivalence") {
  Proc p = output(x, {stop()});
  Proc q = input(y, 1, drop(Name::var(0, 0)));
  Proc r = drop(z);
  CHECK(canonicalize(par(p, stop())) == canonicalize(p));
  CHECK(canonicalize(par(p, q)) == canonicalize(par(q, p)));
  CHECK(struct_congruent(par(par(p, q), r), par(p, par(q, r))));
  CHECK(struct_congruent(stop(), par(std::vector<Proc>{})));
  CHECK_FALSE(struct_congruent(output(x, {}), input(x, 1, stop())));
  CHECK(struct_congruent(parse_proc("x?(y) => *y"), parse_proc("x?(z) => *z")));
}

TEST_CASE("name equivalence examples") {
  CHECK(name_equiv(Name::quote(stop()), Name::quote(stop())));
  CHECK(name_equiv(Name::quote(par(stop(), stop())), Name::quote(stop())));
  Proc xo = output(x, {});
  CHECK_FALSE(name_equiv(Name::quote(xo), Name::quote(par(xo, xo))));
  CHECK_FALSE(oracle::name_eq(Name::quote(xo), Name::quote(par(xo, xo))));
  CHECK(name_equiv(Name::quote(drop(x)), x));
}

TEST_CASE("semantic substitution examples") {
  Proc q = output(y, {stop()});
  Name at_q = Name::quote(q);
  CHECK(struct_congruent(substitute(drop(x), {{x, at_q}}), q));
  CHECK(struct_congruent(substitute(drop(y), {{x, at_q}}), drop(y)));
  CHECK(struct_congruent(substitute(output(x, {stop()}), {{x, at_q}}), output(at_q, {stop()})));
}

TEST_CASE("ground terms print distinctly from stop") {
  CHECK(to_string(int_lit(0)) != to_string(stop()));
  CHECK_FALSE(struct_congruent(int_lit(0), stop()));
}

TEST_CASE("property: canonicalization is idempotent and agrees with the oracle") {
  oracle::Gen gen(11);
  for (int i = 0; i < 300; ++i) {
    Proc p = gen.proc();
    CanonicalForm c = canonicalize(p);
    CHECK(canonicalize(c.proc()) == c);
    CHECK(oracle::congruent(p, c.proc()));
  }
}

TEST_CASE("property: congruence is a congruence under random contexts") {
  oracle::Gen gen(12);
  for (int i = 0; i < 200; ++i) {
    Proc p = gen.proc();
    Proc q = gen.proc();
    Proc r = gen.proc();
    Proc pq = par(p, q), qp = par(q, p);
    REQUIRE(struct_congruent(pq, qp));
    CHECK(struct_congruent(par(pq, r), par(qp, r)));
    CHECK(struct_congruent(input(x, 1, pq), input(x, 1, qp)));
    CHECK(struct_congruent(output(x, {pq}), output(x, {qp})));
    CHECK(struct_congruent(drop(Name::quote(pq)), drop(Name::quote(qp))));
    CHECK(struct_congruent(output(Name::quote(pq), {}), output(Name::quote(qp), {})));
    CHECK(struct_congruent(choice({input(x, 1, pq), output(y, {})}),
                           choice({output(y, {}), input(x, 1, qp)})));
  }
}

TEST_CASE("property: congruence and name equivalence are equivalence relations") {
  oracle::Gen gen(13, {.max_size = 5});
  std::vector<Proc> pool;
  for (int i = 0; i < 40; ++i) pool.push_back(gen.proc());
  for (const Proc& a : pool) {
    CHECK(struct_congruent(a, a));
    for (const Proc& b : pool) {
      bool ab = struct_congruent(a, b);
      CHECK(ab == struct_congruent(b, a));
      CHECK(ab == oracle::congruent(a, b));
      CHECK(ab == name_equiv(Name::quote(a), Name::quote(b)));
      if (!ab) continue;
      for (const Proc& c : pool) {
        if (struct_congruent(b, c)) CHECK(struct_congruent(a, c));
      }
    }
  }
}

TEST_CASE("property: free names are invariant under congruence") {
  oracle::Gen gen(14);
  for (int i = 0; i < 200; ++i) {
    Proc p = gen.proc();
    Proc q = gen.proc();
    CHECK(same_set(free_names(par({p, stop(), q})), free_names(par(q, p))));
    CHECK(same_set(free_names(p), free_names(canonicalize(p).proc())));
  }
}

TEST_CASE("property: substitution safety") {
  oracle::Gen gen(15);
  for (int i = 0; i < 200; ++i) {
    Proc p = gen.proc();
    Proc q = gen.proc();
    Name at_q = Name::quote(q);
    Proc s = substitute(p, {{x, at_q}});
    std::vector<Name> allowed;
    for (const Name& n : free_names(p)) {
      if (!name_equiv(n, x)) allowed.push_back(n);
    }
    for (const Name& n : free_names(q)) allowed.push_back(n);
    allowed.push_back(at_q);
    for (const Name& n : free_names(s)) {
      bool ok = false;
      for (const Name& m : allowed) ok = ok || name_equiv(n, m);
      CHECK_MESSAGE(ok, to_string(n), " escapes from ", to_string(p));
    }
  }
}

TEST_CASE("property: printed core syntax parses back up to congruence") {
  oracle::Gen gen(16);
  for (int i = 0; i < 200; ++i) {
    Proc p = gen.proc();
    std::string text = to_string(p);
    Proc back = parse_proc(text);
    CHECK_MESSAGE(struct_congruent(p, back), text);
  }
}
