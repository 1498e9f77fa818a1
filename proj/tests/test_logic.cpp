#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formula_gen.hpp"
#include "rhopol/logic.hpp"
#include "rhopol/sugar.hpp"
#include "support.hpp"

using namespace rhopol;

namespace {

const Name slot = ident_name("slot");
const Name u = ident_name("u");
const Name x = ident_name("x");

Verdict verdict(const Proc& p, const Formula& f, CheckContext ctx = {}) {
  return check(p, f, ctx).verdict;
}

Verdict verdict(const std::string& src, const std::string& formula, CheckContext ctx = {}) {
  return verdict(parse_proc(src), parse_formula(formula), ctx);
}

// One-step firewall: the next input is on the namespace and none is off it.
Formula next_input_within(const NameFormula& ns, const NameFormula& outside) {
  return fml::conj(fml::reception(ns, "b", fml::truth()),
                   fml::neg(fml::reception(outside, "b", fml::truth())));
}

}  // namespace

TEST_CASE("truth and the null process") {
  CHECK(verdict(parse_proc("x!(0) | y?(a) => 0"), fml::truth()) == Verdict::Holds);
  CHECK(verdict(stop(), fml::null()) == Verdict::Holds);
  CHECK(verdict(parse_proc("x!(0)"), fml::null()) == Verdict::Fails);
}

TEST_CASE("sole access") {
  CheckContext ctx;
  ctx.depth = 32;
  CHECK(verdict(parse_proc("import Cell\nCell(slot, s)"), sole_access(slot), ctx) == Verdict::Holds);
  CHECK(verdict(parse_proc("import SafeCell\nSafeCell(slot, 3)"), sole_access(slot), ctx) ==
        Verdict::Holds);
  CHECK(verdict(parse_proc("u?(y) => 0"), sole_access(slot)) == Verdict::Fails);
  CHECK(verdict(stop(), sole_access(slot)) == Verdict::Fails);
}

TEST_CASE("no access") {
  CHECK(verdict(stop(), no_access(slot)) == Verdict::Holds);
  CHECK(verdict(parse_proc("slot?(y) => 0"), no_access(slot)) == Verdict::Fails);
  CHECK(verdict(parse_proc("u!(x!(0))"), no_access(slot)) == Verdict::Holds);
  CHECK(verdict(parse_proc("u?(y) => slot?(z) => 0 | u!(0)"), no_access(slot)) == Verdict::Fails);
}

TEST_CASE("firewall over a namespace") {
  NameFormula ns = fml::quote(fml::congruent(str_lit("slot")));
  NameFormula outside = fml::quote(fml::neg(fml::congruent(str_lit("slot"))));
  Formula once = next_input_within(ns, outside);
  CHECK(verdict(parse_proc("slot?(y) => 0"), once) == Verdict::Holds);
  CHECK(verdict(parse_proc("u?(y) => 0"), once) == Verdict::Fails);
  CHECK(verdict(parse_proc("slot?(y) => 0 | u?(y) => 0"), once) == Verdict::Fails);

  Formula any = next_input_within(fml::quote(fml::truth()), fml::quote(fml::neg(fml::truth())));
  CHECK(verdict(parse_proc("u?(y) => 0"), any) == Verdict::Holds);
  CHECK(verdict(parse_proc("slot?(y) => 0"), any) == Verdict::Holds);
  CHECK(verdict(parse_proc("u!(0)"), any) == Verdict::Fails);

  // The recursive form needs an input at every stage.
  Formula all = firewall(fml::quote(fml::truth()));
  CHECK(verdict(parse_proc("u?(y) => 0"), all) == Verdict::Fails);
  CHECK(verdict(parse_proc("import Cell\nCell(slot, 1)"), all, CheckContext{.depth = 32}) ==
        Verdict::Holds);
}

TEST_CASE("name denotations") {
  CheckContext ctx;
  Name zero = Name::quote(stop());
  Name zero2 = Name::quote(par(stop(), stop()));
  ctx.universe = {zero, zero2, x, Name::quote(output(x, {}))};
  CHECK(name_denotation(fml::quote_proc(stop()), ctx).size() == 2);
  CHECK(name_denotation(fml::quote(fml::truth()), ctx).size() == ctx.universe.size());
  auto nulls = name_denotation(fml::quote(fml::null()), ctx);
  CHECK(nulls.size() == 2);
  for (const Name& n : nulls) CHECK(name_equiv(n, zero));
  // Fresh names are never denoted.
  ctx.universe.push_back(fresh_name("t", 0));
  CHECK(name_denotation(fml::quote(fml::truth()), ctx).size() == ctx.universe.size() - 1);
}

TEST_CASE("dissemination, disclosure and reception clauses") {
  CHECK(verdict("x!(0)", "<x>(0)") == Verdict::Holds);
  CHECK(verdict("x!(y!(0))", "<x>(0)") == Verdict::Fails);
  CHECK(verdict("x!(0, 0)", "<x>(0, true)") == Verdict::Holds);
  CHECK(verdict("x!(0, 0)", "<x>(0)") == Verdict::Fails);
  CHECK(verdict("*x", "drop(x)") == Verdict::Holds);
  CHECK(verdict("*x", "drop(y)") == Verdict::Fails);
  CHECK(verdict("x?(y) => y!(0)", "<x ? b> <b>(0)") == Verdict::Holds);
  CHECK(verdict("x?(y) => w!(0)", "<x ? b> <b>(0)") == Verdict::Fails);
  CHECK(verdict("x?(y) => 0", "<y ? b> true") == Verdict::Fails);
}

TEST_CASE("quantification") {
  CHECK(verdict("x?(y) => 0", "forall n. <n ? b> true") == Verdict::Fails);
  CHECK(verdict("x?(y) => 0", "forall n : @{x}. <n ? b> true") == Verdict::Holds);
  CHECK(verdict("x!(0) | y!(0)", "forall n : @[ ={ \"x\" } ]. true | <n>(0)") == Verdict::Holds);
}

TEST_CASE("rely-guarantee over an environment suite") {
  CheckContext ctx;
  ctx.env_suite = {stop(), parse_proc("slot!(0)"), parse_proc("u!(0)")};
  Formula no_u = fml::neg(fml::reception(fml::name(u), "b", fml::truth()));
  Formula f = fml::rely_guarantee(fml::truth(), {}, no_u);
  CHECK(verdict(parse_proc("u?(a) => 0"), f, ctx) == Verdict::Fails);
  CHECK(verdict(parse_proc("slot?(a) => 0"), f, ctx) == Verdict::Holds);
  // Hiding slot makes p's input on it unobservable.
  Formula no_slot = fml::neg(fml::reception(fml::name(slot), "b", fml::truth()));
  CHECK(verdict(parse_proc("slot?(a) => 0"), fml::rely_guarantee(fml::truth(), {}, no_slot), ctx) ==
        Verdict::Fails);
  CHECK(verdict(parse_proc("slot?(a) => 0"), fml::rely_guarantee(fml::truth(), {slot}, no_slot), ctx) ==
        Verdict::Holds);
}

TEST_CASE("formula text round-trips") {
  const char* texts[] = {"rec X. <slot ? b> X & ~<~slot ? b> X",
                         "rec X. ~<slot ? b> X",
                         "true | 0",
                         "<x>(0, true) => drop(y)",
                         "forall n : @[ ={ x!(0) } ]. <n ? b> <b>()",
                         "true |> {slot} ~0",
                         "~(0 | true) or true"};
  for (const char* t : texts) {
    CAPTURE(t);
    Formula f = parse_formula(t);
    std::string printed = to_string(f);
    CHECK(to_string(parse_formula(printed)) == printed);
  }
  CHECK(to_string(parse_formula("rec X. ~<slot ? b> X")) == to_string(no_access(slot)));
  CHECK(to_string(parse_formula("rec X. <slot ? b> X & ~<~slot ? b> X")) ==
        to_string(sole_access(slot)));
}

TEST_CASE("formula syntax errors are located") {
  try {
    parse_formula("rec X.\n  <x ? b> Y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 2);
  }
  CHECK_THROWS_AS(parse_formula("<x ? b"), ParseError);
  CHECK_THROWS_AS(parse_formula("@{ x!( }"), ParseError);
}

TEST_CASE("monotonicity and output-blindness classification") {
  CHECK_FALSE(is_monotone(sole_access(slot)));
  CHECK(is_monotone(parse_formula("rec X. <x ? b> X")));
  CHECK(is_output_blind(no_access(slot)));
  CHECK_FALSE(is_output_blind(parse_formula("rec X. <x>(true) & X")));
}

TEST_CASE("tiny bounds never produce unsupported verdicts") {
  CheckContext ctx;
  ctx.depth = 1;
  ctx.max_states = 2;
  Proc p = parse_proc("import Cell\nCell(slot, s)");
  CheckResult r = check(p, sole_access(slot), ctx);
  CHECK(r.verdict != Verdict::Fails);
  CheckResult q = check(p, no_access(slot), ctx);
  CHECK(q.verdict != Verdict::Holds);
}

TEST_CASE("property: verdicts are invariant under congruence") {
  oracle::Gen gen(51, {.max_size = 7});
  oracle::FormulaGen fgen(52, {.max_depth = 3, .separation = true});
  for (int i = 0; i < 60; ++i) {
    Proc p = gen.system();
    std::vector<Proc> comps;
    oracle::flatten(p, comps);
    std::reverse(comps.begin(), comps.end());
    comps.push_back(stop());
    Proc q = par(comps);
    for (int j = 0; j < 5; ++j) {
      Formula f = fgen.formula();
      CAPTURE(to_string(f));
      CHECK(verdict(p, f) == verdict(q, f));
    }
  }
}

TEST_CASE("property: implication sugar and separation unit") {
  oracle::Gen gen(53, {.max_size = 7});
  oracle::FormulaGen fgen(54, {.max_depth = 2});
  for (int i = 0; i < 60; ++i) {
    Proc p = gen.system();
    Formula a = fgen.formula(), b = fgen.formula();
    CAPTURE(to_string(a));
    CAPTURE(to_string(b));
    CHECK(verdict(p, fml::implies(a, b)) == verdict(p, fml::neg(fml::conj(a, fml::neg(b)))));
    CHECK(verdict(p, fml::sep(a, fml::null())) == verdict(p, a));
  }
}

TEST_CASE("property: a fixpoint agrees with its unfolding") {
  oracle::Gen gen(55, {.max_size = 8});
  using Body = std::function<Formula(Formula)>;
  std::vector<Body> bodies = {
      [](Formula X) { return fml::neg(fml::reception(fml::name(x), "b", fml::neg(X))); },
      [](Formula X) { return fml::reception(fml::name(x), "b", X); },
      [](Formula X) { return fml::conj(fml::neg(fml::dissemination(fml::name(u), {fml::truth()})), X); },
      [](Formula X) {
        return fml::disj(fml::null(), fml::reception(fml::quote(fml::truth()), "b", X));
      },
  };
  for (int i = 0; i < 60; ++i) {
    Proc p = gen.system();
    for (const Body& body : bodies) {
      Formula rec = fml::gfp("X", body(fml::prop_var("X")));
      Formula unfolded = body(rec);
      CheckResult a = check(p, rec);
      if (a.bounds_hit) continue;
      CAPTURE(to_string(p));
      CHECK(a.verdict == check(p, unfolded).verdict);
    }
  }
}
