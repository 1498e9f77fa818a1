#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rhopol/sugar.hpp"
#include "rhopol/surface.hpp"
#include "support.hpp"

using namespace rhopol;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kCorpus = std::filesystem::path(RHOPOL_SOURCE_DIR) / "corpus";

}  // namespace

TEST_CASE("surface printing round-trips every corpus process") {
  for (const auto& entry : std::filesystem::directory_iterator(kCorpus)) {
    if (entry.path().extension() != ".rho") continue;
    CAPTURE(entry.path().filename().string());
    std::string src = slurp(entry.path());
    SurfaceProgram s = parse_surface(src);
    std::string printed = print_surface(s);
    SurfaceProgram again = parse_surface(printed);
    CHECK(print_surface(again) == printed);
    CHECK(struct_congruent(desugar(s), desugar(again)));
  }
}

TEST_CASE("surface printing round-trips every prelude definition") {
  for (const auto& name : prelude_names()) {
    CAPTURE(name);
    SurfaceProgram s = parse_surface(*prelude_source(name));
    std::string printed = print_surface(s);
    CHECK(print_surface(parse_surface(printed)) == printed);
  }
}

TEST_CASE("statements separated by newlines or bars are the same composition") {
  CHECK(struct_congruent(parse_proc("{ x!(0)\n y!(0) }"), parse_proc("x!(0) | y!(0)")));
  CHECK(struct_congruent(parse_proc("x!(0)\ny!(0)\n"), parse_proc("y!(0) | x!(0)")));
}

TEST_CASE("ground literals") {
  CHECK(parse_proc("+0").kind() == Kind::Int);
  CHECK(parse_proc("0").kind() == Kind::Stop);
  CHECK(parse_proc("\"hi\"").kind() == Kind::Str);
  CHECK(parse_proc("undefined").kind() == Kind::Undefined);
  Proc sum = parse_proc("x!(1 + 2)");
  REQUIRE(sum.kind() == Kind::Output);
  CHECK(sum.args()[0].kind() == Kind::Arith);
  CHECK(eval_ground(sum.args()[0]).int_value() == 3);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_surface("x!(0)\ny?(a => 0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.pos().column > 1);
  }
  CHECK_THROWS_AS(parse_surface("x!(\"#fresh\")"), ParseError);
  CHECK_THROWS_AS(parse_surface("{ x!(0)"), ParseError);
}

TEST_CASE("property: printed generated processes parse back") {
  oracle::Gen gen(21);
  for (int i = 0; i < 200; ++i) {
    Proc p = gen.proc();
    std::string text = to_string(p);
    CHECK_MESSAGE(struct_congruent(parse_proc(text), p), text);
  }
}
