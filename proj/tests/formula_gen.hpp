#pragma once

// Random closed formulas. Rec variables occur only under an even number of
// negations, so generated fixpoints are monotone.

#include <random>
#include <string>
#include <vector>

#include "rhopol/logic.hpp"

namespace oracle {

using namespace rhopol;

struct FormulaGenOptions {
  std::size_t max_depth = 4;
  bool separation = false;
  std::vector<Name> names = {ident_name("x"), ident_name("y"), ident_name("z")};
};

class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, FormulaGenOptions opts = {}) : rng_(seed), opts_(std::move(opts)) {}

  Formula formula() {
    binders_.clear();
    recs_.clear();
    counter_ = 0;
    return gen(opts_.max_depth, true);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  NameFormula name() {
    if (!binders_.empty() && pick(3) == 0) return fml::var(binders_[pick(binders_.size())]);
    const Name& n = opts_.names[pick(opts_.names.size())];
    return pick(5) == 0 ? fml::complement(n) : fml::name(n);
  }

  Formula gen(std::size_t depth, bool positive) {
    std::vector<std::string> usable;
    for (const auto& [var, pos] : recs_) {
      if (pos == positive) usable.push_back(var);
    }
    if (depth == 0) {
      if (!usable.empty() && pick(2) == 0) return fml::prop_var(usable[pick(usable.size())]);
      switch (pick(3)) {
        case 0: return fml::truth();
        case 1: return fml::null();
        default: return fml::disclosure(name());
      }
    }
    std::size_t choices = opts_.separation ? 9 : 8;
    switch (pick(choices)) {
      case 0: return fml::truth();
      case 1: return fml::null();
      case 2: return fml::neg(gen(depth - 1, !positive));
      case 3: return fml::conj(gen(depth - 1, positive), gen(depth - 1, positive));
      case 4: {
        std::vector<Formula> args;
        std::size_t arity = pick(2);
        for (std::size_t i = 0; i < arity; ++i) args.push_back(gen(depth - 1, positive));
        return fml::dissemination(name(), std::move(args));
      }
      case 5: {
        NameFormula a = name();
        std::string b = "b" + std::to_string(counter_++);
        binders_.push_back(b);
        Formula body = gen(depth - 1, positive);
        binders_.pop_back();
        return fml::reception(a, b, body);
      }
      case 6: {
        std::string x = "X" + std::to_string(counter_++);
        recs_.emplace_back(x, positive);
        Formula body = gen(depth - 1, positive);
        recs_.pop_back();
        return fml::gfp(x, body);
      }
      case 7:
        if (!usable.empty()) return fml::prop_var(usable[pick(usable.size())]);
        return fml::disclosure(name());
      default:
        return fml::sep(gen(depth - 1, positive), gen(depth - 1, positive));
    }
  }

  std::mt19937_64 rng_;
  FormulaGenOptions opts_;
  std::vector<std::string> binders_;
  std::vector<std::pair<std::string, bool>> recs_;
  int counter_ = 0;
};

}  // namespace oracle
