#pragma once

// Namespace logic: formulas over processes and names, a bounded
// three-valued checker, and the access-policy presets.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhopol/syntax.hpp"

namespace rhopol {

struct FormulaNode;
struct NameFormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;
using NameFormula = std::shared_ptr<const NameFormulaNode>;

enum class FormulaKind {
  True,
  Null,
  Not,
  And,
  Sep,
  Disclosure,     // drop(b)
  Dissemination,  // <a>(f1, ..., fn)
  Reception,      // <a ? b> f
  Gfp,            // rec X. f
  Forall,         // forall n : a . f
  RelyGuarantee,  // f |> {x1, ..., xn} g
  PropVar,
  Congruent,      // ={ P }: structurally congruent to P
};

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  std::vector<Formula> kids;   // operands, message args, bodies
  NameFormula name;            // Disclosure, Dissemination, Reception, Forall domain
  std::string var;             // Reception binder, Gfp/PropVar, Forall variable
  std::vector<Name> hidden;    // RelyGuarantee
  std::optional<Proc> proc;    // Congruent
};

enum class NameFormulaKind {
  Quote,      // @[ f ]: names whose process satisfies f
  QuoteProc,  // @{ P }: names equivalent to @P
  Var,
};

struct NameFormulaNode {
  NameFormulaKind kind = NameFormulaKind::QuoteProc;
  Formula formula;
  std::optional<Proc> proc;
  std::string var;
};

namespace fml {

Formula truth();
Formula null();
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula sep(Formula a, Formula b);
Formula disclosure(NameFormula b);
Formula dissemination(NameFormula a, std::vector<Formula> args);
Formula reception(NameFormula a, std::string binder, Formula body);
Formula gfp(std::string var, Formula body);
Formula forall(std::string var, NameFormula domain, Formula body);
Formula rely_guarantee(Formula hyp, std::vector<Name> hidden, Formula concl);
Formula prop_var(std::string var);
Formula congruent(Proc p);
Formula implies(Formula a, Formula b);  // ~(a & ~b)
Formula disj(Formula a, Formula b);     // ~(~a & ~b)

NameFormula quote(Formula f);
NameFormula quote_proc(Proc p);
NameFormula name(const Name& n);        // @{ process of n }
NameFormula complement(const Name& n);  // @[ ~={ process of n } ]
NameFormula var(std::string v);

}  // namespace fml

// Throws ParseError with line/column.
Formula parse_formula(std::string_view source);
std::string to_string(const Formula& f);
std::string to_string(const NameFormula& a);

// rec X. <slot ? b> X & ~<~slot ? b> X
Formula sole_access(const Name& slot);
// rec X. ~<slot ? b> X
Formula no_access(const Name& slot);
// rec X. <a ? b> X & ~<@[~f] ? b> X where a = @[f]
Formula firewall(const NameFormula& ns);

// Every occurrence of every rec variable is under an even number of
// negations (the rely hypothesis counts as a negation).
bool is_monotone(const Formula& f);
// No clause inspects outputs, drops or the spatial shape of the process.
bool is_output_blind(const Formula& f);

enum class Verdict { Holds, Fails, Unknown };
std::string to_string(Verdict v);

struct CheckContext {
  // Instantiation domain for receptions and quantifiers. Empty selects
  // default_universe().
  std::vector<Name> universe;
  bool universe_complete = true;
  std::size_t depth = 16;
  std::size_t max_states = 20000;
  std::vector<Proc> env_suite;
  std::map<std::string, std::vector<CanonicalForm>> valuation;
};

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::optional<CanonicalForm> witness;
  bool bounds_hit = false;
};

// Public free names of p and the environment suite, the names the formula
// mentions, and two observer names.
std::vector<Name> default_universe(const Proc& p, const Formula& f,
                                   const std::vector<Proc>& env_suite = {});

CheckResult check(const Proc& p, const Formula& f, const CheckContext& ctx = {});

// Universe names denoted by a closed name formula.
std::vector<Name> name_denotation(const NameFormula& a, const CheckContext& ctx);

// Top-level outputs that no input reachable from p (or from the quoted
// processes of `extra`) could ever consume, removed.
CanonicalForm prune_inert(const CanonicalForm& p, const std::vector<Name>& extra);

}  // namespace rhopol
