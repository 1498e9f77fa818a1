#pragma once

// Desugaring of surface programs into core processes, plus the replication
// and fresh-name gadgets the desugaring relies on.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhopol/surface.hpp"
#include "rhopol/syntax.hpp"

namespace rhopol {

struct DesugarOptions {
  // Mixed into every fresh name, so separately desugared programs composed
  // in parallel cannot capture each other's private names.
  std::string unit;
};

// Throws ScopeError (unknown definition, arity mismatch, duplicate
// definition, non-IO match branch) with the offending position.
Proc desugar(const SurfaceProgram& p, const DesugarOptions& opts = {});

// parse_surface followed by desugar.
Proc parse_proc(std::string_view source, const DesugarOptions& opts = {});

// D(x) = x?(y) => (x!(*y) | *y)
Proc duplicator(const Name& x);
// x!(D(x) | p) | D(x): p is re-spawned unboundedly.
Proc replicate_eager(const Proc& p, const Name& x);
// x!(u?(v) => (D(x) | q)) | D(x) for `guard` = u?(v) => q: a single copy of
// the guard is offered at a time, re-armed after it fires.
// Throws std::invalid_argument unless `guard` is an Input.
Proc replicate_lazy(const Proc& guard, const Name& x);

// @("#fresh"!(tag, k, scope...)): private names minted by `new` and `def`.
Name fresh_name(std::string_view tag, std::int64_t k, const std::vector<Name>& scope = {});
// First fresh_name(tag, k) for k = 0, 1, ... not equivalent to any name
// occurring in `avoid`.
Name fresh_name(std::string_view tag, const Proc& avoid);
bool is_private_name(const Name& n);
// @("#obs"!(k)): public names guaranteed distinct from every program name.
Name observer_name(std::int64_t k);

// Prelude definitions available through `import`.
std::optional<std::string> prelude_source(std::string_view name);
std::vector<std::string> prelude_names();

}  // namespace rhopol
