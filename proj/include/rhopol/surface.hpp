#pragma once

// Surface language: the core calculus plus `def`, `new`, `match`, message
// patterns, braces-and-newlines blocks and `import` of prelude gadgets.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhopol/error.hpp"
#include "rhopol/syntax.hpp"

namespace rhopol {

struct SurfaceNode;
using SurfaceProgram = std::shared_ptr<const SurfaceNode>;

struct SurfaceName {
  enum class Kind { Ident, Quote } kind = Kind::Ident;
  std::string ident;
  SurfaceProgram quoted;
  SourcePos pos;
};

struct SurfaceBinder {
  bool literal = false;  // `@P` in binder position
  std::string ident;
  SurfaceName name;
};

enum class SurfaceKind {
  Zero,
  Int,
  Str,
  Undefined,
  Ref,     // identifier in process position
  Drop,    // *x
  Input,   // x?(y, ...) => P, or x ? label(args) => P
  Output,  // x!(Q, ...), or x ! label(args)
  Par,     // top level statement list
  Block,   // { ... }
  Match,
  New,
  Def,
  Apply,
  Arith,
  Import,
};

struct SurfaceNode {
  SurfaceKind kind = SurfaceKind::Zero;
  SourcePos pos;
  SurfaceName chan;                   // Input, Output, Drop
  std::optional<std::string> label;   // message-pattern label
  std::vector<SurfaceBinder> binders; // Input
  std::vector<SurfaceProgram> kids;   // body, args, statements, branches
  std::string ident;                  // Ref, Def, Apply, Import
  std::vector<std::string> params;    // Def parameters, New binders
  std::int64_t ival = 0;
  std::string sval;
  ArithOp op = ArithOp::Add;
};

namespace surface {

SurfaceName name(std::string id);
SurfaceName quote(SurfaceProgram p);

SurfaceProgram zero();
SurfaceProgram int_lit(std::int64_t v);
SurfaceProgram str_lit(std::string s);
SurfaceProgram undefined_lit();
SurfaceProgram ref(std::string id);
SurfaceProgram drop(SurfaceName n);
SurfaceProgram input(SurfaceName chan, std::vector<std::string> binders, SurfaceProgram body);
SurfaceProgram pattern_input(SurfaceName chan, std::string label, std::vector<std::string> args,
                             SurfaceProgram body);
SurfaceProgram output(SurfaceName chan, std::vector<SurfaceProgram> args);
SurfaceProgram message(SurfaceName chan, std::string label, std::vector<SurfaceProgram> args);
SurfaceProgram par(std::vector<SurfaceProgram> statements);
SurfaceProgram block(std::vector<SurfaceProgram> statements);
SurfaceProgram match(std::vector<SurfaceProgram> branches);
SurfaceProgram new_(std::vector<std::string> names, SurfaceProgram body);
SurfaceProgram def(std::string name, std::vector<std::string> params, SurfaceProgram body);
SurfaceProgram apply(std::string name, std::vector<SurfaceProgram> args);
SurfaceProgram arith(ArithOp op, SurfaceProgram lhs, SurfaceProgram rhs);
SurfaceProgram import(std::string name);

}  // namespace surface

// Throws ParseError with line/column.
SurfaceProgram parse_surface(std::string_view source);

// Multi-line rendering in the same grammar parse_surface accepts.
std::string print_surface(const SurfaceProgram& p);

}  // namespace rhopol
