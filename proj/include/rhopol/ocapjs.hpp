#pragma once

// A small JavaScript subset (variable declarations, `+=`, object literals
// via def) and its continuation-passing translation onto Cell and Map.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhopol/error.hpp"
#include "rhopol/surface.hpp"

namespace rhopol {

struct JsExpr {
  enum class Kind { Num, Ident, Undefined, Add, Arrow, Object } kind = Kind::Num;
  SourcePos pos;
  std::int64_t num = 0;
  std::string ident;
  std::vector<JsExpr> kids;                              // Add operands
  std::vector<std::pair<std::string, JsExpr>> entries;   // Object
};

struct JsStmt {
  enum class Kind { VarDecl, PlusAssign, ExprStmt } kind = Kind::VarDecl;
  SourcePos pos;
  std::string target;           // VarDecl, PlusAssign
  std::optional<JsExpr> value;  // initializer, increment, expression
};

// A statement sequence; statement i is followed by statements i+1.. .
struct JsProgram {
  std::vector<JsStmt> statements;
};

// Throws ParseError, or UnsupportedConstruct naming the construct.
JsProgram parse_js(std::string_view source);

// Identifiers read before any declaration in the program.
std::vector<std::string> free_identifiers(const JsProgram& p);

struct JsEnv {
  // Source identifier -> surface channel identifier. Declarations add
  // identity entries for names not already mapped.
  std::map<std::string, std::string> channels;
  std::string k = "k";
  // Cell gadget used for variables: "Cell", "SafeCell", or "AckCell" (whose
  // acknowledged set orders a write before the following statement).
  std::string cell = "Cell";
};

// Throws ScopeError for identifiers neither in env nor declared earlier.
SurfaceProgram translate(const JsProgram& p, const JsEnv& env);

// The Cell and Map gadgets the translation imports.
std::vector<SurfaceProgram> prelude();

}  // namespace rhopol
