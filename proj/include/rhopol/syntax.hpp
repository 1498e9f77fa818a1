#pragma once

// Core abstract syntax of the rho-calculus.
//
// Processes are immutable, reference-counted trees. Binders are nameless:
// an occurrence of an input-bound name is Var(index, position), where index
// counts the input binders crossed between the occurrence and its binder
// (0 = innermost) and position selects the slot in that binder's tuple.
// Quoting does not bind, so variables may occur inside open quotes.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rhopol {

struct Node;
struct Binder;
class Name;

enum class Kind : std::uint8_t {
  Stop,
  Input,
  Output,
  Choice,
  Par,
  Drop,
  Int,
  Str,
  Undefined,
  Arith,
};

enum class ArithOp : std::uint8_t { Add, Sub };

class Proc {
 public:
  Proc();  // Stop

  Kind kind() const;
  std::uint64_t hash() const;
  std::size_t size() const;
  // Number of enclosing binders needed to close this term (0 = closed).
  std::uint32_t open_depth() const;
  bool is_canonical() const;

  const Node& node() const { return *node_; }
  bool same_node(const Proc& other) const { return node_ == other.node_; }

  // Accessors; each is only meaningful for the matching kind.
  const Name& channel() const;           // Input, Output
  const Name& dropped() const;           // Drop
  const std::vector<Binder>& binders() const;  // Input
  const Proc& body() const;              // Input
  const std::vector<Proc>& args() const;        // Output
  const std::vector<Proc>& components() const;  // Par, Choice
  std::int64_t int_value() const;        // Int
  const std::string& str_value() const;  // Str
  ArithOp arith_op() const;              // Arith
  const Proc& lhs() const;               // Arith
  const Proc& rhs() const;               // Arith

  bool is_io() const { return kind() == Kind::Input || kind() == Kind::Output; }
  bool is_ground() const;

  explicit Proc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

class Name {
 public:
  static Name quote(Proc p);
  static Name var(std::uint32_t index, std::uint32_t position);

  bool is_var() const { return is_var_; }
  bool is_closed() const;
  const Proc& process() const { return proc_; }
  std::uint32_t index() const { return index_; }
  std::uint32_t position() const { return position_; }
  std::uint64_t hash() const;
  std::uint32_t open_depth() const;

 private:
  Proc proc_;
  std::uint32_t index_ = 0;
  std::uint32_t position_ = 0;
  bool is_var_ = false;
};

// A binder slot of an input. Either binds a fresh variable or, for
// message patterns, requires the delivered name to be name-equivalent to
// `pattern`.
struct Binder {
  std::optional<Name> pattern;

  static Binder bind() { return Binder{}; }
  static Binder match(Name n) { return Binder{std::move(n)}; }
  bool is_pattern() const { return pattern.has_value(); }
};

struct Node {
  Kind kind = Kind::Stop;
  bool canonical = false;
  std::uint32_t open_depth = 0;
  std::uint64_t hash = 0;
  std::size_t size = 1;

  std::optional<Name> name;     // channel (Input/Output) or dropped name
  std::vector<Binder> binders;  // Input
  std::vector<Proc> kids;       // body / args / components / arith operands
  std::int64_t ival = 0;
  std::string sval;
  ArithOp op = ArithOp::Add;
};

// Constructors. None of them normalizes; see canonicalize().
Proc stop();
Proc input(Name chan, std::vector<Binder> binders, Proc body);
Proc input(Name chan, std::size_t arity, Proc body);
Proc output(Name chan, std::vector<Proc> args);
Proc choice(std::vector<Proc> branches);
Proc par(std::vector<Proc> components);
Proc par(Proc a, Proc b);
Proc drop(Name n);
Proc int_lit(std::int64_t v);
Proc str_lit(std::string s);
Proc undefined_lit();
Proc arith(ArithOp op, Proc lhs, Proc rhs);

// @"id": the name a free identifier denotes in surface programs.
Name ident_name(std::string_view id);

// Raw structural comparison (no normalization). Total, deterministic order.
int compare(const Proc& a, const Proc& b);
int compare(const Name& a, const Name& b);
bool identical(const Proc& a, const Proc& b);
bool identical(const Name& a, const Name& b);

struct ProcLess {
  bool operator()(const Proc& a, const Proc& b) const { return compare(a, b) < 0; }
};
struct NameLess {
  bool operator()(const Name& a, const Name& b) const { return compare(a, b) < 0; }
};

// Canonical form: Par flattened, sorted and free of Stop; singleton Par and
// Choice collapsed; quoted processes canonicalized; @*x collapsed to x.
class CanonicalForm {
 public:
  CanonicalForm() = default;
  const Proc& proc() const { return proc_; }
  std::uint64_t hash() const { return proc_.hash(); }

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
    return identical(a.proc_, b.proc_);
  }
  friend bool operator<(const CanonicalForm& a, const CanonicalForm& b) {
    return compare(a.proc_, b.proc_) < 0;
  }

 private:
  friend CanonicalForm canonicalize(const Proc& p);
  explicit CanonicalForm(Proc p) : proc_(std::move(p)) {}
  Proc proc_;
};

struct CanonicalHash {
  std::size_t operator()(const CanonicalForm& c) const { return c.hash(); }
};

CanonicalForm canonicalize(const Proc& p);
Name canonical_name(const Name& n);

bool struct_congruent(const Proc& p, const Proc& q);
bool name_equiv(const Name& x, const Name& y);

// Top-level parallel components of a canonical process (empty for Stop).
std::vector<Proc> top_components(const CanonicalForm& c);

// Sorted, deduplicated (modulo name equivalence) closed names.
std::vector<Name> free_names(const Proc& p);
// Every closed name occurring anywhere, including inside quotes.
std::vector<Name> all_names(const Proc& p);

// Semantic substitution of closed names. Keys must be pairwise
// non-equivalent; lookup is by name equivalence.
using NameSubst = std::vector<std::pair<Name, Name>>;
Proc substitute(const Proc& p, const NameSubst& subst);

// Replace the variables bound by the innermost binder (index 0) with the
// given closed names and drop that binder level. Drop of a replaced
// variable becomes the quoted process itself.
Proc instantiate(const Proc& body, const std::vector<Name>& values);

// Add `amount` to every variable index >= cutoff.
Proc shift(const Proc& p, std::uint32_t amount, std::uint32_t cutoff = 0);
Name shift(const Name& n, std::uint32_t amount, std::uint32_t cutoff = 0);

// Evaluate Add/Sub whose operands are (after evaluation) both integers.
Proc eval_ground(const Proc& p);

std::string to_string(const Proc& p);
std::string to_string(const Name& n);
std::string to_string(const CanonicalForm& c);

}  // namespace rhopol
