#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rhopol/bisim.hpp"
#include "rhopol/logic.hpp"
#include "rhopol/ocapjs.hpp"
#include "rhopol/reduction.hpp"
#include "rhopol/sugar.hpp"

using nlohmann::json;
using namespace rhopol;

namespace {

constexpr const char* kSchema = "rhopol/1";

// Exit codes beyond the three verdicts.
enum Exit : int {
  kUsage = 64,     // bad flags or flag values
  kDataErr = 65,   // input text does not parse or scope-check
  kNoInput = 66,   // input file missing or unreadable
  kCantCreate = 73,
  kInternal = 70,
};

struct CliError {
  int code;
  std::string message;
};

struct Input {
  std::string path;
  std::string text;
};

Input read_input(const std::string& path) {
  Input in{path, {}};
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw CliError{kNoInput, path + ": cannot open file"};
    ss << f.rdbuf();
  }
  in.text = ss.str();
  return in;
}

// Runs f, prefixing located errors with the input path.
template <class F>
auto located(const Input& in, F&& f) {
  try {
    return f();
  } catch (const LocatedError& e) {
    throw CliError{kDataErr, in.path + ":" + e.what()};
  }
}

Proc load_proc(const std::string& path) {
  Input in = read_input(path);
  return located(in, [&] { return parse_proc(in.text); });
}

Formula load_formula(const std::string& path) {
  Input in = read_input(path);
  return located(in, [&] { return parse_formula(in.text); });
}

// Splits on commas outside braces.
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  std::vector<std::string> trimmed;
  for (auto& item : out) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    trimmed.push_back(item.substr(b, e - b + 1));
  }
  return trimmed;
}

// Identifiers, or `@{ P }` for the quote of a surface process.
std::vector<Name> parse_names(const std::string& flag, const std::string& list) {
  std::vector<Name> out;
  for (const auto& item : split_list(list)) {
    if (item.size() >= 3 && item[0] == '@' && item[1] == '{' && item.back() == '}') {
      Input in{flag, item.substr(2, item.size() - 3)};
      out.push_back(Name::quote(located(in, [&] { return parse_proc(in.text); })));
      continue;
    }
    bool ok = !item.empty() && (std::isalpha(static_cast<unsigned char>(item[0])) || item[0] == '_');
    for (char c : item) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ok) throw CliError{kUsage, flag + ": invalid name '" + item + "'"};
    out.push_back(ident_name(item));
  }
  return out;
}

// Environment suite files hold processes separated by lines of `---`.
std::vector<Proc> load_suite(const std::string& path) {
  Input in = read_input(path);
  std::vector<Proc> out;
  std::istringstream lines(in.text);
  std::string line, chunk;
  int chunk_start = 1, lineno = 0;
  auto flush = [&] {
    if (chunk.find_first_not_of(" \t\r\n") != std::string::npos) {
      try {
        out.push_back(parse_proc(chunk));
      } catch (const LocatedError& e) {
        throw CliError{kDataErr, in.path + ":" + std::to_string(e.pos().line + chunk_start - 1) +
                                     ":" + std::to_string(e.pos().column) + ": " + e.detail()};
      }
    }
    chunk.clear();
    chunk_start = lineno + 1;
  };
  while (std::getline(lines, line)) {
    ++lineno;
    if (line == "---") {
      flush();
    } else {
      chunk += line + "\n";
    }
  }
  flush();
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("RHOPOL_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw CliError{kUsage, std::string("RHOPOL_SEED: not an unsigned integer: '") + env + "'"};
  }
}

json names_json(const std::vector<Name>& names) {
  json arr = json::array();
  for (const auto& n : names) arr.push_back(to_string(n));
  return arr;
}

std::string names_text(const std::vector<Name>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + to_string(n);
  return "{" + s + "}";
}

struct Options {
  std::string format = "text";
  std::string proc, formula, left, right, input, output, universe, names, env_suite;
  std::string k = "k", cell = "Cell", env_ids;
  std::optional<std::uint64_t> seed;
  std::size_t max_steps = 100;
  std::size_t depth = 16;
  std::size_t max_states = 20000;
};

bool structured(const Options& o) { return o.format == "jsonl"; }

int cmd_parse(const Options& o) {
  Proc p = load_proc(o.proc);
  CanonicalForm c = canonicalize(p);
  if (structured(o)) {
    std::cout << json{{"schema", kSchema}, {"kind", "canonical"}}.dump() << "\n";
    std::cout << json{{"canonical", to_string(c)}, {"size", c.proc().size()}}.dump() << "\n";
  } else {
    std::cout << to_string(c) << "\n";
  }
  return 0;
}

int cmd_run(const Options& o) {
  Proc p = load_proc(o.proc);
  std::uint64_t seed = o.seed ? *o.seed : default_seed();
  Trace t = run(p, seed, o.max_steps);
  std::cout << (structured(o) ? trace_to_jsonl(t) : trace_to_text(t));
  return 0;
}

int cmd_reduce(const Options& o) {
  Proc p = load_proc(o.proc);
  StateGraph g = explore(p, o.depth, o.max_states);
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return compare(g.states[a].proc(), g.states[b].proc()) < 0; });
  std::size_t terminal = 0;
  for (std::size_t i = 0; i < g.size(); ++i) terminal += !g.frontier[i] && g.succ[i].empty();
  if (structured(o)) {
    std::cout << json{{"schema", kSchema}, {"kind", "reachable"}, {"states", g.size()},
                      {"terminal", terminal}, {"depth", o.depth}, {"truncated", g.truncated}}
                     .dump()
              << "\n";
    for (std::size_t i : order) {
      std::cout << json{{"state", to_string(g.states[i])},
                        {"depth", g.depth[i]},
                        {"successors", g.succ[i].size()},
                        {"terminal", !g.frontier[i] && g.succ[i].empty()},
                        {"frontier", static_cast<bool>(g.frontier[i])}}
                       .dump()
                << "\n";
    }
  } else {
    std::cout << "states: " << g.size() << "\nterminal: " << terminal
              << "\ntruncated: " << (g.truncated ? "true" : "false") << "\n";
    for (std::size_t i : order) {
      bool term = !g.frontier[i] && g.succ[i].empty();
      std::cout << (term ? "  [terminal] " : g.frontier[i] ? "  [frontier] " : "  ")
                << to_string(g.states[i]) << "\n";
    }
  }
  return 0;
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Holds: return 0;
    case Verdict::Fails: return 1;
    case Verdict::Unknown: return 2;
  }
  return kInternal;
}

int cmd_check(const Options& o) {
  Proc p = load_proc(o.proc);
  Formula f = load_formula(o.formula);
  CheckContext ctx;
  ctx.depth = o.depth;
  ctx.max_states = o.max_states;
  if (!o.env_suite.empty()) ctx.env_suite = load_suite(o.env_suite);
  ctx.universe = o.universe.empty() ? default_universe(p, f, ctx.env_suite)
                                    : parse_names("--universe", o.universe);
  CheckResult r = check(p, f, ctx);
  if (structured(o)) {
    std::cout << json{{"schema", kSchema}, {"kind", "check"}}.dump() << "\n";
    json rec = {{"verdict", to_string(r.verdict)},
                {"reason", r.reason},
                {"bounds_hit", r.bounds_hit},
                {"depth", o.depth},
                {"formula", to_string(f)},
                {"universe", names_json(ctx.universe)}};
    rec["witness"] = r.witness ? json(to_string(*r.witness)) : json(nullptr);
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << "verdict: " << to_string(r.verdict) << "\nformula: " << to_string(f)
              << "\nuniverse: " << names_text(ctx.universe) << "\ndepth: " << o.depth
              << "\nbounds hit: " << (r.bounds_hit ? "true" : "false") << "\n";
    if (!r.reason.empty()) std::cout << "reason: " << r.reason << "\n";
    if (r.witness) std::cout << "witness: " << to_string(*r.witness) << "\n";
  }
  return verdict_code(r.verdict);
}

int cmd_bisim(const Options& o) {
  Proc p = load_proc(o.left);
  Proc q = load_proc(o.right);
  Observable n = o.names.empty() ? default_observable(p, q) : parse_names("--names", o.names);
  BisimResult r = bisim(p, q, n, o.depth, o.max_states);
  int code = r.verdict == BisimVerdict::Equivalent ? 0 : r.verdict == BisimVerdict::Distinguished ? 1 : 2;
  if (structured(o)) {
    std::cout << json{{"schema", kSchema}, {"kind", "bisim"}}.dump() << "\n";
    json rec = {{"verdict", to_string(r.verdict)}, {"depth_checked", r.depth_checked},
                {"states", r.states},              {"truncated", r.truncated},
                {"names", names_json(n)}};
    if (r.distinguishing) {
      const Distinction& d = *r.distinguishing;
      json w = {{"clause", d.clause == Distinction::Clause::Barb ? "barb" : "reduction"},
                {"side", d.left_moves ? "left" : "right"},
                {"description", d.describe()}};
      if (d.barb) w["barb"] = to_string(*d.barb);
      if (d.redex) w["channel"] = to_string(d.redex->channel);
      if (d.result) w["result"] = to_string(*d.result);
      rec["witness"] = w;
    } else {
      rec["witness"] = nullptr;
    }
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << "verdict: " << to_string(r.verdict) << "\nnames: " << names_text(n)
              << "\ndepth checked: " << r.depth_checked << "\nstates: " << r.states
              << "\ntruncated: " << (r.truncated ? "true" : "false") << "\n";
    if (r.distinguishing) std::cout << "witness: " << r.distinguishing->describe() << "\n";
  }
  return code;
}

int cmd_translate(const Options& o) {
  Input in = read_input(o.input);
  JsProgram prog = located(in, [&] { return parse_js(in.text); });
  JsEnv env;
  env.k = o.k;
  env.cell = o.cell;
  std::vector<std::string> ids =
      o.env_ids.empty() ? free_identifiers(prog) : split_list(o.env_ids);
  for (const auto& id : ids) env.channels[id] = id;
  SurfaceProgram s = located(in, [&] { return translate(prog, env); });
  std::string text = print_surface(s) + "\n";
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out) throw CliError{kCantCreate, o.output + ": cannot write file"};
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rhopol: rho-calculus interpreter, namespace-logic checker and bisimulation tool"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "jsonl"}))
        ->capture_default_str();
  };
  auto add_bounds = [&](CLI::App* sub, std::size_t depth) {
    o.depth = depth;
    sub->add_option("--depth", o.depth, "Exploration depth bound")->capture_default_str();
    sub->add_option("--max-states", o.max_states, "State count bound")->capture_default_str();
  };

  auto* parse = app.add_subcommand("parse", "Print the canonical form of a process");
  parse->add_option("--proc,proc", o.proc, "Surface process file ('-' for stdin)")->required();
  add_format(parse);

  auto* run_cmd = app.add_subcommand("run", "Execute one scheduled trace");
  run_cmd->add_option("--proc,proc", o.proc, "Surface process file")->required();
  run_cmd->add_option("--seed", o.seed, "Scheduler seed (default: RHOPOL_SEED, else 0)");
  run_cmd->add_option("--max-steps", o.max_steps, "Step bound")->capture_default_str();
  add_format(run_cmd);

  auto* reduce = app.add_subcommand("reduce", "Summarize the bounded reachable state set");
  reduce->add_option("--proc,proc", o.proc, "Surface process file")->required();
  add_bounds(reduce, 16);
  add_format(reduce);

  auto* check_cmd = app.add_subcommand("check", "Model-check a formula (exit 0 Holds, 1 Fails, 2 Unknown)");
  check_cmd->add_option("--proc", o.proc, "Surface process file")->required();
  check_cmd->add_option("--formula", o.formula, "Formula file")->required();
  check_cmd->add_option("--universe", o.universe, "Comma-separated instantiation names");
  check_cmd->add_option("--env-suite", o.env_suite, "Environment processes separated by '---' lines");
  add_bounds(check_cmd, 16);
  add_format(check_cmd);

  auto* bisim_cmd = app.add_subcommand("bisim", "Bounded weak barbed bisimilarity (exit 0 Equivalent, 1 Distinguished, 2 Unknown)");
  bisim_cmd->add_option("--left", o.left, "Surface process file")->required();
  bisim_cmd->add_option("--right", o.right, "Surface process file")->required();
  bisim_cmd->add_option("--names", o.names, "Comma-separated observable names");
  add_bounds(bisim_cmd, 16);
  add_format(bisim_cmd);

  auto* tr = app.add_subcommand("translate", "Translate a JavaScript-subset file to surface syntax");
  tr->add_option("--input,input", o.input, "JavaScript file")->required();
  tr->add_option("-o,--output", o.output, "Output .rho file (default stdout)");
  tr->add_option("--k", o.k, "Completion channel")->capture_default_str();
  tr->add_option("--cell", o.cell, "Cell gadget")
      ->check(CLI::IsMember({"Cell", "SafeCell", "AckCell"}))
      ->capture_default_str();
  tr->add_option("--env", o.env_ids, "Comma-separated free identifiers (default: all read before declaration)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*parse) return cmd_parse(o);
    if (*run_cmd) return cmd_run(o);
    if (*reduce) return cmd_reduce(o);
    if (*check_cmd) return cmd_check(o);
    if (*bisim_cmd) return cmd_bisim(o);
    if (*tr) return cmd_translate(o);
  } catch (const CliError& e) {
    std::cerr << "rhopol: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "rhopol: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
