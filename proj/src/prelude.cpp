#include <string>

#include "rhopol/sugar.hpp"

namespace rhopol {

namespace {

// As originally listed: the get branch re-invokes Cell with `s`, which is not
// bound there, so the continuation cell holds the free name s.
constexpr const char* kCell = R"(def Cell(slot, state) => {
  new(v) {
    v!(state)
    match {
      slot ? get(ret) => {
        v?(s) => ret!(s)
        Cell(slot, s)
      }
      slot ? set(s) => { Cell(slot, s) }
    }
  }
}
)";

// Repaired variant: get restores the value it read, set discards the old one.
constexpr const char* kSafeCell = R"(def SafeCell(slot, state) => {
  new(v) {
    v!(state)
    match {
      slot ? get(ret) => {
        v?(s) => { ret!(s) | SafeCell(slot, s) }
      }
      slot ? set(s) => {
        v?(old) => SafeCell(slot, s)
      }
    }
  }
}
)";

// SafeCell whose set acknowledges on a caller-supplied channel once the new
// state is installed.
constexpr const char* kAckCell = R"(def AckCell(slot, state) => {
  new(v) {
    v!(state)
    match {
      slot ? get(ret) => {
        v?(s) => { ret!(s) | AckCell(slot, s) }
      }
      slot ? set(s, ack) => {
        v?(old) => { ack!() | AckCell(slot, s) }
      }
    }
  }
}
)";

constexpr int kMaxMapArity = 4;

std::string map_source(int n) {
  std::string name = "Map" + std::to_string(n);
  std::string params = "chan";
  for (int i = 1; i <= n; ++i) {
    params += ", key" + std::to_string(i) + ", state" + std::to_string(i);
  }
  std::string vs;
  for (int i = 1; i <= n; ++i) vs += (i > 1 ? ", v" : "v") + std::to_string(i);

  std::string s = "def " + name + "(" + params + ") => {\n  new(" + vs + ") {\n";
  for (int i = 1; i <= n; ++i) {
    s += "    v" + std::to_string(i) + "!(state" + std::to_string(i) + ")\n";
  }
  for (int i = 1; i <= n; ++i) {
    std::string k = std::to_string(i);
    s += "    chan ? get(key" + k + ", ret) => {\n";
    s += "      v" + k + "?(x) => ret!(x)\n";
    s += "      " + name + "(" + params + ")\n";
    s += "    }\n";
  }
  s += "  }\n}\n";
  return s;
}

}  // namespace

std::optional<std::string> prelude_source(std::string_view name) {
  if (name == "Cell") return std::string(kCell);
  if (name == "SafeCell") return std::string(kSafeCell);
  if (name == "AckCell") return std::string(kAckCell);
  if (name.size() == 4 && name.substr(0, 3) == "Map") {
    int n = name[3] - '0';
    if (n >= 1 && n <= kMaxMapArity) return map_source(n);
  }
  return std::nullopt;
}

std::vector<std::string> prelude_names() {
  std::vector<std::string> out{"Cell", "SafeCell", "AckCell"};
  for (int i = 1; i <= kMaxMapArity; ++i) out.push_back("Map" + std::to_string(i));
  return out;
}

}  // namespace rhopol
