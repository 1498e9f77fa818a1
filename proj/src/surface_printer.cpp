#include <sstream>
#include <string>

#include "rhopol/surface.hpp"

namespace rhopol {

namespace {

class SurfacePrinter {
 public:
  std::string run(const SurfaceProgram& p) {
    if (p->kind == SurfaceKind::Par) {
      for (const auto& s : p->kids) {
        line(0);
        stmt(s, 0);
      }
    } else {
      line(0);
      stmt(p, 0);
    }
    std::string s = out_.str();
    if (!s.empty() && s.front() == '\n') s.erase(0, 1);
    return s + "\n";
  }

 private:
  std::ostringstream out_;

  void line(int indent) { out_ << '\n' << std::string(static_cast<std::size_t>(indent) * 2, ' '); }

  static std::string quote_str(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
      switch (c) {
        case '"': r += "\\\""; break;
        case '\\': r += "\\\\"; break;
        case '\n': r += "\\n"; break;
        case '\t': r += "\\t"; break;
        default: r += c;
      }
    }
    return r + "\"";
  }

  void name(const SurfaceName& n, int indent) {
    if (n.kind == SurfaceName::Kind::Ident) {
      out_ << n.ident;
      return;
    }
    out_ << '@';
    const auto& q = n.quoted;
    switch (q->kind) {
      case SurfaceKind::Ref:
        out_ << q->ident;
        return;
      case SurfaceKind::Int:
      case SurfaceKind::Str:
      case SurfaceKind::Undefined:
      case SurfaceKind::Block:
      case SurfaceKind::Drop:
        expr(q, indent);
        return;
      case SurfaceKind::Zero:
        out_ << "0";
        return;
      default:
        out_ << "{ ";
        expr(q, indent);
        out_ << " }";
    }
  }

  void block_body(const std::vector<SurfaceProgram>& kids, int indent) {
    out_ << '{';
    for (const auto& k : kids) {
      line(indent + 1);
      stmt(k, indent + 1);
    }
    line(indent);
    out_ << '}';
  }

  void stmt(const SurfaceProgram& p, int indent) {
    switch (p->kind) {
      case SurfaceKind::Def:
        out_ << "def " << p->ident << '(';
        for (std::size_t i = 0; i < p->params.size(); ++i) out_ << (i ? ", " : "") << p->params[i];
        out_ << ") => ";
        prefix_body(p->kids.at(0), indent);
        return;
      case SurfaceKind::Import:
        out_ << "import " << p->ident;
        return;
      default:
        expr(p, indent);
    }
  }

  void args(const std::vector<SurfaceProgram>& xs, int indent) {
    out_ << '(';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ << ", ";
      expr(xs[i], indent);
    }
    out_ << ')';
  }

  // Operand of an arithmetic expression or a prefix body: wrap anything
  // that would otherwise extend past its slot.
  void operand(const SurfaceProgram& p, int indent) {
    if (p->kind == SurfaceKind::Arith || p->kind == SurfaceKind::Input) {
      out_ << '(';
      expr(p, indent);
      out_ << ')';
    } else {
      expr(p, indent);
    }
  }

  void prefix_body(const SurfaceProgram& p, int indent) {
    if (p->kind == SurfaceKind::Arith) {
      out_ << '(';
      expr(p, indent);
      out_ << ')';
    } else {
      expr(p, indent);
    }
  }

  void expr(const SurfaceProgram& p, int indent) {
    switch (p->kind) {
      case SurfaceKind::Zero: out_ << '0'; return;
      case SurfaceKind::Int:
        if (p->ival == 0) out_ << "+0";
        else out_ << p->ival;
        return;
      case SurfaceKind::Str: out_ << quote_str(p->sval); return;
      case SurfaceKind::Undefined: out_ << "undefined"; return;
      case SurfaceKind::Ref: out_ << p->ident; return;
      case SurfaceKind::Drop:
        out_ << '*';
        name(p->chan, indent);
        return;
      case SurfaceKind::Input: {
        name(p->chan, indent);
        out_ << (p->label ? " ? " + *p->label : std::string("?")) << '(';
        for (std::size_t i = 0; i < p->binders.size(); ++i) {
          if (i) out_ << ", ";
          const auto& b = p->binders[i];
          if (b.literal) name(b.name, indent);
          else out_ << b.ident;
        }
        out_ << ") => ";
        prefix_body(p->kids.at(0), indent);
        return;
      }
      case SurfaceKind::Output:
        name(p->chan, indent);
        out_ << (p->label ? " ! " + *p->label : std::string("!"));
        args(p->kids, indent);
        return;
      case SurfaceKind::Par:
      case SurfaceKind::Block:
        if (p->kids.empty()) {
          out_ << "{}";
          return;
        }
        block_body(p->kids, indent);
        return;
      case SurfaceKind::Match:
        out_ << "match ";
        block_body(p->kids, indent);
        return;
      case SurfaceKind::New:
        out_ << "new(";
        for (std::size_t i = 0; i < p->params.size(); ++i) out_ << (i ? ", " : "") << p->params[i];
        out_ << ") ";
        prefix_body(p->kids.at(0), indent);
        return;
      case SurfaceKind::Apply:
        out_ << p->ident;
        args(p->kids, indent);
        return;
      case SurfaceKind::Arith:
        operand(p->kids.at(0), indent);
        out_ << (p->op == ArithOp::Add ? " + " : " - ");
        operand(p->kids.at(1), indent);
        return;
      case SurfaceKind::Def:
      case SurfaceKind::Import:
        block_body({p}, indent);
        return;
    }
  }
};

}  // namespace

std::string print_surface(const SurfaceProgram& p) { return SurfacePrinter().run(p); }

}  // namespace rhopol
