#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlower/circuit.hpp"

namespace qlower {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

namespace qasm_detail {

struct Cursor {
  const std::string& text;
  std::size_t pos{0};
  int line{1};
  int col{1};

  explicit Cursor(const std::string& t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
        while (!eof() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col, msg); }

  void expect(char c, const std::string& what) {
    skip_space_and_comments();
    if (eof() || peek() != c) fail("expected '" + std::string(1, c) + "' " + what);
    advance();
  }

  bool accept(char c) {
    skip_space_and_comments();
    if (!eof() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_space_and_comments();
    if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      fail("expected identifier");
    std::string s;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      s += advance();
    return s;
  }

  double number() {
    skip_space_and_comments();
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("expected number");
    std::size_t used = static_cast<std::size_t>(end - start);
    for (std::size_t i = 0; i < used; ++i) advance();
    return v;
  }

  std::uint64_t integer(const std::string& what) {
    skip_space_and_comments();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer " + what);
    std::uint64_t v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + static_cast<std::uint64_t>(advance() - '0');
    return v;
  }

  /// expr := ['-'] ( 'pi' ['/' NUM] | NUM ['*' 'pi' ['/' NUM]] )
  /// Evaluation order matches the emitter so round trips are bit-exact.
  double angle_expr() {
    skip_space_and_comments();
    bool neg = accept('-');
    skip_space_and_comments();
    double v;
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      std::string name = ident();
      if (name != "pi") fail("unknown constant '" + name + "'");
      v = PI;
      if (accept('/')) v = v / number();
    } else {
      v = number();
      if (accept('*')) {
        std::string name = ident();
        if (name != "pi") fail("expected 'pi' after '*'");
        v = v * PI;
        if (accept('/')) v = v / number();
      }
    }
    return neg ? -v : v;
  }
};

inline std::optional<GateKind> kind_from_name(const std::string& name) {
  static const std::map<std::string, GateKind> table = {
      {"x", GateKind::X},      {"y", GateKind::Y},         {"z", GateKind::Z},
      {"h", GateKind::H},      {"sx", GateKind::Sx},       {"rz", GateKind::Rz},
      {"rx", GateKind::Rx},    {"cx", GateKind::Cx},       {"cz", GateKind::Cz},
      {"swap", GateKind::Swap},{"acecr", GateKind::AceCr}, {"gr", GateKind::Gr},
      {"phxz", GateKind::PhXZ},{"delay", GateKind::Delay}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

/// Formats theta as a rational multiple of pi when the printed form parses
/// back to the identical double, else as a 17-significant-digit decimal.
inline std::string format_angle(double theta) {
  if (theta == 0.0) return "0";
  const bool neg = theta < 0;
  const double mag = std::abs(theta);
  for (int q = 1; q <= 64; ++q) {
    double pf = mag * q / PI;
    double pr = std::round(pf);
    if (pr < 1 || pr > 512 || std::abs(pf - pr) > 1e-9) continue;
    double candidate = (q == 1) ? pr * PI : (pr * PI) / q;
    if (candidate != mag) continue;
    std::string s = neg ? "-" : "";
    if (pr == 1)
      s += "pi";
    else
      s += std::to_string(static_cast<long long>(pr)) + "*pi";
    if (q != 1) s += "/" + std::to_string(q);
    return s;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", theta);
  return buf;
}

}  // namespace qasm_detail

/// Parses the .q2 circuit format: a `qreg q[N];` declaration followed by gate
/// statements. Errors carry line and column; no partial circuit is returned.
inline Circuit parse(const std::string& text) {
  using namespace qasm_detail;
  Cursor cur(text);

  cur.skip_space_and_comments();
  int l = cur.line, c = cur.col;
  std::string kw = cur.ident();
  if (kw != "qreg") throw ParseError(l, c, "expected 'qreg' declaration");
  std::string reg = cur.ident();
  if (reg != "q") cur.fail("register must be named 'q'");
  cur.expect('[', "after register name");
  std::uint64_t n = cur.integer("register size");
  cur.expect(']', "after register size");
  cur.expect(';', "after declaration");
  if (n == 0) throw ParseError(l, c, "register size must be positive");

  Circuit circ(static_cast<std::uint32_t>(n));

  while (true) {
    cur.skip_space_and_comments();
    if (cur.eof()) break;
    l = cur.line;
    c = cur.col;
    std::string name = cur.ident();
    bool is_ecr_alias = (name == "ecr");
    std::optional<GateKind> kind = kind_from_name(name);
    if (is_ecr_alias) kind = GateKind::AceCr;
    if (!kind) throw ParseError(l, c, "unknown gate '" + name + "'");

    std::vector<double> args;
    if (cur.accept('(')) {
      args.push_back(cur.angle_expr());
      while (cur.accept(',')) args.push_back(cur.angle_expr());
      cur.expect(')', "after gate arguments");
    }

    int expected = is_ecr_alias ? 0 : gate_param_count(*kind);
    if (static_cast<int>(args.size()) != expected)
      throw ParseError(l, c, "gate '" + name + "' expects " + std::to_string(expected) +
                                 " parameter(s), got " + std::to_string(args.size()));
    if (is_ecr_alias) args = {PI / 2};

    Gate gate;
    try {
      switch (args.size()) {
      case 0: gate = Gate(*kind); break;
      case 1: gate = Gate(*kind, args[0]); break;
      case 2: gate = Gate(*kind, args[0], args[1]); break;
      default: gate = Gate(*kind, args[0], args[1], args[2]);
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(l, c, e.what());
    }

    std::vector<QubitId> qubits;
    bool bare_register = false;
    while (true) {
      cur.skip_space_and_comments();
      int ql = cur.line, qc = cur.col;
      std::string rn = cur.ident();
      if (rn != "q") throw ParseError(ql, qc, "expected register operand 'q'");
      cur.skip_space_and_comments();
      if (cur.peek() == '[') {
        cur.advance();
        std::uint64_t idx = cur.integer("qubit index");
        cur.expect(']', "after qubit index");
        if (idx >= circ.num_qubits)
          throw ParseError(ql, qc, "qubit index " + std::to_string(idx) + " out of range");
        qubits.push_back(static_cast<QubitId>(idx));
      } else {
        bare_register = true;  // whole-register operand, only valid for gr
      }
      if (!cur.accept(',')) break;
    }
    cur.expect(';', "after statement");

    if (*kind == GateKind::Gr) {
      if (!bare_register || !qubits.empty())
        throw ParseError(l, c, "gr acts on the whole register: write 'gr(theta,phi) q;'");
    } else if (bare_register) {
      throw ParseError(l, c, "gate '" + name + "' needs indexed operands");
    }

    try {
      circ.push(gate, std::move(qubits));
    } catch (const std::exception& e) {
      throw ParseError(l, c, e.what());
    }
  }
  return circ;
}

/// Prints a circuit in the .q2 format; parse(emit(c)) reproduces the exact
/// operation list.
inline std::string emit(const Circuit& c) {
  using qasm_detail::format_angle;
  std::ostringstream out;
  out << "qreg q[" << c.num_qubits << "];\n";
  for (const Operation& op : c.ops) {
    out << gate_name(op.gate.kind);
    int np = gate_param_count(op.gate.kind);
    if (np > 0) {
      out << '(';
      for (int i = 0; i < np; ++i) {
        if (i) out << ',';
        if (op.gate.kind == GateKind::Delay) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.0f", op.gate.params[i]);
          out << buf;
        } else {
          out << format_angle(op.gate.params[i]);
        }
      }
      out << ')';
    }
    if (op.gate.kind == GateKind::Gr) {
      out << " q";
    } else {
      for (std::size_t i = 0; i < op.qubits.size(); ++i)
        out << (i ? "," : " ") << "q[" << op.qubits[i] << "]";
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace qlower
