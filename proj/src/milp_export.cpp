#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "xhaul/milp.hpp"

namespace xhaul {

namespace {

// Exact text round trip for doubles.
std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const char* sense_token(Sense s) {
  switch (s) {
    case Sense::Le: return "<=";
    case Sense::Ge: return ">=";
    case Sense::Eq: return "=";
  }
  return "?";
}

void write_expr(const MilpModel& m, const LinExpr& e, std::ostream& os) {
  bool first = true;
  for (const LinTerm& t : e.terms) {
    if (t.coef == 0.0) continue;
    double c = t.coef;
    if (first) {
      if (c < 0) {
        os << "- ";
        c = -c;
      }
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
      c = std::abs(c);
    }
    os << num(c) << " " << m.vars[t.var].name;
  }
  if (first) os << "0 __zero";  // empty expression placeholder
}

}  // namespace

void write_lp(const MilpModel& m, std::ostream& os) {
  os << "Minimize\n obj: ";
  write_expr(m, m.objective(), os);
  os << "\nSubject To\n";
  for (const ConstraintRow& r : m.rows) {
    os << " " << r.name << ": ";
    write_expr(m, r.lhs, os);
    os << " " << sense_token(r.sense) << " " << num(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const VarDef& v : m.vars) {
    if (v.type == VarType::Binary) continue;
    if (std::isinf(v.ub))
      os << " " << v.name << " >= " << num(v.lb) << "\n";
    else
      os << " " << num(v.lb) << " <= " << v.name << " <= " << num(v.ub) << "\n";
  }
  os << "Binary\n";
  for (const VarDef& v : m.vars)
    if (v.type == VarType::Binary) os << " " << v.name << "\n";
  os << "End\n";
}

void write_mps(const MilpModel& m, std::ostream& os) {
  os << "NAME MODEL\nROWS\n N obj\n";
  for (const ConstraintRow& r : m.rows) {
    char t = r.sense == Sense::Le ? 'L' : r.sense == Sense::Ge ? 'G' : 'E';
    os << " " << t << " " << r.name << "\n";
  }
  // Column-major entries: objective first, then every row the column touches.
  std::vector<std::vector<std::pair<std::string, double>>> cols(m.vars.size());
  for (const LinTerm& t : m.objective().terms)
    if (t.coef != 0.0) cols[t.var].push_back({"obj", t.coef});
  for (const ConstraintRow& r : m.rows)
    for (const LinTerm& t : r.lhs.terms)
      if (t.coef != 0.0) cols[t.var].push_back({r.name, t.coef});
  os << "COLUMNS\n";
  bool in_int = false;
  for (size_t v = 0; v < m.vars.size(); ++v) {
    bool want_int = m.vars[v].type == VarType::Binary;
    if (want_int != in_int) {
      os << "    M" << v << " 'MARKER' " << (want_int ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = want_int;
    }
    for (auto& [row, coef] : cols[v])
      os << "    " << m.vars[v].name << " " << row << " " << num(coef) << "\n";
  }
  if (in_int) os << "    MEND 'MARKER' 'INTEND'\n";
  os << "RHS\n";
  for (const ConstraintRow& r : m.rows)
    if (r.rhs != 0.0) os << "    RHS " << r.name << " " << num(r.rhs) << "\n";
  os << "BOUNDS\n";
  for (const VarDef& v : m.vars) {
    if (v.type == VarType::Binary) {
      os << " BV BND " << v.name << "\n";
    } else {
      if (v.lb != 0.0) os << " LO BND " << v.name << " " << num(v.lb) << "\n";
      if (std::isinf(v.ub))
        os << " PL BND " << v.name << "\n";
      else
        os << " UP BND " << v.name << " " << num(v.ub) << "\n";
    }
  }
  os << "ENDATA\n";
}

namespace {

struct Tokens {
  std::vector<std::string> toks;
  size_t i = 0;
  bool done() const { return i >= toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : toks[i];
  }
  std::string next() { return toks[i++]; }
};

bool is_sense(const std::string& t) { return t == "<=" || t == ">=" || t == "="; }

Sense sense_of(const std::string& t) {
  if (t == "<=") return Sense::Le;
  if (t == ">=") return Sense::Ge;
  return Sense::Eq;
}

// Parses "c1 v1 + c2 v2 - c3 v3" up to a sense token or end-of-section.
std::map<std::string, double> parse_terms(Tokens& tk) {
  std::map<std::string, double> out;
  double sign = 1.0;
  while (!tk.done() && !is_sense(tk.peek())) {
    std::string t = tk.next();
    if (t == "+") {
      sign = 1.0;
      continue;
    }
    if (t == "-") {
      sign = -1.0;
      continue;
    }
    double coef = std::stod(t);
    std::string var = tk.next();
    if (var != "__zero") out[var] += sign * coef;
    sign = 1.0;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0.0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

ParsedLp parse_lp(std::istream& is) {
  ParsedLp lp;
  std::string line, section;
  std::vector<std::string> pending;  // token stream of the current section

  auto flush_row = [&](Tokens& tk) {
    while (!tk.done()) {
      std::string head = tk.next();  // "name:"
      if (head.empty() || head.back() != ':')
        throw SchemaError("lp parse: expected row label, got '" + head + "'");
      ParsedRow r;
      r.name = head.substr(0, head.size() - 1);
      r.terms = parse_terms(tk);
      if (tk.done()) throw SchemaError("lp parse: missing sense in row " + r.name);
      r.sense = sense_of(tk.next());
      r.rhs = std::stod(tk.next());
      lp.rows.push_back(std::move(r));
    }
  };

  std::vector<std::string> obj_toks, row_toks, bound_toks, bin_toks;
  std::vector<std::string>* cur = nullptr;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    std::string low = first;
    for (char& ch : low) ch = static_cast<char>(std::tolower(ch));
    if (low == "minimize" || low == "maximize") {
      cur = &obj_toks;
      continue;
    }
    if (low == "subject") {
      cur = &row_toks;
      continue;  // "Subject To"
    }
    if (low == "bounds") {
      cur = &bound_toks;
      continue;
    }
    if (low == "binary") {
      cur = &bin_toks;
      continue;
    }
    if (low == "end") break;
    if (!cur) throw SchemaError("lp parse: content before a section header");
    cur->push_back(first);
    std::string t;
    while (ls >> t) cur->push_back(t);
  }

  {
    Tokens tk{obj_toks, 0};
    if (!tk.done()) {
      std::string head = tk.next();  // "obj:"
      if (head.back() != ':') throw SchemaError("lp parse: malformed objective label");
      lp.objective = parse_terms(tk);
    }
  }
  {
    Tokens tk{row_toks, 0};
    flush_row(tk);
  }
  {
    // "lb <= v <= ub" or "v >= lb"; both start "<token> <sense> ...", so the
    // first token's shape (number vs name) picks the form.
    auto is_number = [](const std::string& s) {
      if (s.empty()) return false;
      char* end = nullptr;
      std::strtod(s.c_str(), &end);
      return end == s.c_str() + s.size();
    };
    Tokens tk{bound_toks, 0};
    while (!tk.done()) {
      std::string a = tk.next();
      if (!is_number(a)) {  // v >= lb form
        VarDef v;
        v.name = a;
        v.type = VarType::Continuous;
        tk.next();
        v.lb = std::stod(tk.next());
        v.ub = std::numeric_limits<double>::infinity();
        lp.vars[v.name] = v;
      } else {
        VarDef v;
        v.lb = std::stod(a);
        if (tk.next() != "<=") throw SchemaError("lp parse: malformed bound");
        v.name = tk.next();
        if (tk.next() != "<=") throw SchemaError("lp parse: malformed bound");
        v.ub = std::stod(tk.next());
        v.type = VarType::Continuous;
        lp.vars[v.name] = v;
      }
    }
  }
  for (const std::string& name : bin_toks) {
    VarDef v;
    v.name = name;
    v.type = VarType::Binary;
    v.lb = 0.0;
    v.ub = 1.0;
    lp.vars[name] = v;
  }
  return lp;
}

std::vector<ParsedRow> canonical_rows(const MilpModel& m) {
  std::vector<ParsedRow> out;
  out.reserve(m.rows.size());
  for (const ConstraintRow& r : m.rows) {
    ParsedRow p;
    p.name = r.name;
    p.sense = r.sense;
    p.rhs = r.rhs;
    for (const LinTerm& t : r.lhs.terms)
      if (t.coef != 0.0) p.terms[m.vars[t.var].name] += t.coef;
    for (auto it = p.terms.begin(); it != p.terms.end();)
      it = it->second == 0.0 ? p.terms.erase(it) : std::next(it);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace xhaul
