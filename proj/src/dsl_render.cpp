#include "pspace/dsl.hpp"

namespace pspace {

std::string render_spec(const SpecDocument& doc) {
  std::string out;
  const ProblemSpace& sp = doc.space;
  auto var_names = sp.var_names();

  out += "space " + sp.name + " {\n";
  for (const VarSpec& v : sp.vars) {
    out += "  var " + v.name + " : 0.." + std::to_string(v.capacity);
    if (!v.unit_label.empty()) out += " unit \"" + v.unit_label + "\"";
    out += ";\n";
  }
  for (const OperatorSchema& s : sp.schemas) {
    out += "  op " + s.name + "(";
    for (size_t i = 0; i < s.params.size(); i++) {
      if (i) out += ", ";
      out += s.params[i];
    }
    out += ") {\n";
    out += "    pre: " + format_expr(*s.precondition, s.params) + ";\n";
    for (const auto& [slot, rhs] : s.effects)
      out += "    eff: " + s.params[static_cast<size_t>(slot)] + " := " +
             format_expr(*rhs, s.params) + ";\n";
    out += "  }\n";
  }
  if (sp.no_undo) out += "  constraint no_undo;\n";
  if (sp.no_loop) out += "  constraint no_loop;\n";
  if (sp.failure) out += "  failure: " + format_expr(*sp.failure, var_names) + ";\n";
  out += "}\n";

  for (const ProblemInstance& inst : doc.instances) {
    out += "\ninstance " + inst.label + " of " + sp.name + " {\n";
    out += "  init: ";
    for (size_t i = 0; i < sp.vars.size(); i++) {
      if (i) out += ", ";
      out += sp.vars[i].name + " = " + std::to_string(inst.initial.values[i]);
    }
    out += ";\n";
    if (inst.goal) out += "  goal: " + format_expr(*inst.goal, var_names) + ";\n";
    out += "}\n";
  }
  return out;
}

bool documents_equal(const SpecDocument& a, const SpecDocument& b) {
  const ProblemSpace& x = a.space;
  const ProblemSpace& y = b.space;
  if (x.name != y.name || x.vars != y.vars || x.no_undo != y.no_undo ||
      x.no_loop != y.no_loop)
    return false;
  if (static_cast<bool>(x.failure) != static_cast<bool>(y.failure)) return false;
  if (x.failure && !expr_equal(*x.failure, *y.failure)) return false;
  if (x.schemas.size() != y.schemas.size()) return false;
  for (size_t i = 0; i < x.schemas.size(); i++) {
    const OperatorSchema& s = x.schemas[i];
    const OperatorSchema& t = y.schemas[i];
    if (s.name != t.name || s.params != t.params) return false;
    if (!expr_equal(*s.precondition, *t.precondition)) return false;
    if (s.effects.size() != t.effects.size()) return false;
    for (size_t j = 0; j < s.effects.size(); j++) {
      if (s.effects[j].first != t.effects[j].first) return false;
      if (!expr_equal(*s.effects[j].second, *t.effects[j].second)) return false;
    }
  }
  if (a.instances.size() != b.instances.size()) return false;
  for (size_t i = 0; i < a.instances.size(); i++) {
    const ProblemInstance& p = a.instances[i];
    const ProblemInstance& q = b.instances[i];
    if (p.label != q.label || p.initial != q.initial) return false;
    if (static_cast<bool>(p.goal) != static_cast<bool>(q.goal)) return false;
    if (p.goal && !expr_equal(*p.goal, *q.goal)) return false;
  }
  return true;
}

}  // namespace pspace
