#include "repnet/presentation.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace repnet {

const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::group: return "group";
    case StructureKind::associative_algebra: return "algebra";
    case StructureKind::lie_algebra: return "lie";
    case StructureKind::custom: return "custom";
  }
  return "?";
}

const char* to_string(ProductSemantics s) {
  return s == ProductSemantics::concat ? "concat" : "tensor";
}

namespace expr {

static RelExprPtr node(RelExpr e) { return std::make_shared<const RelExpr>(std::move(e)); }

RelExprPtr gen(std::string name) {
  RelExpr e;
  e.kind = RelExpr::Kind::gen;
  e.name = std::move(name);
  return node(std::move(e));
}

RelExprPtr inv(std::string name) {
  RelExpr e;
  e.kind = RelExpr::Kind::inv_gen;
  e.name = std::move(name);
  return node(std::move(e));
}

RelExprPtr id(std::size_t blocks) {
  RelExpr e;
  e.kind = RelExpr::Kind::identity;
  e.blocks = blocks;
  return node(std::move(e));
}

RelExprPtr compose(RelExprPtr after, RelExprPtr first) {
  RelExpr e;
  e.kind = RelExpr::Kind::compose;
  e.a = std::move(after);
  e.b = std::move(first);
  return node(std::move(e));
}

RelExprPtr product(RelExprPtr left, RelExprPtr right) {
  RelExpr e;
  e.kind = RelExpr::Kind::product;
  e.a = std::move(left);
  e.b = std::move(right);
  return node(std::move(e));
}

RelExprPtr scale(double c, RelExprPtr child) {
  RelExpr e;
  e.kind = RelExpr::Kind::scale;
  e.coeff = c;
  e.a = std::move(child);
  return node(std::move(e));
}

RelExprPtr scale_sym(std::string sym, RelExprPtr child) {
  RelExpr e;
  e.kind = RelExpr::Kind::scale;
  e.scalar_sym = std::move(sym);
  e.a = std::move(child);
  return node(std::move(e));
}

RelExprPtr sum(RelExprPtr a, RelExprPtr b) {
  RelExpr e;
  e.kind = RelExpr::Kind::sum;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

RelExprPtr place(std::string g, std::size_t pos, std::size_t strands) {
  RelExpr e;
  e.kind = RelExpr::Kind::place;
  e.name = std::move(g);
  e.pos = pos;
  e.strands = strands;
  return node(std::move(e));
}

}  // namespace expr

const GeneratorDecl* Presentation::find_generator(const std::string& gname) const {
  for (const auto& g : generators)
    if (g.name == gname) return &g;
  return nullptr;
}

Arity arity_of(const RelExpr& e, const Presentation& p) {
  switch (e.kind) {
    case RelExpr::Kind::gen: {
      const GeneratorDecl* g = p.find_generator(e.name);
      if (!g) throw std::invalid_argument("undeclared symbol " + e.name);
      return {g->in_blocks, g->out_blocks};
    }
    case RelExpr::Kind::inv_gen: {
      const GeneratorDecl* g = p.find_generator(e.name);
      if (!g) throw std::invalid_argument("undeclared symbol " + e.name);
      if (!g->invertible)
        throw std::invalid_argument("inv() of non-invertible generator " + e.name);
      return {g->out_blocks, g->in_blocks};
    }
    case RelExpr::Kind::identity:
      return {e.blocks, e.blocks};
    case RelExpr::Kind::compose: {
      const Arity after = arity_of(*e.a, p);
      const Arity first = arity_of(*e.b, p);
      if (first.out_blocks != after.in_blocks)
        throw std::invalid_argument("arity mismatch in composition: " + to_string(*e.b) +
                                    " feeds " + std::to_string(first.out_blocks) +
                                    " blocks into " + to_string(*e.a) + " expecting " +
                                    std::to_string(after.in_blocks));
      return {first.in_blocks, after.out_blocks};
    }
    case RelExpr::Kind::product: {
      const Arity l = arity_of(*e.a, p);
      const Arity r = arity_of(*e.b, p);
      return {l.in_blocks + r.in_blocks, l.out_blocks + r.out_blocks};
    }
    case RelExpr::Kind::scale: {
      if (!e.scalar_sym.empty() && !p.scalars.count(e.scalar_sym))
        throw std::invalid_argument("unbound scalar " + e.scalar_sym);
      return arity_of(*e.a, p);
    }
    case RelExpr::Kind::sum: {
      const Arity l = arity_of(*e.a, p);
      const Arity r = arity_of(*e.b, p);
      if (!(l == r)) throw std::invalid_argument("sum operands must have equal arity");
      return l;
    }
    case RelExpr::Kind::place: {
      const GeneratorDecl* g = p.find_generator(e.name);
      if (!g) throw std::invalid_argument("undeclared symbol " + e.name);
      if (g->in_blocks != 2 || g->out_blocks != 2)
        throw std::invalid_argument("place() requires a 2->2 generator");
      if (e.pos < 1 || e.strands < 2 || e.pos > e.strands - 1)
        throw std::invalid_argument("place() position out of range");
      return {e.strands, e.strands};
    }
  }
  throw std::logic_error("unreachable");
}

RelExprPtr desugar(const RelExprPtr& e) {
  switch (e->kind) {
    case RelExpr::Kind::gen:
    case RelExpr::Kind::inv_gen:
    case RelExpr::Kind::identity:
      return e;
    case RelExpr::Kind::compose:
      return expr::compose(desugar(e->a), desugar(e->b));
    case RelExpr::Kind::product:
      return expr::product(desugar(e->a), desugar(e->b));
    case RelExpr::Kind::scale: {
      RelExpr out;
      out.kind = RelExpr::Kind::scale;
      out.coeff = e->coeff;
      out.scalar_sym = e->scalar_sym;
      out.a = desugar(e->a);
      return std::make_shared<const RelExpr>(std::move(out));
    }
    case RelExpr::Kind::sum:
      return expr::sum(desugar(e->a), desugar(e->b));
    case RelExpr::Kind::place: {
      RelExprPtr core = expr::gen(e->name);
      const std::size_t lead = e->pos - 1;
      const std::size_t trail = e->strands - e->pos - 1;
      if (trail > 0) core = expr::product(core, expr::id(trail));
      if (lead > 0) core = expr::product(expr::id(lead), core);
      return core;
    }
  }
  throw std::logic_error("unreachable");
}

void validate(const Presentation& p) {
  std::set<std::string> names;
  for (const auto& g : p.generators) {
    if (!names.insert(g.name).second)
      throw std::invalid_argument("duplicate generator name " + g.name);
    if (g.in_blocks == 0 && g.out_blocks == 0)
      throw std::invalid_argument("generator " + g.name + " has empty arity");
    if (g.invertible && g.inverse_name.empty())
      throw std::invalid_argument("invertible generator " + g.name + " lacks inverse name");
    if (g.in_blocks == 0 && p.semantics == ProductSemantics::concat)
      throw std::invalid_argument("generator " + g.name +
                                  " with zero input blocks requires tensor semantics");
    if (g.out_blocks == 0 && p.semantics == ProductSemantics::concat)
      throw std::invalid_argument("generator " + g.name +
                                  " with zero output blocks requires tensor semantics");
  }
  for (const auto& g : p.generators) {
    if (g.invertible && names.count(g.inverse_name))
      throw std::invalid_argument("inverse name " + g.inverse_name +
                                  " collides with a generator");
    if (p.scalars.count(g.name))
      throw std::invalid_argument("name " + g.name + " is both generator and scalar");
  }
  if (p.kind != StructureKind::custom && p.relations.empty())
    throw std::invalid_argument("non-custom presentation needs at least one relation");
  for (const auto& r : p.relations) {
    const Arity l = arity_of(*r.lhs, p);
    const Arity rr = arity_of(*r.rhs, p);
    if (!(l == rr))
      throw std::invalid_argument("relation '" + r.label +
                                  "': sides have different arities");
  }
}

static void expr_to_stream(const RelExpr& e, std::ostream& os, int parent_prec);

// Precedences, loosest first: compose(*) < product(x) < sum(+) < prefix scale.
static int prec(const RelExpr& e) {
  switch (e.kind) {
    case RelExpr::Kind::compose: return 0;
    case RelExpr::Kind::product: return 1;
    case RelExpr::Kind::sum: return 2;
    case RelExpr::Kind::scale: return 3;
    default: return 4;
  }
}

static void expr_to_stream(const RelExpr& e, std::ostream& os, int parent_prec) {
  const int myprec = prec(e);
  const bool need_paren = myprec < parent_prec;
  if (need_paren) os << '(';
  switch (e.kind) {
    case RelExpr::Kind::gen:
      os << e.name;
      break;
    case RelExpr::Kind::inv_gen:
      os << "inv(" << e.name << ")";
      break;
    case RelExpr::Kind::identity:
      if (e.blocks == 1)
        os << "id";
      else
        os << "id^" << e.blocks;
      break;
    case RelExpr::Kind::compose:
      expr_to_stream(*e.a, os, myprec);
      os << " * ";
      expr_to_stream(*e.b, os, myprec);
      break;
    case RelExpr::Kind::product:
      expr_to_stream(*e.a, os, myprec);
      os << " x ";
      expr_to_stream(*e.b, os, myprec + 1);
      break;
    case RelExpr::Kind::sum:
      expr_to_stream(*e.a, os, myprec);
      os << " + ";
      expr_to_stream(*e.b, os, myprec + 1);
      break;
    case RelExpr::Kind::scale:
      if (e.scalar_sym.empty()) {
        std::ostringstream num;
        num.precision(17);
        num << e.coeff;
        os << num.str();
      } else {
        os << e.scalar_sym;
      }
      os << ' ';
      expr_to_stream(*e.a, os, myprec);
      break;
    case RelExpr::Kind::place:
      os << "place(" << e.name << ", " << e.pos << ", " << e.strands << ")";
      break;
  }
  if (need_paren) os << ')';
}

std::string to_string(const RelExpr& e) {
  std::ostringstream os;
  expr_to_stream(e, os, 0);
  return os.str();
}

std::string serialize(const Presentation& p) {
  std::ostringstream os;
  os << "name " << p.name << "\n";
  os << "structure " << to_string(p.kind) << "\n";
  if (p.semantics != ProductSemantics::concat)
    os << "semantics " << to_string(p.semantics) << "\n";
  os.precision(17);
  for (const auto& [sym, val] : p.scalars) os << "scalar " << sym << " = " << val << "\n";
  for (const auto& g : p.generators) {
    os << "generator " << g.name << " arity " << g.in_blocks << "->" << g.out_blocks;
    if (g.invertible) os << " invertible";
    os << "\n";
  }
  for (const auto& r : p.relations) {
    os << "relation ";
    if (!r.label.empty()) os << r.label << ": ";
    os << to_string(*r.lhs) << " = " << to_string(*r.rhs) << "\n";
  }
  return os.str();
}

bool structurally_equal(const RelExpr& a, const RelExpr& b) {
  if (a.kind != b.kind || a.name != b.name || a.blocks != b.blocks ||
      a.scalar_sym != b.scalar_sym || a.pos != b.pos || a.strands != b.strands)
    return false;
  if (a.kind == RelExpr::Kind::scale && a.scalar_sym.empty() && a.coeff != b.coeff)
    return false;
  const bool ha = static_cast<bool>(a.a), hb = static_cast<bool>(b.a);
  const bool ha2 = static_cast<bool>(a.b), hb2 = static_cast<bool>(b.b);
  if (ha != hb || ha2 != hb2) return false;
  if (ha && !structurally_equal(*a.a, *b.a)) return false;
  if (ha2 && !structurally_equal(*a.b, *b.b)) return false;
  return true;
}

bool structurally_equal(const Presentation& a, const Presentation& b) {
  if (a.name != b.name || a.kind != b.kind || a.semantics != b.semantics) return false;
  if (a.scalars != b.scalars) return false;
  if (a.generators.size() != b.generators.size()) return false;
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    const auto& x = a.generators[i];
    const auto& y = b.generators[i];
    if (x.name != y.name || x.in_blocks != y.in_blocks || x.out_blocks != y.out_blocks ||
        x.invertible != y.invertible)
      return false;
  }
  if (a.relations.size() != b.relations.size()) return false;
  for (std::size_t i = 0; i < a.relations.size(); ++i) {
    const auto& x = a.relations[i];
    const auto& y = b.relations[i];
    if (x.label != y.label) return false;
    if (!structurally_equal(*x.lhs, *y.lhs) || !structurally_equal(*x.rhs, *y.rhs))
      return false;
  }
  return true;
}

}  // namespace repnet
