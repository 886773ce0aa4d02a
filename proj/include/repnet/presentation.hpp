#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace repnet {

enum class StructureKind { group, associative_algebra, lie_algebra, custom };

// How the block product of maps is realized. Under `concat` a product acts on
// the concatenation of the operand coordinates, so k blocks of dimension n
// span R^(k*n); this is the set-theoretic reading used by the braid and
// Temperley-Lieb systems. Under `tensor` the maps must be linear and the
// product is the Kronecker product, so k blocks span R^(n^k); this is the
// reading required by the cup/cap calculus of the link-invariant system,
// where zero blocks mean the scalar line R^1.
enum class ProductSemantics { concat, tensor };

const char* to_string(StructureKind k);
const char* to_string(ProductSemantics s);

struct GeneratorDecl {
  std::string name;
  std::size_t in_blocks = 0;
  std::size_t out_blocks = 0;
  bool invertible = false;
  std::string inverse_name;  // net name of the paired inverse when invertible
};

struct RelExpr;
using RelExprPtr = std::shared_ptr<const RelExpr>;

struct RelExpr {
  enum class Kind { gen, inv_gen, identity, compose, product, scale, sum, place };
  Kind kind = Kind::identity;
  std::string name;        // gen / inv_gen / place generator
  std::size_t blocks = 0;  // identity block count
  double coeff = 1.0;      // scale constant (when scalar_sym empty)
  std::string scalar_sym;  // scale by a named presentation scalar
  RelExprPtr a, b;
  std::size_t pos = 0;      // place: strand position, 1-based
  std::size_t strands = 0;  // place: total strands
};

namespace expr {
RelExprPtr gen(std::string name);
RelExprPtr inv(std::string name);
RelExprPtr id(std::size_t blocks);
RelExprPtr compose(RelExprPtr after, RelExprPtr first);  // after ∘ first
RelExprPtr product(RelExprPtr left, RelExprPtr right);
RelExprPtr scale(double c, RelExprPtr e);
RelExprPtr scale_sym(std::string sym, RelExprPtr e);
RelExprPtr sum(RelExprPtr a, RelExprPtr b);
RelExprPtr place(std::string gen, std::size_t pos, std::size_t strands);
}  // namespace expr

struct RelationEq {
  std::string label;
  RelExprPtr lhs;
  RelExprPtr rhs;
};

struct Presentation {
  std::string name = "custom";
  StructureKind kind = StructureKind::custom;
  ProductSemantics semantics = ProductSemantics::concat;
  std::vector<GeneratorDecl> generators;
  std::vector<RelationEq> relations;
  std::map<std::string, double> scalars;

  const GeneratorDecl* find_generator(const std::string& name) const;
};

struct Arity {
  std::size_t in_blocks = 0;
  std::size_t out_blocks = 0;
  bool operator==(const Arity&) const = default;
};

// Block arity of an expression; throws on undeclared symbols or mismatched
// sub-arities (compose chaining, sum operands, place constraints).
Arity arity_of(const RelExpr& e, const Presentation& p);

// Replaces every place() node by its product-of-identities desugaring.
RelExprPtr desugar(const RelExprPtr& e);

void validate(const Presentation& p);

std::string serialize(const Presentation& p);
std::string to_string(const RelExpr& e);
bool structurally_equal(const RelExpr& a, const RelExpr& b);
bool structurally_equal(const Presentation& a, const Presentation& b);

}  // namespace repnet
