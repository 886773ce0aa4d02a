#pragma once

#include <map>
#include <string>
#include <vector>

#include "repnet/extract.hpp"
#include "repnet/net.hpp"
#include "repnet/presentation.hpp"
#include "repnet/tape.hpp"
#include "repnet/tensor.hpp"

namespace repnet {

// Relation expression lowered for evaluation: places desugared, scalar
// symbols bound to their values, inverse generators resolved to the paired
// net name, widths precomputed for the presentation's product semantics.
struct EvalExpr {
  enum class Kind { net, identity, compose, product, scale, sum };
  Kind kind = Kind::identity;
  std::string net_name;
  std::size_t in_width = 0;
  std::size_t out_width = 0;
  double coeff = 1.0;
  std::vector<EvalExpr> kids;
};

EvalExpr lower_expr(const RelExpr& e, const Presentation& p, std::size_t block_dim);

struct CompiledRelation {
  std::string label;
  EvalExpr lhs;
  EvalExpr rhs;
  std::size_t in_blocks = 0;
  std::size_t sample_width = 0;
  std::size_t block_dim = 1;
  ProductSemantics semantics = ProductSemantics::concat;
};

// Lowers every relation and checks the nets against the presentation:
// matching arities and widths, common block dimension, paired inverse nets
// for invertible generators, linear regime under tensor semantics.
std::vector<CompiledRelation> compile(const Presentation& p, const NetMap& nets);

// Same lowering for relations that are not part of the presentation
// (degeneracy probes).
CompiledRelation compile_relation(const RelationEq& rel, const Presentation& p,
                                  const NetMap& nets);

// Eager evaluation.
Tensor2 eval_map(const EvalExpr& e, const NetMap& nets, const Tensor2& x);
AffineMap eval_affine(const EvalExpr& e, const std::map<std::string, AffineMap>& maps,
                      ProductSemantics semantics);

// Mean over sample rows of ||lhs(x) - rhs(x)||^2. Accumulation is chunked in
// a fixed order; `threads` only distributes chunks, never reorders them.
double relation_residual(const CompiledRelation& rel, const NetMap& nets,
                         const Tensor2& points, std::size_t threads = 1);

// Tape evaluation for training.
Tape::Id eval_on_tape(Tape& tape, const EvalExpr& e,
                      const std::map<std::string, TapeNet>& nets, Tape::Id x);
Tape::Id matrix_on_tape(Tape& tape, const EvalExpr& e,
                        const std::map<std::string, TapeNet>& nets);
Tape::Id relation_residual_on_tape(Tape& tape, const CompiledRelation& rel,
                                   const std::map<std::string, TapeNet>& nets,
                                   Tape::Id points);

}  // namespace repnet
