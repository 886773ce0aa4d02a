#include "repnet/compile.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "repnet/kernels.hpp"

namespace repnet {

namespace {

std::size_t block_width(std::size_t blocks, std::size_t dim, ProductSemantics sem) {
  if (sem == ProductSemantics::concat) return blocks * dim;
  std::size_t w = 1;
  for (std::size_t i = 0; i < blocks; ++i) w *= dim;
  return w;
}

}  // namespace

EvalExpr lower_expr(const RelExpr& raw, const Presentation& p, std::size_t block_dim) {
  const RelExprPtr des = desugar(std::make_shared<const RelExpr>(raw));
  const RelExpr& e = *des;
  const auto sem = p.semantics;
  auto width = [&](std::size_t blocks) { return block_width(blocks, block_dim, sem); };

  EvalExpr out;
  switch (e.kind) {
    case RelExpr::Kind::gen: {
      const GeneratorDecl* g = p.find_generator(e.name);
      if (!g) throw std::invalid_argument("undeclared symbol " + e.name);
      out.kind = EvalExpr::Kind::net;
      out.net_name = g->name;
      out.in_width = width(g->in_blocks);
      out.out_width = width(g->out_blocks);
      return out;
    }
    case RelExpr::Kind::inv_gen: {
      const GeneratorDecl* g = p.find_generator(e.name);
      if (!g) throw std::invalid_argument("undeclared symbol " + e.name);
      if (!g->invertible)
        throw std::invalid_argument("inv() of non-invertible generator " + e.name);
      out.kind = EvalExpr::Kind::net;
      out.net_name = g->inverse_name;
      out.in_width = width(g->out_blocks);
      out.out_width = width(g->in_blocks);
      return out;
    }
    case RelExpr::Kind::identity:
      out.kind = EvalExpr::Kind::identity;
      out.in_width = out.out_width = width(e.blocks);
      return out;
    case RelExpr::Kind::compose: {
      out.kind = EvalExpr::Kind::compose;
      out.kids.push_back(lower_expr(*e.a, p, block_dim));
      out.kids.push_back(lower_expr(*e.b, p, block_dim));
      if (out.kids[1].out_width != out.kids[0].in_width)
        throw std::invalid_argument("composition width mismatch");
      out.in_width = out.kids[1].in_width;
      out.out_width = out.kids[0].out_width;
      return out;
    }
    case RelExpr::Kind::product: {
      out.kind = EvalExpr::Kind::product;
      out.kids.push_back(lower_expr(*e.a, p, block_dim));
      out.kids.push_back(lower_expr(*e.b, p, block_dim));
      if (sem == ProductSemantics::concat) {
        out.in_width = out.kids[0].in_width + out.kids[1].in_width;
        out.out_width = out.kids[0].out_width + out.kids[1].out_width;
      } else {
        out.in_width = out.kids[0].in_width * out.kids[1].in_width;
        out.out_width = out.kids[0].out_width * out.kids[1].out_width;
      }
      return out;
    }
    case RelExpr::Kind::scale: {
      out.kind = EvalExpr::Kind::scale;
      if (e.scalar_sym.empty()) {
        out.coeff = e.coeff;
      } else {
        auto it = p.scalars.find(e.scalar_sym);
        if (it == p.scalars.end())
          throw std::invalid_argument("unbound scalar " + e.scalar_sym);
        out.coeff = it->second;
      }
      out.kids.push_back(lower_expr(*e.a, p, block_dim));
      out.in_width = out.kids[0].in_width;
      out.out_width = out.kids[0].out_width;
      return out;
    }
    case RelExpr::Kind::sum: {
      out.kind = EvalExpr::Kind::sum;
      out.kids.push_back(lower_expr(*e.a, p, block_dim));
      out.kids.push_back(lower_expr(*e.b, p, block_dim));
      if (out.kids[0].in_width != out.kids[1].in_width ||
          out.kids[0].out_width != out.kids[1].out_width)
        throw std::invalid_argument("sum operands must have equal widths");
      out.in_width = out.kids[0].in_width;
      out.out_width = out.kids[0].out_width;
      return out;
    }
    case RelExpr::Kind::place:
      throw std::logic_error("place survived desugaring");
  }
  throw std::logic_error("unreachable");
}

namespace {

std::size_t common_block_dim(const Presentation& p, const NetMap& nets) {
  std::size_t dim = 0;
  for (const auto& [name, net] : nets) {
    (void)name;
    if (dim == 0) dim = net.block_dim;
    if (net.block_dim != dim)
      throw std::invalid_argument("nets disagree on block dimension");
  }
  (void)p;
  return dim == 0 ? 1 : dim;
}

void check_net(const Presentation& p, const NetMap& nets, const std::string& net_name,
               std::size_t in_blocks, std::size_t out_blocks, std::size_t dim) {
  auto it = nets.find(net_name);
  if (it == nets.end()) throw std::invalid_argument("missing net for " + net_name);
  const GeneratorNet& net = it->second;
  if (net.in_blocks != in_blocks || net.out_blocks != out_blocks)
    throw std::invalid_argument("net " + net_name + " arity mismatch");
  const std::size_t want_in = block_width(in_blocks, dim, p.semantics);
  const std::size_t want_out = block_width(out_blocks, dim, p.semantics);
  if (net.in_width != want_in || net.out_width != want_out)
    throw std::invalid_argument("net " + net_name + " width mismatch");
  if (p.semantics == ProductSemantics::tensor && net.regime != Regime::linear)
    throw std::invalid_argument(
        "tensor semantics requires linear nets (net " + net_name + ")");
  validate_net(net);
}

}  // namespace

std::vector<CompiledRelation> compile(const Presentation& p, const NetMap& nets) {
  validate(p);
  const std::size_t dim = common_block_dim(p, nets);
  for (const auto& g : p.generators) {
    check_net(p, nets, g.name, g.in_blocks, g.out_blocks, dim);
    if (g.invertible) check_net(p, nets, g.inverse_name, g.out_blocks, g.in_blocks, dim);
  }

  std::vector<CompiledRelation> out;
  for (const auto& r : p.relations) out.push_back(compile_relation(r, p, nets));
  return out;
}

CompiledRelation compile_relation(const RelationEq& rel, const Presentation& p,
                                  const NetMap& nets) {
  const Arity la = arity_of(*rel.lhs, p);
  const Arity ra = arity_of(*rel.rhs, p);
  if (!(la == ra))
    throw std::invalid_argument("relation '" + rel.label + "': arity mismatch");
  const std::size_t dim = common_block_dim(p, nets);

  CompiledRelation c;
  c.label = rel.label;
  c.lhs = lower_expr(*rel.lhs, p, dim);
  c.rhs = lower_expr(*rel.rhs, p, dim);
  c.in_blocks = la.in_blocks;
  c.block_dim = dim;
  c.semantics = p.semantics;
  c.sample_width = block_width(la.in_blocks, dim, p.semantics);
  return c;
}

Tensor2 eval_map(const EvalExpr& e, const NetMap& nets, const Tensor2& x) {
  if (x.cols != e.in_width) throw std::invalid_argument("eval_map: width mismatch");
  switch (e.kind) {
    case EvalExpr::Kind::net:
      return forward(nets.at(e.net_name), x);
    case EvalExpr::Kind::identity:
      return x;
    case EvalExpr::Kind::compose:
      return eval_map(e.kids[0], nets, eval_map(e.kids[1], nets, x));
    case EvalExpr::Kind::product: {
      const std::size_t split = e.kids[0].in_width;
      Tensor2 xa(x.rows, split), xb(x.rows, x.cols - split);
      for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t j = 0; j < split; ++j) xa.at(r, j) = x.at(r, j);
        for (std::size_t j = split; j < x.cols; ++j) xb.at(r, j - split) = x.at(r, j);
      }
      const Tensor2 ya = eval_map(e.kids[0], nets, xa);
      const Tensor2 yb = eval_map(e.kids[1], nets, xb);
      Tensor2 y(x.rows, ya.cols + yb.cols);
      for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t j = 0; j < ya.cols; ++j) y.at(r, j) = ya.at(r, j);
        for (std::size_t j = 0; j < yb.cols; ++j) y.at(r, ya.cols + j) = yb.at(r, j);
      }
      return y;
    }
    case EvalExpr::Kind::scale:
      return scale(eval_map(e.kids[0], nets, x), e.coeff);
    case EvalExpr::Kind::sum:
      return add(eval_map(e.kids[0], nets, x), eval_map(e.kids[1], nets, x));
  }
  throw std::logic_error("unreachable");
}

AffineMap eval_affine(const EvalExpr& e, const std::map<std::string, AffineMap>& maps,
                      ProductSemantics semantics) {
  switch (e.kind) {
    case EvalExpr::Kind::net: {
      auto it = maps.find(e.net_name);
      if (it == maps.end()) throw std::invalid_argument("missing map for " + e.net_name);
      return it->second;
    }
    case EvalExpr::Kind::identity:
      return identity_map(e.in_width);
    case EvalExpr::Kind::compose:
      return compose(eval_affine(e.kids[0], maps, semantics),
                     eval_affine(e.kids[1], maps, semantics));
    case EvalExpr::Kind::product: {
      const AffineMap a = eval_affine(e.kids[0], maps, semantics);
      const AffineMap b = eval_affine(e.kids[1], maps, semantics);
      return semantics == ProductSemantics::concat ? direct_sum(a, b) : kron_map(a, b);
    }
    case EvalExpr::Kind::scale:
      return scale_map(eval_affine(e.kids[0], maps, semantics), e.coeff);
    case EvalExpr::Kind::sum:
      return add_maps(eval_affine(e.kids[0], maps, semantics),
                      eval_affine(e.kids[1], maps, semantics));
  }
  throw std::logic_error("unreachable");
}

namespace {

constexpr std::size_t kResidualChunk = 512;

Tensor2 take_rows(const Tensor2& x, std::size_t r0, std::size_t r1) {
  Tensor2 out(r1 - r0, x.cols);
  std::copy(x.data.begin() + r0 * x.cols, x.data.begin() + r1 * x.cols, out.data.begin());
  return out;
}

void collect_net_names(const EvalExpr& e, std::vector<std::string>& names) {
  if (e.kind == EvalExpr::Kind::net) names.push_back(e.net_name);
  for (const auto& k : e.kids) collect_net_names(k, names);
}

}  // namespace

double relation_residual(const CompiledRelation& rel, const NetMap& nets,
                         const Tensor2& points, std::size_t threads) {
  if (points.cols != rel.sample_width)
    throw std::invalid_argument("relation_residual: sample width mismatch");

  // Tensor-semantics relations act through collapsed matrices.
  std::map<std::string, AffineMap> collapsed;
  AffineMap lhs_map, rhs_map;
  const bool tensor = rel.semantics == ProductSemantics::tensor;
  if (tensor) {
    std::vector<std::string> names;
    collect_net_names(rel.lhs, names);
    collect_net_names(rel.rhs, names);
    for (const auto& n : names)
      if (!collapsed.count(n)) collapsed.emplace(n, collapse(nets.at(n)));
    lhs_map = eval_affine(rel.lhs, collapsed, rel.semantics);
    rhs_map = eval_affine(rel.rhs, collapsed, rel.semantics);
  }

  const std::size_t rows = points.rows;
  const std::size_t chunks = (rows + kResidualChunk - 1) / kResidualChunk;
  std::vector<double> partial(chunks, 0.0);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t r0 = c * kResidualChunk;
    const std::size_t r1 = std::min(rows, r0 + kResidualChunk);
    const Tensor2 xc = take_rows(points, r0, r1);
    const Tensor2 l = tensor ? apply(lhs_map, xc) : eval_map(rel.lhs, nets, xc);
    const Tensor2 r = tensor ? apply(rhs_map, xc) : eval_map(rel.rhs, nets, xc);
    partial[c] = kern::ops().sq_diff_sum(l.data.data(), r.data.data(), l.size());
  };

  if (threads <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
        run_chunk(c);
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min(threads, chunks);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  double total = 0.0;
  for (double v : partial) total += v;
  return total / static_cast<double>(rows);
}

Tape::Id eval_on_tape(Tape& tape, const EvalExpr& e,
                      const std::map<std::string, TapeNet>& nets, Tape::Id x) {
  switch (e.kind) {
    case EvalExpr::Kind::net:
      return apply_net(tape, nets.at(e.net_name), x);
    case EvalExpr::Kind::identity:
      return x;
    case EvalExpr::Kind::compose:
      return eval_on_tape(tape, e.kids[0], nets, eval_on_tape(tape, e.kids[1], nets, x));
    case EvalExpr::Kind::product: {
      const std::size_t split = e.kids[0].in_width;
      const Tape::Id xa = tape.slice_cols(x, 0, split);
      const Tape::Id xb = tape.slice_cols(x, split, e.in_width);
      const Tape::Id ya = eval_on_tape(tape, e.kids[0], nets, xa);
      const Tape::Id yb = eval_on_tape(tape, e.kids[1], nets, xb);
      return tape.concat_cols(ya, yb);
    }
    case EvalExpr::Kind::scale:
      return tape.scale(eval_on_tape(tape, e.kids[0], nets, x), e.coeff);
    case EvalExpr::Kind::sum:
      return tape.add(eval_on_tape(tape, e.kids[0], nets, x),
                      eval_on_tape(tape, e.kids[1], nets, x));
  }
  throw std::logic_error("unreachable");
}

Tape::Id matrix_on_tape(Tape& tape, const EvalExpr& e,
                        const std::map<std::string, TapeNet>& nets) {
  switch (e.kind) {
    case EvalExpr::Kind::net:
      return net_matrix(tape, nets.at(e.net_name));
    case EvalExpr::Kind::identity:
      return tape.constant(Tensor2::identity(e.in_width));
    case EvalExpr::Kind::compose:
      return tape.matmul(matrix_on_tape(tape, e.kids[0], nets),
                         matrix_on_tape(tape, e.kids[1], nets));
    case EvalExpr::Kind::product:
      return tape.kron(matrix_on_tape(tape, e.kids[0], nets),
                       matrix_on_tape(tape, e.kids[1], nets));
    case EvalExpr::Kind::scale:
      return tape.scale(matrix_on_tape(tape, e.kids[0], nets), e.coeff);
    case EvalExpr::Kind::sum:
      return tape.add(matrix_on_tape(tape, e.kids[0], nets),
                      matrix_on_tape(tape, e.kids[1], nets));
  }
  throw std::logic_error("unreachable");
}

Tape::Id relation_residual_on_tape(Tape& tape, const CompiledRelation& rel,
                                   const std::map<std::string, TapeNet>& nets,
                                   Tape::Id points) {
  if (rel.semantics == ProductSemantics::concat) {
    const Tape::Id l = eval_on_tape(tape, rel.lhs, nets, points);
    const Tape::Id r = eval_on_tape(tape, rel.rhs, nets, points);
    return tape.mean_row_sq_diff(l, r);
  }
  const Tape::Id lm = matrix_on_tape(tape, rel.lhs, nets);
  const Tape::Id rm = matrix_on_tape(tape, rel.rhs, nets);
  const Tape::Id yl = tape.matmul_nt(points, lm);
  const Tape::Id yr = tape.matmul_nt(points, rm);
  return tape.mean_row_sq_diff(yl, yr);
}

}  // namespace repnet
