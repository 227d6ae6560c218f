#include "ccn/linear.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ccn {

namespace {

void check_block_shapes(const LinearModule& m) {
  if (m.blocks.size() != m.slot_dims.size()) {
    fail(Errc::block_shape_mismatch,
         std::to_string(m.blocks.size()) + " blocks for " +
             std::to_string(m.slot_dims.size()) + " slots");
  }
  for (size_t i = 0; i < m.blocks.size(); ++i) {
    if (m.blocks[i].rows != m.root_dim || m.blocks[i].cols != m.slot_dims[i]) {
      fail(Errc::block_shape_mismatch,
           "slot " + std::to_string(i) + " block is " +
               std::to_string(m.blocks[i].rows) + "x" +
               std::to_string(m.blocks[i].cols) + ", expected " +
               std::to_string(m.root_dim) + "x" + std::to_string(m.slot_dims[i]));
    }
  }
  for (size_t i = 0; i + 1 < m.blocks.size(); ++i) {
    if (m.signature.slots[i] == m.signature.slots[i + 1] &&
        !(m.blocks[i] == m.blocks[i + 1])) {
      fail(Errc::asymmetric_blocks,
           "slots " + std::to_string(i) + " and " + std::to_string(i + 1) +
               " share a type but carry different blocks");
    }
  }
}

std::string slot_type_key(const std::pair<int, int>& type, const ColorGraph& colors) {
  return colors.edge_colors[type.first].id + ":" + colors.node_colors[type.second];
}

}  // namespace

LinearModule make_linear_module(const InputSignature& signature, const PhaseDims& dims,
                                std::vector<Matrix> blocks) {
  LinearModule m;
  m.signature = signature;
  m.root_dim = dims.by_color[signature.root_color];
  for (const auto& slot : signature.slots) {
    m.slot_dims.push_back(dims.by_color[slot.second]);
  }
  m.blocks = std::move(blocks);
  check_block_shapes(m);
  return m;
}

LinearModule make_linear_module_by_type(const InputSignature& signature,
                                        const PhaseDims& dims,
                                        const std::map<std::string, Matrix>& blocks,
                                        const ColorGraph& colors) {
  std::map<std::string, int> uses;
  std::vector<Matrix> per_slot;
  for (const auto& slot : signature.slots) {
    std::string key = slot_type_key(slot, colors);
    auto it = blocks.find(key);
    if (it == blocks.end()) {
      fail(Errc::unmapped_element, "no block for slot type '" + key + "'");
    }
    uses[key]++;
    per_slot.push_back(it->second);
  }
  for (const auto& [key, block] : blocks) {
    if (!uses.count(key)) {
      fail(Errc::unmapped_element, "block for absent slot type '" + key + "'");
    }
  }
  return make_linear_module(signature, dims, std::move(per_slot));
}

LinearField make_linear_field(GraphPtr g, const PhaseDims& dims,
                              std::vector<LinearModule> modules) {
  LinearField field;
  field.graph = g;
  field.sk = skeleton(g);
  field.dims = dims;
  if (modules.size() != field.sk.classes.size()) {
    fail(Errc::unmapped_element,
         "expected one module per class (" + std::to_string(field.sk.classes.size()) +
             "), got " + std::to_string(modules.size()));
  }
  for (size_t k = 0; k < modules.size(); ++k) {
    if (modules[k].signature != field.sk.classes[k].signature) {
      fail(Errc::arity_mismatch, "module bound to class '" + field.sk.classes[k].id +
                                     "' carries a different signature");
    }
  }
  field.modules = std::move(modules);
  return field;
}

LinearField make_linear_field(
    GraphPtr g, const PhaseDims& dims,
    const std::vector<std::pair<std::string, std::map<std::string, Matrix>>>& modules) {
  Skeleton sk = skeleton(g);
  std::vector<LinearModule> bound(sk.classes.size());
  std::vector<char> have(sk.classes.size(), 0);
  for (const auto& [key, blocks] : modules) {
    int target = -1;
    for (size_t k = 0; k < sk.classes.size(); ++k) {
      if (sk.classes[k].id == key ||
          print_signature(sk.classes[k].signature, *g->colors) == key) {
        target = static_cast<int>(k);
        break;
      }
    }
    if (target < 0) {
      fail(Errc::unmapped_element, "no input-tree class matches key '" + key + "'");
    }
    if (have[target]) {
      fail(Errc::duplicate_id,
           "class '" + sk.classes[target].id + "' is bound by two module entries");
    }
    have[target] = 1;
    bound[target] = make_linear_module_by_type(sk.classes[target].signature, dims,
                                               blocks, *g->colors);
  }
  for (size_t k = 0; k < sk.classes.size(); ++k) {
    if (have[k]) continue;
    if (!sk.classes[k].signature.leafless()) {
      fail(Errc::unmapped_element, "class '" + sk.classes[k].id + "' has no module");
    }
    bound[k] = make_linear_module(sk.classes[k].signature, dims, {});
  }
  return make_linear_field(g, dims, std::move(bound));
}

LinearAssembled assemble_matrix(const LinearField& w) {
  LinearAssembled out;
  out.space = layout(w.graph, w.dims);
  out.matrix = Matrix(out.space.total, out.space.total);
  for (size_t a = 0; a < w.graph->nodes.size(); ++a) {
    const LinearModule& m = w.modules[w.sk.class_of[a]];
    const auto& in = w.graph->in_edges[a];
    for (size_t i = 0; i < in.size(); ++i) {
      int s = w.graph->edges[in[i]].src;
      const Matrix& block = m.blocks[i];
      for (int r = 0; r < block.rows; ++r) {
        for (int c = 0; c < block.cols; ++c) {
          out.matrix.at(out.space.offset[a] + r, out.space.offset[s] + c) +=
              block.at(r, c);
        }
      }
    }
  }
  return out;
}

LinearField linear_pullback(const GraphMorphism& phi, const LinearField& w) {
  if (!(*phi.codomain == *w.graph)) {
    fail(Errc::domain_mismatch, "field lives on a different graph than the codomain");
  }
  ClassMap cm = induced_class_map(phi);
  LinearField out;
  out.graph = phi.domain;
  out.sk = std::move(cm.source);
  out.dims = w.dims;
  out.modules.resize(out.sk.classes.size());
  for (size_t k = 0; k < out.sk.classes.size(); ++k) {
    out.modules[k] = w.modules[cm.class_map[k]];
    out.modules[k].signature = out.sk.classes[k].signature;
  }
  return out;
}

VirtualField as_virtual_field(const LinearField& w) {
  std::vector<BoundModule> modules;
  for (const auto& m : w.modules) {
    std::vector<ExprPtr> outputs;
    if (!m.slot_dims.empty()) {
      for (int c = 0; c < m.root_dim; ++c) {
        ExprPtr sum;
        for (size_t i = 0; i < m.blocks.size(); ++i) {
          for (int j = 0; j < m.blocks[i].cols; ++j) {
            ExprPtr term =
                make_binary(Expr::Kind::mul, make_number(m.blocks[i].at(c, j)),
                            make_variable(static_cast<int>(i), j));
            sum = sum ? make_binary(Expr::Kind::add, sum, term) : term;
          }
        }
        outputs.push_back(sum ? sum : make_number(0.0));
      }
    }
    modules.push_back(bind_module(std::move(outputs), m.signature, w.dims));
  }
  return make_virtual_field(w.graph, w.dims, std::move(modules));
}

bool verify_intertwine(const GraphMorphism& phi, const LinearAssembled& domain_side,
                       const LinearAssembled& codomain_side) {
  if (!(*domain_side.space.graph == *phi.domain) ||
      !(*codomain_side.space.graph == *phi.codomain)) {
    fail(Errc::shape_mismatch, "assembled matrices do not match the map's graphs");
  }
  if (domain_side.matrix.rows != domain_side.matrix.cols ||
      domain_side.matrix.rows != domain_side.space.total ||
      codomain_side.matrix.rows != codomain_side.matrix.cols ||
      codomain_side.matrix.rows != codomain_side.space.total) {
    fail(Errc::shape_mismatch, "assembled matrices are not square on their spaces");
  }
  if (domain_side.space.length.size() != phi.node_map.size()) {
    fail(Errc::shape_mismatch, "node count mismatch");
  }

  IndexedLinearMap gather;
  gather.input = codomain_side.space;
  gather.output = domain_side.space;
  gather.assignment = phi.node_map;
  Matrix p = materialize(gather);

  Matrix lhs = multiply(p, codomain_side.matrix);
  Matrix rhs = multiply(domain_side.matrix, p);
  return lhs == rhs;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m, int max_dim) {
  if (m.rows != m.cols) fail(Errc::shape_mismatch, "eigenvalues need a square matrix");
  if (m.rows > max_dim) {
    fail(Errc::too_large, "matrix order " + std::to_string(m.rows) +
                              " exceeds the bound " + std::to_string(max_dim));
  }
  Eigen::MatrixXd a(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) a(i, j) = m.at(i, j);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) {
    fail(Errc::non_finite_state, "eigenvalue iteration failed to converge");
  }
  std::vector<std::complex<double>> out(m.rows);
  for (int i = 0; i < m.rows; ++i) out[i] = solver.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

SpectrumReport spectrum_inclusion(const GraphMorphism& phi,
                                  const LinearAssembled& domain_side,
                                  const LinearAssembled& codomain_side, double tol) {
  std::vector<char> hit(phi.codomain->nodes.size(), 0);
  for (int b : phi.node_map) hit[b] = 1;
  if (!std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; })) {
    fail(Errc::not_injective,
         "map misses codomain nodes, its phase gather is not injective");
  }

  SpectrumReport report;
  report.tol = tol;
  report.spectrum_domain = eigenvalues(domain_side.matrix);
  report.spectrum_codomain = eigenvalues(codomain_side.matrix);

  std::vector<char> used(report.spectrum_domain.size(), 0);
  for (const auto& lam : report.spectrum_codomain) {
    int best = -1;
    double best_dist = 0.0;
    for (size_t i = 0; i < report.spectrum_domain.size(); ++i) {
      if (used[i]) continue;
      double dist = std::abs(report.spectrum_domain[i] - lam);
      if (best < 0 || dist < best_dist) {
        best = static_cast<int>(i);
        best_dist = dist;
      }
    }
    if (best >= 0 && best_dist <= tol) {
      used[best] = 1;
    } else {
      report.unmatched.push_back(lam);
    }
  }
  report.included = report.unmatched.empty();
  return report;
}

}  // namespace ccn
