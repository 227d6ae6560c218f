#include "ccn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ccn {

namespace {

TreeAutGroup signature_aut_group(const InputSignature& sig) {
  TreeAutGroup group;
  size_t i = 0;
  while (i < sig.slots.size()) {
    size_t j = i;
    while (j < sig.slots.size() && sig.slots[j] == sig.slots[i]) ++j;
    TreeAutGroup::Block block;
    block.type = sig.slots[i];
    block.first = static_cast<int>(i);
    block.size = static_cast<int>(j - i);
    for (int k = 2; k <= block.size; ++k) {
      group.order *= static_cast<unsigned long long>(k);
    }
    group.blocks.push_back(block);
    i = j;
  }
  return group;
}

std::vector<std::vector<double>> sample_slots(const std::vector<int>& slot_dims,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> slots(slot_dims.size());
  for (size_t i = 0; i < slot_dims.size(); ++i) {
    slots[i].resize(slot_dims[i]);
    for (double& v : slots[i]) v = u(rng);
  }
  return slots;
}

std::vector<double> sample_vector(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(dim);
  for (double& v : x) v = u(rng);
  return x;
}

constexpr unsigned long long kExpandLimit = 24;
constexpr unsigned long long kWrapperLimit = 40320;  // 8!

}  // namespace

SymmetryReport validate_symmetry(const BoundModule& m, const SymmetryOptions& opt) {
  SymmetryReport report;
  if (m.zero || m.slot_dims.size() < 2) return report;

  TreeAutGroup group = signature_aut_group(m.signature);
  std::vector<std::pair<int, int>> transpositions;
  for (const auto& block : group.blocks) {
    for (int k = 0; k + 1 < block.size; ++k) {
      transpositions.emplace_back(block.first + k, block.first + k + 1);
    }
  }
  if (transpositions.empty()) return report;

  std::mt19937_64 rng(opt.seed);
  std::vector<double> out, out_swapped;
  for (int s = 0; s < opt.samples; ++s) {
    auto slots = sample_slots(m.slot_dims, rng);
    m.eval_into(slots, out);
    for (const auto& [i, j] : transpositions) {
      std::swap(slots[i], slots[j]);
      m.eval_into(slots, out_swapped);
      std::swap(slots[i], slots[j]);
      for (int c = 0; c < m.root_dim; ++c) {
        double defect = std::fabs(out[c] - out_swapped[c]);
        if (defect > report.max_defect) {
          report.max_defect = defect;
          report.slot_a = i;
          report.slot_b = j;
          report.witness = slots;
        }
      }
    }
  }
  report.pass = report.max_defect <= opt.tol;
  return report;
}

BoundModule symmetrize(const BoundModule& m, SymmetrizeMode mode) {
  if (m.zero) return m;
  TreeAutGroup group = signature_aut_group(m.signature);
  if (group.order == 1 && m.expression_backed()) return m;

  bool expand = mode == SymmetrizeMode::expand ||
                (mode == SymmetrizeMode::automatic && group.order <= kExpandLimit);
  if (expand && group.order > kExpandLimit) {
    fail(Errc::group_too_large,
         "expansion over " + std::to_string(group.order) + " permutations refused");
  }
  if (expand && !m.expression_backed()) {
    fail(Errc::group_too_large, "cannot expand a module without expressions");
  }

  auto perms = tree_automorphism_elements(group, expand ? kExpandLimit : kWrapperLimit);

  BoundModule out;
  out.signature = m.signature;
  out.root_dim = m.root_dim;
  out.slot_dims = m.slot_dims;

  if (expand) {
    double scale = 1.0 / static_cast<double>(perms.size());
    for (int c = 0; c < m.root_dim; ++c) {
      ExprPtr sum;
      for (const auto& perm : perms) {
        ExprPtr term = substitute_slots(m.outputs[c], perm);
        sum = sum ? make_binary(Expr::Kind::add, sum, term) : term;
      }
      out.outputs.push_back(
          make_binary(Expr::Kind::mul, make_number(scale), sum));
    }
    return out;
  }

  auto base = std::make_shared<BoundModule>(m);
  out.base = std::move(base);
  out.average_perms = std::move(perms);
  return out;
}

namespace {

void bind_field_modules(VirtualField& field, const SymmetryOptions& symmetry) {
  for (size_t k = 0; k < field.modules.size(); ++k) {
    const auto& cls = field.sk.classes[k];
    if (field.modules[k].signature != cls.signature) {
      fail(Errc::arity_mismatch,
           "module bound to class '" + cls.id + "' carries a different signature");
    }
    SymmetryReport report = validate_symmetry(field.modules[k], symmetry);
    if (!report.pass) {
      fail(Errc::asymmetric_blocks,
           "module for class '" + cls.id + "' breaks slot symmetry (defect " +
               std::to_string(report.max_defect) + "); symmetrize it first");
    }
  }
}

}  // namespace

VirtualField make_virtual_field(GraphPtr g, const PhaseDims& dims,
                                std::vector<BoundModule> modules,
                                const SymmetryOptions& symmetry) {
  VirtualField field;
  field.graph = g;
  field.sk = skeleton(g);
  field.dims = dims;
  if (modules.size() != field.sk.classes.size()) {
    fail(Errc::unmapped_element,
         "expected one module per class (" + std::to_string(field.sk.classes.size()) +
             "), got " + std::to_string(modules.size()));
  }
  field.modules = std::move(modules);
  bind_field_modules(field, symmetry);
  return field;
}

VirtualField make_virtual_field(
    GraphPtr g, const PhaseDims& dims,
    const std::vector<std::pair<std::string, ModuleSpec>>& modules,
    const SymmetryOptions& symmetry) {
  VirtualField field;
  field.graph = g;
  field.sk = skeleton(g);
  field.dims = dims;
  field.modules.resize(field.sk.classes.size());

  std::vector<char> bound(field.sk.classes.size(), 0);
  for (const auto& [key, spec] : modules) {
    int target = -1;
    for (size_t k = 0; k < field.sk.classes.size(); ++k) {
      if (field.sk.classes[k].id == key ||
          print_signature(field.sk.classes[k].signature, *g->colors) == key) {
        target = static_cast<int>(k);
        break;
      }
    }
    if (target < 0) {
      fail(Errc::unmapped_element, "no input-tree class matches key '" + key + "'");
    }
    if (bound[target]) {
      fail(Errc::duplicate_id, "class '" + field.sk.classes[target].id +
                                   "' is bound by two module entries");
    }
    bound[target] = 1;
    field.modules[target] =
        bind_module(spec, field.sk.classes[target].signature, field.dims);
  }
  for (size_t k = 0; k < field.sk.classes.size(); ++k) {
    if (bound[k]) continue;
    if (!field.sk.classes[k].signature.leafless()) {
      fail(Errc::unmapped_element,
           "class '" + field.sk.classes[k].id + "' (" +
               print_signature(field.sk.classes[k].signature, *g->colors) +
               ") has no module");
    }
    field.modules[k] = bind_module(std::vector<ExprPtr>{},
                                   field.sk.classes[k].signature, field.dims);
  }
  bind_field_modules(field, symmetry);
  return field;
}

void AssembledField::eval_into(const std::vector<double>& x,
                               std::vector<double>& out) const {
  if (static_cast<int>(x.size()) != space.total) {
    fail(Errc::dimension_mismatch,
         "state has length " + std::to_string(x.size()) + ", phase space has " +
             std::to_string(space.total));
  }
  out.assign(space.total, 0.0);
  std::vector<std::vector<double>> slots;
  std::vector<double> block;
  for (size_t a = 0; a < plans.size(); ++a) {
    const NodePlan& plan = plans[a];
    const BoundModule& m = modules[plan.klass];
    if (m.zero) continue;
    slots.assign(plan.sources.size(), {});
    for (size_t i = 0; i < plan.sources.size(); ++i) {
      int s = plan.sources[i];
      slots[i].assign(x.begin() + space.offset[s],
                      x.begin() + space.offset[s] + space.length[s]);
    }
    m.eval_into(slots, block);
    std::copy(block.begin(), block.end(), out.begin() + space.offset[a]);
  }
}

std::vector<double> AssembledField::operator()(const std::vector<double>& x) const {
  std::vector<double> out;
  eval_into(x, out);
  return out;
}

AssembledField realize(const VirtualField& w) {
  AssembledField f;
  f.graph = w.graph;
  f.space = layout(w.graph, w.dims);
  f.modules = w.modules;
  f.plans.resize(w.graph->nodes.size());
  for (size_t a = 0; a < w.graph->nodes.size(); ++a) {
    AssembledField::NodePlan plan;
    plan.klass = w.sk.class_of[a];
    // Canonical in-edge order lines up with the class signature slot by slot;
    // equal-type ambiguity is harmless because modules are slot-symmetric.
    for (int e : w.graph->in_edges[a]) {
      plan.sources.push_back(w.graph->edges[e].src);
    }
    f.plans[a] = std::move(plan);
  }
  return f;
}

VirtualField pullback_field(const GraphMorphism& phi, const VirtualField& w) {
  if (!(*phi.codomain == *w.graph)) {
    fail(Errc::domain_mismatch, "field lives on a different graph than the codomain");
  }
  if (!(*phi.domain->colors == *w.dims.colors)) {
    fail(Errc::phase_mismatch, "phase dimensions use a different color vocabulary");
  }
  ClassMap cm = induced_class_map(phi);

  VirtualField out;
  out.graph = phi.domain;
  out.sk = std::move(cm.source);
  out.dims = w.dims;
  out.modules.resize(out.sk.classes.size());
  for (size_t k = 0; k < out.sk.classes.size(); ++k) {
    const BoundModule& source = w.modules[cm.class_map[k]];
    // Etale maps preserve input trees, so the module transports verbatim.
    out.modules[k] = source;
    out.modules[k].signature = out.sk.classes[k].signature;
  }
  return out;
}

RelatedReport check_related(const GraphMorphism& phi, const VirtualField& w,
                            int samples, double tol, uint64_t seed) {
  RelatedReport report;
  report.tol = tol;
  report.samples = samples;
  report.seed = seed;

  VirtualField pulled = pullback_field(phi, w);
  AssembledField upstairs = realize(pulled);
  AssembledField downstairs = realize(w);
  IndexedLinearMap gather = pushforward(phi, w.dims);

  std::mt19937_64 rng(seed);
  std::vector<double> fx;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x = sample_vector(downstairs.dim(), rng);
    downstairs.eval_into(x, fx);
    std::vector<double> lhs = ccn::apply(gather, fx);
    std::vector<double> rhs = upstairs(ccn::apply(gather, x));
    for (size_t i = 0; i < lhs.size(); ++i) {
      double defect = std::fabs(lhs[i] - rhs[i]);
      if (defect > report.max_defect) {
        report.max_defect = defect;
        report.worst_sample = x;
      }
    }
  }
  report.pass = report.max_defect <= tol;
  return report;
}

GroupInvarianceReport check_group_invariance(const VirtualField& w, int samples,
                                             double tol, uint64_t seed, int max_nodes) {
  GroupInvarianceReport report;
  report.tol = tol;
  report.samples = samples;
  report.seed = seed;

  GraphAutomorphismGroup autos = graph_automorphisms(w.graph, max_nodes);
  report.group_order = autos.order();
  AssembledField field = realize(w);

  std::mt19937_64 rng(seed);
  std::vector<double> fx;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x = sample_vector(field.dim(), rng);
    field.eval_into(x, fx);
    for (const auto& h : autos.elements) {
      IndexedLinearMap gather = pushforward(h, w.dims);
      std::vector<double> lhs = ccn::apply(gather, fx);
      std::vector<double> rhs = field(ccn::apply(gather, x));
      for (size_t i = 0; i < lhs.size(); ++i) {
        report.max_defect = std::max(report.max_defect, std::fabs(lhs[i] - rhs[i]));
      }
    }
  }
  report.pass = report.max_defect <= tol;
  return report;
}

bool same_module(const BoundModule& x, const BoundModule& y) {
  if (x.signature != y.signature || x.root_dim != y.root_dim ||
      x.slot_dims != y.slot_dims || x.zero != y.zero) {
    return false;
  }
  if (x.zero) return true;
  if (x.expression_backed() != y.expression_backed()) return false;
  if (x.expression_backed()) {
    if (x.outputs.size() != y.outputs.size()) return false;
    for (size_t i = 0; i < x.outputs.size(); ++i) {
      if (!structurally_equal(x.outputs[i], y.outputs[i])) return false;
    }
    return true;
  }
  return x.average_perms == y.average_perms && same_module(*x.base, *y.base);
}

bool check_ode_equivalence(const GraphMorphism& phi, const VirtualField& w_domain,
                           const VirtualField& w_codomain) {
  ClassMap cm = induced_class_map(phi);
  if (!is_essentially_surjective(cm)) {
    fail(Errc::not_essentially_surjective,
         "some codomain class is missed, pullback forgets its module");
  }
  // Signatures transport exactly, so distinct classes stay distinct and
  // essential surjectivity upgrades the class map to a bijection.
  std::vector<int> hits(cm.target.classes.size(), 0);
  for (int t : cm.class_map) hits[t]++;
  for (int h : hits) {
    if (h != 1) return false;
  }
  for (size_t k = 0; k < cm.class_map.size(); ++k) {
    if (!same_module(w_domain.modules[k], w_codomain.modules[cm.class_map[k]])) {
      return false;
    }
  }
  return true;
}

}  // namespace ccn
