#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccn/balanced.hpp"
#include "ccn/expr.hpp"
#include "ccn/groupoid.hpp"
#include "ccn/phase.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Virtual vector fields and their realization.
//
// A virtual field assigns one control module to every input-tree class of a
// network. Realization produces the actual vector field on the network's
// phase space: the block of node a applies its class module to the blocks of
// the sources of a's in-edges, in canonical slot order. Nodes with no inputs
// contribute the zero block.
// ---------------------------------------------------------------------------

struct SymmetryOptions {
  int samples = 64;
  double tol = 1e-9;
  uint64_t seed = 42;
};

struct SymmetryReport {
  bool pass = true;
  double max_defect = 0.0;
  // Transposition (as two canonical slot positions) and sample realizing the
  // maximal defect.
  int slot_a = -1;
  int slot_b = -1;
  std::vector<std::vector<double>> witness;
};

/// Samples a generating set of equal-type slot transpositions and reports the
/// largest deviation from slot-exchange invariance.
SymmetryReport validate_symmetry(const BoundModule& m, const SymmetryOptions& opt = {});

enum class SymmetrizeMode { automatic, expand, wrapper };

/// Group-averages a module over its slot symmetries. Expansion rewrites the
/// output expressions as an explicit average (group order <= 24); the wrapper
/// form averages at evaluation time. `automatic` picks expansion when small.
BoundModule symmetrize(const BoundModule& m, SymmetrizeMode mode = SymmetrizeMode::automatic);

struct VirtualField {
  GraphPtr graph;
  Skeleton sk;
  PhaseDims dims;
  std::vector<BoundModule> modules;  // by class index
};

/// Binds one module per input-tree class. Keys may be class ids ("c0") or
/// printed signatures. Leafless classes may be omitted (zero module); other
/// classes must be covered. Every module must pass validate_symmetry.
VirtualField make_virtual_field(
    GraphPtr g, const PhaseDims& dims,
    const std::vector<std::pair<std::string, ModuleSpec>>& modules,
    const SymmetryOptions& symmetry = {});

/// Programmatic variant: modules listed by class index.
VirtualField make_virtual_field(GraphPtr g, const PhaseDims& dims,
                                std::vector<BoundModule> modules,
                                const SymmetryOptions& symmetry = {});

struct AssembledField {
  GraphPtr graph;
  SpaceLayout space;
  std::vector<BoundModule> modules;  // by class index
  struct NodePlan {
    int klass = -1;
    std::vector<int> sources;  // per canonical slot, the source node
  };
  std::vector<NodePlan> plans;

  int dim() const { return space.total; }
  void eval_into(const std::vector<double>& x, std::vector<double>& out) const;
  std::vector<double> operator()(const std::vector<double>& x) const;
};

AssembledField realize(const VirtualField& w);

/// Transports a virtual field along an etale map phi: domain -> codomain.
/// Each domain class receives the module of its image class; signatures agree
/// exactly, so modules rebind without change.
VirtualField pullback_field(const GraphMorphism& phi, const VirtualField& w);

struct RelatedReport {
  bool pass = false;
  double max_defect = 0.0;
  double tol = 0.0;
  int samples = 0;
  uint64_t seed = 0;
  std::vector<double> worst_sample;
};

/// Certifies numerically that realized fields upstairs and downstairs
/// intertwine through the phase-space gather of `phi`: the downstairs field
/// of `w` on the codomain, against the pullback field on the domain.
RelatedReport check_related(const GraphMorphism& phi, const VirtualField& w,
                            int samples = 64, double tol = 1e-10,
                            uint64_t seed = 42);

struct GroupInvarianceReport {
  bool pass = false;
  double max_defect = 0.0;
  double tol = 0.0;
  size_t group_order = 0;
  int samples = 0;
  uint64_t seed = 0;
};

/// Checks equivariance of the realized field under every color-preserving
/// graph automorphism.
GroupInvarianceReport check_group_invariance(const VirtualField& w, int samples = 64,
                                             double tol = 1e-10, uint64_t seed = 42,
                                             int max_nodes = 12);

/// True when `w_domain` is exactly the pullback of `w_codomain` along `phi`
/// and the class correspondence is a bijection, i.e. the two assignments
/// carry the same dynamics. Requires the class map to hit every codomain
/// class.
bool check_ode_equivalence(const GraphMorphism& phi, const VirtualField& w_domain,
                           const VirtualField& w_codomain);

bool same_module(const BoundModule& x, const BoundModule& y);

}  // namespace ccn
