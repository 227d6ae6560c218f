#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ccn/dynamics.hpp"
#include "ccn/matrix.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Linear control modules and block-structured assembly.
//
// A linear module gives one coefficient block per input slot, with equal-type
// slots carrying bitwise-identical blocks; that equality is the linear form
// of slot symmetry and is enforced exactly. Assembly accumulates blocks into
// an N x N block matrix: parallel edges from one source add their blocks.
// ---------------------------------------------------------------------------

struct LinearModule {
  InputSignature signature;
  int root_dim = 0;
  std::vector<int> slot_dims;
  std::vector<Matrix> blocks;  // one per slot, canonical order
};

/// Per-slot blocks; validates shapes and exact equality on equal-type slots.
LinearModule make_linear_module(const InputSignature& signature, const PhaseDims& dims,
                                std::vector<Matrix> blocks);

/// Blocks keyed by slot type ("edgeColor:sourceColor"); equal-type equality
/// holds by construction. Every slot type of the signature must be covered.
LinearModule make_linear_module_by_type(const InputSignature& signature,
                                        const PhaseDims& dims,
                                        const std::map<std::string, Matrix>& blocks,
                                        const ColorGraph& colors);

struct LinearField {
  GraphPtr graph;
  Skeleton sk;
  PhaseDims dims;
  std::vector<LinearModule> modules;  // by class index
};

LinearField make_linear_field(GraphPtr g, const PhaseDims& dims,
                              std::vector<LinearModule> modules);

/// Key-addressed variant mirroring make_virtual_field.
LinearField make_linear_field(
    GraphPtr g, const PhaseDims& dims,
    const std::vector<std::pair<std::string, std::map<std::string, Matrix>>>& modules);

struct LinearAssembled {
  SpaceLayout space;
  Matrix matrix;
};

LinearAssembled assemble_matrix(const LinearField& w);

/// Transports a linear assignment along an etale map, class by class.
LinearField linear_pullback(const GraphMorphism& phi, const LinearField& w);

/// The linear module of each class as an expression module, for cross-checks
/// against the smooth pipeline.
VirtualField as_virtual_field(const LinearField& w);

/// Exact intertwining test: with P the phase gather of phi, checks
/// P * A_codomain == A_domain * P entry for entry, no tolerance.
bool verify_intertwine(const GraphMorphism& phi, const LinearAssembled& domain_side,
                       const LinearAssembled& codomain_side);

/// Dense nonsymmetric eigenvalues, sorted by (re, im). Guarded to small
/// matrices; throws TooLarge above `max_dim`.
std::vector<std::complex<double>> eigenvalues(const Matrix& m, int max_dim = 64);

struct SpectrumReport {
  bool included = false;
  double tol = 0.0;
  std::vector<std::complex<double>> spectrum_codomain;
  std::vector<std::complex<double>> spectrum_domain;
  std::vector<std::complex<double>> unmatched;
};

/// Checks the codomain spectrum is contained in the domain spectrum with
/// multiplicity, matching eigenvalues within `tol`. Requires phi surjective
/// on nodes so the phase gather is injective.
SpectrumReport spectrum_inclusion(const GraphMorphism& phi,
                                  const LinearAssembled& domain_side,
                                  const LinearAssembled& codomain_side,
                                  double tol = 1e-8);

}  // namespace ccn
