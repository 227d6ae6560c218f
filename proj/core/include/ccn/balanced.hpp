#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccn/graph.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Balanced partitions and quotient networks.
//
// A partition of the nodes is balanced when any two nodes in a block receive
// matching inputs: their in-edges biject preserving edge color and source
// block. Balanced partitions are exactly the ones whose quotient projection
// is etale, which makes the subspace where in-block states agree invariant
// under every vector field the wiring allows.
// ---------------------------------------------------------------------------

struct Partition {
  // Blocks sorted by smallest member, members ascending. Every block is
  // color-homogeneous.
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;  // node index -> block index
};

/// Validates id-level blocks: disjoint, covering, color-homogeneous.
Partition make_partition(GraphPtr g,
                         const std::vector<std::vector<std::string>>& blocks);

/// Normalizes an index-level block assignment (same validation).
Partition make_partition_from_assignment(GraphPtr g, const std::vector<int>& block_of);

Partition discrete_partition(GraphPtr g);

/// True when every block of `p` lies inside a block of `q`.
bool refines(const Partition& p, const Partition& q);

struct BalanceWitness {
  bool balanced = false;
  // matchings[a] pairs in-edges of a with in-edges of its block representative
  // by (edge color, source block), in canonical order. Present when balanced.
  std::vector<std::vector<std::pair<int, int>>> matchings;
  // On failure: a block member whose inputs do not match the representative's.
  std::optional<std::pair<int, int>> offending;  // (representative, member)

  explicit operator bool() const { return balanced; }
};

BalanceWitness is_balanced(GraphPtr g, const Partition& p);

/// Top of the balanced lattice: every balanced partition refines the result.
/// Computed by signature refinement from the color partition.
Partition coarsest_balanced(GraphPtr g);

/// All balanced partitions, coarsest first (block count ascending, then
/// restricted-growth order). Exhaustive; throws TooLarge above `max_nodes`.
std::vector<Partition> enumerate_balanced(GraphPtr g, int max_nodes = 10);

struct QuotientResult {
  GraphPtr quotient;
  GraphMorphism projection;  // domain g, codomain quotient; always etale
};

/// Quotient network of a balanced partition. Block representatives name the
/// quotient nodes and their in-edges name the quotient edges, so quotients of
/// named corpora stay readable.
QuotientResult quotient(GraphPtr g, const Partition& p);

}  // namespace ccn
