#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccn/graph.hpp"
#include "ccn/matrix.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Phase spaces.
//
// A phase assignment gives every node color a state dimension; the phase
// space of
// a network is the product of its nodes' blocks, flattened into one
// contiguous vector in canonical node order. Graph maps push forward to
// linear gather maps going the other way: the block at node a reads the block
// at phi(a).
// ---------------------------------------------------------------------------

struct PhaseDims {
  ColorGraphPtr colors;
  std::vector<int> by_color;  // per node color, >= 1
};

/// Resolves a by-name dimension table against a color vocabulary. Every node
/// color must be covered with a positive dimension.
PhaseDims resolve_dims(ColorGraphPtr colors, const std::map<std::string, int>& dims);

struct SpaceLayout {
  GraphPtr graph;
  std::vector<int> offset;  // per node
  std::vector<int> length;  // per node
  int total = 0;
};

SpaceLayout layout(GraphPtr g, const PhaseDims& dims);

/// Block-structured 0/1 gather map between two layouts.
/// assignment[b] = a means: output block b copies input block a.
struct IndexedLinearMap {
  SpaceLayout input;
  SpaceLayout output;
  std::vector<int> assignment;  // per output node, index into input nodes
};

/// The phase-space shadow of a graph map phi: domain -> codomain: a linear
/// map from the codomain's phase space to the domain's, copying block phi(a)
/// into block a.
IndexedLinearMap pushforward(const GraphMorphism& phi, const PhaseDims& dims);

std::vector<double> apply(const IndexedLinearMap& map, const std::vector<double>& x);

/// Dense form; rows index the output layout, columns the input layout.
Matrix materialize(const IndexedLinearMap& map);

}  // namespace ccn
