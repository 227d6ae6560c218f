#pragma once

#include <string>
#include <vector>

#include "ccn/graph.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// The symmetry groupoid of a network, held by its skeleton.
//
// Nodes are grouped into classes of isomorphic input trees; each class keeps
// one representative and the automorphism group of its tree. Arrows between
// distinct isomorphic trees are recovered on demand from canonical leaf
// matchings, so nothing beyond the skeleton is ever stored.
// ---------------------------------------------------------------------------

struct SkeletonClass {
  std::string id;           // "c0", "c1", ... in order of minimal representative
  int representative = -1;  // smallest member in canonical node order
  InputSignature signature;
  std::vector<int> members;  // ascending
  TreeAutGroup aut;
};

struct Skeleton {
  GraphPtr graph;
  std::vector<SkeletonClass> classes;
  std::vector<int> class_of;  // node index -> class index
};

Skeleton skeleton(GraphPtr g);

/// Class-level shadow of an etale map: each input-tree class of the domain
/// lands in the class of its image tree. Signatures transport unchanged.
struct ClassMap {
  Skeleton source;
  Skeleton target;
  std::vector<int> class_map;  // source class index -> target class index
};

/// Requires `phi` to certify etale.
ClassMap induced_class_map(const GraphMorphism& phi);

/// True when every class of the target is hit, i.e. the map sees every local
/// model of the codomain. This is the condition under which pullback of
/// dynamics loses nothing.
bool is_essentially_surjective(const ClassMap& cm);

struct GraphAutomorphismGroup {
  std::vector<GraphMorphism> elements;  // includes the identity
  size_t order() const { return elements.size(); }
};

/// Exhaustive search for color-preserving graph automorphisms (node and edge
/// bijections). Intended for small networks; throws TooLarge above
/// `max_nodes`.
GraphAutomorphismGroup graph_automorphisms(GraphPtr g, int max_nodes = 12);

}  // namespace ccn
