#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccn/error.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Color graphs.
//
// A color graph fixes the vocabulary of a model class: node colors name the
// kinds of cells, edge colors name the kinds of couplings, and each edge color
// carries the node colors it may connect. Concrete networks are graphs
// labeled over a color graph, and every map in this library preserves those
// labels by construction.
// ---------------------------------------------------------------------------

struct RawEdgeColor {
  std::string id;
  std::string src;
  std::string dst;
};

struct RawColorGraph {
  std::vector<std::string> node_colors;
  std::vector<RawEdgeColor> edge_colors;
};

struct ColorGraph {
  struct EdgeColor {
    std::string id;
    int src = -1;  // index into node_colors
    int dst = -1;
  };

  // Both lists are sorted by id, so index order and id order agree.
  std::vector<std::string> node_colors;
  std::vector<EdgeColor> edge_colors;

  int node_color_index(const std::string& id) const;
  int edge_color_index(const std::string& id) const;
  bool operator==(const ColorGraph& other) const;
};

using ColorGraphPtr = std::shared_ptr<const ColorGraph>;

/// Checks id uniqueness and endpoint resolution, sorts colors into canonical
/// order, and freezes the result.
ColorGraphPtr validate_color_graph(const RawColorGraph& raw);

// ---------------------------------------------------------------------------
// Colored graphs (networks).
// ---------------------------------------------------------------------------

struct RawNode {
  std::string id;
  std::string color;
};

struct RawEdge {
  std::string id;
  std::string src;
  std::string dst;
  std::string color;
};

struct ColoredGraph {
  struct Node {
    std::string id;
    int color = -1;
  };
  struct Edge {
    std::string id;
    int src = -1;  // node indices
    int dst = -1;
    int color = -1;
  };

  ColorGraphPtr colors;
  // Sorted by id; node and edge indices below always refer to this order.
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  // in_edges[a] lists the edges with target a, sorted by
  // (edge color, source node color, source node, edge). Every per-node
  // traversal in the library walks in-edges in exactly this order.
  std::vector<std::vector<int>> in_edges;

  int node_index(const std::string& id) const;
  int edge_index(const std::string& id) const;
  bool same_colors(const ColoredGraph& other) const;
  /// Structural equality: same color graph, same node/edge ids, same
  /// endpoints and labels.
  bool operator==(const ColoredGraph& other) const;
};

using GraphPtr = std::shared_ptr<const ColoredGraph>;

/// Validates endpoint resolution, id uniqueness, and color compatibility of
/// every edge against its edge color, then freezes the graph in canonical
/// order.
GraphPtr validate_colored_graph(ColorGraphPtr colors,
                                const std::vector<RawNode>& nodes,
                                const std::vector<RawEdge>& edges);

/// The color graph viewed as a network over itself: one node per node color,
/// one edge per edge color, identity labeling. Target of the tautological
/// coloring map.
GraphPtr graph_of_colors(ColorGraphPtr colors);

// ---------------------------------------------------------------------------
// Graph morphisms.
// ---------------------------------------------------------------------------

struct GraphMorphism {
  GraphPtr domain;
  GraphPtr codomain;
  std::vector<int> node_map;  // domain node index -> codomain node index
  std::vector<int> edge_map;  // domain edge index -> codomain edge index
};

/// Builds a label-preserving graph map from id-level assignments.
/// Every node and edge of the domain must be mapped; endpoints must commute
/// with the maps and colors must be preserved on the nose.
GraphMorphism validate_morphism(
    GraphPtr domain, GraphPtr codomain,
    const std::vector<std::pair<std::string, std::string>>& node_map,
    const std::vector<std::pair<std::string, std::string>>& edge_map);

GraphMorphism identity_morphism(GraphPtr g);

/// g after f. Requires codomain(f) == domain(g) structurally.
GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f);

/// The tautological coloring map g -> graph_of_colors(g->colors).
GraphMorphism coloring_morphism(GraphPtr g);

bool same_morphism(const GraphMorphism& a, const GraphMorphism& b);

// ---------------------------------------------------------------------------
// Input trees.
//
// The input tree of a node records the node together with all edges feeding
// it. It is the local shape a control law sees: one slot per in-edge, each
// slot typed by the edge color and the color of the node at the far end.
// ---------------------------------------------------------------------------

struct InputTree {
  GraphPtr graph;
  int root = -1;
  int root_color = -1;

  struct Leaf {
    int edge = -1;
    int edge_color = -1;
    int source = -1;
    int source_color = -1;
  };
  // Canonical order: (edge color, source color, source node, edge).
  std::vector<Leaf> leaves;
};

InputTree input_tree(GraphPtr g, const std::string& node_id);
InputTree input_tree(GraphPtr g, int node);

/// Complete isomorphism invariant of an input tree: the root color plus the
/// sorted multiset of slot types.
struct InputSignature {
  int root_color = -1;
  std::vector<std::pair<int, int>> slots;  // (edge color, source color), sorted

  auto operator<=>(const InputSignature&) const = default;
  bool leafless() const { return slots.empty(); }
};

InputSignature signature_of(const InputTree& tree);

/// Stable text form, usable as a key in field files:
///   rootColor<-[edgeColor:sourceColor,...]
std::string print_signature(const InputSignature& sig, const ColorGraph& colors);
std::optional<InputSignature> parse_signature(const std::string& text,
                                              const ColorGraph& colors);

/// Root-fixing isomorphism between two input trees over the same color graph,
/// as matched leaf pairs (edge index in t1's graph, edge index in t2's graph)
/// in canonical slot order. Empty optional iff the signatures differ.
std::optional<std::vector<std::pair<int, int>>> tree_iso(const InputTree& t1,
                                                         const InputTree& t2);

/// The symmetry group of an input tree: leaves may permute within blocks of
/// equal slot type, so the group is a product of symmetric groups.
struct TreeAutGroup {
  struct Block {
    std::pair<int, int> type;  // (edge color, source color)
    int first = 0;             // canonical slot positions [first, first+size)
    int size = 0;
  };
  std::vector<Block> blocks;
  unsigned long long order = 1;
};

TreeAutGroup tree_automorphism_group(const InputTree& tree);

/// Enumerates the full group as permutations of canonical slot positions.
/// Factorial in block sizes; callers cap via `max_order`.
std::vector<std::vector<int>> tree_automorphism_elements(
    const TreeAutGroup& group, unsigned long long max_order);

// ---------------------------------------------------------------------------
// Etale certification.
//
// A graph map is etale when it restricts to an isomorphism on every input
// tree: in-edges of each node map bijectively onto in-edges of the image
// node. These are exactly the maps that transport dynamics.
// ---------------------------------------------------------------------------

struct EtaleResult {
  enum class FailReason {
    not_injective_on_in_edges,
    not_surjective_on_in_edges,
  };
  struct Failure {
    int node = -1;
    FailReason reason{};
  };

  bool ok = false;
  // witnesses[a] pairs each in-edge of a with its image in-edge of phi(a),
  // in the domain node's canonical in-edge order. Present when ok.
  std::vector<std::vector<std::pair<int, int>>> witnesses;
  std::optional<Failure> failure;

  explicit operator bool() const { return ok; }
};

EtaleResult is_etale(const GraphMorphism& phi);

}  // namespace ccn
