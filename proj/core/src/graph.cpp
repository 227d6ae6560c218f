#include "ccn/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace ccn {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::dangling_endpoint: return "DanglingEndpoint";
    case Errc::color_mismatch: return "ColorMismatch";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::not_a_morphism: return "NotAMorphism";
    case Errc::color_not_preserved: return "ColorNotPreserved";
    case Errc::unmapped_element: return "UnmappedElement";
    case Errc::domain_mismatch: return "DomainMismatch";
    case Errc::not_etale: return "NotEtale";
    case Errc::too_large: return "TooLarge";
    case Errc::invalid_partition: return "InvalidPartition";
    case Errc::not_balanced: return "NotBalanced";
    case Errc::missing_color_dim: return "MissingColorDim";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_function: return "UnknownFunction";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::out_of_range_variable: return "OutOfRangeVariable";
    case Errc::nonzero_module_on_leafless_class: return "NonzeroModuleOnLeaflessClass";
    case Errc::group_too_large: return "GroupTooLarge";
    case Errc::phase_mismatch: return "PhaseMismatch";
    case Errc::not_essentially_surjective: return "NotEssentiallySurjective";
    case Errc::block_shape_mismatch: return "BlockShapeMismatch";
    case Errc::asymmetric_blocks: return "AsymmetricBlocks";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::not_injective: return "NotInjective";
    case Errc::non_finite_state: return "NonFiniteState";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

namespace {

template <typename T>
int index_by_id(const std::vector<T>& items, const std::string& id) {
  auto it = std::lower_bound(
      items.begin(), items.end(), id,
      [](const T& item, const std::string& key) { return item.id < key; });
  if (it == items.end() || it->id != id) return -1;
  return static_cast<int>(it - items.begin());
}

}  // namespace

int ColorGraph::node_color_index(const std::string& id) const {
  auto it = std::lower_bound(node_colors.begin(), node_colors.end(), id);
  if (it == node_colors.end() || *it != id) return -1;
  return static_cast<int>(it - node_colors.begin());
}

int ColorGraph::edge_color_index(const std::string& id) const {
  return index_by_id(edge_colors, id);
}

bool ColorGraph::operator==(const ColorGraph& other) const {
  if (node_colors != other.node_colors) return false;
  if (edge_colors.size() != other.edge_colors.size()) return false;
  for (size_t i = 0; i < edge_colors.size(); ++i) {
    const auto& a = edge_colors[i];
    const auto& b = other.edge_colors[i];
    if (a.id != b.id || a.src != b.src || a.dst != b.dst) return false;
  }
  return true;
}

ColorGraphPtr validate_color_graph(const RawColorGraph& raw) {
  auto cg = std::make_shared<ColorGraph>();
  cg->node_colors = raw.node_colors;
  std::sort(cg->node_colors.begin(), cg->node_colors.end());
  for (size_t i = 1; i < cg->node_colors.size(); ++i) {
    if (cg->node_colors[i] == cg->node_colors[i - 1]) {
      fail(Errc::duplicate_id, "node color '" + cg->node_colors[i] + "'");
    }
  }

  std::vector<RawEdgeColor> sorted = raw.edge_colors;
  std::sort(sorted.begin(), sorted.end(),
            [](const RawEdgeColor& a, const RawEdgeColor& b) { return a.id < b.id; });
  for (const auto& ec : sorted) {
    if (!cg->edge_colors.empty() && cg->edge_colors.back().id == ec.id) {
      fail(Errc::duplicate_id, "edge color '" + ec.id + "'");
    }
    ColorGraph::EdgeColor out;
    out.id = ec.id;
    out.src = cg->node_color_index(ec.src);
    out.dst = cg->node_color_index(ec.dst);
    if (out.src < 0) {
      fail(Errc::dangling_endpoint,
           "edge color '" + ec.id + "' source color '" + ec.src + "'");
    }
    if (out.dst < 0) {
      fail(Errc::dangling_endpoint,
           "edge color '" + ec.id + "' target color '" + ec.dst + "'");
    }
    cg->edge_colors.push_back(std::move(out));
  }
  return cg;
}

int ColoredGraph::node_index(const std::string& id) const {
  return index_by_id(nodes, id);
}

int ColoredGraph::edge_index(const std::string& id) const {
  return index_by_id(edges, id);
}

bool ColoredGraph::same_colors(const ColoredGraph& other) const {
  return colors == other.colors || *colors == *other.colors;
}

bool ColoredGraph::operator==(const ColoredGraph& other) const {
  if (!same_colors(other)) return false;
  if (nodes.size() != other.nodes.size() || edges.size() != other.edges.size()) {
    return false;
  }
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != other.nodes[i].id || nodes[i].color != other.nodes[i].color) {
      return false;
    }
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    const auto& a = edges[i];
    const auto& b = other.edges[i];
    if (a.id != b.id || a.src != b.src || a.dst != b.dst || a.color != b.color) {
      return false;
    }
  }
  return true;
}

namespace {

void build_in_edges(ColoredGraph& g) {
  g.in_edges.assign(g.nodes.size(), {});
  for (size_t e = 0; e < g.edges.size(); ++e) {
    g.in_edges[g.edges[e].dst].push_back(static_cast<int>(e));
  }
  for (auto& list : g.in_edges) {
    std::sort(list.begin(), list.end(), [&g](int a, int b) {
      const auto& ea = g.edges[a];
      const auto& eb = g.edges[b];
      return std::tuple(ea.color, g.nodes[ea.src].color, ea.src, a) <
             std::tuple(eb.color, g.nodes[eb.src].color, eb.src, b);
    });
  }
}

}  // namespace

GraphPtr validate_colored_graph(ColorGraphPtr colors,
                                const std::vector<RawNode>& nodes,
                                const std::vector<RawEdge>& edges) {
  auto g = std::make_shared<ColoredGraph>();
  g->colors = std::move(colors);

  std::vector<RawNode> ns = nodes;
  std::sort(ns.begin(), ns.end(),
            [](const RawNode& a, const RawNode& b) { return a.id < b.id; });
  for (const auto& n : ns) {
    if (!g->nodes.empty() && g->nodes.back().id == n.id) {
      fail(Errc::duplicate_id, "node '" + n.id + "'");
    }
    int c = g->colors->node_color_index(n.color);
    if (c < 0) {
      fail(Errc::color_mismatch,
           "node '" + n.id + "' has unknown color '" + n.color + "'");
    }
    g->nodes.push_back({n.id, c});
  }

  std::vector<RawEdge> es = edges;
  std::sort(es.begin(), es.end(),
            [](const RawEdge& a, const RawEdge& b) { return a.id < b.id; });
  for (const auto& e : es) {
    if (!g->edges.empty() && g->edges.back().id == e.id) {
      fail(Errc::duplicate_id, "edge '" + e.id + "'");
    }
    ColoredGraph::Edge out;
    out.id = e.id;
    out.src = g->node_index(e.src);
    out.dst = g->node_index(e.dst);
    if (out.src < 0) {
      fail(Errc::dangling_endpoint, "edge '" + e.id + "' source '" + e.src + "'");
    }
    if (out.dst < 0) {
      fail(Errc::dangling_endpoint, "edge '" + e.id + "' target '" + e.dst + "'");
    }
    out.color = g->colors->edge_color_index(e.color);
    if (out.color < 0) {
      fail(Errc::color_mismatch,
           "edge '" + e.id + "' has unknown color '" + e.color + "'");
    }
    const auto& ec = g->colors->edge_colors[out.color];
    if (g->nodes[out.src].color != ec.src) {
      fail(Errc::color_mismatch, "edge '" + e.id + "' source color does not match '" +
                                     e.color + "'");
    }
    if (g->nodes[out.dst].color != ec.dst) {
      fail(Errc::color_mismatch, "edge '" + e.id + "' target color does not match '" +
                                     e.color + "'");
    }
    g->edges.push_back(std::move(out));
  }

  build_in_edges(*g);
  return g;
}

GraphPtr graph_of_colors(ColorGraphPtr colors) {
  std::vector<RawNode> nodes;
  for (const auto& nc : colors->node_colors) nodes.push_back({nc, nc});
  std::vector<RawEdge> edges;
  for (const auto& ec : colors->edge_colors) {
    edges.push_back({ec.id, colors->node_colors[ec.src], colors->node_colors[ec.dst],
                     ec.id});
  }
  return validate_colored_graph(colors, nodes, edges);
}

GraphMorphism validate_morphism(
    GraphPtr domain, GraphPtr codomain,
    const std::vector<std::pair<std::string, std::string>>& node_map,
    const std::vector<std::pair<std::string, std::string>>& edge_map) {
  if (!domain->same_colors(*codomain)) {
    fail(Errc::color_mismatch, "domain and codomain use different color graphs");
  }

  GraphMorphism phi;
  phi.domain = domain;
  phi.codomain = codomain;
  phi.node_map.assign(domain->nodes.size(), -1);
  phi.edge_map.assign(domain->edges.size(), -1);

  for (const auto& [from, to] : node_map) {
    int a = domain->node_index(from);
    if (a < 0) fail(Errc::unknown_node, "domain node '" + from + "'");
    int b = codomain->node_index(to);
    if (b < 0) fail(Errc::unknown_node, "codomain node '" + to + "'");
    if (phi.node_map[a] >= 0 && phi.node_map[a] != b) {
      fail(Errc::duplicate_id, "node '" + from + "' mapped twice");
    }
    phi.node_map[a] = b;
  }
  for (const auto& [from, to] : edge_map) {
    int a = domain->edge_index(from);
    if (a < 0) fail(Errc::unknown_node, "domain edge '" + from + "'");
    int b = codomain->edge_index(to);
    if (b < 0) fail(Errc::unknown_node, "codomain edge '" + to + "'");
    if (phi.edge_map[a] >= 0 && phi.edge_map[a] != b) {
      fail(Errc::duplicate_id, "edge '" + from + "' mapped twice");
    }
    phi.edge_map[a] = b;
  }

  for (size_t a = 0; a < phi.node_map.size(); ++a) {
    if (phi.node_map[a] < 0) {
      fail(Errc::unmapped_element, "node '" + domain->nodes[a].id + "'");
    }
    if (domain->nodes[a].color != codomain->nodes[phi.node_map[a]].color) {
      fail(Errc::color_not_preserved, "node '" + domain->nodes[a].id + "'");
    }
  }
  for (size_t e = 0; e < phi.edge_map.size(); ++e) {
    if (phi.edge_map[e] < 0) {
      fail(Errc::unmapped_element, "edge '" + domain->edges[e].id + "'");
    }
    const auto& de = domain->edges[e];
    const auto& ce = codomain->edges[phi.edge_map[e]];
    if (de.color != ce.color) {
      fail(Errc::color_not_preserved, "edge '" + domain->edges[e].id + "'");
    }
    if (phi.node_map[de.src] != ce.src || phi.node_map[de.dst] != ce.dst) {
      fail(Errc::not_a_morphism,
           "edge '" + de.id + "' endpoints do not commute with the node map");
    }
  }
  return phi;
}

GraphMorphism identity_morphism(GraphPtr g) {
  GraphMorphism phi;
  phi.domain = g;
  phi.codomain = g;
  phi.node_map.resize(g->nodes.size());
  phi.edge_map.resize(g->edges.size());
  for (size_t i = 0; i < phi.node_map.size(); ++i) phi.node_map[i] = static_cast<int>(i);
  for (size_t i = 0; i < phi.edge_map.size(); ++i) phi.edge_map[i] = static_cast<int>(i);
  return phi;
}

GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f) {
  if (!(*f.codomain == *g.domain)) {
    fail(Errc::domain_mismatch, "codomain of inner map differs from domain of outer map");
  }
  GraphMorphism out;
  out.domain = f.domain;
  out.codomain = g.codomain;
  out.node_map.resize(f.node_map.size());
  out.edge_map.resize(f.edge_map.size());
  for (size_t i = 0; i < f.node_map.size(); ++i) {
    out.node_map[i] = g.node_map[f.node_map[i]];
  }
  for (size_t i = 0; i < f.edge_map.size(); ++i) {
    out.edge_map[i] = g.edge_map[f.edge_map[i]];
  }
  return out;
}

GraphMorphism coloring_morphism(GraphPtr g) {
  GraphPtr cg = graph_of_colors(g->colors);
  GraphMorphism phi;
  phi.domain = g;
  phi.codomain = cg;
  phi.node_map.resize(g->nodes.size());
  phi.edge_map.resize(g->edges.size());
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    phi.node_map[a] =
        cg->node_index(g->colors->node_colors[g->nodes[a].color]);
  }
  for (size_t e = 0; e < g->edges.size(); ++e) {
    phi.edge_map[e] = cg->edge_index(g->colors->edge_colors[g->edges[e].color].id);
  }
  return phi;
}

bool same_morphism(const GraphMorphism& a, const GraphMorphism& b) {
  return *a.domain == *b.domain && *a.codomain == *b.codomain &&
         a.node_map == b.node_map && a.edge_map == b.edge_map;
}

InputTree input_tree(GraphPtr g, int node) {
  if (node < 0 || node >= static_cast<int>(g->nodes.size())) {
    fail(Errc::unknown_node, "node index " + std::to_string(node));
  }
  InputTree t;
  t.graph = g;
  t.root = node;
  t.root_color = g->nodes[node].color;
  for (int e : g->in_edges[node]) {
    const auto& edge = g->edges[e];
    t.leaves.push_back({e, edge.color, edge.src, g->nodes[edge.src].color});
  }
  return t;
}

InputTree input_tree(GraphPtr g, const std::string& node_id) {
  int a = g->node_index(node_id);
  if (a < 0) fail(Errc::unknown_node, "node '" + node_id + "'");
  return input_tree(g, a);
}

InputSignature signature_of(const InputTree& tree) {
  InputSignature sig;
  sig.root_color = tree.root_color;
  sig.slots.reserve(tree.leaves.size());
  for (const auto& leaf : tree.leaves) {
    sig.slots.emplace_back(leaf.edge_color, leaf.source_color);
  }
  // Canonical in-edge order already sorts by (edge color, source color).
  return sig;
}

std::string print_signature(const InputSignature& sig, const ColorGraph& colors) {
  std::ostringstream out;
  out << colors.node_colors[sig.root_color] << "<-[";
  for (size_t i = 0; i < sig.slots.size(); ++i) {
    if (i) out << ",";
    out << colors.edge_colors[sig.slots[i].first].id << ":"
        << colors.node_colors[sig.slots[i].second];
  }
  out << "]";
  return out.str();
}

std::optional<InputSignature> parse_signature(const std::string& text,
                                              const ColorGraph& colors) {
  auto arrow = text.find("<-[");
  if (arrow == std::string::npos || text.back() != ']') return std::nullopt;
  InputSignature sig;
  sig.root_color = colors.node_color_index(text.substr(0, arrow));
  if (sig.root_color < 0) return std::nullopt;
  std::string body = text.substr(arrow + 3, text.size() - arrow - 4);
  if (!body.empty()) {
    size_t pos = 0;
    while (pos <= body.size()) {
      size_t comma = body.find(',', pos);
      std::string item =
          body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto colon = item.find(':');
      if (colon == std::string::npos) return std::nullopt;
      int ec = colors.edge_color_index(item.substr(0, colon));
      int nc = colors.node_color_index(item.substr(colon + 1));
      if (ec < 0 || nc < 0) return std::nullopt;
      sig.slots.emplace_back(ec, nc);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  std::sort(sig.slots.begin(), sig.slots.end());
  return sig;
}

std::optional<std::vector<std::pair<int, int>>> tree_iso(const InputTree& t1,
                                                         const InputTree& t2) {
  if (!t1.graph->same_colors(*t2.graph)) return std::nullopt;
  if (signature_of(t1) != signature_of(t2)) return std::nullopt;
  // Signatures agree, so pairing the canonically sorted leaf lists positionally
  // matches slot types.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(t1.leaves.size());
  for (size_t i = 0; i < t1.leaves.size(); ++i) {
    pairs.emplace_back(t1.leaves[i].edge, t2.leaves[i].edge);
  }
  return pairs;
}

TreeAutGroup tree_automorphism_group(const InputTree& tree) {
  TreeAutGroup group;
  size_t i = 0;
  while (i < tree.leaves.size()) {
    std::pair<int, int> type{tree.leaves[i].edge_color, tree.leaves[i].source_color};
    size_t j = i;
    while (j < tree.leaves.size() &&
           std::pair(tree.leaves[j].edge_color, tree.leaves[j].source_color) == type) {
      ++j;
    }
    TreeAutGroup::Block block;
    block.type = type;
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

std::vector<std::vector<int>> tree_automorphism_elements(
    const TreeAutGroup& group, unsigned long long max_order) {
  if (group.order > max_order) {
    fail(Errc::group_too_large,
         "tree automorphism group has order " + std::to_string(group.order));
  }
  int slots = 0;
  for (const auto& b : group.blocks) slots += b.size;

  std::vector<std::vector<int>> elements;
  std::vector<int> current(slots);
  for (int i = 0; i < slots; ++i) current[i] = i;

  // Odometer over per-block permutations.
  std::vector<std::vector<int>> block_perm(group.blocks.size());
  for (size_t b = 0; b < group.blocks.size(); ++b) {
    block_perm[b].resize(group.blocks[b].size);
    for (int k = 0; k < group.blocks[b].size; ++k) block_perm[b][k] = k;
  }
  while (true) {
    for (size_t b = 0; b < group.blocks.size(); ++b) {
      const auto& blk = group.blocks[b];
      for (int k = 0; k < blk.size; ++k) {
        current[blk.first + k] = blk.first + block_perm[b][k];
      }
    }
    elements.push_back(current);
    size_t b = 0;
    while (b < block_perm.size() &&
           !std::next_permutation(block_perm[b].begin(), block_perm[b].end())) {
      ++b;  // wrapped to identity, carry into the next block
    }
    if (b == block_perm.size()) break;
  }
  return elements;
}

EtaleResult is_etale(const GraphMorphism& phi) {
  const ColoredGraph& dom = *phi.domain;
  const ColoredGraph& cod = *phi.codomain;

  EtaleResult result;
  result.witnesses.resize(dom.nodes.size());

  for (size_t a = 0; a < dom.nodes.size(); ++a) {
    int b = phi.node_map[a];
    const auto& dom_in = dom.in_edges[a];
    const auto& cod_in = cod.in_edges[b];

    std::vector<char> hit(cod_in.size(), 0);
    std::vector<std::pair<int, int>> witness;
    witness.reserve(dom_in.size());
    bool injective = true;
    for (int e : dom_in) {
      int fe = phi.edge_map[e];
      // Image edge targets phi(a) because endpoints commute.
      size_t pos = 0;
      while (pos < cod_in.size() && cod_in[pos] != fe) ++pos;
      if (pos == cod_in.size() || hit[pos]) {
        injective = false;
        break;
      }
      hit[pos] = 1;
      witness.emplace_back(e, fe);
    }
    if (!injective) {
      result.failure = {static_cast<int>(a),
                        EtaleResult::FailReason::not_injective_on_in_edges};
      return result;
    }
    if (dom_in.size() != cod_in.size()) {
      result.failure = {static_cast<int>(a),
                        EtaleResult::FailReason::not_surjective_on_in_edges};
      return result;
    }
    result.witnesses[a] = std::move(witness);
  }
  result.ok = true;
  return result;
}

}  // namespace ccn
