#include "ccn/groupoid.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace ccn {

Skeleton skeleton(GraphPtr g) {
  Skeleton sk;
  sk.graph = g;
  sk.class_of.assign(g->nodes.size(), -1);

  std::vector<InputSignature> sigs;
  sigs.reserve(g->nodes.size());
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    sigs.push_back(signature_of(input_tree(g, static_cast<int>(a))));
  }

  std::map<InputSignature, std::vector<int>> by_sig;
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    by_sig[sigs[a]].push_back(static_cast<int>(a));
  }

  std::vector<const std::pair<const InputSignature, std::vector<int>>*> ordered;
  ordered.reserve(by_sig.size());
  for (const auto& entry : by_sig) ordered.push_back(&entry);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* x, const auto* y) {
              return x->second.front() < y->second.front();
            });

  for (size_t k = 0; k < ordered.size(); ++k) {
    SkeletonClass cls;
    cls.id = "c" + std::to_string(k);
    cls.signature = ordered[k]->first;
    cls.members = ordered[k]->second;
    cls.representative = cls.members.front();
    cls.aut = tree_automorphism_group(input_tree(g, cls.representative));
    for (int a : cls.members) sk.class_of[a] = static_cast<int>(k);
    sk.classes.push_back(std::move(cls));
  }
  return sk;
}

ClassMap induced_class_map(const GraphMorphism& phi) {
  EtaleResult et = is_etale(phi);
  if (!et) {
    fail(Errc::not_etale, "class map is only induced by etale maps");
  }
  ClassMap cm;
  cm.source = skeleton(phi.domain);
  cm.target = skeleton(phi.codomain);
  cm.class_map.resize(cm.source.classes.size());
  for (size_t k = 0; k < cm.source.classes.size(); ++k) {
    int rep = cm.source.classes[k].representative;
    int image_class = cm.target.class_of[phi.node_map[rep]];
    cm.class_map[k] = image_class;
    // Etale maps restrict to tree isomorphisms, so signatures must agree.
    if (cm.source.classes[k].signature != cm.target.classes[image_class].signature) {
      fail(Errc::not_etale, "image class signature differs at node '" +
                                phi.domain->nodes[rep].id + "'");
    }
  }
  return cm;
}

bool is_essentially_surjective(const ClassMap& cm) {
  std::vector<char> hit(cm.target.classes.size(), 0);
  for (int t : cm.class_map) hit[t] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

namespace {

// In-edges of `a` grouped by (edge color, source node), canonical order.
struct InGroup {
  int color;
  int source;
  std::vector<int> edges;
};

std::vector<InGroup> in_groups(const ColoredGraph& g, int a) {
  std::vector<InGroup> groups;
  for (int e : g.in_edges[a]) {
    const auto& edge = g.edges[e];
    if (!groups.empty() && groups.back().color == edge.color &&
        groups.back().source == edge.src) {
      groups.back().edges.push_back(e);
    } else {
      groups.push_back({edge.color, edge.src, {e}});
    }
  }
  return groups;
}

constexpr unsigned long long kMaxAutomorphisms = 1ull << 20;

}  // namespace

GraphAutomorphismGroup graph_automorphisms(GraphPtr g, int max_nodes) {
  const ColoredGraph& graph = *g;
  int n = static_cast<int>(graph.nodes.size());
  if (n > max_nodes) {
    fail(Errc::too_large, "automorphism search bound is " + std::to_string(max_nodes) +
                              " nodes, graph has " + std::to_string(n));
  }

  std::vector<InputSignature> sigs(n);
  std::vector<int> out_degree(n, 0);
  for (int a = 0; a < n; ++a) {
    sigs[a] = signature_of(input_tree(g, a));
  }
  for (const auto& e : graph.edges) out_degree[e.src]++;

  GraphAutomorphismGroup group;
  std::vector<int> node_map(n, -1);
  std::vector<char> used(n, 0);

  auto emit_edge_maps = [&](const std::vector<int>& nm) {
    // For a valid node bijection, edge bijections decompose per in-edge group:
    // edges (c, s) -> a must land on edges (c, nm[s]) -> nm[a], any bijection.
    struct GroupPair {
      std::vector<int> dom;
      std::vector<int> cod;
    };
    std::vector<GroupPair> pairs;
    unsigned long long total = 1;
    for (int a = 0; a < n; ++a) {
      auto dom_groups = in_groups(graph, a);
      auto cod_groups = in_groups(graph, nm[a]);
      if (dom_groups.size() != cod_groups.size()) return;
      // Match each domain group to the image-keyed codomain group.
      for (const auto& dg : dom_groups) {
        const InGroup* match = nullptr;
        for (const auto& cg : cod_groups) {
          if (cg.color == dg.color && cg.source == nm[dg.source]) {
            match = &cg;
            break;
          }
        }
        if (!match || match->edges.size() != dg.edges.size()) return;
        pairs.push_back({dg.edges, match->edges});
        for (size_t k = 2; k <= dg.edges.size(); ++k) total *= k;
        if (total > kMaxAutomorphisms) {
          fail(Errc::too_large, "automorphism group exceeds enumeration bound");
        }
      }
    }

    // Odometer over per-group permutations of codomain edges.
    std::vector<std::vector<int>> perm(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
      perm[i].resize(pairs[i].cod.size());
      for (size_t k = 0; k < perm[i].size(); ++k) perm[i][k] = static_cast<int>(k);
    }
    while (true) {
      GraphMorphism el;
      el.domain = g;
      el.codomain = g;
      el.node_map = nm;
      el.edge_map.assign(graph.edges.size(), -1);
      for (size_t i = 0; i < pairs.size(); ++i) {
        for (size_t k = 0; k < pairs[i].dom.size(); ++k) {
          el.edge_map[pairs[i].dom[k]] = pairs[i].cod[perm[i][k]];
        }
      }
      group.elements.push_back(std::move(el));
      if (group.elements.size() > kMaxAutomorphisms) {
        fail(Errc::too_large, "automorphism group exceeds enumeration bound");
      }
      size_t i = 0;
      while (i < perm.size() &&
             !std::next_permutation(perm[i].begin(), perm[i].end())) {
        ++i;
      }
      if (i == perm.size()) break;
    }
  };

  // Multiset of edge colors from `source` into `target`.
  auto pair_counts = [&graph](int target, int source) {
    std::map<int, int> counts;
    for (int e : graph.in_edges[target]) {
      if (graph.edges[e].src == source) counts[graph.edges[e].color]++;
    }
    return counts;
  };

  auto backtrack = [&](auto&& self, int a) -> void {
    if (a == n) {
      emit_edge_maps(node_map);
      return;
    }
    for (int b = 0; b < n; ++b) {
      if (used[b]) continue;
      if (graph.nodes[a].color != graph.nodes[b].color) continue;
      if (sigs[a] != sigs[b]) continue;
      if (out_degree[a] != out_degree[b]) continue;
      node_map[a] = b;
      // Edge bundles between a and every assigned node (a itself included)
      // must agree color-for-color with the bundles between their images.
      bool ok = true;
      for (int s = 0; s <= a && ok; ++s) {
        if (node_map[s] < 0) continue;
        ok = pair_counts(a, s) == pair_counts(b, node_map[s]) &&
             pair_counts(s, a) == pair_counts(node_map[s], b);
      }
      if (ok) {
        used[b] = 1;
        self(self, a + 1);
        used[b] = 0;
      }
      node_map[a] = -1;
    }
  };
  backtrack(backtrack, 0);

  // Identity first, then stable order by node map and edge map.
  std::sort(group.elements.begin(), group.elements.end(),
            [](const GraphMorphism& x, const GraphMorphism& y) {
              return std::tie(x.node_map, x.edge_map) < std::tie(y.node_map, y.edge_map);
            });
  return group;
}

}  // namespace ccn
