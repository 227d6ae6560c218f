#include "ccn/balanced.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace ccn {

namespace {

Partition normalize(GraphPtr g, std::vector<std::vector<int>> blocks) {
  for (auto& block : blocks) std::sort(block.begin(), block.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });
  Partition p;
  p.blocks = std::move(blocks);
  p.block_of.assign(g->nodes.size(), -1);
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    for (int a : p.blocks[b]) p.block_of[a] = static_cast<int>(b);
  }
  return p;
}

void check_valid(GraphPtr g, const Partition& p) {
  std::vector<char> seen(g->nodes.size(), 0);
  for (const auto& block : p.blocks) {
    if (block.empty()) fail(Errc::invalid_partition, "empty block");
    int color = g->nodes[block.front()].color;
    for (int a : block) {
      if (a < 0 || a >= static_cast<int>(g->nodes.size())) {
        fail(Errc::invalid_partition, "node index out of range");
      }
      if (seen[a]) {
        fail(Errc::invalid_partition, "node '" + g->nodes[a].id + "' in two blocks");
      }
      seen[a] = 1;
      if (g->nodes[a].color != color) {
        fail(Errc::invalid_partition,
             "block mixes node colors at '" + g->nodes[a].id + "'");
      }
    }
  }
  for (size_t a = 0; a < seen.size(); ++a) {
    if (!seen[a]) {
      fail(Errc::invalid_partition, "node '" + g->nodes[a].id + "' not covered");
    }
  }
}

}  // namespace

Partition make_partition(GraphPtr g,
                         const std::vector<std::vector<std::string>>& blocks) {
  std::vector<std::vector<int>> resolved;
  resolved.reserve(blocks.size());
  for (const auto& block : blocks) {
    std::vector<int> b;
    b.reserve(block.size());
    for (const auto& id : block) {
      int a = g->node_index(id);
      if (a < 0) fail(Errc::unknown_node, "node '" + id + "'");
      b.push_back(a);
    }
    resolved.push_back(std::move(b));
  }
  Partition p = normalize(g, std::move(resolved));
  check_valid(g, p);
  return p;
}

Partition make_partition_from_assignment(GraphPtr g, const std::vector<int>& block_of) {
  if (block_of.size() != g->nodes.size()) {
    fail(Errc::invalid_partition, "assignment length mismatch");
  }
  std::map<int, std::vector<int>> grouped;
  for (size_t a = 0; a < block_of.size(); ++a) {
    grouped[block_of[a]].push_back(static_cast<int>(a));
  }
  std::vector<std::vector<int>> blocks;
  blocks.reserve(grouped.size());
  for (auto& [key, members] : grouped) blocks.push_back(std::move(members));
  Partition p = normalize(g, std::move(blocks));
  check_valid(g, p);
  return p;
}

Partition discrete_partition(GraphPtr g) {
  std::vector<int> block_of(g->nodes.size());
  std::iota(block_of.begin(), block_of.end(), 0);
  return make_partition_from_assignment(g, block_of);
}

bool refines(const Partition& p, const Partition& q) {
  if (p.block_of.size() != q.block_of.size()) return false;
  for (const auto& block : p.blocks) {
    int target = q.block_of[block.front()];
    for (int a : block) {
      if (q.block_of[a] != target) return false;
    }
  }
  return true;
}

namespace {

// In-edges sorted for balance matching: (edge color, source block, source
// node, edge). Positional pairing of equally-sorted lists is the canonical
// matching.
std::vector<int> matching_order(const ColoredGraph& g, const Partition& p, int a) {
  std::vector<int> edges = g.in_edges[a];
  std::sort(edges.begin(), edges.end(), [&](int x, int y) {
    const auto& ex = g.edges[x];
    const auto& ey = g.edges[y];
    return std::tuple(ex.color, p.block_of[ex.src], ex.src, x) <
           std::tuple(ey.color, p.block_of[ey.src], ey.src, y);
  });
  return edges;
}

std::vector<std::pair<int, int>> matching_key(const ColoredGraph& g,
                                              const Partition& p,
                                              const std::vector<int>& edges) {
  std::vector<std::pair<int, int>> key;
  key.reserve(edges.size());
  for (int e : edges) {
    key.emplace_back(g.edges[e].color, p.block_of[g.edges[e].src]);
  }
  return key;
}

}  // namespace

BalanceWitness is_balanced(GraphPtr g, const Partition& p) {
  check_valid(g, p);
  BalanceWitness w;
  w.matchings.resize(g->nodes.size());

  for (const auto& block : p.blocks) {
    int rep = block.front();
    std::vector<int> rep_edges = matching_order(*g, p, rep);
    auto rep_key = matching_key(*g, p, rep_edges);
    for (int a : block) {
      std::vector<int> a_edges = matching_order(*g, p, a);
      if (matching_key(*g, p, a_edges) != rep_key) {
        w.offending = {rep, a};
        w.matchings.clear();
        return w;
      }
      std::vector<std::pair<int, int>> pairs;
      pairs.reserve(a_edges.size());
      for (size_t i = 0; i < a_edges.size(); ++i) {
        pairs.emplace_back(a_edges[i], rep_edges[i]);
      }
      w.matchings[a] = std::move(pairs);
    }
  }
  w.balanced = true;
  return w;
}

Partition coarsest_balanced(GraphPtr g) {
  size_t n = g->nodes.size();
  std::vector<int> block_of(n);
  for (size_t a = 0; a < n; ++a) block_of[a] = g->nodes[a].color;

  while (true) {
    // Signature of a node under the current partition: its block plus the
    // multiset of (edge color, source block) over its in-edges.
    std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> keys;
    std::vector<int> next(n);
    for (size_t a = 0; a < n; ++a) {
      std::vector<std::pair<int, int>> sig;
      for (int e : g->in_edges[a]) {
        sig.emplace_back(g->edges[e].color, block_of[g->edges[e].src]);
      }
      std::sort(sig.begin(), sig.end());
      auto key = std::pair(block_of[a], std::move(sig));
      auto [it, inserted] = keys.try_emplace(std::move(key), static_cast<int>(keys.size()));
      next[a] = it->second;
    }
    std::vector<int> distinct = block_of;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    bool stable = keys.size() == distinct.size();
    block_of = std::move(next);
    if (stable) break;
  }
  return make_partition_from_assignment(g, block_of);
}

std::vector<Partition> enumerate_balanced(GraphPtr g, int max_nodes) {
  int n = static_cast<int>(g->nodes.size());
  if (n > max_nodes) {
    fail(Errc::too_large, "enumeration bound is " + std::to_string(max_nodes) +
                              " nodes, graph has " + std::to_string(n));
  }

  std::vector<Partition> found;
  std::vector<int> rgs(n, 0);
  std::vector<int> block_color;

  auto descend = [&](auto&& self, int a, int used) -> void {
    if (a == n) {
      Partition p = make_partition_from_assignment(g, rgs);
      if (is_balanced(g, p)) found.push_back(std::move(p));
      return;
    }
    int color = g->nodes[a].color;
    for (int b = 0; b <= used; ++b) {
      bool fresh = b == used;
      if (fresh) {
        block_color.push_back(color);
      } else if (block_color[b] != color) {
        continue;
      }
      rgs[a] = b;
      self(self, a + 1, used + (fresh ? 1 : 0));
      if (fresh) block_color.pop_back();
    }
  };
  descend(descend, 0, 0);

  // Nodes are assigned in canonical order, so block_of doubles as the
  // restricted-growth string.
  std::sort(found.begin(), found.end(), [](const Partition& x, const Partition& y) {
    if (x.blocks.size() != y.blocks.size()) return x.blocks.size() < y.blocks.size();
    return x.block_of < y.block_of;
  });
  return found;
}

QuotientResult quotient(GraphPtr g, const Partition& p) {
  BalanceWitness w = is_balanced(g, p);
  if (!w) {
    std::string detail = "partition is not balanced";
    if (w.offending) {
      detail += ": nodes '" + g->nodes[w.offending->first].id + "' and '" +
                g->nodes[w.offending->second].id + "' receive different inputs";
    }
    fail(Errc::not_balanced, detail);
  }

  std::vector<RawNode> q_nodes;
  std::vector<RawEdge> q_edges;
  for (const auto& block : p.blocks) {
    int rep = block.front();
    q_nodes.push_back({g->nodes[rep].id,
                       g->colors->node_colors[g->nodes[rep].color]});
  }
  for (const auto& block : p.blocks) {
    int rep = block.front();
    for (int e : g->in_edges[rep]) {
      const auto& edge = g->edges[e];
      int src_rep = p.blocks[p.block_of[edge.src]].front();
      q_edges.push_back({edge.id, g->nodes[src_rep].id, g->nodes[rep].id,
                         g->colors->edge_colors[edge.color].id});
    }
  }
  GraphPtr q = validate_colored_graph(g->colors, q_nodes, q_edges);

  GraphMorphism proj;
  proj.domain = g;
  proj.codomain = q;
  proj.node_map.resize(g->nodes.size());
  proj.edge_map.assign(g->edges.size(), -1);
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    int rep = p.blocks[p.block_of[a]].front();
    proj.node_map[a] = q->node_index(g->nodes[rep].id);
  }
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    for (const auto& [own_edge, rep_edge] : w.matchings[a]) {
      proj.edge_map[own_edge] = q->edge_index(g->edges[rep_edge].id);
    }
  }
  return {q, proj};
}

}  // namespace ccn
