#include "ccn/phase.hpp"

namespace ccn {

PhaseDims resolve_dims(ColorGraphPtr colors, const std::map<std::string, int>& dims) {
  PhaseDims out;
  out.colors = colors;
  out.by_color.resize(colors->node_colors.size(), -1);
  for (const auto& [name, dim] : dims) {
    int c = colors->node_color_index(name);
    if (c < 0) fail(Errc::missing_color_dim, "unknown node color '" + name + "'");
    if (dim < 1) {
      fail(Errc::dimension_mismatch,
           "dimension for color '" + name + "' must be positive");
    }
    out.by_color[c] = dim;
  }
  for (size_t c = 0; c < out.by_color.size(); ++c) {
    if (out.by_color[c] < 0) {
      fail(Errc::missing_color_dim,
           "no dimension for node color '" + colors->node_colors[c] + "'");
    }
  }
  return out;
}

SpaceLayout layout(GraphPtr g, const PhaseDims& dims) {
  if (!(*g->colors == *dims.colors)) {
    fail(Errc::phase_mismatch, "dimension table uses a different color vocabulary");
  }
  SpaceLayout l;
  l.graph = g;
  l.offset.resize(g->nodes.size());
  l.length.resize(g->nodes.size());
  int at = 0;
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    l.offset[a] = at;
    l.length[a] = dims.by_color[g->nodes[a].color];
    at += l.length[a];
  }
  l.total = at;
  return l;
}

IndexedLinearMap pushforward(const GraphMorphism& phi, const PhaseDims& dims) {
  IndexedLinearMap map;
  map.input = layout(phi.codomain, dims);
  map.output = layout(phi.domain, dims);
  map.assignment = phi.node_map;
  return map;
}

std::vector<double> apply(const IndexedLinearMap& map, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != map.input.total) {
    fail(Errc::dimension_mismatch,
         "expected vector of length " + std::to_string(map.input.total));
  }
  std::vector<double> out(map.output.total);
  for (size_t b = 0; b < map.assignment.size(); ++b) {
    int a = map.assignment[b];
    for (int k = 0; k < map.output.length[b]; ++k) {
      out[map.output.offset[b] + k] = x[map.input.offset[a] + k];
    }
  }
  return out;
}

Matrix materialize(const IndexedLinearMap& map) {
  Matrix m(map.output.total, map.input.total);
  for (size_t b = 0; b < map.assignment.size(); ++b) {
    int a = map.assignment[b];
    for (int k = 0; k < map.output.length[b]; ++k) {
      m.at(map.output.offset[b] + k, map.input.offset[a] + k) = 1.0;
    }
  }
  return m;
}

}  // namespace ccn
