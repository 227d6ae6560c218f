#include "ccn/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ccn {

namespace {

using json = nlohmann::ordered_json;

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::io_error, "malformed JSON in " + what);
  return j;
}

const json& member(const json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) fail(Errc::io_error, what + " is missing \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) fail(Errc::io_error, what + " must be a string");
  return j.get<std::string>();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << content;
  if (!out) fail(Errc::io_error, "short write to " + path);
}

GraphPtr graph_from_json_string(const std::string& text) {
  json j = parse_json(text, "graph");
  const json& jc = member(j, "colors", "graph");

  RawColorGraph raw_colors;
  for (const json& c : member(jc, "node_colors", "colors")) {
    raw_colors.node_colors.push_back(as_string(c, "node color"));
  }
  for (const json& e : member(jc, "edge_colors", "colors")) {
    raw_colors.edge_colors.push_back({as_string(member(e, "id", "edge color"), "id"),
                                      as_string(member(e, "src", "edge color"), "src"),
                                      as_string(member(e, "dst", "edge color"), "dst")});
  }

  std::vector<RawNode> nodes;
  for (const json& n : member(j, "nodes", "graph")) {
    nodes.push_back({as_string(member(n, "id", "node"), "id"),
                     as_string(member(n, "color", "node"), "color")});
  }
  std::vector<RawEdge> edges;
  if (j.contains("edges")) {
    for (const json& e : j["edges"]) {
      edges.push_back({as_string(member(e, "id", "edge"), "id"),
                       as_string(member(e, "src", "edge"), "src"),
                       as_string(member(e, "dst", "edge"), "dst"),
                       as_string(member(e, "color", "edge"), "color")});
    }
  }
  return validate_colored_graph(validate_color_graph(raw_colors), nodes, edges);
}

GraphPtr read_graph_file(const std::string& path) {
  return graph_from_json_string(read_text_file(path));
}

std::string graph_to_json_string(const ColoredGraph& g) {
  json j;
  json colors;
  colors["node_colors"] = g.colors->node_colors;
  json ecs = json::array();
  for (const auto& ec : g.colors->edge_colors) {
    ecs.push_back({{"id", ec.id},
                   {"src", g.colors->node_colors[ec.src]},
                   {"dst", g.colors->node_colors[ec.dst]}});
  }
  colors["edge_colors"] = ecs;
  j["colors"] = colors;

  json nodes = json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"id", n.id}, {"color", g.colors->node_colors[n.color]}});
  }
  j["nodes"] = nodes;

  json edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"id", e.id},
                     {"src", g.nodes[e.src].id},
                     {"dst", g.nodes[e.dst].id},
                     {"color", g.colors->edge_colors[e.color].id}});
  }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

void write_graph_file(const std::string& path, const ColoredGraph& g) {
  write_text_file(path, graph_to_json_string(g));
}

GraphMorphism read_morphism_file(const std::string& path) {
  json j = parse_json(read_text_file(path), "morphism");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path q(p);
    return q.is_absolute() ? q.string() : (base / q).string();
  };

  GraphPtr domain = read_graph_file(resolve(as_string(member(j, "domain", "morphism"), "domain")));
  GraphPtr codomain =
      read_graph_file(resolve(as_string(member(j, "codomain", "morphism"), "codomain")));

  std::vector<std::pair<std::string, std::string>> node_map, edge_map;
  for (const auto& [k, v] : member(j, "node_map", "morphism").items()) {
    node_map.emplace_back(k, as_string(v, "node image"));
  }
  for (const auto& [k, v] : member(j, "edge_map", "morphism").items()) {
    edge_map.emplace_back(k, as_string(v, "edge image"));
  }
  return validate_morphism(domain, codomain, node_map, edge_map);
}

std::string morphism_to_json_string(const GraphMorphism& phi,
                                    const std::string& domain_path,
                                    const std::string& codomain_path) {
  json j;
  j["domain"] = domain_path;
  j["codomain"] = codomain_path;
  json nm = json::object();
  for (size_t a = 0; a < phi.node_map.size(); ++a) {
    nm[phi.domain->nodes[a].id] = phi.codomain->nodes[phi.node_map[a]].id;
  }
  j["node_map"] = nm;
  json em = json::object();
  for (size_t e = 0; e < phi.edge_map.size(); ++e) {
    em[phi.domain->edges[e].id] = phi.codomain->edges[phi.edge_map[e]].id;
  }
  j["edge_map"] = em;
  return j.dump(2) + "\n";
}

void write_morphism_file(const std::string& path, const GraphMorphism& phi,
                         const std::string& domain_path,
                         const std::string& codomain_path) {
  write_text_file(path, morphism_to_json_string(phi, domain_path, codomain_path));
}

Partition read_partition_file(const std::string& path, GraphPtr g) {
  json j = parse_json(read_text_file(path), "partition");
  std::vector<std::vector<std::string>> blocks;
  for (const json& jb : member(j, "blocks", "partition")) {
    std::vector<std::string> block;
    for (const json& id : jb) block.push_back(as_string(id, "node id"));
    blocks.push_back(std::move(block));
  }
  return make_partition(std::move(g), blocks);
}

std::string partition_to_json_string(const ColoredGraph& g, const Partition& p) {
  json blocks = json::array();
  for (const auto& block : p.blocks) {
    json jb = json::array();
    for (int a : block) jb.push_back(g.nodes[a].id);
    blocks.push_back(jb);
  }
  json j;
  j["blocks"] = blocks;
  return j.dump(2) + "\n";
}

void write_partition_file(const std::string& path, const ColoredGraph& g,
                          const Partition& p) {
  write_text_file(path, partition_to_json_string(g, p));
}

FieldFile field_from_json_string(const std::string& text, GraphPtr g,
                                 const SymmetryOptions& symmetry) {
  json j = parse_json(text, "field");

  std::map<std::string, int> dims_by_name;
  for (const auto& [color, dim] : member(j, "dims", "field").items()) {
    if (!dim.is_number_integer()) fail(Errc::io_error, "dimension of " + color + " must be an integer");
    dims_by_name[color] = dim.get<int>();
  }

  FieldFile out;
  out.dims = resolve_dims(g->colors, dims_by_name);

  // Sniff the module style before building anything: every module must use
  // "outputs" (expressions) or every module "blocks" (matrices).
  const json& jm = member(j, "modules", "field");
  int n_outputs = 0, n_blocks = 0;
  for (const auto& [key, mod] : jm.items()) {
    if (mod.contains("outputs")) ++n_outputs;
    if (mod.contains("blocks")) ++n_blocks;
    if (!mod.contains("outputs") && !mod.contains("blocks")) {
      fail(Errc::io_error, "module " + key + " has neither \"outputs\" nor \"blocks\"");
    }
  }
  if (n_outputs > 0 && n_blocks > 0) {
    fail(Errc::io_error, "field mixes expression modules and linear modules");
  }

  if (n_blocks > 0) {
    std::vector<std::pair<std::string, std::map<std::string, Matrix>>> modules;
    for (const auto& [key, mod] : jm.items()) {
      std::map<std::string, Matrix> blocks;
      for (const auto& [slot_type, rows] : mod["blocks"].items()) {
        if (!rows.is_array() || rows.empty()) {
          fail(Errc::io_error, "block " + slot_type + " of " + key + " must be a nonempty row list");
        }
        Matrix m(static_cast<int>(rows.size()),
                 rows[0].is_array() ? static_cast<int>(rows[0].size()) : 0);
        for (int r = 0; r < m.rows; ++r) {
          if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != m.cols) {
            fail(Errc::io_error, "ragged block " + slot_type + " of " + key);
          }
          for (int c = 0; c < m.cols; ++c) {
            if (!rows[r][c].is_number()) fail(Errc::io_error, "non-numeric entry in block " + slot_type);
            m.at(r, c) = rows[r][c].get<double>();
          }
        }
        blocks.emplace(slot_type, std::move(m));
      }
      modules.emplace_back(key, std::move(blocks));
    }
    out.linear = true;
    out.lin = make_linear_field(std::move(g), out.dims, modules);
    return out;
  }

  std::vector<std::pair<std::string, ModuleSpec>> modules;
  for (const auto& [key, mod] : jm.items()) {
    ModuleSpec spec;
    if (mod.contains("slots")) {
      if (!mod["slots"].is_number_integer()) fail(Errc::io_error, "\"slots\" must be an integer");
      spec.declared_slots = mod["slots"].get<int>();
    }
    for (const json& expr : mod["outputs"]) {
      spec.outputs.push_back(as_string(expr, "output expression"));
    }
    modules.emplace_back(key, std::move(spec));
  }
  out.smooth = make_virtual_field(std::move(g), out.dims, modules, symmetry);
  return out;
}

FieldFile read_field_file(const std::string& path, GraphPtr g,
                          const SymmetryOptions& symmetry) {
  return field_from_json_string(read_text_file(path), std::move(g), symmetry);
}

std::vector<double> read_vector_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // Skip blanks and an optional header row (first cell non-numeric).
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> out;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      while (end && *end == ' ') ++end;
      if (end == cell.c_str() || (end && *end != '\0' && *end != '\r')) {
        numeric = false;
        break;
      }
      out.push_back(v);
    }
    if (numeric && !out.empty()) return out;
  }
  fail(Errc::io_error, "no numeric row in " + path);
}

std::string vector_to_csv(const std::vector<double>& x) {
  std::string out;
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    out += fmt17(x[i]);
  }
  out += '\n';
  return out;
}

std::string trajectory_to_csv(const Trajectory& traj, const SpaceLayout& space) {
  std::string out = "t";
  for (size_t a = 0; a < space.graph->nodes.size(); ++a) {
    for (int k = 0; k < space.length[a]; ++k) {
      out += ',' + space.graph->nodes[a].id + '_' + std::to_string(k);
    }
  }
  out += '\n';
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out += fmt17(traj.times[i]);
    for (double v : traj.states[i]) out += ',' + fmt17(v);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const SpaceLayout& space) {
  write_text_file(path, trajectory_to_csv(traj, space));
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (c) out += ',';
      out += fmt17(m.at(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  write_text_file(path, matrix_to_csv(m));
}

}  // namespace ccn
