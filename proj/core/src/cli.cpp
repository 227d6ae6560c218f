#include "ccn/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ccn/io.hpp"
#include "json.hpp"

namespace ccn {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json signature_json(const InputSignature& sig, const ColorGraph& colors) {
  return print_signature(sig, colors);
}

json morphism_json(const GraphMorphism& phi) {
  json nm = json::object(), em = json::object();
  for (size_t a = 0; a < phi.node_map.size(); ++a) {
    nm[phi.domain->nodes[a].id] = phi.codomain->nodes[phi.node_map[a]].id;
  }
  for (size_t e = 0; e < phi.edge_map.size(); ++e) {
    em[phi.domain->edges[e].id] = phi.codomain->edges[phi.edge_map[e]].id;
  }
  return json{{"node_map", nm}, {"edge_map", em}};
}

json partition_json(const ColoredGraph& g, const Partition& p) {
  json blocks = json::array();
  for (const auto& block : p.blocks) {
    json jb = json::array();
    for (int a : block) jb.push_back(g.nodes[a].id);
    blocks.push_back(jb);
  }
  return json{{"blocks", blocks}};
}

json complex_json(const std::vector<std::complex<double>>& zs) {
  json out = json::array();
  for (const auto& z : zs) out.push_back({{"re", z.real()}, {"im", z.imag()}});
  return out;
}

/// Field files drive both pipelines; commands that need a smooth field view a
/// linear one through its expression form.
VirtualField smooth_view(FieldFile& f) {
  if (f.smooth) return *std::move(f.smooth);
  return as_virtual_field(*f.lin);
}

/// Path to `target` as seen from inside `dir`, for graph references written
/// into morphism files.
std::string path_from_dir(const std::string& target, const fs::path& dir) {
  std::error_code ec;
  fs::path rel = fs::relative(fs::absolute(target), fs::absolute(dir), ec);
  if (ec || rel.empty()) return fs::absolute(target).string();
  return rel.string();
}

int cmd_validate(const std::string& graph_path) {
  std::string text = read_text_file(graph_path);
  try {
    GraphPtr g = graph_from_json_string(text);
    emit(json{{"valid", true},
              {"nodes", g->nodes.size()},
              {"edges", g->edges.size()},
              {"node_colors", g->colors->node_colors.size()},
              {"edge_colors", g->colors->edge_colors.size()}});
    return 0;
  } catch (const Error& e) {
    if (e.code() == Errc::io_error) throw;
    emit(json{{"valid", false}, {"error", e.what()}});
    return 1;
  }
}

int cmd_input_trees(const std::string& graph_path) {
  GraphPtr g = read_graph_file(graph_path);
  json out = json::array();
  for (size_t a = 0; a < g->nodes.size(); ++a) {
    InputTree tree = input_tree(g, static_cast<int>(a));
    json leaves = json::array();
    for (const auto& leaf : tree.leaves) {
      leaves.push_back({{"edge", g->edges[leaf.edge].id},
                        {"edge_color", g->colors->edge_colors[leaf.edge_color].id},
                        {"source", g->nodes[leaf.source].id},
                        {"source_color", g->colors->node_colors[leaf.source_color]}});
    }
    out.push_back({{"node", g->nodes[a].id},
                   {"signature", signature_json(signature_of(tree), *g->colors)},
                   {"leaves", leaves}});
  }
  emit(out);
  return 0;
}

int cmd_skeleton(const std::string& graph_path) {
  GraphPtr g = read_graph_file(graph_path);
  Skeleton sk = skeleton(g);
  json classes = json::array();
  for (const auto& c : sk.classes) {
    json members = json::array();
    for (int a : c.members) members.push_back(g->nodes[a].id);
    classes.push_back({{"id", c.id},
                       {"representative", g->nodes[c.representative].id},
                       {"signature", signature_json(c.signature, *g->colors)},
                       {"members", members},
                       {"aut_order", c.aut.order}});
  }
  emit(json{{"classes", classes}});
  return 0;
}

int cmd_autos(const std::string& graph_path, const std::string& out_dir, int max_nodes) {
  GraphPtr g = read_graph_file(graph_path);
  GraphAutomorphismGroup group = graph_automorphisms(g, max_nodes);
  json elements = json::array();
  for (const auto& phi : group.elements) elements.push_back(morphism_json(phi));
  emit(json{{"order", group.order()}, {"elements", elements}});

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string gref = path_from_dir(graph_path, out_dir);
    for (size_t i = 0; i < group.elements.size(); ++i) {
      write_morphism_file((fs::path(out_dir) / ("aut" + std::to_string(i) + ".json")).string(),
                          group.elements[i], gref, gref);
    }
  }
  return 0;
}

int cmd_check_etale(const std::string& map_path) {
  GraphMorphism phi = read_morphism_file(map_path);
  EtaleResult r = is_etale(phi);
  json out{{"etale", r.ok}};
  if (!r.ok) {
    out["failure"] = {
        {"node", phi.domain->nodes[r.failure->node].id},
        {"reason", r.failure->reason == EtaleResult::FailReason::not_injective_on_in_edges
                       ? "in-edges collide"
                       : "in-edges missed"}};
  }
  emit(out);
  return r.ok ? 0 : 1;
}

int cmd_balanced(const std::string& graph_path, bool enumerate, int max_nodes) {
  GraphPtr g = read_graph_file(graph_path);
  if (enumerate) {
    std::vector<Partition> all = enumerate_balanced(g, max_nodes);
    json parts = json::array();
    for (const auto& p : all) parts.push_back(partition_json(*g, p));
    emit(json{{"count", all.size()}, {"partitions", parts}});
  } else {
    emit(partition_json(*g, coarsest_balanced(g)));
  }
  return 0;
}

int cmd_quotient(const std::string& graph_path, const std::string& partition_path,
                 const std::string& out_dir) {
  GraphPtr g = read_graph_file(graph_path);
  Partition p = read_partition_file(partition_path, g);
  QuotientResult q = quotient(g, p);  // throws NotBalanced -> exit 1

  fs::create_directories(out_dir);
  const std::string quotient_path = (fs::path(out_dir) / "quotient.json").string();
  const std::string projection_path = (fs::path(out_dir) / "projection.json").string();
  write_graph_file(quotient_path, *q.quotient);
  write_morphism_file(projection_path, q.projection, path_from_dir(graph_path, out_dir),
                      "quotient.json");
  emit(json{{"quotient", quotient_path},
            {"projection", projection_path},
            {"blocks", p.blocks.size()}});
  return 0;
}

int cmd_verify_sync(const std::string& map_path, const std::string& field_path,
                    int samples, double tol, uint64_t seed) {
  GraphMorphism phi = read_morphism_file(map_path);
  FieldFile f = read_field_file(field_path, phi.codomain);
  VirtualField w = smooth_view(f);
  RelatedReport r = check_related(phi, w, samples, tol, seed);
  emit(json{{"pass", r.pass},
            {"max_defect", r.max_defect},
            {"tol", r.tol},
            {"samples", r.samples},
            {"seed", r.seed}});
  return r.pass ? 0 : 1;
}

int cmd_verify_group(const std::string& graph_path, const std::string& field_path,
                     int samples, double tol, uint64_t seed, int max_nodes) {
  GraphPtr g = read_graph_file(graph_path);
  FieldFile f = read_field_file(field_path, g);
  VirtualField w = smooth_view(f);
  GroupInvarianceReport r = check_group_invariance(w, samples, tol, seed, max_nodes);
  emit(json{{"pass", r.pass},
            {"max_defect", r.max_defect},
            {"tol", r.tol},
            {"group_order", r.group_order},
            {"samples", r.samples},
            {"seed", r.seed}});
  return r.pass ? 0 : 1;
}

int cmd_assemble(const std::string& graph_path, const std::string& field_path,
                 bool linear_only, const std::string& out_path) {
  GraphPtr g = read_graph_file(graph_path);
  FieldFile f = read_field_file(field_path, g);
  if (linear_only && !f.linear) {
    fail(Errc::io_error, "--linear requires a field file with matrix blocks");
  }
  if (f.linear) {
    LinearAssembled a = assemble_matrix(*f.lin);
    if (out_path.empty()) {
      std::cout << matrix_to_csv(a.matrix);
    } else {
      write_matrix_csv(out_path, a.matrix);
      emit(json{{"output", out_path},
                {"rows", a.matrix.rows},
                {"cols", a.matrix.cols}});
    }
    return 0;
  }
  VirtualField w = smooth_view(f);
  AssembledField a = realize(w);
  json nodes = json::array();
  for (size_t i = 0; i < a.plans.size(); ++i) {
    const auto& plan = a.plans[i];
    json sources = json::array();
    for (int s : plan.sources) sources.push_back(g->nodes[s].id);
    nodes.push_back({{"node", g->nodes[i].id},
                     {"offset", a.space.offset[i]},
                     {"length", a.space.length[i]},
                     {"class", w.sk.classes[plan.klass].id},
                     {"sources", sources}});
  }
  json out{{"total_dim", a.dim()}, {"nodes", nodes}};
  if (out_path.empty()) {
    emit(out);
  } else {
    write_text_file(out_path, out.dump(2) + "\n");
    emit(json{{"output", out_path}, {"total_dim", a.dim()}});
  }
  return 0;
}

int cmd_spectrum(const std::string& graph_path, const std::string& field_path, int max_dim) {
  GraphPtr g = read_graph_file(graph_path);
  FieldFile f = read_field_file(field_path, g);
  if (!f.linear) fail(Errc::io_error, "spectrum requires a field file with matrix blocks");
  LinearAssembled a = assemble_matrix(*f.lin);
  emit(json{{"dim", a.matrix.rows}, {"eigenvalues", complex_json(eigenvalues(a.matrix, max_dim))}});
  return 0;
}

int cmd_simulate(const std::string& graph_path, const std::string& field_path,
                 const std::string& x0_path, double dt, int steps,
                 const std::string& out_path) {
  GraphPtr g = read_graph_file(graph_path);
  FieldFile f = read_field_file(field_path, g);
  VirtualField w = smooth_view(f);
  AssembledField field = realize(w);
  std::vector<double> x0 = read_vector_csv(x0_path);
  if (static_cast<int>(x0.size()) != field.dim()) {
    fail(Errc::dimension_mismatch,
         "initial state has " + std::to_string(x0.size()) + " components, phase space has " +
             std::to_string(field.dim()));
  }
  Trajectory traj = integrate_rk4(field, x0, dt, steps);
  write_trajectory_csv(out_path, traj, field.space);
  emit(json{{"output", out_path},
            {"dt", dt},
            {"steps", steps},
            {"final_time", traj.times.back()}});
  return 0;
}

int cmd_flow_sync(const std::string& map_path, const std::string& field_path,
                  const std::string& x0_path, double dt, int steps, double flow_tol,
                  double point_tol, int samples, uint64_t seed) {
  GraphMorphism phi = read_morphism_file(map_path);
  FieldFile f = read_field_file(field_path, phi.codomain);
  VirtualField w = smooth_view(f);
  std::vector<double> x0 = read_vector_csv(x0_path);
  SyncReport r = flow_sync_check(phi, w, x0, dt, steps, flow_tol, point_tol, samples, seed);
  emit(json{{"pass", r.pass},
            {"max_flow_defect", r.max_flow_defect},
            {"max_point_defect", r.max_point_defect},
            {"flow_tol", r.flow_tol},
            {"point_tol", r.point_tol},
            {"dt", r.dt},
            {"steps", r.steps},
            {"samples", r.samples},
            {"seed", r.seed}});
  return r.pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Network dynamics toolkit: colored graphs, balanced partitions, "
               "modular vector fields, and synchrony certification"};
  app.require_subcommand(1);

  std::string graph_path, map_path, field_path, partition_path, x0_path, out_path;
  int samples = 64, steps = 10000, max_nodes = 12, max_dim = 64;
  double tol = 1e-10, dt = 1e-3, flow_tol = 1e-6, point_tol = 1e-10;
  uint64_t seed = 42;
  bool enumerate = false, coarsest = false, linear_only = false;

  auto* validate = app.add_subcommand("validate", "Check a graph file and report its shape");
  validate->add_option("graph", graph_path, "graph JSON file")->required();

  auto* trees = app.add_subcommand("input-trees", "Print every node's input tree");
  trees->add_option("graph", graph_path, "graph JSON file")->required();

  auto* skel = app.add_subcommand("skeleton", "Group nodes by input-tree class");
  skel->add_option("graph", graph_path, "graph JSON file")->required();

  auto* autos = app.add_subcommand("autos", "Enumerate color-preserving graph automorphisms");
  autos->add_option("graph", graph_path, "graph JSON file")->required();
  autos->add_option("-o,--out", out_path, "directory for morphism files");
  autos->add_option("--max-nodes", max_nodes, "size guard for the search");

  auto* etale = app.add_subcommand("check-etale", "Certify a morphism locally bijective on inputs");
  etale->add_option("--map", map_path, "morphism JSON file")->required();

  auto* bal = app.add_subcommand("balanced", "Coarsest balanced partition, or all of them");
  bal->add_option("graph", graph_path, "graph JSON file")->required();
  bal->add_flag("--coarsest", coarsest, "print the coarsest balanced partition (default)");
  bal->add_flag("--enumerate", enumerate, "print every balanced partition");
  bal->add_option("--max-nodes", max_nodes, "size guard for enumeration");

  auto* quot = app.add_subcommand("quotient", "Collapse a balanced partition to its quotient network");
  quot->add_option("graph", graph_path, "graph JSON file")->required();
  quot->add_option("--partition", partition_path, "partition JSON file")->required();
  quot->add_option("-o,--out", out_path, "output directory")->required();

  auto* vsync = app.add_subcommand("verify-sync", "Check the two realized fields intertwine through a map");
  vsync->add_option("--map", map_path, "morphism JSON file")->required();
  vsync->add_option("--field", field_path, "field file on the codomain")->required();
  vsync->add_option("--samples", samples, "sample count");
  vsync->add_option("--tol", tol, "defect tolerance");
  vsync->add_option("--seed", seed, "sampling seed");

  auto* vgroup = app.add_subcommand("verify-group", "Check equivariance under all graph automorphisms");
  vgroup->add_option("--graph", graph_path, "graph JSON file")->required();
  vgroup->add_option("--field", field_path, "field file")->required();
  vgroup->add_option("--samples", samples, "sample count");
  vgroup->add_option("--tol", tol, "defect tolerance");
  vgroup->add_option("--seed", seed, "sampling seed");
  vgroup->add_option("--max-nodes", max_nodes, "size guard for the automorphism search");

  auto* asm_ = app.add_subcommand("assemble", "Assemble a field: matrix CSV or evaluation plan");
  asm_->add_option("--graph", graph_path, "graph JSON file")->required();
  asm_->add_option("--field", field_path, "field file")->required();
  asm_->add_flag("--linear", linear_only, "require matrix blocks and emit the matrix");
  asm_->add_option("-o,--out", out_path, "output file (default stdout)");

  auto* spec_cmd = app.add_subcommand("spectrum", "Eigenvalues of an assembled linear field");
  spec_cmd->add_option("--graph", graph_path, "graph JSON file")->required();
  spec_cmd->add_option("--field", field_path, "field file with matrix blocks")->required();
  spec_cmd->add_option("--max-dim", max_dim, "size guard for the eigensolver");

  auto* sim = app.add_subcommand("simulate", "Integrate a realized field with fixed-step RK4");
  sim->add_option("--graph", graph_path, "graph JSON file")->required();
  sim->add_option("--field", field_path, "field file")->required();
  sim->add_option("--x0", x0_path, "initial state CSV")->required();
  sim->add_option("--dt", dt, "step size")->required();
  sim->add_option("--steps", steps, "step count")->required();
  sim->add_option("-o,--out", out_path, "trajectory CSV output")->required();

  auto* fsync = app.add_subcommand("flow-sync", "Integrate upstairs and downstairs and compare flows");
  fsync->add_option("--map", map_path, "morphism JSON file")->required();
  fsync->add_option("--field", field_path, "field file on the codomain")->required();
  fsync->add_option("--x0", x0_path, "codomain initial state CSV")->required();
  fsync->add_option("--dt", dt, "step size");
  fsync->add_option("--steps", steps, "step count");
  fsync->add_option("--tol", flow_tol, "flow defect tolerance");
  fsync->add_option("--point-tol", point_tol, "field defect tolerance");
  fsync->add_option("--samples", samples, "sample count");
  fsync->add_option("--seed", seed, "sampling seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(graph_path);
    if (*trees) return cmd_input_trees(graph_path);
    if (*skel) return cmd_skeleton(graph_path);
    if (*autos) return cmd_autos(graph_path, out_path, max_nodes);
    if (*etale) return cmd_check_etale(map_path);
    if (*bal) {
      if (coarsest && enumerate) fail(Errc::io_error, "--coarsest and --enumerate conflict");
      return cmd_balanced(graph_path, enumerate, max_nodes);
    }
    if (*quot) return cmd_quotient(graph_path, partition_path, out_path);
    if (*vsync) return cmd_verify_sync(map_path, field_path, samples, tol, seed);
    if (*vgroup) return cmd_verify_group(graph_path, field_path, samples, tol, seed, max_nodes);
    if (*asm_) return cmd_assemble(graph_path, field_path, linear_only, out_path);
    if (*spec_cmd) return cmd_spectrum(graph_path, field_path, max_dim);
    if (*sim) return cmd_simulate(graph_path, field_path, x0_path, dt, steps, out_path);
    if (*fsync) {
      return cmd_flow_sync(map_path, field_path, x0_path, dt, steps, flow_tol, point_tol,
                           samples, seed);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::not_etale:
      case Errc::not_balanced:
      case Errc::not_essentially_surjective:
        return 1;  // the requested check ran and said no
      default:
        return 2;
    }
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace ccn
