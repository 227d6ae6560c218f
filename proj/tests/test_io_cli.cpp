#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "ccn/cli.hpp"
#include "ccn/io.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace ccn;
namespace fs = std::filesystem;

namespace {

/// Fresh directory per test case, removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("ccn-io-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int cli(std::vector<std::string> args) { return run_cli(args); }

}  // namespace

TEST_CASE("graph json round trip") {
  for (auto g : {corpus::relay(), corpus::mixed(), corpus::double_edge()}) {
    auto text = graph_to_json_string(*g);
    auto back = graph_from_json_string(text);
    CHECK(*back == *g);
  }
}

TEST_CASE("graph json rejects malformed input") {
  CHECK_THROWS_AS(graph_from_json_string("not json"), Error);
  CHECK_THROWS_AS(graph_from_json_string("[]"), Error);
  CHECK_THROWS_AS(graph_from_json_string("{}"), Error);
  CHECK_THROWS_AS(graph_from_json_string(R"({"colors":{"node_colors":[1]}})"), Error);
  try {
    graph_from_json_string("{\"oops\": true}");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }
  // Structurally invalid content surfaces the structural code, not io_error.
  const char* dangling = R"({
    "colors": {"node_colors": ["cell"], "edge_colors": [{"id": "e", "src": "cell", "dst": "cell"}]},
    "nodes": [{"id": "1", "color": "cell"}],
    "edges": [{"id": "x", "src": "1", "dst": "ghost", "color": "e"}]
  })";
  try {
    graph_from_json_string(dangling);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dangling_endpoint);
  }
}

TEST_CASE("morphism files resolve graph paths relative to themselves") {
  TempDir dir;
  auto phi = corpus::fold_ends();
  write_graph_file(dir.file("relay.json"), *phi.domain);
  write_graph_file(dir.file("two_cycle.json"), *phi.codomain);
  write_morphism_file(dir.file("fold.json"), phi, "relay.json", "two_cycle.json");

  auto back = read_morphism_file(dir.file("fold.json"));
  CHECK(same_morphism(back, phi));
}

TEST_CASE("morphism file errors") {
  TempDir dir;
  CHECK_THROWS_AS(read_morphism_file(dir.file("missing.json")), Error);

  auto phi = corpus::fold_ends();
  write_graph_file(dir.file("relay.json"), *phi.domain);
  write_graph_file(dir.file("two_cycle.json"), *phi.codomain);
  // Map text that does not commute with the endpoints.
  write_text_file(dir.file("bad.json"), R"({
    "domain": "relay.json",
    "codomain": "two_cycle.json",
    "node_map": {"1": "a", "2": "b", "3": "b"},
    "edge_map": {"a": "ab", "b": "ba", "c": "ba"}
  })");
  CHECK_THROWS_AS(read_morphism_file(dir.file("bad.json")), Error);
}

TEST_CASE("partition files round trip") {
  TempDir dir;
  auto g = corpus::relay();
  auto p = make_partition(g, {{"1", "3"}, {"2"}});
  write_partition_file(dir.file("p.json"), *g, p);
  auto back = read_partition_file(dir.file("p.json"), g);
  CHECK(back.blocks == p.blocks);

  write_text_file(dir.file("bad.json"), R"({"blocks": [["1"], ["2"]]})");
  CHECK_THROWS_AS(read_partition_file(dir.file("bad.json"), g), Error);
}

TEST_CASE("field files bind expression modules") {
  auto g = corpus::double_edge();
  const char* text = R"js({
    "dims": {"cell": 1},
    "modules": {
      "c1": {"outputs": ["tanh(u0_0) + tanh(u1_0)"], "slots": 2}
    }
  })js";
  auto f = field_from_json_string(text, g);
  CHECK_FALSE(f.linear);
  REQUIRE(f.smooth.has_value());
  auto realized = realize(*f.smooth);
  auto out = realized({0.5, 0.0});
  CHECK(out[1] == doctest::Approx(2.0 * std::tanh(0.5)));
}

TEST_CASE("field files bind linear modules") {
  auto g = corpus::three_cycle();
  const char* text = R"({
    "dims": {"cell": 1},
    "modules": {
      "c0": {"blocks": {"e:cell": [[0.5]]}}
    }
  })";
  auto f = field_from_json_string(text, g);
  CHECK(f.linear);
  REQUIRE(f.lin.has_value());
  auto a = assemble_matrix(*f.lin);
  CHECK(a.matrix.at(0, 2) == 0.5);
}

TEST_CASE("field files reject mixed module styles") {
  auto g = corpus::three_cycle();
  const char* text = R"({
    "dims": {"cell": 1},
    "modules": {
      "c0": {"outputs": ["u0_0"], "blocks": {"e:cell": [[1.0]]}}
    }
  })";
  CHECK_THROWS_AS(field_from_json_string(text, g), Error);

  const char* empty = R"({"dims": {"cell": 1}, "modules": {}})";
  CHECK_THROWS_AS(field_from_json_string(empty, g), Error);
}

TEST_CASE("vector csv round trip") {
  TempDir dir;
  std::vector<double> x{0.1, -2.5, 1.0 / 3.0};
  write_text_file(dir.file("x.csv"), vector_to_csv(x));
  CHECK(read_vector_csv(dir.file("x.csv")) == x);

  // Headers and blank lines are skipped.
  write_text_file(dir.file("h.csv"), "a_0,b_0\n\n0.25,0.5\n");
  CHECK(read_vector_csv(dir.file("h.csv")) == std::vector<double>{0.25, 0.5});

  write_text_file(dir.file("none.csv"), "only,words\n");
  CHECK_THROWS_AS(read_vector_csv(dir.file("none.csv")), Error);
}

TEST_CASE("trajectory csv carries node-labelled columns") {
  auto g = corpus::two_cycle();
  auto space = layout(g, corpus::scalar_dims(g));
  Trajectory traj;
  traj.dt = 0.5;
  traj.times = {0.0, 0.5};
  traj.states = {{1.0, 2.0}, {3.0, 4.0}};
  auto text = trajectory_to_csv(traj, space);
  CHECK(text == "t,a_0,b_0\n0,1,2\n0.5,3,4\n");
}

TEST_CASE("matrix csv digits survive a round trip") {
  Matrix m(1, 2);
  m.at(0, 0) = 1.0 / 3.0;
  m.at(0, 1) = -7.25;
  auto text = matrix_to_csv(m);
  CHECK(text == "0.33333333333333331,-7.25\n");
}

// ---------------------------------------------------------------------------
// CLI surface. Exit codes: 0 pass, 1 failed check, 2 bad input or usage.
// ---------------------------------------------------------------------------

TEST_CASE("cli validate") {
  TempDir dir;
  write_graph_file(dir.file("g.json"), *corpus::relay());
  CHECK(cli({"validate", dir.file("g.json")}) == 0);

  write_text_file(dir.file("junk.json"), "{");
  CHECK(cli({"validate", dir.file("junk.json")}) == 2);

  // Well-formed JSON, structurally broken graph.
  write_text_file(dir.file("dup.json"), R"({
    "colors": {"node_colors": ["cell"], "edge_colors": []},
    "nodes": [{"id": "1", "color": "cell"}, {"id": "1", "color": "cell"}],
    "edges": []
  })");
  CHECK(cli({"validate", dir.file("dup.json")}) == 1);

  CHECK(cli({"validate", dir.file("absent.json")}) == 2);
}

TEST_CASE("cli usage errors") {
  CHECK(cli({}) == 2);
  CHECK(cli({"no-such-command"}) == 2);
  CHECK(cli({"validate"}) == 2);  // missing argument
  CHECK(cli({"--help"}) == 0);
}

TEST_CASE("cli balanced and quotient") {
  TempDir dir;
  write_graph_file(dir.file("g.json"), *corpus::relay());
  CHECK(cli({"balanced", dir.file("g.json"), "--coarsest"}) == 0);
  CHECK(cli({"balanced", dir.file("g.json"), "--enumerate"}) == 0);

  write_text_file(dir.file("p.json"), R"({"blocks": [["1", "3"], ["2"]]})");
  CHECK(cli({"quotient", dir.file("g.json"), "--partition", dir.file("p.json"),
             "-o", dir.file("out")}) == 0);
  CHECK(fs::exists(dir.file("out") + "/quotient.json"));
  CHECK(fs::exists(dir.file("out") + "/projection.json"));

  // The written projection reads back as a valid etale map.
  auto proj = read_morphism_file(dir.file("out") + "/projection.json");
  CHECK(is_etale(proj).ok);

  // Unbalanced partition: 2 is fed from {1}, 3 from {2,3}.
  write_text_file(dir.file("bad.json"), R"({"blocks": [["2", "3"], ["1"]]})");
  CHECK(cli({"quotient", dir.file("g.json"), "--partition", dir.file("bad.json"),
             "-o", dir.file("out2")}) == 1);
}

TEST_CASE("cli check-etale") {
  TempDir dir;
  auto phi = corpus::merge_twins();
  write_graph_file(dir.file("fan.json"), *phi.domain);
  write_graph_file(dir.file("double.json"), *phi.codomain);
  write_morphism_file(dir.file("merge.json"), phi, "fan.json", "double.json");
  CHECK(cli({"check-etale", "--map", dir.file("merge.json")}) == 0);

  // Collapsing the twins onto one node of relay is not etale.
  auto g = corpus::fan_in();
  auto h = corpus::relay();
  auto bad = validate_morphism(g, h, {{"1a", "2"}, {"1b", "2"}, {"2", "3"}},
                               {{"alpha", "c"}, {"beta", "c"}});
  write_graph_file(dir.file("relay.json"), *h);
  write_morphism_file(dir.file("bad.json"), bad, "fan.json", "relay.json");
  CHECK(cli({"check-etale", "--map", dir.file("bad.json")}) == 1);
}

TEST_CASE("cli verify and simulate") {
  TempDir dir;
  auto phi = corpus::fold_ends();
  write_graph_file(dir.file("relay.json"), *phi.domain);
  write_graph_file(dir.file("two.json"), *phi.codomain);
  write_morphism_file(dir.file("fold.json"), phi, "relay.json", "two.json");
  write_text_file(dir.file("field.json"), R"js({
    "dims": {"cell": 1},
    "modules": {"c0": {"outputs": ["tanh(u0_0)"]}}
  })js");
  CHECK(cli({"verify-sync", "--map", dir.file("fold.json"), "--field",
             dir.file("field.json")}) == 0);

  write_text_file(dir.file("x0.csv"), "0.25,-0.75\n");
  CHECK(cli({"flow-sync", "--map", dir.file("fold.json"), "--field",
             dir.file("field.json"), "--x0", dir.file("x0.csv"), "--steps", "200"}) == 0);

  write_text_file(dir.file("y0.csv"), "0.25,-0.75\n");
  CHECK(cli({"simulate", "--graph", dir.file("two.json"), "--field",
             dir.file("field.json"), "--x0", dir.file("y0.csv"), "--dt", "0.01",
             "--steps", "10", "-o", dir.file("traj.csv")}) == 0);
  auto text = read_text_file(dir.file("traj.csv"));
  CHECK(text.substr(0, 8) == "t,a_0,b_");
  // Wrong-length state is an input error.
  write_text_file(dir.file("short.csv"), "0.25\n");
  CHECK(cli({"simulate", "--graph", dir.file("two.json"), "--field",
             dir.file("field.json"), "--x0", dir.file("short.csv"), "--dt", "0.01",
             "--steps", "10", "-o", dir.file("t2.csv")}) == 2);
}

TEST_CASE("cli structure reports") {
  TempDir dir;
  write_graph_file(dir.file("g.json"), *corpus::double_edge());
  CHECK(cli({"skeleton", dir.file("g.json")}) == 0);
  CHECK(cli({"input-trees", dir.file("g.json")}) == 0);
  CHECK(cli({"autos", dir.file("g.json")}) == 0);

  write_graph_file(dir.file("six.json"), *corpus::six_tap());
  CHECK(cli({"autos", dir.file("six.json"), "--max-nodes", "3"}) == 2);
}

TEST_CASE("cli spectrum") {
  TempDir dir;
  write_graph_file(dir.file("g.json"), *corpus::three_cycle());
  write_text_file(dir.file("lin.json"), R"({
    "dims": {"cell": 1},
    "modules": {"c0": {"blocks": {"e:cell": [[1.0]]}}}
  })");
  CHECK(cli({"spectrum", "--graph", dir.file("g.json"), "--field",
             dir.file("lin.json")}) == 0);
  CHECK(cli({"spectrum", "--graph", dir.file("g.json"), "--field",
             dir.file("lin.json"), "--max-dim", "2"}) == 2);
}
