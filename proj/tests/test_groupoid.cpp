#include <set>

#include "ccn/groupoid.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccn;

TEST_CASE("skeleton of the double edge: leafless class and swap class") {
  auto sk = skeleton(corpus::double_edge());
  REQUIRE(sk.classes.size() == 2);
  CHECK(sk.classes[0].id == "c0");
  CHECK(sk.classes[0].signature.leafless());
  CHECK(sk.classes[0].aut.order == 1);
  CHECK(sk.classes[1].aut.order == 2);
  CHECK(sk.class_of[0] == 0);
  CHECK(sk.class_of[1] == 1);
}

TEST_CASE("skeleton of the fan-in: twin sources share a class") {
  auto g = corpus::fan_in();
  auto sk = skeleton(g);
  REQUIRE(sk.classes.size() == 2);
  CHECK(sk.classes[0].members ==
        std::vector<int>{g->node_index("1a"), g->node_index("1b")});
  CHECK(sk.classes[1].members == std::vector<int>{g->node_index("2")});
  CHECK(sk.classes[1].aut.order == 2);
}

TEST_CASE("skeleton is one class when all trees agree") {
  for (auto g : {corpus::relay(), corpus::three_cycle(), corpus::six_tap()}) {
    auto sk = skeleton(g);
    CHECK(sk.classes.size() == 1);
    CHECK(sk.classes[0].members.size() == g->nodes.size());
    CHECK(sk.classes[0].aut.order == 1);
  }
}

TEST_CASE("skeleton of the mixed-color network") {
  auto g = corpus::mixed();
  auto sk = skeleton(g);
  REQUIRE(sk.classes.size() == 2);
  // e1, e2 share (E:exc + I:inh); i1 stands alone.
  CHECK(sk.classes[sk.class_of[g->node_index("e1")]].members.size() == 2);
  CHECK(sk.classes[sk.class_of[g->node_index("i1")]].members.size() == 1);
}

TEST_CASE("induced class map transports signatures") {
  auto phi = corpus::merge_twins();
  auto cm = induced_class_map(phi);
  REQUIRE(cm.class_map.size() == 2);
  for (size_t c = 0; c < cm.class_map.size(); ++c) {
    CHECK(cm.source.classes[c].signature ==
          cm.target.classes[cm.class_map[c]].signature);
  }
  CHECK(is_essentially_surjective(cm));
}

TEST_CASE("class map demands an etale morphism") {
  auto f = corpus::fan_in();
  auto r = corpus::relay();
  auto bad = validate_morphism(f, r, {{"1a", "2"}, {"1b", "2"}, {"2", "3"}},
                               {{"alpha", "c"}, {"beta", "c"}});
  CHECK_THROWS_AS(induced_class_map(bad), Error);
}

TEST_CASE("essential surjectivity can fail") {
  // embed_pair lands on nodes 1 and 2 of relay; relay has a single class, so
  // this one is essentially surjective.
  CHECK(is_essentially_surjective(induced_class_map(corpus::embed_pair())));

  // A section of merge_twins misses nothing either (both classes hit); build
  // a map into double_edge seeing only the leafless class instead.
  auto colors = corpus::mono_colors();
  auto dot = validate_colored_graph(colors, {{"p", "cell"}}, {});
  auto phi = validate_morphism(dot, corpus::double_edge(), {{"p", "1"}}, {});
  // dot -> node 1 is etale: node 1 has no in-edges.
  auto cm = induced_class_map(phi);
  CHECK_FALSE(is_essentially_surjective(cm));
}

TEST_CASE("automorphisms match the exhaustive count") {
  for (auto g : {corpus::one_loop(), corpus::two_cycle(), corpus::relay(),
                 corpus::double_edge(), corpus::fan_in(), corpus::three_cycle(),
                 corpus::six_tap(), corpus::mixed()}) {
    auto group = graph_automorphisms(g);
    CHECK(group.order() == oracle::automorphism_count(g));
  }
}

TEST_CASE("automorphism groups have the expected orders") {
  CHECK(graph_automorphisms(corpus::relay()).order() == 1);
  CHECK(graph_automorphisms(corpus::three_cycle()).order() == 3);
  CHECK(graph_automorphisms(corpus::two_cycle()).order() == 2);
  CHECK(graph_automorphisms(corpus::fan_in()).order() == 2);
  // Both edges of double_edge may swap while the nodes stay put.
  CHECK(graph_automorphisms(corpus::double_edge()).order() == 2);
  CHECK(graph_automorphisms(corpus::six_tap()).order() == 1);
  CHECK(graph_automorphisms(corpus::mixed()).order() == 1);
}

TEST_CASE("automorphism elements validate and are distinct") {
  auto g = corpus::three_cycle();
  auto group = graph_automorphisms(g);
  std::set<std::vector<int>> node_maps;
  for (const auto& phi : group.elements) {
    CHECK(phi.domain == g);
    CHECK(phi.codomain == g);
    CHECK(is_etale(phi).ok);
    node_maps.insert(phi.node_map);
  }
  CHECK(node_maps.size() == 3);

  // Closed under composition.
  for (const auto& x : group.elements) {
    for (const auto& y : group.elements) {
      auto xy = compose(x, y);
      bool found = false;
      for (const auto& z : group.elements) found = found || same_morphism(xy, z);
      CHECK(found);
    }
  }
}

TEST_CASE("automorphism search is guarded") {
  CHECK_THROWS_AS(graph_automorphisms(corpus::six_tap(), 4), Error);
}
