#include <cmath>
#include <random>

#include "ccn/dynamics.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace ccn;

namespace {

VirtualField field_on(GraphPtr g, const std::string& kind) {
  auto dims = corpus::scalar_dims(g);
  std::vector<std::pair<std::string, ModuleSpec>> mods;
  auto sk = skeleton(g);
  for (int c = 0; c < static_cast<int>(sk.classes.size()); ++c) {
    int arity = static_cast<int>(sk.classes[c].signature.slots.size());
    if (arity == 0) continue;
    auto spec = arity == 1 ? corpus::one_slot(kind) : corpus::two_slot(kind);
    mods.emplace_back("c" + std::to_string(c), spec);
  }
  return make_virtual_field(std::move(g), dims, mods);
}

std::vector<double> random_state(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

}  // namespace

TEST_CASE("slot symmetry validation accepts symmetric modules") {
  auto g = corpus::double_edge();
  auto dims = corpus::scalar_dims(g);
  auto sig = signature_of(input_tree(g, "2"));
  auto m = bind_module(corpus::two_slot("tanh"), sig, dims);
  auto rep = validate_symmetry(m);
  CHECK(rep.pass);
  CHECK(rep.max_defect == 0.0);
}

TEST_CASE("slot symmetry validation rejects asymmetric modules with a witness") {
  auto g = corpus::double_edge();
  auto dims = corpus::scalar_dims(g);
  auto sig = signature_of(input_tree(g, "2"));
  ModuleSpec spec;
  spec.outputs = {"u0_0 - u1_0"};
  auto m = bind_module(spec, sig, dims);
  auto rep = validate_symmetry(m);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_defect > 0.1);
  REQUIRE(rep.witness.size() == 2);
  // The witness realizes the reported defect.
  auto swapped = rep.witness;
  std::swap(swapped[rep.slot_a], swapped[rep.slot_b]);
  double a = m.eval(rep.witness)[0];
  double b = m.eval(swapped)[0];
  CHECK(std::abs(a - b) == doctest::Approx(rep.max_defect));
}

TEST_CASE("slots of different type need not commute") {
  auto g = corpus::mixed();
  auto dims = corpus::scalar_dims(g);
  auto sig = signature_of(input_tree(g, "e1"));  // one E slot, one I slot
  ModuleSpec spec;
  spec.outputs = {"u0_0 - 2*u1_0"};
  auto m = bind_module(spec, sig, dims);
  CHECK(validate_symmetry(m).pass);
}

TEST_CASE("symmetrize by expansion averages the orbit") {
  auto g = corpus::double_edge();
  auto dims = corpus::scalar_dims(g);
  auto sig = signature_of(input_tree(g, "2"));
  ModuleSpec spec;
  spec.outputs = {"u0_0"};
  auto m = bind_module(spec, sig, dims);

  auto sym = symmetrize(m, SymmetrizeMode::expand);
  CHECK(sym.expression_backed());
  CHECK(validate_symmetry(sym).pass);
  CHECK(sym.eval({{1.0}, {3.0}})[0] == doctest::Approx(2.0));

  auto wrapped = symmetrize(m, SymmetrizeMode::wrapper);
  CHECK_FALSE(wrapped.expression_backed());
  CHECK(validate_symmetry(wrapped).pass);
  CHECK(wrapped.eval({{1.0}, {3.0}})[0] == doctest::Approx(2.0));

  // Symmetric input already: averaging is the identity there.
  CHECK(sym.eval({{2.5}, {2.5}})[0] == doctest::Approx(2.5));
}

TEST_CASE("virtual fields bind modules by class id or printed signature") {
  auto g = corpus::double_edge();
  auto dims = corpus::scalar_dims(g);
  auto sk = skeleton(g);
  int fed = sk.class_of[g->node_index("2")];
  std::string key = print_signature(sk.classes[fed].signature, *g->colors);

  auto w = make_virtual_field(g, dims, {{key, corpus::two_slot("tanh")}});
  CHECK(w.modules.size() == sk.classes.size());
  CHECK(w.modules[fed].root_dim == 1);
  // The leafless class was filled with the zero module.
  int leafless = sk.class_of[g->node_index("1")];
  CHECK(w.modules[leafless].zero);

  // Unknown key.
  CHECK_THROWS_AS(make_virtual_field(g, dims, {{"c9", corpus::two_slot("tanh")}}), Error);
  // Missing a fed class.
  CHECK_THROWS_AS(
      make_virtual_field(g, dims, std::vector<std::pair<std::string, ModuleSpec>>{}), Error);
  // Duplicate key.
  CHECK_THROWS_AS(make_virtual_field(
                      g, dims,
                      {{"c" + std::to_string(fed), corpus::two_slot("tanh")},
                       {key, corpus::two_slot("linear")}}),
                  Error);
  // Asymmetric module is rejected at construction.
  ModuleSpec lop;
  lop.outputs = {"u0_0 - u1_0"};
  CHECK_THROWS_AS(make_virtual_field(g, dims, {{key, lop}}), Error);
}

TEST_CASE("realized field on the double edge") {
  auto g = corpus::double_edge();
  auto w = field_on(g, "tanh");
  auto f = realize(w);
  REQUIRE(f.dim() == 2);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_state(2, rng);
    auto out = f(x);
    CHECK(out[0] == 0.0);  // leafless node
    CHECK(out[1] == doctest::Approx(2.0 * std::tanh(x[0])).epsilon(1e-14));
  }
}

TEST_CASE("realized field on the fan-in") {
  auto g = corpus::fan_in();
  auto w = field_on(g, "cubic");
  auto f = realize(w);
  REQUIRE(f.dim() == 3);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_state(3, rng);  // order: 1a, 1b, 2
    auto out = f(x);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(x[0] * x[0] * x[0] + x[1] * x[1] * x[1]).epsilon(1e-14));
  }
}

TEST_CASE("realized field routes sources through in-edges") {
  auto g = corpus::six_tap();
  auto w = field_on(g, "tanh");
  auto f = realize(w);
  REQUIRE(f.dim() == 6);

  std::mt19937_64 rng(9);
  auto x = random_state(6, rng);
  auto out = f(x);
  // Node k listens to node k-1, except node 1 listens to node 3.
  CHECK(out[0] == doctest::Approx(std::tanh(x[2])));
  for (int k = 1; k < 6; ++k) CHECK(out[k] == doctest::Approx(std::tanh(x[k - 1])));
}

TEST_CASE("multi-component blocks keep their layout") {
  auto g = corpus::mixed();
  auto dims = resolve_dims(g->colors, {{"exc", 2}, {"inh", 1}});
  std::vector<std::pair<std::string, ModuleSpec>> mods;
  auto sk = skeleton(g);
  for (int c = 0; c < static_cast<int>(sk.classes.size()); ++c) {
    const auto& sig = sk.classes[c].signature;
    ModuleSpec spec;
    if (g->colors->node_colors[sig.root_color] == "exc") {
      // Slots: one E (width 2) then one I (width 1) in canonical order.
      spec.outputs = {"tanh(u0_0) + u1_0", "tanh(u0_1) - u1_0"};
    } else {
      spec.outputs = {"u0_0 + u0_1"};
    }
    mods.emplace_back("c" + std::to_string(c), spec);
  }
  auto w = make_virtual_field(g, dims, mods);
  auto f = realize(w);
  REQUIRE(f.dim() == 5);

  // Layout: e1 [0,2), e2 [2,4), i1 [4,5).
  std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5};
  auto out = f(x);
  // e1 reads E from e2 and I from i1.
  CHECK(out[0] == doctest::Approx(std::tanh(0.3) + 0.5));
  CHECK(out[1] == doctest::Approx(std::tanh(0.4) - 0.5));
  // e2 reads E from e1 and I from i1.
  CHECK(out[2] == doctest::Approx(std::tanh(0.1) + 0.5));
  CHECK(out[3] == doctest::Approx(std::tanh(0.2) - 0.5));
  // i1 reads F from e1.
  CHECK(out[4] == doctest::Approx(0.1 + 0.2));
}

TEST_CASE("pullback transports modules along the class map") {
  auto phi = corpus::merge_twins();
  auto w = field_on(phi.codomain, "tanh");
  auto up = pullback_field(phi, w);
  CHECK(up.graph == phi.domain);
  auto sk_up = skeleton(phi.domain);
  REQUIRE(up.modules.size() == sk_up.classes.size());

  // The fed class upstairs carries the same two-slot module.
  int fed = sk_up.class_of[phi.domain->node_index("2")];
  CHECK_FALSE(up.modules[fed].zero);
  CHECK(up.modules[fed].slot_dims == std::vector<int>{1, 1});

  // Realized: node 2 upstairs sums over its two distinct sources.
  auto f = realize(up);
  std::vector<double> x{0.2, -0.7, 0.4};
  auto out = f(x);
  CHECK(out[2] == doctest::Approx(std::tanh(0.2) + std::tanh(-0.7)));
}

TEST_CASE("pullback demands an etale map") {
  // fan_in -> relay collapsing the twins onto node 2 is not etale.
  auto g = corpus::fan_in();
  auto h = corpus::relay();
  auto phi = validate_morphism(g, h, {{"1a", "2"}, {"1b", "2"}, {"2", "3"}},
                               {{"alpha", "c"}, {"beta", "c"}});
  auto w = field_on(h, "tanh");
  CHECK_THROWS_AS(pullback_field(phi, w), Error);
}

TEST_CASE("related flows across every corpus quotient") {
  struct Case {
    GraphMorphism phi;
    const char* name;
  };
  std::vector<Case> cases{{corpus::collapse_all(), "collapse_all"},
                          {corpus::fold_ends(), "fold_ends"},
                          {corpus::embed_pair(), "embed_pair"},
                          {corpus::merge_twins(), "merge_twins"},
                          {corpus::wrap(), "wrap"},
                          {corpus::section(), "section"}};
  for (const auto& kind : {"linear", "tanh", "cubic"}) {
    for (const auto& c : cases) {
      CAPTURE(c.name);
      CAPTURE(kind);
      auto w = field_on(c.phi.codomain, kind);
      auto rep = check_related(c.phi, w, 64, 1e-10, 2026);
      CHECK(rep.pass);
      CHECK(rep.samples == 64);
    }
  }
}

TEST_CASE("relatedness fails for a mismatched field pair") {
  // Hand-build the pullback with the wrong module downstairs and compare
  // through the raw report: defect must exceed any reasonable tolerance.
  auto phi = corpus::merge_twins();
  auto w = field_on(phi.codomain, "tanh");
  auto up = pullback_field(phi, w);
  // Tamper: swap in a different module upstairs.
  auto sk_up = skeleton(phi.domain);
  int fed = sk_up.class_of[phi.domain->node_index("2")];
  auto dims = corpus::scalar_dims(phi.domain);
  up.modules[fed] =
      bind_module(corpus::two_slot("cubic"), sk_up.classes[fed].signature, dims);
  auto f_up = realize(up);
  auto f_down = realize(w);
  auto gather = pushforward(phi, corpus::scalar_dims(phi.codomain));
  std::vector<double> y{0.3, 0.1};
  auto lifted = ccn::apply(gather, y);
  auto lhs = f_up(lifted);
  auto rhs = ccn::apply(gather, f_down(y));
  double defect = 0.0;
  for (size_t i = 0; i < lhs.size(); ++i) defect = std::max(defect, std::abs(lhs[i] - rhs[i]));
  CHECK(defect > 1e-3);
}

TEST_CASE("group invariance for the triangle") {
  auto g = corpus::triangle();
  auto w = field_on(g, "tanh");
  auto rep = check_group_invariance(w, 64, 1e-10, 11);
  CHECK(rep.pass);
  CHECK(rep.group_order == 3);
}

TEST_CASE("group invariance reports the group order even when trivial") {
  auto g = corpus::relay();
  auto w = field_on(g, "tanh");
  auto rep = check_group_invariance(w);
  CHECK(rep.pass);
  CHECK(rep.group_order == 1);
}

TEST_CASE("ode equivalence for quotient assignments") {
  auto phi = corpus::merge_twins();
  auto down = field_on(phi.codomain, "tanh");
  auto up = pullback_field(phi, down);
  CHECK(check_ode_equivalence(phi, up, down));

  // Round trip: pulling back again changes nothing.
  auto up2 = pullback_field(phi, down);
  REQUIRE(up.modules.size() == up2.modules.size());
  for (size_t c = 0; c < up.modules.size(); ++c)
    CHECK(same_module(up.modules[c], up2.modules[c]));

  // A different module upstairs is not equivalent.
  auto other = field_on(phi.domain, "cubic");
  CHECK_FALSE(check_ode_equivalence(phi, other, down));
}

TEST_CASE("ode equivalence needs an essentially surjective class map") {
  // dot -> double_edge hits only the leafless class downstairs.
  ccn::RawColorGraph raw;
  raw.node_colors = {"cell"};
  raw.edge_colors = {{"e", "cell", "cell"}};
  auto dot = validate_colored_graph(validate_color_graph(raw), {{"p", "cell"}}, {});
  auto phi = validate_morphism(dot, corpus::double_edge(), {{"p", "1"}}, {});
  auto down = field_on(phi.codomain, "tanh");
  VirtualField up;
  up.graph = dot;
  up.sk = skeleton(dot);
  up.dims = corpus::scalar_dims(dot);
  auto zero = bind_module(std::vector<ExprPtr>{}, up.sk.classes[0].signature, up.dims);
  up.modules = {zero};
  CHECK_THROWS_AS(check_ode_equivalence(phi, up, down), Error);
  try {
    check_ode_equivalence(phi, up, down);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_essentially_surjective);
  }
}

TEST_CASE("same_module distinguishes structure") {
  auto g = corpus::double_edge();
  auto dims = corpus::scalar_dims(g);
  auto sig = signature_of(input_tree(g, "2"));
  auto a = bind_module(corpus::two_slot("tanh"), sig, dims);
  auto b = bind_module(corpus::two_slot("tanh"), sig, dims);
  auto c = bind_module(corpus::two_slot("cubic"), sig, dims);
  CHECK(same_module(a, b));
  CHECK_FALSE(same_module(a, c));
}
