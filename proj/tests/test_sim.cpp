#include <cmath>

#include "ccn/sim.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace ccn;

namespace {

// dx/dt = -x componentwise, as a plain callable.
struct Decay {
  void operator()(const std::vector<double>& x, std::vector<double>& out) const {
    for (size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
  }
};

}  // namespace

TEST_CASE("zero field holds still") {
  auto g = corpus::fan_in();
  auto dims = corpus::scalar_dims(g);
  std::vector<std::pair<std::string, ModuleSpec>> mods;
  ModuleSpec zero;
  zero.outputs = {"0*u0_0 + 0*u1_0"};
  auto sk = skeleton(g);
  int fed = sk.class_of[g->node_index("2")];
  mods.emplace_back(sk.classes[fed].id, zero);
  auto f = realize(make_virtual_field(g, dims, mods));

  auto traj = integrate_rk4(f, {0.4, -0.2, 1.0}, 0.1, 50);
  REQUIRE(traj.states.size() == 51);
  CHECK(traj.states.back() == std::vector<double>{0.4, -0.2, 1.0});
  CHECK(traj.times.back() == doctest::Approx(5.0));
}

TEST_CASE("linear decay matches the exponential") {
  auto traj = integrate_rk4(Decay{}, {1.0}, 1e-3, 1000);
  REQUIRE(traj.states.size() == 1001);
  // Fourth-order local error keeps the terminal value within 1e-10 of e^{-1}.
  CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) < 1e-10);
  CHECK(traj.times.back() == doctest::Approx(1.0));
}

TEST_CASE("global error contracts at fourth order") {
  // Halving the step must shrink the terminal error by roughly 2^4. The steps
  // are large enough that truncation, not roundoff, dominates.
  auto coarse = integrate_rk4(Decay{}, {1.0}, 0.1, 10);
  auto fine = integrate_rk4(Decay{}, {1.0}, 0.05, 20);
  double e_coarse = std::abs(coarse.states.back()[0] - std::exp(-1.0));
  double e_fine = std::abs(fine.states.back()[0] - std::exp(-1.0));
  double ratio = e_coarse / e_fine;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("determinism") {
  auto g = corpus::three_cycle();
  auto dims = corpus::scalar_dims(g);
  std::vector<std::pair<std::string, ModuleSpec>> mods{{"c0", corpus::one_slot("tanh")}};
  auto f = realize(make_virtual_field(g, dims, mods));
  auto t1 = integrate_rk4(f, {0.1, 0.2, 0.3}, 1e-2, 500);
  auto t2 = integrate_rk4(f, {0.1, 0.2, 0.3}, 1e-2, 500);
  CHECK(t1.states == t2.states);
  CHECK(t1.times == t2.times);
}

TEST_CASE("blowup is reported with its step") {
  // dx/dt = x^2 from x(0)=1 blows up at t=1.
  struct Quad {
    void operator()(const std::vector<double>& x, std::vector<double>& out) const {
      out[0] = x[0] * x[0];
    }
  };
  try {
    integrate_rk4(Quad{}, {1.0}, 0.01, 200);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_finite_state);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("argument guards") {
  CHECK_THROWS_AS(integrate_rk4(Decay{}, {1.0}, 0.0, 10), Error);
  CHECK_THROWS_AS(integrate_rk4(Decay{}, {1.0}, -0.1, 10), Error);
  CHECK_THROWS_AS(integrate_rk4(Decay{}, {1.0}, 0.1, -1), Error);

  // A field rejects states of the wrong length.
  auto g = corpus::three_cycle();
  auto dims = corpus::scalar_dims(g);
  auto f = realize(make_virtual_field(g, dims, {{"c0", corpus::one_slot("tanh")}}));
  CHECK_THROWS_AS(integrate_rk4(f, {0.1, 0.2}, 0.1, 5), Error);
}

TEST_CASE("flow sync along the identity is exact") {
  auto g = corpus::three_cycle();
  auto dims = corpus::scalar_dims(g);
  auto w = make_virtual_field(g, dims, {{"c0", corpus::one_slot("tanh")}});
  auto rep = flow_sync_check(identity_morphism(g), w, {0.3, -0.1, 0.8}, 1e-2, 100);
  CHECK(rep.pass);
  CHECK(rep.max_flow_defect == 0.0);
  CHECK(rep.max_point_defect == 0.0);
  CHECK(rep.steps == 100);
}

TEST_CASE("flow sync across a fold") {
  // relay folded onto the two-cycle: start downstairs anywhere, the lifted
  // trajectory keeps nodes 1 and 3 in lockstep.
  auto phi = corpus::fold_ends();
  auto dims = corpus::scalar_dims(phi.codomain);
  auto w = make_virtual_field(phi.codomain, dims, {{"c0", corpus::one_slot("cubic")}});
  auto rep = flow_sync_check(phi, w, {0.7, -0.4}, 1e-3, 2000);
  CHECK(rep.pass);
  CHECK(rep.max_flow_defect < 1e-6);
}

TEST_CASE("flow sync catches a broken pairing") {
  // Same shapes, but the downstairs field is not the image of the upstairs
  // one: tamper by checking a non-quotient map built by hand. fan_in -> relay
  // collapsing the twins is not etale, so the check refuses it outright.
  auto g = corpus::fan_in();
  auto h = corpus::relay();
  auto phi = validate_morphism(g, h, {{"1a", "2"}, {"1b", "2"}, {"2", "3"}},
                               {{"alpha", "c"}, {"beta", "c"}});
  auto dims = corpus::scalar_dims(h);
  auto w = make_virtual_field(h, dims, {{"c0", corpus::one_slot("tanh")}});
  CHECK_THROWS_AS(flow_sync_check(phi, w, {0.1, 0.2, 0.3}, 1e-2, 10), Error);
}
