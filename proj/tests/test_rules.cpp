#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gur/rules.hpp"
#include "gur/std_states.hpp"

using namespace gur;

namespace {

CMat density_of(const Gemenge& g) { return gemenge_density(g).matrix; }

QuantumState random_state(const CompositeSpace& sp, Rng& rng) {
  const int d = sp.total();
  return {sp, random_density(d, rng.uniform_int(1, d), rng)};
}

Outcome random_local_outcome(const CompositeSpace& sp, Rng& rng) {
  const int k = rng.uniform_int(0, sp.num_subsystems() - 1);
  const int dk = sp.dim(k);
  return {random_projector(dk, rng.uniform_int(1, dk), rng), k};
}

const std::vector<CompositeSpace> kSpaces = {CompositeSpace{2},
                                             CompositeSpace{3},
                                             CompositeSpace{2, 2},
                                             CompositeSpace{2, 3}};

}  // namespace

TEST_CASE("luders projects and sub-normalizes") {
  const CompositeSpace sp{2};
  const QuantumState plus = make_state(sp, plus_projector());
  const Gemenge out = luders({basis_projector(2, 0), 0}, plus);
  REQUIRE(out.items.size() == 1);
  CHECK(max_diff(density_of(out), 0.5 * basis_projector(2, 0)) <= 1e-15);

  const CompositeSpace sp2{2, 2};
  const QuantumState bell = make_state(sp2, bell_phi_plus());
  const Gemenge out2 = luders({basis_projector(2, 0), 0}, bell);
  const CMat e00 = tensor(basis_projector(2, 0), basis_projector(2, 0));
  CHECK(max_diff(density_of(out2), 0.5 * e00) <= 1e-15);
}

TEST_CASE("the lambda rule reproduces the frozen worked example") {
  // lambda = 1/4 on the plus state with P = |0><0|.
  const CompositeSpace sp{2};
  const QuantumState plus = make_state(sp, plus_projector());
  const Gemenge out =
      make_rule("lambda:0.25")->apply({basis_projector(2, 0), 0}, plus);
  CMat expect(2, 2);
  expect << 0.4, 0.2, 0.2, 0.1;
  CHECK(max_diff(density_of(out), expect) <= 1e-12);
}

TEST_CASE("passive scales the state by the outcome probability") {
  Rng rng(31);
  for (const CompositeSpace& sp : kSpaces) {
    const QuantumState s = random_state(sp, rng);
    const Outcome o = random_local_outcome(sp, rng);
    const double p = (embedded_projector(o, sp) * s.matrix).trace().real();
    CHECK(max_diff(density_of(passive(o, s)), p * s.matrix / s.trace()) <=
          1e-12);
  }
}

TEST_CASE("depolarising replaces the measured factor") {
  const CompositeSpace sp{2, 2};
  const QuantumState s00 =
      make_state(sp, tensor(basis_projector(2, 0), basis_projector(2, 0)));
  const Gemenge local = depolarising({basis_projector(2, 0), 0}, s00);
  const CMat half = CMat::Identity(2, 2) / 2.0;
  CHECK(max_diff(density_of(local), tensor(half, basis_projector(2, 0))) <=
        1e-14);
  // Global outcomes erase everything, leaving Tr(Q rho) I / d.
  const Outcome global{embedded_projector({basis_projector(2, 0), 0}, sp),
                       std::nullopt};
  CHECK(max_diff(density_of(depolarising(global, s00)),
                 CMat::Identity(4, 4) / 4.0) <= 1e-14);
  // Ordering: target 1 keeps the untouched factor in front.
  Rng rng(32);
  const CompositeSpace sp23{2, 3};
  const QuantumState s = random_state(sp23, rng);
  const Outcome o{basis_projector(3, 1), 1};
  const CMat q = embedded_projector(o, sp23);
  const CMat cond = partial_trace_drop(q * s.matrix * q, sp23.dims, {1});
  CHECK(max_diff(density_of(depolarising(o, s)),
                 tensor(cond, CMat(CMat::Identity(3, 3) / 3.0))) <= 1e-12);
}

TEST_CASE("cc-dep erases to the maximally mixed state of the whole space") {
  const CompositeSpace sp{2, 2};
  const QuantumState s00 =
      make_state(sp, tensor(basis_projector(2, 0), basis_projector(2, 0)));
  const Gemenge out = cc_extended_depolarising({basis_projector(2, 0), 0}, s00);
  CHECK(max_diff(density_of(out), CMat::Identity(4, 4) / 4.0) <= 1e-14);
}

TEST_CASE("unitary-kick rotates by the cyclic shift") {
  const CompositeSpace sp{2};
  const QuantumState s0 = make_state(sp, basis_projector(2, 0));
  const Gemenge out =
      unitary_kick(cyclic_shift(2), {basis_projector(2, 0), 0}, s0);
  CHECK(max_diff(density_of(out), basis_projector(2, 1)) <= 1e-14);
}

TEST_CASE("cyclic_shift is the unitary successor map") {
  for (int d : {2, 3, 4}) {
    const CMat u = cyclic_shift(d);
    CHECK(max_diff(u.adjoint() * u, CMat::Identity(d, d)) <= 1e-15);
    for (int j = 0; j < d; ++j) {
      CVec e = CVec::Zero(d);
      e(j) = 1.0;
      CHECK(std::abs((u * e)((j + 1) % d) - Cplx(1.0)) <= 1e-15);
    }
  }
  CHECK(max_diff(cyclic_shift(2), CMat(CMat::Identity(2, 2).rowwise().reverse())) <=
        1e-15);
}

TEST_CASE("mu mixes a luders branch with a passive branch") {
  const CompositeSpace sp{2};
  const QuantumState plus = make_state(sp, plus_projector());
  const Outcome o{basis_projector(2, 0), 0};
  const Gemenge out = mu_mixture(0.25, o, plus);
  REQUIRE(out.items.size() == 2);
  CHECK(out.items[0].weight == doctest::Approx(0.75));
  CHECK(out.items[1].weight == doctest::Approx(0.25));
  CHECK(max_diff(out.items[0].state.matrix, 0.5 * basis_projector(2, 0)) <=
        1e-14);
  CHECK(max_diff(out.items[1].state.matrix, 0.5 * plus_projector()) <= 1e-14);
}

TEST_CASE("von neumann splits along the refinement") {
  const CompositeSpace sp{2};
  const QuantumState plus = make_state(sp, plus_projector());
  const Outcome full{CMat::Identity(2, 2), 0};
  // Computational refinement dephases the plus state.
  const std::vector<CMat> comp = {basis_projector(2, 0), basis_projector(2, 1)};
  const Gemenge dephased = von_neumann(full, plus, comp);
  REQUIRE(dephased.items.size() == 2);
  CHECK(dephased.items[0].weight == doctest::Approx(1.0));
  CHECK(max_diff(density_of(dephased), CMat(CMat::Identity(2, 2) / 2.0)) <=
        1e-14);
  // The +/- refinement leaves it untouched: refinement dependence.
  const std::vector<CMat> hada = {plus_projector(), minus_projector()};
  CHECK(max_diff(density_of(von_neumann(full, plus, hada)),
                 plus_projector()) <= 1e-14);
  // Rank-1 outcomes coincide with luders.
  Rng rng(33);
  for (const CompositeSpace& space : kSpaces) {
    const QuantumState s = random_state(space, rng);
    const int k = rng.uniform_int(0, space.num_subsystems() - 1);
    const Outcome o{random_projector(space.dim(k), 1, rng), k};
    const RulePtr vn = make_rule("von-neumann");
    CHECK(max_diff(density_of(vn->apply(o, s)), density_of(luders(o, s))) <=
          1e-12);
    CHECK(vn->refinement_dependent());
    CHECK(!make_rule("luders")->refinement_dependent());
  }
}

TEST_CASE("canonical refinement splits a projector into rank-1 pieces") {
  Rng rng(34);
  const CMat p = random_projector(4, 3, rng);
  const std::vector<CMat> parts = canonical_refinement(p);
  REQUIRE(parts.size() == 3);
  CMat sum = CMat::Zero(4, 4);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    CHECK(std::abs(parts[i].trace().real() - 1.0) <= 1e-10);
    CHECK(max_diff(parts[i] * parts[i], parts[i]) <= 1e-10);
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      CHECK(max_abs(parts[i] * parts[j]) <= 1e-10);
    sum += parts[i];
  }
  CHECK(max_diff(sum, p) <= 1e-10);
  // The default von-neumann application uses exactly this refinement.
  const CompositeSpace sp{4};
  Rng rng2(35);
  const QuantumState s = random_state(sp, rng2);
  const Outcome o{p, 0};
  CHECK(max_diff(density_of(make_rule("von-neumann")->apply(o, s)),
                 density_of(von_neumann(o, s, parts))) <= 1e-12);
}

TEST_CASE("endpoint parameters collapse to simpler rules") {
  Rng rng(36);
  const RulePtr l0 = make_rule("lambda:0");
  const RulePtr l1 = make_rule("lambda:1");
  const RulePtr cl0 = make_rule("cc-lambda:0");
  const RulePtr cl1 = make_rule("cc-lambda:1");
  for (const CompositeSpace& sp : kSpaces) {
    for (int trial = 0; trial < 25; ++trial) {
      const QuantumState s = random_state(sp, rng);
      const Outcome o = random_local_outcome(sp, rng);
      CHECK(max_diff(density_of(l0->apply(o, s)),
                     density_of(locally_luders(o, s))) <= 1e-11);
      CHECK(max_diff(density_of(cl0->apply(o, s)),
                     density_of(luders(o, s))) <= 1e-11);
      CHECK(max_diff(density_of(cl1->apply(o, s)),
                     density_of(passive(o, s))) <= 1e-11);
      if (sp.num_subsystems() == 1)
        CHECK(max_diff(density_of(l1->apply(o, s)),
                       density_of(passive(o, s))) <= 1e-11);
    }
  }
}

TEST_CASE("luders is convex linear on proper mixtures") {
  Rng rng(37);
  const RulePtr rule = make_rule("luders");
  for (const CompositeSpace& sp : kSpaces) {
    Gemenge g;
    double w1 = rng.uniform();
    g.items.push_back({w1, random_state(sp, rng)});
    g.items.push_back({1.0 - w1, random_state(sp, rng)});
    const Outcome o = random_local_outcome(sp, rng);
    const CMat lhs = density_of(apply_gemenge(*rule, o, g));
    const CMat rhs = density_of(rule->apply(o, gemenge_density(g)));
    CHECK(max_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("every catalog rule is born-consistent and 1-homogeneous") {
  Rng rng(38);
  for (const std::string& name : catalog_rule_names()) {
    const RulePtr rule = make_rule(name);
    for (const CompositeSpace& sp : kSpaces) {
      const QuantumState s = random_state(sp, rng);
      const Outcome o = random_local_outcome(sp, rng);
      const double p = (embedded_projector(o, sp) * s.matrix).trace().real();
      const Gemenge out = rule->apply(o, s);
      CHECK(std::abs(out.total_trace() - p) <= 1e-11);
      // Scaling the input scales the output branches uniformly.
      const QuantumState scaled{sp, 0.37 * s.matrix};
      CHECK(max_diff(density_of(rule->apply(o, scaled)),
                     0.37 * density_of(out)) <= 1e-11);
    }
  }
}

TEST_CASE("apply_sequence folds outcomes left to right") {
  Rng rng(39);
  const CompositeSpace sp{2, 2};
  const RulePtr rule = make_rule("luders");
  const Gemenge g = pure_gemenge(make_state(sp, bell_phi_plus()));
  const Outcome a{basis_projector(2, 0), 0};
  const Outcome b{basis_projector(2, 1), 1};
  const Gemenge manual = apply_gemenge(*rule, b, apply_gemenge(*rule, a, g));
  const Gemenge folded = apply_sequence(*rule, {a, b}, g);
  CHECK(max_diff(density_of(folded), density_of(manual)) <= 1e-14);
  CHECK(folded.total_trace() == doctest::Approx(manual.total_trace()));
}

TEST_CASE("make_rule rejects unknown names and bad parameters") {
  CHECK_THROWS_AS(make_rule("nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(make_rule("lambda:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_rule("lambda:-0.1"), std::invalid_argument);
  CHECK_THROWS_AS(make_rule("mu:2"), std::invalid_argument);
  CHECK_THROWS_AS(make_rule("lambda:abc"), std::invalid_argument);
  CHECK(make_rule("lambda:0.25")->name() == "lambda:0.25");
  CHECK(make_rule("mu:0.5")->name() == "mu:0.5");
  CHECK(catalog_rule_names().size() == 10);
}
