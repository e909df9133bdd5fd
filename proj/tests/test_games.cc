#include <doctest.h>

#include "refinery/gamegen.h"
#include "refinery/games.h"
#include "refinery/oracles.h"
#include "refinery/rng.h"

using namespace refinery;

TEST_CASE("box embedding") {
  auto x = embed_profile(EpsPureProfile::box({0}), PerturbScheme::PerfectBox, {2});
  CHECK(x[0][0] == EpsPoly::from_coeffs({Rat(1), Rat(-1)}));
  CHECK(x[0][1] == EpsPoly::eps());
  // Sums to 1 as a polynomial identity for every m <= 10.
  for (int m = 1; m <= 10; ++m) {
    auto e = embed_profile(EpsPureProfile::box({0}), PerturbScheme::PerfectBox, {m});
    EpsPoly sum;
    for (const EpsPoly& q : e[0]) sum += q;
    CHECK(sum == EpsPoly(Rat(1)));
  }
}

TEST_CASE("permutahedron embedding") {
  auto x = embed_profile(EpsPureProfile::permutahedron({{0, 1, 2}}),
                         PerturbScheme::ProperPermutahedron, {3});
  CHECK(x[0][0] == EpsPoly(Rat(1)));
  CHECK(x[0][1] == EpsPoly::eps());
  CHECK(x[0][2] == EpsPoly::eps(2));
  // At eps = 1 the unnormalized embedding is all ones; the eps -> 0 limit is
  // the one-hot vector of the rank-0 action.
  for (const EpsPoly& q : x[0]) CHECK(q.eval(Rat(1)) == Rat(1));
  CHECK(x[0][0].at_zero() == Rat(1));
  CHECK(x[0][1].at_zero() == Rat(0));
  CHECK(x[0][2].at_zero() == Rat(0));
}

TEST_CASE("embedding rejects malformed profiles") {
  CHECK_THROWS_AS(embed_profile(EpsPureProfile::box({0}),
                                PerturbScheme::ProperPermutahedron, {2}),
                  SchemeMismatch);
  CHECK_THROWS_AS(embed_profile(EpsPureProfile::box({5}),
                                PerturbScheme::PerfectBox, {2}),
                  SchemeMismatch);
  CHECK_THROWS_AS(embed_profile(EpsPureProfile::permutahedron({{0, 0, 1}}),
                                PerturbScheme::ProperPermutahedron, {3}),
                  SchemeMismatch);
}

TEST_CASE("box embeddings are distributions at small eps") {
  for (int m = 2; m <= 6; ++m) {
    auto e = embed_profile(EpsPureProfile::box({m - 1}), PerturbScheme::PerfectBox, {m});
    Rat eps = Rat(1, 2 * m);  // inside (0, 1/m)
    Rat sum(0);
    for (const EpsPoly& q : e[0]) {
      Rat v = q.eval(eps);
      CHECK(v.sign() > 0);
      sum += v;
    }
    CHECK(sum == Rat(1));
  }
}

TEST_CASE("perturbed potential on the max-payoff game") {
  GeneratedGame fig3 = generate(GenSpec::simple(GenSpec::Kind::Fig3MaxPayoff));
  const ConcisePotentialGame& g = *fig3.concise;
  auto phi = [&](int a, int b) {
    return perturbed_potential(g, EpsPureProfile::box({a, b}),
                               PerturbScheme::PerfectBox);
  };
  CHECK(phi(0, 1) == EpsPoly::from_coeffs({Rat(1), Rat(-1), Rat(1)}));
  CHECK(phi(1, 0) == EpsPoly::from_coeffs({Rat(1), Rat(-1), Rat(1)}));
  // At eps = 0 the perturbed potential equals the pure potential.
  CHECK(phi(1, 1).at_zero() == Rat(0));
  CHECK(phi(0, 0).at_zero() == Rat(1));
}

TEST_CASE("perturbed potential of a zero game is zero") {
  TableGame z = TableGame::identical({2, 2}, {Rat(0), Rat(0), Rat(0), Rat(0)});
  ConcisePotentialGame g = z.to_concise();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(perturbed_potential(g, EpsPureProfile::box({a, b}),
                                PerturbScheme::PerfectBox)
                .is_zero());
}

TEST_CASE("perturbed potential agrees with the direct-expectation oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rat> table;
    for (int i = 0; i < 2 * 3; ++i) table.push_back(rng.rat(9, 4));
    TableGame t = TableGame::identical({2, 3}, table);
    ConcisePotentialGame g = t.to_concise();
    for (PerturbScheme scheme :
         {PerturbScheme::PerfectBox, PerturbScheme::ProperPermutahedron}) {
      EpsPureProfile p = scheme == PerturbScheme::PerfectBox
                             ? EpsPureProfile::box({static_cast<int>(rng.below(2)),
                                                    static_cast<int>(rng.below(3))})
                             : EpsPureProfile::permutahedron(
                                   {{rng.coin() ? 0 : 1, rng.coin() ? 1 : 0}, {0, 2, 1}});
      if (scheme == PerturbScheme::ProperPermutahedron) {
        auto& pi = p.perm[0];
        if (pi[0] == pi[1]) pi = {0, 1};
      }
      CHECK(perturbed_potential(g, p, scheme) ==
            brute_perturbed_potential(t, p, scheme));
    }
  }
}

TEST_CASE("potential property holds on bundled games and catches breakage") {
  GeneratedGame fig1 = generate(GenSpec::simple(GenSpec::Kind::Fig1));
  CHECK(check_potential_property(*fig1.concise, 100, 1).pass);

  // Identical-interest game with the common payoff as potential.
  Rng rng(31);
  std::vector<Rat> table;
  for (int i = 0; i < 8; ++i) table.push_back(rng.rat(9, 4));
  TableGame t = TableGame::identical({2, 2, 2}, table);
  CHECK(check_potential_property(t.to_concise(), 200, 2).pass);

  // Break one payoff entry for one player only.
  TableGame broken = *fig1.table;
  broken.utilities[0][3] += Rat(5);
  ConcisePotentialGame bad(
      MultilinearCircuit::from_tensor(broken.actions, *broken.potential),
      std::vector<MultilinearCircuit>{
          MultilinearCircuit::from_tensor(broken.actions, broken.utilities[0]),
          MultilinearCircuit::from_tensor(broken.actions, broken.utilities[1])});
  auto res = check_potential_property(bad, 500, 3);
  CHECK(!res.pass);
  CHECK(res.player >= 0);
}

TEST_CASE("derive_potential integrates utility differences") {
  GeneratedGame fig4 = generate(GenSpec::simple(GenSpec::Kind::Fig4RandomGD));
  TableGame t = *fig4.table;
  t.potential.reset();
  auto phi = derive_potential(t);
  REQUIRE(phi.has_value());
  // Anchored at cell 0; differences must match the shipped potential.
  const auto& ref = *fig4.table->potential;
  for (std::size_t c = 0; c < ref.size(); ++c)
    CHECK((*phi)[c] - (*phi)[0] == ref[c] - ref[0]);

  // Matching pennies has a nonzero cycle sum, hence no potential.
  TableGame bad;
  bad.actions = {2, 2};
  bad.utilities = {{Rat(1), Rat(-1), Rat(-1), Rat(1)},
                   {Rat(-1), Rat(1), Rat(1), Rat(-1)}};
  CHECK(!derive_potential(bad).has_value());
}
