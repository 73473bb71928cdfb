#include "flagcert/orgraph.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace flagcert;

namespace {

Orgraph random_orgraph(int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> digit(0, 2);
  Orgraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.set_pair_code(a, b, digit(rng));
  return g;
}

Orgraph random_relabel(const Orgraph& g, std::mt19937& rng) {
  std::vector<int> p(g.order());
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return g.relabeled(p);
}

}  // namespace

TEST_CASE("validate") {
  const Arc single[] = {{0, 1}};
  CHECK(validate(2, single));
  const Arc both[] = {{0, 1}, {1, 0}};
  CHECK_FALSE(validate(2, both));
  const Arc loop[] = {{1, 1}};
  CHECK_FALSE(validate(2, loop));
  const Arc repeated[] = {{0, 1}, {0, 1}};
  CHECK_FALSE(validate(2, repeated));
  const Arc out_of_range[] = {{0, 2}};
  CHECK_FALSE(validate(2, out_of_range));
  const Arc c4[] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  CHECK(validate(4, c4));
  CHECK_THROWS_AS(Orgraph(2, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("org1 encoding") {
  const Orgraph p3 = Orgraph::from_org1("3:101");
  CHECK(p3.has_arc(0, 1));
  CHECK(p3.has_arc(1, 2));
  CHECK(p3.arc_count() == 2);
  CHECK(p3.to_org1() == "3:101");
  CHECK(Orgraph::from_org1("0:").order() == 0);
  CHECK(Orgraph::from_org1("1:").order() == 1);
  for (const char* bad : {"3:10", "3:1013", "3:103", "x:1", ":", "3-101", "9:"})
    CHECK_THROWS_AS(Orgraph::from_org1(bad), std::invalid_argument);
}

TEST_CASE("canonical form") {
  CHECK(canonical_form(Orgraph(2, {{0, 1}})) == canonical_form(Orgraph(2, {{1, 0}})));
  const Orgraph p3 = graphs::path3();
  for (const auto& p : permutations(3)) CHECK(canonical_form(p3.relabeled(p)) == canonical_form(p3));
  CHECK(canonical_form(p3).to_org1() == "3:012");
  CHECK(canonical_form(graphs::transitive_tournament(3)) != canonical_form(graphs::cycle3()));
  CHECK(is_canonical(canonical_form(graphs::cycle4())));
  CHECK_FALSE(is_canonical(Orgraph::from_org1("3:101")));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Orgraph g = random_orgraph(5, rng);
    CHECK(canonical_form(random_relabel(g, rng)) == canonical_form(g));
    CHECK(isomorphic(g, random_relabel(g, rng)));
  }
}

TEST_CASE("enumeration counts against a brute-force oracle") {
  const std::size_t expected[] = {1, 1, 2, 7, 42, 582};
  for (int n = 0; n <= 5; ++n) {
    CHECK(enumerate_orgraphs(n).size() == expected[n]);
    if (n >= 1) CHECK(oracle::count_classes(n) == expected[n]);
  }
  CHECK(enumerate_orgraphs(6).size() == 21480);
  CHECK_THROWS_AS(enumerate_orgraphs(7), std::invalid_argument);
}

TEST_CASE("enumerated lists are canonical, sorted and distinct") {
  for (int n = 0; n <= 6; ++n) {
    const auto& gs = enumerate_orgraphs(n);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      CHECK(is_canonical(gs[i]));
      if (i > 0) CHECK(gs[i - 1].to_org1() < gs[i].to_org1());
      CHECK(orgraph_index(gs[i]) == i);
    }
  }
}

TEST_CASE("converse") {
  CHECK(isomorphic(converse(graphs::out_star()), graphs::in_star()));
  CHECK(isomorphic(converse(graphs::cycle3()), graphs::cycle3()));
  CHECK(isomorphic(converse(graphs::path3()), graphs::path3()));
  for (const auto& g : enumerate_orgraphs(5)) CHECK(canonical_form(converse(converse(g))) == g);
}

TEST_CASE("automorphisms") {
  CHECK(automorphism_count(graphs::cycle3()) == 3);
  CHECK(automorphism_count(graphs::cycle4()) == 4);
  CHECK(automorphism_count(graphs::empty(4)) == 24);
  CHECK(automorphism_count(graphs::transitive_tournament(4)) == 1);
  CHECK(automorphism_count(graphs::out_star()) == 2);
}

TEST_CASE("induced density") {
  CHECK(induced_density(graphs::path3(), graphs::cycle4()) == 1);
  CHECK(induced_density(graphs::cycle4(), graphs::cycle4()) == 1);
  CHECK(induced_density(graphs::cycle3(), graphs::transitive_tournament(5)) == 0);
  CHECK(count_induced_copies(graphs::single_arc(), graphs::cycle4()) == 4);
  CHECK_THROWS_AS(induced_density(graphs::cycle4(), graphs::cycle3()), std::invalid_argument);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Orgraph host = random_orgraph(5, rng);
    const Orgraph target = random_orgraph(3, rng);
    const Rational d = induced_density(target, host);
    CHECK(d == oracle::density(target, host));
    CHECK(induced_density(random_relabel(target, rng), random_relabel(host, rng)) == d);
  }
}

TEST_CASE("densities over all targets of one order sum to one") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Orgraph host = random_orgraph(6, rng);
    for (int k = 0; k <= 4; ++k) {
      Rational total = 0;
      for (const auto& t : enumerate_orgraphs(k)) total += induced_density(t, host);
      CHECK(total == 1);
    }
  }
}

TEST_CASE("max induced density") {
  const auto p3 = max_induced_density(graphs::path3(), 3);
  CHECK(p3.value == 1);
  CHECK(isomorphic(p3.witness, graphs::path3()));

  // Recorded from the exhaustive scan over the 42 hosts of order 4.
  const auto c3 = max_induced_density(graphs::cycle3(), 4);
  CHECK(c3.value == Rational(1, 2));
  CHECK(induced_density(graphs::cycle3(), c3.witness) == c3.value);

  // Two disjoint transitive tournaments on 2 + 3 vertices.
  Orgraph split(5, {{0, 1}, {2, 3}, {2, 4}, {3, 4}});
  const auto k2e1 = max_induced_density(graphs::arc_plus_vertex(), 5);
  CHECK(k2e1.value >= induced_density(graphs::arc_plus_vertex(), split));
  CHECK(max_induced_density(graphs::arc_plus_vertex(), 5, 4).value == k2e1.value);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Orgraph h = random_orgraph(5, rng);
    CHECK(k2e1.value >= induced_density(graphs::arc_plus_vertex(), h));
  }
}

TEST_CASE("subsets and permutations") {
  CHECK(subsets(5, 2).size() == 10);
  CHECK(subsets(4, 0).size() == 1);
  CHECK(permutations(4).size() == 24);
  CHECK(permutations(0).size() == 1);
}
