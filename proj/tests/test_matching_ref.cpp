#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "kex/matching_ref.hpp"

using namespace kex;

namespace {
Graph path4() {
  Graph g(4);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  return g;
}
}  // namespace

TEST_CASE("known graphs reach their maximum") {
  SUBCASE("path on four vertices") {
    auto g = path4();
    auto m = pape_conradt(g);
    CHECK(matching_valid(g, m));
    CHECK(m.size() == 2);
    CHECK(max_matching_size(g) == 2);
    CHECK(berge_check(g, m));
  }
  SUBCASE("complete graph K4") {
    Graph g(4);
    for (int u = 1; u <= 4; ++u)
      for (int v = u + 1; v <= 4; ++v) g.add_edge(u, v);
    auto m = pape_conradt(g);
    CHECK(berge_check(g, m));
    CHECK(m.size() == 2);
  }
  SUBCASE("odd cycle C5") {
    Graph g(5);
    for (int v = 1; v <= 5; ++v) g.add_edge(v, v % 5 + 1);
    auto m = pape_conradt(g);
    CHECK(berge_check(g, m));
    CHECK(m.size() == 2);
  }
  SUBCASE("triangle with a tail") {
    Graph g(5);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 1);
    g.add_edge(3, 4);
    g.add_edge(4, 5);
    auto m = pape_conradt(g);
    CHECK(berge_check(g, m));
    CHECK(m.size() == 2);
  }
  SUBCASE("petersen graph") {
    Graph g(10);
    for (int v = 1; v <= 5; ++v) g.add_edge(v, v % 5 + 1);
    g.add_edge(6, 8);
    g.add_edge(8, 10);
    g.add_edge(10, 7);
    g.add_edge(7, 9);
    g.add_edge(9, 6);
    for (int v = 1; v <= 5; ++v) g.add_edge(v, v + 5);
    auto m = pape_conradt(g);
    CHECK(berge_check(g, m));
    CHECK(m.size() == 5);
  }
  SUBCASE("empty and single-vertex graphs") {
    Graph g0(0), g1(1);
    CHECK(pape_conradt(g0).size() == 0);
    CHECK(pape_conradt(g1).size() == 0);
    CHECK(max_matching_size(g1) == 0);
  }
}

TEST_CASE("matching validity catches broken structures") {
  auto g = path4();
  Matching m(4);
  m.mate[1] = 2;
  CHECK_FALSE(matching_valid(g, m));  // asymmetric
  m.mate[2] = 1;
  CHECK(matching_valid(g, m));
  Matching bad(4);
  bad.mate[1] = 3;  // no edge 1-3
  bad.mate[3] = 1;
  CHECK_FALSE(matching_valid(g, bad));
}

TEST_CASE("brute force against hand counts") {
  Graph star(5);
  for (int v = 2; v <= 5; ++v) star.add_edge(1, v);
  CHECK(max_matching_size(star) == 1);

  Graph two_triangles(6);
  two_triangles.add_edge(1, 2);
  two_triangles.add_edge(2, 3);
  two_triangles.add_edge(3, 1);
  two_triangles.add_edge(4, 5);
  two_triangles.add_edge(5, 6);
  two_triangles.add_edge(6, 4);
  CHECK(max_matching_size(two_triangles) == 2);
}

TEST_CASE("graph text and canonical round trips") {
  auto g = path4();
  auto g2 = graph_from_text(graph_to_text(g));
  CHECK(graph_canonical(g2) == graph_canonical(g));
  auto g3 = graph_from_canonical(graph_canonical(g));
  CHECK(graph_canonical(g3) == graph_canonical(g));
  CHECK(graph_canonical(g) == "n=4;edges=1-2,2-3,3-4");
}

TEST_CASE("counterexample registry appends and whitelist matches") {
  std::string reg = "registry_test.tmp";
  std::string wl = "whitelist_test.tmp";
  std::remove(reg.c_str());
  std::remove(wl.c_str());

  auto g = path4();
  append_counterexample(reg, g, 1, 2);
  CHECK_FALSE(in_whitelist(wl, g));

  {
    std::ofstream out(wl);
    out << "# acknowledged\n" << graph_canonical(g) << ";pc=1;max=2\n";
  }
  CHECK(in_whitelist(wl, g));

  Graph other(3);
  other.add_edge(1, 2);
  CHECK_FALSE(in_whitelist(wl, other));
  std::remove(reg.c_str());
  std::remove(wl.c_str());
}

TEST_CASE("random corpus, search stays valid and counterexamples surface") {
  // smaller cousin of the acceptance corpus: every result must be a valid
  // matching; cardinality shortfalls are real findings, counted not hidden
  Prg prg(0xC0117);
  int shortfalls = 0;
  for (int i = 0; i < 600; ++i) {
    int n = 3 + int(prg.uniform(8));  // 3..10
    double density = (i % 3 == 0) ? 0.2 : (i % 3 == 1 ? 0.5 : 0.8);
    auto g = Graph::erdos_renyi(n, density, prg);
    auto m = pape_conradt(g);
    REQUIRE(matching_valid(g, m));
    int best = max_matching_size(g);
    REQUIRE(m.size() <= best);
    if (m.size() < best) ++shortfalls;
  }
  // the search has no blossom contraction, so shortfalls can exist; they are
  // handled by the acceptance registry, not silently accepted here
  MESSAGE("cardinality shortfalls in 600 graphs: ", shortfalls);
}
