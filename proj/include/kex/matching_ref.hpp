#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kex/prg.hpp"

namespace kex {

// Undirected graph on vertices 1..n, adjacency matrix form, no self loops.
struct Graph {
  int n = 0;
  std::vector<std::vector<uint8_t>> adj;  // (n+1) x (n+1)

  Graph() = default;
  explicit Graph(int vertices);

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const { return adj[size_t(u)][size_t(v)] != 0; }
  int edge_count() const;

  static Graph erdos_renyi(int n, double density, Prg& prg);
};

struct Matching {
  std::vector<int> mate;  // size n+1, 0 = unmatched, mate[0] unused

  explicit Matching(int n = 0) : mate(size_t(n) + 1, 0) {}
  int size() const;
};

// Symmetric, self-loop free, every matched edge present in the graph.
bool matching_valid(const Graph& g, const Matching& m);

// Breadth-first augmenting search without blossom handling. Known to miss
// maximum matchings on some graphs with nested odd cycles; berge_check is the
// guard that surfaces such graphs.
Matching pape_conradt(const Graph& g);

// Exact maximum cardinality by branch and memo, n <= 16.
int max_matching_size(const Graph& g);

// No augmenting path exists iff the matching is maximum.
bool berge_check(const Graph& g, const Matching& m);

// single-line canonical encoding: "n=5;edges=1-2,2-3"
std::string graph_canonical(const Graph& g);
Graph graph_from_canonical(const std::string& text);

// Multi-line text format: first line "n m", then one "u v" line per edge.
std::string graph_to_text(const Graph& g);
Graph graph_from_text(const std::string& text);

// Registry of graphs where pape_conradt fell short of the maximum. Appended
// one canonical line per finding; the whitelist holds acknowledged lines.
void append_counterexample(const std::string& path, const Graph& g, int pc_size,
                           int max_size);
bool in_whitelist(const std::string& whitelist_path, const Graph& g);

}  // namespace kex
