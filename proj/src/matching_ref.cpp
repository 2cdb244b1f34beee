#include "kex/matching_ref.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "kex/errors.hpp"

namespace kex {

Graph::Graph(int vertices) : n(vertices) {
  if (vertices < 0) throw ConfigError("graph: negative vertex count");
  adj.assign(size_t(n) + 1, std::vector<uint8_t>(size_t(n) + 1, 0));
}

void Graph::add_edge(int u, int v) {
  if (u < 1 || v < 1 || u > n || v > n) throw ConfigError("graph: vertex out of range");
  if (u == v) throw ConfigError("graph: self loop");
  adj[size_t(u)][size_t(v)] = 1;
  adj[size_t(v)][size_t(u)] = 1;
}

int Graph::edge_count() const {
  int c = 0;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) c += adj[size_t(u)][size_t(v)];
  return c;
}

Graph Graph::erdos_renyi(int n, double density, Prg& prg) {
  Graph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (prg.unit_real() < density) g.add_edge(u, v);
  return g;
}

int Matching::size() const {
  int c = 0;
  for (size_t v = 1; v < mate.size(); ++v)
    if (mate[v] != 0) ++c;
  return c / 2;
}

bool matching_valid(const Graph& g, const Matching& m) {
  if (m.mate.size() != size_t(g.n) + 1) return false;
  for (int v = 1; v <= g.n; ++v) {
    int w = m.mate[size_t(v)];
    if (w == 0) continue;
    if (w < 1 || w > g.n || w == v) return false;
    if (m.mate[size_t(w)] != v) return false;
    if (!g.has_edge(v, w)) return false;
  }
  return true;
}

namespace {

bool is_ancestor(const std::vector<int>& grandfather, int x, int y) {
  for (int cur = x; cur != 0; cur = grandfather[size_t(cur)])
    if (cur == y) return true;
  return false;
}

void augment(std::vector<int>& mate, const std::vector<int>& grandfather, int x, int y) {
  mate[size_t(y)] = x;
  while (x != 0) {
    int next = mate[size_t(x)];
    mate[size_t(x)] = y;
    x = grandfather[size_t(x)];
    if (next != 0) mate[size_t(next)] = x;
    y = next;
  }
}

}  // namespace

Matching pape_conradt(const Graph& g) {
  int n = g.n;
  Matching m(n);
  auto& mate = m.mate;
  int expo = n;

  for (int r = 1; r <= n && expo >= 2; ++r) {
    if (mate[size_t(r)] != 0) continue;

    std::vector<uint8_t> non_tree(size_t(n) + 1, 1);
    non_tree[size_t(r)] = 0;
    std::vector<int> grandfather(size_t(n) + 1, 0);
    std::deque<int> q{r};
    bool found = false;

    while (!q.empty() && !found) {
      int x = q.front();
      q.pop_front();
      for (int y = 1; y <= n && !found; ++y) {
        if (!g.has_edge(x, y) || !non_tree[size_t(y)]) continue;
        if (mate[size_t(y)] == 0) {
          augment(mate, grandfather, x, y);
          expo -= 2;
          found = true;
        } else if (mate[size_t(y)] != x && !is_ancestor(grandfather, x, y)) {
          int z = mate[size_t(y)];
          non_tree[size_t(y)] = 0;
          grandfather[size_t(z)] = x;
          q.push_back(z);
        }
      }
    }
  }
  return m;
}

namespace {

int max_matching_rec(const Graph& g, uint32_t used,
                     std::unordered_map<uint32_t, int>& memo) {
  int u = 0;
  for (int v = 1; v <= g.n; ++v)
    if (!(used & (1u << v))) {
      u = v;
      break;
    }
  if (u == 0) return 0;
  auto it = memo.find(used);
  if (it != memo.end()) return it->second;

  int best = max_matching_rec(g, used | (1u << u), memo);  // leave u exposed
  for (int v = u + 1; v <= g.n; ++v) {
    if (used & (1u << v)) continue;
    if (!g.has_edge(u, v)) continue;
    best = std::max(best, 1 + max_matching_rec(g, used | (1u << u) | (1u << v), memo));
  }
  memo[used] = best;
  return best;
}

}  // namespace

int max_matching_size(const Graph& g) {
  if (g.n > 16) throw ConfigError("max_matching_size: limited to 16 vertices");
  std::unordered_map<uint32_t, int> memo;
  return max_matching_rec(g, 0, memo);
}

bool berge_check(const Graph& g, const Matching& m) {
  return matching_valid(g, m) && m.size() == max_matching_size(g);
}

std::string graph_canonical(const Graph& g) {
  std::ostringstream out;
  out << "n=" << g.n << ";edges=";
  bool first = true;
  for (int u = 1; u <= g.n; ++u)
    for (int v = u + 1; v <= g.n; ++v)
      if (g.has_edge(u, v)) {
        if (!first) out << ",";
        out << u << "-" << v;
        first = false;
      }
  return out.str();
}

Graph graph_from_canonical(const std::string& text) {
  auto semi = text.find(";edges=");
  if (text.rfind("n=", 0) != 0 || semi == std::string::npos)
    throw ConfigError("bad canonical graph: " + text);
  Graph g(std::stoi(text.substr(2, semi - 2)));
  std::string edges = text.substr(semi + 7);
  std::istringstream in(edges);
  std::string pair;
  while (std::getline(in, pair, ',')) {
    if (pair.empty()) continue;
    auto dash = pair.find('-');
    if (dash == std::string::npos) throw ConfigError("bad canonical edge: " + pair);
    g.add_edge(std::stoi(pair.substr(0, dash)), std::stoi(pair.substr(dash + 1)));
  }
  return g;
}

std::string graph_to_text(const Graph& g) {
  std::ostringstream out;
  out << g.n << " " << g.edge_count() << "\n";
  for (int u = 1; u <= g.n; ++u)
    for (int v = u + 1; v <= g.n; ++v)
      if (g.has_edge(u, v)) out << u << " " << v << "\n";
  return out.str();
}

Graph graph_from_text(const std::string& text) {
  std::istringstream in(text);
  int n = -1, m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw ConfigError("bad graph text header");
  Graph g(n);
  for (int i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) throw ConfigError("bad graph text edge list");
    g.add_edge(u, v);
  }
  return g;
}

void append_counterexample(const std::string& path, const Graph& g, int pc_size,
                           int max_size) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot open counterexample registry: " + path);
  out << graph_canonical(g) << ";pc=" << pc_size << ";max=" << max_size << "\n";
}

bool in_whitelist(const std::string& whitelist_path, const Graph& g) {
  std::ifstream in(whitelist_path);
  if (!in) return false;
  std::string canon = graph_canonical(g);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cut = line.find(";pc=");
    std::string entry = cut == std::string::npos ? line : line.substr(0, cut);
    if (entry == canon) return true;
  }
  return false;
}

}  // namespace kex
