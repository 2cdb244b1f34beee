#include "kex/protocol.hpp"

#include <deque>

#include "kex/errors.hpp"

namespace kex {

void oblivious_augment(Session& s, SVec& mate, const SVec& grandfather, const SVec& ix,
                       SVal x, uint64_t y, SVal aug_path, const CompareParams& cp) {
  size_t n = mate.size();
  mate[y - 1] = select(s, aug_path, x, mate[y - 1]);

  // gate the walk start: indicator of x*aug_path is ix scaled by the bit
  SVec gate(n, aug_path);
  SVec icur = s.mul(ix, gate);
  SVal yg = s.mul_public(aug_path, y);

  for (size_t step = 0; step < n; ++step) {
    SVal next = vec_read(s, mate, icur);
    vec_write(s, mate, icur, yg);
    SVal cur = vec_read(s, grandfather, icur);
    SVec inext = index_vector(s, next, n, cp);
    vec_write(s, mate, inext, cur);
    yg = next;
    if (step + 1 < n) icur = index_vector(s, cur, n, cp);
  }
}

SVal ancestor_flag(Session& s, const SVec& grandfather, const SVec& ix, uint64_t y,
                   const CompareParams& cp) {
  size_t n = grandfather.size();
  SVal res = s.constant(0);
  SVec icur = ix;
  for (size_t step = 0; step < n; ++step) {
    res = bit_or(s, res, icur[y - 1]);
    if (step + 1 < n) {
      SVal cur = vec_read(s, grandfather, icur);
      icur = index_vector(s, cur, n, cp);
    }
  }
  return res;
}

CrossoverResult run_crossover_ke(Session& s, SharedMatrix& adj, const CrossoverOptions& opt) {
  size_t n = adj.n;
  const CompareParams& cp = opt.cmp;
  cp.validate(s.field());
  if (opt.shuffle_contributors < 0 || opt.shuffle_contributors > s.params().num_peers)
    throw ConfigError("crossover: bad shuffle contributor count");
  CrossoverResult res;
  if (n == 0) return res;
  if (n >= (uint64_t{1} << cp.value_bits))
    throw ConfigError("crossover: vertex labels exceed the comparison domain");

  ShuffleHandle handle;
  if (opt.shuffle_contributors > 0)
    handle = shuffle_matrix(s, adj, opt.shuffle_contributors);

  SVec mate(n);
  for (auto& e : mate) e = s.constant(0);
  SVal one = s.constant(1);

  for (uint64_t r = 1; r <= n; ++r) {
    SVal root = select(s, eqz(s, mate[r - 1], cp), s.constant(r), s.constant(0));
    SVec non_tree(n);
    for (auto& e : non_tree) e = one;
    SVec iroot = index_vector(s, root, n, cp);
    vec_write(s, non_tree, iroot, s.constant(0));
    SVec grandfather(n);
    for (auto& e : grandfather) e = s.constant(0);

    ObliviousQueue q(s, 1 + n * n);
    q.push(root);
    SVal found = s.constant(0);

    for (uint64_t qi = 0; qi < n; ++qi) {
      SVal x = q.pop();
      x = select(s, found, s.constant(0), x);
      SVec ix = index_vector(s, x, n, cp);

      for (uint64_t y = 1; y <= n; ++y) {
        std::span<const SVal> row_y(&adj.a[(y - 1) * n], n);  // symmetric matrix
        SVal a_xy = vec_read(s, row_y, ix);
        SVal aug = s.mul(non_tree[y - 1], a_xy);
        aug = s.mul(aug, eqz(s, mate[y - 1], cp));
        aug = s.mul(aug, eqz(s, mate[r - 1], cp));
        found = bit_or(s, found, aug);

        oblivious_augment(s, mate, grandfather, ix, x, y, aug, cp);

        SVal anc = ancestor_flag(s, grandfather, ix, y, cp);
        SVal c5 = s.mul(non_tree[y - 1], neq(s, mate[y - 1], x, cp));
        c5 = s.mul(c5, s.sub(one, found));
        c5 = s.mul(c5, a_xy);
        c5 = s.mul(c5, s.sub(one, anc));

        SVal z = s.mul(c5, mate[y - 1]);
        non_tree[y - 1] = s.sub(non_tree[y - 1], s.mul(c5, non_tree[y - 1]));
        SVec iz = index_vector(s, z, n, cp);
        vec_write(s, grandfather, iz, x);
        q.push(z);
      }
    }
  }

  if (opt.shuffle_contributors > 0) {
    SVec w = unshuffle_positions(s, handle, mate);
    SVec labels = shuffled_label_table(s, handle);
    res.partner.resize(n);
    for (size_t u = 0; u < n; ++u) {
      SVec iw = index_vector(s, w[u], n, cp);
      res.partner[u] = vec_read(s, labels, iw);
    }
    res.own_perm = std::move(handle.own_perm);
  } else {
    res.partner = std::move(mate);
  }
  return res;
}

CrossoverResult run_crossover_ke(Session& s, std::span<const SharedPairRecord> pool,
                                 const CrossoverOptions& opt) {
  SharedMatrix adj = build_adjacency(s, pool, opt.cmp);
  return run_crossover_ke(s, adj, opt);
}

Matching lockstep_match(const Graph& g) {
  int n = g.n;
  Matching m;
  m.mate.assign(static_cast<size_t>(n) + 1, 0);
  auto& mate = m.mate;
  auto at = [&](std::vector<int>& v, int i) -> int& { return v[static_cast<size_t>(i)]; };

  for (int r = 1; r <= n; ++r) {
    int root = mate[static_cast<size_t>(r)] == 0 ? r : 0;
    std::vector<uint8_t> non_tree(static_cast<size_t>(n) + 1, 1);
    if (root != 0) non_tree[static_cast<size_t>(root)] = 0;
    std::vector<int> gpar(static_cast<size_t>(n) + 1, 0);
    std::deque<int> q{root};
    int found = 0;

    for (int qi = 0; qi < n; ++qi) {
      int x = 0;
      if (!q.empty()) {
        x = q.front();
        q.pop_front();
      }
      if (found) x = 0;

      for (int y = 1; y <= n; ++y) {
        int a = (x != 0 && g.has_edge(x, y)) ? 1 : 0;
        int aug = (non_tree[static_cast<size_t>(y)] && a && at(mate, y) == 0 &&
                   at(mate, r) == 0)
                      ? 1
                      : 0;
        found = found | aug;

        // augment twin: fixed-length walk, position 0 swallows the writes
        if (aug) at(mate, y) = x;
        int xg = aug ? x : 0;
        int yg = aug ? y : 0;
        for (int step = 0; step < n; ++step) {
          int next = xg != 0 ? at(mate, xg) : 0;
          if (xg != 0) at(mate, xg) = yg;
          int cur = xg != 0 ? at(gpar, xg) : 0;
          if (next != 0) at(mate, next) = cur;
          yg = next;
          xg = cur;
        }

        // ancestor twin
        int anc = 0;
        int cur = x;
        for (int step = 0; step < n; ++step) {
          anc = anc | (cur == y ? 1 : 0);
          cur = cur != 0 ? at(gpar, cur) : 0;
        }

        int c5 = (non_tree[static_cast<size_t>(y)] && at(mate, y) != x && !found && a && !anc)
                     ? 1
                     : 0;
        int z = c5 ? at(mate, y) : 0;
        if (c5) non_tree[static_cast<size_t>(y)] = 0;
        if (z != 0) at(gpar, z) = x;
        q.push_back(z);
      }
    }
  }
  return m;
}

}  // namespace kex
