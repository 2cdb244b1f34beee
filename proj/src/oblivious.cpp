#include "kex/oblivious.hpp"

#include "kex/errors.hpp"

namespace kex {

SVec index_vector(Session& s, SVal idx, size_t len, const CompareParams& cp) {
  int m = cp.value_bits;
  uint64_t mod_mask = (uint64_t(1) << m) - 1;
  if (len > mod_mask) throw ProtocolError("index_vector: length exceeds value domain");

  auto open = masked_open(s, idx, m, cp);

  // wanted[j][i] = i-th bit of (c - j) mod 2^m; idx == j iff the mask bits
  // spell that value. All positions share one opening; the product trees run
  // level by level across positions so rounds stay logarithmic in m.
  std::vector<SVec> trees(len);
  for (size_t j = 1; j <= len; ++j) {
    uint64_t w = (open.c - j) & mod_mask;
    SVec terms(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      if ((w >> i) & 1)
        terms[size_t(i)] = open.bits[size_t(i)];
      else
        terms[size_t(i)] = s.sub(s.constant(1), open.bits[size_t(i)]);
    }
    trees[j - 1] = std::move(terms);
  }

  while (true) {
    size_t maxlen = 0;
    for (auto& t : trees) maxlen = std::max(maxlen, t.size());
    if (maxlen <= 1) break;
    SVec lhs, rhs;
    for (auto& t : trees)
      for (size_t i = 0; 2 * i + 1 < t.size(); ++i) {
        lhs.push_back(t[2 * i]);
        rhs.push_back(t[2 * i + 1]);
      }
    auto prod = s.mul(lhs, rhs);
    size_t pos = 0;
    for (auto& t : trees) {
      SVec next;
      for (size_t i = 0; 2 * i + 1 < t.size(); ++i) next.push_back(prod[pos++]);
      if (t.size() % 2 == 1) next.push_back(t.back());
      t = std::move(next);
    }
  }

  SVec out(len);
  for (size_t j = 0; j < len; ++j) out[j] = trees[j][0];
  return out;
}

SVal vec_read(Session& s, std::span<const SVal> vec, std::span<const SVal> indicator) {
  if (vec.size() != indicator.size()) throw ProtocolError("vec_read: size mismatch");
  SVec a(vec.begin(), vec.end());
  SVec b(indicator.begin(), indicator.end());
  auto prod = s.mul(a, b);
  SVal acc = s.constant(0);
  for (auto& p : prod) acc = s.add(acc, p);
  return acc;
}

void vec_write(Session& s, std::span<SVal> vec, std::span<const SVal> indicator,
               SVal value) {
  if (vec.size() != indicator.size()) throw ProtocolError("vec_write: size mismatch");
  SVec delta(vec.size());
  for (size_t j = 0; j < vec.size(); ++j) delta[j] = s.sub(value, vec[j]);
  SVec ind(indicator.begin(), indicator.end());
  auto gated = s.mul(ind, delta);
  for (size_t j = 0; j < vec.size(); ++j) vec[j] = s.add(vec[j], gated[j]);
}

void ObliviousQueue::push(SVal v) {
  if (tail_ >= buf_.size()) throw ProtocolError("oblivious queue: capacity exceeded");
  buf_[tail_++] = v;
}

SVal ObliviousQueue::pop() {
  if (head_ == tail_) return s_.constant(0);
  return buf_[head_++];
}

SharedMatrix mat_mul(Session& s, const SharedMatrix& x, const SharedMatrix& y) {
  if (x.n != y.n) throw ProtocolError("mat_mul: size mismatch");
  size_t n = x.n;
  SVec lhs(n * n * n), rhs(n * n * n);
  size_t pos = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k, ++pos) {
        lhs[pos] = x.at(i, k);
        rhs[pos] = y.at(k, j);
      }
  auto prod = s.mul(lhs, rhs);
  SharedMatrix out(n);
  pos = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      SVal acc = s.constant(0);
      for (size_t k = 0; k < n; ++k, ++pos) acc = s.add(acc, prod[pos]);
      out.at(i, j) = acc;
    }
  return out;
}

SharedMatrix mat_transpose(const SharedMatrix& x) {
  SharedMatrix out(x.n);
  for (size_t i = 0; i < x.n; ++i)
    for (size_t j = 0; j < x.n; ++j) out.at(i, j) = x.at(j, i);
  return out;
}

SVec mat_vec_public(Session& s, const SharedMatrix& x, std::span<const uint64_t> v) {
  if (v.size() != x.n) throw ProtocolError("mat_vec_public: size mismatch");
  SVec out(x.n);
  for (size_t i = 0; i < x.n; ++i) {
    SVal acc = s.constant(0);
    for (size_t j = 0; j < x.n; ++j) acc = s.add(acc, s.mul_public(x.at(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

SVec mat_vec(Session& s, const SharedMatrix& x, std::span<const SVal> v) {
  if (v.size() != x.n) throw ProtocolError("mat_vec: size mismatch");
  size_t n = x.n;
  SVec lhs(n * n), rhs(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      lhs[i * n + j] = x.at(i, j);
      rhs[i * n + j] = v[j];
    }
  auto prod = s.mul(lhs, rhs);
  SVec out(n);
  for (size_t i = 0; i < n; ++i) {
    SVal acc = s.constant(0);
    for (size_t j = 0; j < n; ++j) acc = s.add(acc, prod[i * n + j]);
    out[i] = acc;
  }
  return out;
}

ShuffleHandle shuffle_matrix(Session& s, SharedMatrix& a, int num_contributors) {
  if (num_contributors < 1 || num_contributors > s.params().num_peers)
    throw ProtocolError("shuffle: bad contributor count");
  size_t n = a.n;
  ShuffleHandle h;

  for (int k = 1; k <= num_contributors; ++k) {
    // contributor k samples a private permutation and shares its matrix,
    // P[i][j] = 1 iff pi(j) == i
    std::vector<uint64_t> flat;
    std::vector<uint32_t> pi;
    if (s.self() == k) {
      pi = s.prg().permutation(n);
      flat.assign(n * n, 0);
      for (size_t j = 0; j < n; ++j) flat[size_t(pi[j]) * n + j] = 1;
    }
    auto shares = s.input_from(k, flat, n * n);
    SharedMatrix p(n);
    p.a = std::move(shares);
    if (s.self() == k) h.own_perm = std::move(pi);

    a = mat_mul(s, p, a);
    a = mat_mul(s, a, mat_transpose(p));
    h.perms.push_back(std::move(p));
  }
  return h;
}

SVec unshuffle_positions(Session& s, const ShuffleHandle& h, std::span<const SVal> v) {
  SVec cur(v.begin(), v.end());
  for (auto it = h.perms.rbegin(); it != h.perms.rend(); ++it)
    cur = mat_vec(s, mat_transpose(*it), cur);
  return cur;
}

SVec shuffled_label_table(Session& s, const ShuffleHandle& h) {
  if (h.perms.empty()) throw ProtocolError("label table: no shuffle applied");
  size_t n = h.perms[0].n;
  std::vector<uint64_t> labels(n);
  for (size_t i = 0; i < n; ++i) labels[i] = i + 1;

  // first hop is free: shared matrix times the public label vector
  SVec cur = mat_vec_public(s, h.perms[0], labels);
  for (size_t k = 1; k < h.perms.size(); ++k) cur = mat_vec(s, h.perms[k], cur);
  return cur;
}

}  // namespace kex
