#pragma once

#include <cstdint>
#include <vector>

#include "kex/compare.hpp"
#include "kex/session.hpp"

namespace kex {

// One-hot indicator of a shared index over the public positions 1..len.
// Entry j-1 holds [idx == j]; idx = 0 yields the all-zero vector, which is
// what makes reads and writes at the dummy position vanish. One masked open
// shared across every position, then len bit-match product trees.
SVec index_vector(Session& s, SVal idx, size_t len, const CompareParams& cp);

// Dot product <indicator, vec>; vec spans positions 1..len.
SVal vec_read(Session& s, std::span<const SVal> vec, std::span<const SVal> indicator);

// vec[j] <- indicator[j] ? value : vec[j] for all positions in one batch.
void vec_write(Session& s, std::span<SVal> vec, std::span<const SVal> indicator,
               SVal value);

// FIFO of shared values with public head and tail. Popping when empty hands
// back a shared zero, which downstream logic treats as the dummy vertex.
class ObliviousQueue {
 public:
  ObliviousQueue(Session& s, size_t capacity) : s_(s), buf_(capacity) {}

  void push(SVal v);
  SVal pop();
  size_t size() const { return tail_ - head_; }
  size_t capacity() const { return buf_.size(); }

 private:
  Session& s_;
  std::vector<SVal> buf_;
  size_t head_ = 0;
  size_t tail_ = 0;
};

// Row-major square matrix of shares.
struct SharedMatrix {
  size_t n = 0;
  SVec a;

  SharedMatrix() = default;
  explicit SharedMatrix(size_t dim) : n(dim), a(dim * dim) {}
  SVal& at(size_t r, size_t c) { return a[r * n + c]; }
  const SVal& at(size_t r, size_t c) const { return a[r * n + c]; }
};

// Every scalar product is its own multiplication protocol invocation, all in
// one batch, so one round and n^3 multiplications per call.
SharedMatrix mat_mul(Session& s, const SharedMatrix& x, const SharedMatrix& y);

SharedMatrix mat_transpose(const SharedMatrix& x);

// Shared matrix times public vector is local.
SVec mat_vec_public(Session& s, const SharedMatrix& x, std::span<const uint64_t> v);

SVec mat_vec(Session& s, const SharedMatrix& x, std::span<const SVal> v);

// Sequential conjugation A <- P_k A P_k^T by private permutations, one per
// contributing party. Keeps the shared permutation matrices for undoing the
// relabeling after the protocol.
struct ShuffleHandle {
  std::vector<SharedMatrix> perms;   // in application order
  std::vector<uint32_t> own_perm;    // this party's contribution, empty otherwise
};

ShuffleHandle shuffle_matrix(Session& s, SharedMatrix& a, int num_contributors);

// Position unshuffle: applies the inverses in reverse order, so entry u ends
// up holding the value for original vertex u+1.
SVec unshuffle_positions(Session& s, const ShuffleHandle& h, std::span<const SVal> v);

// Label table: entry i holds the original 1-based label of shuffled label i+1.
SVec shuffled_label_table(Session& s, const ShuffleHandle& h);

}  // namespace kex
