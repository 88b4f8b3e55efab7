#pragma once

#include <cstdint>
#include <vector>

namespace pcl {

// Sorted, 1-based element list.
using Subset = std::vector<int>;

// C(x, y), with C(x, y) = 0 when x < 0, y < 0 or x < y.
// Throws std::overflow_error if the value does not fit in 64 bits.
std::uint64_t binom(long long x, long long y);

// j-th (1-based) subset of [a] in lexicographic order:
// {}, {1}, {1,2}, {1,2,3}, {1,3}, {2}, {2,3}, {3} for a = 3.
Subset pow_unrank(int a, std::uint64_t j);
std::uint64_t pow_rank(int a, const Subset& s);

// j-th (1-based) t-subset of [u] in lexicographic order.
Subset ksubset_unrank(int u, int t, std::uint64_t j);
std::uint64_t ksubset_rank(int u, const Subset& s);

// Bitmask helpers for small ground sets (bit e-1 <-> element e).
std::uint64_t to_mask(const Subset& s);
Subset from_mask(std::uint64_t mask);

// Source of uniform integers. Implemented by Rng for sampling and by the
// auditor's enumerator, which walks every outcome instead.
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  // Uniform on [0, n). n >= 1.
  virtual std::uint64_t uniform(std::uint64_t n) = 0;
};

// Counter-based generator: output i is a SplitMix64-style hash of
// (seed, stream, i). Copies are independent value objects.
class Rng final : public UniformSource {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  std::uint64_t uniform(std::uint64_t n) override;
  double uniform01();

  // Child generator with its own key, derived from this stream and `id`.
  Rng split(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Uniform permutation of [n] (1-based values) by Fisher-Yates.
std::vector<int> sample_permutation(int n, UniformSource& src);

}  // namespace pcl
