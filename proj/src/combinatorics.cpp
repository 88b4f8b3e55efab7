#include "pcl/combinatorics.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace pcl {

std::uint64_t binom(long long x, long long y) {
  if (x < 0 || y < 0 || x < y) return 0;
  if (y > x - y) y = x - y;
  unsigned __int128 r = 1;
  for (long long i = 1; i <= y; ++i) {
    // r * (x - y + i) / i is exact at every step.
    r = r * static_cast<unsigned __int128>(x - y + i) / static_cast<unsigned __int128>(i);
    if (r > UINT64_MAX) throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

std::uint64_t pow2(int e) {
  if (e < 0 || e > 62) throw std::out_of_range("power set too large");
  return std::uint64_t{1} << e;
}

}  // namespace

Subset pow_unrank(int a, std::uint64_t j) {
  if (a < 0 || a > 62) throw std::out_of_range("pow_unrank: ground set size out of range");
  if (j < 1 || j > pow2(a)) throw std::out_of_range("pow_unrank: index out of range");
  Subset s;
  std::uint64_t r = j - 1;  // 0 means "stop at the current prefix"
  int lo = 1;
  while (r > 0) {
    --r;
    for (int x = lo; x <= a; ++x) {
      const std::uint64_t block = pow2(a - x);
      if (r < block) {
        s.push_back(x);
        lo = x + 1;
        break;
      }
      r -= block;
    }
  }
  return s;
}

std::uint64_t pow_rank(int a, const Subset& s) {
  if (a < 0 || a > 62) throw std::out_of_range("pow_rank: ground set size out of range");
  std::uint64_t r = 1;
  int lo = 1;
  for (int x : s) {
    if (x < lo || x > a) throw std::invalid_argument("pow_rank: subset not sorted or out of range");
    for (int y = lo; y < x; ++y) r += pow2(a - y);
    r += 1;  // the set ending before x
    lo = x + 1;
  }
  return r;
}

Subset ksubset_unrank(int u, int t, std::uint64_t j) {
  if (u < 0 || t < 0 || t > u) throw std::out_of_range("ksubset_unrank: bad sizes");
  if (j < 1 || j > binom(u, t)) throw std::out_of_range("ksubset_unrank: index out of range");
  Subset s;
  --j;
  int x = 1;
  for (int remaining = t; remaining > 0; --remaining) {
    while (true) {
      const std::uint64_t c = binom(u - x, remaining - 1);
      if (j < c) break;
      j -= c;
      ++x;
    }
    s.push_back(x);
    ++x;
  }
  return s;
}

std::uint64_t ksubset_rank(int u, const Subset& s) {
  std::uint64_t r = 1;
  int x = 1;
  const int t = static_cast<int>(s.size());
  for (int i = 0; i < t; ++i) {
    if (s[i] < x || s[i] > u) throw std::invalid_argument("ksubset_rank: subset not sorted or out of range");
    for (; x < s[i]; ++x) r += binom(u - x, t - i - 1);
    ++x;
  }
  return r;
}

std::uint64_t to_mask(const Subset& s) {
  std::uint64_t m = 0;
  for (int x : s) {
    if (x < 1 || x > 64) throw std::out_of_range("to_mask: element out of range");
    m |= std::uint64_t{1} << (x - 1);
  }
  return m;
}

Subset from_mask(std::uint64_t mask) {
  Subset s;
  for (int e = 1; mask != 0; ++e, mask >>= 1)
    if (mask & 1) s.push_back(e);
  return s;
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(seed + kGolden) ^ mix64((stream + 1) * kGolden)) {}

std::uint64_t Rng::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

std::uint64_t Rng::uniform(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform(0)");
  // Reject the low 2^64 mod n values so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % n;
  }
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Rng Rng::split(std::uint64_t id) const { return Rng(mix64(key_ ^ mix64(id + kGolden)), id); }

std::vector<int> sample_permutation(int n, UniformSource& src) {
  if (n < 1) throw std::invalid_argument("sample_permutation needs n >= 1");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(src.uniform(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace pcl
