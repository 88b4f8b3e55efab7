#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/rational.hpp"
#include "pcl/schemes.hpp"

namespace pcl {

enum class AuditMode { kExact, kSampled };

// How a user view is reduced to a comparable key.
//   kRaw:        piece ids as transmitted.
//   kCacheFirst: pieces of each file are renamed by order of first
//                appearance, cache metadata first (so by rank among the
//                cached pieces), then the packet.
//   kOrbit:      pieces of each file renamed by first appearance in the
//                packet, cached flag kept. When placement is a uniform
//                per-file permutation the view distributions are invariant
//                under such renaming, so TV under this key equals TV under
//                kCacheFirst.
//   kInvariant:  order-free; each message becomes the sorted multiset of
//                (file, cached?, packet-wide multiplicity of the piece).
enum class ViewKey { kRaw, kCacheFirst, kOrbit, kInvariant };

std::string to_string(AuditMode m);
std::string to_string(ViewKey k);

struct PairTv {
  DemandMatrix a;
  DemandMatrix b;
  Rational tv;
  bool disjoint = false;
};

struct AuditReport {
  AuditMode mode = AuditMode::kExact;
  int user = 0;
  DemandVector d_k;
  Rational max_tv = 0;
  std::vector<PairTv> pairs;
  std::uint64_t samples = 0;  // per demand matrix, sampled mode
  std::uint64_t events = 0;   // elementary events visited
  double threshold = 0;       // sampled mode
  std::size_t support = 0;    // distinct keys over all demand matrices
  bool pass = false;
};

inline constexpr std::uint64_t kDefaultEventCap = 100'000'000;

struct AuditOptions {
  // Defaults to kCacheFirst (exact) or default_sampled_key (sampled).
  std::optional<ViewKey> key;
  std::uint64_t event_cap = kDefaultEventCap;
  // Exact mode: audit every cache realization of user k instead of the
  // representative one (cached pieces 0..c-1 of every file).
  bool all_cache_realizations = false;
  std::uint64_t samples = 10'000;
  // Sampled mode; defaults to 3 sqrt(support / samples).
  std::optional<double> threshold;
  std::uint64_t seed = 1;
};

// kOrbit for schemes with deterministic delivery, kInvariant otherwise: with
// shuffled messages any order-aware key has far more outcomes than samples.
ViewKey default_sampled_key(const Scheme& s);

// Key of the view (cache metadata, packet metadata) of one user.
std::string view_key(const std::vector<PieceRef>& cache_metadata, const DeliveryPacket& packet, int N,
                     std::size_t pieces_per_file, ViewKey key);

// Elementary events audit_exact would visit; GuardRailError past the cap.
std::uint64_t exact_event_count(const Scheme& s, int user, const AuditOptions& opts = {});

// Enumerates placement permutations consistent with user k's cache and every
// delivery-randomness outcome for every D with row k equal to d_k, and
// compares the resulting view distributions exactly.
AuditReport audit_exact(const Scheme& s, int user, const DemandVector& d_k, const AuditOptions& opts = {});

// Same comparison from `opts.samples` independent runs per demand matrix.
AuditReport audit_sampled(const Scheme& s, int user, const DemandVector& d_k, const AuditOptions& opts = {});

// Exact audit of user 1 of the MAN scheme over every d_1; returns the worst.
AuditReport leakage_demo_man(int K, int N, int L, int t_prime, bool precoding);

// Closed-form probability of one file's part of the view given z_k:
// (1/(2^(K-1))!)^2 for mds at t = 0, 1/C(2K-1, K-1) for mds-corner.
// std::invalid_argument for anything else.
Rational per_file_probability_oracle(SchemeKind kind, int K);

struct PerFileCheck {
  Rational min;
  Rational max;
  std::uint64_t consistent = 0;  // permutations consistent with z_k
  std::size_t views = 0;         // distinct per-file views
};

// Enumerates every permutation of `file`'s pieces consistent with the
// representative z_k and returns the range of per-file view probabilities.
// The view of a file is its piece ids per message, as a set inside each
// message. Requires a scheme with deterministic delivery.
PerFileCheck check_per_file_probability(const Scheme& s, int user, const DemandMatrix& d, int file);

// Whether the raw joint view distribution equals the product of the per-file
// marginals on its support. Requires deterministic delivery.
bool check_factorization(const Scheme& s, int user, const DemandMatrix& d);

// {mode, user, d_k, max_tv, pairs: [...], pass}
std::string to_json(const AuditReport& r);

}  // namespace pcl
