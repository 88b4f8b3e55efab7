#include "pcl/privacy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "pcl/errors.hpp"
#include "pcl/simulation.hpp"

namespace pcl {

std::string to_string(AuditMode m) { return m == AuditMode::kExact ? "exact" : "sampled"; }

std::string to_string(ViewKey k) {
  switch (k) {
    case ViewKey::kRaw: return "raw";
    case ViewKey::kCacheFirst: return "cache-first";
    case ViewKey::kOrbit: return "orbit";
    case ViewKey::kInvariant: return "invariant";
  }
  return "?";
}

ViewKey default_sampled_key(const Scheme& s) {
  return s.delivery_outcomes() == 1 ? ViewKey::kOrbit : ViewKey::kInvariant;
}

namespace {

constexpr std::uint64_t kAuditStream = 0xa0d;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw GuardRailError("audit event count overflows 64 bits; use sampling mode");
  return a * b;
}

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f = checked_mul(f, i);
  return f;
}

// Walks every outcome of a randomized procedure. Each run replays a prefix of
// recorded choices and extends it with zeros; advance() moves to the next path.
class Odometer final : public UniformSource {
 public:
  std::uint64_t uniform(std::uint64_t n) override {
    if (pos_ < digits_.size()) {
      if (digits_[pos_].radix != n) throw std::logic_error("randomized procedure is not replayable");
      return digits_[pos_++].value;
    }
    digits_.push_back({0, n});
    ++pos_;
    return 0;
  }

  // Call after each run. Returns false once every path was visited.
  bool advance() {
    digits_.resize(pos_);
    pos_ = 0;
    while (!digits_.empty() && digits_.back().value + 1 == digits_.back().radix) digits_.pop_back();
    if (digits_.empty()) return false;
    ++digits_.back().value;
    return true;
  }

  // Number of equally likely outcomes along the current path.
  std::uint64_t path_outcomes() const {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < pos_; ++i) d = checked_mul(d, digits_[i].radix);
    return d;
  }

 private:
  struct Digit {
    std::uint64_t value;
    std::uint64_t radix;
  };
  std::vector<Digit> digits_;
  std::size_t pos_ = 0;
};

struct FlatMessage {
  Coding coding;
  std::size_t rows;
  std::size_t begin;
  std::size_t end;
};

struct FlatView {
  std::vector<FlatMessage> messages;
  std::vector<PieceRef> entries;

  void clear() {
    messages.clear();
    entries.clear();
  }
};

void put(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

// Builds keys for views of one scheme instance; reuses its scratch buffers.
class KeyBuilder {
 public:
  KeyBuilder(int N, std::size_t n, ViewKey key)
      : N_(N), n_(n), key_(key), cached_(static_cast<std::size_t>(N) * n, 0), scratch_(cached_.size(), 0) {}

  // Cached pieces are named by their rank within the file's cached set.
  void set_cache(std::vector<PieceRef> meta) {
    std::sort(meta.begin(), meta.end());
    std::fill(cached_.begin(), cached_.end(), 0);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < meta.size(); ++i) {
      if (i > 0 && meta[i].file != meta[i - 1].file) rank = 0;
      cached_[slot(meta[i])] = ++rank;
    }
  }

  bool cached(const PieceRef& r) const { return cached_[slot(r)] != 0; }

  std::string key(const FlatView& v) {
    std::string out;
    switch (key_) {
      case ViewKey::kRaw:
        for (const auto& m : v.messages) {
          header(out, m);
          for (std::size_t e = m.begin; e < m.end; ++e) {
            put(out, static_cast<std::uint64_t>(v.entries[e].file));
            put(out, v.entries[e].piece);
          }
        }
        break;
      case ViewKey::kCacheFirst: {
        std::vector<std::size_t> next(static_cast<std::size_t>(N_) + 1, 0);
        for (const auto& m : v.messages) {
          header(out, m);
          for (std::size_t e = m.begin; e < m.end; ++e) {
            const auto& r = v.entries[e];
            put(out, static_cast<std::uint64_t>(r.file));
            if (cached(r)) {
              put(out, cached_[slot(r)] - 1);
              continue;
            }
            auto& name = scratch_[slot(r)];
            if (name == 0) {
              name = ++next[static_cast<std::size_t>(r.file)];
              touched_.push_back(slot(r));
            }
            put(out, n_ + name);
          }
        }
        break;
      }
      case ViewKey::kOrbit: {
        std::vector<std::size_t> next(static_cast<std::size_t>(N_) + 1, 0);
        for (const auto& m : v.messages) {
          header(out, m);
          for (std::size_t e = m.begin; e < m.end; ++e) {
            const auto& r = v.entries[e];
            auto& name = scratch_[slot(r)];
            if (name == 0) {
              name = ++next[static_cast<std::size_t>(r.file)];
              touched_.push_back(slot(r));
            }
            put(out, static_cast<std::uint64_t>(r.file));
            put(out, cached(r));
            put(out, name);
          }
        }
        break;
      }
      case ViewKey::kInvariant: {
        for (const auto& r : v.entries) {
          if (scratch_[slot(r)]++ == 0) touched_.push_back(slot(r));
        }
        std::vector<std::string> parts;
        parts.reserve(v.messages.size());
        std::vector<std::uint64_t> items;
        for (const auto& m : v.messages) {
          items.clear();
          for (std::size_t e = m.begin; e < m.end; ++e) {
            const auto& r = v.entries[e];
            items.push_back((static_cast<std::uint64_t>(r.file) << 33) |
                            (static_cast<std::uint64_t>(cached(r)) << 32) | scratch_[slot(r)]);
          }
          std::sort(items.begin(), items.end());
          std::string part;
          header(part, m);
          for (auto x : items) put(part, x);
          parts.push_back(std::move(part));
        }
        std::sort(parts.begin(), parts.end());
        for (const auto& p : parts) {
          put(out, p.size());
          out += p;
        }
        break;
      }
    }
    for (auto s : touched_) scratch_[s] = 0;
    touched_.clear();
    return out;
  }

 private:
  std::size_t slot(const PieceRef& r) const { return static_cast<std::size_t>(r.file - 1) * n_ + r.piece; }

  static void header(std::string& out, const FlatMessage& m) {
    put(out, static_cast<std::uint64_t>(m.coding));
    put(out, m.rows);
    put(out, m.end - m.begin);
  }

  int N_;
  std::size_t n_;
  ViewKey key_;
  std::vector<std::uint64_t> cached_;
  std::vector<std::uint64_t> scratch_;
  std::vector<std::size_t> touched_;
};

void flatten(const std::vector<PlannedMessage>& plan, const Placement& p, FlatView& v) {
  v.clear();
  for (const auto& m : plan) {
    const std::size_t begin = v.entries.size();
    for (const auto& e : m.entries) v.entries.push_back({e.file, p.piece(e.file, e.label)});
    v.messages.push_back({m.coding, m.rows, begin, v.entries.size()});
  }
}

void flatten(const DeliveryPacket& packet, FlatView& v) {
  v.clear();
  for (const auto& m : packet.messages) {
    const std::size_t begin = v.entries.size();
    v.entries.insert(v.entries.end(), m.entries.begin(), m.entries.end());
    v.messages.push_back({m.coding, m.rows, begin, v.entries.size()});
  }
}

std::vector<std::size_t> labels_where(const Scheme& s, int user, bool cached) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < s.label_count(); ++j)
    if (s.cached_by(user, j) == cached) out.push_back(j);
  return out;
}

// Cached piece set of every file for one realization of z_k.
using CacheRealization = std::vector<std::vector<std::size_t>>;

std::vector<CacheRealization> cache_realizations(const Scheme& s, int user, bool all) {
  const std::size_t n = s.label_count();
  const std::size_t c = labels_where(s, user, true).size();
  if (!s.permutes_pieces()) {
    const Placement id = identity_placement(s);
    CacheRealization z;
    for (int i = 1; i <= s.N(); ++i) {
      std::vector<std::size_t> set;
      for (std::size_t j : labels_where(s, user, true)) set.push_back(id.piece(i, j));
      std::sort(set.begin(), set.end());
      z.push_back(std::move(set));
    }
    return {z};
  }
  std::vector<std::size_t> first(c);
  std::iota(first.begin(), first.end(), 0);
  if (!all) return {CacheRealization(static_cast<std::size_t>(s.N()), first)};
  std::vector<std::vector<std::size_t>> subsets;
  if (c == 0) {
    subsets.push_back({});
  } else {
    const std::uint64_t total = binom(static_cast<long long>(n), static_cast<long long>(c));
    for (std::uint64_t r = 1; r <= total; ++r) {
      const Subset sub = ksubset_unrank(static_cast<int>(n), static_cast<int>(c), r);
      std::vector<std::size_t> set;
      for (int e : sub) set.push_back(static_cast<std::size_t>(e - 1));
      subsets.push_back(std::move(set));
    }
  }
  std::vector<CacheRealization> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(s.N()), 0);
  while (true) {
    CacheRealization z;
    for (auto i : idx) z.push_back(subsets[i]);
    out.push_back(std::move(z));
    std::size_t p = idx.size();
    while (p > 0 && idx[p - 1] + 1 == subsets.size()) idx[--p] = 0;
    if (p == 0) break;
    ++idx[p - 1];
  }
  return out;
}

// Draws a placement consistent with cached set z from `src`.
Placement conditioned_placement(const Scheme& s, int user, const CacheRealization& z, bool permute_cached,
                                bool permute_uncached, UniformSource& src) {
  if (!s.permutes_pieces()) return identity_placement(s);
  const std::size_t n = s.label_count();
  const auto cached_labels = labels_where(s, user, true);
  const auto uncached_labels = labels_where(s, user, false);
  Placement p;
  for (int i = 1; i <= s.N(); ++i) {
    const auto& cached = z[static_cast<std::size_t>(i - 1)];
    std::vector<std::size_t> uncached;
    for (std::size_t q = 0; q < n; ++q)
      if (!std::binary_search(cached.begin(), cached.end(), q)) uncached.push_back(q);
    std::vector<std::size_t> m(n);
    auto assign = [&](const std::vector<std::size_t>& labels, const std::vector<std::size_t>& pieces, bool permute) {
      if (permute) {
        const auto perm = sample_permutation(static_cast<int>(labels.size()), src);
        for (std::size_t j = 0; j < labels.size(); ++j) m[labels[j]] = pieces[static_cast<std::size_t>(perm[j] - 1)];
      } else {
        for (std::size_t j = 0; j < labels.size(); ++j) m[labels[j]] = pieces[j];
      }
    };
    assign(cached_labels, cached, permute_cached);
    assign(uncached_labels, uncached, permute_uncached);
    p.piece_of_label.push_back(std::move(m));
  }
  return p;
}

std::vector<PieceRef> metadata_of(const CacheRealization& z) {
  std::vector<PieceRef> out;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (auto q : z[i]) out.push_back({static_cast<int>(i + 1), q});
  return out;
}

// Probability mass of one key, as count/den plus any mass at other dens.
struct Mass {
  std::uint64_t den = 0;
  std::uint64_t count = 0;
  Rational rest = 0;

  void add(std::uint64_t d) {
    if (den == 0) den = d;
    if (d == den)
      ++count;
    else
      rest += Rational(1, static_cast<long long>(d));
  }
  Rational value() const {
    return den == 0 ? rest : Rational(static_cast<long long>(count), static_cast<long long>(den)) + rest;
  }
};

using Distribution = std::unordered_map<std::string, Mass>;

PairTv pair_tv(const Distribution& a, const Distribution& b) {
  PairTv out;
  out.disjoint = true;
  Rational sum = 0;
  for (const auto& [key, m] : a) {
    auto it = b.find(key);
    if (it == b.end()) {
      sum += m.value();
    } else {
      out.disjoint = false;
      sum += abs(m.value() - it->second.value());
    }
  }
  for (const auto& [key, m] : b)
    if (!a.count(key)) sum += m.value();
  out.tv = sum / 2;
  return out;
}

ViewKey exact_key(const AuditOptions& o) { return o.key.value_or(ViewKey::kCacheFirst); }

// Keys that do not change when a file's cached (or uncached) pieces are
// renamed among themselves.
bool relabeling_invariant(ViewKey k) { return k == ViewKey::kOrbit || k == ViewKey::kInvariant; }

std::uint64_t placements_per_realization(const Scheme& s, int user, ViewKey key) {
  if (!s.permutes_pieces() || relabeling_invariant(key)) return 1;
  const std::uint64_t c = labels_where(s, user, true).size();
  const std::uint64_t u = s.label_count() - c;
  std::uint64_t per_file = factorial(c);
  if (key == ViewKey::kRaw) per_file = checked_mul(per_file, factorial(u));
  std::uint64_t total = 1;
  for (int i = 0; i < s.N(); ++i) total = checked_mul(total, per_file);
  return total;
}

}  // namespace

std::string view_key(const std::vector<PieceRef>& cache_metadata, const DeliveryPacket& packet, int N,
                     std::size_t pieces_per_file, ViewKey key) {
  KeyBuilder kb(N, pieces_per_file, key);
  kb.set_cache(cache_metadata);
  FlatView v;
  flatten(packet, v);
  return kb.key(v);
}

std::uint64_t exact_event_count(const Scheme& s, int user, const AuditOptions& opts) {
  const ViewKey key = exact_key(opts);
  std::uint64_t realizations = 1;
  if (opts.all_cache_realizations && s.permutes_pieces()) {
    const std::uint64_t c = labels_where(s, user, true).size();
    const std::uint64_t per_file = binom(static_cast<long long>(s.label_count()), static_cast<long long>(c));
    for (int i = 0; i < s.N(); ++i) realizations = checked_mul(realizations, per_file);
  }
  if (s.delivery_outcomes() == std::numeric_limits<std::uint64_t>::max())
    throw GuardRailError("delivery randomness too large to enumerate; use sampling mode");
  std::uint64_t events = checked_mul(realizations, placements_per_realization(s, user, key));
  events = checked_mul(events, s.delivery_outcomes());
  for (int k = 1; k < s.K(); ++k) events = checked_mul(events, binom(s.N(), s.L()));
  if (events > opts.event_cap)
    throw GuardRailError("exact audit needs " + std::to_string(events) + " events, above the cap " +
                         std::to_string(opts.event_cap) + "; use sampling mode");
  return events;
}

AuditReport audit_exact(const Scheme& s, int user, const DemandVector& d_k, const AuditOptions& opts) {
  if (user < 1 || user > s.K()) throw std::invalid_argument("user out of range");
  const ViewKey key = exact_key(opts);
  AuditReport report;
  report.mode = AuditMode::kExact;
  report.user = user;
  report.d_k = d_k;
  report.events = exact_event_count(s, user, opts);

  const auto demands = enumerate_with_fixed_row(s.K(), s.N(), s.L(), user, d_k);
  // Delivery plans depend on D only; enumerate them once per D.
  struct Path {
    std::vector<PlannedMessage> plan;
    std::uint64_t outcomes;
  };
  std::vector<std::vector<Path>> plans(demands.size());
  for (std::size_t j = 0; j < demands.size(); ++j) {
    Odometer od;
    do {
      auto plan = s.plan_delivery(demands[j], od);
      plans[j].push_back({std::move(plan), od.path_outcomes()});
    } while (od.advance());
  }

  const bool permute_cached = !relabeling_invariant(key);
  const bool permute_uncached = key == ViewKey::kRaw;
  KeyBuilder kb(s.N(), s.label_count(), key);
  FlatView v;
  std::map<std::pair<std::size_t, std::size_t>, PairTv> worst;
  for (const auto& z : cache_realizations(s, user, opts.all_cache_realizations)) {
    kb.set_cache(metadata_of(z));
    std::vector<Distribution> dist(demands.size());
    for (std::size_t j = 0; j < demands.size(); ++j) {
      Odometer od;
      do {
        const Placement p = conditioned_placement(s, user, z, permute_cached, permute_uncached, od);
        const std::uint64_t placement_outcomes = od.path_outcomes();
        for (const auto& path : plans[j]) {
          flatten(path.plan, p, v);
          dist[j][kb.key(v)].add(checked_mul(placement_outcomes, path.outcomes));
        }
      } while (od.advance());
    }
    std::size_t support = 0;
    for (std::size_t j = 0; j < demands.size(); ++j)
      for (const auto& [k, m] : dist[j])
        support += std::none_of(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(j),
                                [&](const Distribution& e) { return e.count(k) > 0; });
    report.support = std::max(report.support, support);
    for (std::size_t a = 0; a < demands.size(); ++a) {
      for (std::size_t b = a + 1; b < demands.size(); ++b) {
        PairTv t = pair_tv(dist[a], dist[b]);
        t.a = demands[a];
        t.b = demands[b];
        auto it = worst.find({a, b});
        if (it == worst.end() || t.tv > it->second.tv) worst[{a, b}] = std::move(t);
      }
    }
  }
  for (auto& [ab, t] : worst) {
    if (t.tv > report.max_tv) report.max_tv = t.tv;
    report.pairs.push_back(std::move(t));
  }
  report.pass = report.max_tv == 0;
  return report;
}

AuditReport audit_sampled(const Scheme& s, int user, const DemandVector& d_k, const AuditOptions& opts) {
  if (user < 1 || user > s.K()) throw std::invalid_argument("user out of range");
  if (opts.samples == 0) throw std::invalid_argument("sampled audit needs at least one sample");
  const ViewKey key = opts.key.value_or(default_sampled_key(s));
  AuditReport report;
  report.mode = AuditMode::kSampled;
  report.user = user;
  report.d_k = d_k;
  report.samples = opts.samples;

  const auto demands = enumerate_with_fixed_row(s.K(), s.N(), s.L(), user, d_k);
  KeyBuilder kb(s.N(), s.label_count(), key);
  FlatView v;
  std::vector<std::unordered_map<std::string, std::uint64_t>> counts(demands.size());
  std::set<std::string> support;
  const Rng base(opts.seed, kAuditStream);
  for (std::size_t j = 0; j < demands.size(); ++j) {
    Rng rng = base.split(j);
    for (std::uint64_t r = 0; r < opts.samples; ++r) {
      const Placement p = draw_placement(s, rng);
      const auto plan = s.plan_delivery(demands[j], rng);
      kb.set_cache(cache_metadata(s, p, user));
      flatten(plan, p, v);
      ++counts[j][kb.key(v)];
    }
    for (const auto& [k, c] : counts[j]) support.insert(k);
    report.events += opts.samples;
  }
  const auto R = static_cast<long long>(opts.samples);
  for (std::size_t a = 0; a < demands.size(); ++a) {
    for (std::size_t b = a + 1; b < demands.size(); ++b) {
      PairTv t;
      t.a = demands[a];
      t.b = demands[b];
      t.disjoint = true;
      std::uint64_t diff = 0;
      for (const auto& [k, c] : counts[a]) {
        auto it = counts[b].find(k);
        const std::uint64_t other = it == counts[b].end() ? 0 : it->second;
        if (other != 0) t.disjoint = false;
        diff += c > other ? c - other : other - c;
      }
      for (const auto& [k, c] : counts[b])
        if (!counts[a].count(k)) diff += c;
      t.tv = Rational(static_cast<long long>(diff), 2 * R);
      if (t.tv > report.max_tv) report.max_tv = t.tv;
      report.pairs.push_back(std::move(t));
    }
  }
  report.support = support.size();
  report.threshold = opts.threshold.value_or(3.0 * std::sqrt(static_cast<double>(report.support) /
                                                             static_cast<double>(opts.samples)));
  report.pass = to_double(report.max_tv) <= report.threshold;
  return report;
}

AuditReport leakage_demo_man(int K, int N, int L, int t_prime, bool precoding) {
  ManScheme s(K, N, L, t_prime, precoding, kDefaultSubpacketizationCap);
  std::optional<AuditReport> worst;
  for (const auto& d : all_demand_vectors(N, L)) {
    auto r = audit_exact(s, 1, d);
    if (!worst || r.max_tv > worst->max_tv) worst = std::move(r);
  }
  return *worst;
}

Rational per_file_probability_oracle(SchemeKind kind, int K) {
  if (K < 1) throw std::invalid_argument("K must be positive");
  if (kind == SchemeKind::kMds) {
    if (K > 6) throw std::invalid_argument("factorial too large for K > 6");
    const BigInt f = static_cast<long long>(factorial(std::uint64_t{1} << (K - 1)));
    return Rational(BigInt(1), f * f);
  }
  if (kind == SchemeKind::kCorner) {
    if (K < 2) throw std::invalid_argument("mds-corner needs K >= 2");
    return Rational(1, static_cast<long long>(binom(2 * K - 1, K - 1)));
  }
  throw std::invalid_argument("no closed-form per-file probability for scheme " + to_string(kind));
}

PerFileCheck check_per_file_probability(const Scheme& s, int user, const DemandMatrix& d, int file) {
  if (s.delivery_outcomes() != 1) throw std::invalid_argument("scheme delivery is randomized");
  if (!s.permutes_pieces()) throw std::invalid_argument("scheme does not permute pieces");
  if (file < 1 || file > s.N()) throw std::invalid_argument("file out of range");
  const std::size_t n = s.label_count();
  if (n > 10) throw GuardRailError("per-file enumeration limited to 10 pieces");
  Rng unused(0);
  const auto plan = s.plan_delivery(d, unused);
  std::vector<char> is_cached_label(n, 0);
  std::size_t c = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (s.cached_by(user, j)) is_cached_label[j] = 1, ++c;

  std::map<std::vector<std::vector<std::size_t>>, std::uint64_t> counts;
  PerFileCheck out;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool consistent = true;
    for (std::size_t j = 0; j < n && consistent; ++j) consistent = (perm[j] < c) == (is_cached_label[j] != 0);
    if (!consistent) continue;
    ++out.consistent;
    std::vector<std::vector<std::size_t>> view;
    for (const auto& m : plan) {
      std::vector<std::size_t> part;
      for (const auto& e : m.entries)
        if (e.file == file) part.push_back(perm[e.label]);
      std::sort(part.begin(), part.end());
      view.push_back(std::move(part));
    }
    ++counts[view];
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.views = counts.size();
  bool first = true;
  for (const auto& [view, cnt] : counts) {
    const Rational p(static_cast<long long>(cnt), static_cast<long long>(out.consistent));
    if (first || p < out.min) out.min = p;
    if (first || p > out.max) out.max = p;
    first = false;
  }
  return out;
}

bool check_factorization(const Scheme& s, int user, const DemandMatrix& d) {
  if (s.delivery_outcomes() != 1) throw std::invalid_argument("scheme delivery is randomized");
  AuditOptions o;
  o.key = ViewKey::kRaw;
  o.event_cap = 10'000'000;
  exact_event_count(s, user, o);
  Rng unused(0);
  const auto plan = s.plan_delivery(d, unused);
  const auto z = cache_realizations(s, user, false).front();
  const std::size_t N = static_cast<std::size_t>(s.N());

  std::map<std::string, std::uint64_t> joint;
  std::vector<std::map<std::string, std::uint64_t>> marginal(N);
  std::map<std::string, std::vector<std::string>> parts_of;
  std::uint64_t total = 0;
  Odometer od;
  do {
    const Placement p = conditioned_placement(s, user, z, true, true, od);
    std::string whole;
    std::vector<std::string> parts(N);
    for (const auto& m : plan) {
      put(whole, m.entries.size());
      for (auto& part : parts) part.push_back('|');
      for (const auto& e : m.entries) {
        const std::size_t q = p.piece(e.file, e.label);
        put(whole, static_cast<std::uint64_t>(e.file));
        put(whole, q);
        put(parts[static_cast<std::size_t>(e.file - 1)], q);
      }
    }
    ++joint[whole];
    for (std::size_t i = 0; i < N; ++i) ++marginal[i][parts[i]];
    parts_of.emplace(whole, std::move(parts));
    ++total;
  } while (od.advance());

  const auto T = static_cast<long long>(total);
  for (const auto& [w, cnt] : joint) {
    Rational product = 1;
    const auto& parts = parts_of.at(w);
    for (std::size_t i = 0; i < N; ++i)
      product *= Rational(static_cast<long long>(marginal[i].at(parts[i])), T);
    if (product != Rational(static_cast<long long>(cnt), T)) return false;
  }
  return true;
}

std::string to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(r.mode);
  j["user"] = r.user;
  j["d_k"] = r.d_k;
  j["max_tv"] = to_string(r.max_tv);
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& p : r.pairs) {
    nlohmann::ordered_json e;
    e["a"] = p.a.rows;
    e["b"] = p.b.rows;
    e["tv"] = to_string(p.tv);
    e["disjoint"] = p.disjoint;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  if (r.mode == AuditMode::kSampled) {
    j["samples"] = r.samples;
    j["threshold"] = r.threshold;
  }
  j["support"] = r.support;
  j["pass"] = r.pass;
  return j.dump();
}

}  // namespace pcl
