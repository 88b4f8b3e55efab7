#include "pcl/privacy_audit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "json.hpp"
#include "pcl/errors.hpp"
#include "pcl/simulation.hpp"

namespace pcl {
namespace {

AuditOptions with_key(ViewKey k) {
  AuditOptions o;
  o.key = k;
  return o;
}

TEST(AuditExact, MdsIsPrivate) {
  for (int t = 0; t <= 1; ++t) {
    MdsScheme s(2, 2, 1, t);
    for (int user = 1; user <= 2; ++user) {
      for (int f = 1; f <= 2; ++f) {
        const auto r = audit_exact(s, user, {f});
        EXPECT_TRUE(r.pass) << "t=" << t << " user " << user;
        EXPECT_EQ(r.max_tv, Rational(0));
        ASSERT_EQ(r.pairs.size(), 1u);
        EXPECT_FALSE(r.pairs[0].disjoint);
      }
    }
  }
  const auto r = audit_exact(MdsScheme(2, 3, 1, 0), 1, {2});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.pairs.size(), 3u);
}

TEST(AuditExact, CornerIsPrivate) {
  EXPECT_TRUE(audit_exact(CornerScheme(2, 2, 1), 1, {1}).pass);
  EXPECT_TRUE(audit_exact(CornerScheme(2, 3, 1), 2, {3}).pass);
}

TEST(AuditExact, ManLeaks) {
  ManScheme s(2, 2, 1, 1, false, kDefaultSubpacketizationCap);
  const auto r = audit_exact(s, 1, {1});
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.max_tv, Rational(1));
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_TRUE(r.pairs[0].disjoint);
  EXPECT_EQ(leakage_demo_man(2, 2, 1, 1, false).max_tv, Rational(1));
  // Hiding the label->piece map does not help MAN.
  EXPECT_EQ(leakage_demo_man(2, 3, 1, 1, true).max_tv, Rational(1));
  // With t' = K nothing is sent, so nothing leaks.
  EXPECT_TRUE(leakage_demo_man(2, 2, 1, 2, false).pass);
}

TEST(AuditExact, VirtualUsersNeedTheMessageShuffle) {
  VirtualUserScheme off(2, 2, 1, 2, false, kDefaultSubpacketizationCap);
  const auto r = audit_exact(off, 1, {1});
  EXPECT_GT(r.max_tv, Rational(0));
  EXPECT_FALSE(r.pass);
  // t = U - 1 sends one message, so there is nothing to shuffle.
  VirtualUserScheme one(2, 2, 1, 3, false, kDefaultSubpacketizationCap);
  EXPECT_TRUE(audit_exact(one, 1, {2}).pass);
}

TEST(AuditExact, EveryCacheRealization) {
  MdsScheme s(2, 2, 1, 0);
  AuditOptions o;
  o.all_cache_realizations = true;
  const auto r = audit_exact(s, 1, {1}, o);
  EXPECT_TRUE(r.pass);
  // C(4,2)^2 realizations, each with 2!^2 placements, and two choices of d_2.
  EXPECT_EQ(r.events, 36u * 4 * 2);
  EXPECT_EQ(r.events, exact_event_count(s, 1, o));
}

TEST(AuditExact, EventCapIsAGuardRail) {
  MdsScheme s(2, 2, 1, 0);
  AuditOptions o;
  o.event_cap = 7;
  EXPECT_EQ(exact_event_count(s, 1), 8u);
  EXPECT_THROW(exact_event_count(s, 1, o), GuardRailError);
  EXPECT_THROW(audit_exact(s, 1, {1}, o), GuardRailError);
  EXPECT_THROW(exact_event_count(MdsScheme(4, 4, 1, 0), 1, with_key(ViewKey::kRaw)), GuardRailError);
  EXPECT_THROW(audit_exact(s, 3, {1}), std::invalid_argument);
}

// Raw views by brute force: every pair of per-file permutations, kept when
// user's cached labels land on pieces 0..c-1 of both files. Two files only.
using RawView = std::vector<std::vector<PieceRef>>;

std::map<RawView, Rational> raw_distribution(const Scheme& s, int user, const DemandMatrix& d) {
  const std::size_t n = s.label_count();
  std::size_t c = 0;
  for (std::size_t j = 0; j < n; ++j) c += s.cached_by(user, j);
  Rng unused(0);
  const auto plan = s.plan_delivery(d, unused);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> perms;
  do {
    bool ok = true;
    for (std::size_t j = 0; j < n; ++j)
      if (s.cached_by(user, j) && perm[j] >= c) ok = false;
    if (ok) perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::map<RawView, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& p1 : perms) {
    for (const auto& p2 : perms) {
      RawView v;
      for (const auto& m : plan) {
        std::vector<PieceRef> row;
        for (const auto& e : m.entries) row.push_back({e.file, (e.file == 1 ? p1 : p2)[e.label]});
        v.push_back(row);
      }
      ++counts[v];
      ++total;
    }
  }
  std::map<RawView, Rational> out;
  for (const auto& [v, k] : counts)
    out[v] = Rational(static_cast<long long>(k), static_cast<long long>(total));
  return out;
}

Rational tv(const std::map<RawView, Rational>& a, const std::map<RawView, Rational>& b) {
  Rational sum = 0;
  for (const auto& [v, p] : a) sum += abs(p - (b.count(v) ? b.at(v) : Rational(0)));
  for (const auto& [v, p] : b)
    if (!a.count(v)) sum += p;
  return sum / 2;
}

TEST(AuditExact, RawKeyMatchesBruteForce) {
  for (bool corner : {false, true}) {
    std::unique_ptr<Scheme> s;
    if (corner)
      s = std::make_unique<CornerScheme>(2, 2, 1);
    else
      s = std::make_unique<MdsScheme>(2, 2, 1, 0);
    const auto a = raw_distribution(*s, 1, {{{1}, {1}}});
    const auto b = raw_distribution(*s, 1, {{{1}, {2}}});
    const auto r = audit_exact(*s, 1, {1}, with_key(ViewKey::kRaw));
    EXPECT_EQ(r.max_tv, tv(a, b)) << s->description();
    std::map<RawView, int> both;
    for (const auto& [v, p] : a) both[v];
    for (const auto& [v, p] : b) both[v];
    EXPECT_EQ(r.support, both.size());
    EXPECT_EQ(r.max_tv, Rational(0));
  }
}

TEST(ViewKeys, CacheFirstIgnoresUncachedNames) {
  const std::vector<PieceRef> cache{{1, 0}, {1, 1}};
  DeliveryPacket a;
  Message m;
  m.rows = 1;
  m.entries = {{1, 0}, {1, 3}, {2, 2}};
  a.messages.push_back(m);
  m.entries = {{1, 2}, {2, 2}};
  a.messages.push_back(m);
  DeliveryPacket b = a;
  b.messages[0].entries = {{1, 0}, {1, 2}, {2, 0}};
  b.messages[1].entries = {{1, 3}, {2, 0}};
  EXPECT_EQ(view_key(cache, a, 2, 4, ViewKey::kCacheFirst), view_key(cache, b, 2, 4, ViewKey::kCacheFirst));
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kRaw), view_key(cache, b, 2, 4, ViewKey::kRaw));
  // Renaming a cached piece is visible.
  DeliveryPacket c = a;
  c.messages[0].entries[0] = {1, 1};
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kCacheFirst), view_key(cache, c, 2, 4, ViewKey::kCacheFirst));
  // A repeated uncached piece is not the same as two distinct ones.
  DeliveryPacket e = a;
  e.messages[1].entries = {{1, 2}, {2, 3}};
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kCacheFirst), view_key(cache, e, 2, 4, ViewKey::kCacheFirst));
}

TEST(ViewKeys, InvariantIgnoresOrder) {
  const std::vector<PieceRef> cache{{1, 0}};
  DeliveryPacket a;
  Message m;
  m.rows = 1;
  m.entries = {{1, 0}, {1, 3}};
  a.messages.push_back(m);
  m.entries = {{2, 1}, {1, 2}};
  a.messages.push_back(m);
  DeliveryPacket b;
  m.entries = {{1, 1}, {2, 3}};
  b.messages.push_back(m);
  m.entries = {{1, 2}, {1, 0}};
  b.messages.push_back(m);
  EXPECT_EQ(view_key(cache, a, 2, 4, ViewKey::kInvariant), view_key(cache, b, 2, 4, ViewKey::kInvariant));
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kCacheFirst), view_key(cache, b, 2, 4, ViewKey::kCacheFirst));
  b.messages[0].rows = 2;
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kInvariant), view_key(cache, b, 2, 4, ViewKey::kInvariant));
}

TEST(ViewKeys, OrbitKeepsTheCachedFlag) {
  const std::vector<PieceRef> cache{{1, 0}, {1, 1}};
  DeliveryPacket a;
  Message m;
  m.rows = 1;
  m.entries = {{1, 0}, {1, 3}, {2, 2}};
  a.messages.push_back(m);
  DeliveryPacket b = a;
  b.messages[0].entries = {{1, 1}, {1, 2}, {2, 0}};
  EXPECT_EQ(view_key(cache, a, 2, 4, ViewKey::kOrbit), view_key(cache, b, 2, 4, ViewKey::kOrbit));
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kCacheFirst), view_key(cache, b, 2, 4, ViewKey::kCacheFirst));
  DeliveryPacket c = a;
  c.messages[0].entries = {{1, 2}, {1, 0}, {2, 2}};
  EXPECT_NE(view_key(cache, a, 2, 4, ViewKey::kOrbit), view_key(cache, c, 2, 4, ViewKey::kOrbit));
  EXPECT_EQ(view_key(cache, a, 2, 4, ViewKey::kInvariant), view_key(cache, c, 2, 4, ViewKey::kInvariant));
}

// Placement is a uniform per-file permutation, so renaming pieces within the
// cached or uncached class does not change any TV.
TEST(ViewKeys, OrbitTvEqualsCacheFirstTv) {
  std::vector<std::unique_ptr<Scheme>> schemes;
  schemes.push_back(std::make_unique<MdsScheme>(2, 2, 1, 0));
  schemes.push_back(std::make_unique<MdsScheme>(2, 3, 1, 1));
  schemes.push_back(std::make_unique<MdsScheme>(3, 2, 1, 1));
  schemes.push_back(std::make_unique<CornerScheme>(2, 3, 1));
  schemes.push_back(std::make_unique<ManScheme>(2, 2, 1, 1, true, 100));
  schemes.push_back(std::make_unique<VirtualUserScheme>(2, 2, 1, 2, false, kDefaultSubpacketizationCap));
  for (const auto& s : schemes)
    for (const auto& d : all_demand_vectors(s->N(), s->L())) {
      const auto a = audit_exact(*s, 1, d, with_key(ViewKey::kCacheFirst));
      const auto b = audit_exact(*s, 1, d, with_key(ViewKey::kOrbit));
      ASSERT_EQ(a.pairs.size(), b.pairs.size());
      for (std::size_t i = 0; i < a.pairs.size(); ++i) EXPECT_EQ(a.pairs[i].tv, b.pairs[i].tv) << s->description();
      EXPECT_LE(b.events, a.events);
    }
}

TEST(ViewKeys, SampledDefault) {
  EXPECT_EQ(default_sampled_key(MdsScheme(2, 2, 1, 0)), ViewKey::kOrbit);
  EXPECT_EQ(default_sampled_key(CornerScheme(2, 2, 1)), ViewKey::kOrbit);
  // Entry order inside each message is random even without the shuffle.
  EXPECT_EQ(default_sampled_key(VirtualUserScheme(2, 2, 1, 2, false, kDefaultSubpacketizationCap)),
            ViewKey::kInvariant);
  EXPECT_EQ(default_sampled_key(VirtualUserScheme(2, 2, 1, 2, true, kDefaultSubpacketizationCap)),
            ViewKey::kInvariant);
}

TEST(PerFile, OracleValues) {
  EXPECT_EQ(per_file_probability_oracle(SchemeKind::kMds, 2), Rational(1, 4));
  EXPECT_EQ(per_file_probability_oracle(SchemeKind::kMds, 3), Rational(1, 576));
  EXPECT_EQ(per_file_probability_oracle(SchemeKind::kCorner, 2), Rational(1, 3));
  EXPECT_EQ(per_file_probability_oracle(SchemeKind::kCorner, 3), Rational(1, 10));
  EXPECT_THROW(per_file_probability_oracle(SchemeKind::kMan, 2), std::invalid_argument);
  EXPECT_THROW(per_file_probability_oracle(SchemeKind::kMds, 7), std::invalid_argument);
}

TEST(PerFile, EnumerationAgreesWithClosedForm) {
  for (int K = 2; K <= 3; ++K) {
    MdsScheme mds(K, 2, 1, 0);
    CornerScheme corner(K, 2, 1);
    for (const auto& d : enumerate_demand_matrices(K, 2, 1)) {
      for (int file = 1; file <= 2; ++file) {
        const auto a = check_per_file_probability(mds, 1, d, file);
        EXPECT_EQ(a.min, per_file_probability_oracle(SchemeKind::kMds, K));
        EXPECT_EQ(a.max, a.min);
        const auto b = check_per_file_probability(corner, 1, d, file);
        EXPECT_EQ(b.min, per_file_probability_oracle(SchemeKind::kCorner, K));
        EXPECT_EQ(b.max, b.min);
      }
    }
  }
  EXPECT_THROW(check_per_file_probability(ManScheme(2, 2, 1, 1, false, 100), 1, {{{1}, {2}}}, 1),
               std::invalid_argument);
}

TEST(PerFile, JointViewFactorizes) {
  for (const auto& d : enumerate_demand_matrices(2, 2, 1)) {
    EXPECT_TRUE(check_factorization(MdsScheme(2, 2, 1, 0), 1, d));
    EXPECT_TRUE(check_factorization(CornerScheme(2, 2, 1), 2, d));
  }
}

TEST(AuditSampled, PassesPrivateAndFailsLeaky) {
  AuditOptions o;
  o.samples = 2000;
  const auto good = audit_sampled(CornerScheme(3, 3, 1), 1, {2}, o);
  EXPECT_TRUE(good.pass);
  EXPECT_EQ(good.samples, 2000u);
  EXPECT_EQ(good.events, 2000u * 9);
  EXPECT_DOUBLE_EQ(good.threshold, 3.0 * std::sqrt(static_cast<double>(good.support) / 2000.0));
  const auto bad = audit_sampled(ManScheme(2, 2, 1, 1, false, 100), 1, {1}, o);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.max_tv, Rational(1));
  // Same seed, same report.
  EXPECT_EQ(audit_sampled(CornerScheme(3, 3, 1), 1, {2}, o).max_tv, good.max_tv);
  o.samples = 0;
  EXPECT_THROW(audit_sampled(CornerScheme(3, 3, 1), 1, {2}, o), std::invalid_argument);
}

TEST(AuditSampled, RawKeyShowsSamplingNoise) {
  AuditOptions o;
  o.samples = 500;
  o.key = ViewKey::kRaw;
  o.threshold = 0.01;
  const auto r = audit_sampled(MdsScheme(2, 2, 1, 0), 1, {1}, o);
  EXPECT_GT(r.support, 2u);
  EXPECT_GT(r.max_tv, Rational(0));
  EXPECT_DOUBLE_EQ(r.threshold, 0.01);
}

TEST(AuditReport, Json) {
  const auto r = audit_exact(ManScheme(2, 2, 1, 1, false, 100), 1, {1});
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j.at("mode"), "exact");
  EXPECT_EQ(j.at("user"), 1);
  EXPECT_EQ(j.at("d_k"), nlohmann::json::array({1}));
  EXPECT_EQ(j.at("max_tv"), "1");
  EXPECT_EQ(j.at("pass"), false);
  ASSERT_EQ(j.at("pairs").size(), 1u);
  EXPECT_EQ(j.at("pairs")[0].at("tv"), "1");
  EXPECT_EQ(j.at("pairs")[0].at("disjoint"), true);
  EXPECT_FALSE(j.contains("samples"));
  EXPECT_EQ(to_string(AuditMode::kSampled), "sampled");
  EXPECT_EQ(to_string(ViewKey::kCacheFirst), "cache-first");
  EXPECT_EQ(to_string(ViewKey::kOrbit), "orbit");
}

}  // namespace
}  // namespace pcl
