#include "pcl/schemes.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "pcl/errors.hpp"

namespace pcl {

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::kBaseline: return "baseline";
    case SchemeKind::kMan: return "man";
    case SchemeKind::kVirtualUser: return "virtual-user";
    case SchemeKind::kMds: return "mds";
    case SchemeKind::kCorner: return "mds-corner";
  }
  return "?";
}

SchemeKind parse_scheme_kind(const std::string& s) {
  if (s == "baseline") return SchemeKind::kBaseline;
  if (s == "man") return SchemeKind::kMan;
  if (s == "virtual-user") return SchemeKind::kVirtualUser;
  if (s == "mds") return SchemeKind::kMds;
  if (s == "mds-corner") return SchemeKind::kCorner;
  throw InputError("unknown scheme '" + s + "' (baseline | man | virtual-user | mds | mds-corner)");
}

Scheme::Scheme(SchemeKind kind, int K, int N, int L) : kind_(kind), K_(K), N_(N), L_(L) {
  SystemParams{K, N, L, 0, 0}.validate();
  field_ = &Field::gf256();
}

void Scheme::set_field_for(std::size_t elements) { field_ = &smallest_field_for(elements); }

void Scheme::check_cap(std::uint64_t value, std::uint64_t cap, const std::string& what) const {
  if (value > cap) {
    throw GuardRailError(what + " = " + std::to_string(value) + " exceeds the sub-packetization cap " +
                         std::to_string(cap) + " (set PCL_SUBPACK_CAP to override)");
  }
}

SystemParams Scheme::params(std::size_t symbols_per_unit) const {
  return {K_, N_, L_, memory(), layout().k * symbols_per_unit};
}

std::string Scheme::description() const {
  std::string s = to_string(kind_) + " K=" + std::to_string(K_) + " N=" + std::to_string(N_) +
                  " L=" + std::to_string(L_);
  const std::string c = corner_text();
  return c.empty() ? s : s + " " + c;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_factorial(std::uint64_t n) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f = saturating_mul(f, i);
  return f;
}

std::uint64_t saturating_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = saturating_mul(r, b);
  return r;
}

std::uint64_t binom_or_max(long long x, long long y) {
  try {
    return binom(x, y);
  } catch (const std::overflow_error&) {
    return std::numeric_limits<std::uint64_t>::max();
  }
}

// Advances a sorted 1-based t-subset of [u] to its lexicographic successor.
bool next_subset(Subset& s, int u) {
  const int t = static_cast<int>(s.size());
  for (int i = t - 1; i >= 0; --i) {
    if (s[i] < u - (t - 1 - i)) {
      ++s[i];
      for (int j = i + 1; j < t; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Subset first_subset(int t) {
  Subset s(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) s[i] = i + 1;
  return s;
}

Subset without(const Subset& s, int x) {
  Subset r;
  r.reserve(s.size());
  for (int e : s)
    if (e != x) r.push_back(e);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- baseline

BaselineScheme::BaselineScheme(int K, int N, int L, const Rational& M)
    : Scheme(SchemeKind::kBaseline, K, N, L), M_(M) {
  SystemParams{K, N, L, M, 0}.validate();
  const Rational frac = M / N;
  units_ = static_cast<std::size_t>(denominator(frac));
  cached_units_ = static_cast<std::size_t>(numerator(frac));
}

Label BaselineScheme::label(std::size_t j) const {
  if (j >= units_) throw std::out_of_range("label index");
  Label l;
  if (j < cached_units_)
    for (int k = 1; k <= K(); ++k) l.users.push_back(k);
  return l;
}

bool BaselineScheme::cached_by(int, std::size_t j) const { return j < cached_units_; }

std::vector<PlannedMessage> BaselineScheme::plan_delivery(const DemandMatrix& d, UniformSource&) const {
  validate_demands(d, K(), N(), L());
  std::vector<PlannedMessage> out;
  for (int i = 1; i <= N(); ++i)
    for (std::size_t j = cached_units_; j < units_; ++j)
      out.push_back({1, Coding::kIdentity, {{i, j}}});
  return out;
}

Rational BaselineScheme::load() const { return Rational(N()) - M_; }

std::uint64_t BaselineScheme::load_denominator() const {
  return static_cast<std::uint64_t>(denominator(load()));
}

std::string BaselineScheme::corner_text() const { return "M=" + to_string(M_); }

// ---------------------------------------------------------------- MAN

ManScheme::ManScheme(int K, int N, int L, int t_prime, bool precoding, std::uint64_t cap)
    : Scheme(SchemeKind::kMan, K, N, L), t_prime_(t_prime), precoding_(precoding) {
  if (t_prime < 0 || t_prime > K) throw InputError("t' must lie in [0, K]");
  check_cap(binom_or_max(K, t_prime), cap, "C(K,t')");
  Subset s = first_subset(t_prime);
  do {
    labels_.push_back(s);
  } while (next_subset(s, K));
}

bool ManScheme::cached_by(int user, std::size_t j) const {
  const auto& w = labels_.at(j);
  return std::binary_search(w.begin(), w.end(), user);
}

std::vector<PlannedMessage> ManScheme::plan_delivery(const DemandMatrix& d, UniformSource&) const {
  validate_demands(d, K(), N(), L());
  std::vector<PlannedMessage> out;
  if (t_prime_ == K()) return out;
  for (int round = 0; round < L(); ++round) {
    Subset s = first_subset(t_prime_ + 1);
    do {
      PlannedMessage m{1, Coding::kXor, {}};
      for (int k : s) {
        const int file = d.of(k)[static_cast<std::size_t>(round)];
        m.entries.push_back({file, static_cast<std::size_t>(ksubset_rank(K(), without(s, k)) - 1)});
      }
      out.push_back(std::move(m));
    } while (next_subset(s, K()));
  }
  return out;
}

Rational ManScheme::memory() const { return Rational(N() * t_prime_, K()); }

Rational ManScheme::load() const { return Rational(L() * (K() - t_prime_), t_prime_ + 1); }

std::uint64_t ManScheme::load_denominator() const { return labels_.size(); }

std::string ManScheme::corner_text() const {
  return "t'=" + std::to_string(t_prime_) + (precoding_ ? " precoded" : "");
}

// ---------------------------------------------------------------- virtual user

VirtualUserScheme::VirtualUserScheme(int K, int N, int L, int t, bool shuffle, std::uint64_t cap)
    : Scheme(SchemeKind::kVirtualUser, K, N, L), t_(t), shuffle_(shuffle) {
  const std::uint64_t u = saturating_mul(binom_or_max(N, L), static_cast<std::uint64_t>(K));
  if (u > static_cast<std::uint64_t>(std::numeric_limits<int>::max() / 2))
    throw GuardRailError("number of effective users C(N,L)K is too large");
  U_ = static_cast<int>(u);
  if (t < 1 || t > U_) throw InputError("t must lie in [1, C(N,L)K] = [1, " + std::to_string(U_) + "]");
  const std::uint64_t pieces = binom_or_max(U_, t);
  const std::uint64_t messages = binom_or_max(U_, t + 1);
  check_cap(pieces, cap, "C(U,t)");
  check_cap(messages, cap, "C(U,t+1)");
  pieces_ = pieces;
  messages_ = messages;
  // Each message mixes L(t+1) subfiles into L rows.
  set_field_for(static_cast<std::size_t>(L) * static_cast<std::size_t>(t + 2));
}

Label VirtualUserScheme::label(std::size_t j) const {
  if (j >= pieces_) throw std::out_of_range("label index");
  return {ksubset_unrank(U_, t_, j + 1), 0};
}

bool VirtualUserScheme::cached_by(int user, std::size_t j) const {
  const auto w = label(j).users;
  return std::binary_search(w.begin(), w.end(), user);
}

std::vector<DemandVector> vu_assign_virtual_demands(const DemandMatrix& d, int N, int L) {
  const auto vectors = all_demand_vectors(N, L);
  const int K = d.users();
  validate_demands(d, K, N, L);
  std::vector<DemandVector> eff(d.rows.begin(), d.rows.end());
  for (const auto& v : vectors) {
    const auto n = std::count(d.rows.begin(), d.rows.end(), v);
    for (long long c = n; c < K; ++c) eff.push_back(v);
  }
  return eff;
}

std::vector<PlannedMessage> VirtualUserScheme::plan_delivery(const DemandMatrix& d,
                                                             UniformSource& src) const {
  validate_demands(d, K(), N(), L());
  const auto eff = vu_assign_virtual_demands(d, N(), L());
  std::vector<PlannedMessage> lex;
  lex.reserve(messages_);
  if (messages_ == 0) return lex;
  Subset s = first_subset(t_ + 1);
  do {
    const auto order = sample_permutation(t_ + 1, src);
    PlannedMessage m{static_cast<std::size_t>(L()), Coding::kCauchy, {}};
    m.entries.reserve(static_cast<std::size_t>(L() * (t_ + 1)));
    for (int pos : order) {
      const int u = s[static_cast<std::size_t>(pos - 1)];
      const auto w = static_cast<std::size_t>(ksubset_rank(U_, without(s, u)) - 1);
      for (int f : eff[static_cast<std::size_t>(u - 1)]) m.entries.push_back({f, w});
    }
    lex.push_back(std::move(m));
  } while (next_subset(s, U_));
  if (!shuffle_) return lex;
  const auto q = sample_permutation(static_cast<int>(lex.size()), src);
  std::vector<PlannedMessage> out;
  out.reserve(lex.size());
  for (int j : q) out.push_back(std::move(lex[static_cast<std::size_t>(j - 1)]));
  return out;
}

std::uint64_t VirtualUserScheme::delivery_outcomes() const {
  std::uint64_t n = saturating_pow(saturating_factorial(static_cast<std::uint64_t>(t_ + 1)), messages_);
  if (shuffle_) n = saturating_mul(n, saturating_factorial(messages_));
  return n;
}

Rational VirtualUserScheme::memory() const { return Rational(static_cast<long long>(t_) * N(), U_); }

Rational VirtualUserScheme::load() const { return Rational(static_cast<long long>(L()) * (U_ - t_), t_ + 1); }

std::string VirtualUserScheme::corner_text() const {
  return "t=" + std::to_string(t_) + (shuffle_ ? "" : " unshuffled");
}

// ---------------------------------------------------------------- MDS

std::uint64_t mds_data_pieces(int K, int t) {
  std::uint64_t k = std::uint64_t{1} << (K - 1);
  for (int j = t; j <= K - 1; ++j) k += binom(K - 1, j);
  return k;
}

MdsScheme::MdsScheme(int K, int N, int L, int t) : Scheme(SchemeKind::kMds, K, N, L), t_(t) {
  if (K > 20) throw GuardRailError("mds scheme limited to K <= 20 (2^K pieces per file)");
  if (t == K) throw InputError("t = K means M = N; nothing to deliver");
  if (t < 0 || t > K - 1) throw InputError("t must lie in [0, K-1]");
  k_mds_ = mds_data_pieces(K, t);
  const std::size_t n = label_count();
  mask_of_label_.resize(n);
  label_of_mask_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto mask = to_mask(pow_unrank(K, j + 1));
    mask_of_label_[j] = mask;
    label_of_mask_[mask] = j;
  }
  for (int size = t + 1; size <= K; ++size) {
    Subset s = first_subset(size);
    do {
      message_sets_.push_back(to_mask(s));
    } while (next_subset(s, K));
  }
  std::size_t need = static_cast<std::size_t>(N + L);
  if (n > k_mds_) need = std::max(need, n);
  set_field_for(need);
}

Label MdsScheme::label(std::size_t j) const { return {from_mask(mask_of_label_.at(j)), 0}; }

bool MdsScheme::cached_by(int user, std::size_t j) const {
  return (mask_of_label_.at(j) >> (user - 1)) & 1u;
}

std::vector<PlannedMessage> MdsScheme::plan_delivery(const DemandMatrix& d, UniformSource&) const {
  validate_demands(d, K(), N(), L());
  std::vector<std::uint64_t> q(static_cast<std::size_t>(N()) + 1, 0);
  for (int k = 1; k <= K(); ++k)
    for (int i : d.of(k)) q[static_cast<std::size_t>(i)] |= std::uint64_t{1} << (k - 1);
  std::vector<PlannedMessage> out;
  out.reserve(message_sets_.size());
  for (std::uint64_t s : message_sets_) {
    PlannedMessage m{static_cast<std::size_t>(L()), Coding::kCauchy, {}};
    m.entries.reserve(static_cast<std::size_t>(N()));
    for (int i = 1; i <= N(); ++i) m.entries.push_back({i, label_of_mask_[s ^ q[static_cast<std::size_t>(i)]]});
    out.push_back(std::move(m));
  }
  return out;
}

Rational MdsScheme::memory() const {
  return Rational(static_cast<long long>(N()) * (1LL << (K() - 1)), static_cast<long long>(k_mds_));
}

Rational MdsScheme::load() const {
  long long sent = 0;
  for (int j = t_ + 1; j <= K(); ++j) sent += static_cast<long long>(binom(K(), j));
  return Rational(static_cast<long long>(L()) * sent, static_cast<long long>(k_mds_));
}

std::string MdsScheme::corner_text() const { return "t=" + std::to_string(t_); }

// ---------------------------------------------------------------- corner

CornerScheme::CornerScheme(int K, int N, int L) : Scheme(SchemeKind::kCorner, K, N, L) {
  if (K < 2) throw InputError("mds-corner needs K >= 2");
  set_field_for(static_cast<std::size_t>(L) + static_cast<std::size_t>(K) * static_cast<std::size_t>(N));
}

Label CornerScheme::label(std::size_t j) const {
  const auto k = static_cast<std::size_t>(K());
  if (j >= 2 * k) throw std::out_of_range("label index");
  Label l;
  for (int u = 1; u <= K(); ++u)
    if (j >= k || static_cast<std::size_t>(u) != j + 1) l.users.push_back(u);
  if (j >= k) l.tag = static_cast<int>(j - k) + 1;
  return l;
}

bool CornerScheme::cached_by(int user, std::size_t j) const {
  return j >= static_cast<std::size_t>(K()) || static_cast<std::size_t>(user) != j + 1;
}

std::vector<PlannedMessage> CornerScheme::plan_delivery(const DemandMatrix& d, UniformSource&) const {
  validate_demands(d, K(), N(), L());
  PlannedMessage m{static_cast<std::size_t>(L()), Coding::kCauchy, {}};
  const auto k = static_cast<std::size_t>(K());
  for (int i = 1; i <= N(); ++i) {
    for (int u = 1; u <= K(); ++u) {
      const auto& du = d.of(u);
      const bool wants = std::binary_search(du.begin(), du.end(), i);
      const std::size_t j = static_cast<std::size_t>(u - 1) + (wants ? 0 : k);
      m.entries.push_back({i, j});
    }
  }
  return {m};
}

Rational CornerScheme::memory() const { return Rational(static_cast<long long>(2 * K() - 1) * N(), 2 * K()); }

Rational CornerScheme::load() const { return Rational(L(), 2 * K()); }

// ---------------------------------------------------------------- factory

std::unique_ptr<Scheme> make_scheme(const SchemeConfig& c) {
  switch (c.kind) {
    case SchemeKind::kBaseline:
      return std::make_unique<BaselineScheme>(c.K, c.N, c.L, c.memory);
    case SchemeKind::kMan:
      return std::make_unique<ManScheme>(c.K, c.N, c.L, c.t_prime, c.man_precoding, c.subpacketization_cap);
    case SchemeKind::kVirtualUser:
      return std::make_unique<VirtualUserScheme>(c.K, c.N, c.L, c.t, c.vu_shuffle, c.subpacketization_cap);
    case SchemeKind::kMds:
      return std::make_unique<MdsScheme>(c.K, c.N, c.L, c.t);
    case SchemeKind::kCorner:
      return std::make_unique<CornerScheme>(c.K, c.N, c.L);
  }
  throw InputError("unknown scheme kind");
}

}  // namespace pcl
