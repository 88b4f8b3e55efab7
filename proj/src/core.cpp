#include "pcl/core.hpp"

#include <algorithm>

#include "json.hpp"

#include "pcl/errors.hpp"

namespace pcl {

void SystemParams::validate() const {
  if (K < 1) throw InputError("K must be at least 1");
  if (N < 1) throw InputError("N must be at least 1");
  if (L < 1 || L > N) throw InputError("L must satisfy 1 <= L <= N");
  if (M < 0 || M > N) throw InputError("M must satisfy 0 <= M <= N");
}

void validate_demands(const DemandMatrix& d, int K, int N, int L) {
  if (d.users() != K) {
    throw InputError("demand matrix has " + std::to_string(d.users()) + " rows, expected K=" +
                     std::to_string(K));
  }
  for (int k = 1; k <= K; ++k) {
    const auto& row = d.of(k);
    if (static_cast<int>(row.size()) != L) {
      throw InputError("user " + std::to_string(k) + " requests " + std::to_string(row.size()) +
                       " files, expected L=" + std::to_string(L));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] < 1 || row[j] > N)
        throw InputError("user " + std::to_string(k) + " requests file " + std::to_string(row[j]) +
                         " outside [1, " + std::to_string(N) + "]");
      if (j > 0 && row[j] <= row[j - 1])
        throw InputError("demands of user " + std::to_string(k) + " must be strictly increasing");
    }
  }
}

DemandMatrix parse_demand_matrix(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid demand JSON: ") + e.what());
  }
  if (j.is_object()) {
    if (!j.contains("demands")) throw InputError("demand JSON object lacks \"demands\"");
    j = j["demands"];
  }
  if (!j.is_array()) throw InputError("demands must be an array of arrays");
  DemandMatrix d;
  for (const auto& row : j) {
    if (!row.is_array()) throw InputError("each demand row must be an array");
    DemandVector v;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw InputError("file indices must be integers");
      v.push_back(x.get<int>());
    }
    d.rows.push_back(std::move(v));
  }
  return d;
}

std::string to_json_string(const DemandMatrix& d) {
  nlohmann::json j;
  j["demands"] = d.rows;
  return j.dump();
}

std::string to_string(const DemandVector& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

std::string to_string(const DemandMatrix& d) {
  std::string s = "[";
  for (std::size_t k = 0; k < d.rows.size(); ++k) {
    if (k) s += ";";
    for (std::size_t j = 0; j < d.rows[k].size(); ++j) s += (j ? "," : "") + std::to_string(d.rows[k][j]);
  }
  return s + "]";
}

std::vector<DemandVector> all_demand_vectors(int N, int L) {
  const std::uint64_t c = binom(N, L);
  std::vector<DemandVector> out;
  out.reserve(c);
  for (std::uint64_t j = 1; j <= c; ++j) out.push_back(ksubset_unrank(N, L, j));
  return out;
}

namespace {

std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t cap, const std::string& what) {
  std::uint64_t total = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && total > cap / base) {
      throw GuardRailError(what + " exceeds the cap of " + std::to_string(cap) +
                           "; use sampling mode instead");
    }
    total *= base;
  }
  if (total > cap) throw GuardRailError(what + " exceeds the cap of " + std::to_string(cap));
  return total;
}

}  // namespace

std::vector<DemandMatrix> enumerate_demand_matrices(int K, int N, int L, std::uint64_t cap) {
  SystemParams{K, N, L, 0, 0}.validate();
  const auto vectors = all_demand_vectors(N, L);
  const std::uint64_t total = checked_power(vectors.size(), K, cap, "number of demand matrices");
  std::vector<DemandMatrix> out;
  out.reserve(total);
  std::vector<std::size_t> digit(static_cast<std::size_t>(K), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    DemandMatrix d;
    for (int k = 0; k < K; ++k) d.rows.push_back(vectors[digit[k]]);
    out.push_back(std::move(d));
    for (int k = K - 1; k >= 0; --k) {
      if (++digit[k] < vectors.size()) break;
      digit[k] = 0;
    }
  }
  return out;
}

std::vector<DemandMatrix> enumerate_with_fixed_row(int K, int N, int L, int user,
                                                   const DemandVector& d_k, std::uint64_t cap) {
  if (user < 1 || user > K) throw InputError("user index out of range");
  if (K == 1) {
    DemandMatrix d{{d_k}};
    validate_demands(d, K, N, L);
    return {d};
  }
  auto others = enumerate_demand_matrices(K - 1, N, L, cap);
  std::vector<DemandMatrix> out;
  out.reserve(others.size());
  for (auto& o : others) {
    o.rows.insert(o.rows.begin() + (user - 1), d_k);
    out.push_back(std::move(o));
  }
  if (!out.empty()) validate_demands(out.front(), K, N, L);
  return out;
}

DemandMatrix random_demand_matrix(int K, int N, int L, UniformSource& src) {
  const std::uint64_t c = binom(N, L);
  DemandMatrix d;
  for (int k = 0; k < K; ++k) d.rows.push_back(ksubset_unrank(N, L, src.uniform(c) + 1));
  return d;
}

FileLibrary FileLibrary::generate(int N, std::size_t B, const Field& field, std::uint64_t seed) {
  FileLibrary lib;
  lib.N = N;
  lib.B = B;
  lib.seed = seed;
  const Rng root(seed, 0x11b);
  for (int i = 1; i <= N; ++i) {
    Rng r = root.split(static_cast<std::uint64_t>(i));
    std::vector<Symbol> f(B);
    for (auto& s : f) s = static_cast<Symbol>(r.uniform(field.order()));
    lib.files.push_back(std::move(f));
  }
  return lib;
}

std::size_t CacheState::symbol_count() const {
  std::size_t n = 0;
  for (const auto& c : content) n += c.size();
  return n;
}

std::string to_string(Coding c) {
  switch (c) {
    case Coding::kCauchy: return "cauchy";
    case Coding::kXor: return "xor";
    case Coding::kIdentity: return "identity";
  }
  return "?";
}

std::size_t DeliveryPacket::payload_symbols() const {
  std::size_t n = 0;
  for (const auto& m : messages)
    for (const auto& row : m.payload) n += row.size();
  return n;
}

std::size_t DeliveryPacket::metadata_entries() const {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.entries.size();
  return n;
}

UserView build_user_view(int k, const std::vector<PieceRef>& cache_metadata, const DemandVector& d_k,
                         const DeliveryPacket& packet) {
  UserView v;
  v.user = k;
  v.d_k = d_k;
  v.cache_metadata = cache_metadata;
  v.messages.reserve(packet.messages.size());
  for (const auto& m : packet.messages) {
    MessageView mv;
    mv.coding = m.coding;
    mv.rows = m.rows;
    mv.entries.reserve(m.entries.size());
    for (const auto& e : m.entries) {
      const bool cached = std::binary_search(cache_metadata.begin(), cache_metadata.end(), e);
      mv.entries.push_back({e.file, cached, e.piece});
    }
    v.messages.push_back(std::move(mv));
  }
  return v;
}

UserView build_user_view(int k, const CacheState& cache, const DemandVector& d_k,
                         const DeliveryPacket& packet) {
  return build_user_view(k, cache.metadata, d_k, packet);
}

}  // namespace pcl
