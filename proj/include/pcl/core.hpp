#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pcl/combinatorics.hpp"
#include "pcl/galois.hpp"
#include "pcl/rational.hpp"

namespace pcl {

inline constexpr std::uint64_t kDefaultDemandCap = 1'000'000;

struct SystemParams {
  int K = 0;
  int N = 0;
  int L = 0;
  Rational M = 0;
  std::size_t B = 0;

  // Throws InputError unless 1 <= L <= N, K >= 1 and 0 <= M <= N.
  void validate() const;
};

// 1-based, strictly increasing file indices.
using DemandVector = std::vector<int>;

struct DemandMatrix {
  std::vector<DemandVector> rows;

  int users() const { return static_cast<int>(rows.size()); }
  // 1-based user index.
  const DemandVector& of(int user) const { return rows.at(static_cast<std::size_t>(user - 1)); }
  bool operator==(const DemandMatrix&) const = default;
  auto operator<=>(const DemandMatrix&) const = default;
};

// Throws InputError when the shape or entries are invalid.
void validate_demands(const DemandMatrix& d, int K, int N, int L);

// Accepts {"demands": [[..],..]} or a bare array. Throws InputError.
DemandMatrix parse_demand_matrix(const std::string& json_text);
std::string to_json_string(const DemandMatrix& d);
std::string to_string(const DemandVector& d);
std::string to_string(const DemandMatrix& d);

// All C(N, L) demand vectors in lexicographic order.
std::vector<DemandVector> all_demand_vectors(int N, int L);

// All C(N,L)^K demand matrices; user 1 varies slowest.
// Throws GuardRailError when the count exceeds `cap`.
std::vector<DemandMatrix> enumerate_demand_matrices(int K, int N, int L,
                                                    std::uint64_t cap = kDefaultDemandCap);

// Matrices whose row `user` equals `d_k`, same ordering.
std::vector<DemandMatrix> enumerate_with_fixed_row(int K, int N, int L, int user,
                                                   const DemandVector& d_k,
                                                   std::uint64_t cap = kDefaultDemandCap);

DemandMatrix random_demand_matrix(int K, int N, int L, UniformSource& src);

struct FileLibrary {
  int N = 0;
  std::size_t B = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<Symbol>> files;

  // File i is drawn from its own Rng stream.
  static FileLibrary generate(int N, std::size_t B, const Field& field, std::uint64_t seed);
  const std::vector<Symbol>& file(int i) const { return files.at(static_cast<std::size_t>(i - 1)); }
};

// A coded piece S^i_j: 1-based file, 0-based piece.
struct PieceRef {
  int file = 0;
  std::size_t piece = 0;
  auto operator<=>(const PieceRef&) const = default;
};

// Label of a subfile: the user set caching it, plus a tag that tells the
// corner scheme's ([K], q) labels apart.
struct Label {
  Subset users;
  int tag = 0;
  bool operator==(const Label&) const = default;
};

// Server-side identity of a transmitted subfile.
struct SubfileId {
  int file = 0;
  std::size_t label = 0;
  std::size_t piece = 0;
  auto operator<=>(const SubfileId&) const = default;
};

// Z_k: metadata lists the cached pieces sorted by (file, piece), which names
// pieces but not the labels behind them.
struct CacheState {
  int user = 0;
  std::vector<PieceRef> metadata;
  std::vector<std::vector<Symbol>> content;

  std::size_t symbol_count() const;
};

enum class Coding { kCauchy, kXor, kIdentity };
std::string to_string(Coding c);

struct Message {
  Coding coding = Coding::kCauchy;
  std::size_t rows = 0;
  Matrix coefficients;
  std::vector<PieceRef> entries;
  std::vector<std::vector<Symbol>> payload;
};

struct DeliveryPacket {
  std::vector<Message> messages;

  std::size_t payload_symbols() const;
  std::size_t metadata_entries() const;
};

struct ViewEntry {
  int file = 0;
  bool cached = false;
  std::size_t piece = 0;
  auto operator<=>(const ViewEntry&) const = default;
};

struct MessageView {
  Coding coding = Coding::kCauchy;
  std::size_t rows = 0;
  std::vector<ViewEntry> entries;
};

// Everything user k holds after delivery, stripped of symbol values.
struct UserView {
  int user = 0;
  DemandVector d_k;
  std::vector<PieceRef> cache_metadata;
  std::vector<MessageView> messages;
};

UserView build_user_view(int k, const std::vector<PieceRef>& cache_metadata, const DemandVector& d_k,
                         const DeliveryPacket& packet);
UserView build_user_view(int k, const CacheState& cache, const DemandVector& d_k,
                         const DeliveryPacket& packet);

}  // namespace pcl
