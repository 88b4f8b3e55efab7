#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/simulation.hpp"

namespace pcl {

struct FileDecode {
  int file = 0;
  bool success = false;
  std::size_t pieces_from_cache = 0;
  std::size_t pieces_from_delivery = 0;
  std::vector<Symbol> data;
  std::string error;

  bool operator==(const FileDecode&) const = default;
};

struct DecodeReport {
  int user = 0;
  std::vector<FileDecode> files;
  std::size_t messages_consumed = 0;
  // Set by verify_against.
  bool bit_exact = false;

  bool all_success() const;
  bool operator==(const DecodeReport&) const = default;
};

// Recovers the files in `wanted` (normally d_k) from what user k holds.
// Only (cache, wanted, packet) and public scheme facts are read.
// Virtual-user messages are consumed only when they show exactly `rows`
// uncached entries, all from wanted files, with every other entry cached;
// other schemes peel any message whose unknown entries fit in its rows.
DecodeReport decode_user(int k, const CacheState& cache, const DemandVector& wanted,
                         const DeliveryPacket& packet, const PublicSchemeInfo& info);

// Compares every successful file against the library; sets bit_exact.
bool verify_against(DecodeReport& report, const FileLibrary& library);

}  // namespace pcl
