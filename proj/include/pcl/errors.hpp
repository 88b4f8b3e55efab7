#pragma once

#include <stdexcept>
#include <string>

namespace pcl {

// A configured size limit (sub-packetization, enumeration space, demand
// matrix count) would be exceeded.
class GuardRailError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested coefficient matrix or MDS code needs more distinct field
// elements than the field provides.
class FieldTooSmallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough coded symbols to reconstruct a stripe.
class UnrecoverableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (demand JSON, CLI values).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcl
