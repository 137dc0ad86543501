#pragma once

#include <string>

#include "sleepnet/network.hpp"

namespace sleepnet {

/// File/parse failures carry the offending path (and byte offset for IDX).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Paths ending in ".json" use the versioned JSON format (round-trips to
/// 1e-12); anything else uses the versioned little-endian binary format
/// (bit-exact round trip). Formats are documented in docs/formats.md.
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

void save_stats(const ActivationStats& stats, const std::string& path);
ActivationStats load_stats(const std::string& path);

}  // namespace sleepnet
