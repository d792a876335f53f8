#pragma once

// Network-spec file format: JSON with top-level M, gamma, loss (default 0)
// and exactly one of
//   "elements": [{"m":1,"mp":2,"t":0.75,"phi":0.0}, ...]
//   "regular":  {"taus":[...], "phis":[...]}
// Validation reports the first violated invariant with the offending pair.

#include <optional>
#include <string>

#include "core/network.hpp"

namespace cascade {

struct LoadedSpec {
  NetworkSpec network;
  std::optional<RegularSpec> regular;  // present when the file used "regular"
};

LoadedSpec parse_spec_json(const std::string& text);
LoadedSpec load_spec_file(const std::string& path);

std::string regular_spec_to_json(const RegularSpec& spec);
std::string network_spec_to_json(const NetworkSpec& net);

}  // namespace cascade
