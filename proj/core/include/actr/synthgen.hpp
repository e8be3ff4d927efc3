#pragma once

#include "actr/types.hpp"

namespace actr {

struct SynthSpec {
  std::size_t num_users = 50;
  std::size_t events_per_user = 5000;
  std::size_t catalog_size = 100000;
  double gap_exponent = 1.5;        // target power-law slope magnitude
  double session_length_mean = 18.0;
  double relisten_prob = 0.66;
  std::uint64_t seed = 0;
};

// Synthetic listening streams with power-law relistening gaps. Relistens
// replay a run of events starting at a gap drawn from h^-gap_exponent on a
// 1..168 hour support, which preserves both the gap distribution and
// within-session co-occurrence structure.
Corpus generate(const SynthSpec& spec);

}  // namespace actr
