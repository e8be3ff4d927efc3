#pragma once

#include "actr/activation.hpp"

namespace actr {

// Within-session transition probability from the last track to each
// candidate. A reference track with no outgoing transitions yields a uniform
// distribution (ranking then falls back to the recency tie-break).
ActivationVector trans_prob(const EventWindow& window);

// Softmax over negated recency rank; ranking equals last-interaction order.
ActivationVector most_recent(const EventWindow& window);

// Candidate tracks ordered by last interaction, newest first.
std::vector<TrackId> most_recent_order(const EventWindow& window);

}  // namespace actr
