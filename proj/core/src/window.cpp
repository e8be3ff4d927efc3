#include "actr/window.hpp"

#include <bit>

namespace actr {

void EventWindow::assign(UserId user, std::span<const Event> events, std::int64_t t_ref) {
  user_ = user;
  events_ = events;
  t_ref_ = t_ref;
  candidates_.clear();

  std::size_t cap = std::bit_ceil(std::max<std::size_t>(2 * events.size(), 4));
  table_.assign(cap, 0);
  mask_ = static_cast<std::uint32_t>(cap - 1);

  for (const Event& e : events) {
    std::uint32_t h = hash(e.track) & mask_;
    while (table_[h] != 0) {
      if (candidates_[table_[h] - 1] == e.track) break;
      h = (h + 1) & mask_;
    }
    if (table_[h] == 0) {
      candidates_.push_back(e.track);
      table_[h] = static_cast<std::uint32_t>(candidates_.size());
    }
  }
}

}  // namespace actr
