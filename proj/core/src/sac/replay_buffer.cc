#include "srgov/sac/replay_buffer.h"

#include <unordered_set>

#include "srgov/error.h"

namespace srgov {
namespace sac {

ReplayBuffer::ReplayBuffer(std::int64_t capacity, int state_dim,
                           int action_dim)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim) {
  if (capacity <= 0 || state_dim <= 0 || action_dim <= 0) {
    Throw(ErrorCode::kInvalidArgument, "replay buffer sizes must be positive");
  }
  s_.resize(state_dim, capacity);
  a_.resize(action_dim, capacity);
  r_.resize(capacity);
  s_next_.resize(state_dim, capacity);
  done_.resize(capacity);
}

void ReplayBuffer::Add(const Transition& t) {
  if (t.s.size() != state_dim_ || t.s_next.size() != state_dim_ ||
      t.a.size() != action_dim_) {
    Throw(ErrorCode::kInvalidArgument, "transition has the wrong dimensions");
  }
  s_.col(next_) = t.s;
  a_.col(next_) = t.a;
  r_(next_) = t.r;
  s_next_.col(next_) = t.s_next;
  done_(next_) = t.done ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

Batch ReplayBuffer::Sample(std::int64_t batch, Rng& rng) const {
  if (batch <= 0 || batch > size_) {
    Throw(ErrorCode::kInvalidArgument, "not enough transitions to sample");
  }
  Batch out;
  out.indices = SampleDistinct(size_, batch, rng);
  out.s.resize(state_dim_, batch);
  out.a.resize(action_dim_, batch);
  out.r.resize(batch);
  out.s_next.resize(state_dim_, batch);
  out.done.resize(batch);
  for (std::int64_t j = 0; j < batch; ++j) {
    const std::int64_t i = out.indices[j];
    out.s.col(j) = s_.col(i);
    out.a.col(j) = a_.col(i);
    out.r(j) = r_(i);
    out.s_next.col(j) = s_next_.col(i);
    out.done(j) = done_(i);
  }
  return out;
}

std::vector<std::int64_t> SampleDistinct(std::int64_t n, std::int64_t count,
                                         Rng& rng) {
  if (count < 0 || count > n) {
    Throw(ErrorCode::kInvalidArgument, "cannot draw that many distinct indices");
  }
  std::vector<std::int64_t> out;
  out.reserve(count);
  std::unordered_set<std::int64_t> taken;
  taken.reserve(count * 2);
  for (std::int64_t j = n - count; j < n; ++j) {
    const auto t = static_cast<std::int64_t>(
        rng.Index(static_cast<std::uint64_t>(j + 1)));
    const std::int64_t pick = taken.count(t) ? j : t;
    taken.insert(pick);
    out.push_back(pick);
  }
  return out;
}

}  // namespace sac
}  // namespace srgov
