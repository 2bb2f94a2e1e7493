#include "core/history.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace mutfront {

double state_u_at(const FieldState& s, double x) {
  const double g = s.front.g, h = s.front.h;
  if (x <= g || x >= h) return 0.0;
  const double xi = (x - g) / (h - g);
  const double pos = xi * static_cast<double>(s.u.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), s.u.size() - 2);
  const double f = pos - static_cast<double>(i);
  return (1.0 - f) * s.u[i] + f * s.u[i + 1];
}

double state_v_at(const FieldState& s, double L, double x) {
  const double pos = (x + L) / (2.0 * L) * static_cast<double>(s.v.size() - 1);
  if (pos <= 0.0) return s.v.front();
  if (pos >= static_cast<double>(s.v.size() - 1)) return s.v.back();
  const std::size_t i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  return (1.0 - f) * s.v[i] + f * s.v[i + 1];
}

void HistoryBuffer::reset(const FieldState& initial) {
  initial_ = initial;
  entries_.clear();
  entries_.push_back(initial);
}

void HistoryBuffer::restore(FieldState initial, std::deque<FieldState> entries) {
  if (entries.empty()) raise(Errc::internal, "history restore needs entries");
  initial_ = std::move(initial);
  entries_ = std::move(entries);
}

void HistoryBuffer::push(const FieldState& s) {
  if (!entries_.empty() && !(s.t > entries_.back().t)) {
    raise(Errc::internal, "history entries must advance in time");
  }
  entries_.push_back(s);
  const double horizon = entries_.back().t - window_;
  while (entries_.size() >= 2 && entries_[1].t <= horizon) {
    entries_.pop_front();
  }
}

HistoryBuffer::Slice HistoryBuffer::at(double t) const {
  Slice sl;
  sl.L = L_;
  if (entries_.empty() || t <= initial_.t) {
    sl.lo = sl.hi = &initial_;
    sl.w = 0.0;
    return sl;
  }
  if (t >= entries_.back().t) {
    sl.lo = sl.hi = &entries_.back();
    sl.w = 0.0;
    return sl;
  }
  if (t <= entries_.front().t) {
    sl.lo = sl.hi = &entries_.front();
    sl.w = 0.0;
    return sl;
  }
  auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                             [](const FieldState& s, double tt) { return s.t < tt; });
  sl.hi = &*it;
  sl.lo = &*(it - 1);
  sl.w = (t - sl.lo->t) / (sl.hi->t - sl.lo->t);
  return sl;
}

FrontState HistoryBuffer::Slice::front() const {
  FrontState f;
  f.g = (1.0 - w) * lo->front.g + w * hi->front.g;
  f.h = (1.0 - w) * lo->front.h + w * hi->front.h;
  f.g_dot = (1.0 - w) * lo->front.g_dot + w * hi->front.g_dot;
  f.h_dot = (1.0 - w) * lo->front.h_dot + w * hi->front.h_dot;
  return f;
}

double HistoryBuffer::Slice::u_phys(double x) const {
  if (lo == hi) return state_u_at(*lo, x);
  return (1.0 - w) * state_u_at(*lo, x) + w * state_u_at(*hi, x);
}

double HistoryBuffer::Slice::v_phys(double x) const {
  if (lo == hi) return state_v_at(*lo, L, x);
  return (1.0 - w) * state_v_at(*lo, L, x) + w * state_v_at(*hi, L, x);
}

}  // namespace mutfront
