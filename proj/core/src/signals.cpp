#include "smartwalker/signals.hpp"

#include <cmath>
#include <stdexcept>

namespace walker {

std::size_t tick_count(SampleRate rate, double duration_s) {
  if (!(rate.hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  // Small slack keeps exact multiples (e.g. 0.1 s at 50 Hz) from picking up
  // an extra tick through floating-point round-up.
  return static_cast<std::size_t>(std::ceil(duration_s * rate.hz - 1e-9));
}

Series moving_average(const Series& s, std::size_t window) {
  if (s.empty()) throw std::invalid_argument("empty series");
  if (window == 0) throw std::invalid_argument("invalid window");

  Series out;
  out.rate = s.rate;
  out.samples.reserve(s.size());

  RollingMean acc(window);
  for (double x : s.samples) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite sample");
    out.samples.push_back(acc.push(x));
  }
  return out;
}

Series resample_zoh(std::span<const Timestamped<double>> events, SampleRate rate,
                    double duration_s) {
  if (events.empty()) throw std::invalid_argument("empty event list");
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t < events[i - 1].t)
      throw std::invalid_argument("events not sorted by time");
  }

  const std::size_t n = tick_count(rate, duration_s);
  Series out;
  out.rate = rate;
  out.samples.reserve(n);

  std::size_t next = 0;  // first event strictly after the current tick
  double held = events.front().value;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate.hz;
    while (next < events.size() && events[next].t <= t + 1e-12) {
      held = events[next].value;
      ++next;
    }
    out.samples.push_back(held);
  }
  return out;
}

RollingMean::RollingMean(std::size_t window) : buf_(window, 0.0) {
  if (window == 0) throw std::invalid_argument("invalid window");
}

double RollingMean::push(double x) {
  if (count_ < buf_.size()) {
    buf_[count_] = x;
    sum_ += x;
    ++count_;
  } else {
    sum_ += x - buf_[head_];
    buf_[head_] = x;
    head_ = (head_ + 1) % buf_.size();
  }
  return mean();
}

double RollingMean::mean() const {
  if (count_ == 0) return 0.0;
  return sum_ / static_cast<double>(count_);
}

void RollingMean::reset() {
  head_ = 0;
  count_ = 0;
  sum_ = 0.0;
}

}  // namespace walker
