#include "msfpop/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace msfpop {

double CounterRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next_unit_pos();
  double u2 = next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

int CounterRng::next_below(int m) {
  if (m <= 0) throw std::invalid_argument("next_below: m must be > 0");
  std::uint64_t um = static_cast<std::uint64_t>(m);
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % um;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % um);
}

}  // namespace msfpop
