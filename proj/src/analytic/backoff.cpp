#include <cmath>
#include <stdexcept>

#include "cascade/analytic/dynamics.hpp"

namespace cascade::analytic {

double backoff_success_probability(double tx_time, double slot, int cw_max)
{
  if (!(tx_time >= 0.0) || !(slot > 0.0) || cw_max < 1)
    throw std::invalid_argument("backoff_success_probability: need tx_time >= 0, slot > 0, cw_max >= 1");

  // First draw whose backoff period outlasts the transmission.
  long first = static_cast<long>(std::floor(tx_time / slot));
  while (first > 0 && static_cast<double>(first - 1) * slot > tx_time)
    --first;
  while (static_cast<double>(first) * slot <= tx_time)
    ++first;
  if (first > cw_max)
    return 0.0;

  double sum = 0.0;
  for (long n = first; n <= cw_max; ++n) {
    const double backoff = static_cast<double>(n) * slot;
    sum += (backoff - tx_time) / (backoff + tx_time);
  }
  return sum / static_cast<double>(cw_max + 1);
}

}  // namespace cascade::analytic
