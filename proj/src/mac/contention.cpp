#include "cascade/mac/contention.hpp"

#include <stdexcept>

namespace cascade::mac {

int contention_window(int attempt, int cw1, int cw_max)
{
  if (attempt < 1 || cw1 < 0 || cw_max < cw1)
    throw std::invalid_argument("contention_window: need attempt >= 1 and 0 <= cw1 <= cw_max");
  long long cw = cw1 + 1LL;
  for (int r = 1; r < attempt && cw <= cw_max; ++r)
    cw *= 2;
  return cw - 1 < cw_max ? static_cast<int>(cw - 1) : cw_max;
}

}  // namespace cascade::mac
