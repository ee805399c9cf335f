#pragma once

namespace cascade::mac {

/// Contention window for the r-th attempt (r = 1 is the first
/// transmission): min(2^{r-1} (cw1 + 1) - 1, cw_max).
int contention_window(int attempt, int cw1, int cw_max);

}  // namespace cascade::mac
