#include "cascade/oracle/oracles.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

#include "cascade/util/random.hpp"

namespace cascade::oracle {

namespace {

// Running mean and variance (Welford).
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x)
  {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
};

Estimate finish(const Moments& m, const OracleConfig& config)
{
  const double var = m.n > 1 ? m.m2 / static_cast<double>(m.n - 1) : 0.0;
  const double z = critical_value(config.confidence, config.family_size);
  return {m.mean, z * std::sqrt(var / static_cast<double>(m.n)), m.n};
}

}  // namespace

void OracleConfig::validate() const
{
  if (trials < 2)
    throw std::invalid_argument("oracle trials must be >= 2");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("oracle confidence must lie in (0,1)");
  if (family_size < 1)
    throw std::invalid_argument("oracle family size must be >= 1");
}

double critical_value(double confidence, int family_size)
{
  const double alpha = (1.0 - confidence) / family_size;
  return boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
}

Estimate mc_collision_probability(double u, double tx_time, const OracleConfig& config)
{
  config.validate();
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("u must lie in [0,1]");
  if (!(tx_time > 0.0))
    throw std::invalid_argument("tx_time must be positive");

  RandomStream rng(config.seed);
  const double rate = u / tx_time;
  Moments m;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    bool collide = rng.uniform() < u;
    if (!collide && rate > 0.0)
      collide = rng.exponential(rate) < tx_time;
    m.add(collide ? 1.0 : 0.0);
  }
  return finish(m, config);
}

Estimate mc_mean_retry_count(double p, int retry_limit, const OracleConfig& config)
{
  config.validate();
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  if (retry_limit < 1)
    throw std::invalid_argument("retry limit must be >= 1");

  RandomStream rng(config.seed);
  Moments m;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    int attempts = 1;
    while (attempts < retry_limit && rng.uniform() < p)
      ++attempts;
    m.add(attempts);
  }
  return finish(m, config);
}

double brute_force_backoff_success(double tx_time, double slot, int cw_max)
{
  if (!(tx_time >= 0.0) || !(slot > 0.0) || cw_max < 0)
    throw std::invalid_argument("brute_force_backoff_success: need tx_time >= 0, slot > 0, cw_max >= 0");
  double sum = 0.0;
  for (long n = 0; n <= cw_max; ++n) {
    const double backoff = static_cast<double>(n) * slot;
    if (backoff > tx_time)
      sum += (backoff - tx_time) / (backoff + tx_time);
  }
  return sum / static_cast<double>(cw_max + 1);
}

}  // namespace cascade::oracle
