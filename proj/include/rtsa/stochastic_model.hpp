#pragma once

#include "rtsa/random.hpp"
#include "rtsa/types.hpp"

namespace rtsa {

/// What the iterator needs from a problem: the mean field u and a way to
/// draw the martingale increment dM_{n+1} at the current iterate.
///
/// Implementations must be immutable after construction; all randomness
/// flows through the caller's RandomStream.
class StochasticModel {
 public:
  virtual ~StochasticModel() = default;

  virtual Eigen::Index dim() const = 0;
  virtual void drift(const Vector& x, Vector& out) const = 0;
  virtual void noise(const Vector& x, RandomStream& rng, Vector& out) const = 0;
};

}  // namespace rtsa
