#include <gmpxx.h>

#include "rtsa/truncated_iterator.hpp"

namespace rtsa {

Vector additive_update(const Vector& x, double gain, const Vector& drift_value,
                       const Vector& noise, const Vector& x0, bool truncated) {
  // Same expression the case form uses for X_{n+1/2}.
  const Vector half = x - gain * (drift_value + noise);
  Vector out(x.size());
  const mpq_class g(gain);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const mpq_class h(half[i]);
    mpq_class p(0);
    if (truncated) p = (mpq_class(x0[i]) - h) / g;
    const mpq_class next = h + g * p;
    out[i] = next.get_d();
  }
  return out;
}

}  // namespace rtsa
