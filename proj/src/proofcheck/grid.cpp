#include <stdexcept>

#include "rtsa/proofcheck.hpp"

namespace rtsa::proofcheck {

Grid::Grid(StepIndex n, GainSchedule schedule) : n_(n), schedule_(schedule), values_{0.0} {}

void Grid::extend(std::size_t k) const {
  if (values_.size() > k) return;
  values_.reserve(k + 1);
  for (std::size_t i = values_.size(); i <= k; ++i) values_.push_back(values_[i - 1] + gain(i));
}

double Grid::s(std::size_t k) const {
  extend(k);
  return values_[k];
}

std::size_t Grid::first_index_reaching(double target) const {
  std::size_t k = 0;
  while (s(k) < target) {
    ++k;
    if (k > 2'000'000'000ULL) throw std::length_error("grid: target beyond reachable horizon");
  }
  return k;
}

}  // namespace rtsa::proofcheck
