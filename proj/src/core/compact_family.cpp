#include "rtsa/compact_family.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rtsa {

const char* to_string(CompactShape shape) noexcept {
  return shape == CompactShape::box ? "box" : "ball";
}

CompactFamily::CompactFamily(CompactShape shape, Vector center, Vector extent0,
                             double growth)
    : shape_(shape), center_(std::move(center)), extent0_(std::move(extent0)), growth_(growth) {
  if (center_.size() == 0) throw std::invalid_argument("compact family: empty center");
  if (!center_.allFinite()) throw std::invalid_argument("compact family: non-finite center");
  if (!(growth_ > 1.0) || !std::isfinite(growth_)) {
    throw std::invalid_argument("compact family: growth must be > 1");
  }
  if (extent0_.size() == 0 || !extent0_.allFinite() || !(extent0_.minCoeff() > 0.0)) {
    throw std::invalid_argument("compact family: extents must be positive and finite");
  }
  for (std::size_t j = 0; j < scales_.size(); ++j) scales_[j] = std::pow(growth_, static_cast<double>(j));
}

CompactFamily CompactFamily::balls(Vector center, double r0, double growth) {
  return CompactFamily(CompactShape::ball, std::move(center), Vector::Constant(1, r0), growth);
}

CompactFamily CompactFamily::boxes(Vector center, Vector half_widths0, double growth) {
  if (half_widths0.size() != center.size()) {
    throw std::invalid_argument("compact family: half-width dimension mismatch");
  }
  return CompactFamily(CompactShape::box, std::move(center), std::move(half_widths0), growth);
}

double CompactFamily::scale(std::size_t j) const {
  if (j < scales_.size()) return scales_[j];
  return std::pow(growth_, static_cast<double>(j));
}

double CompactFamily::radius(std::size_t j) const { return extent0_.maxCoeff() * scale(j); }

bool CompactFamily::contains(std::size_t j, const Vector& x) const {
  const double s = scale(j);
  if (shape_ == CompactShape::ball) {
    const double r = extent0_[0] * s;
    const double d2 = (x - center_).squaredNorm();
    if (std::isfinite(d2) && std::isfinite(r * r)) return d2 <= r * r;
    return (x - center_).stableNorm() <= r;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(std::abs(x[i] - center_[i]) <= extent0_[i] * s)) return false;
  }
  return true;
}

double CompactFamily::distance_to_boundary(std::size_t j, const Vector& x) const {
  const double s = scale(j);
  if (shape_ == CompactShape::ball) {
    return std::abs(extent0_[0] * s - (x - center_).stableNorm());
  }
  const Vector offset = ((x - center_).cwiseAbs() - extent0_ * s).eval();
  if (offset.maxCoeff() <= 0.0) return -offset.maxCoeff();  // inside: nearest face
  return offset.cwiseMax(0.0).norm();
}

std::size_t CompactFamily::member_index(const Vector& x) const {
  if (!x.allFinite()) throw std::invalid_argument("member_index: non-finite point");
  std::size_t j = 0;
  while (!contains(j, x)) ++j;  // terminates: scale(j) grows to +inf
  return j;
}

}  // namespace rtsa

namespace rtsa {

CompactShape compact_shape_from_string(const std::string& name) {
  if (name == "ball") return CompactShape::ball;
  if (name == "box") return CompactShape::box;
  throw std::invalid_argument("unknown compact shape '" + name + "'");
}

CompactFamily make_family(const CompactSpec& spec, const Vector& root) {
  const Eigen::Index d = root.size();
  Vector center = root;
  if (!spec.center.empty()) {
    if (spec.center.size() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("compact center: expected " + std::to_string(d) + " coordinates");
    }
    center = Eigen::Map<const Vector>(spec.center.data(), d);
  }
  if (spec.shape == CompactShape::ball) return CompactFamily::balls(center, spec.r0, spec.growth);
  Vector widths = Vector::Constant(d, spec.r0);
  if (!spec.half_widths.empty()) {
    if (spec.half_widths.size() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("compact half_widths: expected " + std::to_string(d) + " values");
    }
    widths = Eigen::Map<const Vector>(spec.half_widths.data(), d);
  }
  return CompactFamily::boxes(center, widths, spec.growth);
}

}  // namespace rtsa
