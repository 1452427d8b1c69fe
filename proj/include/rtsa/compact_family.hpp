#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rtsa/types.hpp"

namespace rtsa {

enum class CompactShape { ball, box };

const char* to_string(CompactShape shape) noexcept;

/// Increasing compacts K_0 ⊂ int K_1 ⊂ ... covering R^d.
///
/// K_j is either the closed Euclidean ball of radius r0 * growth^j around
/// `center`, or the closed box with half-widths half_widths0 * growth^j.
/// growth > 1 gives strict nesting and r_j -> infinity.
class CompactFamily {
 public:
  static CompactFamily balls(Vector center, double r0, double growth);
  static CompactFamily boxes(Vector center, Vector half_widths0, double growth);

  CompactShape shape() const noexcept { return shape_; }
  const Vector& center() const noexcept { return center_; }
  double growth() const noexcept { return growth_; }
  Eigen::Index dim() const noexcept { return center_.size(); }

  /// Ball radius, or the box scale factor relative to half_widths0.
  double scale(std::size_t j) const;
  /// Base ball radius r0 (balls) or base half-widths (boxes).
  const Vector& base_extent() const noexcept { return extent0_; }
  double radius(std::size_t j) const;

  bool contains(std::size_t j, const Vector& x) const;

  /// Euclidean distance from x to the boundary of K_j (inside or outside).
  double distance_to_boundary(std::size_t j, const Vector& x) const;

  /// Smallest j with x in K_j. Throws for non-finite x.
  std::size_t member_index(const Vector& x) const;

 private:
  CompactFamily(CompactShape shape, Vector center, Vector extent0, double growth);

  CompactShape shape_;
  Vector center_;
  Vector extent0_;  // size 1 for balls
  double growth_;
  std::array<double, 64> scales_{};  // growth^j, j < 64
};

}  // namespace rtsa

namespace rtsa {

/// Serialisable description of a CompactFamily.
struct CompactSpec {
  CompactShape shape = CompactShape::ball;
  std::vector<double> center;       // empty: centred on the problem root
  double r0 = 1.0;                  // balls
  std::vector<double> half_widths;  // boxes; empty: r0 on every axis
  double growth = 2.0;

  friend bool operator==(const CompactSpec&, const CompactSpec&) = default;
};

CompactShape compact_shape_from_string(const std::string& name);

/// Builds the family; `root` supplies the dimension and the default center.
CompactFamily make_family(const CompactSpec& spec, const Vector& root);

}  // namespace rtsa
