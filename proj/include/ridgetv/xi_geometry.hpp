#pragma once

// The parameter cylinder Xi = S^{d-1} x R, signed atomic measures on it,
// and the involution (n, t) -> (-n, -t).

#include <span>
#include <utility>
#include <vector>

#include "ridgetv/common.hpp"

namespace ridgetv {

/// A point of S^{d-1}, stored as Cartesian coordinates.
class UnitVector {
 public:
  /// Throws ValidationError unless | |coords| - 1 | <= 1e-12 and d >= 1.
  explicit UnitVector(std::vector<double> coords);

  /// Normalizes an arbitrary nonzero vector.
  static UnitVector normalized(std::vector<double> v);
  /// (cos theta, sin theta).
  static UnitVector from_angle(double theta);
  /// Spherical angles (polar from +z, azimuth in the xy-plane).
  static UnitVector from_angles(double polar, double azimuth);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return coords_; }

  double dot(std::span<const double> x) const;
  UnitVector operator-() const;
  /// atan2(n_2, n_1) in (-pi, pi]; d = 2 only.
  double angle() const;

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  struct Unchecked {};
  UnitVector(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}

  std::vector<double> coords_;
};

struct XiPoint {
  UnitVector n;
  double t = 0.0;

  int dim() const { return n.dim(); }
  friend bool operator==(const XiPoint&, const XiPoint&) = default;
};

/// (n, t) -> (-n, -t). Exact: only signs change.
XiPoint involute(const XiPoint& p);

/// max(|n - n'|, |t - t'|).
double xi_distance(const XiPoint& a, const XiPoint& b);

struct Atom {
  double weight = 0.0;
  XiPoint point;
};

/// A finite signed combination of Dirac masses on Xi.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(int d);
  /// Throws ValidationError on zero or non-finite weights or mixed dimensions.
  AtomicMeasure(int d, std::vector<Atom> atoms);

  int dim() const { return d_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// Appends an atom; a zero weight is ignored.
  void add(double weight, XiPoint point);

  /// Sums atoms closer than `tol` (first-appearance order is kept) and drops
  /// masses that cancel.
  AtomicMeasure merged(double tol = Tolerances{}.merge) const;

  AtomicMeasure scaled(double s) const;
  AtomicMeasure operator-() const { return scaled(-1.0); }
  /// Concatenation followed by merging.
  friend AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b);
  friend AtomicMeasure operator-(const AtomicMeasure& a, const AtomicMeasure& b);

 private:
  int d_;
  std::vector<Atom> atoms_;
};

/// Sum of |weights| after merging coincident atoms.
double tv_norm(const AtomicMeasure& mu);

/// mu^v(E) = mu(-E): every atom is involuted, weights are kept.
AtomicMeasure reflect_measure(const AtomicMeasure& mu);

enum class SignedPart { Tau, Nu };

/// tau = (mu + (-1)^m mu^v)/2, nu = (mu + (-1)^{m+1} mu^v)/2, merged.
AtomicMeasure signed_part(const AtomicMeasure& mu, int m, SignedPart which);

/// Largest |weight| of (a - b) after merging; 0 means atom-for-atom equality.
double measure_distance(const AtomicMeasure& a, const AtomicMeasure& b);

struct CanonicalPoint {
  XiPoint point;
  int flip = 1;  // -1 when the representative is involute(p)
};

/// Representative of {p, involute(p)} whose first nonzero n-coordinate is
/// positive.
CanonicalPoint canonicalize(const XiPoint& p);

}  // namespace ridgetv
