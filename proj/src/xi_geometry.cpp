#include "ridgetv/xi_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ridgetv {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ValidationError("UnitVector: dimension must be >= 1");
  const double nrm = norm2(coords_);
  if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > Tolerances{}.unit_norm) {
    throw ValidationError("UnitVector: norm " + std::to_string(nrm) + " is not 1");
  }
}

UnitVector UnitVector::normalized(std::vector<double> v) {
  const double nrm = norm2(v);
  if (v.empty() || !(nrm > 0.0) || !std::isfinite(nrm)) {
    throw ValidationError("UnitVector::normalized: zero or non-finite vector");
  }
  for (double& x : v) x /= nrm;
  return UnitVector(std::move(v), Unchecked{});
}

UnitVector UnitVector::from_angle(double theta) {
  return UnitVector({std::cos(theta), std::sin(theta)}, Unchecked{});
}

UnitVector UnitVector::from_angles(double polar, double azimuth) {
  const double s = std::sin(polar);
  return UnitVector({s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)}, Unchecked{});
}

double UnitVector::dot(std::span<const double> x) const {
  if (x.size() != coords_.size()) {
    throw ValidationError("dimension mismatch: direction has d=" + std::to_string(coords_.size()) +
                          ", point has d=" + std::to_string(x.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * x[i];
  return s;
}

UnitVector UnitVector::operator-() const {
  std::vector<double> c(coords_);
  for (double& x : c) x = -x;
  return UnitVector(std::move(c), Unchecked{});
}

double UnitVector::angle() const {
  if (dim() != 2) throw ValidationError("UnitVector::angle: d must be 2");
  return std::atan2(coords_[1], coords_[0]);
}

XiPoint involute(const XiPoint& p) { return XiPoint{-p.n, -p.t}; }

double xi_distance(const XiPoint& a, const XiPoint& b) {
  if (a.dim() != b.dim()) throw ValidationError("xi_distance: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double e = a.n[i] - b.n[i];
    s += e * e;
  }
  return std::max(std::sqrt(s), std::abs(a.t - b.t));
}

AtomicMeasure::AtomicMeasure(int d) : d_(d) {
  if (d < 1) throw ValidationError("AtomicMeasure: d must be >= 1");
}

AtomicMeasure::AtomicMeasure(int d, std::vector<Atom> atoms) : AtomicMeasure(d) {
  atoms_.reserve(atoms.size());
  for (auto& a : atoms) {
    if (a.weight == 0.0 || !std::isfinite(a.weight)) {
      throw ValidationError("AtomicMeasure: atom weights must be finite and nonzero");
    }
    if (a.point.dim() != d_) throw ValidationError("AtomicMeasure: atom dimension mismatch");
    atoms_.push_back(std::move(a));
  }
}

void AtomicMeasure::add(double weight, XiPoint point) {
  if (point.dim() != d_) throw ValidationError("AtomicMeasure::add: dimension mismatch");
  if (!std::isfinite(weight)) throw ValidationError("AtomicMeasure::add: non-finite weight");
  if (weight == 0.0) return;
  atoms_.push_back(Atom{weight, std::move(point)});
}

AtomicMeasure AtomicMeasure::merged(double tol) const {
  std::vector<Atom> out;
  std::vector<double> mass;  // sum of |w| folded into each output atom
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Atom& b) { return xi_distance(a.point, b.point) <= tol; });
    if (it == out.end()) {
      out.push_back(a);
      mass.push_back(std::abs(a.weight));
    } else {
      it->weight += a.weight;
      mass[static_cast<std::size_t>(it - out.begin())] += std::abs(a.weight);
    }
  }
  AtomicMeasure result(d_);
  for (std::size_t k = 0; k < out.size(); ++k) {
    // Cancellation below rounding level counts as exact.
    if (std::abs(out[k].weight) <= 1e-14 * mass[k]) continue;
    result.atoms_.push_back(std::move(out[k]));
  }
  return result;
}

AtomicMeasure AtomicMeasure::scaled(double s) const {
  AtomicMeasure r(d_);
  for (const auto& a : atoms_) r.add(a.weight * s, a.point);
  return r;
}

AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.dim() != b.dim()) throw ValidationError("AtomicMeasure: dimension mismatch in sum");
  AtomicMeasure r(a.dim());
  for (const auto& x : a.atoms()) r.add(x.weight, x.point);
  for (const auto& x : b.atoms()) r.add(x.weight, x.point);
  return r.merged();
}

AtomicMeasure operator-(const AtomicMeasure& a, const AtomicMeasure& b) { return a + (-b); }

double tv_norm(const AtomicMeasure& mu) {
  const auto m = mu.merged();
  double s = 0.0;
  for (const auto& a : m.atoms()) s += std::abs(a.weight);
  return s;
}

AtomicMeasure reflect_measure(const AtomicMeasure& mu) {
  AtomicMeasure r(mu.dim());
  for (const auto& a : mu.atoms()) r.add(a.weight, involute(a.point));
  return r;
}

AtomicMeasure signed_part(const AtomicMeasure& mu, int m, SignedPart which) {
  if (m < 2) throw ValidationError("signed_part: m must be >= 2");
  const int exponent = which == SignedPart::Tau ? m : m + 1;
  const double sign = exponent % 2 == 0 ? 1.0 : -1.0;
  AtomicMeasure r(mu.dim());
  for (const auto& a : mu.atoms()) {
    r.add(0.5 * a.weight, a.point);
    r.add(0.5 * sign * a.weight, involute(a.point));
  }
  return r.merged();
}

double measure_distance(const AtomicMeasure& a, const AtomicMeasure& b) {
  double worst = 0.0;
  for (const auto& x : (a - b).atoms()) worst = std::max(worst, std::abs(x.weight));
  return worst;
}

CanonicalPoint canonicalize(const XiPoint& p) {
  for (int i = 0; i < p.dim(); ++i) {
    if (p.n[i] > 0.0) return {p, 1};
    if (p.n[i] < 0.0) return {involute(p), -1};
  }
  return {p, 1};
}

}  // namespace ridgetv
