#include "structrl/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace structrl {

Support::Support(double v_min_, double v_max_, int n_atoms_)
    : v_min(v_min_), v_max(v_max_), n_atoms(n_atoms_) {
  if (!(v_min < v_max))
    throw std::invalid_argument("support requires v_min < v_max");
  if (n_atoms < 2) throw std::invalid_argument("support requires n_atoms >= 2");
  delta_z = (v_max - v_min) / (n_atoms - 1);
  atoms.resize(n_atoms);
  for (int i = 0; i < n_atoms; ++i) atoms[i] = v_min + i * delta_z;
}

int Support::nearest_atom(double v) const {
  const double clipped = std::clamp(v, v_min, v_max);
  const int i = static_cast<int>(std::llround((clipped - v_min) / delta_z));
  return std::clamp(i, 0, n_atoms - 1);
}

CategoricalDist uniform_dist(const Support& sup) {
  return CategoricalDist{
      std::vector<double>(sup.n_atoms, 1.0 / static_cast<double>(sup.n_atoms))};
}

CategoricalDist one_hot(const Support& sup, int atom_index) {
  CategoricalDist d{std::vector<double>(sup.n_atoms, 0.0)};
  d.probs.at(atom_index) = 1.0;
  return d;
}

bool is_valid_dist(const CategoricalDist& dist, double tol) {
  double total = 0.0;
  for (double p : dist.probs) {
    if (p < 0.0) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tol;
}

double mean(const CategoricalDist& dist, const Support& sup) {
  double m = 0.0;
  for (int i = 0; i < sup.n_atoms; ++i) m += dist.probs[i] * sup.atoms[i];
  return m;
}

double stddev(const CategoricalDist& dist, const Support& sup) {
  double m = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < sup.n_atoms; ++i) {
    const double z = sup.atoms[i];
    m += dist.probs[i] * z;
    m2 += dist.probs[i] * z * z;
  }
  return std::sqrt(std::max(0.0, m2 - m * m));
}

CategoricalDist project(std::span<const double> target_atoms,
                        std::span<const double> target_probs,
                        const Support& sup) {
  if (target_atoms.size() != target_probs.size())
    throw std::invalid_argument("project: atoms/probs length mismatch");
  CategoricalDist out{std::vector<double>(sup.n_atoms, 0.0)};
  for (std::size_t j = 0; j < target_atoms.size(); ++j) {
    const double p = target_probs[j];
    if (p == 0.0) continue;
    const double t = std::clamp(target_atoms[j], sup.v_min, sup.v_max);
    const double b = (t - sup.v_min) / sup.delta_z;
    const double r = std::round(b);
    if (std::abs(b - r) <= 1e-9) {
      // On a support atom: full mass, no 0/0 in the interpolation weights.
      out.probs[static_cast<int>(r)] += p;
      continue;
    }
    const int lo = static_cast<int>(std::floor(b));
    const int hi = lo + 1;
    out.probs[lo] += p * (hi - b);
    out.probs[hi] += p * (b - lo);
  }
  double total = 0.0;
  for (double p : out.probs) total += p;
  if (total <= 0.0)
    throw std::invalid_argument("project: target carries no probability mass");
  if (std::abs(total - 1.0) > 1e-12) {
    std::cerr << "structrl: projection mass drift " << (total - 1.0)
              << ", renormalizing\n";
    for (double& p : out.probs) p /= total;
  }
  return out;
}

BellmanTarget bellman_target(const CategoricalDist& dist, double r,
                             double gamma, bool terminal, const Support& sup) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("bellman_target: gamma outside [0, 1]");
  if (terminal) return BellmanTarget{{r}, {1.0}};
  BellmanTarget target;
  target.atoms.resize(sup.n_atoms);
  for (int i = 0; i < sup.n_atoms; ++i)
    target.atoms[i] = r + gamma * sup.atoms[i];
  target.probs = dist.probs;
  return target;
}

}  // namespace structrl
