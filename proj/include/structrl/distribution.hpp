#pragma once

#include <span>
#include <vector>

namespace structrl {

/// Evenly spaced fixed support z_i = v_min + i * delta_z.
struct Support {
  double v_min;
  double v_max;
  int n_atoms;
  double delta_z;
  std::vector<double> atoms;

  /// Throws std::invalid_argument unless v_min < v_max and n_atoms >= 2.
  Support(double v_min, double v_max, int n_atoms);

  /// Index of the support atom nearest to v (clipped into [v_min, v_max]).
  int nearest_atom(double v) const;
};

/// Probability vector over the atoms of some Support.
struct CategoricalDist {
  std::vector<double> probs;
};

CategoricalDist uniform_dist(const Support& sup);
CategoricalDist one_hot(const Support& sup, int atom_index);

/// Sum of probs is within tol of 1 and every entry is non-negative.
bool is_valid_dist(const CategoricalDist& dist, double tol = 1e-9);

double mean(const CategoricalDist& dist, const Support& sup);

/// Standard deviation, clamped at zero against negative round-off.
double stddev(const CategoricalDist& dist, const Support& sup);

/// Categorical projection: each (atom, mass) pair is clipped into
/// [v_min, v_max] and its mass split linearly between the two nearest
/// support atoms. Atoms landing exactly on a support atom keep their mass
/// whole. Mass is renormalized (and the event reported on stderr) only if
/// accumulated drift exceeds 1e-12.
CategoricalDist project(std::span<const double> target_atoms,
                        std::span<const double> target_probs,
                        const Support& sup);

struct BellmanTarget {
  std::vector<double> atoms;
  std::vector<double> probs;
};

/// Distributional Bellman target: unit mass at r when terminal, otherwise
/// the source distribution on shifted atoms r + gamma * z_i.
BellmanTarget bellman_target(const CategoricalDist& dist, double r,
                             double gamma, bool terminal, const Support& sup);

}  // namespace structrl
