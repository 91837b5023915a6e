// Index sets, energy clusters and frequency maps for the external modes of
// a perturbed wave-type Hamiltonian on the d-sphere.
//
// Modes are labelled by (j, ell) with j the harmonic degree and ell the order
// inside the degree-j eigenspace.  All external modes of equal degree form one
// energy cluster; block matrices downstream are indexed by cluster pairs.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kamflow {

struct ModeId {
  int j = 0;    // harmonic degree
  int ell = 1;  // order, 1 <= ell <= dim of the degree-j eigenspace

  friend bool operator==(const ModeId&, const ModeId&) = default;
  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

/// Dimension of the space of spherical harmonics of degree j on S^d.
/// For d=2 this is 2j+1, for d=3 it is (j+1)^2.
int harmonic_dim(int j, int d);

/// sqrt(j(j+d-1) + m + delta_rho), the linear frequency of a degree-j mode.
/// delta_rho is the multiplier shift (0 for external modes).
double kg_frequency(int j, int d, double m, double delta_rho = 0.0);

struct AdmissibleMode {
  ModeId mode;
  double action = 1.0;  // I_a in [1,2]
};

/// The internal modes, one per harmonic degree, put in action-angle form.
struct AdmissibleSet {
  std::vector<AdmissibleMode> modes;

  int n() const { return static_cast<int>(modes.size()); }
  bool contains(const ModeId& m) const;
  bool contains_degree(int j) const;
  /// Distinct modes must carry distinct degrees.
  void validate(int d) const;
  double max_weight() const;
};

/// The truncated external index set, partitioned into clusters of equal
/// weight w_a = j.  Cluster c holds all retained modes of one degree;
/// mode k of cluster c sits at flat index offset(c)+k.
class ClusterSet {
 public:
  ClusterSet() = default;

  /// Modes of degree 1..W_max on S^d minus those claimed by the admissible
  /// set.  Degree 0 must not reach the external set: it carries weight 0,
  /// which the weighted norms cannot host, so it either belongs to A or is
  /// dropped from the truncation.
  static ClusterSet build_kg(int d, int w_max, const AdmissibleSet& admissible);

  int num_clusters() const { return static_cast<int>(cluster_weight_.size()); }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  int w_max() const { return w_max_; }
  int dim() const { return d_; }

  int cluster_weight(int c) const { return cluster_weight_[c]; }
  int cluster_size(int c) const { return cluster_size_[c]; }
  int cluster_offset(int c) const { return cluster_offset_[c]; }
  /// Cluster index holding weight w, or -1 if absent.
  int cluster_of_weight(int w) const;

  const std::vector<ModeId>& modes() const { return modes_; }
  const ModeId& mode(int flat) const { return modes_[flat]; }
  int weight_of(int flat) const { return weights_[flat]; }
  int cluster_of(int flat) const { return cluster_idx_[flat]; }
  /// Flat index of a mode id, or -1 if not in the set.
  int index_of(const ModeId& m) const;

  /// Cluster growth constants: card[a] <= C_b * w_a^{d_star}.
  double growth_constant() const { return c_b_; }
  double growth_exponent() const { return d_star_; }

 private:
  int d_ = 2;
  int w_max_ = 0;
  std::vector<ModeId> modes_;        // degree ascending, order ascending
  std::vector<int> weights_;         // per flat index
  std::vector<int> cluster_idx_;     // per flat index
  std::vector<int> cluster_weight_;  // per cluster
  std::vector<int> cluster_size_;
  std::vector<int> cluster_offset_;
  double c_b_ = 0.0;
  double d_star_ = 1.0;
};

/// Frequency data of the unperturbed normal form on the truncation together
/// with the asymptotics constants of the spectral hypotheses.
struct SpectrumModel {
  std::vector<double> lambda;  // per flat external mode index
  double gamma = 1.0;
  double c0 = 0.5;
  double delta0 = 0.0;

  static SpectrumModel kg(const ClusterSet& clusters, double m, double delta,
                          const AdmissibleSet& admissible);

  /// Checks both asymptotics inequalities on the truncation:
  /// c0 w^gamma <= lambda <= w^gamma / c0 and |la - lb| >= c0 |wa - wb|.
  bool check_asymptotics(const ClusterSet& clusters, std::string* why = nullptr) const;
};

/// (delta / (2 sqrt(2+d+m) max_A w))^3, the nonresonance constant of the
/// sphere problem.
double delta0_kg(double delta, int d, double m, const AdmissibleSet& admissible);

}  // namespace kamflow
