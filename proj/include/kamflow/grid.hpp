// Parameter boxes, divisor families and exclusion scans.
//
// The compact parameter box is sampled on a uniform cell-center grid; the
// retained fraction of the mask estimates the measure of the surviving set.
// Divisors are the four nonresonance families <k,w>, <k,w>+la,
// <k,w>+la+lb and <k,w>+la-lb; the last one carries the (1+|wa-wb|)
// second-Melnikov weight.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "kamflow/modes.hpp"

namespace kamflow {

inline constexpr int kMaxTorusDim = 4;

using KVec = std::array<int, kMaxTorusDim>;  // Fourier index, entries beyond n are 0

int kvec_l1(const KVec& k, int n);

enum class DivisorKind { K, KPlusLambda, KPlusLambdaPlusLambda, KPlusLambdaMinusLambda };

/// Value of one divisor.  omega has n entries; la/lb must be present for the
/// lambda-carrying kinds.
double divisor(DivisorKind kind, const KVec& k, const std::vector<double>& omega,
               std::optional<double> la = std::nullopt,
               std::optional<double> lb = std::nullopt);

struct RhoGrid {
  int n = 0;
  std::vector<double> lo, hi;               // box bounds per axis
  std::vector<std::vector<double>> samples; // cell centers
  std::vector<uint8_t> mask;                // 1 = retained
  double box_volume = 1.0;

  static RhoGrid uniform(const std::vector<double>& lo, const std::vector<double>& hi,
                         int samples_per_axis);
  static RhoGrid unit_box(int n, int samples_per_axis);  // [1,2]^n

  int num_samples() const { return static_cast<int>(samples.size()); }
  int num_retained() const;
  double retained_fraction() const;
  double estimated_measure() const { return retained_fraction() * box_volume; }
};

struct DivisorWitness {
  double value = 0.0;   // minimal |divisor| / threshold-weight seen
  KVec k{};
  int cluster_a = -1;
  int cluster_b = -1;
  bool seen = false;
};

struct ScanLedger {
  // indexed by DivisorKind
  std::array<DivisorWitness, 4> min_divisor{};
  long long checked = 0;
  long long excluded_samples = 0;
};

struct ScanResult {
  RhoGrid grid;
  ScanLedger ledger;
};

/// Marks excluded every retained sample at which some divisor with
/// 0 < |k|_1 <= N fails its lower bound: the second Melnikov family against
/// kappa (1+|wa-wb|), the three other families against their delta0-scaled
/// bounds.  The scan works on the cluster frequencies (one lambda per
/// cluster).  Deterministic and independent of evaluation order.
ScanResult exclusion_scan(const RhoGrid& grid,
                          const std::function<std::vector<double>(const std::vector<double>&)>& omega,
                          const SpectrumModel& spectrum, const ClusterSet& clusters,
                          double kappa, int n_cutoff);

/// Enumerates all k with 0 < |k|_1 <= N, n active axes, in a fixed order.
std::vector<KVec> enumerate_kvecs(int n, int n_cutoff);

}  // namespace kamflow
