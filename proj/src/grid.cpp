#include "kamflow/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kamflow {

int kvec_l1(const KVec& k, int n) {
  int s = 0;
  for (int i = 0; i < n; ++i) s += std::abs(k[i]);
  return s;
}

double divisor(DivisorKind kind, const KVec& k, const std::vector<double>& omega,
               std::optional<double> la, std::optional<double> lb) {
  double v = 0.0;
  for (size_t i = 0; i < omega.size(); ++i) v += k[i] * omega[i];
  switch (kind) {
    case DivisorKind::K:
      return v;
    case DivisorKind::KPlusLambda:
      if (!la) throw std::invalid_argument("divisor: lambda_a required");
      return v + *la;
    case DivisorKind::KPlusLambdaPlusLambda:
      if (!la || !lb) throw std::invalid_argument("divisor: lambda_a and lambda_b required");
      return v + *la + *lb;
    case DivisorKind::KPlusLambdaMinusLambda:
      if (!la || !lb) throw std::invalid_argument("divisor: lambda_a and lambda_b required");
      return v + *la - *lb;
  }
  throw std::logic_error("divisor: unknown kind");
}

RhoGrid RhoGrid::uniform(const std::vector<double>& lo, const std::vector<double>& hi,
                         int samples_per_axis) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("RhoGrid: inconsistent box bounds");
  if (samples_per_axis < 1) throw std::invalid_argument("RhoGrid: need >= 1 sample per axis");
  RhoGrid g;
  g.n = static_cast<int>(lo.size());
  g.lo = lo;
  g.hi = hi;
  g.box_volume = 1.0;
  for (int i = 0; i < g.n; ++i) {
    if (!(hi[i] > lo[i])) throw std::invalid_argument("RhoGrid: empty box");
    g.box_volume *= hi[i] - lo[i];
  }
  long long total = 1;
  for (int i = 0; i < g.n; ++i) total *= samples_per_axis;
  g.samples.reserve(total);
  std::vector<int> idx(g.n, 0);
  for (long long t = 0; t < total; ++t) {
    std::vector<double> p(g.n);
    long long rem = t;
    for (int i = 0; i < g.n; ++i) {
      const int q = static_cast<int>(rem % samples_per_axis);
      rem /= samples_per_axis;
      p[i] = lo[i] + (hi[i] - lo[i]) * (q + 0.5) / samples_per_axis;
    }
    g.samples.push_back(std::move(p));
  }
  g.mask.assign(g.samples.size(), 1);
  return g;
}

RhoGrid RhoGrid::unit_box(int n, int samples_per_axis) {
  return uniform(std::vector<double>(n, 1.0), std::vector<double>(n, 2.0), samples_per_axis);
}

int RhoGrid::num_retained() const {
  int c = 0;
  for (auto m : mask) c += m;
  return c;
}

double RhoGrid::retained_fraction() const {
  if (mask.empty()) return 0.0;
  return static_cast<double>(num_retained()) / static_cast<double>(mask.size());
}

std::vector<KVec> enumerate_kvecs(int n, int n_cutoff) {
  std::vector<KVec> out;
  KVec k{};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == n) {
      if (kvec_l1(k, n) > 0) out.push_back(k);
      return;
    }
    for (int v = -n_cutoff; v <= n_cutoff; ++v) {
      k[axis] = v;
      int partial = 0;
      for (int i = 0; i <= axis; ++i) partial += std::abs(k[i]);
      if (partial <= n_cutoff) rec(axis + 1);
    }
    k[axis] = 0;
  };
  rec(0);
  return out;
}

ScanResult exclusion_scan(const RhoGrid& grid,
                          const std::function<std::vector<double>(const std::vector<double>&)>& omega,
                          const SpectrumModel& spectrum, const ClusterSet& clusters,
                          double kappa, int n_cutoff) {
  if (grid.samples.empty()) throw std::invalid_argument("exclusion_scan: empty grid");
  if (!(kappa > 0.0)) throw std::invalid_argument("exclusion_scan: kappa must be positive");
  if (n_cutoff < 1) throw std::invalid_argument("exclusion_scan: N must be >= 1");

  ScanResult res;
  res.grid = grid;
  const auto kvecs = enumerate_kvecs(grid.n, n_cutoff);
  const int nc = clusters.num_clusters();
  std::vector<double> lam(nc);
  for (int c = 0; c < nc; ++c) lam[c] = spectrum.lambda[clusters.cluster_offset(c)];
  const double d0 = spectrum.delta0;

  auto note = [&](DivisorKind kind, double scaled, const KVec& k, int ca, int cb) {
    auto& w = res.ledger.min_divisor[static_cast<int>(kind)];
    if (!w.seen || scaled < w.value) {
      w.seen = true;
      w.value = scaled;
      w.k = k;
      w.cluster_a = ca;
      w.cluster_b = cb;
    }
  };

  for (size_t s = 0; s < res.grid.samples.size(); ++s) {
    if (!res.grid.mask[s]) continue;
    const auto om = omega(res.grid.samples[s]);
    bool excluded = false;
    for (const auto& k : kvecs) {
      double kw = 0.0;
      for (int i = 0; i < grid.n; ++i) kw += k[i] * om[i];
      ++res.ledger.checked;
      note(DivisorKind::K, std::abs(kw), k, -1, -1);
      if (std::abs(kw) < d0) excluded = true;
      for (int a = 0; a < nc; ++a) {
        const double wa = clusters.cluster_weight(a);
        const double v1 = kw + lam[a];
        note(DivisorKind::KPlusLambda, std::abs(v1) / wa, k, a, -1);
        if (std::abs(v1) < d0 * wa) excluded = true;
        for (int b = 0; b < nc; ++b) {
          const double wb = clusters.cluster_weight(b);
          const double v2 = kw + lam[a] + lam[b];
          note(DivisorKind::KPlusLambdaPlusLambda, std::abs(v2) / (wa + wb), k, a, b);
          if (std::abs(v2) < d0 * (wa + wb)) excluded = true;
          const double v3 = kw + lam[a] - lam[b];
          const double mel = 1.0 + std::abs(wa - wb);
          note(DivisorKind::KPlusLambdaMinusLambda, std::abs(v3) / mel, k, a, b);
          if (std::abs(v3) < kappa * mel) excluded = true;
        }
      }
      // keep scanning so the ledger sees every family even on excluded samples
    }
    if (excluded) {
      res.grid.mask[s] = 0;
      ++res.ledger.excluded_samples;
    }
  }
  return res;
}

}  // namespace kamflow
