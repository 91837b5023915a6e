#include "kamflow/modes.hpp"

#include <algorithm>
#include <cmath>

namespace kamflow {

int harmonic_dim(int j, int d) {
  if (j < 0) throw std::invalid_argument("harmonic_dim: negative degree");
  if (d < 1) throw std::invalid_argument("harmonic_dim: dimension must be >= 1");
  if (j == 0) return 1;
  // dim = C(j+d, d) - C(j+d-2, d), harmonic polynomials of degree j in d+1 vars
  auto binom = [](long long nn, long long kk) -> long long {
    if (kk < 0 || kk > nn) return 0;
    long long r = 1;
    for (long long i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
    return r;
  };
  return static_cast<int>(binom(j + d, d) - binom(j + d - 2, d));
}

double kg_frequency(int j, int d, double m, double delta_rho) {
  if (m <= 0.0) throw std::invalid_argument("kg_frequency: mass must be positive");
  if (j < 0) throw std::invalid_argument("kg_frequency: negative degree");
  if (delta_rho < 0.0) throw std::invalid_argument("kg_frequency: negative multiplier shift");
  return std::sqrt(static_cast<double>(j) * (j + d - 1) + m + delta_rho);
}

bool AdmissibleSet::contains(const ModeId& m) const {
  return std::find_if(modes.begin(), modes.end(),
                      [&](const AdmissibleMode& am) { return am.mode == m; }) != modes.end();
}

bool AdmissibleSet::contains_degree(int j) const {
  return std::find_if(modes.begin(), modes.end(),
                      [&](const AdmissibleMode& am) { return am.mode.j == j; }) != modes.end();
}

void AdmissibleSet::validate(int d) const {
  for (size_t i = 0; i < modes.size(); ++i) {
    const ModeId& m = modes[i].mode;
    if (m.j < 0) throw std::invalid_argument("admissible set: negative degree");
    if (m.ell < 1 || m.ell > harmonic_dim(m.j, d))
      throw std::invalid_argument("admissible set: order outside eigenspace dimension");
    for (size_t k = i + 1; k < modes.size(); ++k)
      if (modes[k].mode.j == m.j)
        throw std::invalid_argument("admissible set: two modes share a degree");
    const double I = modes[i].action;
    if (!(I >= 1.0 && I <= 2.0))
      throw std::invalid_argument("admissible set: action outside [1,2]");
  }
}

double AdmissibleSet::max_weight() const {
  if (modes.empty()) throw std::invalid_argument("admissible set is empty");
  int w = 0;
  for (const auto& am : modes) w = std::max(w, am.mode.j);
  return static_cast<double>(w);
}

ClusterSet ClusterSet::build_kg(int d, int w_max, const AdmissibleSet& admissible) {
  if (w_max < 1) throw std::invalid_argument("ClusterSet: W_max must be >= 1");
  admissible.validate(d);
  ClusterSet cs;
  cs.d_ = d;
  cs.w_max_ = w_max;
  for (int j = 1; j <= w_max; ++j) {
    const int dim = harmonic_dim(j, d);
    std::vector<ModeId> kept;
    for (int ell = 1; ell <= dim; ++ell) {
      ModeId m{j, ell};
      if (!admissible.contains(m)) kept.push_back(m);
    }
    if (kept.empty()) continue;
    cs.cluster_weight_.push_back(j);
    cs.cluster_size_.push_back(static_cast<int>(kept.size()));
    cs.cluster_offset_.push_back(static_cast<int>(cs.modes_.size()));
    for (const auto& m : kept) {
      cs.cluster_idx_.push_back(static_cast<int>(cs.cluster_weight_.size()) - 1);
      cs.weights_.push_back(j);
      cs.modes_.push_back(m);
    }
  }
  cs.d_star_ = std::max(1.0, static_cast<double>(d - 1));
  double cb = 0.0;
  for (int c = 0; c < cs.num_clusters(); ++c)
    cb = std::max(cb, cs.cluster_size_[c] / std::pow(cs.cluster_weight_[c], cs.d_star_));
  cs.c_b_ = cb;
  return cs;
}

int ClusterSet::cluster_of_weight(int w) const {
  auto it = std::lower_bound(cluster_weight_.begin(), cluster_weight_.end(), w);
  if (it == cluster_weight_.end() || *it != w) return -1;
  return static_cast<int>(it - cluster_weight_.begin());
}

int ClusterSet::index_of(const ModeId& m) const {
  const int c = cluster_of_weight(m.j);
  if (c < 0) return -1;
  const int off = cluster_offset_[c];
  for (int k = 0; k < cluster_size_[c]; ++k)
    if (modes_[off + k] == m) return off + k;
  return -1;
}

SpectrumModel SpectrumModel::kg(const ClusterSet& clusters, double m, double delta,
                                const AdmissibleSet& admissible) {
  SpectrumModel sm;
  sm.gamma = 1.0;
  sm.c0 = 0.5;
  sm.delta0 = delta0_kg(delta, clusters.dim(), m, admissible);
  sm.lambda.resize(clusters.num_modes());
  for (int i = 0; i < clusters.num_modes(); ++i)
    sm.lambda[i] = kg_frequency(clusters.mode(i).j, clusters.dim(), m);
  return sm;
}

bool SpectrumModel::check_asymptotics(const ClusterSet& clusters, std::string* why) const {
  for (int c = 0; c < clusters.num_clusters(); ++c) {
    const double w = clusters.cluster_weight(c);
    const double la = lambda[clusters.cluster_offset(c)];
    const double wg = std::pow(w, gamma);
    if (!(c0 * wg <= la && la <= wg / c0)) {
      if (why) *why = "asymptotics bound fails at weight " + std::to_string((int)w);
      return false;
    }
  }
  for (int a = 0; a < clusters.num_clusters(); ++a)
    for (int b = 0; b < clusters.num_clusters(); ++b) {
      const double la = lambda[clusters.cluster_offset(a)];
      const double lb = lambda[clusters.cluster_offset(b)];
      const double dw = std::abs(clusters.cluster_weight(a) - clusters.cluster_weight(b));
      if (std::abs(la - lb) < c0 * dw - 1e-15) {
        if (why)
          *why = "separation bound fails at weights " +
                 std::to_string(clusters.cluster_weight(a)) + "," +
                 std::to_string(clusters.cluster_weight(b));
        return false;
      }
    }
  return true;
}

double delta0_kg(double delta, int d, double m, const AdmissibleSet& admissible) {
  if (delta < 0.0) throw std::invalid_argument("delta0_kg: delta must be nonnegative");
  const double wmax = admissible.max_weight();
  const double dstar = delta / (2.0 * std::sqrt(2.0 + d + m) * wmax);
  return dstar * dstar * dstar;
}

}  // namespace kamflow
