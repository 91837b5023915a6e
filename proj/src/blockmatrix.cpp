#include "kamflow/blockmatrix.hpp"

#include <cmath>

namespace kamflow {

double WeightedVector::norm_s(const ClusterSet& clusters, double s) const {
  double acc = 0.0;
  for (int m = 0; m < num_modes(); ++m) {
    const double w = clusters.weight_of(m);
    const double a2 = std::norm(v[2 * m]) + std::norm(v[2 * m + 1]);
    acc += a2 * std::pow(w, 2.0 * s);
  }
  return std::sqrt(acc);
}

bool WeightedVector::is_zero(double tol) const {
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > tol) return false;
  return true;
}

template <typename Scalar>
const typename BlockMat<Scalar>::Mat* BlockMat<Scalar>::block(int ca, int cb) const {
  auto it = blocks_.find({ca, cb});
  return it == blocks_.end() ? nullptr : &it->second;
}

template <typename Scalar>
typename BlockMat<Scalar>::Mat& BlockMat<Scalar>::block_ref(int ca, int cb) {
  auto it = blocks_.find({ca, cb});
  if (it != blocks_.end()) return it->second;
  Mat m = Mat::Zero(2 * clusters_->cluster_size(ca), 2 * clusters_->cluster_size(cb));
  return blocks_.emplace(std::make_pair(ca, cb), std::move(m)).first->second;
}

template <typename Scalar>
void BlockMat<Scalar>::set_block(int ca, int cb, Mat m) {
  if (m.rows() != 2 * clusters_->cluster_size(ca) || m.cols() != 2 * clusters_->cluster_size(cb))
    throw std::invalid_argument("BlockMat::set_block: dimension mismatch");
  blocks_[{ca, cb}] = std::move(m);
}

template <typename Scalar>
BlockMat<Scalar>& BlockMat<Scalar>::operator+=(const BlockMat& other) {
  for (const auto& [key, m] : other.blocks_) {
    auto it = blocks_.find(key);
    if (it == blocks_.end())
      blocks_.emplace(key, m);
    else
      it->second += m;
  }
  return *this;
}

template <typename Scalar>
BlockMat<Scalar>& BlockMat<Scalar>::operator*=(Scalar c) {
  for (auto& [key, m] : blocks_) m *= c;
  return *this;
}

template <typename Scalar>
BlockMat<Scalar> BlockMat<Scalar>::operator+(const BlockMat& other) const {
  BlockMat out = *this;
  out += other;
  return out;
}

template <typename Scalar>
BlockMat<Scalar> BlockMat<Scalar>::operator-() const {
  BlockMat out = *this;
  out *= Scalar(-1);
  return out;
}

template <typename Scalar>
void BlockMat<Scalar>::prune(double tol) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    if (it->second.cwiseAbs().maxCoeff() <= tol)
      it = blocks_.erase(it);
    else
      ++it;
  }
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> BlockMat<Scalar>::entry(int mode_a, int mode_b) const {
  const int ca = clusters_->cluster_of(mode_a), cb = clusters_->cluster_of(mode_b);
  const Mat* b = block(ca, cb);
  Eigen::Matrix<Scalar, 2, 2> e = Eigen::Matrix<Scalar, 2, 2>::Zero();
  if (!b) return e;
  const int ia = mode_a - clusters_->cluster_offset(ca);
  const int ib = mode_b - clusters_->cluster_offset(cb);
  e = b->template block<2, 2>(2 * ia, 2 * ib);
  return e;
}

template <typename Scalar>
void BlockMat<Scalar>::add_entry(int mode_a, int mode_b, const Eigen::Matrix<Scalar, 2, 2>& e) {
  const int ca = clusters_->cluster_of(mode_a), cb = clusters_->cluster_of(mode_b);
  Mat& b = block_ref(ca, cb);
  const int ia = mode_a - clusters_->cluster_offset(ca);
  const int ib = mode_b - clusters_->cluster_offset(cb);
  b.template block<2, 2>(2 * ia, 2 * ib) += e;
}

template <typename Scalar>
typename BlockMat<Scalar>::Mat BlockMat<Scalar>::to_dense() const {
  const int n = 2 * clusters_->num_modes();
  Mat out = Mat::Zero(n, n);
  for (const auto& [key, m] : blocks_) {
    const int ra = 2 * clusters_->cluster_offset(key.first);
    const int cb = 2 * clusters_->cluster_offset(key.second);
    out.block(ra, cb, m.rows(), m.cols()) = m;
  }
  return out;
}

template class BlockMat<double>;
template class BlockMat<complexd>;

namespace {

template <typename Mat>
double spectral_norm_impl(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= 64)
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
  // power iteration on M* M
  using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  Vec x = Vec::Ones(m.cols());
  x.normalize();
  double last = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec y = m.adjoint() * (m * x);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    const double cur = std::sqrt(ny);
    if (std::abs(cur - last) <= 1e-12 * std::max(1.0, cur)) return cur;
    last = cur;
  }
  return last;
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& m) { return spectral_norm_impl(m); }
double spectral_norm(const Eigen::MatrixXcd& m) { return spectral_norm_impl(m); }

double block_weight(int wa, int wb, double s, double beta, bool plus) {
  const double wmin = std::min(wa, wb);
  const double gap = std::abs(static_cast<double>(wa) * wa - static_cast<double>(wb) * wb);
  double w = std::pow(static_cast<double>(wa) * wb, beta) *
             std::pow((wmin + gap) / wmin, 0.5 * s);
  if (plus) w *= 1.0 + std::abs(wa - wb);
  return w;
}

namespace {

template <typename Scalar>
NormReport block_norm_impl(const BlockMat<Scalar>& m, double s, double beta, bool plus) {
  NormReport rep;
  const ClusterSet& cs = m.clusters();
  for (const auto& [key, b] : m.blocks()) {
    const int wa = cs.cluster_weight(key.first), wb = cs.cluster_weight(key.second);
    const double val = block_weight(wa, wb, s, beta, plus) * spectral_norm(b);
    if (val > rep.value) {
      rep.value = val;
      rep.cluster_a = key.first;
      rep.cluster_b = key.second;
    }
  }
  return rep;
}

}  // namespace

template <typename Scalar>
NormReport norm_s_beta(const BlockMat<Scalar>& m, double s, double beta) {
  return block_norm_impl(m, s, beta, false);
}

template <typename Scalar>
NormReport norm_s_beta_plus(const BlockMat<Scalar>& m, double s, double beta) {
  return block_norm_impl(m, s, beta, true);
}

template NormReport norm_s_beta<double>(const BlockMat<double>&, double, double);
template NormReport norm_s_beta<complexd>(const BlockMat<complexd>&, double, double);
template NormReport norm_s_beta_plus<double>(const BlockMat<double>&, double, double);
template NormReport norm_s_beta_plus<complexd>(const BlockMat<complexd>&, double, double);

template <typename Scalar>
BlockMat<Scalar> block_mul(const BlockMat<Scalar>& a, const BlockMat<Scalar>& b) {
  if (a.clusters().num_modes() != b.clusters().num_modes())
    throw std::invalid_argument("block_mul: incompatible truncations");
  BlockMat<Scalar> out(a.clusters_ptr());
  // group B's blocks by row cluster
  std::map<int, std::vector<std::pair<int, const typename BlockMat<Scalar>::Mat*>>> rows;
  for (const auto& [key, m] : b.blocks()) rows[key.first].push_back({key.second, &m});
  for (const auto& [akey, am] : a.blocks()) {
    auto it = rows.find(akey.second);
    if (it == rows.end()) continue;
    for (const auto& [cb, bm] : it->second) out.block_ref(akey.first, cb) += am * (*bm);
  }
  return out;
}

template BlockMat<double> block_mul<double>(const BlockMat<double>&, const BlockMat<double>&);
template BlockMat<complexd> block_mul<complexd>(const BlockMat<complexd>&,
                                                const BlockMat<complexd>&);

namespace {

template <typename Scalar>
WeightedVector apply_impl(const BlockMat<Scalar>& a, const WeightedVector& z) {
  WeightedVector out(a.clusters().num_modes());
  const ClusterSet& cs = a.clusters();
  for (const auto& [key, m] : a.blocks()) {
    const int oa = 2 * cs.cluster_offset(key.first);
    const int ob = 2 * cs.cluster_offset(key.second);
    out.v.segment(oa, m.rows()) +=
        (m.template cast<complexd>() * z.v.segment(ob, m.cols())).eval();
  }
  return out;
}

}  // namespace

WeightedVector apply(const BlockMatrix& a, const WeightedVector& z) { return apply_impl(a, z); }
WeightedVector apply(const BlockMatrixC& a, const WeightedVector& z) { return apply_impl(a, z); }

BlockMatrix outer(const WeightedVector& x, const WeightedVector& y,
                  std::shared_ptr<const ClusterSet> clusters) {
  BlockMatrix out(clusters);
  const ClusterSet& cs = *clusters;
  const Eigen::VectorXd xr = x.v.real(), yr = y.v.real();
  for (int ca = 0; ca < cs.num_clusters(); ++ca) {
    const int oa = 2 * cs.cluster_offset(ca), na = 2 * cs.cluster_size(ca);
    if (xr.segment(oa, na).cwiseAbs().maxCoeff() == 0.0) continue;
    for (int cb = 0; cb < cs.num_clusters(); ++cb) {
      const int ob = 2 * cs.cluster_offset(cb), nb = 2 * cs.cluster_size(cb);
      if (yr.segment(ob, nb).cwiseAbs().maxCoeff() == 0.0) continue;
      out.set_block(ca, cb, xr.segment(oa, na) * yr.segment(ob, nb).transpose());
    }
  }
  return out;
}

namespace {

Eigen::Matrix2cd u_matrix() {
  Eigen::Matrix2cd u;
  const double r = 1.0 / std::sqrt(2.0);
  u << complexd(r, 0), complexd(r, 0), complexd(0, -r), complexd(0, r);
  return u;
}

}  // namespace

BlockMatrixC to_complex(const BlockMatrix& a) {
  const Eigen::Matrix2cd u = u_matrix();
  BlockMatrixC out(a.clusters_ptr());
  for (const auto& [key, m] : a.blocks()) {
    const int na = static_cast<int>(m.rows()) / 2, nb = static_cast<int>(m.cols()) / 2;
    Eigen::MatrixXcd t(2 * na, 2 * nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        t.block<2, 2>(2 * i, 2 * j) =
            u.transpose() * m.block<2, 2>(2 * i, 2 * j).cast<complexd>() * u;
    out.set_block(key.first, key.second, std::move(t));
  }
  return out;
}

BlockMatrix to_real(const BlockMatrixC& a) {
  const Eigen::Matrix2cd u = u_matrix();
  const Eigen::Matrix2cd ul = u.conjugate();        // (U^T)^{-1}
  const Eigen::Matrix2cd ur = u.adjoint();          // U^{-1}
  BlockMatrix out(a.clusters_ptr());
  for (const auto& [key, m] : a.blocks()) {
    const int na = static_cast<int>(m.rows()) / 2, nb = static_cast<int>(m.cols()) / 2;
    Eigen::MatrixXd t(2 * na, 2 * nb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        t.block<2, 2>(2 * i, 2 * j) =
            (ul * m.block<2, 2>(2 * i, 2 * j) * ur).real();
    out.set_block(key.first, key.second, std::move(t));
  }
  return out;
}

BlockMatrix project_normal_form(const BlockMatrix& a) {
  BlockMatrix out(a.clusters_ptr());
  for (const auto& [key, m] : a.blocks()) {
    if (key.first != key.second) continue;
    Eigen::MatrixXd b = 0.5 * (m + m.transpose());
    // Pi = (id + conjugation by blockdiag(J)) / 2 applied entrywise
    const int n = static_cast<int>(b.rows()) / 2;
    Eigen::MatrixXd jb(2 * n, 2 * n);
    Eigen::Matrix2d jj;
    jj << 0, -1, 1, 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        jb.block<2, 2>(2 * i, 2 * j) = jj * b.block<2, 2>(2 * i, 2 * j) * jj.transpose();
    out.set_block(key.first, key.second, 0.5 * (b + jb));
  }
  return out;
}

bool is_normal_form(const BlockMatrix& a, double tol) {
  for (const auto& [key, m] : a.blocks()) {
    if (key.first != key.second) {
      if (m.cwiseAbs().maxCoeff() > tol) return false;
      continue;
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    const int n = static_cast<int>(m.rows()) / 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::Matrix2d e = m.block<2, 2>(2 * i, 2 * j);
        if (std::abs(e(0, 0) - e(1, 1)) > tol || std::abs(e(0, 1) + e(1, 0)) > tol) return false;
      }
  }
  return true;
}

double symmetry_defect(const BlockMatrix& a) {
  double d = 0.0;
  for (const auto& [key, m] : a.blocks()) {
    const auto* tr = a.block(key.second, key.first);
    if (!tr) {
      d = std::max(d, m.cwiseAbs().maxCoeff());
      continue;
    }
    d = std::max(d, (m - tr->transpose()).cwiseAbs().maxCoeff());
  }
  return d;
}

double truncated_product_constant(const ClusterSet& clusters, double beta) {
  double best = 0.0;
  for (int b = 0; b < clusters.num_clusters(); ++b) {
    double s = 0.0;
    for (int c = 0; c < clusters.num_clusters(); ++c) {
      const double wc = clusters.cluster_weight(c);
      const double dw = std::abs(clusters.cluster_weight(b) - wc);
      s += 1.0 / (std::pow(wc, 2.0 * beta) * (1.0 + dw));
    }
    best = std::max(best, s);
  }
  return best;
}

double truncated_product_plus_constant(const ClusterSet& clusters, double beta) {
  double best = 0.0;
  for (int a = 0; a < clusters.num_clusters(); ++a)
    for (int b = 0; b < clusters.num_clusters(); ++b) {
      const double dab = std::abs(clusters.cluster_weight(a) - clusters.cluster_weight(b));
      double s = 0.0;
      for (int c = 0; c < clusters.num_clusters(); ++c) {
        const double wc = clusters.cluster_weight(c);
        const double da = std::abs(clusters.cluster_weight(a) - wc);
        const double db = std::abs(clusters.cluster_weight(b) - wc);
        s += 1.0 / (std::pow(wc, 2.0 * beta) * (1.0 + da) * (1.0 + db));
      }
      best = std::max(best, (1.0 + dab) * s);
    }
  return best;
}

double truncated_apply_constant(const ClusterSet& clusters, double s, double beta) {
  const int nc = clusters.num_clusters();
  Eigen::MatrixXd g(nc, nc);
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) {
      const double wa = clusters.cluster_weight(a), wb = clusters.cluster_weight(b);
      g(a, b) = std::pow(wa, s + beta) /
                (block_weight(clusters.cluster_weight(a), clusters.cluster_weight(b), s, beta, true) *
                 std::pow(wb, s));
    }
  return spectral_norm(g);
}

Eigen::MatrixXcd normal_form_q(const BlockMatrix& a, int cluster) {
  const auto* b = a.block(cluster, cluster);
  const int n = a.clusters().cluster_size(cluster);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  if (!b) return q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix2d e = b->block<2, 2>(2 * i, 2 * j);
      const double al = 0.5 * (e(0, 0) + e(1, 1));
      const double be = 0.5 * (e(1, 0) - e(0, 1));
      q(i, j) = complexd(al, be);
    }
  return q;
}

}  // namespace kamflow
