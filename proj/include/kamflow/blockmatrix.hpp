// Weighted sequence vectors and block matrices with the |.|_{s,b} and
// |.|_{s,b+} norms.
//
// A block matrix stores one dense block per cluster pair; per mode pair the
// entry is a real 2x2 matrix (p,q layout) or, after the complex change of
// variables, a 2x2 complex matrix (xi,eta layout).  Rows and columns of the
// block at (ca,cb) are therefore 2*size(ca) by 2*size(cb).  Absent blocks
// are zero.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <optional>

#include "kamflow/modes.hpp"

namespace kamflow {

using complexd = std::complex<double>;

/// Element of the weighted sequence space: one C^2 entry (p_a, q_a) per
/// external mode, stored interleaved.  Real vectors carry zero imaginary
/// parts; Fourier coefficients of theta-series are genuinely complex.
struct WeightedVector {
  Eigen::VectorXcd v;  // size 2 * num_modes, (p,q) per mode

  WeightedVector() = default;
  explicit WeightedVector(int num_modes) { v = Eigen::VectorXcd::Zero(2 * num_modes); }

  int num_modes() const { return static_cast<int>(v.size()) / 2; }
  complexd& comp(int mode, int c) { return v[2 * mode + c]; }
  complexd comp(int mode, int c) const { return v[2 * mode + c]; }

  /// Sobolev-type norm: sqrt(sum |zeta_a|^2 w_a^{2s}).
  double norm_s(const ClusterSet& clusters, double s) const;
  bool is_zero(double tol = 0.0) const;
};

enum class BlockFlavor { Real2x2, Complex2x2 };

struct NormReport {
  double value = 0.0;
  int cluster_a = -1;  // witness pair attaining the sup
  int cluster_b = -1;
};

template <typename Scalar>
class BlockMat {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BlockMat() = default;
  explicit BlockMat(std::shared_ptr<const ClusterSet> clusters)
      : clusters_(std::move(clusters)) {}

  const ClusterSet& clusters() const { return *clusters_; }
  std::shared_ptr<const ClusterSet> clusters_ptr() const { return clusters_; }

  bool has_block(int ca, int cb) const { return blocks_.count({ca, cb}) > 0; }
  const Mat* block(int ca, int cb) const;
  /// Creates the block (zero-filled) if absent.
  Mat& block_ref(int ca, int cb);
  void set_block(int ca, int cb, Mat m);
  const std::map<std::pair<int, int>, Mat>& blocks() const { return blocks_; }
  std::map<std::pair<int, int>, Mat>& blocks() { return blocks_; }
  bool empty() const { return blocks_.empty(); }

  BlockMat& operator+=(const BlockMat& other);
  BlockMat& operator*=(Scalar c);
  BlockMat operator+(const BlockMat& other) const;
  BlockMat operator-() const;

  /// Drops blocks whose max abs entry is below tol.
  void prune(double tol);

  /// 2x2 entry access for mode pair (flat indices).
  Eigen::Matrix<Scalar, 2, 2> entry(int mode_a, int mode_b) const;
  void add_entry(int mode_a, int mode_b, const Eigen::Matrix<Scalar, 2, 2>& e);

  Mat to_dense() const;  // flat (2M x 2M), for oracles and small problems

 private:
  std::shared_ptr<const ClusterSet> clusters_;
  std::map<std::pair<int, int>, Mat> blocks_;
};

using BlockMatrix = BlockMat<double>;
using BlockMatrixC = BlockMat<complexd>;

/// Spectral norm of a dense block: full SVD up to dimension 64, power
/// iteration (tol 1e-12, max 500 iterations) above.
double spectral_norm(const Eigen::MatrixXd& m);
double spectral_norm(const Eigen::MatrixXcd& m);

/// Block norm weight for a cluster pair: (wa wb)^beta * ((w(a,b)+|wa^2-wb^2|)/w(a,b))^{s/2},
/// w(a,b) = min(wa, wb); the plus variant multiplies by (1+|wa-wb|).
double block_weight(int wa, int wb, double s, double beta, bool plus);

template <typename Scalar>
NormReport norm_s_beta(const BlockMat<Scalar>& m, double s, double beta);
template <typename Scalar>
NormReport norm_s_beta_plus(const BlockMat<Scalar>& m, double s, double beta);

/// Blockwise product (AB)_[a]^[b] = sum_c A_[a]^[c] B_[c]^[b].
template <typename Scalar>
BlockMat<Scalar> block_mul(const BlockMat<Scalar>& a, const BlockMat<Scalar>& b);

/// Blockwise matrix-vector product.
WeightedVector apply(const BlockMatrix& a, const WeightedVector& z);
WeightedVector apply(const BlockMatrixC& a, const WeightedVector& z);

/// Rank-one block matrix X (x) Y.
BlockMatrix outer(const WeightedVector& x, const WeightedVector& y,
                  std::shared_ptr<const ClusterSet> clusters);

/// Complex change of variables zeta_a = U z_a with U = (1/sqrt2) [[1,1],[-i,i]].
/// For the quadratic-form matrices used here the transform is A ~> U^T A U per
/// mode pair; the round trip is the identity to machine precision.  A real
/// normal-form matrix lands on a Hermitian block-diagonal xi-eta part.
BlockMatrixC to_complex(const BlockMatrix& a);
BlockMatrix to_real(const BlockMatrixC& a);

/// Orthogonal projection of each 2x2 entry onto span{I, J} plus removal of
/// all off-diagonal-cluster blocks.  Idempotent and norm-nonincreasing.
BlockMatrix project_normal_form(const BlockMatrix& a);

/// Predicate of the normal form class: real entries, symmetric,
/// block-diagonal, every entry in span{I,J}.
bool is_normal_form(const BlockMatrix& a, double tol = 1e-12);

/// Symmetry defect max over blocks of |A_a^b - (A_b^a)^T|.
double symmetry_defect(const BlockMatrix& a);

/// Truncated product constants, computed as explicit sums over the cluster
/// weights present in the set (never fitted):
///   c_product:      max_b sum_c 1/(w_c^{2 beta} (1+|w_b-w_c|))
///   c_product_plus: max_{a,b} (1+|w_a-w_b|) sum_c 1/(w_c^{2 beta}(1+|w_a-w_c|)(1+|w_b-w_c|))
double truncated_product_constant(const ClusterSet& clusters, double beta);
double truncated_product_plus_constant(const ClusterSet& clusters, double beta);
/// Truncated constant of the vector bound ||A z||_{s+beta} <= C |A|_{s,b+} ||z||_s:
/// the spectral norm of the nonnegative cluster matrix
///   G_{ab} = w_a^{s+beta} (w_a w_b)^{-beta} f(a,b)^{-s/2} (1+|w_a-w_b|)^{-1} w_b^{-s}.
double truncated_apply_constant(const ClusterSet& clusters, double s, double beta);

/// Hermitian xi-eta scalar matrix of a normal-form block (cluster diagonal),
/// Q_ab = alpha_ab + i beta_ab for the entry alpha I + beta J.
Eigen::MatrixXcd normal_form_q(const BlockMatrix& a, int cluster);

}  // namespace kamflow
