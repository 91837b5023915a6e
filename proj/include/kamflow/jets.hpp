// Jets of Hamiltonians: degree <= 1 in r, degree <= 2 in zeta, full Fourier
// dependence in theta, plus the weighted sup norms [f]^{s,b} and [f]^{s,b+}
// evaluated through certified coefficient majorants.
#pragma once

#include <map>

#include "kamflow/ftseries.hpp"

namespace kamflow {

/// The quadruple (f_theta, f_r, f_zeta, f_zetazeta) of theta-Fourier series.
/// f_zetazeta(k) stores the complex Fourier coefficient of the real-valued
/// (p,q)-Hessian; the quadratic part of the Hamiltonian is
/// (1/2) <f_zetazeta(theta) zeta, zeta> with a symmetric matrix per theta.
struct JetHamiltonian {
  int n = 1;
  std::shared_ptr<const ClusterSet> clusters;
  std::map<KVec, complexd> f_theta;
  std::map<KVec, Eigen::VectorXcd> f_r;
  std::map<KVec, WeightedVector> f_zeta;
  std::map<KVec, BlockMatrixC> f_zetazeta;

  JetHamiltonian() = default;
  JetHamiltonian(int n_, std::shared_ptr<const ClusterSet> cl)
      : n(n_), clusters(std::move(cl)) {}

  bool empty() const;
  JetHamiltonian operator-() const;
  JetHamiltonian& operator+=(const JetHamiltonian& other);
  JetHamiltonian& operator*=(complexd c);

  /// Value of theta mean <f_theta> and <f_r>.
  complexd mean_theta() const;
  Eigen::VectorXcd mean_r() const;

  FTSeries to_series(const Caps& caps) const;
  /// Drops Fourier coefficients with |k|_1 > cutoff; returns the dropped jet.
  JetHamiltonian split_tail(int cutoff);
  void prune(double tol);
};

struct JetExtraction {
  JetHamiltonian jet;
  FTSeries remainder;
};

/// Splits f into its jet (Taylor polynomial at r=0, zeta=0 of the jet shape)
/// and the remainder f - f^T.
JetExtraction extract_jet(const FTSeries& f, std::shared_ptr<const ClusterSet> clusters);

struct JetNorm {
  double value = 0.0;
  double part_sup = 0.0;        // sup |f|
  double part_grad = 0.0;       // mu sup ||grad_z f||_{s+beta}
  double part_hess = 0.0;       // mu^2 sup |hess_z f|_{s,beta}
  double part_hess_plus = 0.0;  // mu^2 sup |hess_z f|_{s,beta+} (plus variant only)
};

/// Certified upper bound of the jet norm of a series on the domain
/// T^n_sigma x {|r|<mu^2} x {||z||_s<mu}: every term is bounded by its
/// coefficient majorant |c| e^{sigma |k|_1} mu^{2|alpha|} prod(mu w^{-s}),
/// the gradient through weighted per-symbol sums, the hessian through the
/// block norm of the entrywise majorant matrix.  Conservative by design so
/// that lemma checks remain sound.
JetNorm jet_norm(const FTSeries& f, const ClusterSet& clusters, double sigma, double mu,
                 double s, double beta, bool plus_variant);
JetNorm jet_norm(const JetHamiltonian& jet, double sigma, double mu, double s, double beta,
                 bool plus_variant, const Caps& caps);

/// Closed-form Poisson bracket of two jets (the result is not a jet: it has
/// r-zeta cross terms and keeps zeta degree <= 2).
BracketResult jet_poisson(const JetHamiltonian& f, const JetHamiltonian& g, const Caps& caps);

/// Fast bracket {g, S} of a general series with a jet.  Results beyond the
/// caps of g are dropped into the report.
class CompiledJet {
 public:
  explicit CompiledJet(const JetHamiltonian& jet);

  const JetHamiltonian& jet() const { return *jet_; }
  BracketResult bracket_right(const FTSeries& g) const;  // {g, S}

 private:
  struct Slice {
    KVec k{};
    complexd theta = 0.0;
    Eigen::VectorXcd r;                                      // may be empty
    std::vector<std::pair<uint32_t, complexd>> zeta;         // (symbol, coeff)
    std::vector<std::vector<std::pair<uint32_t, complexd>>> rows;  // hessian rows per symbol
    bool has_hessian = false;
  };
  const JetHamiltonian* jet_;
  std::vector<Slice> slices_;
  int num_symbols_ = 0;
};

}  // namespace kamflow
