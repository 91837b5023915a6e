// Truncated Fourier-Taylor series in (theta, r, zeta).
//
// A term is c * e^{i k.theta} r^alpha zeta_{x1}...zeta_{xd} with k an integer
// Fourier index (|k|_1 <= K_max), alpha an r-multi-index (|alpha| <= D_r) and
// the x_i symbols naming external phase-space coordinates (mode, p|q), at
// most D_zeta of them.  Coefficients are complex; a series is real when the
// coefficient at (-k, alpha, m) is the conjugate of the one at (k, alpha, m).
//
// Caps are enforced on every operation; mass dropped by a cap is accumulated
// into an explicit truncation report, never silently.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "kamflow/blockmatrix.hpp"
#include "kamflow/grid.hpp"
#include "kamflow/modes.hpp"

namespace kamflow {

inline constexpr int kMaxZetaDegree = 4;
inline constexpr int kMaxRDegree = 15;

/// Packed term identity. The packing is an implementation detail; use
/// TermView for structured access.
struct TermKey {
  uint64_t ka = 0;            // biased k bytes | alpha nibbles
  uint64_t z0 = ~0ull, z1 = ~0ull;  // up to 4 sorted zeta symbols, 0xFFFFFFFF = empty

  friend bool operator==(const TermKey&, const TermKey&) = default;
  friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

struct TermKeyHash {
  size_t operator()(const TermKey& k) const {
    auto mix = [](uint64_t x) {
      x ^= x >> 33; x *= 0xff51afd7ed558ccdULL;
      x ^= x >> 33; x *= 0xc4ceb9fe1a85ec53ULL;
      x ^= x >> 33; return x;
    };
    return static_cast<size_t>(mix(k.ka) ^ mix(k.z0 * 0x9e3779b97f4a7c15ULL) ^
                               mix(k.z1 + 0x9e3779b97f4a7c15ULL));
  }
};

/// Structured view of a term key.
struct TermView {
  KVec k{};
  std::array<int, kMaxTorusDim> alpha{};
  int zdeg = 0;
  std::array<uint32_t, kMaxZetaDegree> z{};  // sorted symbols, (mode<<1)|comp

  static TermView unpack(const TermKey& key, int n);
  TermKey pack() const;

  int alpha_total() const { return alpha[0] + alpha[1] + alpha[2] + alpha[3]; }
  int mode_of(int i) const { return static_cast<int>(z[i] >> 1); }
  int comp_of(int i) const { return static_cast<int>(z[i] & 1); }
};

uint32_t zeta_symbol(int mode, int comp);

struct Term {
  TermKey key;
  complexd c;
};

struct Caps {
  int k_max = 16;    // |k|_1 cap
  int deg_r = 2;     // total r degree cap
  int deg_zeta = 4;  // zeta degree cap

  bool admits(const TermView& v, int n) const;
};

class FTSeries {
 public:
  FTSeries() = default;
  FTSeries(int n, Caps caps) : n_(n), caps_(caps) {}

  int n() const { return n_; }
  const Caps& caps() const { return caps_; }
  void set_caps(Caps c) { caps_ = c; }

  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Sum of |coefficient| over all terms (plain coefficient mass).
  double coeff_mass() const;
  complexd coeff(const TermKey& key) const;

  FTSeries& operator+=(const FTSeries& other);
  FTSeries& operator*=(complexd c);
  FTSeries operator+(const FTSeries& other) const;
  FTSeries operator-(const FTSeries& other) const;
  FTSeries operator*(complexd c) const;

  /// Drops terms with |c| <= tol; returns dropped mass.
  double prune(double tol);

  /// Largest reality defect |conj(c(-k,..)) - c(k,..)|.
  double reality_defect() const;
  /// Symmetrizes coefficients so the series is exactly real.
  void enforce_reality();

  complexd evaluate(const std::vector<complexd>& theta, const std::vector<complexd>& r,
                    const WeightedVector& zeta) const;

  /// Builder access: accumulate then normalize.  The term order produced by a
  /// fixed call sequence is deterministic.
  void add_term(const TermView& v, complexd c, double* dropped = nullptr);
  void add_term_key(const TermKey& key, complexd c);
  /// Sorts terms, merges duplicates, drops exact zeros.
  void normalize(double drop_tol = 0.0);

 private:
  int n_ = 1;
  Caps caps_;
  std::vector<Term> terms_;  // sorted by key after normalize()
  bool dirty_ = false;
};

struct BracketResult {
  FTSeries series;
  double dropped = 0.0;  // coefficient mass lost to caps
};

/// Accumulates terms under caps; duplicate keys are summed in arrival order,
/// so a fixed call sequence yields bit-identical results.
class SeriesBuilder {
 public:
  SeriesBuilder(int n, Caps caps) : n_(n), caps_(caps) {}

  void add(const TermView& v, complexd c);
  void add_dropped(double mass) { dropped_ += mass; }
  double dropped() const { return dropped_; }
  BracketResult finish() const;

 private:
  int n_;
  Caps caps_;
  std::unordered_map<TermKey, complexd, TermKeyHash> acc_;
  double dropped_ = 0.0;
};

/// Exact term-by-term Poisson bracket
///   {f,g} = grad_r f . grad_th g - grad_th f . grad_r g + <J grad_z f, grad_z g>.
/// Output caps are the pointwise min of the operand caps; dropped mass is
/// reported in the result.
BracketResult poisson(const FTSeries& f, const FTSeries& g);

}  // namespace kamflow
