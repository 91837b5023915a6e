#include "kamflow/ftseries.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace kamflow {

TermView TermView::unpack(const TermKey& key, int n) {
  TermView v;
  for (int i = 0; i < n; ++i)
    v.k[i] = static_cast<int>((key.ka >> (8 * i)) & 0xff) - 128;
  for (int i = 0; i < kMaxTorusDim; ++i)
    v.alpha[i] = static_cast<int>((key.ka >> (32 + 4 * i)) & 0xf);
  const uint64_t zs[2] = {key.z0, key.z1};
  v.zdeg = 0;
  for (int i = 0; i < kMaxZetaDegree; ++i) {
    const uint32_t s = static_cast<uint32_t>(zs[i / 2] >> (32 * (i % 2)));
    if (s == 0xffffffffu) break;
    v.z[v.zdeg++] = s;
  }
  return v;
}

TermKey TermView::pack() const {
  TermKey key;
  key.ka = 0;
  for (int i = 0; i < kMaxTorusDim; ++i) {
    const int kb = k[i] + 128;
    if (kb < 0 || kb > 255) throw std::invalid_argument("TermView: Fourier index out of range");
    key.ka |= static_cast<uint64_t>(kb) << (8 * i);
    if (alpha[i] < 0 || alpha[i] > kMaxRDegree)
      throw std::invalid_argument("TermView: r exponent out of range");
    key.ka |= static_cast<uint64_t>(alpha[i]) << (32 + 4 * i);
  }
  uint64_t zs[2] = {0, 0};
  for (int i = 0; i < kMaxZetaDegree; ++i) {
    const uint32_t s = i < zdeg ? z[i] : 0xffffffffu;
    zs[i / 2] |= static_cast<uint64_t>(s) << (32 * (i % 2));
  }
  key.z0 = zs[0];
  key.z1 = zs[1];
  return key;
}

uint32_t zeta_symbol(int mode, int comp) {
  return (static_cast<uint32_t>(mode) << 1) | static_cast<uint32_t>(comp);
}

bool Caps::admits(const TermView& v, int n) const {
  if (kvec_l1(v.k, n) > k_max) return false;
  if (v.alpha_total() > deg_r) return false;
  if (v.zdeg > deg_zeta) return false;
  return true;
}

double FTSeries::coeff_mass() const {
  double m = 0.0;
  for (const auto& t : terms_) m += std::abs(t.c);
  return m;
}

complexd FTSeries::coeff(const TermKey& key) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, const TermKey& k) { return t.key < k; });
  if (it != terms_.end() && it->key == key) return it->c;
  return {0.0, 0.0};
}

FTSeries& FTSeries::operator+=(const FTSeries& other) {
  for (const auto& t : other.terms_) add_term_key(t.key, t.c);
  normalize();
  return *this;
}

FTSeries& FTSeries::operator*=(complexd c) {
  for (auto& t : terms_) t.c *= c;
  return *this;
}

FTSeries FTSeries::operator+(const FTSeries& other) const {
  FTSeries out = *this;
  out += other;
  return out;
}

FTSeries FTSeries::operator-(const FTSeries& other) const {
  FTSeries out = *this;
  FTSeries neg = other;
  neg *= complexd(-1.0, 0.0);
  out += neg;
  return out;
}

FTSeries FTSeries::operator*(complexd c) const {
  FTSeries out = *this;
  out *= c;
  return out;
}

double FTSeries::prune(double tol) {
  double dropped = 0.0;
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (std::abs(t.c) <= tol)
      dropped += std::abs(t.c);
    else
      kept.push_back(t);
  }
  terms_ = std::move(kept);
  return dropped;
}

namespace {

TermKey conjugate_key(const TermKey& key, int n) {
  TermView v = TermView::unpack(key, n);
  for (int i = 0; i < n; ++i) v.k[i] = -v.k[i];
  return v.pack();
}

}  // namespace

double FTSeries::reality_defect() const {
  double d = 0.0;
  for (const auto& t : terms_) {
    const complexd mirror = coeff(conjugate_key(t.key, n_));
    d = std::max(d, std::abs(std::conj(mirror) - t.c));
  }
  return d;
}

void FTSeries::enforce_reality() {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const complexd mirror = coeff(conjugate_key(t.key, n_));
    out.push_back({t.key, 0.5 * (t.c + std::conj(mirror))});
  }
  terms_ = std::move(out);
  normalize();
}

complexd FTSeries::evaluate(const std::vector<complexd>& theta, const std::vector<complexd>& r,
                            const WeightedVector& zeta) const {
  complexd acc = 0.0;
  for (const auto& t : terms_) {
    const TermView v = TermView::unpack(t.key, n_);
    complexd phase = 0.0;
    for (int i = 0; i < n_; ++i) phase += static_cast<double>(v.k[i]) * theta[i];
    complexd val = t.c * std::exp(complexd(0.0, 1.0) * phase);
    for (int i = 0; i < n_; ++i)
      for (int p = 0; p < v.alpha[i]; ++p) val *= r[i];
    for (int i = 0; i < v.zdeg; ++i) val *= zeta.comp(v.mode_of(i), v.comp_of(i));
    acc += val;
  }
  return acc;
}

void FTSeries::add_term(const TermView& v, complexd c, double* dropped) {
  if (c == complexd(0.0, 0.0)) return;
  if (!caps_.admits(v, n_)) {
    if (dropped) *dropped += std::abs(c);
    return;
  }
  terms_.push_back({v.pack(), c});
  dirty_ = true;
}

void FTSeries::add_term_key(const TermKey& key, complexd c) {
  if (c == complexd(0.0, 0.0)) return;
  terms_.push_back({key, c});
  dirty_ = true;
}

void FTSeries::normalize(double drop_tol) {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.key < b.key; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().key == t.key)
      out.back().c += t.c;
    else
      out.push_back(t);
  }
  std::vector<Term> kept;
  kept.reserve(out.size());
  for (const auto& t : out)
    if (std::abs(t.c) > drop_tol) kept.push_back(t);
  terms_ = std::move(kept);
  dirty_ = false;
}

void SeriesBuilder::add(const TermView& v, complexd c) {
  if (c == complexd(0.0, 0.0)) return;
  if (!caps_.admits(v, n_)) {
    dropped_ += std::abs(c);
    return;
  }
  acc_[v.pack()] += c;
}

BracketResult SeriesBuilder::finish() const {
  FTSeries out(n_, caps_);
  std::vector<Term> terms;
  terms.reserve(acc_.size());
  for (const auto& [key, c] : acc_) terms.push_back({key, c});
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.key < b.key; });
  for (const auto& t : terms)
    if (t.c != complexd(0.0, 0.0)) out.add_term_key(t.key, t.c);
  out.normalize();
  return {std::move(out), dropped_};
}

namespace {

// Multiset merge of zeta symbols; returns false on zeta-cap overflow.
bool merge_symbols(const TermView& a, const TermView& b, TermView* out) {
  if (a.zdeg + b.zdeg > kMaxZetaDegree) return false;
  int i = 0, j = 0, k = 0;
  while (i < a.zdeg && j < b.zdeg) out->z[k++] = a.z[i] <= b.z[j] ? a.z[i++] : b.z[j++];
  while (i < a.zdeg) out->z[k++] = a.z[i++];
  while (j < b.zdeg) out->z[k++] = b.z[j++];
  out->zdeg = k;
  return true;
}

}  // namespace

BracketResult poisson(const FTSeries& f, const FTSeries& g) {
  if (f.n() != g.n()) throw std::invalid_argument("poisson: torus dimension mismatch");
  const int n = f.n();
  Caps caps;
  caps.k_max = std::min(f.caps().k_max, g.caps().k_max);
  caps.deg_r = std::min(f.caps().deg_r, g.caps().deg_r);
  caps.deg_zeta = std::min(f.caps().deg_zeta, g.caps().deg_zeta);
  SeriesBuilder acc(n, caps);

  const complexd iu(0.0, 1.0);
  for (const auto& tf : f.terms()) {
    const TermView vf = TermView::unpack(tf.key, n);
    for (const auto& tg : g.terms()) {
      const TermView vg = TermView::unpack(tg.key, n);

      // grad_r f . grad_th g - grad_th f . grad_r g
      for (int i = 0; i < n; ++i) {
        if (vf.alpha[i] > 0 && vg.k[i] != 0) {
          TermView v{};
          for (int q = 0; q < n; ++q) v.k[q] = vf.k[q] + vg.k[q];
          for (int q = 0; q < kMaxTorusDim; ++q) v.alpha[q] = vf.alpha[q] + vg.alpha[q];
          v.alpha[i] -= 1;
          if (merge_symbols(vf, vg, &v))
            acc.add(v, tf.c * tg.c * iu * static_cast<double>(vf.alpha[i] * vg.k[i]));
          else
            acc.add_dropped(std::abs(tf.c * tg.c) * vf.alpha[i] * std::abs(vg.k[i]));
        }
        if (vg.alpha[i] > 0 && vf.k[i] != 0) {
          TermView v{};
          for (int q = 0; q < n; ++q) v.k[q] = vf.k[q] + vg.k[q];
          for (int q = 0; q < kMaxTorusDim; ++q) v.alpha[q] = vf.alpha[q] + vg.alpha[q];
          v.alpha[i] -= 1;
          if (merge_symbols(vf, vg, &v))
            acc.add(v, -tf.c * tg.c * iu * static_cast<double>(vg.alpha[i] * vf.k[i]));
          else
            acc.add_dropped(std::abs(tf.c * tg.c) * vg.alpha[i] * std::abs(vf.k[i]));
        }
      }

      // <J grad_z f, grad_z g> = sum_a dp_a f dq_a g - dq_a f dp_a g
      if (vf.zdeg == 0 || vg.zdeg == 0) continue;
      for (int a = 0; a < vf.zdeg; ++a) {
        if (a > 0 && vf.z[a] == vf.z[a - 1]) continue;  // handle multiplicity once
        int multf = 0;
        for (int q = 0; q < vf.zdeg; ++q) multf += vf.z[q] == vf.z[a];
        const int mode_f = static_cast<int>(vf.z[a] >> 1);
        const int comp_f = static_cast<int>(vf.z[a] & 1);
        for (int b = 0; b < vg.zdeg; ++b) {
          if (b > 0 && vg.z[b] == vg.z[b - 1]) continue;
          int multg = 0;
          for (int q = 0; q < vg.zdeg; ++q) multg += vg.z[q] == vg.z[b];
          const int mode_g = static_cast<int>(vg.z[b] >> 1);
          const int comp_g = static_cast<int>(vg.z[b] & 1);
          if (mode_f != mode_g || comp_f == comp_g) continue;
          // sign: +1 for (p,q) pairing, -1 for (q,p)
          const double sign = comp_f == 0 ? 1.0 : -1.0;
          TermView vdf = vf, vdg = vg;
          // remove one copy of the symbol from each
          auto remove_sym = [](TermView& v, int idx) {
            for (int q = idx; q + 1 < v.zdeg; ++q) v.z[q] = v.z[q + 1];
            v.zdeg -= 1;
          };
          remove_sym(vdf, a);
          remove_sym(vdg, b);
          TermView v{};
          for (int q = 0; q < n; ++q) v.k[q] = vf.k[q] + vg.k[q];
          for (int q = 0; q < kMaxTorusDim; ++q) v.alpha[q] = vf.alpha[q] + vg.alpha[q];
          if (merge_symbols(vdf, vdg, &v))
            acc.add(v, tf.c * tg.c * sign * static_cast<double>(multf * multg));
          else
            acc.add_dropped(std::abs(tf.c * tg.c) * multf * multg);
        }
      }
    }
  }
  BracketResult res;
  res.series = acc.finish();
  res.dropped = acc.dropped;
  return res;
}

}  // namespace kamflow
