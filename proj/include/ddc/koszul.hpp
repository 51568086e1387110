#pragma once

// Koszul complexes K(A; a), transition maps p_{j,i} : K(A; a^j) -> K(A; a^i),
// the inverse systems H^k(K(A; a^i)), pro-zero certificates, and the stages
// Hom(K(A; a^i), A) of the infinite dual Koszul complex.

#include "ddc/complex.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ddc {

using Sequence = std::vector<RingElem>;

inline Sequence power(const RingSpec& r, const Sequence& a, unsigned i) {
  Sequence out;
  for (const auto& x : a) out.push_back(ring::pow(r, x, i));
  return out;
}

/// [A --a--> A] in degrees -1, 0.
inline FreeComplex koszul_single(const RingSpec& r, const RingElem& a) {
  return FreeComplex(r, {{-1, 1}, {0, 1}}, {{-1, RMatrix::scalar(r, 1, a)}});
}

inline FreeComplex koszul(const RingSpec& r, const Sequence& a) {
  FreeComplex out = FreeComplex::concentrated(r, 1);
  for (const auto& x : a) out = tensor(out, koszul_single(r, x));
  return out;
}

inline ChainMap koszul_transition(const RingSpec& r, const Sequence& a, unsigned j, unsigned i) {
  if (i < 1 || j < i) fail(ErrorCode::bad_indices, "transition needs j >= i >= 1");
  ChainMap out = ChainMap::identity(FreeComplex::concentrated(r, 1));
  for (const auto& x : a) {
    auto src = koszul_single(r, ring::pow(r, x, j));
    auto dst = koszul_single(r, ring::pow(r, x, i));
    ChainMap p(src, dst,
               {{-1, RMatrix::scalar(r, 1, ring::pow(r, x, j - i))},
                {0, RMatrix::identity(r, 1)}});
    out = tensor(out, p);
  }
  return out;
}

struct KoszulH0Comparison {
  PresentedModule h0;        ///< H^0(K(A; a))
  PresentedModule quotient;  ///< A / (a) presented directly
  InducedMap map;            ///< induced by the identity of K^0 = A
};

/// H^0(K(A; a)) against A / (a_1, ..., a_n) built from the relation row.
inline KoszulH0Comparison koszul_h0_comparison(const RingSpec& r, const Sequence& a) {
  RMatrix rel(r, 1, a.size());
  for (std::size_t j = 0; j < a.size(); ++j) rel.set(0, j, a[j]);
  KoszulH0Comparison out{cohomology_at(koszul(r, a), 0), quotient_module(r, 1, rel), {}};
  out.map = induced_map(RMatrix::identity(r, 1), out.h0, out.quotient);
  return out;
}

/// Smallest t <= cap with (a_l^t) = (a_l^{t+1}) for every l, i.e. where the
/// power ideals of each generator stop shrinking; nullopt over Z or if the
/// cap is reached first.
inline std::optional<unsigned> power_stabilization_index(const RingSpec& r, const Sequence& a,
                                                         unsigned cap = 16) {
  if (!r.is_finite()) return std::nullopt;
  auto s = r.scalars();
  auto ideal = [&](const RingElem& x) { return multiplication_operator(r, x, 1); };
  auto contains = [&](const Matrix<Int>& big, const Matrix<Int>& small) {
    return solve(s, big, small).has_value();
  };
  unsigned best = 1;
  for (const auto& x : a) {
    unsigned t = 1;
    for (;; ++t) {
      if (t > cap) return std::nullopt;
      auto it = ideal(ring::pow(r, x, t));
      auto next = ideal(ring::pow(r, x, t + 1));
      if (contains(next, it)) break;
    }
    best = std::max(best, t);
  }
  return best;
}

/// {H^k(K(A; a^i))}_{1 <= i <= depth} with transitions H^k(p_{j,i}).
class InverseSystem {
 public:
  InverseSystem(RingSpec r, Sequence a, int k, unsigned depth)
      : ring_(r), seq_(std::move(a)), degree_(k), depth_(depth) {
    if (depth < 1) fail(ErrorCode::bad_indices, "depth must be >= 1");
    for (unsigned i = 1; i <= depth; ++i) objects_.push_back(stage(i));
  }

  int degree() const noexcept { return degree_; }
  unsigned depth() const noexcept { return depth_; }
  const PresentedModule& object(unsigned i) const { return objects_.at(i - 1); }

  InducedMap transition(unsigned j, unsigned i) const {
    if (i < 1 || j < i || j > depth_) fail(ErrorCode::bad_indices, "transition out of range");
    return induced_map(koszul_transition(ring_, seq_, j, i).at(degree_), object(j), object(i));
  }

 private:
  PresentedModule stage(unsigned i) const {
    return cohomology_at(koszul(ring_, power(ring_, seq_, i)), degree_);
  }

  RingSpec ring_;
  Sequence seq_;
  int degree_;
  unsigned depth_;
  std::vector<PresentedModule> objects_;
};

struct ProZeroCertificate {
  enum class Verdict { certified, undetermined };

  Sequence sequence;
  unsigned depth = 0;
  unsigned horizon = 0;
  /// Per degree k: witness pairs (i, j) with H^k(p_{j,i}) = 0.
  std::map<int, std::vector<std::pair<unsigned, unsigned>>> witnesses;
  /// (k, i) pairs for which no witness was found up to the horizon.
  std::vector<std::pair<int, unsigned>> open;
  Verdict verdict = Verdict::undetermined;

  std::string verdict_name() const {
    return verdict == Verdict::certified ? "certified" : "undetermined";
  }
};

inline ProZeroCertificate wpr_certificate(const RingSpec& r, const Sequence& a, unsigned depth,
                                          unsigned horizon) {
  if (depth < 1 || horizon < depth) fail(ErrorCode::bad_indices, "need 1 <= depth <= horizon");
  ProZeroCertificate cert;
  cert.sequence = a;
  cert.depth = depth;
  cert.horizon = horizon;
  const int n = static_cast<int>(a.size());

  std::vector<FreeComplex> ks(horizon + 1);
  for (unsigned i = 1; i <= horizon; ++i) ks[i] = koszul(r, power(r, a, i));

  for (int k = -n; k <= -1; ++k) {
    std::vector<std::optional<PresentedModule>> h(horizon + 1);
    auto coh = [&](unsigned i) -> const PresentedModule& {
      if (!h[i]) h[i] = cohomology_at(ks[i], k);
      return *h[i];
    };
    auto& list = cert.witnesses[k];
    for (unsigned i = 1; i <= depth; ++i) {
      std::optional<unsigned> found;
      if (coh(i).is_zero()) found = i;
      for (unsigned j = i; !found && j <= horizon; ++j) {
        auto m = induced_map(koszul_transition(r, a, j, i).at(k), coh(j), coh(i));
        if (m.is_zero) found = j;
      }
      if (found)
        list.emplace_back(i, *found);
      else
        cert.open.emplace_back(k, i);
    }
  }
  cert.verdict = cert.open.empty() ? ProZeroCertificate::Verdict::certified
                                   : ProZeroCertificate::Verdict::undetermined;
  return cert;
}

/// Independent re-check of every witness pair.
inline bool reverify(const RingSpec& r, const ProZeroCertificate& cert) {
  for (const auto& [k, list] : cert.witnesses)
    for (auto [i, j] : list) {
      auto src = cohomology_at(koszul(r, power(r, cert.sequence, j)), k);
      auto dst = cohomology_at(koszul(r, power(r, cert.sequence, i)), k);
      if (!induced_map(koszul_transition(r, cert.sequence, j, i).at(k), src, dst).is_zero)
        return false;
    }
  return true;
}

/// Stage i of the dual Koszul direct system: Hom(K(A; a^i), A[0]) in degrees
/// 0..n, with forward maps Hom(p_{j,i}, A) to later stages.
struct DirectSystemStage {
  RingSpec ring;
  Sequence sequence;
  unsigned index = 1;
  FreeComplex complex;

  ChainMap forward(unsigned j) const {
    return hom_map(koszul_transition(ring, sequence, j, index),
                   FreeComplex::concentrated(ring, 1));
  }
};

inline DirectSystemStage dual_koszul_stage(const RingSpec& r, const Sequence& a, unsigned i) {
  if (i < 1) fail(ErrorCode::bad_indices, "stage index must be >= 1");
  return {r, a, i, hom_complex(koszul(r, power(r, a, i)), FreeComplex::concentrated(r, 1))};
}

}  // namespace ddc
