#pragma once

// Finitely generated modules presented as subquotients of a free module in
// scalar coordinates: (span of kernel generators) / (span of image
// generators), together with a cyclic decomposition from Smith normal form.

#include "ddc/error.hpp"
#include "ddc/ring.hpp"
#include "ddc/smith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ddc {

class PresentedModule {
 public:
  PresentedModule() = default;

  /// Presentation of span(kernel_gens) / span(image_gens) inside a scalar
  /// ambient module of dimension `ambient` (a multiple of ring.width()).
  PresentedModule(const RingSpec& ring, std::size_t ambient, Matrix<Int> kernel_gens,
                  Matrix<Int> image_gens)
      : ring_(ring),
        ambient_(ambient),
        kernel_(normalize_shape(ambient, std::move(kernel_gens))),
        image_(normalize_shape(ambient, std::move(image_gens))) {
    present();
  }

  const RingSpec& ring() const noexcept { return ring_; }
  ScalarRing scalars() const noexcept { return ring_.scalars(); }
  std::size_t ambient() const noexcept { return ambient_; }
  const Matrix<Int>& kernel_gens() const noexcept { return kernel_; }
  const Matrix<Int>& image_gens() const noexcept { return image_; }

  std::size_t num_generators() const noexcept { return orders_.size(); }
  /// Ambient vectors of the chosen cyclic generators.
  const Matrix<Int>& generators() const noexcept { return generators_; }
  /// Order ideal generator per cyclic generator, normalized (0 = free over
  /// the scalar ring).
  const std::vector<Int>& orders() const noexcept { return orders_; }

  bool is_zero() const noexcept { return orders_.empty(); }

  /// "integer" for Z and Z/m, "prime-field" for F_p and F_p[x]/(x^n).
  std::string scalar_kind() const {
    return (ring_.kind == RingKind::integers || ring_.kind == RingKind::mod_integers)
               ? "integer"
               : "prime-field";
  }

  /// Invariant factors of the underlying abelian group, as a divisibility
  /// chain; 0 encodes a free factor (Z, or F_p over a prime field).
  std::vector<Int> invariants() const {
    std::vector<Int> out;
    for (const auto& d : orders_) {
      if (ring_.kind == RingKind::mod_integers && d.is_zero())
        out.emplace_back(ring_.modulus);
      else
        out.push_back(d);
    }
    return out;
  }

  /// Number of elements, or nullopt when infinite.
  std::optional<Int> cardinality() const {
    Int c = 1;
    for (const auto& d : orders_) {
      if (d.is_zero()) {
        if (ring_.kind == RingKind::integers) return std::nullopt;
        c *= ring_.modulus;
      } else {
        c *= d;
      }
    }
    return c;
  }

  bool in_kernel_span(const std::vector<Int>& v) const { return kernel_coords(v).has_value(); }

  /// Coordinates of an element of the kernel span on the chosen generators,
  /// reduced modulo the orders; nullopt if v is not in the kernel span.
  std::optional<std::vector<Int>> coordinates(const std::vector<Int>& v) const {
    auto c = kernel_coords(v);
    if (!c) return std::nullopt;
    std::vector<Int> out(orders_.size());
    auto s = scalars();
    for (std::size_t g = 0; g < kept_.size(); ++g) {
      Int acc = 0;
      for (std::size_t j = 0; j < c->size(); ++j) acc += u_(kept_[g], j) * (*c)[j];
      out[g] = reduce_mod_order(s.reduce(acc), orders_[g]);
    }
    return out;
  }

  /// True when v lies in the image span (v must be in the kernel span).
  bool represents_zero(const std::vector<Int>& v) const {
    auto c = coordinates(v);
    if (!c) fail(ErrorCode::not_well_defined, "vector outside the kernel span");
    for (const auto& x : *c)
      if (!x.is_zero()) return false;
    return true;
  }

  /// Ambient vector for a coordinate vector on the generators.
  std::vector<Int> element(const std::vector<Int>& coords) const {
    std::vector<Int> out(ambient_, 0);
    auto s = scalars();
    for (std::size_t g = 0; g < coords.size(); ++g)
      for (std::size_t i = 0; i < ambient_; ++i) out[i] += coords[g] * generators_(i, g);
    for (auto& x : out) x = s.reduce(x);
    return out;
  }

  Int reduce_mod_order(const Int& x, const Int& order) const {
    auto s = scalars();
    if (order.is_zero()) return s.reduce(x);
    Int r = x % order;
    if (r < 0) r += order;
    return r;
  }

  /// Action of a ring element on the generators: column g holds the
  /// coordinates of a * generator_g.
  Matrix<Int> operator_matrix(const RingElem& a) const {
    Matrix<Int> op = multiplication_operator(ring_, a, ambient_ / ring_.width());
    Matrix<Int> out(orders_.size(), orders_.size());
    for (std::size_t g = 0; g < orders_.size(); ++g) {
      auto img = apply(op, generators_.column(g));
      auto c = coordinates(img);
      if (!c) fail(ErrorCode::not_well_defined, "kernel span is not a submodule");
      for (std::size_t h = 0; h < orders_.size(); ++h) out(h, g) = (*c)[h];
    }
    return out;
  }

  /// Operator table: the action of x for F_p[x]/(x^n), nothing otherwise.
  std::vector<Matrix<Int>> operator_table() const {
    if (ring_.kind != RingKind::truncated_poly) return {};
    return {operator_matrix(ring::x(ring_))};
  }

  /// A minimal generating set over the base ring A (lifts of a basis of
  /// M / mM for F_p[x]/(x^n); the cyclic generators otherwise).
  std::vector<std::vector<Int>> ring_generators() const {
    std::vector<std::vector<Int>> out;
    if (ring_.kind != RingKind::truncated_poly || ring_.degree == 1) {
      for (std::size_t g = 0; g < orders_.size(); ++g) out.push_back(generators_.column(g));
      return out;
    }
    Matrix<Int> op = multiplication_operator(ring_, ring::x(ring_), ambient_ / ring_.width());
    std::vector<std::vector<Int>> span_cols;
    for (std::size_t j = 0; j < image_.cols(); ++j) span_cols.push_back(image_.column(j));
    for (std::size_t j = 0; j < kernel_.cols(); ++j)
      span_cols.push_back(apply(op, kernel_.column(j)));
    for (std::size_t g = 0; g < orders_.size(); ++g) {
      auto v = generators_.column(g);
      Matrix<Int> s = Matrix<Int>::from_columns(ambient_, span_cols);
      Matrix<Int> rhs = Matrix<Int>::from_columns(ambient_, {v});
      if (s.cols() > 0 && solve(scalars(), s, rhs)) continue;
      out.push_back(v);
      span_cols.push_back(v);
    }
    return out;
  }

  std::vector<Int> apply(const Matrix<Int>& op, const std::vector<Int>& v) const {
    std::vector<Int> out(op.rows(), 0);
    for (std::size_t i = 0; i < op.rows(); ++i)
      for (std::size_t j = 0; j < op.cols(); ++j)
        if (!op(i, j).is_zero() && !v[j].is_zero()) out[i] += op(i, j) * v[j];
    auto s = scalars();
    for (auto& x : out) x = s.reduce(x);
    return out;
  }

  std::string describe() const {
    if (is_zero()) return "0";
    std::string s;
    for (const auto& d : invariants()) {
      if (!s.empty()) s += " + ";
      if (d.is_zero())
        s += scalar_kind() == "integer" ? "Z" : "F_" + std::to_string(ring_.modulus);
      else
        s += "Z/" + d.str();
    }
    return s;
  }

 private:
  static Matrix<Int> normalize_shape(std::size_t ambient, Matrix<Int> m) {
    if (m.cols() == 0) return Matrix<Int>(ambient, 0);
    if (m.rows() != ambient)
      fail(ErrorCode::malformed_input, "generator matrix does not match ambient rank");
    return m;
  }

  std::optional<std::vector<Int>> kernel_coords(const std::vector<Int>& v) const {
    if (v.size() != ambient_) fail(ErrorCode::malformed_input, "vector length mismatch");
    auto s = scalars();
    if (kernel_.cols() == 0) {
      for (const auto& x : v)
        if (!s.reduce(x).is_zero()) return std::nullopt;
      return std::vector<Int>{};
    }
    auto x = solve(s, kernel_, Matrix<Int>::from_columns(ambient_, {v}));
    if (!x) return std::nullopt;
    return x->column(0);
  }

  void present() {
    auto s = scalars();
    const std::size_t k = kernel_.cols();
    orders_.clear();
    kept_.clear();
    generators_ = Matrix<Int>(ambient_, 0);
    if (k == 0) {
      if (!is_zero_matrix(s, image_))
        fail(ErrorCode::containment_violation, "image not contained in kernel");
      return;
    }
    Matrix<Int> coeffs(k, 0);
    if (image_.cols() > 0) {
      auto c = solve(s, kernel_, image_);
      if (!c) fail(ErrorCode::containment_violation, "image not contained in kernel");
      coeffs = *c;
    }
    Matrix<Int> syz = kernel(s, kernel_);
    Matrix<Int> rel = Matrix<Int>::hcat(syz.cols() ? syz : Matrix<Int>(k, 0), coeffs);
    SmithForm<Int> sf;
    if (rel.cols() == 0) {
      sf.u = Matrix<Int>::identity(k);
      sf.diagonal.clear();
    } else {
      sf = snf(s, rel, true);
    }
    u_ = sf.u;
    auto u_inv = solve(s, u_, Matrix<Int>::identity(k));
    if (!u_inv) fail(ErrorCode::malformed_input, "non-invertible row transform");
    Matrix<Int> basis = multiply(s, kernel_, *u_inv);
    std::vector<std::vector<Int>> gens;
    pir::IntegerRing zz;
    for (std::size_t j = 0; j < k; ++j) {
      Int d = j < sf.diagonal.size() ? sf.diagonal[j] : Int(0);
      bool unit = s.is_integer() ? zz.is_unit(d)
                                 : pir::gcd64(static_cast<std::int64_t>(d), s.modulus) == 1;
      if (unit) continue;
      kept_.push_back(j);
      orders_.push_back(d);
      gens.push_back(basis.column(j));
    }
    generators_ = Matrix<Int>::from_columns(ambient_, gens);
  }

  RingSpec ring_{};
  std::size_t ambient_ = 0;
  Matrix<Int> kernel_;
  Matrix<Int> image_;
  Matrix<Int> u_;
  std::vector<std::size_t> kept_;
  std::vector<Int> orders_;
  Matrix<Int> generators_;
};

/// A-level constructor: kernel and image generators given as ring matrices
/// whose columns live in A^{ambient_rank}.
inline PresentedModule subquotient(const RingSpec& r, std::size_t ambient_rank,
                                   const RMatrix& kernel_gens, const RMatrix& image_gens) {
  const std::size_t amb = ambient_rank * r.width();
  Matrix<Int> k = kernel_gens.cols() ? scalar_expand(r, kernel_gens) : Matrix<Int>(amb, 0);
  Matrix<Int> i = image_gens.cols() ? scalar_expand(r, image_gens) : Matrix<Int>(amb, 0);
  return PresentedModule(r, amb, std::move(k), std::move(i));
}

/// A^rank / (column span of relations).
inline PresentedModule quotient_module(const RingSpec& r, std::size_t rank,
                                       const RMatrix& relations) {
  return subquotient(r, rank, RMatrix::identity(r, rank), relations);
}

struct InducedMap {
  Matrix<Int> matrix;  ///< dst generators x src generators
  bool is_zero = false;
  bool is_injective = false;
  bool is_surjective = false;
  bool is_bijective() const noexcept { return is_injective && is_surjective; }
};

/// The map src -> dst induced by the scalar matrix f between ambients.
inline InducedMap induced_map(const Matrix<Int>& f, const PresentedModule& src,
                              const PresentedModule& dst) {
  if (!(src.ring() == dst.ring())) fail(ErrorCode::ring_mismatch, "induced_map");
  if (f.rows() != dst.ambient() || f.cols() != src.ambient())
    fail(ErrorCode::malformed_input, "induced_map: matrix shape mismatch");
  auto s = src.scalars();
  const std::size_t a = src.num_generators(), b = dst.num_generators();
  InducedMap out;
  out.matrix = Matrix<Int>(b, a);
  for (std::size_t j = 0; j < a; ++j) {
    auto img = src.apply(f, src.generators().column(j));
    auto c = dst.coordinates(img);
    if (!c) fail(ErrorCode::not_well_defined, "map leaves the target kernel span");
    for (std::size_t i = 0; i < b; ++i) out.matrix(i, j) = (*c)[i];
    // relations must map to relations
    const Int& ord = src.orders()[j];
    if (!ord.is_zero() || !s.is_integer()) {
      Int mult = ord.is_zero() ? Int(s.modulus) : ord;
      for (std::size_t i = 0; i < b; ++i)
        if (!dst.reduce_mod_order(mult * (*c)[i], dst.orders()[i]).is_zero())
          fail(ErrorCode::not_well_defined, "relation not preserved");
    }
  }
  out.is_zero = true;
  for (const auto& x : out.matrix.data())
    if (!x.is_zero()) out.is_zero = false;

  // [M | D_dst]
  Matrix<Int> ddst(b, b);
  for (std::size_t i = 0; i < b; ++i) ddst(i, i) = dst.orders()[i];
  Matrix<Int> aug = Matrix<Int>::hcat(out.matrix.cols() ? out.matrix : Matrix<Int>(b, 0), ddst);
  if (b == 0) {
    out.is_surjective = true;
  } else {
    auto sf = snf(s, aug, false);
    out.is_surjective = sf.diagonal.size() == b;
    for (const auto& d : sf.diagonal) {
      bool unit = s.is_integer() ? (d == 1)
                                 : pir::gcd64(static_cast<std::int64_t>(d), s.modulus) == 1;
      if (!unit) out.is_surjective = false;
    }
  }
  if (a == 0) {
    out.is_injective = true;
  } else if (b == 0) {
    out.is_injective = false;
  } else {
    Matrix<Int> ker = kernel(s, aug);
    out.is_injective = true;
    for (std::size_t c = 0; c < ker.cols() && out.is_injective; ++c)
      for (std::size_t j = 0; j < a; ++j) {
        const Int& ord = src.orders()[j];
        Int x = s.reduce(ker(j, c));
        if (!src.reduce_mod_order(x, ord).is_zero()) {
          out.is_injective = false;
          break;
        }
      }
  }
  return out;
}

/// Convenience overload taking a ring matrix between A-ambients.
inline InducedMap induced_map(const RMatrix& f, const PresentedModule& src,
                              const PresentedModule& dst) {
  if (f.rows() == 0 || f.cols() == 0)
    return induced_map(Matrix<Int>(dst.ambient(), src.ambient()), src, dst);
  return induced_map(scalar_expand(src.ring(), f), src, dst);
}

}  // namespace ddc
