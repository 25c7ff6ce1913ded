#pragma once

// Difference operators sum_j u_j(n) T^j with n-dependent coefficients.
//
// Every coefficient sequence is tabulated on an explicit integer window at
// construction. Operations compute the exact window on which their result is
// determined and refuse to read outside it; nothing is padded with zeros.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "poscomm/scalar.hpp"

namespace poscomm {

/// Closed integer interval [lo, hi]; empty when lo > hi.
struct Window {
  long lo = 0;
  long hi = -1;

  bool empty() const { return lo > hi; }
  bool contains(long n) const { return lo <= n && n <= hi; }
  bool covers(const Window& o) const { return o.empty() || (lo <= o.lo && o.hi <= hi); }
  long size() const { return empty() ? 0 : hi - lo + 1; }
  Window shifted(long k) const { return {lo + k, hi + k}; }
  Window intersect(const Window& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
  Window widened(long k) const { return {lo - k, hi + k}; }
  std::string str() const;

  friend bool operator==(const Window&, const Window&) = default;
};

/// A sequence n -> Scalar tabulated on a window.
class CoeffSeq {
 public:
  CoeffSeq() = default;
  CoeffSeq(Window w, std::vector<Scalar> values);

  static CoeffSeq tabulate(Window w, const std::function<Scalar(long)>& f);
  static CoeffSeq constant(Window w, const Scalar& c);

  const Window& window() const { return window_; }
  /// Throws WindowError outside the window.
  const Scalar& operator()(long n) const;
  const std::vector<Scalar>& values() const { return values_; }

  CoeffSeq restricted(const Window& w) const;
  Scalar sup_norm() const;

 private:
  Window window_;
  std::vector<Scalar> values_;
};

/// sum_j u_j(n) T^j on a common window. Shift degrees may be negative.
class DiffOp {
 public:
  DiffOp() = default;
  /// Every term must cover `window`; terms are restricted to it.
  DiffOp(Window window, std::map<int, CoeffSeq> terms);

  static DiffOp shift(Window window, int k = 1);
  static DiffOp identity(Window window);
  /// Multiplication by the sequence c(n).
  static DiffOp multiplication(const CoeffSeq& c);
  static DiffOp zero(Window window);

  const Window& window() const { return window_; }
  const std::map<int, CoeffSeq>& terms() const { return terms_; }

  /// Highest shift degree with a coefficient not identically zero; throws for the zero operator.
  int order() const;
  int min_degree() const;
  bool is_zero() const;
  bool is_positive() const;
  /// Top coefficient equals 1 on the whole window.
  bool is_monic(const Scalar& tolerance = Scalar(0)) const;

  /// u_j(n); zero for absent degrees.
  Scalar coeff(int j, long n) const;

  DiffOp restricted(const Window& w) const;
  /// Max over j, n of |u_j(n)|.
  Scalar sup_norm() const;

  DiffOp operator-() const;
  friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator*(const Scalar& s, const DiffOp& a);

 private:
  Window window_;
  std::map<int, CoeffSeq> terms_;
};

/// (L f)(n) = sum_j u_j(n) f(n+j) on every n of L's window where all needed
/// values of f exist. Throws WindowError naming missing indices when none do.
CoeffSeq op_apply(const DiffOp& l, const CoeffSeq& f);

/// Composition A∘B using T^i ∘ b(n) = b(n+i) T^i.
DiffOp op_mul(const DiffOp& a, const DiffOp& b);

/// c(n) ∘ L: scales every coefficient of L pointwise.
DiffOp op_left_scale(const CoeffSeq& c, const DiffOp& l);

DiffOp op_commutator(const DiffOp& a, const DiffOp& b);

/// max_{j,n} |u_j(n)|; the zero operator gives 0.
Scalar op_residual_norm(const DiffOp& l);

/// Tolerance scale for a commutator of a and b: product of their sup norms.
Scalar commutator_scale(const DiffOp& a, const DiffOp& b);

/// L^k for k >= 0 (identity for k = 0 on L's window).
DiffOp op_pow(const DiffOp& l, int k);

}  // namespace poscomm
