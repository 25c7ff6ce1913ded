#include "poscomm/opalg.hpp"

#include <algorithm>

namespace poscomm {

std::string Window::str() const {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

CoeffSeq::CoeffSeq(Window w, std::vector<Scalar> values) : window_(w), values_(std::move(values)) {
  if (static_cast<long>(values_.size()) != window_.size()) {
    throw DomainError("CoeffSeq: " + std::to_string(values_.size()) + " values for window " +
                      window_.str());
  }
  for (const auto& v : values_) checked(v, "CoeffSeq");
}

CoeffSeq CoeffSeq::tabulate(Window w, const std::function<Scalar(long)>& f) {
  std::vector<Scalar> v;
  v.reserve(static_cast<size_t>(w.size()));
  for (long n = w.lo; n <= w.hi; ++n) v.push_back(f(n));
  return CoeffSeq(w, std::move(v));
}

CoeffSeq CoeffSeq::constant(Window w, const Scalar& c) {
  return CoeffSeq(w, std::vector<Scalar>(static_cast<size_t>(w.size()), c));
}

const Scalar& CoeffSeq::operator()(long n) const {
  if (!window_.contains(n)) {
    throw WindowError("sequence evaluated at n = " + std::to_string(n) + " outside its window " +
                      window_.str());
  }
  return values_[static_cast<size_t>(n - window_.lo)];
}

CoeffSeq CoeffSeq::restricted(const Window& w) const {
  if (!window_.covers(w)) {
    throw WindowError("cannot restrict sequence on " + window_.str() + " to " + w.str());
  }
  if (w.empty()) return CoeffSeq(w, {});
  auto first = values_.begin() + (w.lo - window_.lo);
  return CoeffSeq(w, std::vector<Scalar>(first, first + w.size()));
}

Scalar CoeffSeq::sup_norm() const {
  Scalar m(0);
  for (const auto& v : values_) m = std::max(m, Scalar(abs(v)));
  return m;
}

DiffOp::DiffOp(Window window, std::map<int, CoeffSeq> terms) : window_(window) {
  for (auto& [j, c] : terms) terms_.emplace(j, c.restricted(window_));
}

DiffOp DiffOp::shift(Window window, int k) {
  return DiffOp(window, {{k, CoeffSeq::constant(window, Scalar(1))}});
}

DiffOp DiffOp::identity(Window window) { return shift(window, 0); }

DiffOp DiffOp::multiplication(const CoeffSeq& c) { return DiffOp(c.window(), {{0, c}}); }

DiffOp DiffOp::zero(Window window) { return DiffOp(window, {}); }

namespace {

bool all_zero(const CoeffSeq& c) {
  return std::all_of(c.values().begin(), c.values().end(), [](const Scalar& v) { return v == 0; });
}

}  // namespace

int DiffOp::order() const {
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!all_zero(it->second)) return it->first;
  }
  throw DomainError("order of the zero operator");
}

int DiffOp::min_degree() const {
  for (const auto& [j, c] : terms_) {
    if (!all_zero(c)) return j;
  }
  throw DomainError("min degree of the zero operator");
}

bool DiffOp::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return all_zero(t.second); });
}

bool DiffOp::is_positive() const { return is_zero() || min_degree() >= 0; }

bool DiffOp::is_monic(const Scalar& tolerance) const {
  if (is_zero()) return false;
  const CoeffSeq& top = terms_.at(order());
  return std::all_of(top.values().begin(), top.values().end(),
                     [&](const Scalar& v) { return abs(v - 1) <= tolerance; });
}

Scalar DiffOp::coeff(int j, long n) const {
  if (!window_.contains(n)) {
    throw WindowError("operator coefficient requested at n = " + std::to_string(n) +
                      " outside " + window_.str());
  }
  auto it = terms_.find(j);
  return it == terms_.end() ? Scalar(0) : it->second(n);
}

DiffOp DiffOp::restricted(const Window& w) const {
  if (!window_.covers(w)) {
    throw WindowError("cannot restrict operator on " + window_.str() + " to " + w.str());
  }
  return DiffOp(w, terms_);
}

Scalar DiffOp::sup_norm() const {
  Scalar m(0);
  for (const auto& [j, c] : terms_) m = std::max(m, c.sup_norm());
  return m;
}

DiffOp DiffOp::operator-() const {
  std::map<int, CoeffSeq> t;
  for (const auto& [j, c] : terms_) {
    std::vector<Scalar> v = c.values();
    for (auto& x : v) x = -x;
    t.emplace(j, CoeffSeq(c.window(), std::move(v)));
  }
  return DiffOp(window_, std::move(t));
}

namespace {

DiffOp combine(const DiffOp& a, const DiffOp& b, int sign) {
  const Window w = a.window().intersect(b.window());
  if (w.empty()) {
    throw WindowError("operator windows " + a.window().str() + " and " + b.window().str() +
                      " do not overlap");
  }
  std::map<int, std::vector<Scalar>> acc;
  auto add = [&](const DiffOp& op, int s) {
    for (const auto& [j, c] : op.terms()) {
      auto [it, fresh] = acc.try_emplace(j, static_cast<size_t>(w.size()), Scalar(0));
      for (long n = w.lo; n <= w.hi; ++n) {
        if (s > 0) {
          it->second[static_cast<size_t>(n - w.lo)] += c(n);
        } else {
          it->second[static_cast<size_t>(n - w.lo)] -= c(n);
        }
      }
    }
  };
  add(a, 1);
  add(b, sign);
  std::map<int, CoeffSeq> terms;
  for (auto& [j, v] : acc) terms.emplace(j, CoeffSeq(w, std::move(v)));
  return DiffOp(w, std::move(terms));
}

}  // namespace

DiffOp operator+(const DiffOp& a, const DiffOp& b) { return combine(a, b, 1); }

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return combine(a, b, -1); }

DiffOp operator*(const Scalar& s, const DiffOp& a) {
  std::map<int, CoeffSeq> t;
  for (const auto& [j, c] : a.terms()) {
    std::vector<Scalar> v = c.values();
    for (auto& x : v) x *= s;
    t.emplace(j, CoeffSeq(c.window(), std::move(v)));
  }
  return DiffOp(a.window(), std::move(t));
}

CoeffSeq op_apply(const DiffOp& l, const CoeffSeq& f) {
  Window w = l.window();
  for (const auto& [j, c] : l.terms()) w = w.intersect(f.window().shifted(-j));
  if (w.empty()) {
    const long need_lo = l.window().lo + (l.terms().empty() ? 0 : l.terms().begin()->first);
    const long need_hi = l.window().hi + (l.terms().empty() ? 0 : l.terms().rbegin()->first);
    throw WindowError("op_apply: operator on " + l.window().str() + " needs f on [" +
                      std::to_string(need_lo) + ", " + std::to_string(need_hi) +
                      "], f is tabulated on " + f.window().str());
  }
  return CoeffSeq::tabulate(w, [&](long n) {
    Scalar acc(0);
    for (const auto& [j, c] : l.terms()) acc += c(n) * f(n + j);
    return acc;
  });
}

DiffOp op_mul(const DiffOp& a, const DiffOp& b) {
  // (A B)(n) needs a_i(n) and b_j(n + i) for every stored degree i of A.
  Window w = a.window();
  for (const auto& [i, c] : a.terms()) w = w.intersect(b.window().shifted(-i));
  if (w.empty()) {
    throw WindowError("op_mul: no index n with A on " + a.window().str() + " and B on " +
                      b.window().str() + " both defined");
  }
  std::map<int, std::vector<Scalar>> acc;
  for (const auto& [i, ca] : a.terms()) {
    for (const auto& [j, cb] : b.terms()) {
      auto [it, fresh] = acc.try_emplace(i + j, static_cast<size_t>(w.size()), Scalar(0));
      for (long n = w.lo; n <= w.hi; ++n) {
        it->second[static_cast<size_t>(n - w.lo)] += ca(n) * cb(n + i);
      }
    }
  }
  std::map<int, CoeffSeq> terms;
  for (auto& [k, v] : acc) terms.emplace(k, CoeffSeq(w, std::move(v)));
  return DiffOp(w, std::move(terms));
}

DiffOp op_left_scale(const CoeffSeq& c, const DiffOp& l) {
  const Window w = c.window().intersect(l.window());
  if (w.empty()) {
    throw WindowError("op_left_scale: sequence on " + c.window().str() + " and operator on " +
                      l.window().str() + " do not overlap");
  }
  std::map<int, CoeffSeq> terms;
  for (const auto& [j, u] : l.terms()) {
    terms.emplace(j, CoeffSeq::tabulate(w, [&](long n) { return c(n) * u(n); }));
  }
  return DiffOp(w, std::move(terms));
}

DiffOp op_commutator(const DiffOp& a, const DiffOp& b) { return op_mul(a, b) - op_mul(b, a); }

Scalar op_residual_norm(const DiffOp& l) { return l.sup_norm(); }

Scalar commutator_scale(const DiffOp& a, const DiffOp& b) { return a.sup_norm() * b.sup_norm(); }

DiffOp op_pow(const DiffOp& l, int k) {
  if (k < 0) throw DomainError("op_pow: negative exponent");
  DiffOp r = DiffOp::identity(l.window());
  for (int i = 0; i < k; ++i) r = op_mul(l, r);
  return r;
}

}  // namespace poscomm
