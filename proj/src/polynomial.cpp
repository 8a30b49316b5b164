#include "hsg/polynomial.hpp"

#include <algorithm>

namespace hsg {
namespace {

Polynomial::Monomial multiply(const Polynomial::Monomial& a, const Polynomial::Monomial& b) {
  Polynomial::Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::uint32_t exponent_of(const Polynomial::Monomial& m, std::uint32_t var) {
  for (const auto& [v, e] : m) {
    if (v == var) return e;
  }
  return 0;
}

}  // namespace

Polynomial::Polynomial(const Scalar& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::variable(std::uint32_t var) {
  Polynomial p;
  p.terms_.emplace(Monomial{{var, 1}}, Scalar(1));
  return p;
}

Polynomial Polynomial::from_series(const EpsSeries& s, std::uint32_t var) {
  Polynomial p;
  for (std::size_t j = 0; j < s.order(); ++j) {
    if (s[j].is_zero()) continue;
    Monomial m;
    if (j > 0) m.emplace_back(var, static_cast<std::uint32_t>(j));
    p.terms_.emplace(std::move(m), s[j]);
  }
  return p;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

int Polynomial::total_degree() const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    int d = 0;
    for (const auto& [v, e] : m) d += static_cast<int>(e);
    best = std::max(best, d);
  }
  return best;
}

std::uint32_t Polynomial::degree_in(std::uint32_t var) const {
  std::uint32_t best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, exponent_of(m, var));
  return best;
}

Polynomial Polynomial::truncated_in(std::uint32_t var, std::uint32_t order) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    if (exponent_of(m, var) < order) r.terms_.emplace(m, c);
  }
  return r;
}

Polynomial Polynomial::coefficient_in(std::uint32_t var, std::uint32_t j) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    if (exponent_of(m, var) != j) continue;
    Monomial rest;
    for (const auto& ve : m) {
      if (ve.first != var) rest.push_back(ve);
    }
    r.add_term(rest, c);
  }
  return r;
}

Scalar Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

Scalar Polynomial::evaluate(std::span<const Scalar> point) const {
  Scalar acc;
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    for (const auto& [v, e] : m) {
      if (v >= point.size()) throw ArgumentError("evaluation point too short");
      for (std::uint32_t k = 0; k < e; ++k) t *= point[v];
    }
    acc += t;
  }
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(multiply(ma, mb), ca * cb);
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.to_string();
    for (const auto& [v, e] : m) {
      out += "*x" + std::to_string(v);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

}  // namespace hsg
