#include "hsg/eps_series.hpp"

#include <string>
#include <vector>

namespace hsg {

EpsSeries parse_series(std::string_view text) {
  std::vector<Scalar> coeffs;
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    coeffs.push_back(Scalar::parse(text.substr(start, semi - start)));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return EpsSeries(coeffs.begin(), coeffs.end());
}

Scalar series_to_scalar(const EpsSeries& s) {
  if (!s.is_constant()) {
    throw RingError("eps-series " + s.to_string() + " used where a scalar is required");
  }
  return s[0];
}

FpSeries series_to_fp(const EpsSeries& s, std::uint64_t p, std::size_t order) {
  std::vector<Fp> coeffs;
  coeffs.reserve(order);
  for (std::size_t j = 0; j < order; ++j) {
    coeffs.push_back(j < s.order() ? s[j].to_fp(p) : Fp(0, p));
  }
  return FpSeries(coeffs.begin(), coeffs.end());
}

EpsSeries reduce_series(const EpsSeries& s, std::uint64_t p) {
  EpsSeries r = s;
  for (std::size_t j = 0; j < r.order(); ++j) r[j] = r[j].reduce(p);
  return r;
}

}  // namespace hsg
