#pragma once

// Template members of WeilRepresentation.

namespace bcov {

template <class C>
std::vector<C> WeilRepresentation::roots_of_unity() const {
  using Real = real_t<C>;
  std::vector<C> r(static_cast<std::size_t>(level_));
  for (std::int64_t k = 0; k < level_; ++k) r[k] = expi<C>(two_pi<Real>() * Real(k) / Real(level_));
  return r;
}

template <class C>
std::vector<C> WeilRepresentation::apply(Gen g, const std::vector<C>& v, bool inverse,
                                         const std::vector<C>& roots) const {
  using Real = real_t<C>;
  using std::sqrt;
  const std::size_t n = size();
  if (v.size() != n) fail(ErrorCode::SizeMismatch, "vector length differs from |A|");
  std::vector<C> out(n);
  if (g != Gen::S) {
    const bool plus = (g == Gen::T) != inverse;
    for (std::size_t a = 0; a < n; ++a) {
      std::int64_t e = plus ? texp_[a] : (level_ - texp_[a]) % level_;
      out[a] = roots[e] * v[a];
    }
    return out;
  }
  // rho(S) is symmetric; its inverse is the conjugate.
  const std::int64_t pe = inverse ? (level_ - sexp_) % level_ : sexp_;
  const C pref = roots[pe] / sqrt(Real(static_cast<double>(n)));
  std::vector<C> bucket(static_cast<std::size_t>(level_));
  for (std::size_t d = 0; d < n; ++d) {
    std::fill(bucket.begin(), bucket.end(), C(0));
    for (std::size_t a = 0; a < n; ++a) {
      std::int64_t e = b_exponent(a, d);
      if (inverse) e = (level_ - e) % level_;
      bucket[e] += v[a];
    }
    C s(0);
    for (std::int64_t k = 0; k < level_; ++k) s += roots[k] * bucket[k];
    out[d] = pref * s;
  }
  return out;
}

template <class C>
std::vector<C> WeilRepresentation::apply(const MetaplecticWord& w, std::vector<C> v,
                                         const std::vector<C>& roots) const {
  const auto& word = w.word();
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply(*it, v, false, roots);
  return v;
}

template <class C>
std::vector<C> WeilRepresentation::apply_inverse(const MetaplecticWord& w, std::vector<C> v,
                                                 const std::vector<C>& roots) const {
  for (Gen g : w.word()) v = apply(g, v, true, roots);
  return v;
}

}  // namespace bcov
