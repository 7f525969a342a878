#include "bcov/weil.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "bcov/parallel.hpp"

namespace bcov {

namespace {

Mat2 gen_matrix(Gen g) {
  Mat2 m;
  switch (g) {
    case Gen::S: m << 0, -1, 1, 0; break;
    case Gen::T: m << 1, 1, 0, 1; break;
    case Gen::Tinv: m << 1, -1, 0, 1; break;
  }
  return m;
}

Mat2 inverse_sl2(const Mat2& m) {
  Mat2 r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r;
}

}  // namespace

MetaplecticWord::MetaplecticWord(std::vector<Gen> word) : word_(std::move(word)) {
  for (Gen g : word_) matrix_ = matrix_ * gen_matrix(g);
}

MetaplecticWord MetaplecticWord::parse(std::string_view letters) {
  std::vector<Gen> w;
  for (char c : letters) {
    if (c == 'S') w.push_back(Gen::S);
    else if (c == 'T') w.push_back(Gen::T);
    else if (c == 't') w.push_back(Gen::Tinv);
  }
  return MetaplecticWord(std::move(w));
}

std::string MetaplecticWord::str() const {
  std::string s;
  for (Gen g : word_) s += g == Gen::S ? 'S' : g == Gen::T ? 'T' : 't';
  return s;
}

MetaplecticWord MetaplecticWord::operator*(const MetaplecticWord& other) const {
  std::vector<Gen> w = word_;
  w.insert(w.end(), other.word_.begin(), other.word_.end());
  return MetaplecticWord(std::move(w));
}

MetaplecticWord MetaplecticWord::inverse() const {
  std::vector<Gen> w;
  for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
    if (*it == Gen::S) w.insert(w.end(), 7, Gen::S);
    else w.push_back(*it == Gen::T ? Gen::Tinv : Gen::T);
  }
  return MetaplecticWord(std::move(w));
}

bool in_gamma0(const Mat2& m, std::int64_t N) { return m(1, 0) % N == 0; }

std::vector<MetaplecticWord> coset_reps_gamma0_4() {
  std::vector<MetaplecticWord> reps{MetaplecticWord()};
  std::deque<MetaplecticWord> queue{MetaplecticWord()};
  const Gen alphabet[] = {Gen::S, Gen::T, Gen::Tinv};
  while (!queue.empty()) {
    MetaplecticWord w = queue.front();
    queue.pop_front();
    for (Gen g : alphabet) {
      MetaplecticWord nw = w * MetaplecticWord({g});
      const bool known = std::any_of(reps.begin(), reps.end(), [&](const MetaplecticWord& r) {
        return in_gamma0(nw.matrix() * inverse_sl2(r.matrix()), 4);
      });
      if (!known) {
        reps.push_back(nw);
        queue.push_back(nw);
      }
    }
  }
  return reps;
}

WeilRepresentation::WeilRepresentation(DiscriminantForm df, std::pair<int, int> sig)
    : df_(std::move(df)), sig_(sig) {
  const std::int64_t e = df_.exponent();
  level_ = std::lcm<std::int64_t>(2 * e, 8);
  const std::size_t n = df_.size();
  texp_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    // e(q/2) = zeta^{q L / 2}
    Rational t = df_.q(a) * Rational(level_, 2);
    if (t.denominator() != 1) fail(ErrorCode::InvalidArgument, "q(gamma) incompatible with level");
    texp_[a] = ((t.numerator() % level_) + level_) % level_;
  }
  sexp_ = ((static_cast<std::int64_t>(sig_.second - sig_.first) * level_ / 8) % level_ + level_) % level_;
  const std::size_t ng = df_.num_generators();
  std::vector<std::size_t> gens(ng);
  for (std::size_t j = 0; j < ng; ++j) {
    std::vector<std::int64_t> c(ng, 0);
    c[j] = 1;
    gens[j] = df_.index(c);
  }
  brow_.assign(n, std::vector<std::int64_t>(ng + ng, 0));
  for (std::size_t a = 0; a < n; ++a) {
    const auto ca = df_.element(a);
    for (std::size_t j = 0; j < ng; ++j) {
      Rational t = df_.b(a, gens[j]) * Rational(level_);
      brow_[a][j] = t.numerator() % level_;
      brow_[a][ng + j] = ca[j];
    }
  }
}

std::int64_t WeilRepresentation::b_exponent(std::size_t g, std::size_t d) const {
  const std::size_t ng = df_.num_generators();
  const auto& rg = brow_[g];
  const auto& rd = brow_[d];
  std::int64_t s = 0;
  for (std::size_t j = 0; j < ng; ++j) s += rg[j] * rd[ng + j];
  s %= level_;
  return (level_ - s) % level_;
}

Eigen::MatrixXcd WeilRepresentation::matrix(const MetaplecticWord& w) const {
  const std::size_t n = size();
  const auto r = roots();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<Complex> v(n, Complex(0));
    v[a] = 1;
    v = apply(w, v, r);
    for (std::size_t d = 0; d < n; ++d) m(d, a) = v[d];
  }
  return m;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> weil_generators(const DiscriminantForm& df,
                                                              std::pair<int, int> sig) {
  WeilRepresentation rho(df, sig);
  return {rho.matrix(MetaplecticWord({Gen::T})), rho.matrix(MetaplecticWord({Gen::S}))};
}

Complex FourierTable::coeff(std::size_t gamma, const Rational& k) const {
  if (gamma >= coeffs.size()) fail(ErrorCode::SizeMismatch, "component index out of range");
  if (k > kmax) fail(ErrorCode::MissingCoefficient, "exponent beyond table range");
  auto it = coeffs[gamma].find(k);
  return it == coeffs[gamma].end() ? Complex(0) : it->second;
}

Eigen::VectorXcd FourierTable::eval(Complex tau) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(coeffs.size());
  for (std::size_t g = 0; g < coeffs.size(); ++g)
    for (const auto& [k, c] : coeffs[g])
      out[g] += c * std::exp(Complex(0, 2 * M_PI) * boost::rational_cast<double>(k) * tau);
  return out;
}

FourierTable scale(const FourierTable& t, const Rational& s) {
  FourierTable r = t;
  const double f = boost::rational_cast<double>(s);
  for (auto& comp : r.coeffs)
    for (auto& [k, c] : comp) c *= f;
  for (auto& comp : r.bounds)
    for (auto& [k, b] : comp) b *= std::abs(f);
  return r;
}

FourierTable add(const FourierTable& a, const FourierTable& b) {
  if (a.coeffs.size() != b.coeffs.size()) fail(ErrorCode::SizeMismatch, "tables over different forms");
  FourierTable r = a;
  r.kmax = std::min(a.kmax, b.kmax);
  r.max_imag = std::max(a.max_imag, b.max_imag);
  r.bounds.resize(r.coeffs.size());
  for (std::size_t g = 0; g < r.coeffs.size(); ++g) {
    for (const auto& [k, c] : b.coeffs[g]) r.coeffs[g][k] += c;
    if (g < b.bounds.size())
      for (const auto& [k, e] : b.bounds[g]) r.bounds[g][k] += e;
    for (auto it = r.coeffs[g].begin(); it != r.coeffs[g].end();)
      it = it->first > r.kmax ? r.coeffs[g].erase(it) : std::next(it);
  }
  return r;
}

double integrality_residual(const FourierTable& t, const Rational& factor) {
  const double f = boost::rational_cast<double>(factor);
  double worst = 0;
  for (const auto& comp : t.coeffs)
    for (const auto& [k, c] : comp) {
      const Complex x = f * c;
      worst = std::max({worst, std::abs(x.real() - std::round(x.real())), std::abs(x.imag())});
    }
  return worst;
}

FourierTable rounded(const FourierTable& t, const Rational& factor) {
  FourierTable r = t;
  const double f = boost::rational_cast<double>(factor);
  for (auto& comp : r.coeffs)
    for (auto& [k, c] : comp) c = Complex(std::round(f * c.real()) / f, 0);
  return r;
}

namespace {

// Gamma0(4) must fix e_0 up to the character of phi, i.e. the level divides 4.
std::pair<int, int> require_lambda_signature(const Lattice& L) {
  const auto sig = signature(L);
  if (sig.first != 2) fail(ErrorCode::WrongSignature, "F_Lambda needs signature (2, r-2)");
  const auto df = discriminant_form(L);
  bool ok = 4 % df.exponent() == 0;
  for (std::size_t a = 0; ok && a < df.size(); ++a) ok = (df.q(a) * Rational(2)).denominator() == 1;
  if (!ok) fail(ErrorCode::InvalidArgument, "F_Lambda needs a lattice of level dividing 4");
  return sig;
}

}  // namespace

FLambdaEvaluator::FLambdaEvaluator(const Lattice& L)
    : rank_(static_cast<int>(L.rank())),
      weil_(discriminant_form(L), require_lambda_signature(L)),
      cosets_(coset_reps_gamma0_4()) {
  set_cosets(cosets_);
}

void FLambdaEvaluator::set_cosets(std::vector<MetaplecticWord> reps) {
  cosets_ = std::move(reps);
  const auto roots = weil_.roots();
  std::vector<Complex> e0(weil_.size(), Complex(0));
  e0[0] = 1;
  vectors_.clear();
  for (const auto& c : cosets_) vectors_.push_back(weil_.apply_inverse(c, e0, roots));
}

Eigen::VectorXcd FLambdaEvaluator::operator()(Complex tau) const {
  require_upper_half(tau);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(weil_.size());
  for (std::size_t i = 0; i < cosets_.size(); ++i) {
    const Complex s = ipow(cosets_[i].branch(tau), rank_ - 4) * phi_lambda(cosets_[i].act(tau), rank_);
    for (std::size_t g = 0; g < weil_.size(); ++g) out[g] += s * vectors_[i][g];
  }
  return out;
}

FourierTable f_lambda_table(const Lattice& L, const FLambdaOptions& opt) {
  const auto sig = require_lambda_signature(L);
  const int r = static_cast<int>(L.rank());
  const int N = opt.nSamples;
  const int depth = opt.principalDepth;
  const double Y = opt.sampleY;
  const double kmaxd = boost::rational_cast<double>(opt.kMax);
  if (N < 4 || (N & (N - 1)) != 0 || N < 4 * (kmaxd + depth))
    fail(ErrorCode::InvalidArgument, "nSamples must be a power of two >= 4 (kMax + depth)");
  if (!(Y >= 1)) fail(ErrorCode::InvalidArgument, "sampleY must be >= 1");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "principal depth must be >= 1");

  const int digits =
      static_cast<int>(std::ceil(2 * M_PI * (kmaxd + depth + 1) * Y / std::log(10.0))) + opt.extraDigits;
  PrecisionGuard guard(digits);

  WeilRepresentation rho(discriminant_form(L), sig);
  const std::size_t nA = rho.size();
  const auto reps = coset_reps_gamma0_4();
  const std::size_t nc = reps.size();
  const auto roots = rho.roots_of_unity<MpComplex>();
  std::vector<std::vector<MpComplex>> vecs;
  {
    std::vector<MpComplex> e0(nA, MpComplex(0));
    e0[0] = MpComplex(1);
    for (const auto& c : reps) vecs.push_back(rho.apply_inverse(c, e0, roots));
  }

  // Slashed coset functions on the horocycle.
  std::vector<std::vector<MpComplex>> samples(nc, std::vector<MpComplex>(N));
  std::vector<double> smax(nc, 0.0);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t j) {
    const MpComplex tau(MpReal(static_cast<long>(j)) / MpReal(N), MpReal(Y));
    for (std::size_t c = 0; c < nc; ++c)
      samples[c][j] = ipow(reps[c].branch(tau), r - 4) * phi_lambda(reps[c].act(tau), r);
  });
  for (std::size_t c = 0; c < nc; ++c)
    for (int j = 0; j < N; ++j) smax[c] = std::max(smax[c], to_double(abs(samples[c][j])));

  // omega[m] = e^{-2 pi i m / N}
  std::vector<MpComplex> omega(N);
  for (int m = 0; m < N; ++m) omega[m] = expi<MpComplex>(-two_pi<MpReal>() * MpReal(m) / MpReal(N));

  const std::int64_t Lv = rho.level();
  std::map<std::int64_t, std::vector<std::size_t>> byKappa;
  for (std::size_t g = 0; g < nA; ++g) byKappa[rho.t_exponent(g)].push_back(g);

  FourierTable table;
  table.form = rho.form();
  table.kmax = opt.kMax;
  table.coeffs.assign(nA, {});
  table.bounds.assign(nA, {});

  const double eps = std::pow(10.0, -(digits - 3)) * N;
  for (const auto& [tk, comps] : byKappa) {
    const Rational kappa(tk, Lv);
    const double kap = boost::rational_cast<double>(kappa);
    const int nmin = -depth;
    const int nmax = static_cast<int>(std::floor(kmaxd - kap + 1e-12));
    // twist[j] = e^{-2 pi i kappa j / N}
    std::vector<MpComplex> twist(N);
    for (int j = 0; j < N; ++j)
      twist[j] = expi<MpComplex>(-two_pi<MpReal>() * MpReal(static_cast<long>(tk)) * MpReal(j) /
                                 (MpReal(static_cast<long>(Lv)) * MpReal(N)));
    for (int n = nmin; n <= nmax; ++n) {
      std::vector<MpComplex> d(nc, MpComplex(0));
      for (std::size_t c = 0; c < nc; ++c) {
        MpComplex s(0);
        for (int j = 0; j < N; ++j) {
          const int m = static_cast<int>(((static_cast<long>(n) * j) % N + N) % N);
          s += samples[c][j] * twist[j] * omega[m];
        }
        d[c] = s / MpReal(N);
      }
      const Rational k = Rational(n) + kappa;
      const double kd = n + kap;
      const MpReal deweight = exp(two_pi<MpReal>() * MpReal(kd) * MpReal(Y));
      const double alias = 1e6 * std::exp(4 * M_PI * std::sqrt(kmaxd + N) - 2 * M_PI * N * Y);
      for (std::size_t g : comps) {
        MpComplex acc(0);
        double vs = 0;
        for (std::size_t c = 0; c < nc; ++c) {
          acc += vecs[c][g] * d[c];
          vs += to_double(abs(vecs[c][g])) * smax[c];
        }
        acc *= deweight;
        const Complex cd = to_complex(acc);
        const double bound = std::exp(2 * M_PI * kd * Y) * (eps * vs) + alias;
        if (bound > opt.tolerance) fail(ErrorCode::PrecisionLoss, "aliasing bound exceeds tolerance");
        table.max_imag = std::max(table.max_imag, std::abs(cd.imag()));
        table.coeffs[g][k] = Complex(cd.real(), 0);
        table.bounds[g][k] = bound;
      }
    }
  }

  // alpha = 2^{g-1} with g = (r - l)/2 for 2-elementary forms.
  const auto& dv = table.form.divisors();
  if (std::all_of(dv.begin(), dv.end(), [](std::int64_t x) { return x == 2; })) {
    const int g = (r - static_cast<int>(dv.size())) / 2;
    table.alpha = g >= 1 ? (std::int64_t(1) << (g - 1)) : 1;
  }
  return table;
}

Lattice special_f_lattice(std::string_view which) {
  const Lattice u = standard("U"), e8 = standard("E8");
  if (which == "U") return direct_sum({u, u, e8, e8});
  if (which == "U(2)") return direct_sum({u, standard("U(2)"), e8, e8});
  fail(ErrorCode::UnknownCase, "special f needs case U or U(2)");
}

namespace {

std::vector<double> series_product(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < std::min(n, a.size()); ++i)
    for (std::size_t j = 0; i + j < n && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace

FourierTable special_f_lambda(std::string_view which, int depth) {
  if (which != "U" && which != "U(2)") fail(ErrorCode::UnknownCase, "special f needs case U or U(2)");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  FourierTable t;
  t.form = discriminant_form(special_f_lattice(which));
  t.kmax = Rational(depth);
  t.coeffs.assign(t.form.size(), {});
  t.bounds.assign(t.form.size(), {});
  const std::size_t n = static_cast<std::size_t>(depth) + 2;
  if (which == "U") {
    // theta_E8 / eta^24 = q^{-1} sum a_m q^m
    const auto a = series_product(e8_theta_coefficients(depth + 1), inverse_eta_power_coefficients(24, depth + 1), n);
    for (std::size_t m = 0; m < n; ++m) t.coeffs[0][Rational(static_cast<std::int64_t>(m) - 1)] = a[m];
    return t;
  }
  // A(u) = prod (1-u^n)^-8 (1-u^{2n})^-8; 1/(eta(tau/2)^8 eta(tau)^8) = u^{-1} A(u), u = q^{1/2}.
  const std::size_t nu = 2 * n + 2;
  const auto A = series_product(inverse_eta_power_coefficients(8, static_cast<int>(nu)),
                                inverse_eta_power_coefficients(8, static_cast<int>(nu), 2), nu);
  for (std::size_t g = 0; g < t.form.size(); ++g) {
    // (-1)^{gamma^2}: h(tau) + (-1)^{g^2} h(tau+1) keeps u^{m-1} with (m-1) even or odd.
    const bool odd = t.form.q(g) == Rational(1);
    for (std::size_t m = 0; m < nu; ++m) {
      const std::int64_t e = static_cast<std::int64_t>(m) - 1;  // exponent in u
      if (((e % 2) != 0) != odd) continue;
      const Rational k(e, 2);
      if (k > t.kmax) continue;
      t.coeffs[g][k] += 8.0 * 2.0 * A[m];
    }
  }
  // e_0 gets 1/(eta(tau)^8 eta(2 tau)^8) = q^{-1} A(q).
  for (std::size_t m = 0; m < n; ++m) t.coeffs[0][Rational(static_cast<std::int64_t>(m) - 1)] += A[m];
  return t;
}

double verify_vvmf(const FLambdaEvaluator& F, const MetaplecticWord& g, Complex tau) {
  const auto roots = F.weil().roots();
  const Eigen::VectorXcd ft = F(tau);
  std::vector<Complex> v(ft.data(), ft.data() + ft.size());
  v = F.weil().apply(g, v, roots);
  const Complex factor = ipow(g.branch(tau), 4 - F.rank());
  const Eigen::VectorXcd lhs = F(g.act(tau));
  double worst = 0;
  for (Eigen::Index i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - factor * v[i]));
  return worst;
}

double verify_vvmf(const FourierTable& F, const WeilRepresentation& rho, const MetaplecticWord& g, Complex tau,
                   double weight) {
  const auto roots = rho.roots();
  const Eigen::VectorXcd ft = F.eval(tau);
  std::vector<Complex> v(ft.data(), ft.data() + ft.size());
  v = rho.apply(g, v, roots);
  const int twoW = static_cast<int>(std::lround(2 * weight));
  const Complex factor = ipow(g.branch(tau), twoW);
  const Eigen::VectorXcd lhs = F.eval(g.act(tau));
  double worst = 0;
  for (Eigen::Index i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - factor * v[i]));
  return worst;
}

}  // namespace bcov
