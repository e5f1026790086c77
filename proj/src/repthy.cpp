#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "abcd/repthy.hpp"

namespace abcd::su2 {

namespace {

void require_cap(unsigned two_j, const McConfig& cfg) {
  if (two_j > cfg.spin_cap_two_j)
    throw std::invalid_argument("spin 2j = " + std::to_string(two_j) + " exceeds the spin cap 2j = " +
                                std::to_string(cfg.spin_cap_two_j));
}

void require_samples(const McConfig& cfg) {
  if (cfg.samples < 100) throw std::invalid_argument("Monte Carlo needs at least 100 samples");
}

/// Per-entry sums of x and |x|^2; merged by addition.
struct EntrySums {
  std::uint64_t count = 0;
  std::vector<double> re, im, sq;

  explicit EntrySums(std::size_t n = 0) : re(n), im(n), sq(n) {}

  void add(std::size_t e, cplx x) {
    re[e] += x.real();
    im[e] += x.imag();
    sq[e] += std::norm(x);
  }
  void merge(const EntrySums& o) {
    count += o.count;
    for (std::size_t e = 0; e < re.size(); ++e) {
      re[e] += o.re[e];
      im[e] += o.im[e];
      sq[e] += o.sq[e];
    }
  }
  [[nodiscard]] cplx mean(std::size_t e) const {
    return {re[e] / static_cast<double>(count), im[e] / static_cast<double>(count)};
  }
  [[nodiscard]] double std_error(std::size_t e) const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sq[e] - n * std::norm(mean(e))) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

template <class Body>
EntrySums run_entry_mc(std::size_t entries, const McConfig& cfg, Body&& body) {
  require_samples(cfg);
  auto parts = mc::run_blocks<EntrySums>(
      cfg.samples, cfg.blocks, cfg.stream,
      [&](Rng& rng, std::uint64_t count, std::size_t) {
        EntrySums acc(entries);
        acc.count = count;
        for (std::uint64_t s = 0; s < count; ++s) body(rng, acc);
        return acc;
      },
      cfg.exec);
  EntrySums total(entries);
  for (const auto& p : parts) total.merge(p);
  return total;
}

std::vector<cplx> coeffs(SpinIrrep j, const ComplexMatrix& u) {
  std::vector<cplx> out(j.dim() * j.dim());
  normalized_coefficients(j, u, out);
  return out;
}

// acc[offset + (ij * d2^2 + kl)] += a_ij * b_kl (b optionally conjugated).
inline void outer_accumulate(EntrySums& acc, std::size_t offset, const std::vector<cplx>& a,
                             const std::vector<cplx>& b, bool conj_b) {
  const double sign = conj_b ? -1.0 : 1.0;
  std::size_t e = offset;
  for (const cplx& x : a) {
    const double xr = x.real(), xi = x.imag();
    const double xn = xr * xr + xi * xi;
    for (const cplx& y : b) {
      const double yr = y.real(), yi = sign * y.imag();
      acc.re[e] += xr * yr - xi * yi;
      acc.im[e] += xr * yi + xi * yr;
      acc.sq[e] += xn * (yr * yr + yi * yi);
      ++e;
    }
  }
}

using PairKey = std::pair<unsigned, unsigned>;

std::map<PairKey, CheckResult> schur_pairs(const std::vector<PairKey>& pairs, unsigned max_two_j,
                                           const McConfig& cfg) {
  std::vector<std::size_t> offset;
  std::size_t entries = 0;
  for (const auto& [a, b] : pairs) {
    offset.push_back(entries);
    entries += (a + 1) * (a + 1) * (b + 1) * (b + 1);
  }
  const EntrySums sums = run_entry_mc(entries, cfg, [&](Rng& rng, EntrySums& acc) {
    const SpecialUnitary g = haar_su(2, rng);
    std::vector<std::vector<cplx>> p(max_two_j + 1);
    for (unsigned t = 0; t <= max_two_j; ++t) p[t] = coeffs({t}, g.matrix());
    for (std::size_t q = 0; q < pairs.size(); ++q)
      outer_accumulate(acc, offset[q], p[pairs[q].first], p[pairs[q].second], true);
  });

  std::map<PairKey, CheckResult> out;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [a, b] = pairs[q];
    const std::size_t da = a + 1, db = b + 1;
    CheckResult r{0.0, 0.0, sums.count, da * da * db * db};
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t k = 0; k < db; ++k)
          for (std::size_t l = 0; l < db; ++l) {
            const std::size_t e = offset[q] + (i * da + j) * db * db + k * db + l;
            const double expected = (a == b && i == k && j == l) ? 1.0 : 0.0;
            r.max_deviation = std::max(r.max_deviation, std::abs(sums.mean(e) - expected));
            r.max_std_error = std::max(r.max_std_error, sums.std_error(e));
          }
    out[pairs[q]] = r;
  }
  return out;
}

}  // namespace

mc::Estimate haar_expect_mc(const std::function<cplx(const ComplexMatrix&)>& f,
                            const McConfig& cfg) {
  return haar_expect_mc(
      [&f](const ComplexMatrix& x, const ComplexMatrix&) { return f(x); }, cfg);
}

mc::Estimate haar_expect_mc(
    const std::function<cplx(const ComplexMatrix&, const ComplexMatrix&)>& f, const McConfig& cfg) {
  require_samples(cfg);
  const auto parts = mc::run_blocks<mc::MeanAccumulator>(
      cfg.samples, cfg.blocks, cfg.stream,
      [&](Rng& rng, std::uint64_t count, std::size_t) {
        mc::MeanAccumulator acc;
        for (std::uint64_t s = 0; s < count; ++s) {
          const SpecialUnitary x = haar_su(2, rng);
          const SpecialUnitary y = haar_su(2, rng);
          acc.add(f(x.matrix(), y.matrix()));
        }
        return acc;
      },
      cfg.exec);
  mc::MeanAccumulator total;
  for (const auto& p : parts) total.merge(p);
  return mc::to_estimate(total);
}

CheckResult check_schur(SpinIrrep pi, SpinIrrep sigma, const McConfig& cfg) {
  require_cap(pi.two_j, cfg);
  require_cap(sigma.two_j, cfg);
  const PairKey key{pi.two_j, sigma.two_j};
  return schur_pairs({key}, std::max(pi.two_j, sigma.two_j), cfg).at(key);
}

std::map<PairKey, CheckResult> schur_sweep(unsigned max_two_j, const McConfig& cfg) {
  require_cap(max_two_j, cfg);
  std::vector<PairKey> pairs;
  for (unsigned a = 0; a <= max_two_j; ++a)
    for (unsigned b = 0; b <= max_two_j; ++b) pairs.emplace_back(a, b);
  return schur_pairs(pairs, max_two_j, cfg);
}

const std::vector<ComplexMatrix>& convolution_test_points() {
  static const std::vector<ComplexMatrix> points = [] {
    std::vector<ComplexMatrix> pts;
    const RngStream base{0x5EED'C0DE'0000'0001ULL, 0};
    for (std::uint64_t p = 0; p < 10; ++p) pts.push_back(haar_su(2, base.derive(p)).matrix());
    return pts;
  }();
  return points;
}

namespace {

struct ConvTuple {
  std::size_t i, j, k, l;
};

// Shared engine: for every test point g and listed pair, accumulates
// pi~_{ij}(g h^-1) sigma~_{kl}(h) for all index tuples (or one tuple).
std::map<PairKey, CheckResult> convolution_pairs(const std::vector<PairKey>& pairs,
                                                 unsigned max_two_j, const ConvTuple* only,
                                                 const McConfig& cfg) {
  const auto& points = convolution_test_points();
  const std::size_t np = points.size();
  std::vector<std::size_t> offset;
  std::size_t per_point = 0;
  for (const auto& [a, b] : pairs) {
    offset.push_back(per_point);
    per_point += only ? 1 : (a + 1) * (a + 1) * (b + 1) * (b + 1);
  }
  const std::size_t entries = per_point * np;

  const EntrySums sums = run_entry_mc(entries, cfg, [&](Rng& rng, EntrySums& acc) {
    const SpecialUnitary h = haar_su(2, rng);
    const ComplexMatrix h_inv = mat_adjoint(h.matrix());
    std::vector<std::vector<cplx>> ph(max_two_j + 1), pg(max_two_j + 1);
    for (unsigned t = 0; t <= max_two_j; ++t) ph[t] = coeffs({t}, h.matrix());
    for (std::size_t p = 0; p < np; ++p) {
      const ComplexMatrix gh = mat_mul(points[p], h_inv);
      for (unsigned t = 0; t <= max_two_j; ++t) pg[t] = coeffs({t}, gh);
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const std::size_t base = p * per_point + offset[q];
        const auto& x = pg[pairs[q].first];
        const auto& y = ph[pairs[q].second];
        if (only) {
          const std::size_t da = pairs[q].first + 1, db = pairs[q].second + 1;
          acc.add(base, x[only->i * da + only->j] * y[only->k * db + only->l]);
        } else {
          outer_accumulate(acc, base, x, y, false);
        }
      }
    }
  });

  std::map<PairKey, CheckResult> out;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [a, b] = pairs[q];
    const std::size_t da = a + 1, db = b + 1;
    CheckResult r{0.0, 0.0, sums.count, 0};
    for (std::size_t p = 0; p < np; ++p) {
      const std::vector<cplx> target = coeffs({a}, points[p]);
      const auto visit = [&](std::size_t e, ConvTuple t) {
        cplx expected = 0.0;
        if (a == b && t.j == t.k)
          expected = target[t.i * da + t.l] / std::sqrt(static_cast<double>(da));
        r.max_deviation = std::max(r.max_deviation, std::abs(sums.mean(e) - expected));
        r.max_std_error = std::max(r.max_std_error, sums.std_error(e));
        ++r.entries;
      };
      const std::size_t base = p * per_point + offset[q];
      if (only) {
        visit(base, *only);
        continue;
      }
      for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
          for (std::size_t k = 0; k < db; ++k)
            for (std::size_t l = 0; l < db; ++l)
              visit(base + (i * da + j) * db * db + k * db + l, {i, j, k, l});
    }
    out[pairs[q]] = r;
  }
  return out;
}

}  // namespace

CheckResult check_convolution(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t j,
                              std::size_t k, std::size_t l, const McConfig& cfg) {
  require_cap(pi.two_j, cfg);
  require_cap(sigma.two_j, cfg);
  if (i >= pi.dim() || j >= pi.dim() || k >= sigma.dim() || l >= sigma.dim())
    throw std::invalid_argument("check_convolution: index outside irrep dimension");
  const PairKey key{pi.two_j, sigma.two_j};
  const ConvTuple t{i, j, k, l};
  return convolution_pairs({key}, std::max(pi.two_j, sigma.two_j), &t, cfg).at(key);
}

std::map<PairKey, CheckResult> convolution_sweep(unsigned max_two_j, const McConfig& cfg) {
  require_cap(max_two_j, cfg);
  std::vector<PairKey> pairs;
  for (unsigned a = 0; a <= max_two_j; ++a)
    for (unsigned b = 0; b <= max_two_j; ++b) pairs.emplace_back(a, b);
  return convolution_pairs(pairs, max_two_j, nullptr, cfg);
}

cplx FourierCoefficient::at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
  const std::size_t dp = pi.dim(), ds = sigma.dim();
  return tensor.at(((i * dp + j) * ds + k) * ds + l);
}

FourierCoefficient fourier_coeff_mc(
    const std::function<cplx(const ComplexMatrix&, const ComplexMatrix&)>& f, SpinIrrep pi,
    SpinIrrep sigma, const McConfig& cfg) {
  require_cap(pi.two_j, cfg);
  require_cap(sigma.two_j, cfg);
  const std::size_t dp = pi.dim(), ds = sigma.dim();
  const std::size_t entries = dp * dp * ds * ds;
  const EntrySums sums = run_entry_mc(entries, cfg, [&](Rng& rng, EntrySums& acc) {
    const SpecialUnitary x = haar_su(2, rng);
    const SpecialUnitary y = haar_su(2, rng);
    const cplx fv = f(x.matrix(), y.matrix());
    // pi~(X^-1)_{ij} = conj(pi~(X)_{ji}), evaluated literally at X^dagger.
    std::vector<cplx> px = coeffs(pi, mat_adjoint(x.matrix()));
    const std::vector<cplx> py = coeffs(sigma, mat_adjoint(y.matrix()));
    for (auto& z : px) z *= fv;
    outer_accumulate(acc, 0, px, py, false);
  });
  FourierCoefficient out{pi, sigma, std::vector<cplx>(entries), 0.0};
  for (std::size_t e = 0; e < entries; ++e) {
    out.tensor[e] = sums.mean(e);
    out.std_error = std::max(out.std_error, sums.std_error(e));
  }
  return out;
}

FourierCoefficient fourier_coeff_mc(const BandLimitedFn& f, SpinIrrep pi, SpinIrrep sigma,
                                    const McConfig& cfg) {
  require_cap(f.max_two_j(), cfg);
  return fourier_coeff_mc(
      [&f](const ComplexMatrix& x, const ComplexMatrix& y) { return f(x, y); }, pi, sigma, cfg);
}

FourierCoefficient fourier_coeff_exact(const BandLimitedFn& f, SpinIrrep pi, SpinIrrep sigma) {
  const std::size_t dp = pi.dim(), ds = sigma.dim();
  FourierCoefficient out{pi, sigma, std::vector<cplx>(dp * dp * ds * ds), 0.0};
  for (std::size_t i = 0; i < dp; ++i)
    for (std::size_t j = 0; j < dp; ++j)
      for (std::size_t k = 0; k < ds; ++k)
        for (std::size_t l = 0; l < ds; ++l)
          out.tensor[((i * dp + j) * ds + k) * ds + l] = f.fourier(pi, sigma, i, j, k, l);
  return out;
}

namespace {

using FourierKey = std::tuple<unsigned, unsigned, std::size_t, std::size_t, std::size_t, std::size_t>;

std::set<FourierKey> support(const BandLimitedFn& f) {
  std::set<FourierKey> keys;
  for (const Term& t : f.terms()) keys.emplace(t.pi.two_j, t.sigma.two_j, t.k, t.i, t.m, t.l);
  return keys;
}

}  // namespace

cplx plancherel_rhs(const BandLimitedFn& f, const BandLimitedFn& h) {
  const auto fk = support(f);
  const auto hk = support(h);
  cplx sum = 0.0;
  for (const auto& key : fk) {
    if (!hk.contains(key)) continue;
    const auto [a, b, i, j, k, l] = key;
    sum += f.fourier({a}, {b}, i, j, k, l) * std::conj(h.fourier({a}, {b}, i, j, k, l));
  }
  return sum;
}

IdentityCheck check_plancherel(const BandLimitedFn& f, const BandLimitedFn& h, const McConfig& cfg) {
  require_cap(std::max(f.max_two_j(), h.max_two_j()), cfg);
  const mc::Estimate lhs = haar_expect_mc(
      [&](const ComplexMatrix& x, const ComplexMatrix& y) { return f(x, y) * std::conj(h(x, y)); },
      cfg);
  return {lhs.value, lhs.std_error, plancherel_rhs(f, h)};
}

IdentityCheck mu_diag_coeff(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t j,
                            std::size_t k, std::size_t l, const McConfig& cfg) {
  require_cap(pi.two_j, cfg);
  require_cap(sigma.two_j, cfg);
  if (i >= pi.dim() || j >= pi.dim() || k >= sigma.dim() || l >= sigma.dim())
    throw std::invalid_argument("mu_diag_coeff: index outside irrep dimension");
  const mc::Estimate lhs = haar_expect_mc(
      [&](const ComplexMatrix& x) {
        const auto px = coeffs(pi, x);
        const auto pinv = coeffs(sigma, mat_adjoint(x));
        return px[i * pi.dim() + j] * pinv[k * sigma.dim() + l];
      },
      cfg);
  const double expected = (pi == sigma && i == l && j == k) ? 1.0 : 0.0;
  return {lhs.value, lhs.std_error, expected};
}

std::map<PairKey, CheckResult> mu_diag_sweep(unsigned max_two_j, const McConfig& cfg) {
  require_cap(max_two_j, cfg);
  std::vector<PairKey> pairs;
  std::vector<std::size_t> offset;
  std::size_t entries = 0;
  for (unsigned a = 0; a <= max_two_j; ++a)
    for (unsigned b = 0; b <= max_two_j; ++b) {
      pairs.emplace_back(a, b);
      offset.push_back(entries);
      entries += (a + 1) * (a + 1) * (b + 1) * (b + 1);
    }
  const EntrySums sums = run_entry_mc(entries, cfg, [&](Rng& rng, EntrySums& acc) {
    const SpecialUnitary x = haar_su(2, rng);
    const ComplexMatrix xinv = mat_adjoint(x.matrix());
    std::vector<std::vector<cplx>> p(max_two_j + 1), q(max_two_j + 1);
    for (unsigned t = 0; t <= max_two_j; ++t) {
      p[t] = coeffs({t}, x.matrix());
      q[t] = coeffs({t}, xinv);
    }
    for (std::size_t r = 0; r < pairs.size(); ++r)
      outer_accumulate(acc, offset[r], p[pairs[r].first], q[pairs[r].second], false);
  });

  std::map<PairKey, CheckResult> out;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [a, b] = pairs[r];
    const std::size_t da = a + 1, db = b + 1;
    CheckResult res{0.0, 0.0, sums.count, da * da * db * db};
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t k = 0; k < db; ++k)
          for (std::size_t l = 0; l < db; ++l) {
            const std::size_t e = offset[r] + (i * da + j) * db * db + k * db + l;
            const double expected = (a == b && i == l && j == k) ? 1.0 : 0.0;
            res.max_deviation = std::max(res.max_deviation, std::abs(sums.mean(e) - expected));
            res.max_std_error = std::max(res.max_std_error, sums.std_error(e));
          }
    out[pairs[r]] = res;
  }
  return out;
}

cplx claim_expansion_rhs(const BandLimitedFn& f, const BandLimitedFn& g) {
  std::set<unsigned> fs, gs;
  for (const Term& t : f.terms())
    if (t.pi == t.sigma) fs.insert(t.pi.two_j);
  for (const Term& t : g.terms())
    if (t.pi == t.sigma) gs.insert(t.pi.two_j);
  cplx total = 0.0;
  for (unsigned tj : fs) {
    if (!gs.contains(tj)) continue;
    const SpinIrrep pi{tj};
    const std::size_t d = pi.dim();
    const FourierCoefficient fh = fourier_coeff_exact(f, pi, pi);
    const FourierCoefficient gh = fourier_coeff_exact(g, pi, pi);
    cplx s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) s += fh.at(k, j, l, i) * gh.at(i, k, j, l);
    total += s / static_cast<double>(d);
  }
  return total;
}

IdentityCheck check_claim_expansion(const BandLimitedFn& f, const BandLimitedFn& g,
                                    const McConfig& cfg) {
  require_cap(std::max(f.max_two_j(), g.max_two_j()), cfg);
  require_samples(cfg);
  const auto parts = mc::run_blocks<mc::MeanAccumulator>(
      cfg.samples, cfg.blocks, cfg.stream,
      [&](Rng& rng, std::uint64_t count, std::size_t) {
        mc::MeanAccumulator acc;
        for (std::uint64_t s = 0; s < count; ++s) {
          const SpecialUnitary a = haar_su(2, rng);
          const SpecialUnitary b = haar_su(2, rng);
          const SpecialUnitary c = haar_su(2, rng);
          const SpecialUnitary d = (a * b * c).adjoint();
          acc.add(f(a.matrix(), c.matrix()) * g(b.matrix(), d.matrix()));
        }
        return acc;
      },
      cfg.exec);
  mc::MeanAccumulator total;
  for (const auto& p : parts) total.merge(p);
  return {total.mean, total.std_error(), claim_expansion_rhs(f, g)};
}

std::vector<FnPair> plancherel_fixtures() {
  const SpinIrrep s0{0}, half{1}, one{2}, three_half{3};
  const BandLimitedFn mixed({{half, one, 0, 1, 2, 0, {0.5, 0.0}},
                             {s0, s0, 0, 0, 0, 0, {0.25, 0.0}},
                             {three_half, half, 3, 1, 0, 1, {0.0, 0.5}}});
  const BandLimitedFn other({{half, one, 0, 1, 2, 0, {1.0, 0.0}},
                             {one, one, 1, 1, 0, 2, {1.0, 0.0}},
                             {s0, s0, 0, 0, 0, 0, {2.0, 0.0}}});
  return {
      {"constants", BandLimitedFn::constant(0.5), BandLimitedFn::constant(0.5), 0.25},
      {"single", BandLimitedFn::single(half, one, 0, 1, 2, 0),
       BandLimitedFn::single(half, one, 0, 1, 2, 0), 1.0},
      {"orthogonal", BandLimitedFn::single(half, one, 0, 1, 2, 0),
       BandLimitedFn::single(half, one, 1, 0, 2, 0), 0.0},
      {"mixed", mixed, other, {1.0, 0.0}},
  };
}

std::vector<FnPair> claim_fixtures() {
  const SpinIrrep half{1}, one{2};
  const BandLimitedFn diag = BandLimitedFn::single(half, half, 0, 0, 0, 0);
  return {
      {"constants", BandLimitedFn::constant(1.0), BandLimitedFn::constant(1.0), 1.0},
      {"disjoint", diag, BandLimitedFn::single(one, one, 0, 0, 0, 0), 0.0},
      {"single-diagonal", diag, diag, 0.5},
  };
}

}  // namespace abcd::su2
