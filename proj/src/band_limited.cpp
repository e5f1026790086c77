#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "abcd/repthy.hpp"

namespace abcd::su2 {

BandLimitedFn::BandLimitedFn(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const Term& t : terms_) {
    if (t.i >= t.pi.dim() || t.k >= t.pi.dim() || t.l >= t.sigma.dim() || t.m >= t.sigma.dim())
      throw std::invalid_argument("BandLimitedFn: term index outside its irrep dimension");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw std::invalid_argument("BandLimitedFn: non-finite coefficient");
  }
}

BandLimitedFn BandLimitedFn::constant(cplx c) { return BandLimitedFn({Term{{0}, {0}, 0, 0, 0, 0, c}}); }

BandLimitedFn BandLimitedFn::single(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t k,
                                    std::size_t l, std::size_t m, cplx coeff) {
  return BandLimitedFn({Term{pi, sigma, i, k, l, m, coeff}});
}

unsigned BandLimitedFn::max_two_j() const {
  unsigned mx = 0;
  for (const Term& t : terms_) mx = std::max({mx, t.pi.two_j, t.sigma.two_j});
  return mx;
}

cplx BandLimitedFn::operator()(const ComplexMatrix& x, const ComplexMatrix& y) const {
  const unsigned cap = max_two_j();
  // Normalised coefficient matrices, computed lazily per spin.
  std::vector<std::vector<cplx>> dx(cap + 1), dy(cap + 1);
  const auto get = [](std::vector<std::vector<cplx>>& cache, SpinIrrep j, const ComplexMatrix& u)
      -> const std::vector<cplx>& {
    auto& slot = cache[j.two_j];
    if (slot.empty()) {
      slot.resize(j.dim() * j.dim());
      normalized_coefficients(j, u, slot);
    }
    return slot;
  };
  cplx total = 0.0;
  for (const Term& t : terms_) {
    const auto& px = get(dx, t.pi, x);
    const auto& py = get(dy, t.sigma, y);
    total += t.coeff * px[t.i * t.pi.dim() + t.k] * py[t.l * t.sigma.dim() + t.m];
  }
  return total;
}

cplx BandLimitedFn::fourier(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t j,
                            std::size_t k, std::size_t l) const {
  // Schur: E[pi~_{ab}(X) pi~(X^-1)_{ij}] = 1[a=j, b=i].
  cplx c = 0.0;
  for (const Term& t : terms_)
    if (t.pi == pi && t.sigma == sigma && t.k == i && t.i == j && t.m == k && t.l == l) c += t.coeff;
  return c;
}

BandLimitedFn operator+(const BandLimitedFn& a, const BandLimitedFn& b) {
  std::vector<Term> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return BandLimitedFn(std::move(all));
}

BandLimitedFn parse_band_limited(std::istream& in) {
  std::vector<Term> terms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long long vals[6];
    double re = 0.0, im = 0.0;
    if (!(fields >> vals[0])) continue;  // blank line
    bool ok = true;
    for (int f = 1; f < 6 && ok; ++f) ok = static_cast<bool>(fields >> vals[f]);
    ok = ok && (fields >> re >> im);
    std::string extra;
    if (!ok || (fields >> extra))
      throw std::invalid_argument("band-limited fixture line " + std::to_string(line_no) +
                                  ": expected 8 fields (two_j_pi two_j_sigma i k l m re im)");
    if (std::any_of(std::begin(vals), std::end(vals), [](long long v) { return v < 0; }))
      throw std::invalid_argument("band-limited fixture line " + std::to_string(line_no) +
                                  ": negative spin or index");
    terms.push_back(Term{{static_cast<unsigned>(vals[0])},
                         {static_cast<unsigned>(vals[1])},
                         static_cast<std::size_t>(vals[2]),
                         static_cast<std::size_t>(vals[3]),
                         static_cast<std::size_t>(vals[4]),
                         static_cast<std::size_t>(vals[5]),
                         {re, im}});
  }
  try {
    return BandLimitedFn(std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("band-limited fixture: ") + e.what());
  }
}

BandLimitedFn load_band_limited(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open band-limited fixture " + path.string());
  return parse_band_limited(in);
}

void write_band_limited(std::ostream& out, const BandLimitedFn& f) {
  out << "# two_j_pi,two_j_sigma,i,k,l,m,coeff_re,coeff_im\n";
  out << std::setprecision(17);
  for (const Term& t : f.terms())
    out << t.pi.two_j << ',' << t.sigma.two_j << ',' << t.i << ',' << t.k << ',' << t.l << ','
        << t.m << ',' << t.coeff.real() << ',' << t.coeff.imag() << '\n';
}

}  // namespace abcd::su2
