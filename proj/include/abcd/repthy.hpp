#pragma once

// Representation theory of SU(2) and Monte-Carlo checks of the Fourier
// identities it satisfies: Schur orthogonality, the convolution formula,
// Plancherel, the Fourier coefficients of the diagonal measure x -> (x, x^-1),
// and the expansion of E[f(A,C) g(B,(ABC)^-1)] over diagonal irrep pairs.
//
// Conventions (indices are 0-based):
//   D^j(u)            spin-j matrix, basis x^(2j-k) y^k / sqrt((2j-k)! k!)
//   pi~_{ij}(g)       sqrt(dim) * D(g)_{ij}
//   f^(pi,sigma)_ijkl E[f(X,Y) pi~(X^-1)_{ij} sigma~(Y^-1)_{kl}]

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "abcd/linalg.hpp"
#include "abcd/montecarlo.hpp"

namespace abcd::su2 {

struct SpinIrrep {
  unsigned two_j = 0;
  [[nodiscard]] std::size_t dim() const { return two_j + 1; }
  friend auto operator<=>(const SpinIrrep&, const SpinIrrep&) = default;
};

/// Spin-j representation matrix of a 2x2 special unitary. Throws on non-2x2 input.
ComplexMatrix wigner_d(SpinIrrep j, const ComplexMatrix& u);
ComplexMatrix wigner_d(SpinIrrep j, const SpecialUnitary& u);

struct WignerCheck {
  double homomorphism = 0.0;  // max |D(g)D(h) - D(gh)|
  double unitarity = 0.0;     // max |D(g)^dagger D(g) - I|
};
/// Over `pairs` Haar-random (g, h).
WignerCheck check_wigner(SpinIrrep j, std::size_t pairs, RngStream stream);

/// Writes sqrt(dim) * D^j(u) into `out` (dim*dim entries, row-major).
void normalized_coefficients(SpinIrrep j, const ComplexMatrix& u, std::span<cplx> out);

// --- band-limited functions on SU(2) x SU(2) -------------------------------

/// One term c * pi~_{i,k}(X) * sigma~_{l,m}(Y).
struct Term {
  SpinIrrep pi, sigma;
  std::size_t i = 0, k = 0, l = 0, m = 0;
  cplx coeff = 0.0;
};

/// Finite sum of terms. A function of one variable is a sum of terms with
/// sigma = spin 0 (sigma~ = 1). The constant c is the term (0,0,0,0,0,0; c).
class BandLimitedFn {
 public:
  BandLimitedFn() = default;
  explicit BandLimitedFn(std::vector<Term> terms);

  static BandLimitedFn constant(cplx c);
  static BandLimitedFn single(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t k,
                              std::size_t l, std::size_t m, cplx coeff = 1.0);

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] unsigned max_two_j() const;

  [[nodiscard]] cplx operator()(const ComplexMatrix& x, const ComplexMatrix& y) const;

  /// Exact Fourier coefficient f^(pi,sigma)_{i,j,k,l}.
  [[nodiscard]] cplx fourier(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t j,
                             std::size_t k, std::size_t l) const;

  friend BandLimitedFn operator+(const BandLimitedFn& a, const BandLimitedFn& b);

 private:
  std::vector<Term> terms_;
};

/// Text form: one term per line, "two_j_pi two_j_sigma i k l m coeff_re coeff_im"
/// separated by whitespace or commas; '#' starts a comment.
BandLimitedFn parse_band_limited(std::istream& in);
BandLimitedFn load_band_limited(const std::filesystem::path& path);
void write_band_limited(std::ostream& out, const BandLimitedFn& f);

// --- Monte Carlo ----------------------------------------------------------

struct McConfig {
  std::uint64_t samples = 1'000'000;
  RngStream stream{};
  std::size_t blocks = mc::kDefaultBlocks;
  mc::Execution exec = mc::Execution::Parallel;
  unsigned spin_cap_two_j = 6;  // spin 3
};

/// Haar expectation over SU(2) (resp. SU(2)^2) with standard error.
mc::Estimate haar_expect_mc(const std::function<cplx(const ComplexMatrix&)>& f,
                            const McConfig& cfg);
mc::Estimate haar_expect_mc(
    const std::function<cplx(const ComplexMatrix&, const ComplexMatrix&)>& f, const McConfig& cfg);

/// Outcome of a Monte-Carlo identity check.
struct CheckResult {
  double max_deviation = 0.0;  // max |estimate - expected| over all checked entries
  double max_std_error = 0.0;  // largest per-entry standard error
  std::uint64_t samples = 0;
  std::size_t entries = 0;
};

/// E[pi~_{ij}(g) conj(sigma~_{kl}(g))] vs 1[pi=sigma, i=k, j=l], all index tuples.
CheckResult check_schur(SpinIrrep pi, SpinIrrep sigma, const McConfig& cfg);
/// Every (pi, sigma) pair with two_j <= max_two_j from one shared sample set.
std::map<std::pair<unsigned, unsigned>, CheckResult> schur_sweep(unsigned max_two_j,
                                                                 const McConfig& cfg);

/// Ten fixed SU(2) test points used by the convolution check.
const std::vector<ComplexMatrix>& convolution_test_points();

/// (pi~_{ij} * sigma~_{kl})(g) = E_h[pi~_{ij}(g h^-1) sigma~_{kl}(h)] vs
/// 1[j=k, pi~sigma] / sqrt(dim pi) * pi~_{il}(g), max over the test points.
CheckResult check_convolution(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t j,
                              std::size_t k, std::size_t l, const McConfig& cfg);
/// All index tuples, all pairs with two_j <= max_two_j, all test points.
std::map<std::pair<unsigned, unsigned>, CheckResult> convolution_sweep(unsigned max_two_j,
                                                                       const McConfig& cfg);

struct FourierCoefficient {
  SpinIrrep pi, sigma;
  std::vector<cplx> tensor;  // index ((i*dpi + j)*dsigma + k)*dsigma + l
  double std_error = 0.0;    // largest per-entry standard error
  [[nodiscard]] cplx at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;
};

/// Monte-Carlo estimate of f^(pi, sigma) for an arbitrary function on SU(2)^2.
FourierCoefficient fourier_coeff_mc(
    const std::function<cplx(const ComplexMatrix&, const ComplexMatrix&)>& f, SpinIrrep pi,
    SpinIrrep sigma, const McConfig& cfg);
FourierCoefficient fourier_coeff_mc(const BandLimitedFn& f, SpinIrrep pi, SpinIrrep sigma,
                                    const McConfig& cfg);
/// Exact coefficient tensor of a band-limited function.
FourierCoefficient fourier_coeff_exact(const BandLimitedFn& f, SpinIrrep pi, SpinIrrep sigma);

struct IdentityCheck {
  cplx lhs = 0.0;  // Monte Carlo
  double lhs_std_error = 0.0;
  cplx rhs = 0.0;  // exact
  [[nodiscard]] double deviation() const { return std::abs(lhs - rhs); }
};

/// E[f conj(h)] by Monte Carlo against sum f^ conj(h^) from the term lists.
IdentityCheck check_plancherel(const BandLimitedFn& f, const BandLimitedFn& h, const McConfig& cfg);
cplx plancherel_rhs(const BandLimitedFn& f, const BandLimitedFn& h);

/// E_X[pi~_{ij}(X) sigma~_{kl}(X^-1)] against 1[pi=sigma] 1[i=l, j=k].
IdentityCheck mu_diag_coeff(SpinIrrep pi, SpinIrrep sigma, std::size_t i, std::size_t j,
                            std::size_t k, std::size_t l, const McConfig& cfg);

/// Every (pi, sigma, i, j, k, l) with two_j <= max_two_j from one shared
/// sample set.
std::map<std::pair<unsigned, unsigned>, CheckResult> mu_diag_sweep(unsigned max_two_j,
                                                                   const McConfig& cfg);

/// E[f(A,C) g(B,(ABC)^-1)] by Monte Carlo against
/// sum_pi (1/dim pi) sum_{ijkl} f^(pi,pi)_{k,j,l,i} g^(pi,pi)_{i,k,j,l}.
IdentityCheck check_claim_expansion(const BandLimitedFn& f, const BandLimitedFn& g,
                                    const McConfig& cfg);
cplx claim_expansion_rhs(const BandLimitedFn& f, const BandLimitedFn& g);

struct FnPair {
  std::string name;
  BandLimitedFn f, g;
  cplx expected;  // worked out by hand from the orthogonality relations
};

/// Built-in pairs for the Plancherel check (f, h) and the expansion check (f, g).
std::vector<FnPair> plancherel_fixtures();
std::vector<FnPair> claim_fixtures();

}  // namespace abcd::su2
