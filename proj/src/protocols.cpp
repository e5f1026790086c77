#include "abcd/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "abcd/kernels.hpp"

namespace abcd {

std::string_view to_string(Protocol p) {
  return p == Protocol::Dqc1 ? "dqc1" : "fingerprint";
}

std::string_view to_string(Decision d) {
  return d == Decision::AcceptYes ? "AcceptYes" : "RejectNo";
}

PromiseBounds promise_bounds(Protocol p) {
  return p == Protocol::Dqc1 ? PromiseBounds{0.55, 0.95} : PromiseBounds{0.275, 0.475};
}

DecisionRule DecisionRule::midpoint(Protocol p, std::uint32_t repetitions) {
  const PromiseBounds b = promise_bounds(p);
  return {0.5 * (b.no_max + b.yes_min), repetitions};
}

bool ProtocolReport::consistent() const {
  if (!exact_p || !estimated_p) return true;
  return std::abs(*exact_p - *estimated_p) <= 5.0 * std_error;
}

std::uint32_t register_qubits(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(n - 1));
}

std::uint32_t qubit_cost(Protocol p, std::size_t n) {
  if (n < 2) throw std::invalid_argument("qubit_cost: n must be at least 2");
  const std::uint32_t reg = register_qubits(n) + 1;
  return p == Protocol::Dqc1 ? 4 * reg : 2 * reg;
}

namespace {

// Re Tr(ABCD) / N, which lies in [-1, 1] for unitary ABCD; clamped against rounding.
double normalized_trace(const AbcdInstance& inst) {
  return std::clamp(inst.trace_abcd().real() / static_cast<double>(inst.n), -1.0, 1.0);
}

}  // namespace

double dqc1_accept_exact(const AbcdInstance& inst) { return 0.5 + 0.5 * normalized_trace(inst); }

double fingerprint_accept_exact(const AbcdInstance& inst) {
  return 0.25 + 0.25 * normalized_trace(inst);
}

double accept_exact(Protocol p, const AbcdInstance& inst) {
  return p == Protocol::Dqc1 ? dqc1_accept_exact(inst) : fingerprint_accept_exact(inst);
}

namespace dqc1 {

std::vector<cplx> prepare(std::span<const cplx> v, std::size_t n) {
  if (v.size() != n) throw std::invalid_argument("dqc1::prepare: vector length must equal n");
  const std::size_t dim = std::size_t{1} << register_qubits(n);
  std::vector<cplx> state(2 * dim);
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    state[i] = h * v[i];
    state[dim + i] = h * v[i];
  }
  return state;
}

void apply_controlled_adjoint(std::span<cplx> state, const ComplexMatrix& u) {
  const std::size_t n = u.rows();
  const std::size_t dim = state.size() / 2;
  if (!u.is_square() || n > dim || state.size() % 2 != 0)
    throw std::invalid_argument("dqc1::apply_controlled_adjoint: register/matrix size mismatch");
  auto target = state.subspan(dim, n);
  std::vector<cplx> in(target.begin(), target.end());
  kernels::omp::adjoint_matvec(n, n, u.data(), in, target);
}

double plus_probability(std::span<const cplx> state) {
  const std::size_t dim = state.size() / 2;
  double p = 0.0;
  for (std::size_t i = 0; i < dim; ++i) p += std::norm(state[i] + state[dim + i]);
  return std::clamp(0.5 * p, 0.0, 1.0);
}

}  // namespace dqc1

double dqc1_run_for_vector(const AbcdInstance& inst, std::span<const cplx> v) {
  std::vector<cplx> state = dqc1::prepare(v, inst.n);
  for (const SpecialUnitary* u : {&inst.a, &inst.b, &inst.c, &inst.d})
    dqc1::apply_controlled_adjoint(state, u->matrix());
  return dqc1::plus_probability(state);
}

SampledEstimate dqc1_accept_sampled(const AbcdInstance& inst, std::uint64_t samples,
                                    RngStream stream, bool bernoulli, std::size_t blocks,
                                    mc::Execution exec) {
  if (samples == 0) throw std::invalid_argument("dqc1_accept_sampled: samples must be >= 1");
  const auto parts = mc::run_blocks<mc::MeanAccumulator>(
      samples, blocks, stream,
      [&](Rng& rng, std::uint64_t count, std::size_t) {
        mc::MeanAccumulator acc;
        for (std::uint64_t s = 0; s < count; ++s) {
          const std::vector<cplx> v = haar_unit_vector(inst.n, rng);
          const double p = dqc1_run_for_vector(inst, v);
          acc.add(bernoulli ? (rng.uniform() < p ? 1.0 : 0.0) : p);
        }
        return acc;
      },
      exec);
  mc::MeanAccumulator total;
  for (const auto& part : parts) total.merge(part);
  return {total.mean.real(), total.std_error(), total.count};
}

double hoeffding_bound(std::uint32_t k, double margin) {
  return 2.0 * std::exp(-2.0 * static_cast<double>(k) * margin * margin);
}

ProtocolReport amplify_decide(Protocol p, const AbcdInstance& inst, const DecisionRule& rule,
                              RngStream stream) {
  const PromiseBounds bounds = promise_bounds(p);
  if (!(rule.threshold > bounds.no_max && rule.threshold < bounds.yes_min))
    throw std::invalid_argument("amplify_decide: threshold " + std::to_string(rule.threshold) +
                                " must lie strictly inside the promise gap (" +
                                std::to_string(bounds.no_max) + ", " +
                                std::to_string(bounds.yes_min) + ")");
  if (rule.repetitions == 0) throw std::invalid_argument("amplify_decide: repetitions must be >= 1");

  const double exact = accept_exact(p, inst);
  Rng rng(stream);
  std::uint32_t accepted = 0;
  for (std::uint32_t t = 0; t < rule.repetitions; ++t) {
    double p_trial = exact;
    if (p == Protocol::Dqc1) p_trial = dqc1_run_for_vector(inst, haar_unit_vector(inst.n, rng));
    if (rng.uniform() < p_trial) ++accepted;
  }
  const double k = static_cast<double>(rule.repetitions);
  const double frac = static_cast<double>(accepted) / k;
  const double margin = std::min(rule.threshold - bounds.no_max, bounds.yes_min - rule.threshold);

  ProtocolReport r;
  r.protocol = p;
  r.exact_p = exact;
  r.estimated_p = frac;
  r.samples = rule.repetitions;
  r.std_error = std::sqrt(frac * (1.0 - frac) / k);
  r.decision = frac >= rule.threshold ? Decision::AcceptYes : Decision::RejectNo;
  r.qubit_cost = qubit_cost(p, inst.n);
  r.threshold = rule.threshold;
  r.hoeffding_bound = hoeffding_bound(rule.repetitions, margin);
  return r;
}

}  // namespace abcd
