#include "abcd/instances.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iterator>

#include "byteio.hpp"

namespace abcd {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::No: return "No";
    case Label::Yes: return "Yes";
    case Label::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(GenMode m) {
  switch (m) {
    case GenMode::ExactInverse: return "ExactInverse";
    case GenMode::Perturbed: return "Perturbed";
    case GenMode::HaarNo: return "HaarNo";
  }
  return "?";
}

std::string_view to_string(Promise p) {
  switch (p) {
    case Promise::Yes: return "Yes";
    case Promise::No: return "No";
    case Promise::Outside: return "Outside";
  }
  return "?";
}

namespace {

// Tr(XY) = sum_ij X_ij Y_ji without forming XY.
cplx trace_of_product(const ComplexMatrix& x, const ComplexMatrix& y) {
  const std::size_t n = x.rows();
  cplx t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += x(i, j) * y(j, i);
  return t;
}

void require_dimension(std::size_t n, std::size_t min, const char* who) {
  if (n < min)
    throw std::invalid_argument(std::string(who) + ": n must be at least " + std::to_string(min) +
                                ", got " + std::to_string(n));
}

}  // namespace

cplx AbcdInstance::trace_abcd() const {
  return trace_of_product(mat_mul(a.matrix(), b.matrix()), mat_mul(c.matrix(), d.matrix()));
}

PromiseStatus classify_trace(cplx trace, std::size_t n) {
  const double re = trace.real();
  const double dn = static_cast<double>(n);
  if (re >= 0.9 * dn) return {Promise::Yes, trace};
  if (re <= 0.1 * dn) return {Promise::No, trace};
  return {Promise::Outside, trace};
}

PromiseStatus check_promise(const AbcdInstance& inst) {
  return classify_trace(inst.trace_abcd(), inst.n);
}

AbcdInstance gen_yes(std::size_t n, GenMode mode, double epsilon, RngStream stream,
                     const GenOptions& opts) {
  require_dimension(n, 2, "gen_yes");
  if (mode != GenMode::ExactInverse && mode != GenMode::Perturbed)
    throw std::invalid_argument("gen_yes: mode must be ExactInverse or Perturbed");
  if (mode == GenMode::Perturbed && !(epsilon >= 0.0))
    throw std::invalid_argument("gen_yes: epsilon must be >= 0");

  const double floor = opts.yes_fraction * static_cast<double>(n);
  double last_re = 0.0;
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    const RngStream s = stream.derive(static_cast<std::uint64_t>(attempt));
    SpecialUnitary a = haar_su(n, s.derive(0));
    SpecialUnitary b = haar_su(n, s.derive(1));
    SpecialUnitary c = haar_su(n, s.derive(2));
    const SpecialUnitary abc = a * b * c;
    SpecialUnitary d = abc.adjoint();
    if (mode == GenMode::Perturbed) d = d * perturbation_su(n, epsilon, s.derive(3));
    last_re = trace_of_product(abc.matrix(), d.matrix()).real();
    if (last_re >= floor)
      return {n, std::move(a), std::move(b), std::move(c), std::move(d), Label::Yes,
              stream.master_seed, mode};
  }
  throw GenerationError("gen_yes: retry budget of " + std::to_string(opts.max_retries) +
                        " exhausted; Re Tr(ABCD) = " + std::to_string(last_re) +
                        " stays below 0.9 N = " + std::to_string(floor) +
                        ". epsilon = " + std::to_string(epsilon) +
                        " is miscalibrated for n = " + std::to_string(n) + "; lower it");
}

AbcdInstance gen_no(std::size_t n, RngStream stream, const GenOptions& opts) {
  require_dimension(n, 8, "gen_no");
  const double ceiling = opts.no_fraction * static_cast<double>(n);
  double last_re = 0.0;
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    const RngStream s = stream.derive(static_cast<std::uint64_t>(attempt));
    AbcdInstance inst{n,
                      haar_su(n, s.derive(0)),
                      haar_su(n, s.derive(1)),
                      haar_su(n, s.derive(2)),
                      haar_su(n, s.derive(3)),
                      Label::No,
                      stream.master_seed,
                      GenMode::HaarNo};
    last_re = inst.trace_abcd().real();
    if (last_re <= ceiling) return inst;
  }
  throw GenerationError("gen_no: retry budget of " + std::to_string(opts.max_retries) +
                        " exhausted; Re Tr(ABCD) = " + std::to_string(last_re) +
                        " stays above 0.1 N = " + std::to_string(ceiling));
}

// --- serialisation ---------------------------------------------------------

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'A', 'B', 'C', 'D'};
constexpr std::size_t kHeaderBytes = 26;
// Keeps 4 n^2 * 16 well inside size_t and rejects absurd headers early.
constexpr std::uint64_t kMaxDimension = 1ULL << 20;

void write_matrix(detail::ByteWriter& w, const ComplexMatrix& m) {
  for (const cplx& z : m.data()) w.c128(z);
}

ComplexMatrix read_matrix(detail::ByteReader& r, std::size_t n, const char* name) {
  const std::size_t start = r.offset();
  std::vector<cplx> entries(n * n);
  for (auto& z : entries) z = r.c128(name);
  try {
    return ComplexMatrix(n, n, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("matrix ") + name + ": " + e.what(), start);
  }
}

}  // namespace

std::vector<std::uint8_t> encode_instance(const AbcdInstance& inst) {
  detail::ByteWriter w;
  w.reserve(kHeaderBytes + 4 * inst.n * inst.n * 16);
  w.bytes(kMagic);
  w.u32(kInstanceFormatVersion);
  w.u64(inst.n);
  w.u8(static_cast<std::uint8_t>(inst.label));
  w.u8(static_cast<std::uint8_t>(inst.mode));
  w.u64(inst.seed);
  for (const SpecialUnitary* m : {&inst.a, &inst.b, &inst.c, &inst.d}) write_matrix(w, m->matrix());
  return w.take();
}

AbcdInstance decode_instance(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  try {
    const auto magic = r.bytes(4, "magic");
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin()))
      throw FormatError("bad magic: expected \"ABCD\"", 0);
    const std::uint32_t version = r.u32("version");
    if (version != kInstanceFormatVersion)
      throw FormatError("unsupported version " + std::to_string(version) + ", expected " +
                            std::to_string(kInstanceFormatVersion),
                        4);
    const std::uint64_t n64 = r.u64("n");
    if (n64 == 0 || n64 > kMaxDimension)
      throw FormatError("invalid dimension n = " + std::to_string(n64), 8);
    const std::uint8_t label = r.u8("label");
    if (label > 2) throw FormatError("invalid label byte " + std::to_string(label), 16);
    const std::uint8_t mode = r.u8("mode");
    if (mode > 2) throw FormatError("invalid mode byte " + std::to_string(mode), 17);
    const std::uint64_t seed = r.u64("seed");

    const auto n = static_cast<std::size_t>(n64);
    const std::size_t expected = 4 * n * n * 16;
    if (r.remaining() != expected)
      throw FormatError("payload is " + std::to_string(r.remaining()) + " bytes, expected " +
                            std::to_string(expected) + " for n = " + std::to_string(n),
                        r.offset());

    ComplexMatrix a = read_matrix(r, n, "A");
    ComplexMatrix b = read_matrix(r, n, "B");
    ComplexMatrix c = read_matrix(r, n, "C");
    ComplexMatrix d = read_matrix(r, n, "D");
    return AbcdInstance{n,
                        SpecialUnitary::trusted(std::move(a)),
                        SpecialUnitary::trusted(std::move(b)),
                        SpecialUnitary::trusted(std::move(c)),
                        SpecialUnitary::trusted(std::move(d)),
                        static_cast<Label>(label),
                        seed,
                        static_cast<GenMode>(mode)};
  } catch (const detail::ReadError& e) {
    throw FormatError(e.what, e.offset);
  }
}

void validate_instance(const AbcdInstance& inst, const Tolerances& tol) {
  for (const SpecialUnitary* m : {&inst.a, &inst.b, &inst.c, &inst.d}) {
    if (m->n() != inst.n) throw std::invalid_argument("validate_instance: dimension mismatch");
    SpecialUnitary checked(m->matrix(), tol);
  }
  const PromiseStatus st = check_promise(inst);
  if (inst.label == Label::Yes && st.value != Promise::Yes)
    throw std::invalid_argument("validate_instance: labeled Yes but Re Tr(ABCD) = " +
                                std::to_string(st.trace.real()));
  if (inst.label == Label::No && st.value != Promise::No)
    throw std::invalid_argument("validate_instance: labeled No but Re Tr(ABCD) = " +
                                std::to_string(st.trace.real()));
}

void save_instance(const AbcdInstance& inst, const std::filesystem::path& path) {
  const auto bytes = encode_instance(inst);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("save_instance: write failed for " + path.string());
}

AbcdInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_instance(bytes);
}

}  // namespace abcd
