#include "abcd/cli.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "abcd/instances.hpp"
#include "abcd/netsim.hpp"
#include "abcd/oracle_sim.hpp"
#include "abcd/protocols.hpp"
#include "abcd/repthy.hpp"
#include "abcd/report.hpp"

namespace abcd::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string mode = "exact-yes";
  double epsilon = 0.3;
  std::string in;
  std::string out;
  std::string protocol = "dqc1";
  std::uint64_t run_samples = 10'000;
  std::uint64_t verify_samples = 1'000'000;
  std::uint64_t netsim_samples = 200;
  std::uint64_t bench_samples = 200;
  std::uint32_t reps = 0;
  std::optional<double> threshold;
  bool oracle = false;
  std::size_t workers = mc::kDefaultBlocks;
  std::size_t max_n = 1024;
  double tolerance = 0.02;
  unsigned max_two_j = 3;
  std::string suite = "all";
  std::string f_path, g_path;

  // netsim
  bool driver = false;
  std::string role;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  int fd = -1;
  std::string transport = "socket";
  std::uint32_t wire_version = net::kWireVersion;
  std::uint32_t peer_wire_version = net::kWireVersion;
  std::optional<std::uint64_t> session;
  bool bernoulli = false;
  bool quiet = false;
};

AbcdInstance generate(const RunConfig& c) {
  if (c.n == 0) throw UsageError("--n must be >= 1");
  const RngStream gen{c.seed, 0};
  if (c.mode == "exact-yes") return gen_yes(c.n, GenMode::ExactInverse, 0.0, gen);
  if (c.mode == "perturbed-yes") return gen_yes(c.n, GenMode::Perturbed, c.epsilon, gen);
  return gen_no(c.n, gen);
}

AbcdInstance load(const std::string& path) {
  try {
    AbcdInstance inst = load_instance(path);
    validate_instance(inst);
    return inst;
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

AbcdInstance obtain(const RunConfig& c) { return c.in.empty() ? generate(c) : load(c.in); }

void save(const AbcdInstance& inst, const fs::path& path) {
  try {
    save_instance(inst, path);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void write_csv_file(const std::string& path, const report::CsvTable& t) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  report::write_csv(f, t);
  if (!f) throw IoError("write failed for " + path);
}

void emit(const report::KeyValues& kv, std::ostream& out, const std::string& csv_path) {
  kv.write(out);
  if (csv_path.empty()) return;
  report::CsvTable t;
  std::vector<std::string> row;
  for (const auto& [k, v] : kv.entries()) {
    t.header.push_back(k);
    row.push_back(v);
  }
  t.add_row(std::move(row));
  write_csv_file(csv_path, t);
}

Protocol parse_protocol(const std::string& s) {
  if (s == "dqc1") return Protocol::Dqc1;
  if (s == "fingerprint") return Protocol::Fingerprint;
  throw UsageError("unknown protocol " + s);
}

void add_instance_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n", c.n, "Matrix dimension");
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--mode", c.mode, "Generation mode")
      ->check(CLI::IsMember({"exact-yes", "perturbed-yes", "no"}));
  sub->add_option("--epsilon", c.epsilon, "Perturbation strength for perturbed-yes");
  sub->add_option("--in", c.in, "Read the instance from an .abcd file instead of generating");
}

// --- gen ------------------------------------------------------------------

int cmd_gen(const RunConfig& c, std::ostream& out) {
  const AbcdInstance inst = generate(c);
  save(inst, c.out);
  const PromiseStatus st = check_promise(inst);
  report::KeyValues kv;
  kv.add("n", std::uint64_t{inst.n})
      .add("label", to_string(inst.label))
      .add("mode", to_string(inst.mode))
      .add("seed", inst.seed)
      .add("promise", to_string(st.value))
      .add("trace_re", st.trace.real())
      .add("trace_im", st.trace.imag())
      .add("path", c.out);
  kv.write(out);
  return kOk;
}

// --- run ------------------------------------------------------------------

int cmd_run(const RunConfig& c, std::ostream& out) {
  const Protocol p = parse_protocol(c.protocol);
  const AbcdInstance inst = obtain(c);
  const double exact = accept_exact(p, inst);
  const double threshold = c.threshold.value_or(DecisionRule::midpoint(p, 1).threshold);

  ProtocolReport r;
  if (c.reps > 0) {
    r = amplify_decide(p, inst, DecisionRule{threshold, c.reps}, RngStream{c.seed, 2});
  } else {
    r.protocol = p;
    r.qubit_cost = qubit_cost(p, inst.n);
    r.threshold = threshold;
    if (c.run_samples > 0) {
      const RngStream stream{c.seed, 1};
      if (p == Protocol::Dqc1) {
        const SampledEstimate s = dqc1_accept_sampled(inst, c.run_samples, stream, false, c.workers);
        r.estimated_p = s.estimate;
        r.std_error = s.std_error;
        r.samples = s.samples;
      } else {
        // Single-shot measurement outcomes of the referee.
        const auto parts = mc::run_blocks<mc::MeanAccumulator>(
            c.run_samples, c.workers, stream, [&](Rng& rng, std::uint64_t count, std::size_t) {
              mc::MeanAccumulator acc;
              for (std::uint64_t s = 0; s < count; ++s) acc.add(rng.uniform() < exact ? 1.0 : 0.0);
              return acc;
            });
        mc::MeanAccumulator total;
        for (const auto& part : parts) total.merge(part);
        r.estimated_p = total.mean.real();
        r.std_error = total.std_error();
        r.samples = total.count;
      }
    }
    const double basis = r.estimated_p.value_or(exact);
    r.decision = basis >= threshold ? Decision::AcceptYes : Decision::RejectNo;
  }
  r.exact_p = exact;

  report::KeyValues kv;
  kv.add("n", std::uint64_t{inst.n}).add("label", to_string(inst.label));
  const report::KeyValues body = report::to_key_values(r);
  for (const auto& [k, v] : body.entries()) kv.add(k, v);
  if (c.reps > 0) kv.add("reps", c.reps);
  if (c.oracle) {
    const double o = p == Protocol::Dqc1 ? dqc1_circuit_sim(inst) : fingerprint_circuit_sim(inst);
    kv.add("oracle_p", o).add("oracle_gap", std::abs(o - exact));
  }
  emit(kv, out, c.out);
  return kOk;
}

// --- verify ---------------------------------------------------------------

struct VerifyTable {
  report::CsvTable csv{{"check", "params", "deviation", "tolerance", "samples", "std_error", "pass"},
                       {}};
  std::size_t failed = 0;
  std::ostream* out = nullptr;

  void add(const std::string& check, const std::string& params, double dev, double tol,
           std::uint64_t samples, double se) {
    const bool pass = dev <= tol;
    if (!pass) ++failed;
    csv.add_row({check, params, report::format_double(dev), report::format_double(tol),
                 std::to_string(samples), report::format_double(se), pass ? "true" : "false"});
    *out << (pass ? "PASS " : "FAIL ") << check << ' ' << params
         << " deviation=" << report::format_double(dev) << " tolerance=" << report::format_double(tol)
         << " samples=" << samples << '\n';
  }
};

std::string pair_params(std::pair<unsigned, unsigned> p) {
  return "two_j_pi=" + std::to_string(p.first) + ";two_j_sigma=" + std::to_string(p.second);
}

std::vector<su2::FnPair> fixtures_or_files(const RunConfig& c, std::vector<su2::FnPair> builtin) {
  if (c.f_path.empty() && c.g_path.empty()) return builtin;
  if (c.f_path.empty() || c.g_path.empty()) throw UsageError("--f and --g must be given together");
  try {
    return {{"files", su2::load_band_limited(c.f_path), su2::load_band_limited(c.g_path), 0.0}};
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  static const std::vector<std::string> kSuites{"wigner", "schur", "convolution", "mudiag",
                                                "plancherel", "claim"};
  std::vector<std::string> suites;
  if (c.suite == "all")
    suites = kSuites;
  else
    suites = {c.suite};

  VerifyTable t;
  t.out = &out;
  auto cfg_for = [&](std::uint64_t stream_index) {
    su2::McConfig cfg;
    cfg.samples = c.verify_samples;
    cfg.stream = RngStream{c.seed, stream_index};
    cfg.blocks = c.workers;
    return cfg;
  };

  for (const std::string& s : suites) {
    if (s == "wigner") {
      for (unsigned tj = 0; tj <= 6; ++tj) {
        const su2::WignerCheck w = su2::check_wigner({tj}, 100, RngStream{c.seed, 20 + tj});
        const std::string params = "two_j=" + std::to_string(tj);
        t.add("wigner-homomorphism", params, w.homomorphism, 1e-10, 100, 0.0);
        t.add("wigner-unitarity", params, w.unitarity, 1e-10, 100, 0.0);
      }
    } else if (s == "schur") {
      for (const auto& [k, r] : su2::schur_sweep(c.max_two_j, cfg_for(11)))
        t.add("schur", pair_params(k), r.max_deviation, c.tolerance, r.samples, r.max_std_error);
    } else if (s == "convolution") {
      for (const auto& [k, r] : su2::convolution_sweep(c.max_two_j, cfg_for(12)))
        t.add("convolution", pair_params(k), r.max_deviation, c.tolerance, r.samples,
              r.max_std_error);
    } else if (s == "mudiag") {
      for (const auto& [k, r] : su2::mu_diag_sweep(c.max_two_j, cfg_for(13)))
        t.add("mudiag", pair_params(k), r.max_deviation, c.tolerance, r.samples, r.max_std_error);
    } else if (s == "plancherel") {
      std::uint64_t idx = 14;
      for (const auto& fx : fixtures_or_files(c, su2::plancherel_fixtures())) {
        const su2::IdentityCheck r = su2::check_plancherel(fx.f, fx.g, cfg_for(idx++ << 8));
        t.add("plancherel", "fixture=" + fx.name, r.deviation(), c.tolerance, c.verify_samples,
              r.lhs_std_error);
      }
    } else if (s == "claim") {
      std::uint64_t idx = 15;
      for (const auto& fx : fixtures_or_files(c, su2::claim_fixtures())) {
        const su2::IdentityCheck r = su2::check_claim_expansion(fx.f, fx.g, cfg_for(idx++ << 8));
        t.add("claim", "fixture=" + fx.name, r.deviation(), c.tolerance, c.verify_samples,
              r.lhs_std_error);
      }
    } else {
      throw UsageError("unknown suite " + s);
    }
  }
  out << "checks=" << t.csv.rows.size() << " failed=" << t.failed << '\n';
  if (!c.out.empty()) write_csv_file(c.out, t.csv);
  return t.failed == 0 ? kOk : kCheckFailed;
}

// --- netsim ---------------------------------------------------------------

net::SessionConfig session_config(const RunConfig& c) {
  net::SessionConfig s;
  s.samples = c.netsim_samples;
  s.stream = RngStream{c.seed, 1};
  s.session_id = c.session.value_or(c.seed);
  s.bernoulli = c.bernoulli;
  s.threshold = c.threshold.value_or(0.75);
  s.wire_version = c.wire_version;
  return s;
}

int finish_netsim(const AbcdInstance& inst, const net::TranscriptReport& rep, const char* how,
                  const RunConfig& c, const net::SessionConfig& s, std::ostream& out,
                  std::ostream& err) {
  report::KeyValues kv;
  kv.add("n", std::uint64_t{inst.n})
      .add("label", to_string(inst.label))
      .add("session_id", s.session_id)
      .add("endpoints", how);
  const report::KeyValues body = report::to_key_values(rep);
  for (const auto& [k, v] : body.entries()) kv.add(k, v);
  emit(kv, out, c.out);
  if (!rep.completed) {
    err << "netsim: session aborted: " << rep.error << '\n';
    return kIo;
  }
  return kOk;
}

std::string wait_status(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0)
    if (errno != EINTR) return "waitpid failed";
  if (WIFEXITED(status)) {
    if (WEXITSTATUS(status) == 0) return {};
    return "peer process exited with status " + std::to_string(WEXITSTATUS(status));
  }
  if (WIFSIGNALED(status)) return "peer process killed by signal " + std::to_string(WTERMSIG(status));
  return "peer process ended abnormally";
}

int netsim_driver(const RunConfig& c, const Env& env, std::ostream& out, std::ostream& err) {
  if (env.self_exe.empty()) throw UsageError("--driver needs the path of the abcd executable");
  const net::SessionConfig s = session_config(c);
  const AbcdInstance inst = obtain(c);
  auto [alice_in, bob_in] = net::split_instance(inst);

  // The peer gets a file holding only its own matrices (A and C replaced by I).
  static std::atomic<unsigned> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("abcd-peer-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(dir);
  const fs::path bob_file = dir / "bob.abcd";
  const SpecialUnitary id = SpecialUnitary::identity(inst.n);
  save(AbcdInstance{inst.n, id, bob_in.b, id, bob_in.d, Label::Unknown, inst.seed, inst.mode}, bob_file);

  auto [mine, theirs] = net::make_socket_pair();
  const std::vector<std::string> args{env.self_exe,
                                      "netsim",
                                      "--role",
                                      "bob",
                                      "--fd",
                                      std::to_string(theirs.fd()),
                                      "--in",
                                      bob_file.string(),
                                      "--samples",
                                      std::to_string(s.samples),
                                      "--session",
                                      std::to_string(s.session_id),
                                      "--wire-version",
                                      std::to_string(c.peer_wire_version),
                                      "--quiet"};
  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  out.flush();
  err.flush();
  std::cout.flush();
  std::cerr.flush();
  const pid_t pid = ::fork();
  if (pid < 0) {
    fs::remove_all(dir);
    throw IoError("fork failed");
  }
  if (pid == 0) {
    ::fcntl(theirs.fd(), F_SETFD, 0);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  theirs.close();
  const net::AliceAgent alice(std::move(alice_in));
  net::TranscriptReport rep = alice.run(mine, s);
  mine.close();
  const std::string peer = wait_status(pid);
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (!peer.empty()) {
    rep.completed = false;
    rep.error = rep.error.empty() ? peer : rep.error + "; " + peer;
  }
  return finish_netsim(inst, rep, "processes", c, s, out, err);
}

int netsim_bob(const RunConfig& c, std::ostream& out, std::ostream& err) {
  net::SessionConfig s = session_config(c);
  const net::BobInput bob_in = [&] {
    const AbcdInstance inst = obtain(c);
    return net::split_instance(inst).second;
  }();
  if (c.fd < 0 && c.port == 0) throw UsageError("bob needs --port (or --fd)");
  net::FdTransport t = c.fd >= 0 ? net::FdTransport(c.fd) : net::tcp_connect(c.host, c.port);
  try {
    const std::uint64_t handled = net::BobAgent(bob_in).run(t, s);
    if (!c.quiet) out << "role=bob\nmessages=" << handled << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "netsim bob: " << e.what() << '\n';
    return kIo;
  }
}

int netsim_alice(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const net::SessionConfig s = session_config(c);
  const AbcdInstance inst = obtain(c);
  auto alice_in = net::split_instance(inst).first;
  net::FdTransport t(-1);
  if (c.fd >= 0) {
    t = net::FdTransport(c.fd);
  } else {
    const int lfd = net::tcp_listen(c.port);
    out << "listening=" << net::bound_port(lfd) << std::endl;
    try {
      t = net::tcp_accept(lfd);
    } catch (...) {
      ::close(lfd);
      throw;
    }
    ::close(lfd);
  }
  const net::TranscriptReport rep = net::AliceAgent(std::move(alice_in)).run(t, s);
  return finish_netsim(inst, rep, "tcp", c, s, out, err);
}

int cmd_netsim(const RunConfig& c, const Env& env, std::ostream& out, std::ostream& err) {
  if (c.driver && !c.role.empty()) throw UsageError("--driver and --role are exclusive");
  if (c.netsim_samples == 0) throw UsageError("--samples must be >= 1");
  if (c.driver) return netsim_driver(c, env, out, err);
  if (c.role == "bob") return netsim_bob(c, out, err);
  if (c.role == "alice") return netsim_alice(c, out, err);
  const net::SessionConfig s = session_config(c);
  const AbcdInstance inst = obtain(c);
  const auto kind = c.transport == "memory" ? net::TransportKind::Memory : net::TransportKind::SocketPair;
  const net::TranscriptReport rep = net::run_session(inst, s, kind);
  return finish_netsim(inst, rep, "threads", c, s, out, err);
}

// --- bench ----------------------------------------------------------------

template <class Fn>
double best_seconds(int repeats, Fn&& fn) {
  double best = 0.0;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r == 0 || dt < best) best = dt;
  }
  return best;
}

int cmd_bench(const RunConfig& c, std::ostream& out) {
  if (c.max_n < 2 || (c.max_n & (c.max_n - 1)) != 0)
    throw UsageError("--max-n must be a power of two >= 2");
  if (c.bench_samples == 0 || c.bench_samples > 0xFFFFFFFFULL)
    throw UsageError("--samples must be in [1, 2^32)");
  const OracleCaps caps;
  report::CsvTable t{{"n", "protocol", "qubit_cost", "exact_p", "closed_form_s", "sampled_s",
                      "samples", "oracle_s"},
                     {}};
  for (std::size_t n = 2; n <= c.max_n; n *= 2) {
    const AbcdInstance inst = gen_yes(n, GenMode::ExactInverse, 0.0, RngStream{c.seed, n});
    for (const Protocol p : {Protocol::Dqc1, Protocol::Fingerprint}) {
      double exact = 0.0;
      const double closed = best_seconds(3, [&] { exact = accept_exact(p, inst); });
      const double sampled = best_seconds(1, [&] {
        if (p == Protocol::Dqc1)
          dqc1_accept_sampled(inst, c.bench_samples, RngStream{c.seed, 1}, false, c.workers);
        else
          amplify_decide(p, inst,
                         DecisionRule::midpoint(p, static_cast<std::uint32_t>(c.bench_samples)),
                         RngStream{c.seed, 2});
      });
      const std::size_t cap = p == Protocol::Dqc1 ? caps.dqc1_max_n : caps.fingerprint_max_n;
      std::string oracle;
      if (n <= cap) {
        oracle = report::format_double(best_seconds(3, [&] {
          if (p == Protocol::Dqc1)
            dqc1_circuit_sim(inst, caps);
          else
            fingerprint_circuit_sim(inst, caps);
        }));
      }
      t.add_row({std::to_string(n), std::string(to_string(p)), std::to_string(qubit_cost(p, n)),
                 report::format_double(exact), report::format_double(closed),
                 report::format_double(sampled), std::to_string(c.bench_samples), oracle});
    }
  }
  report::write_csv(out, t);
  if (!c.out.empty()) write_csv_file(c.out, t);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Env& env) {
  CLI::App app{"abcd: ABCD trace-promise protocols, oracles and SU(2) checks"};
  app.require_subcommand(1);
  RunConfig c;

  auto* gen = app.add_subcommand("gen", "Generate a labeled instance and write it as .abcd");
  add_instance_options(gen, c);
  gen->add_option("--out", c.out, "Output .abcd path")->required();

  auto* run = app.add_subcommand("run", "Evaluate a protocol on an instance");
  run->add_option("protocol,--protocol", c.protocol, "dqc1 or fingerprint")
      ->check(CLI::IsMember({"dqc1", "fingerprint"}));
  add_instance_options(run, c);
  run->add_option("--samples", c.run_samples, "Monte Carlo samples (0 = closed form only)");
  run->add_option("--reps", c.reps, "Amplified decision with this many repetitions");
  run->add_option("--threshold", c.threshold, "Acceptance threshold");
  run->add_flag("--oracle", c.oracle, "Also run the circuit simulator");
  run->add_option("--workers", c.workers, "Sample blocks (fixes the RNG block structure)");
  run->add_option("--out", c.out, "Also write the report as CSV");

  auto* verify = app.add_subcommand("verify", "SU(2) representation-theory checks");
  verify->add_option("suite", c.suite, "Suite to run")
      ->check(CLI::IsMember({"wigner", "schur", "convolution", "plancherel", "mudiag", "claim", "all"}));
  verify->add_option("--samples", c.verify_samples, "Monte Carlo samples per check");
  verify->add_option("--seed", c.seed, "Master seed");
  verify->add_option("--tolerance", c.tolerance, "Maximum allowed deviation");
  verify->add_option("--max-two-j", c.max_two_j, "Largest 2j in the sweeps")->check(CLI::Range(0u, 6u));
  verify->add_option("--workers", c.workers, "Sample blocks");
  verify->add_option("--f", c.f_path, "Band-limited function file (plancherel/claim)");
  verify->add_option("--g", c.g_path, "Second band-limited function file");
  verify->add_option("--out", c.out, "Write per-check CSV");

  auto* netsim = app.add_subcommand("netsim", "Run the one-clean-qubit protocol between two endpoints");
  add_instance_options(netsim, c);
  netsim->add_option("--samples", c.netsim_samples, "Protocol executions");
  netsim->add_option("--threshold", c.threshold, "Acceptance threshold (default 0.75)");
  netsim->add_flag("--bernoulli", c.bernoulli, "Average measurement outcomes instead of p_v");
  netsim->add_flag("--driver", c.driver, "Spawn the peer endpoint as a separate process");
  netsim->add_option("--role", c.role, "Run one endpoint")->check(CLI::IsMember({"alice", "bob"}));
  netsim->add_option("--host", c.host, "Peer host for --role bob");
  netsim->add_option("--port", c.port, "TCP port (alice listens, bob connects)");
  netsim->add_option("--fd", c.fd, "Use an inherited connected socket")->group("");
  netsim->add_option("--transport", c.transport, "In-process transport")
      ->check(CLI::IsMember({"memory", "socket"}));
  netsim->add_option("--wire-version", c.wire_version, "Wire version this endpoint sends");
  netsim->add_option("--peer-wire-version", c.peer_wire_version,
                     "Wire version the spawned peer sends (driver mode)");
  netsim->add_option("--session", c.session, "Session id (default: seed)");
  netsim->add_flag("--quiet", c.quiet, "No report from the bob endpoint");
  netsim->add_option("--out", c.out, "Also write the report as CSV");

  auto* bench = app.add_subcommand("bench", "Timing sweep over n = 2, 4, ..., max-n");
  bench->add_option("--max-n", c.max_n, "Largest n (power of two)");
  bench->add_option("--seed", c.seed, "Master seed");
  bench->add_option("--samples", c.bench_samples, "Samples for the sampled column");
  bench->add_option("--workers", c.workers, "Sample blocks");
  bench->add_option("--out", c.out, "Also write the CSV to this path");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }
  if (c.workers == 0) c.workers = 1;

  try {
    if (*gen) return cmd_gen(c, out);
    if (*run) return cmd_run(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*netsim) return cmd_netsim(c, env, out, err);
    if (*bench) return cmd_bench(c, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const net::TransportError& e) {
    err << "transport error: " << e.what() << '\n';
    return kIo;
  } catch (const net::DecodeError& e) {
    err << "protocol error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace abcd::cli
