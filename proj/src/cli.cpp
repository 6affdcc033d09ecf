#include <qpc/cli.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qpc/correlations.hpp>
#include <qpc/errors.hpp>
#include <qpc/io.hpp>
#include <qpc/metrics.hpp>
#include <qpc/partialcoh.hpp>
#include <qpc/qsd.hpp>
#include <qpc/qsdstate.hpp>
#include <qpc/states.hpp>
#include <qpc/verify.hpp>

namespace qpc::cli {

namespace {

using io::Json;

struct Flags {
  std::string kind = "fidelity";
  std::uint64_t seed = 24601;
  int restarts = 20;
  int trials = 0;
  double tol = 1e-6;
  std::string out_path;
  std::string basis_path;
  bool require_invertible = false;
  std::string suite = "all";
};

struct Ctx {
  std::vector<std::string> input_bytes;  // raw bytes of every file read, in order
  std::ostringstream log;
};

std::string slurp(Ctx& ctx, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  ctx.input_bytes.push_back(ss.str());
  return ctx.input_bytes.back();
}

io::StateDocument load_document(Ctx& ctx, const std::string& path) {
  return io::parse_document(slurp(ctx, path));
}

std::string inputs_digest(const Ctx& ctx) {
  std::string joined;
  for (const std::string& bytes : ctx.input_bytes) {
    joined += bytes;
    joined.push_back('\0');
  }
  return io::digest_hex(joined);
}

Kind parse_kind(const std::string& name) {
  if (name == "fidelity") return Kind::Fidelity;
  if (name == "affinity") return Kind::Affinity;
  throw ValidationError("--kind must be 'fidelity' or 'affinity', got '" + name + "'");
}

// Accepts density, bipartite, or pure documents wherever a bare state is needed.
DensityMatrix coerce_density(const io::StateDocument& doc) {
  switch (doc.kind) {
    case io::DocKind::Density: return io::as_density(doc);
    case io::DocKind::Bipartite: return DensityMatrix(doc.matrix);
    case io::DocKind::Pure: {
      const Vec psi = io::as_pure(doc);
      return DensityMatrix(psi * psi.adjoint());
    }
    default:
      throw SchemaError("/kind: expected a state document, got '" +
                        std::string(io::doc_kind_name(doc.kind)) + "'");
  }
}

Mat load_basis(Ctx& ctx, const std::string& path) {
  Json j;
  try {
    j = Json::parse(slurp(ctx, path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON in basis file: ") + e.what());
  }
  return io::matrix_from_json(j, "/basis");
}

void write_artifact(Ctx& ctx, const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  out << bytes;
  ctx.log << "wrote " << path << " (" << bytes.size() << " bytes)\n";
}

Json certificate_json(const Certificate& c) {
  Json j = Json::object();
  j["restarts"] = c.restarts;
  j["best_restart"] = c.best_restart;
  j["converged"] = c.converged;
  return j;
}

Json coherence_report_json(const CoherenceReport& r, const Flags& flags, Ctx& ctx) {
  Json j = Json::object();
  j["values"] = Json::object({{"value", r.value}});
  j["method"] = pc_method_name(r.method);
  j["exactness"] = exactness_name(r.exactness);
  Json diag = Json::object();
  diag["clamp_overshoot"] = metrics_diag::max_overshoot();
  if (r.method == PcMethod::VnOptimized) diag["certificate"] = certificate_json(r.certificate);
  diag["tolerances"] =
      Json::object({{"cpis_admissibility", 1e-8}, {"report_consistency", 1e-7}});
  j["diagnostics"] = std::move(diag);
  const io::StateDocument cpis = io::document_from_density(r.cpis);
  j["cpis"] = io::document_to_json(cpis);
  if (!flags.out_path.empty())
    write_artifact(ctx, flags.out_path, io::serialize_document(cpis));
  return j;
}

Json discrimination_json(const DiscriminationResult& r, const Flags& flags, Ctx& ctx,
                         bool with_certificate) {
  Json j = Json::object();
  j["values"] =
      Json::object({{"success_prob", r.success_prob}, {"error_prob", r.error_prob}});
  Json diag = Json::object();
  diag["clamp_overshoot"] = metrics_diag::max_overshoot();
  if (with_certificate) diag["certificate"] = certificate_json(r.certificate);
  diag["tolerances"] = Json::object({{"povm_completeness", 1e-8}});
  j["diagnostics"] = std::move(diag);
  Json effects = Json::array();
  for (const Mat& m : r.measurement.effects) effects.push_back(io::matrix_to_json(m));
  j["measurement"] = effects;
  if (!flags.out_path.empty()) write_artifact(ctx, flags.out_path, effects.dump());
  return j;
}

Json cc_result_json(const CcResult& r, const Flags& flags, Ctx& ctx) {
  Json j = Json::object();
  j["values"] = Json::object({{"value", r.value}});
  j["exactness"] = r.exact ? "exact" : "upper_bound";
  Json diag = Json::object();
  diag["clamp_overshoot"] = metrics_diag::max_overshoot();
  diag["tolerances"] = Json::object({{"descent_tol", flags.tol}});
  j["diagnostics"] = std::move(diag);
  j["basis"] = io::matrix_to_json(r.basis);
  if (!flags.out_path.empty())
    write_artifact(ctx, flags.out_path, io::matrix_to_json(r.basis).dump());
  return j;
}

std::vector<int> parse_suites(const std::string& spec) {
  if (spec == "all" || spec.empty()) return {};
  std::vector<int> suites;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      const int n = std::stoi(tok);
      if (n < 1 || n > verify::suite_count())
        throw ValidationError("--suite: criterion " + tok + " out of range");
      suites.push_back(n);
    } catch (const std::invalid_argument&) {
      throw ValidationError("--suite expects 'all' or a comma-separated list of numbers");
    } catch (const std::out_of_range&) {
      throw ValidationError("--suite: criterion " + tok + " out of range");
    }
  }
  return suites;
}

}  // namespace

RunOutput run(const std::vector<std::string>& args) {
  RunOutput output;
  Ctx ctx;
  metrics_diag::reset_overshoot();

  CLI::App app{"Distance-based partial coherence, correlation, and state-discrimination toolkit"};
  app.require_subcommand(1);

  Flags flags;
  std::string file_a, file_b;

  // Declared once, attached where meaningful.
  const auto add_kind = [&](CLI::App* cmd) {
    cmd->add_option("--kind", flags.kind, "Distance flavor")
        ->check(CLI::IsMember({"fidelity", "affinity"}))
        ->capture_default_str();
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "Deterministic RNG seed")->capture_default_str();
  };
  const auto add_restarts = [&](CLI::App* cmd) {
    cmd->add_option("--restarts", flags.restarts, "Optimizer restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", flags.out_path, "Write the command's artifact to this path");
  };
  const auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", flags.tol, "Descent tolerance")->capture_default_str();
  };

  std::string command_name;
  std::function<Json()> handler;

  // distance A B
  {
    CLI::App* cmd = app.add_subcommand("distance", "d_X(rho, sigma) = 1 - X^2 between two states");
    cmd->add_option("a", file_a, "First state document")->required();
    cmd->add_option("b", file_b, "Second state document")->required();
    add_kind(cmd);
    add_out(cmd);
    cmd->callback([&] {
      command_name = "distance";
      handler = [&]() -> Json {
        const Kind kind = parse_kind(flags.kind);
        const DensityMatrix rho = coerce_density(load_document(ctx, file_a));
        const DensityMatrix sigma = coerce_density(load_document(ctx, file_b));
        const double x = similarity(rho, sigma, kind);
        Json j = Json::object();
        j["values"] = Json::object({{"value", 1.0 - x * x}, {"similarity", x}});
        Json diag = Json::object();
        diag["clamp_overshoot"] = metrics_diag::max_overshoot();
        diag["tolerances"] = Json::object({{"state_validation", 1e-8}});
        j["diagnostics"] = std::move(diag);
        return j;
      };
    });
  }

  // coherence STATE [--basis FILE]
  {
    CLI::App* cmd = app.add_subcommand("coherence", "Coherence of a single state w.r.t. a basis");
    cmd->add_option("state", file_a, "State document")->required();
    add_kind(cmd);
    add_seed(cmd);
    add_restarts(cmd);
    add_out(cmd);
    cmd->add_option("--basis", flags.basis_path, "JSON file holding the reference basis matrix");
    cmd->callback([&] {
      command_name = "coherence";
      handler = [&]() -> Json {
        const Kind kind = parse_kind(flags.kind);
        const DensityMatrix rho = coerce_density(load_document(ctx, file_a));
        const Mat basis = flags.basis_path.empty()
                              ? Mat(Mat::Identity(rho.dim(), rho.dim()))
                              : load_basis(ctx, flags.basis_path);
        PcOptions opts;
        opts.vn_restarts = flags.restarts;
        opts.seed = flags.seed;
        const CoherenceReport r = kind == Kind::Fidelity
                                      ? fidelity_coherence(rho, basis, opts)
                                      : affinity_coherence(rho, basis);
        return coherence_report_json(r, flags, ctx);
      };
    });
  }

  // partial-coherence STATE
  {
    CLI::App* cmd =
        app.add_subcommand("partial-coherence", "Partial coherence of a bipartite state");
    cmd->add_option("state", file_a, "Bipartite state document")->required();
    add_kind(cmd);
    add_seed(cmd);
    add_restarts(cmd);
    add_out(cmd);
    cmd->callback([&] {
      command_name = "partial-coherence";
      handler = [&]() -> Json {
        const Kind kind = parse_kind(flags.kind);
        const BipartiteState rho = io::as_bipartite(load_document(ctx, file_a));
        PcOptions opts;
        opts.vn_restarts = flags.restarts;
        opts.seed = flags.seed;
        return coherence_report_json(partial_coherence(rho, kind, opts), flags, ctx);
      };
    });
  }

  // qsd helstrom|lsm|optimal-vn ENSEMBLE
  {
    CLI::App* qsd_cmd = app.add_subcommand("qsd", "Quantum state discrimination");
    qsd_cmd->require_subcommand(1);

    CLI::App* h = qsd_cmd->add_subcommand("helstrom", "Optimal binary discrimination");
    h->add_option("ensemble", file_a, "Ensemble document")->required();
    add_out(h);
    h->callback([&] {
      command_name = "qsd helstrom";
      handler = [&]() -> Json {
        const Ensemble e = io::as_ensemble(load_document(ctx, file_a));
        return discrimination_json(helstrom(e), flags, ctx, false);
      };
    });

    CLI::App* l = qsd_cmd->add_subcommand("lsm", "Least-squares (pretty good) measurement");
    l->add_option("ensemble", file_a, "Ensemble document")->required();
    add_out(l);
    l->callback([&] {
      command_name = "qsd lsm";
      handler = [&]() -> Json {
        const Ensemble e = io::as_ensemble(load_document(ctx, file_a));
        return discrimination_json(lsm_result(e), flags, ctx, false);
      };
    });

    CLI::App* v = qsd_cmd->add_subcommand("optimal-vn", "Best von Neumann measurement search");
    v->add_option("ensemble", file_a, "Ensemble document")->required();
    add_seed(v);
    add_restarts(v);
    add_out(v);
    v->callback([&] {
      command_name = "qsd optimal-vn";
      handler = [&]() -> Json {
        const Ensemble e = io::as_ensemble(load_document(ctx, file_a));
        VnOptions opts;
        opts.restarts = flags.restarts;
        opts.seed = flags.seed;
        return discrimination_json(optimal_vn(e, e.dim(), opts), flags, ctx, true);
      };
    });
  }

  // qsd-state build|check ENSEMBLE
  {
    CLI::App* qs = app.add_subcommand("qsd-state", "Discrimination-task state embedding");
    qs->require_subcommand(1);

    CLI::App* b = qs->add_subcommand("build", "Embed an ensemble into one bipartite state");
    b->add_option("ensemble", file_a, "Ensemble document")->required();
    add_out(b);
    b->callback([&] {
      command_name = "qsd-state build";
      handler = [&]() -> Json {
        const Ensemble e = io::as_ensemble(load_document(ctx, file_a));
        const BipartiteState rho = build_qsd_state(e);
        const RoundtripReport rt = qsd_state_roundtrip(e);
        Json j = Json::object();
        j["values"] = Json::object({{"n_a", rho.n_a},
                                    {"n_b", rho.n_b},
                                    {"max_prior_error", rt.max_prior_error},
                                    {"max_spectrum_error", rt.max_spectrum_error}});
        Json diag = Json::object();
        diag["clamp_overshoot"] = metrics_diag::max_overshoot();
        diag["tolerances"] = Json::object({{"prior_recovery", 1e-9}, {"spectrum", 1e-8}});
        j["diagnostics"] = std::move(diag);
        const io::StateDocument doc = io::document_from_bipartite(rho);
        j["state"] = io::document_to_json(doc);
        if (!flags.out_path.empty())
          write_artifact(ctx, flags.out_path, io::serialize_document(doc));
        return j;
      };
    });

    CLI::App* c = qs->add_subcommand("check", "Bound and identity report for an ensemble");
    c->add_option("ensemble", file_a, "Ensemble document")->required();
    add_seed(c);
    add_restarts(c);
    c->callback([&] {
      command_name = "qsd-state check";
      handler = [&]() -> Json {
        const Ensemble e = io::as_ensemble(load_document(ctx, file_a));
        PcOptions opts;
        opts.vn_restarts = flags.restarts;
        opts.seed = flags.seed;
        const BoundReport r = discrimination_bound_check(e, opts);
        const RoundtripReport rt = qsd_state_roundtrip(e);
        Json j = Json::object();
        j["values"] = Json::object({{"fidelity_pc", r.fidelity_pc},
                                    {"reference_error", r.reference_error},
                                    {"affinity_pc", r.affinity_pc},
                                    {"lsm_error", r.lsm_error_value},
                                    {"lsm_identity_gap", r.lsm_identity_gap},
                                    {"max_prior_error", rt.max_prior_error},
                                    {"max_spectrum_error", rt.max_spectrum_error}});
        Json diag = Json::object();
        diag["clamp_overshoot"] = metrics_diag::max_overshoot();
        diag["bound_holds"] = r.bound_holds;
        diag["linearly_independent"] = r.linearly_independent;
        diag["equality"] = r.equality;
        diag["tolerances"] = Json::object(
            {{"bound_slack", 1e-8}, {"equality", 1e-7}, {"lsm_identity", 1e-8}});
        j["diagnostics"] = std::move(diag);
        return j;
      };
    });
  }

  // xstate STATE
  {
    CLI::App* cmd = app.add_subcommand("xstate", "Closed-form fidelity partial coherence "
                                                 "for (2,n) X-states");
    cmd->add_option("state", file_a, "Bipartite X-state document")->required();
    cmd->add_flag("--require-invertible", flags.require_invertible,
                  "Reject singular inputs instead of using the limiting formula");
    add_out(cmd);
    cmd->callback([&] {
      command_name = "xstate";
      handler = [&]() -> Json {
        const BipartiteState rho = io::as_bipartite(load_document(ctx, file_a));
        return coherence_report_json(xstate_fidelity_pc(rho, flags.require_invertible),
                                     flags, ctx);
      };
    });
  }

  // gcc / cc / discord STATE
  {
    CLI::App* cmd = app.add_subcommand("gcc", "Correlated coherence gap in the given basis");
    cmd->add_option("state", file_a, "Bipartite state document")->required();
    add_kind(cmd);
    add_seed(cmd);
    add_restarts(cmd);
    cmd->callback([&] {
      command_name = "gcc";
      handler = [&]() -> Json {
        const Kind kind = parse_kind(flags.kind);
        const BipartiteState rho = io::as_bipartite(load_document(ctx, file_a));
        PcOptions opts;
        opts.vn_restarts = flags.restarts;
        opts.seed = flags.seed;
        const double g = gcc(rho, kind, opts);
        Json j = Json::object();
        j["values"] = Json::object({{"value", g}});
        Json diag = Json::object();
        diag["clamp_overshoot"] = metrics_diag::max_overshoot();
        diag["tolerances"] = Json::object({{"nonnegativity_slack", 1e-7}});
        j["diagnostics"] = std::move(diag);
        return j;
      };
    });
  }
  {
    CLI::App* cmd = app.add_subcommand("cc", "Correlated coherence (min over marginal eigenbases)");
    cmd->add_option("state", file_a, "Bipartite state document")->required();
    add_kind(cmd);
    add_seed(cmd);
    add_restarts(cmd);
    add_tol(cmd);
    add_out(cmd);
    cmd->callback([&] {
      command_name = "cc";
      handler = [&]() -> Json {
        const Kind kind = parse_kind(flags.kind);
        const BipartiteState rho = io::as_bipartite(load_document(ctx, file_a));
        return cc_result_json(
            correlated_coherence(rho, kind, flags.restarts, flags.seed, flags.tol), flags,
            ctx);
      };
    });
  }
  {
    CLI::App* cmd = app.add_subcommand("discord", "Discord-type upper bound (min over all bases)");
    cmd->add_option("state", file_a, "Bipartite state document")->required();
    add_kind(cmd);
    add_seed(cmd);
    add_restarts(cmd);
    add_tol(cmd);
    add_out(cmd);
    cmd->callback([&] {
      command_name = "discord";
      handler = [&]() -> Json {
        const Kind kind = parse_kind(flags.kind);
        const BipartiteState rho = io::as_bipartite(load_document(ctx, file_a));
        return cc_result_json(
            discord_estimate(rho, kind, flags.restarts, flags.seed, flags.tol), flags, ctx);
      };
    });
  }

  // verify
  bool verify_failed = false;
  {
    CLI::App* cmd = app.add_subcommand("verify", "Run the acceptance suites");
    cmd->add_option("--suite", flags.suite, "'all' or comma-separated criterion numbers")
        ->capture_default_str();
    add_seed(cmd);
    cmd->add_option("--trials", flags.trials,
                    "Override per-suite trial counts (0 = acceptance defaults)")
        ->capture_default_str();
    add_out(cmd);
    cmd->callback([&] {
      command_name = "verify";
      handler = [&]() -> Json {
        verify::VerifyOptions opts;
        opts.seed = flags.seed;
        opts.trials = flags.trials;
        opts.suites = parse_suites(flags.suite);
        const std::vector<verify::SuiteResult> results =
            verify::run_verification(opts, ctx.log);
        int checks = 0, failures = 0, passed = 0;
        Json suites = Json::array();
        for (const verify::SuiteResult& s : results) {
          checks += s.checks;
          failures += s.failures;
          passed += s.passed() ? 1 : 0;
          Json row = Json::object();
          row["criterion"] = s.criterion;
          row["name"] = s.name;
          row["checks"] = s.checks;
          row["failures"] = s.failures;
          row["passed"] = s.passed();
          suites.push_back(std::move(row));
        }
        verify_failed = failures > 0;
        Json j = Json::object();
        j["values"] = Json::object({{"suites_run", static_cast<int>(results.size())},
                                    {"suites_passed", passed},
                                    {"checks", checks},
                                    {"failures", failures}});
        Json diag = Json::object();
        diag["clamp_overshoot"] = metrics_diag::max_overshoot();
        diag["suites"] = std::move(suites);
        j["diagnostics"] = std::move(diag);
        return j;
      };
    });
  }

  // Parse. CLI11 expects argv[0]; synthesize it.
  std::vector<const char*> argv;
  argv.push_back("qpc");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    help << app.help();
    output.out = help.str();
    output.exit_code = 0;
    return output;
  } catch (const CLI::ParseError& e) {
    ctx.log << "error: " << e.what() << "\n";
    output.err = ctx.log.str();
    output.exit_code = 2;
    return output;
  }

  const auto started = std::chrono::steady_clock::now();
  Json result = Json::object();
  try {
    Json body = handler();
    // Canonical order: command, inputs_digest, kind?, then the handler body,
    // elapsed_ms last.
    result["command"] = command_name;
    result["inputs_digest"] = inputs_digest(ctx);
    const bool has_kind = command_name == "distance" || command_name == "coherence" ||
                          command_name == "partial-coherence" || command_name == "gcc" ||
                          command_name == "cc" || command_name == "discord";
    if (has_kind) result["kind"] = flags.kind;
    for (auto& [key, value] : body.items()) result[key] = value;
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    result["elapsed_ms"] = elapsed;
    output.out = result.dump() + "\n";
    output.err = ctx.log.str();
    output.exit_code = verify_failed ? 1 : 0;
    return output;
  } catch (const ValidationError& e) {
    ctx.log << "error: " << e.what() << "\n";
    output.err = ctx.log.str();
    output.exit_code = 2;
    return output;
  } catch (const NumericalError& e) {
    ctx.log << "error: " << e.what() << "\n";
    output.err = ctx.log.str();
    output.exit_code = 3;
    return output;
  } catch (const std::exception& e) {
    ctx.log << "error: " << e.what() << "\n";
    output.err = ctx.log.str();
    output.exit_code = 3;
    return output;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const RunOutput out = run(args);
  std::cout << out.out;
  std::cerr << out.err;
  return out.exit_code;
}

}  // namespace qpc::cli
