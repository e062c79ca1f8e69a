#include "cli.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "varorder/error.hpp"
#include "varorder/io.hpp"
#include "varorder/order_structure.hpp"
#include "varorder/quantum_state.hpp"
#include "varorder/variance_order.hpp"

namespace varorder::cli {

namespace {

using io::Json;

constexpr double kOracleHoldsCeiling = 1e-6;

void emit(std::ostream& out, const Json& payload) {
  out << io::with_header(payload).dump(2) << '\n';
}

HermitianObservable load_observable(const std::string& path) {
  return io::observable_from_json(io::read_json_file(path));
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

int check_order(Context& ctx, const std::string& a_path, const std::string& b_path, double tol,
                int oracle_trials, std::uint64_t seed) {
  const HermitianObservable a = load_observable(a_path);
  const HermitianObservable b = load_observable(b_path);
  require_same_dim(a, b);
  const OrderVerdict v = decide_order(a, b, tol);
  Json report = io::verdict_to_json(v);

  bool agree = true;
  if (oracle_trials > 0) {
    OracleConfig cfg;
    cfg.restarts = oracle_trials;
    cfg.seed = seed;
    const OracleResult r = witness_search(a, b, cfg);
    report["oracle"] = io::oracle_to_json(r, cfg);
    std::string reason;
    if (v.holds && r.best_value > kOracleHoldsCeiling) {
      agree = false;
      reason = "decision holds but the oracle found a state with positive gap";
    } else if (!v.holds && r.best_value < std::min(kOracleHoldsCeiling, 0.5 * v.margin)) {
      agree = false;
      reason = "decision fails but the oracle found no state near the witness margin";
    }
    Json consistency;
    consistency["agree"] = agree;
    consistency["holds_ceiling"] = kOracleHoldsCeiling;
    if (!agree) consistency["reason"] = reason;
    report["consistency"] = std::move(consistency);
  }
  emit(ctx.out, report);
  if (!agree) {
    ctx.err << "error: decision and oracle disagree\n";
    return kExitInternal;
  }
  return v.holds ? kExitPositive : kExitNegative;
}

int extract(Context& ctx, const std::string& a_path, const std::string& b_path, double tol) {
  const HermitianObservable a = load_observable(a_path);
  const HermitianObservable b = load_observable(b_path);
  try {
    const FunctionTable f = extract_function(a, b, tol);
    emit(ctx.out, Json{{"holds", true}, {"function", io::table_to_json(f)},
                       {"lipschitz_bound", f.lipschitz_bound()}});
    return kExitPositive;
  } catch (const OrderDoesNotHold& e) {
    emit(ctx.out, Json{{"holds", false},
                       {"witness", io::vector_to_json(e.witness().vector())},
                       {"margin", e.margin()},
                       {"message", e.what()}});
    return kExitNegative;
  }
}

int variance_cmd(Context& ctx, const std::string& a_path, const std::string& state_path) {
  const HermitianObservable a = load_observable(a_path);
  const io::State state = io::state_from_json(io::read_json_file(state_path));
  const SpectralDecomposition d = eigendecompose(a);
  Json report;
  std::visit(
      [&](const auto& s) {
        if (s.dim() != a.dim()) throw DimensionMismatch("state and observable dimensions differ");
        const BornMeasure mu = born_measure(d, s);
        report["expectation"] = expectation(a, s);
        report["variance"] = variance(a, s);
        report["measure_variance"] = measure_variance(mu);
        report["born_measure"] = io::measure_to_json(mu);
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, PureState>) {
          report["defect"] = variance_defect(a, s);
        }
      },
      state);
  emit(ctx.out, report);
  return kExitPositive;
}

int upper_bound(Context& ctx, const std::string& a_path, const std::string& b_path, double tol) {
  const HermitianObservable a = load_observable(a_path);
  const HermitianObservable b = load_observable(b_path);
  require_same_dim(a, b);
  const double comm = commutator_norm(a, b);
  const double limit = tol < 0.0 ? default_order_tol(a, b) : tol;
  if (comm > limit) {
    emit(ctx.out, Json{{"exists", false}, {"commutator_norm", comm}, {"tol", limit}});
    return kExitNegative;
  }
  const JointUpperBound u = joint_upper_bound(a, b, limit);
  const bool a_below = decide_order(a, u.bound).holds;
  const bool b_below = decide_order(b, u.bound).holds;
  emit(ctx.out, Json{{"exists", true},
                     {"bound", io::observable_to_json(u.bound)},
                     {"tau", u.tau},
                     {"beta", u.beta},
                     {"verified", Json{{"a_below", a_below}, {"b_below", b_below}}}});
  if (!a_below || !b_below) {
    ctx.err << "error: constructed bound failed verification\n";
    return kExitInternal;
  }
  return kExitPositive;
}

int lower_set(Context& ctx, const std::string& a_path) {
  const HermitianObservable a = load_observable(a_path);
  emit(ctx.out, Json{{"families", io::families_to_json(two_point_lower_set(a))}});
  return kExitPositive;
}

int q_matrix_cmd(Context& ctx, const std::string& spectrum) {
  std::error_code ec;
  const std::vector<double> points =
      std::filesystem::is_regular_file(spectrum, ec)
          ? io::spectrum_from_json(io::read_json_file(spectrum))
          : io::spectrum_from_text(spectrum);
  const QMatrix q = q_matrix(points);
  Json report = io::qmatrix_to_json(q);
  report["max_attainment_count"] = max_attainment_count(q);
  emit(ctx.out, report);
  return kExitPositive;
}

int reconstruct(Context& ctx, const std::string& q_path) {
  const QMatrix q = io::qmatrix_from_json(io::read_json_file(q_path));
  emit(ctx.out, io::reconstruction_to_json(reconstruct_metric(q)));
  return kExitPositive;
}

int automorphism(Context& ctx, double alpha, const std::string& unitary_path, bool antiunitary,
                 std::size_t trials, std::size_t dim, std::uint64_t seed) {
  UnitaryMap u = unitary_path.empty()
                     ? UnitaryMap(ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                                          static_cast<Eigen::Index>(dim)),
                                  antiunitary)
                     : io::unitary_from_json(io::read_json_file(unitary_path), antiunitary);
  const AutomorphismSpec spec(alpha, std::move(u));
  const AutomorphismReport r = verify_automorphism(spec, trials, seed);
  Json report = io::automorphism_report_to_json(r);
  report["alpha"] = alpha;
  report["antiunitary"] = antiunitary;
  report["dim"] = spec.unitary().dim();
  report["seed"] = seed;
  emit(ctx.out, report);
  return r.passed ? kExitPositive : kExitNegative;
}

int canonical(Context& ctx, const std::string& a_path) {
  const HermitianObservable a = load_observable(a_path);
  emit(ctx.out, Json{{"canonical", io::observable_to_json(canonical_representative(a))}});
  return kExitPositive;
}

int max_deviation(Context& ctx, const std::string& a_path) {
  const HermitianObservable a = load_observable(a_path);
  emit(ctx.out, Json{{"max_deviation", maximal_deviation(a)}});
  return kExitPositive;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance order toolkit for Hermitian matrices", io::kToolName};
  app.set_version_flag("--version", io::kToolVersion);
  app.require_subcommand(1);

  Context ctx{out, err};
  std::function<int()> action;

  std::string a_path, b_path, state_path, q_path, unitary_path, spectrum;
  double tol = -1.0;
  double alpha = 1.0;
  int oracle_trials = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 50;
  std::size_t dim = 3;
  bool antiunitary = false;

  auto* check = app.add_subcommand("check-order", "Decide A <= B; exit 0 holds, 1 fails");
  check->add_option("A", a_path, "observable file")->required()->check(CLI::ExistingFile);
  check->add_option("B", b_path, "reference observable file")->required()->check(CLI::ExistingFile);
  check->add_option("--tol", tol, "decision tolerance (negative: automatic)");
  check->add_option("--oracle-trials", oracle_trials, "witness search restarts for cross-check")
      ->check(CLI::NonNegativeNumber);
  check->add_option("--seed", seed, "oracle seed");
  check->callback([&] {
    action = [&] { return check_order(ctx, a_path, b_path, tol, oracle_trials, seed); };
  });

  auto* ext = app.add_subcommand("extract-function", "Tabulate f with A = f(B)");
  ext->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  ext->add_option("B", b_path)->required()->check(CLI::ExistingFile);
  ext->add_option("--tol", tol);
  ext->callback([&] { action = [&] { return extract(ctx, a_path, b_path, tol); }; });

  auto* var = app.add_subcommand("variance", "Expectation, variance and Born measure");
  var->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  var->add_option("STATE", state_path, "state file with \"vector\" or \"density\"")
      ->required()
      ->check(CLI::ExistingFile);
  var->callback([&] { action = [&] { return variance_cmd(ctx, a_path, state_path); }; });

  auto* jub = app.add_subcommand("joint-upper-bound", "Common upper bound of commuting A, B");
  jub->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  jub->add_option("B", b_path)->required()->check(CLI::ExistingFile);
  jub->add_option("--tol", tol, "commutator tolerance");
  jub->callback([&] { action = [&] { return upper_bound(ctx, a_path, b_path, tol); }; });

  auto* low = app.add_subcommand("lower-set", "Two-point observables below A");
  low->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  low->callback([&] { action = [&] { return lower_set(ctx, a_path); }; });

  auto* qm = app.add_subcommand("q-matrix", "q-matrix of a spectrum");
  qm->add_option("SPECTRUM", spectrum, "comma-separated list or JSON array file")->required();
  qm->callback([&] { action = [&] { return q_matrix_cmd(ctx, spectrum); }; });

  auto* rec = app.add_subcommand("reconstruct-metric", "Pairwise distances from a q-matrix");
  rec->add_option("Q", q_path)->required()->check(CLI::ExistingFile);
  rec->callback([&] { action = [&] { return reconstruct(ctx, q_path); }; });

  auto* aut = app.add_subcommand("verify-automorphism", "Check that X -> alpha U X U* preserves the order");
  aut->add_option("--alpha", alpha, "positive scale");
  aut->add_option("--unitary", unitary_path, "unitary matrix file (default: identity)")
      ->check(CLI::ExistingFile);
  aut->add_flag("--antiunitary", antiunitary, "conjugate the argument first");
  aut->add_option("--trials", trials, "sampled pairs");
  aut->add_option("--dim", dim, "dimension when no unitary is given")->check(CLI::PositiveNumber);
  aut->add_option("--seed", seed);
  aut->callback([&] {
    action = [&] {
      return automorphism(ctx, alpha, unitary_path, antiunitary, trials, dim, seed);
    };
  });

  auto* can = app.add_subcommand("canonical", "Canonical member of the variance class of A");
  can->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  can->callback([&] { action = [&] { return canonical(ctx, a_path); }; });

  auto* dev = app.add_subcommand("max-deviation", "Largest standard deviation over pure states");
  dev->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  dev->callback([&] { action = [&] { return max_deviation(ctx, a_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPositive : kExitInput;
  }

  try {
    return action();
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConvergenceError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace varorder::cli
