#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "nwdag/adjacency.hpp"
#include "nwdag/approx.hpp"
#include "nwdag/bounds.hpp"
#include "nwdag/builders.hpp"
#include "nwdag/dag_io.hpp"
#include "nwdag/error.hpp"
#include "nwdag/learn.hpp"
#include "nwdag/pathnorm.hpp"
#include "nwdag/rademacher.hpp"

namespace nwdag::cli {

namespace {

constexpr const char* kPathnormHeader = "file,neumann,enumeration,delta,paths,terms";
constexpr const char* kForwardHeader = "file,x,output,one_sweep,steps,nilpotency_index";
constexpr const char* kApproxHeader = "seed,d,atoms,sparsity,signs,m,rep,accepted_risk,risk_stderr,bound,path_norm,retries";
constexpr const char* kTrainHeader =
    "seed,trial,arch,dims,n,d,lambda0,lambda,steps,step_size,batch,r_s,r_d_hat,r_d_stderr,path_norm,apost_bound,apri_bound,delta";
constexpr const char* kRademacherHeader = "seed,d,n,m,q,trials,steps,restarts,estimate,stderr,bound,within";
constexpr const char* kAprioriHeader = "kind,d,n,n_non,barron,lambda0,lambda,delta,bound";
constexpr const char* kAposterioriHeader = "kind,d,n,path_norm,delta,bound";

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for a given purpose, so the target, the data and the
// optimizer never share draws.
Rng stream(std::uint64_t seed, std::uint64_t purpose) { return Rng(splitmix(seed ^ splitmix(purpose))); }

struct ArchOptions {
  std::string arch = "densenet";
  std::size_t d = 8, m = 4, D = 9, L = 3, k0 = 9, k = 2;
  std::vector<std::size_t> widths{16};
};

void add_arch_options(CLI::App* sub, ArchOptions& o) {
  sub->add_option("--arch", o.arch, "two-layer | fc | resnet | densenet")->check(CLI::IsMember({"two-layer", "two_layer", "fc", "resnet", "densenet"}))->capture_default_str();
  sub->add_option("--d", o.d, "input dimension")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--m", o.m, "hidden width (two-layer), block width (resnet), per-layer width unit (densenet)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--D", o.D, "resnet skip width")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--L", o.L, "number of blocks or layers")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--k0", o.k0, "densenet initial width")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--k", o.k, "densenet growth rate")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--widths", o.widths, "fc hidden widths m_1,...,m_L")->delimiter(',')->check(CLI::PositiveNumber);
}

ArchitectureDims dims_of(const ArchOptions& o) {
  if (o.arch == "two-layer" || o.arch == "two_layer") return TwoLayerDims{o.d, o.m};
  if (o.arch == "fc") {
    FcDims dims;
    dims.widths.push_back(o.d);
    dims.widths.insert(dims.widths.end(), o.widths.begin(), o.widths.end());
    return dims;
  }
  if (o.arch == "resnet") return ResNetDims{o.d, o.D, o.m, o.L};
  return DenseNetDims{o.d, o.k0, o.k, o.m, o.L};
}

std::string dims_text(const ArchitectureDims& dims) {
  struct Visitor {
    std::string operator()(const TwoLayerDims& t) const { return "d=" + std::to_string(t.d) + ";m=" + std::to_string(t.m); }
    std::string operator()(const FcDims& f) const {
      std::string s = "widths=";
      for (std::size_t i = 0; i < f.widths.size(); ++i) s += (i ? ":" : "") + std::to_string(f.widths[i]);
      return s;
    }
    std::string operator()(const ResNetDims& r) const {
      return "d=" + std::to_string(r.d) + ";D=" + std::to_string(r.D) + ";m=" + std::to_string(r.m) + ";L=" + std::to_string(r.L);
    }
    std::string operator()(const DenseNetDims& r) const {
      return "d=" + std::to_string(r.d) + ";k0=" + std::to_string(r.k0) + ";k=" + std::to_string(r.k) + ";m=" + std::to_string(r.m) + ";L=" + std::to_string(r.L);
    }
  };
  return std::visit(Visitor{}, dims);
}

NonlinearDag skeleton_of(const ArchitectureDims& dims) {
  Rng unused(0);
  return build_network(make_params(dims, InitScheme::zero(), unused)).dag;
}

std::string check_lambda0(const std::string& s) {
  if (s == "auto" || s == "none") return "";
  std::istringstream in(s);
  double v = 0.0;
  if (in >> v && in.eof()) return "";
  return "expected auto, none or a number";
}

std::optional<double> resolve_lambda0(const std::string& s, std::size_t d) {
  if (s == "none") return std::nullopt;
  if (s == "auto") return lambda0_threshold(d);
  return std::stod(s);
}

std::string check_init(const std::string& s) {
  try {
    parse_init(s);
    return "";
  } catch (const std::exception& e) {
    return e.what();
  }
}

std::string check_cell(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) return "cell must look like d:n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != colon && !std::isdigit(static_cast<unsigned char>(s[i]))) return "cell must look like d:n";
  }
  return "";
}

// Appends lines to a CSV ledger, writing the header first when the file is new
// or empty.
void append_ledger(const std::string& path, const char* header, const std::vector<std::string>& rows) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw Error("cannot open ledger '" + path + "' for appending");
  if (fresh) f << header << '\n';
  for (const auto& r : rows) f << r << '\n';
  if (!f) throw Error("failed writing ledger '" + path + "'");
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  ArchOptions arch;
  std::string init = "scaled";
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  Rng rng(a.seed);
  const BuiltNetwork net = build_network(make_params(dims_of(a.arch), parse_init(a.init), rng));
  if (a.out_path.empty()) {
    write_dag(out, net.dag);
  } else {
    save_dag(a.out_path, net.dag);
  }
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const NonlinearDag dag = load_dag(path);
  if (!dag.is_valid()) {
    out << "invalid\n";
    for (const auto& v : dag.violations()) out << "violation: " << v << '\n';
    return kExitDomain;
  }
  out << "valid\n";
  out << "input_assumption: " << (validate_input_assumption(dag) ? "yes" : "no") << '\n';
  const ShortcutCheck check = validate_shortcut_form(dag);
  std::string form = "none";
  if (check.form) form = *check.form == ShortcutCheck::Form::TwoLayer ? "two-layer" : "block-chain";
  out << "shortcut_form: " << form << (check.satisfied ? " (satisfied)" : " (not satisfied)") << '\n';
  if (!check.diagnostic.empty()) out << "diagnostic: " << check.diagnostic << '\n';
  const EdgeCounts counts = edge_counts(dag);
  out << "edges: param=" << counts.n_para << " fixed=" << counts.n_fix << " nonlinear=" << counts.n_non << '\n';
  return kExitOk;
}

int cmd_pathnorm(const std::string& path, std::size_t max_paths, std::ostream& out) {
  const NonlinearDag dag = load_dag(path);
  dag.require_valid();
  const ParamVector theta = stored_params(dag);
  const PathNormReport neumann = path_norm_neumann(dag, theta);
  std::string enumeration = "NA", delta = "NA", paths = "NA";
  try {
    const PathNormReport e = path_norm_enumerate(dag, theta, max_paths);
    enumeration = num(e.value);
    delta = num(std::abs(e.value - neumann.value));
    paths = std::to_string(e.paths_counted);
  } catch (const BudgetExceeded&) {
  }
  out << kPathnormHeader << '\n' << join({path, num(neumann.value), enumeration, delta, paths, std::to_string(neumann.terms)}) << '\n';
  return kExitOk;
}

int cmd_forward(const std::string& path, const std::vector<double>& x, std::ostream& out) {
  const NonlinearDag dag = load_dag(path);
  dag.require_valid();
  const ParamVector theta = stored_params(dag);
  const FixedPointResult fp = forward_fixed_point(dag, theta, x);
  std::string xs;
  for (std::size_t i = 0; i < x.size(); ++i) xs += (i ? ";" : "") + num(x[i]);
  out << kForwardHeader << '\n'
      << join({path, xs, num(fp.output), num(evaluate(dag, theta, x)), std::to_string(fp.steps), std::to_string(nilpotency_index(dag))}) << '\n';
  return kExitOk;
}

struct ApproxArgs {
  std::uint64_t seed = 0;
  std::size_t d = 8, atoms = 8, sparsity = 3, retries = 50, mc = 20000, reps = 16;
  std::string signs = "mixed";
  std::vector<std::size_t> widths{8, 16, 32, 64, 128, 256, 512};
};

int cmd_approx(const ApproxArgs& a, std::ostream& out) {
  const AtomSigns signs = a.signs == "nonneg" ? AtomSigns::NonNegative : AtomSigns::Mixed;
  const BarronTarget target = make_target(a.seed, a.d, a.atoms, a.sparsity, signs);
  Rng rng = stream(a.seed, 1);
  out << kApproxHeader << '\n';
  for (std::size_t m : a.widths) {
    for (std::size_t rep = 0; rep < a.reps; ++rep) {
      const TwoLayerSample s = sample_two_layer(target, MCBudget{m, a.retries, a.mc}, rng);
      const BuiltNetwork net = build_two_layer(a.d, m, s.params);
      out << join({std::to_string(a.seed), std::to_string(a.d), std::to_string(a.atoms), std::to_string(a.sparsity), a.signs, std::to_string(m), std::to_string(rep),
                   num(s.risk), num(s.risk_stderr), num(approx_error_bound(target.barron_bound(), m)), num(path_norm_neumann(net.dag, net.theta).value),
                   std::to_string(s.attempts - 1)})
          << '\n';
    }
  }
  return kExitOk;
}

struct TrainArgs {
  ArchOptions arch;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> target_seed;
  std::size_t n = 256, atoms = 8, sparsity = 3, trials = 1, steps = 300, batch = 0, holdout = 20000;
  std::string signs = "nonneg";
  std::string lambda0 = "auto";
  std::string init = "scaled";
  double step_size = 0.5, delta = 0.1;
  std::string ledger;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const ArchitectureDims dims = dims_of(a.arch);
  const std::size_t d = input_dim(dims);
  const NonlinearDag dag = skeleton_of(dims);
  const AtomSigns signs = a.signs == "mixed" ? AtomSigns::Mixed : AtomSigns::NonNegative;
  const BarronTarget target = make_target(a.target_seed.value_or(a.seed), d, a.atoms, a.sparsity, signs);
  const std::optional<double> lambda0 = resolve_lambda0(a.lambda0, d);
  const double lambda = lambda0 ? lambda_from_lambda0(*lambda0, d) : 0.0;

  std::vector<std::string> rows;
  for (std::size_t t = 0; t < a.trials; ++t) {
    Rng data_rng = stream(a.seed, 100 + 3 * t);
    const Dataset data = sample_dataset(target, a.n, data_rng);
    TrainConfig cfg;
    cfg.lambda = lambda;
    cfg.steps = a.steps;
    cfg.step_size = a.step_size;
    cfg.batch_size = a.batch;
    cfg.seed = splitmix(a.seed ^ splitmix(101 + 3 * t));
    cfg.init = parse_init(a.init);
    const TrainResult result = train_regularized(dag, data, cfg);

    AssessConfig ac;
    ac.holdout_samples = a.holdout;
    ac.delta = a.delta;
    ac.lambda0 = lambda0;
    ac.holdout_seed = splitmix(a.seed ^ splitmix(102 + 3 * t));
    const RiskReport r = assess(dag, result.theta, data, target, ac);
    rows.push_back(join({std::to_string(a.seed), std::to_string(t), a.arch.arch, dims_text(dims), std::to_string(a.n), std::to_string(d), lambda0 ? num(*lambda0) : "none",
                         num(lambda), std::to_string(a.steps), num(a.step_size), std::to_string(a.batch), num(r.r_s), num(r.r_d_hat), num(r.r_d_stderr), num(r.path_norm),
                         num(r.aposteriori_bound), r.apriori_bound ? num(*r.apriori_bound) : "NA", num(r.delta)}));
  }
  out << kTrainHeader << '\n';
  for (const auto& row : rows) out << row << '\n';
  if (!a.ledger.empty()) append_ledger(a.ledger, kTrainHeader, rows);
  return kExitOk;
}

struct RademacherArgs {
  std::uint64_t seed = 0;
  std::vector<std::string> cells{"2:64", "8:256", "32:256"};
  std::vector<double> qs{1.0, 4.0};
  std::size_t m = 16, trials = 64, steps = 60, restarts = 2;
  double step_size = 0.5;
  std::string ledger;
};

int cmd_rademacher(const RademacherArgs& a, std::ostream& out) {
  Rng rng(a.seed);
  std::vector<std::string> rows;
  const RademacherBudget budget{a.steps, a.restarts, a.step_size};
  for (const std::string& cell : a.cells) {
    const auto colon = cell.find(':');
    const std::size_t d = std::stoul(cell.substr(0, colon));
    const std::size_t n = std::stoul(cell.substr(colon + 1));
    if (d == 0 || n == 0) throw DomainError("cell " + cell + " needs d >= 1 and n >= 1");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> xs(n, std::vector<double>(d));
    for (auto& x : xs)
      for (double& v : x) v = unit(rng);
    const NonlinearDag dag = skeleton_of(TwoLayerDims{d, a.m});
    for (double q : a.qs) {
      const RademacherEstimate est = rademacher_estimate(xs, dag, q, a.trials, budget, rng);
      const double bound = rademacher_bound(q, n, d);
      const bool within = est.estimate <= bound + 3.0 * est.stderr_;
      rows.push_back(join({std::to_string(a.seed), std::to_string(d), std::to_string(n), std::to_string(a.m), num(q), std::to_string(a.trials), std::to_string(a.steps),
                           std::to_string(a.restarts), num(est.estimate), num(est.stderr_), num(bound), within ? "yes" : "no"}));
    }
  }
  out << kRademacherHeader << '\n';
  for (const auto& row : rows) out << row << '\n';
  if (!a.ledger.empty()) append_ledger(a.ledger, kRademacherHeader, rows);
  return kExitOk;
}

struct BoundsArgs {
  bool apriori = false, aposteriori = false;
  std::size_t d = 0, n = 0, nnon = 0;
  double barron = 1.0, delta = 0.1, path_norm = 0.0;
  std::string lambda0 = "auto";
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.apriori) {
    const std::optional<double> resolved = resolve_lambda0(a.lambda0, a.d);
    if (!resolved) throw DomainError("the a priori bound needs a value of lambda0");
    const double lambda0 = *resolved;
    const double bound = apriori_bound(a.barron, a.nnon, a.n, a.d, lambda0, a.delta);
    out << kAprioriHeader << '\n'
        << join({"apriori", std::to_string(a.d), std::to_string(a.n), std::to_string(a.nnon), num(a.barron), num(lambda0), num(lambda_from_lambda0(lambda0, a.d)), num(a.delta),
                 num(bound)})
        << '\n';
  } else {
    const double bound = aposteriori_bound(a.path_norm, a.n, a.d, a.delta);
    out << kAposterioriHeader << '\n' << join({"aposteriori", std::to_string(a.d), std::to_string(a.n), num(a.path_norm), num(a.delta), num(bound)}) << '\n';
  }
  return kExitOk;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> csv_schemas() {
  return {{"pathnorm", kPathnormHeader},  {"forward", kForwardHeader},      {"approx", kApproxHeader},
          {"train", kTrainHeader},        {"rademacher", kRademacherHeader}, {"bounds-apriori", kAprioriHeader},
          {"bounds-aposteriori", kAposterioriHeader}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear weighted DAGs: path norms, approximation and generalization bounds", "nwdag"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  BuildArgs build;
  auto* sub_build = app.add_subcommand("build", "write a builder network in the DAG interchange format");
  add_arch_options(sub_build, build.arch);
  sub_build->add_option("--init", build.init, "zero | scaled | uniform(a,b)")->check(check_init)->capture_default_str();
  sub_build->add_option("--seed", build.seed)->capture_default_str();
  sub_build->add_option("--out", build.out_path, "output file (default: stdout)");

  std::string in_path;
  auto* sub_validate = app.add_subcommand("validate", "check structure, input assumption and shortcut form");
  sub_validate->add_option("--in", in_path)->required();

  std::size_t max_paths = kDefaultMaxPaths;
  auto* sub_pathnorm = app.add_subcommand("pathnorm", "weighted path norm by both methods");
  sub_pathnorm->add_option("--in", in_path)->required();
  sub_pathnorm->add_option("--max-paths", max_paths, "enumeration budget")->capture_default_str();

  std::vector<double> x;
  auto* sub_forward = app.add_subcommand("forward", "evaluate by fixed-point iteration");
  sub_forward->add_option("--in", in_path)->required();
  sub_forward->add_option("--x", x, "comma-separated input")->delimiter(',')->required();

  ApproxArgs approx;
  auto* sub_approx = app.add_subcommand("approx", "Monte Carlo two-layer approximation of a Barron target");
  sub_approx->add_option("--seed", approx.seed)->capture_default_str();
  sub_approx->add_option("--d", approx.d)->check(CLI::PositiveNumber)->capture_default_str();
  sub_approx->add_option("--atoms", approx.atoms)->check(CLI::PositiveNumber)->capture_default_str();
  sub_approx->add_option("--sparsity", approx.sparsity)->check(CLI::PositiveNumber)->capture_default_str();
  sub_approx->add_option("--signs", approx.signs)->check(CLI::IsMember({"mixed", "nonneg"}))->capture_default_str();
  sub_approx->add_option("--widths", approx.widths)->delimiter(',')->check(CLI::PositiveNumber);
  sub_approx->add_option("--retries", approx.retries)->check(CLI::PositiveNumber)->capture_default_str();
  sub_approx->add_option("--reps", approx.reps, "independent accepted draws per width")->check(CLI::PositiveNumber)->capture_default_str();
  sub_approx->add_option("--mc", approx.mc, "Monte Carlo samples per risk estimate")->check(CLI::Range(2, 100000000))->capture_default_str();

  TrainArgs train;
  auto* sub_train = app.add_subcommand("train", "path-norm regularized training against a Barron target");
  add_arch_options(sub_train, train.arch);
  sub_train->add_option("--seed", train.seed)->capture_default_str();
  sub_train->add_option("--target-seed", train.target_seed, "seed of the target (default: --seed)");
  sub_train->add_option("--n", train.n, "training set size")->check(CLI::PositiveNumber)->capture_default_str();
  sub_train->add_option("--atoms", train.atoms)->check(CLI::PositiveNumber)->capture_default_str();
  sub_train->add_option("--sparsity", train.sparsity)->check(CLI::PositiveNumber)->capture_default_str();
  sub_train->add_option("--signs", train.signs)->check(CLI::IsMember({"mixed", "nonneg"}))->capture_default_str();
  sub_train->add_option("--lambda0", train.lambda0, "auto | none | value")->check(check_lambda0)->capture_default_str();
  sub_train->add_option("--init", train.init)->check(check_init)->capture_default_str();
  sub_train->add_option("--steps", train.steps, "epochs")->capture_default_str();
  sub_train->add_option("--step-size", train.step_size)->check(CLI::PositiveNumber)->capture_default_str();
  sub_train->add_option("--batch", train.batch, "0 = full batch with backtracking")->capture_default_str();
  sub_train->add_option("--holdout", train.holdout)->check(CLI::Range(2, 100000000))->capture_default_str();
  sub_train->add_option("--delta", train.delta)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub_train->add_option("--trials", train.trials)->check(CLI::PositiveNumber)->capture_default_str();
  sub_train->add_option("--out", train.ledger, "CSV ledger to append to");

  RademacherArgs rad;
  auto* sub_rad = app.add_subcommand("rademacher", "empirical Rademacher complexity of two-layer path-norm balls");
  sub_rad->add_option("--seed", rad.seed)->capture_default_str();
  sub_rad->add_option("--cells", rad.cells, "d:n pairs")->delimiter(',')->check(check_cell);
  sub_rad->add_option("--q", rad.qs, "path-norm radii")->delimiter(',')->check(CLI::NonNegativeNumber);
  sub_rad->add_option("--m", rad.m)->check(CLI::PositiveNumber)->capture_default_str();
  sub_rad->add_option("--trials", rad.trials)->check(CLI::PositiveNumber)->capture_default_str();
  sub_rad->add_option("--steps", rad.steps)->capture_default_str();
  sub_rad->add_option("--restarts", rad.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  sub_rad->add_option("--step-size", rad.step_size)->check(CLI::PositiveNumber)->capture_default_str();
  sub_rad->add_option("--out", rad.ledger, "CSV ledger to append to");

  BoundsArgs bounds;
  auto* sub_bounds = app.add_subcommand("bounds", "evaluate the a priori or a posteriori bound");
  auto* mode = sub_bounds->add_option_group("mode");
  mode->add_flag("--apriori", bounds.apriori);
  mode->add_flag("--aposteriori", bounds.aposteriori);
  mode->require_option(1);
  sub_bounds->add_option("--d", bounds.d)->check(CLI::PositiveNumber)->required();
  sub_bounds->add_option("--n", bounds.n)->check(CLI::PositiveNumber)->required();
  auto* nnon = sub_bounds->add_option("--nnon", bounds.nnon, "number of nonlinear edges")->check(CLI::PositiveNumber);
  auto* barron = sub_bounds->add_option("--barron", bounds.barron, "Barron norm bound")->check(CLI::NonNegativeNumber);
  auto* lambda0 = sub_bounds->add_option("--lambda0", bounds.lambda0, "auto | value")->check(check_lambda0);
  auto* pathnorm = sub_bounds->add_option("--pathnorm", bounds.path_norm, "path norm of the trained parameters")->check(CLI::NonNegativeNumber);
  sub_bounds->add_option("--delta", bounds.delta)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    if (sub_bounds->parsed()) {
      if (bounds.apriori && (nnon->count() == 0 || barron->count() == 0)) throw CLI::RequiredError("--apriori needs --nnon and --barron");
      if (bounds.aposteriori && pathnorm->count() == 0) throw CLI::RequiredError("--aposteriori needs --pathnorm");
      if (bounds.aposteriori && lambda0->count() != 0) throw CLI::ExcludesError("--lambda0", "--aposteriori");
    }
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (sub_build->parsed()) return cmd_build(build, out);
    if (sub_validate->parsed()) return cmd_validate(in_path, out);
    if (sub_pathnorm->parsed()) return cmd_pathnorm(in_path, max_paths, out);
    if (sub_forward->parsed()) return cmd_forward(in_path, x, out);
    if (sub_approx->parsed()) return cmd_approx(approx, out);
    if (sub_train->parsed()) return cmd_train(train, out);
    if (sub_rad->parsed()) return cmd_rademacher(rad, out);
    if (sub_bounds->parsed()) return cmd_bounds(bounds, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace nwdag::cli
