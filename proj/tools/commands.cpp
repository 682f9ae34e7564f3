#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhattbayes/core.hpp"
#include "bhattbayes/errors.hpp"
#include "bhattbayes/estimators.hpp"
#include "bhattbayes/minimax.hpp"
#include "bhattbayes/posterior.hpp"
#include "bhattbayes/risk.hpp"

namespace bhattbayes::cli {

namespace {

using json = nlohmann::json;

// Input or flag problems discovered after parsing; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 0;
  json parameters = json::object();
};

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
  return os.str();
}

json metadata(const RunConfig& cfg) {
  return json{{"command", cfg.command},
              {"version", bhattbayes::version()},
              {"seed", cfg.seed},
              {"parameters", cfg.parameters}};
}

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string render_table(const RunConfig& cfg, const Table& t) {
  if (cfg.format == "csv") return render_csv(t);
  json doc = metadata(cfg);
  doc["columns"] = t.columns;
  doc["rows"] = t.rows;
  return render_json(doc);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing output file '" + path + "'");
}

// --output, else $BHATTBAYES_OUTPUT_DIR/<command>.<ext>, else stdout.
std::optional<std::string> output_path(const RunConfig& cfg, const std::string& ext) {
  if (!cfg.output.empty()) return cfg.output;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    return (std::filesystem::path(dir) / (cfg.command + "." + ext)).string();
  }
  return std::nullopt;
}

void emit(const RunConfig& cfg, const std::string& text, const std::string& ext, std::ostream& out) {
  if (auto path = output_path(cfg, ext)) {
    write_text(*path, text);
  } else {
    out << text;
  }
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

ParticlePosterior load_particle_posterior(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    std::vector<ProbVector> points;
    for (const auto& p : doc.at("points")) points.emplace_back(p.get<std::vector<double>>());
    return ParticlePosterior(std::move(points), doc.at("weights").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw UsageError("posterior file '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError("posterior file '" + path + "': " + e.what());
  }
}

DiscretePrior load_discrete_prior(const std::string& path) {
  const json doc = read_json_file(path);
  try {
    return DiscretePrior(doc.at("support").get<std::vector<double>>(), doc.at("weights").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw UsageError("prior file '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError("prior file '" + path + "': " + e.what());
  }
}

json posterior_json(const Posterior& post) {
  if (const auto* d = std::get_if<DirichletPosterior>(&post)) {
    return json{{"type", "dirichlet"}, {"alpha", d->alpha()}};
  }
  const auto& pp = std::get<ParticlePosterior>(post);
  json points = json::array();
  for (const auto& p : pp.points()) points.push_back(p.vector());
  return json{{"type", "particle"}, {"points", points}, {"weights", pp.weights()}};
}

EstimatorKind resolve_estimator(const std::string& name, LossKind loss) {
  if (name == "bayes") return bayes_kind_for(loss);
  if (name == "bayes_b1") return EstimatorKind::BayesB1;
  if (name == "bayes_b2") return EstimatorKind::BayesB2;
  if (name == "mean") return EstimatorKind::PosteriorMean;
  if (name == "mle") return EstimatorKind::MLE;
  throw UsageError("unknown estimator '" + name + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool table_output) {
  sub->add_option("-o,--output", cfg.output, "Write the result to this file instead of stdout");
  sub->add_option("--seed", cfg.seed, "Seed for stochastic steps (recorded in metadata)");
  if (table_output) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  }
}

CLI::Option* add_loss(CLI::App* sub, std::string& loss) {
  return sub->add_option("--loss", loss, "Loss: b (1-B) or b2 (1-B^2)")
      ->check(CLI::IsMember({"b", "b2"}))
      ->capture_default_str();
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::optional<int> n;
  std::optional<int> trials;
  double beta = 0.5;
  std::string loss = "b2";
  std::string estimator = "bayes";
  std::string posterior_file;
};

int cmd_estimate(RunConfig& cfg, const EstimateArgs& a, std::ostream& out) {
  const LossKind loss = parse_loss_kind(a.loss);
  const EstimatorKind kind = resolve_estimator(a.estimator, loss);

  std::optional<Posterior> post;
  std::optional<ProbVector> est;
  if (!a.posterior_file.empty()) {
    if (a.n || a.trials) throw UsageError("--posterior-file cannot be combined with --n/--N");
    if (kind == EstimatorKind::MLE) throw UsageError("the MLE needs counts, not a posterior file");
    post = load_particle_posterior(a.posterior_file);
    cfg.parameters["posterior_file"] = a.posterior_file;
  } else {
    if (!a.n || !a.trials) throw UsageError("estimate needs --n and --N (or --posterior-file)");
    if (*a.trials < 0 || *a.n < 0 || *a.n > *a.trials) throw UsageError("need 0 <= n <= N");
    if (kind == EstimatorKind::MLE && *a.trials < 1) throw UsageError("the MLE needs N >= 1");
    post = posterior_update(a.beta, *a.trials, *a.n);
    cfg.parameters["n"] = *a.n;
    cfg.parameters["N"] = *a.trials;
    cfg.parameters["beta"] = a.beta;
    if (kind == EstimatorKind::MLE) est = mle(*a.n, *a.trials);
  }
  if (!est) est = estimate(kind, *post);
  cfg.parameters["loss"] = a.loss;
  cfg.parameters["estimator"] = a.estimator;

  json doc = metadata(cfg);
  doc["estimate"] = est->vector();
  doc["estimator"] = std::string(to_string(kind));
  doc["loss"] = std::string(to_string(loss));
  doc["posterior"] = posterior_json(*post);
  doc["posterior_risk"] = posterior_risk(*post, *est, loss);
  emit(cfg, render_json(doc), "json", out);
  return kOk;
}

struct RiskCurveArgs {
  int trials = 10;
  double beta = 0.5;
  std::string loss = "b2";
  std::string estimators = "mle,mean,bayes";
  int grid = 501;
};

int cmd_risk_curve(RunConfig& cfg, const RiskCurveArgs& a, std::ostream& out) {
  const LossKind loss = parse_loss_kind(a.loss);
  const auto names = split_list(a.estimators);
  if (names.empty()) throw UsageError("--estimators is empty");
  cfg.parameters = {{"N", a.trials}, {"beta", a.beta}, {"loss", a.loss}, {"estimators", names}, {"grid", a.grid}};

  Table t;
  t.columns.push_back("p0");
  std::vector<EstimatorTable> tables;
  for (const auto& name : names) {
    tables.push_back(estimator_table(resolve_estimator(name, loss), a.trials, a.beta));
    t.columns.push_back(name);
  }
  for (int i = 0; i < a.grid; ++i) {
    const double p0 = i == a.grid - 1 ? 1.0 : static_cast<double>(i) / (a.grid - 1);
    std::vector<double> row{p0};
    for (const auto& table : tables) row.push_back(pointwise_risk(p0, table, loss));
    t.rows.push_back(std::move(row));
  }
  emit(cfg, render_table(cfg, t), cfg.format, out);
  return kOk;
}

struct RelDiffArgs {
  int trials = 10;
  double beta = 0.5;
  std::string loss = "b2";
};

int cmd_reldiff(RunConfig& cfg, const RelDiffArgs& a, std::ostream& out) {
  const LossKind loss = parse_loss_kind(a.loss);
  cfg.parameters = {{"N", a.trials}, {"beta", a.beta}, {"loss", a.loss}};
  Table t{{"n", "relative_suboptimality"}, {}};
  for (int n = 0; n <= a.trials; ++n) {
    t.rows.push_back({static_cast<double>(n),
                      relative_suboptimality(posterior_update(a.beta, a.trials, n), loss)});
  }
  emit(cfg, render_table(cfg, t), cfg.format, out);
  return kOk;
}

struct BetaScanArgs {
  int trials = 10;
  std::string family = "bayes";
  std::string loss = "b2";
  double beta_min = 0.05;
  double beta_max = 2.0;
  double step = 0.01;
  std::string curve_file;
};

int cmd_beta_scan(RunConfig& cfg, const BetaScanArgs& a, std::ostream& out) {
  BetaScanOptions opts;
  opts.trials = a.trials;
  opts.loss = parse_loss_kind(a.loss);
  opts.family = resolve_estimator(a.family, opts.loss);
  opts.beta_min = a.beta_min;
  opts.beta_max = a.beta_max;
  opts.step = a.step;
  if (!(a.beta_min > 0.0 && a.beta_max > a.beta_min)) throw UsageError("need 0 < --beta-min < --beta-max");
  cfg.parameters = {{"N", a.trials},         {"family", a.family}, {"loss", a.loss},
                    {"beta_min", a.beta_min}, {"beta_max", a.beta_max}, {"step", a.step}};

  const auto result = beta_scan(opts);
  Table curve{{"beta", "max_risk"}, {}};
  for (const auto& pt : result.curve) curve.rows.push_back({pt.beta, pt.max_risk});

  std::string curve_path = a.curve_file;
  if (curve_path.empty()) {
    if (auto path = output_path(cfg, "json")) curve_path = *path + ".curve.csv";
  }
  if (!curve_path.empty()) {
    write_text(curve_path, render_csv(curve));
    cfg.parameters["curve_file"] = curve_path;
  }

  json doc = metadata(cfg);
  doc["beta_star"] = result.beta_star;
  doc["max_risk"] = result.max_risk_star;
  doc["estimator"] = std::string(to_string(opts.family));
  if (curve_path.empty()) doc["curve"] = curve.rows;
  emit(cfg, render_json(doc), "json", out);
  return kOk;
}

struct LfpArgs {
  int trials = 10;
  std::string loss = "b2";
  double tol = 1e-3;
  double alpha = 0.01;
  int max_iters = 50;
  int restarts = 5;
  std::string init_file;
};

int cmd_lfp(RunConfig& cfg, const LfpArgs& a, std::ostream& out) {
  KempthorneConfig kc;
  kc.trials = a.trials;
  kc.loss = parse_loss_kind(a.loss);
  kc.tol = a.tol;
  kc.alpha_mix = a.alpha;
  kc.max_outer_iters = a.max_iters;
  kc.restarts = a.restarts;
  kc.seed = cfg.seed;
  try {
    kc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.parameters = {{"N", a.trials},         {"loss", a.loss},         {"tol", a.tol},
                    {"alpha", a.alpha},      {"max_iters", a.max_iters}, {"restarts", a.restarts}};
  if (!a.init_file.empty()) cfg.parameters["init_file"] = a.init_file;

  const DiscretePrior init =
      a.init_file.empty() ? default_initial_prior(a.trials, kc.loss) : load_discrete_prior(a.init_file);
  const auto result = kempthorne(kc, init);

  json doc = metadata(cfg);
  doc["support"] = result.prior.support();
  doc["weights"] = result.prior.weights();
  doc["avg_risk"] = result.avg_risk;
  doc["max_risk"] = result.max_risk;
  doc["diff"] = result.diff;
  doc["converged"] = result.converged;
  doc["iters"] = result.outer_iters;
  std::vector<double> first;
  for (const auto& row : result.estimator.rows) first.push_back(row[0]);
  doc["estimator"] = first;
  json history = json::array();
  for (const auto& h : result.history) {
    history.push_back({{"iteration", h.iteration},
                       {"avg_risk", h.avg_risk},
                       {"max_risk", h.max_risk},
                       {"argmax_p", h.argmax_p},
                       {"support_size", h.support_size}});
  }
  doc["history"] = history;
  emit(cfg, render_json(doc), "json", out);
  return result.converged ? kOk : kNotConverged;
}

struct CompareArgs {
  int trials = 10;
  double beta = 0.5;
};

int cmd_compare(RunConfig& cfg, const CompareArgs& a, std::ostream& out) {
  cfg.parameters = {{"N", a.trials}, {"beta", a.beta}};
  const auto mle_t = estimator_table(EstimatorKind::MLE, a.trials, a.beta);
  const auto mean_t = estimator_table(EstimatorKind::PosteriorMean, a.trials, a.beta);
  const auto b2_t = estimator_table(EstimatorKind::BayesB2, a.trials, a.beta);
  const auto b1_t = estimator_table(EstimatorKind::BayesB1, a.trials, a.beta);
  Table t{{"n", "mle", "mean", "bayes_b2", "bayes_b1"}, {}};
  for (int n = 0; n <= a.trials; ++n) {
    t.rows.push_back({static_cast<double>(n), mle_t[n][0], mean_t[n][0], b2_t[n][0], b1_t[n][0]});
  }
  emit(cfg, render_table(cfg, t), cfg.format, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayes and minimax estimation of multinomial parameters under Bhattacharyya losses",
               "bhattbayes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bhattbayes::version()));

  RunConfig cfg;

  EstimateArgs est;
  auto* s_est = app.add_subcommand("estimate", "Point estimate from counts or a particle posterior");
  s_est->add_option("--n", est.n, "Observed successes")->check(CLI::NonNegativeNumber);
  s_est->add_option("--N", est.trials, "Number of trials")->check(CLI::NonNegativeNumber);
  s_est->add_option("--beta", est.beta, "Beta(beta, beta) prior")->check(CLI::PositiveNumber)->capture_default_str();
  add_loss(s_est, est.loss);
  s_est->add_option("--estimator", est.estimator, "bayes, mean or mle")
      ->check(CLI::IsMember({"bayes", "mean", "mle"}))
      ->capture_default_str();
  s_est->add_option("--posterior-file", est.posterior_file, "Particle posterior JSON {points, weights}");
  add_common(s_est, cfg, false);

  RiskCurveArgs rc;
  auto* s_rc = app.add_subcommand("risk-curve", "Pointwise risk of estimators over p0 (CSV)");
  s_rc->add_option("--N", rc.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
  s_rc->add_option("--beta", rc.beta, "Beta(beta, beta) prior")->check(CLI::PositiveNumber)->capture_default_str();
  add_loss(s_rc, rc.loss);
  s_rc->add_option("--estimators", rc.estimators, "Comma list of mle, mean, bayes, bayes_b1, bayes_b2")
      ->capture_default_str();
  s_rc->add_option("--grid", rc.grid, "Number of p0 values")->check(CLI::Range(2, 10000000))->capture_default_str();
  add_common(s_rc, cfg, true);

  RelDiffArgs rd;
  auto* s_rd = app.add_subcommand("reldiff", "Relative suboptimality of the posterior mean per outcome (CSV)");
  s_rd->add_option("--N", rd.trials, "Number of trials")->required()->check(CLI::NonNegativeNumber);
  s_rd->add_option("--beta", rd.beta, "Beta(beta, beta) prior")->check(CLI::PositiveNumber)->capture_default_str();
  add_loss(s_rd, rd.loss);
  add_common(s_rd, cfg, true);

  BetaScanArgs bs;
  auto* s_bs = app.add_subcommand("beta-scan", "Conjugate prior minimizing the maximum risk");
  s_bs->add_option("--N", bs.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
  s_bs->add_option("--family", bs.family, "bayes or mean")
      ->check(CLI::IsMember({"bayes", "mean"}))
      ->capture_default_str();
  add_loss(s_bs, bs.loss);
  s_bs->add_option("--beta-min", bs.beta_min, "Scan start")->check(CLI::PositiveNumber)->capture_default_str();
  s_bs->add_option("--beta-max", bs.beta_max, "Scan end")->check(CLI::PositiveNumber)->capture_default_str();
  s_bs->add_option("--step", bs.step, "Scan resolution")->check(CLI::PositiveNumber)->capture_default_str();
  s_bs->add_option("--curve-file", bs.curve_file, "Write the (beta, max_risk) curve as CSV");
  add_common(s_bs, cfg, false);

  LfpArgs lfp;
  auto* s_lfp = app.add_subcommand("lfp", "Least favorable prior and minimax estimator (Kempthorne)");
  s_lfp->add_option("--N", lfp.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
  add_loss(s_lfp, lfp.loss);
  s_lfp->add_option("--tol", lfp.tol, "Relative gap between average and maximum risk")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_lfp->add_option("--alpha", lfp.alpha, "Weight of each new support point")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s_lfp->add_option("--max-iters", lfp.max_iters, "Outer iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  s_lfp->add_option("--restarts", lfp.restarts, "Inner optimizer restarts")->check(CLI::PositiveNumber)->capture_default_str();
  s_lfp->add_option("--init-file", lfp.init_file, "Initial prior JSON {support, weights}");
  add_common(s_lfp, cfg, false);

  CompareArgs cmp;
  auto* s_cmp = app.add_subcommand("compare", "First components of MLE, mean and Bayes estimates per outcome (CSV)");
  s_cmp->add_option("--N", cmp.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
  s_cmp->add_option("--beta", cmp.beta, "Beta(beta, beta) prior")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(s_cmp, cfg, true);

  std::vector<const char*> cargv;
  cargv.reserve(argv.size());
  for (const auto& a : argv) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << bhattbayes::version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (s_est->parsed()) {
      cfg.command = "estimate";
      return cmd_estimate(cfg, est, out);
    }
    if (s_rc->parsed()) {
      cfg.command = "risk-curve";
      return cmd_risk_curve(cfg, rc, out);
    }
    if (s_rd->parsed()) {
      cfg.command = "reldiff";
      return cmd_reldiff(cfg, rd, out);
    }
    if (s_bs->parsed()) {
      cfg.command = "beta-scan";
      return cmd_beta_scan(cfg, bs, out);
    }
    if (s_lfp->parsed()) {
      cfg.command = "lfp";
      return cmd_lfp(cfg, lfp, out);
    }
    if (s_cmp->parsed()) {
      cfg.command = "compare";
      return cmd_compare(cfg, cmp, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace bhattbayes::cli
