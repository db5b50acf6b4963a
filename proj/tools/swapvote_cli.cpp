// swapvote command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swapvote/errors.hpp"
#include "swapvote/experiments.hpp"
#include "swapvote/io.hpp"
#include "swapvote/learning.hpp"
#include "swapvote/pipeline.hpp"
#include "swapvote/processes.hpp"
#include "swapvote/scc.hpp"

namespace {

using namespace swapvote;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

// Raised for option combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return in;
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(0, "cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw ParseError(0, "write failed for '" + path + "'");
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

// ---------------------------------------------------------------------------
// fit / summarize / decide

struct FitOptions {
  std::string comparisons;
  std::string out;
  double l2 = FitConfig{}.l2_penalty;
  double tol = FitConfig{}.gradient_tolerance;
  int max_iterations = FitConfig{}.max_iterations;
  unsigned threads = 1;
};

int run_fit(const FitOptions& opt) {
  std::ifstream in = open_input(opt.comparisons);
  const std::vector<ComparisonRecord> records = parse_comparisons(in);
  if (records.empty()) throw ParseError(0, "no comparisons in '" + opt.comparisons + "'");
  const std::vector<VoterData> voters = group_by_voter(records);

  FitConfig config;
  config.l2_penalty = opt.l2;
  config.gradient_tolerance = opt.tol;
  config.max_iterations = opt.max_iterations;

  ModelFile model;
  model.kind = ModelFile::Kind::kVoters;
  model.d = records.front().chosen.size();
  model.fit = {opt.l2, opt.tol, opt.max_iterations};
  model.voters.resize(voters.size());
  std::vector<std::string> errors(voters.size());
  std::vector<char> numeric(voters.size(), 0);
  parallel_for(voters.size(), opt.threads, [&](std::size_t i) {
    try {
      const FitResult fit = fit_voter(voters[i].comparisons, config);
      model.voters[i] = {voters[i].voter_id, fit.beta, fit.converged,
                         fit.iterations, fit.final_objective};
    } catch (const NumericError& e) {
      errors[i] = e.what();
      numeric[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::size_t not_converged = 0;
  for (std::size_t i = 0; i < voters.size(); ++i) {
    if (!errors[i].empty()) {
      const std::string msg = "voter " + voters[i].voter_id + ": " + errors[i];
      if (numeric[i]) throw NumericError(msg);
      throw DomainError(msg);
    }
    if (!model.voters[i].converged) ++not_converged;
  }
  std::ostringstream out;
  write_model(out, model);
  write_output(opt.out, out.str());
  std::cerr << "fitted " << voters.size() << " voters";
  if (not_converged > 0) std::cerr << " (" << not_converged << " not converged)";
  std::cerr << '\n';
  return kExitOk;
}

int run_summarize(const std::string& models_path, const std::string& out_path) {
  std::ifstream in = open_input(models_path);
  const ModelFile voters = read_model(in);
  if (voters.kind != ModelFile::Kind::kVoters) {
    throw ParseError(0, "'" + models_path + "' is not a per-voter model file");
  }
  std::vector<std::vector<double>> betas;
  betas.reserve(voters.voters.size());
  for (const VoterModel& v : voters.voters) betas.push_back(v.beta);

  ModelFile summary;
  summary.kind = ModelFile::Kind::kSummary;
  summary.d = voters.d;
  summary.fit = voters.fit;
  summary.summary = summarize(betas);
  std::ostringstream out;
  write_model(out, summary);
  write_output(out_path, out.str());
  return kExitOk;
}

int run_decide(const std::string& summary_path, const std::string& alternatives_path) {
  std::ifstream summary_in = open_input(summary_path);
  const ModelFile summary = read_model(summary_in);
  if (summary.kind != ModelFile::Kind::kSummary) {
    throw ParseError(0, "'" + summary_path + "' is not a summary model file");
  }
  std::ifstream alt_in = open_input(alternatives_path);
  const std::vector<Alternative> alternatives = parse_alternatives(alt_in);
  if (alternatives.empty()) {
    throw ParseError(0, "no alternatives in '" + alternatives_path + "'");
  }
  std::cout << decide(summary.summary, alternatives).id << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

template <typename T>
void take(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ParseError(0, "config must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view k : allowed) known = known || item.key() == k;
    if (!known) throw ParseError(0, "unknown config key '" + item.key() + "'");
  }
}

json load_json(const std::optional<std::string>& path) {
  if (!path) return json::object();
  std::ifstream in = open_input(*path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("config: ") + e.what());
  }
}

SyntheticConfig synthetic_config(const json& j) {
  check_keys(j, {"d", "n_voters", "alt_per_instance", "n_test_instances",
                 "n_runs", "comparisons_grid", "voters_grid",
                 "profile_sample_count", "sampling", "master_seed",
                 "l2_penalty", "gradient_tolerance", "max_iterations",
                 "threads"});
  SyntheticConfig c;
  try {
    take(j, "d", c.d);
    take(j, "n_voters", c.n_voters);
    take(j, "alt_per_instance", c.alt_per_instance);
    take(j, "n_test_instances", c.n_test_instances);
    take(j, "n_runs", c.n_runs);
    take(j, "comparisons_grid", c.comparisons_grid);
    take(j, "voters_grid", c.voters_grid);
    take(j, "profile_sample_count", c.profile_sample_count);
    take(j, "master_seed", c.master_seed);
    take(j, "l2_penalty", c.fit.l2_penalty);
    take(j, "gradient_tolerance", c.fit.gradient_tolerance);
    take(j, "max_iterations", c.fit.max_iterations);
    take(j, "threads", c.threads);
    if (j.contains("sampling")) {
      const std::string s = j.at("sampling").get<std::string>();
      if (s == "per_voter") {
        c.sampling = ProfileSampling::kPerVoter;
      } else if (s == "voter_uniform") {
        c.sampling = ProfileSampling::kVoterUniform;
      } else {
        throw ParseError(0, "sampling must be per_voter or voter_uniform");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("config: ") + e.what());
  }
  return c;
}

MoralMachineConfig mm_config(const json& j) {
  check_keys(j, {"n_voters", "alternatives_grid", "n_test_instances",
                 "profile_sample_count", "master_seed", "threads"});
  MoralMachineConfig c;
  try {
    take(j, "n_voters", c.n_voters);
    take(j, "alternatives_grid", c.alternatives_grid);
    take(j, "n_test_instances", c.n_test_instances);
    take(j, "profile_sample_count", c.profile_sample_count);
    take(j, "master_seed", c.master_seed);
    take(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("config: ") + e.what());
  }
  return c;
}

int run_simulate(const std::string& which, const std::optional<std::string>& config_path,
                 std::optional<std::uint64_t> seed) {
  const json j = load_json(config_path);
  AccuracyCurve curve;
  if (which == "mm") {
    MoralMachineConfig c = mm_config(j);
    if (seed) c.master_seed = *seed;
    curve = eval_mm_step3(c);
  } else {
    SyntheticConfig c = synthetic_config(j);
    if (seed) c.master_seed = *seed;
    curve = which == "step2" ? eval_step2(c) : eval_step3(c);
  }
  write_curve(std::cout, curve);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// axioms

struct AxiomOptions {
  std::string check;
  std::string rule = "all";
  std::optional<std::string> profile;
  std::optional<std::string> alternatives;
  std::optional<std::string> beta;
  std::string family = "pl";
  double scale = 1.0;
  std::optional<std::size_t> mc;
  std::uint64_t seed = 0;
  std::optional<std::string> subset;
};

json winners_json(const WinnerSet& w) { return json(w); }

std::vector<SccKind> selected_rules(const std::string& rule) {
  if (rule == "all") return {std::begin(kAllSccKinds), std::end(kAllSccKinds)};
  const std::optional<SccKind> kind = parse_scc_kind(rule);
  if (!kind) throw UsageError("unknown rule '" + rule + "'");
  return {*kind};
}

ProcessSpec process_spec(const AxiomOptions& opt) {
  ProcessSpec spec;
  if (opt.family == "tm") {
    spec.family = Family::kThurstoneMosteller;
  } else if (opt.family == "pl") {
    spec.family = Family::kPlackettLuce;
  } else {
    throw UsageError("family must be tm or pl");
  }
  for (const std::string& item : split_list(*opt.beta)) {
    const std::optional<double> v = parse_real(item);
    if (!v) throw UsageError("--beta entry '" + item + "' is not a number");
    spec.beta.push_back(*v);
  }
  spec.gumbel_scale = opt.scale;
  spec.validate();
  return spec;
}

int run_axioms(const AxiomOptions& opt) {
  if (opt.profile.has_value() == opt.alternatives.has_value()) {
    throw UsageError("give exactly one of --profile or --alternatives");
  }
  if (opt.alternatives && !opt.beta) {
    throw UsageError("--alternatives requires --beta");
  }
  if (opt.check == "stability" && !opt.subset) {
    throw UsageError("stability requires --subset");
  }
  const std::vector<SccKind> rules = selected_rules(opt.rule);

  std::optional<AnonymousProfile> profile;
  std::vector<Alternative> alternatives;
  std::optional<ProcessSpec> spec;
  json out = json::object();
  out["check"] = opt.check;
  if (opt.profile) {
    std::ifstream in = open_input(*opt.profile);
    profile = parse_profile(in);
    out["source"] = "profile";
  } else {
    std::ifstream in = open_input(*opt.alternatives);
    alternatives = parse_alternatives(in);
    spec = process_spec(opt);
    out["source"] = "process";
    out["family"] = opt.family;
    if (opt.mc) {
      out["monte_carlo_samples"] = *opt.mc;
      out["seed"] = opt.seed;
    }
  }
  // swd and strong-swd act on a single profile; build it from the process
  // when one was given.
  if (opt.check != "stability" && !profile) {
    if (opt.mc) {
      Rng rng(opt.seed);
      profile = estimate_profile(*spec, alternatives, *opt.mc, rng);
    } else {
      profile = exact_profile(*spec, alternatives);
    }
  }

  bool all_hold = true;
  json reports = json::array();
  for (SccKind kind : rules) {
    json r = json::object();
    r["rule"] = std::string(to_string(kind));
    if (opt.check == "swd") {
      const SwdReport rep = check_swd_efficiency(kind, *profile);
      r["holds"] = rep.holds;
      r["winners"] = winners_json(rep.winners);
      json v = json::array();
      for (const auto& [a, b] : rep.violations) v.push_back({{"dominant", a}, {"dominated", b}});
      r["violations"] = v;
      all_hold = all_hold && rep.holds;
    } else if (opt.check == "strong-swd") {
      const StrongSwdReport rep = check_strong_swd_efficiency(kind, *profile);
      r["holds"] = rep.holds;
      r["winners"] = winners_json(rep.winners);
      json v = json::array();
      for (const StrongSwdViolation& x : rep.violations) {
        v.push_back({{"dominant", x.dominant}, {"dominated", x.dominated}, {"clause", x.clause}});
      }
      r["violations"] = v;
      all_hold = all_hold && rep.holds;
    } else {
      const std::vector<AltId> subset = split_list(*opt.subset);
      StabilityReport rep;
      if (profile) {
        rep = check_stability(kind, *profile, subset);
      } else if (opt.mc) {
        rep = check_stability(*spec, kind, alternatives, subset,
                              MonteCarloMode{*opt.mc, opt.seed});
      } else {
        rep = check_stability(*spec, kind, alternatives, subset, ExactMode{});
      }
      r["full_winners"] = winners_json(rep.full_winners);
      r["lhs"] = winners_json(rep.lhs);
      r["rhs"] = winners_json(rep.rhs);
      r["applicable"] = rep.applicable;
      r["stable"] = rep.stable;
      r["low_confidence"] = rep.low_confidence;
      r["notes"] = rep.notes;
      all_hold = all_hold && rep.stable;
    }
    reports.push_back(r);
  }
  out["reports"] = reports;
  out["all_hold"] = all_hold;
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference learning, summarization and voting-rule axioms"};
  app.require_subcommand(1);

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "Fit one model per voter");
  fit->add_option("--comparisons", fit_opt.comparisons, "Comparison CSV")->required();
  fit->add_option("--out", fit_opt.out, "Per-voter model file")->required();
  fit->add_option("--l2", fit_opt.l2, "L2 penalty")->check(CLI::NonNegativeNumber);
  fit->add_option("--tol", fit_opt.tol, "Gradient tolerance")->check(CLI::PositiveNumber);
  fit->add_option("--max-iter", fit_opt.max_iterations, "Iteration cap")
      ->check(CLI::PositiveNumber);
  fit->add_option("--threads", fit_opt.threads, "Worker threads (0 = all cores)");

  std::string models_path, summary_out;
  CLI::App* sum = app.add_subcommand("summarize", "Average per-voter models");
  sum->add_option("--models", models_path, "Per-voter model file")->required();
  sum->add_option("--out", summary_out, "Summary model file")->required();

  std::string summary_path, alternatives_path;
  CLI::App* dec = app.add_subcommand("decide", "Choose among alternatives");
  dec->add_option("--summary", summary_path, "Summary model file")->required();
  dec->add_option("--alternatives", alternatives_path, "Alternatives CSV")->required();

  std::string which;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  CLI::App* sim = app.add_subcommand("simulate", "Run a synthetic accuracy experiment");
  sim->add_option("experiment", which, "step2, step3 or mm")
      ->required()
      ->check(CLI::IsMember({"step2", "step3", "mm"}));
  sim->add_option("--config", config_path, "JSON config");
  sim->add_option("--seed", seed, "Master seed");

  AxiomOptions ax;
  CLI::App* axioms = app.add_subcommand("axioms", "Check voting-rule axioms");
  axioms->add_option("--check", ax.check, "swd, strong-swd or stability")
      ->required()
      ->check(CLI::IsMember({"swd", "strong-swd", "stability"}));
  axioms->add_option("--rule", ax.rule, "plurality, borda, copeland, maximin, bucklin or all");
  axioms->add_option("--profile", ax.profile, "Profile CSV (weight,ranking)");
  axioms->add_option("--alternatives", ax.alternatives, "Alternatives CSV");
  axioms->add_option("--beta", ax.beta, "Comma-separated process parameter");
  axioms->add_option("--family", ax.family, "tm or pl");
  axioms->add_option("--scale", ax.scale, "Gumbel scale for pl");
  axioms->add_option("--mc", ax.mc, "Monte-Carlo samples instead of the exact profile")
      ->check(CLI::PositiveNumber);
  axioms->add_option("--seed", ax.seed, "Monte-Carlo seed");
  axioms->add_option("--subset", ax.subset, "Comma-separated subset for stability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed()) return run_fit(fit_opt);
    if (sum->parsed()) return run_summarize(models_path, summary_out);
    if (dec->parsed()) return run_decide(summary_path, alternatives_path);
    if (sim->parsed()) return run_simulate(which, config_path, seed);
    if (axioms->parsed()) return run_axioms(ax);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const UnsupportedExactError& e) {
    std::cerr << "data error: " << e.what() << " (pass --mc N to sample)\n";
    return kExitData;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DomainError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
