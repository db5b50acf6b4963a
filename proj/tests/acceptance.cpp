// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helpers.hpp"
#include "swapvote/experiments.hpp"
#include "swapvote/io.hpp"
#include "swapvote/learning.hpp"
#include "swapvote/pipeline.hpp"
#include "swapvote/processes.hpp"
#include "swapvote/scc.hpp"

using namespace swapvote;

namespace {

struct Options {
  bool all_variants = false;
  unsigned threads = 0;
  std::uint64_t seed = 1;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool within(double value, double target, double tolerance) {
  return std::abs(value - target) <= tolerance;
}

// Accuracy of `curve` at x.
double at(const AccuracyCurve& curve, double x) {
  const auto it = std::find(curve.x_values.begin(), curve.x_values.end(), x);
  return curve.mean_accuracy.at(it - curve.x_values.begin());
}

std::string table(const AccuracyCurve& curve) {
  std::ostringstream out;
  write_curve(out, curve);
  return out.str();
}

// Stochastic runs, kept by name so they can be repeated and compared.
struct StochasticRun {
  std::string name;
  std::string table;
  AccuracyCurve curve;
  std::size_t passes = 0;
  std::size_t total = 0;
  double seconds = 0.0;
};

// ---- 1: golden examples ----

Outcome golden_examples() {
  const AnonymousProfile e1 = testing::example1();
  const std::vector<AltId> wxy{"w", "x", "y"};
  const AnonymousProfile e1_sub = marginalize_profile(e1, wxy);
  const AnonymousProfile e3 = testing::example3();
  const std::vector<AltId> ab{"a", "b"};

  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) failed.push_back(what);
  };
  expect(apply_scc(SccKind::kBorda, e1) == WinnerSet{"x"}, "borda full");
  expect(apply_scc(SccKind::kBorda, e1_sub) == WinnerSet{"y"}, "borda subset");
  expect(apply_scc(SccKind::kCopeland, e1) == WinnerSet{"x"}, "copeland full");
  expect(apply_scc(SccKind::kCopeland, e1_sub) == WinnerSet{"y"}, "copeland subset");
  expect(apply_scc(SccKind::kPlurality, e3) == (WinnerSet{"a", "b"}), "plurality full");
  expect(apply_scc(SccKind::kPlurality, marginalize_profile(e3, ab)) == WinnerSet{"a"},
         "plurality subset");
  const std::set<std::pair<AltId, AltId>> relation{
      {"a", "a"}, {"a", "b"}, {"a", "c"}, {"b", "b"}, {"b", "c"}, {"c", "c"}};
  expect(check_total_preorder(e3).relation == relation, "swap-dominance relation");

  Outcome o;
  o.pass = failed.empty();
  o.detail = o.pass ? "7/7 exact" : "mismatch:";
  for (const std::string& f : failed) o.detail += " " + f;
  return o;
}

// ---- 2: max-mode alternative wins under every rule ----

std::vector<double> random_modes(std::size_t m, Rng& rng) {
  std::vector<double> modes(m);
  for (double& v : modes) v = rng.normal(0.0, 1.0);
  return modes;
}

// Modes whose pairwise gaps are all at least `gap`.
std::vector<double> separated_modes(std::size_t m, double gap, Rng& rng) {
  while (true) {
    std::vector<double> modes = random_modes(m, rng);
    std::vector<double> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    bool ok = true;
    for (std::size_t i = 1; i < m; ++i) ok = ok && sorted[i] - sorted[i - 1] >= gap;
    if (ok) return modes;
  }
}

AltId max_mode(const std::vector<Alternative>& alts) {
  // Strict comparison keeps the first, i.e. lexicographically smallest, id.
  std::size_t best = 0;
  for (std::size_t i = 1; i < alts.size(); ++i) {
    if (alts[i].features[0] > alts[best].features[0]) best = i;
  }
  return alts[best].id;
}

bool wins_everywhere(const AnonymousProfile& profile, const AltId& top) {
  for (SccKind k : kAllSccKinds) {
    const WinnerSet w = apply_scc(k, profile);
    if (std::find(w.begin(), w.end(), top) == w.end()) return false;
  }
  return true;
}

std::size_t pl_max_mode_passes(std::size_t cases, Rng rng) {
  std::size_t passes = 0;
  for (std::size_t t = 0; t < cases; ++t) {
    const std::size_t m = 2 + rng.index(4);
    const auto alts = testing::alternatives_with_modes(random_modes(m, rng));
    const double scale = rng.uniform(0.25, 4.0);
    passes += wins_everywhere(exact_profile(testing::unit_process(Family::kPlackettLuce, scale),
                                            alts),
                              max_mode(alts));
  }
  return passes;
}

StochasticRun tm_max_mode(std::size_t cases, std::uint64_t seed) {
  StochasticRun run;
  run.name = "tm_max_mode";
  const auto start = std::chrono::steady_clock::now();
  Rng rng(derive_seed(seed, 2));
  std::ostringstream out;
  for (std::size_t t = 0; t < cases; ++t) {
    const std::size_t m = 2 + rng.index(4);
    const auto alts = testing::alternatives_with_modes(separated_modes(m, 0.2, rng));
    const AnonymousProfile p =
        estimate_profile(testing::unit_process(Family::kThurstoneMosteller), alts, 100000, rng);
    const bool ok = wins_everywhere(p, max_mode(alts));
    run.passes += ok;
    out << t << ',' << m << ',' << ok << '\n';
  }
  run.total = cases;
  run.table = out.str();
  run.seconds = seconds_since(start);
  return run;
}

// ---- 3: strong SwD-efficiency ----

Outcome strong_swd() {
  Rng rng(derive_seed(3, 0));
  std::size_t violations = 0;
  std::size_t dominated_pairs = 0;
  for (int t = 0; t < 500; ++t) {
    const auto ids = testing::letters(2 + rng.index(3));
    const AnonymousProfile p =
        t % 2 == 0 ? testing::random_profile(ids, 3, rng) : testing::random_coarse_profile(ids, rng);
    dominated_pairs += check_total_preorder(p).relation.size() - ids.size();
    for (SccKind k : {SccKind::kBorda, SccKind::kCopeland}) {
      violations += check_strong_swd_efficiency(k, p).violations.size();
    }
  }
  const std::size_t plurality =
      check_strong_swd_efficiency(SccKind::kPlurality, testing::example3()).violations.size();
  return {violations == 0 && plurality >= 1,
          fmt("borda/copeland violations %zu over 500 profiles (%zu dominance pairs), "
              "plurality violations on the three-alternative example %zu",
              violations, dominated_pairs, plurality)};
}

// ---- 4: stability on PL processes ----

Outcome stability() {
  Rng rng(derive_seed(4, 0));
  std::size_t violations = 0, applicable = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + rng.index(4);
    const auto alts = testing::alternatives_with_modes(random_modes(m, rng));
    const auto b = testing::random_subset(testing::letters(m), rng);
    const ProcessSpec spec = testing::unit_process(Family::kPlackettLuce, rng.uniform(0.25, 4.0));
    for (SccKind k : {SccKind::kBorda, SccKind::kCopeland}) {
      const StabilityReport r = check_stability(spec, k, alts, b, ExactMode{});
      applicable += r.applicable;
      violations += r.applicable && !r.stable;
    }
  }
  return {violations == 0,
          fmt("%zu violations, %zu applicable of 400 checks", violations, applicable)};
}

// ---- 5: the mean minimizes the summary KL ----

Outcome mean_minimizes_kl() {
  Rng rng(derive_seed(5, 0));
  std::size_t cases_ok = 0;
  double worst = -INFINITY;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.index(30);
    const std::size_t d = 1 + rng.index(10);
    std::vector<std::vector<double>> betas(n, std::vector<double>(d));
    for (auto& b : betas) for (double& v : b) v = rng.normal(0.0, 1.0);
    std::vector<double> x(d);
    for (double& v : x) v = rng.normal(0.0, 1.0);
    const std::vector<double> mean = summarize(betas).beta_hat;
    const double at_mean = summary_kl(betas, mean, x);
    bool ok = true;
    for (int k = 0; k < 100; ++k) {
      std::vector<double> direction(d);
      double norm = 0.0;
      for (double& v : direction) {
        v = rng.normal(0.0, 1.0);
        norm += v * v;
      }
      const double radius = rng.uniform(0.0, 1.0) / std::sqrt(norm);
      std::vector<double> other = mean;
      for (std::size_t j = 0; j < d; ++j) other[j] += radius * direction[j];
      const double gap = at_mean - summary_kl(betas, other, x);
      worst = std::max(worst, gap);
      // Rounding slack for perturbations nearly orthogonal to x.
      ok = ok && gap <= 1e-12;
    }
    cases_ok += ok;
  }
  return {cases_ok == 100,
          fmt("%zu/100 cases, max KL(mean) - KL(perturbed) = %.3g", cases_ok, worst)};
}

// ---- 6: learning numerics ----

Outcome learning_numerics() {
  Rng rng(derive_seed(6, 0));
  constexpr double kL2 = 1e-3;
  double worst_fd = 0.0;
  for (int point = 0; point < 20; ++point) {
    const std::size_t d = 10;
    std::vector<double> truth(d), beta(d);
    for (double& v : truth) v = rng.normal(0.0, 1.0);
    for (double& v : beta) v = rng.normal(0.0, 1.0);
    const auto data = gen_voter_comparisons(truth, 50, rng);
    const ObjectiveValue v = objective_and_gradient(beta, data, kL2);
    for (std::size_t k = 0; k < d; ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(beta[k]));
      std::vector<double> up = beta, down = beta;
      up[k] += h;
      down[k] -= h;
      const double fd = (objective_and_gradient(up, data, kL2).value -
                         objective_and_gradient(down, data, kL2).value) /
                        (2 * h);
      worst_fd = std::max(worst_fd,
                          std::abs(fd - v.gradient[k]) / std::max(1e-3, std::abs(v.gradient[k])));
    }
  }

  std::size_t convex_fail = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> truth(4), b1(4), b2(4);
    for (double& v : truth) v = rng.normal(0.0, 1.0);
    for (double& v : b1) v = rng.normal(0.0, 3.0);
    for (double& v : b2) v = rng.normal(0.0, 3.0);
    const auto data = gen_voter_comparisons(truth, 20, rng);
    const double theta = rng.uniform(0.0, 1.0);
    std::vector<double> mid(4);
    for (std::size_t k = 0; k < 4; ++k) mid[k] = theta * b1[k] + (1 - theta) * b2[k];
    const double lhs = objective_and_gradient(mid, data, 1e-6).value;
    const double rhs = theta * objective_and_gradient(b1, data, 1e-6).value +
                       (1 - theta) * objective_and_gradient(b2, data, 1e-6).value;
    convex_fail += lhs > rhs + 1e-9 * (1 + std::abs(rhs));
  }

  std::vector<PairwiseComparison> separable;
  for (int i = 1; i <= 10; ++i) separable.push_back({{double(i), 0.5}, {0.0, 0.5}});
  const FitResult fit = fit_voter(separable);
  const bool finite = std::all_of(fit.beta.begin(), fit.beta.end(),
                                  [](double b) { return std::isfinite(b); });

  return {worst_fd <= 1e-5 && convex_fail == 0 && finite,
          fmt("max FD relative error %.2e, %zu/200 convexity failures, separable fit "
              "beta_1 = %.3g after %d iterations",
              worst_fd, convex_fail, fit.beta[0], fit.iterations)};
}

// ---- 7-10: curves ----

StochasticRun curve_run(std::string name, const std::function<AccuracyCurve()>& eval) {
  StochasticRun run;
  run.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  run.curve = eval();
  run.seconds = seconds_since(start);
  run.table = table(run.curve);
  return run;
}

struct Variant {
  std::string name;
  SyntheticConfig config;
  double step2_at_30, step2_at_100;
  // Negative when no summarization target.
  double step3_at_max;
};

std::vector<Variant> variants(const Options& options, const SyntheticConfig& base) {
  std::vector<Variant> all;
  SyntheticConfig c = base;
  c.alt_per_instance = 3;
  all.push_back({"m=3", c, 0.888, 0.935, 0.962});
  if (!options.all_variants) return all;
  c = base;
  c.n_voters = 40;
  all.push_back({"N=40", c, 0.893, 0.949, -1.0});
  c = base;
  c.d = 20;
  all.push_back({"d=20", c, 0.746, 0.882, 0.947});
  return all;
}

std::vector<StochasticRun> stochastic_runs(const Options& options) {
  SyntheticConfig base;
  base.master_seed = options.seed;
  base.threads = options.threads;

  std::vector<StochasticRun> runs;
  runs.push_back(tm_max_mode(200, options.seed));
  runs.push_back(curve_run("step2", [&] { return eval_step2(base); }));
  runs.push_back(curve_run("step3", [&] { return eval_step3(base); }));
  for (const Variant& v : variants(options, base)) {
    runs.push_back(curve_run("step2 " + v.name, [&] { return eval_step2(v.config); }));
    if (v.step3_at_max >= 0) {
      runs.push_back(curve_run("step3 " + v.name, [&] { return eval_step3(v.config); }));
    }
  }
  MoralMachineConfig mm;
  mm.master_seed = options.seed;
  mm.threads = options.threads;
  runs.push_back(curve_run("mm", [&] { return eval_mm_step3(mm); }));
  return runs;
}

const StochasticRun& find(const std::vector<StochasticRun>& runs, const std::string& name) {
  return *std::find_if(runs.begin(), runs.end(),
                       [&](const StochasticRun& r) { return r.name == name; });
}

std::string curve_detail(const AccuracyCurve& c, double x, double target) {
  return fmt("%g: %.1f%% (target %.1f%%, se %.1f)", x, 100 * at(c, x), 100 * target,
             100 * c.standard_error.at(std::find(c.x_values.begin(), c.x_values.end(), x) -
                                       c.x_values.begin()));
}

constexpr double kCurveTolerance = 0.05;

Outcome step2_outcome(const StochasticRun& run, double target30, double target100) {
  const AccuracyCurve& c = run.curve;
  return {within(at(c, 30), target30, kCurveTolerance) &&
              within(at(c, 100), target100, kCurveTolerance),
          "comparisons " + curve_detail(c, 30, target30) + "; " +
              curve_detail(c, 100, target100)};
}

Outcome step3_outcome(const StochasticRun& run, double target) {
  const AccuracyCurve& c = run.curve;
  const double x = c.x_values.back();
  return {within(c.mean_accuracy.back(), target, kCurveTolerance),
          "voters " + curve_detail(c, x, target)};
}

Outcome moral_machine(const StochasticRun& run) {
  const AccuracyCurve& c = run.curve;
  double worst_rise = -INFINITY;
  for (std::size_t i = 1; i < c.mean_accuracy.size(); ++i) {
    worst_rise = std::max(worst_rise, c.mean_accuracy[i] - c.mean_accuracy[i - 1]);
  }
  std::string curve;
  for (std::size_t i = 0; i < c.x_values.size(); ++i) {
    curve += fmt("%s%g:%.1f", i ? " " : "", c.x_values[i], 100 * c.mean_accuracy[i]);
  }
  return {c.mean_accuracy.front() >= 0.90 && worst_rise <= 0.02 + 1e-12,
          fmt("accuracy by m [%s], largest rise %+.1fpp", curve.c_str(), 100 * worst_rise)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swapvote acceptance criteria"};
  Options options;
  app.add_flag("--all-variants", options.all_variants,
               "Run all three parameter variants instead of one");
  app.add_option("--threads", options.threads, "Worker threads (0 = hardware)");
  app.add_option("--seed", options.seed, "Master seed for the stochastic runs");
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o, double seconds) {
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto timed = [&](int id, const char* name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = body();
    report(id, name, o, seconds_since(start));
  };

  timed(1, "golden examples", [] {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = golden_examples();
    const double s = seconds_since(start);
    o.pass = o.pass && s < 1.0;
    return o;
  });

  const std::vector<StochasticRun> runs = stochastic_runs(options);

  {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t pl = pl_max_mode_passes(500, Rng(derive_seed(options.seed, 1)));
    const StochasticRun& tm = find(runs, "tm_max_mode");
    const double seconds = seconds_since(start) + tm.seconds;
    const double rate = double(tm.passes) / tm.total;
    report(2, "max-mode alternative wins under all rules",
           {pl == 500 && rate >= 0.99 && seconds < 120,
            fmt("PL exact %zu/500; TM Monte-Carlo %zu/%zu (%.1f%%)", pl, tm.passes, tm.total,
                100 * rate)},
           seconds);
  }
  timed(3, "strong SwD-efficiency", strong_swd);
  timed(4, "stability on PL processes", stability);
  timed(5, "mean minimizes summary KL", mean_minimizes_kl);
  timed(6, "learning numerics", learning_numerics);

  const StochasticRun& step2 = find(runs, "step2");
  Outcome o7 = step2_outcome(step2, 0.843, 0.924);
  o7.pass = o7.pass && step2.seconds < 1800;
  report(7, "learning curve", o7, step2.seconds);
  const StochasticRun& step3 = find(runs, "step3");
  report(8, "summarization curve", step3_outcome(step3, 0.939), step3.seconds);

  {
    SyntheticConfig base;
    Outcome o9{true, ""};
    double seconds = 0.0;
    for (const Variant& v : variants(options, base)) {
      const StochasticRun& s2 = find(runs, "step2 " + v.name);
      const Outcome a = step2_outcome(s2, v.step2_at_30, v.step2_at_100);
      seconds += s2.seconds;
      o9.pass = o9.pass && a.pass;
      o9.detail += (o9.detail.empty() ? "" : " | ") + v.name + " " + a.detail;
      if (v.step3_at_max >= 0) {
        const StochasticRun& s3 = find(runs, "step3 " + v.name);
        const Outcome b = step3_outcome(s3, v.step3_at_max);
        seconds += s3.seconds;
        o9.pass = o9.pass && b.pass;
        o9.detail += "; " + b.detail;
      }
    }
    report(9, options.all_variants ? "parameter variants (all)" : "parameter variant",
           o9, seconds);
  }

  const StochasticRun& mm = find(runs, "mm");
  report(10, "synthetic Moral-Machine population", moral_machine(mm), mm.seconds);

  {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<StochasticRun> again = stochastic_runs(options);
    std::vector<std::string> differ;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].table != again[i].table) differ.push_back(runs[i].name);
    }
    Outcome o{differ.empty(), fmt("%zu tables repeated", runs.size())};
    for (const std::string& name : differ) o.detail += ", differs: " + name;
    report(11, "determinism", o, seconds_since(start));
  }

  return failures == 0 ? 0 : 1;
}
