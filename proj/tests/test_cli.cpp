#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with `args`, capturing standard output; stderr is discarded.
Result run(const std::string& args) {
  const std::string command = std::string(SWAPVOTE_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("swapvote_cli_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run("").exit_code == 1);
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("fit --comparisons x.csv").exit_code == 1);
  CHECK(run("simulate step9").exit_code == 1);
  CHECK(run("axioms --check swd").exit_code == 1);
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("fit, summarize and decide") {
  TempDir dir;
  const std::string comparisons = dir.write(
      "cmp.csv",
      "voter_id,c_1,c_2,r_1,r_2\n"
      "v1,1,0,0,1\nv1,1,0.2,0,1\nv1,0.5,0,0,0.5\n"
      "v2,1,0.1,0,1\nv2,1,0,0.2,1\nv2,0,0,0,1\n");
  const std::string models = dir.file("models.txt");
  const std::string summary = dir.file("summary.txt");
  REQUIRE(run("fit --comparisons " + comparisons + " --out " + models + " --l2 1e-3 --tol 1e-9")
              .exit_code == 0);
  const std::string model_text = read_file(models);
  CHECK(model_text.starts_with("swapvote-model,1,voters\n"));
  CHECK(model_text.find("l2_penalty,0.001") != std::string::npos);
  REQUIRE(run("summarize --models " + models + " --out " + summary).exit_code == 0);
  CHECK(read_file(summary).starts_with("swapvote-model,1,summary\n"));

  const std::string alts = dir.write("alts.csv", "id,f_1,f_2\nleft,1,0\nright,0,1\n");
  const Result d = run("decide --summary " + summary + " --alternatives " + alts);
  CHECK(d.exit_code == 0);
  CHECK(d.out == "left\n");

  const std::string one = dir.write("one.csv", "id,f_1,f_2\nonly,5,5\n");
  const Result single = run("decide --summary " + summary + " --alternatives " + one);
  CHECK(single.exit_code == 0);
  CHECK(single.out == "only\n");

  // A per-voter file is not a summary.
  CHECK(run("decide --summary " + models + " --alternatives " + alts).exit_code == 2);
  const std::string wrong_d = dir.write("wrong.csv", "id,f_1\nx,1\n");
  CHECK(run("decide --summary " + summary + " --alternatives " + wrong_d).exit_code == 2);
}

TEST_CASE("data and numeric errors") {
  TempDir dir;
  const std::string empty = dir.write("empty.csv", "voter_id,c_1,r_1\n");
  CHECK(run("fit --comparisons " + empty + " --out " + dir.file("m.txt")).exit_code == 2);
  const std::string ragged = dir.write("ragged.csv", "voter_id,c_1,r_1\nv,1\n");
  CHECK(run("fit --comparisons " + ragged + " --out " + dir.file("m.txt")).exit_code == 2);
  CHECK(run("fit --comparisons " + dir.file("missing.csv") + " --out " + dir.file("m.txt"))
            .exit_code == 2);
  const std::string overflow = dir.write("overflow.csv", "voter_id,c_1,r_1\nv,1e308,-1e308\n");
  CHECK(run("fit --comparisons " + overflow + " --out " + dir.file("m.txt")).exit_code == 3);
  const std::string garbage = dir.write("garbage.txt", "hello\n");
  CHECK(run("summarize --models " + garbage + " --out " + dir.file("s.txt")).exit_code == 2);
}

TEST_CASE("simulate is deterministic") {
  TempDir dir;
  const std::string config = dir.write(
      "config.json",
      R"({"n_runs": 2, "n_test_instances": 20, "comparisons_grid": [10, 40],
          "voters_grid": [1, 4], "profile_sample_count": 500})");
  const Result a = run("simulate step2 --config " + config + " --seed 7");
  const Result b = run("simulate step2 --config " + config + " --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.starts_with("x,mean_accuracy,stderr\n10,"));
  CHECK(run("simulate step2 --config " + config + " --seed 8").out != a.out);

  const Result s3 = run("simulate step3 --config " + config + " --seed 7");
  CHECK(s3.exit_code == 0);
  CHECK(s3.out.starts_with("x,mean_accuracy,stderr\n1,"));

  const std::string mm = dir.write(
      "mm.json", R"({"n_voters": 50, "alternatives_grid": [2, 3], "n_test_instances": 10,
                     "profile_sample_count": 200})");
  const Result m1 = run("simulate mm --config " + mm + " --seed 3");
  CHECK(m1.exit_code == 0);
  CHECK(m1.out == run("simulate mm --config " + mm + " --seed 3").out);

  const std::string unknown = dir.write("bad.json", R"({"n_runz": 2})");
  CHECK(run("simulate step2 --config " + unknown).exit_code == 2);
  const std::string zero = dir.write("zero.json", R"({"n_runs": 0})");
  CHECK(run("simulate step2 --config " + zero).exit_code == 2);
  const std::string broken = dir.write("broken.json", "{");
  CHECK(run("simulate step2 --config " + broken).exit_code == 2);
}

TEST_CASE("axioms reports") {
  TempDir dir;
  const std::string profile = dir.write(
      "ex3.csv",
      "weight,ranking\n0.35,a>b>c\n0.35,b>a>c\n0.1,c>a>b\n0.1,a>c>b\n0.1,b>c>a\n");
  const Result strong = run("axioms --check strong-swd --profile " + profile);
  REQUIRE(strong.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(strong.out);
  CHECK(j["all_hold"] == false);
  for (const auto& r : j["reports"]) {
    CHECK(r["holds"] == (r["rule"] != "plurality"));
  }

  const Result swd = run("axioms --check swd --profile " + profile + " --rule borda");
  CHECK(nlohmann::json::parse(swd.out)["all_hold"] == true);

  const Result stab =
      run("axioms --check stability --profile " + profile + " --rule plurality --subset a,b");
  const nlohmann::json s = nlohmann::json::parse(stab.out);
  CHECK(s["reports"][0]["stable"] == false);
  CHECK(s["reports"][0]["rhs"] == nlohmann::json::array({"a"}));

  const std::string alts = dir.write("alts.csv", "id,f_1\nx,1\ny,0.2\nz,-0.4\n");
  const Result pl = run("axioms --check stability --alternatives " + alts +
                        " --beta 1 --family pl --subset y,z");
  CHECK(pl.exit_code == 0);
  CHECK(nlohmann::json::parse(pl.out)["all_hold"] == true);
  CHECK(run("axioms --check swd --alternatives " + alts + " --beta 1 --family tm").exit_code ==
        2);
  const Result mc = run("axioms --check swd --alternatives " + alts +
                        " --beta 1 --family tm --mc 5000 --seed 2");
  CHECK(mc.exit_code == 0);
  CHECK(mc.out == run("axioms --check swd --alternatives " + alts +
                      " --beta 1 --family tm --mc 5000 --seed 2")
                      .out);
  CHECK(run("axioms --check stability --profile " + profile).exit_code == 1);
  CHECK(run("axioms --check swd --profile " + profile + " --rule dictator").exit_code == 1);
  CHECK(run("axioms --check swd --profile " + profile + " --alternatives " + alts).exit_code ==
        1);
  CHECK(run("axioms --check stability --profile " + profile + " --subset a,q").exit_code == 2);
}
