#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ulmt/cli.hpp"

using namespace ulmt;

namespace {

const std::string kSamples = ULMT_SAMPLES_DIR;

std::string sample(const std::string& name) { return kSamples + "/" + name; }

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& fragment) { return text.find(fragment) != std::string::npos; }

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ulmt-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST(Cli, VerifyAlgebra) {
  auto r = run({"verify-algebra", sample("L5.chain")});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "residuation: pass"));
  EXPECT_TRUE(has(r.out, "prelinearity: pass"));
  r = run({"verify-algebra", "G4", "Z3"});
  EXPECT_EQ(r.status, 0);
  r = run({"verify-algebra", sample("broken.chain")});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "FAIL witness"));
}

TEST(Cli, Entails) {
  auto r = run({"entails", "--space", sample("L5.chain"), "--formula", "q", "--premises", "p, p->q"});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "entails: true"));
  r = run({"entails", "--space", "L5", "--formula", "p \\/ (p -> 0)"});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "countermodel:"));
  EXPECT_TRUE(has(r.out, "p = 1"));
}

TEST(Cli, FindModel) {
  auto r = run({"find-model", "--space", sample("G3.chain"), "--max-domain", "1", "--tableau", sample("contradiction.tab")});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "unsatisfiable"));
  r = run({"find-model", "--space", "G3", "--max-domain", "1", "--tableau", sample("pq.tab")});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "result: satisfiable"));
}

TEST(Cli, ConsistencyAndFiniteCharacter) {
  auto r = run({"consistent", "--space", "G3", "--tableau", sample("pq.tab")});
  EXPECT_EQ(r.status, 0);
  r = run({"consistent", "--space", "G3", "--tableau", sample("transitivity.tab")});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "entailed_join_of:\n  p -> r"));
  r = run({"finite-character", "--space", "G3", "--tableau", sample("transitivity.tab")});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "satisfiable: false"));
  EXPECT_TRUE(has(r.out, "unsatisfiable_subtableau:"));
}

TEST(Cli, Henkin) {
  auto r = run({"henkin", "--space", "G3", "--tableau", sample("henkin.tab"), "--constants", "c, c1", "--formulas",
                sample("henkin.formulas"), "--pairs", sample("henkin.pairs")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(has(r.out, "stage 2: case (ii): add P(c) to T"));
  EXPECT_TRUE(has(r.out, "stage 4: case (ii): add P(c1) to U"));
  r = run({"henkin", "--space", "G3", "--tableau", sample("contradiction.tab")});
  EXPECT_EQ(r.status, 1);
}

TEST(Cli, ModelCommands) {
  auto r = run({"eval", "--model", sample("ab.model"), "--formula", "P(x) -> P(y)", "--assign", "x=b,y=a"});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "value: 1"));
  EXPECT_TRUE(has(r.out, "designated: false"));
  r = run({"check-model", "--model", sample("ab.model"), "--formula", "exists x. P(x), forall x. P(x)"});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "failing_sentence: forall x. P(x)"));
  r = run({"substructure", "--small", sample("a.model"), "--large", sample("ab.model")});
  EXPECT_EQ(r.status, 0);
  r = run({"elementary", "--small", sample("a.model"), "--large", sample("ab.model"), "--depth", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "counterexample: exists x. P(x)"));
  r = run({"exhaustive", "--model", sample("ab.model"), "--depth", "0"});
  EXPECT_EQ(r.status, 0);
  r = run({"theory", "--model", sample("ab.model"), "--depth", "0", "--params", "*"});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "P(@b)"));
  r = run({"realize", "--model", sample("pq.model"), "--type", sample("pq.type")});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "element: b"));
}

TEST(Cli, Chains) {
  auto r = run({"tarski-vaught", "--models", sample("elementary.list"), "--depth", "2"});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_TRUE(has(r.out, "preserved: true"));
  r = run({"tarski-vaught", "--models", sample("restriction.list"), "--depth", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "counterexample: exists x. P(x)"));
  r = run({"union", "--models", sample("restriction.list")});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "domain a b"));
}

TEST(Cli, SaturationDemo) {
  auto r = run({"saturated", "--space", "G3", "--max-domain", "2", "--model", sample("a0.model"), "--depth", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "unrealized_type:\n  p:\n  p':\n  P(x) -> 0\n"));
  r = run({"saturate-step", "--space", "G3", "--max-domain", "2", "--model", sample("a0.model"), "--type",
           sample("positive.type"), "--depth", "1"});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "realizer: c"));
  EXPECT_TRUE(has(r.out, "P c = 1"));
  r = run({"is-type", "--space", "G3", "--type", sample("pq.type")});
  EXPECT_EQ(r.status, 0);
}

TEST_F(TempDir, WitnessModelsRoundTrip) {
  const std::string out = path("witness.model");
  auto r = run({"saturate-step", "--space", "G3", "--max-domain", "2", "--model", sample("a0.model"), "--type",
                sample("positive.type"), "--depth", "1", "--out", out});
  ASSERT_EQ(r.status, 0);
  // The written extension realizes the type and contains the original as a substructure.
  r = run({"realize", "--model", out, "--type", sample("positive.type")});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "element: c"));
  r = run({"substructure", "--small", sample("a0.model"), "--large", out});
  EXPECT_EQ(r.status, 0);

  const std::string tab = write("t.tab", "T:\nexists x. P(x)\nU:\nforall x. P(x)\n");
  const std::string found = path("found.model");
  r = run({"find-model", "--space", "G3", "--tableau", tab, "--out", found});
  ASSERT_EQ(r.status, 0);
  r = run({"check-model", "--model", found, "--formula", "exists x. P(x)"});
  EXPECT_EQ(r.status, 0);
  r = run({"check-model", "--model", found, "--formula", "forall x. P(x)"});
  EXPECT_EQ(r.status, 1);
}

TEST_F(TempDir, ErrorsExitTwo) {
  auto r = run({"entails", "--space", "L5", "--formula", "p ->"});
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(has(r.err, "syntax-error"));
  r = run({"entails", "--formula", "p"});
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(has(r.err, "--space"));
  r = run({"frobnicate"});
  EXPECT_EQ(r.status, 2);
  r = run({});
  EXPECT_EQ(r.status, 2);
  r = run({"eval", "--model", path("missing.model"), "--formula", "p"});
  EXPECT_EQ(r.status, 2);
  const std::string bad = write("bad.tab", "T:\np\nU:\nq &\n");
  r = run({"find-model", "--space", "G3", "--tableau", bad});
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(has(r.err, "bad.tab:4:")) << r.err;
  const std::string wide = write("wide.tab", "T:\nR(c, d) & R(d, c)\n");
  r = run({"find-model", "--space", "L5", "--max-domain", "4", "--max-candidates", "1000", "--tableau", wide});
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(has(r.err, "search-space-too-large"));
  r = run({"--help"});
  EXPECT_EQ(r.status, 0);
}

TEST(Cli, MachineFormat) {
  auto r = run({"entails", "--space", "L5", "--formula", "q", "--premises", "p, p->q", "--format", "machine"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "entails=true\n");
  r = run({"saturated", "--space", "G3", "--model", sample("a0.model"), "--format", "machine"});
  EXPECT_TRUE(has(r.out, "unrealized_type=P(x) -> 0\n"));
}

TEST(Cli, DeterministicAcrossJobs) {
  const std::vector<std::string> base{"find-model", "--space", "G3,L3", "--tableau", sample("transitivity.tab")};
  auto one = base, four = base;
  one.insert(one.end(), {"--jobs", "1"});
  four.insert(four.end(), {"--jobs", "4"});
  EXPECT_EQ(run(one).out, run(four).out);
  auto a = run({"generate", "--seed", "5", "--count", "3", "--depth", "3"});
  auto b = run({"generate", "--seed", "5", "--count", "3", "--depth", "3"});
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run({"generate", "--seed", "6", "--count", "3", "--depth", "3"}).out);
}
