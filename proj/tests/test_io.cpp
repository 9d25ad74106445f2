#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "ulmt/io.hpp"
#include "ulmt/random.hpp"

using namespace ulmt;

namespace {

const std::filesystem::path kSamples = ULMT_SAMPLES_DIR;

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ChainFile, LoadsAndRoundTrips) {
  const UlChain l5 = load_chain(kSamples / "L5.chain");
  EXPECT_TRUE(l5.same_algebra(make_lukasiewicz_chain(5)));
  const UlChain z2 = load_chain(kSamples / "Z2.chain");
  EXPECT_TRUE(z2.same_algebra(make_truncated_group_chain(2)));
  for (const auto& c : {make_godel_chain(4), make_truncated_group_chain(3), make_lukasiewicz_chain(2)}) {
    std::stringstream s;
    write_chain(s, c);
    const UlChain back = read_chain(s);
    EXPECT_TRUE(back.same_algebra(c));
    EXPECT_EQ(back.name(), c.name());
  }
}

TEST(ChainFile, Errors) {
  std::istringstream missing("chain x\nsize 2\none 1\nconj:\n0 0\n0 1\n");
  EXPECT_NE(message_of([&] { read_chain(missing, "m.chain"); }).find("missing 'zero"), std::string::npos);
  std::istringstream bad_int("chain x\nsize two\n");
  EXPECT_NE(message_of([&] { read_chain(bad_int, "b.chain"); }).find("b.chain:2"), std::string::npos);
  std::istringstream short_table("chain x\nsize 3\none 2\nzero 0\nconj:\n0 0 0\n0 1 1\n");
  EXPECT_THROW(read_chain(short_table), error);
  EXPECT_THROW(load_chain(kSamples / "no-such.chain"), error);
  // Loads fine; the axioms are a separate question.
  EXPECT_FALSE(verify_ul_axioms(load_chain(kSamples / "broken.chain")).all_passed());
}

TEST(ChainRegistry, BuiltinsAndFiles) {
  ChainRegistry reg;
  EXPECT_EQ(reg.resolve("L5")->size(), 5);
  EXPECT_EQ(reg.resolve("G3")->one(), 2);
  EXPECT_EQ(reg.resolve("Z2")->one(), 2);
  EXPECT_EQ(reg.resolve("G3"), reg.resolve("G3"));
  EXPECT_THROW(reg.resolve("Q3"), error);
  EXPECT_THROW(reg.resolve("L"), error);
  EXPECT_EQ(reg.load((kSamples / "L5.chain").string())->name(), "L5");
}

TEST(ModelFile, Loads) {
  ChainRegistry reg;
  const Structure s = load_model(kSamples / "ab.model", reg);
  EXPECT_EQ(s.name(), "ab");
  EXPECT_EQ(s.chain().name(), "G3");
  EXPECT_EQ(s.domain(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(s.predicate_table("P").values, (std::vector<Degree>{1, 2}));

  const Structure f = load_model(kSamples / "functions.model", reg);
  EXPECT_EQ(f.function_table("f").values, (std::vector<Element>{1, 2, 2}));
  EXPECT_EQ(f.function_table("k").values, (std::vector<Element>{0}));
  EXPECT_EQ(f.function_table("k").arity, 0);
  EXPECT_EQ(f.predicate_table("P").values, (std::vector<Degree>{0, 2, 4}));
}

TEST(ModelFile, RoundTrip) {
  ChainRegistry reg;
  for (const char* name : {"ab.model", "functions.model", "link2.model", "pq.model"}) {
    const Structure s = load_model(kSamples / name, reg);
    std::stringstream out;
    write_model(out, s);
    EXPECT_TRUE(read_model(out, reg) == s) << name;
  }
}

TEST(ModelFile, RandomRoundTrip) {
  ChainRegistry reg;
  std::mt19937_64 rng(83);
  for (int i = 0; i < 50; ++i) {
    const auto chain = reg.resolve(i % 2 ? "L4" : "Z1");
    const std::size_t n = 1 + i % 3;
    std::vector<std::string> dom;
    for (std::size_t k = 0; k < n; ++k) dom.push_back("m" + std::to_string(k));
    Structure s("r" + std::to_string(i), chain, dom);
    std::uniform_int_distribution<Degree> deg(0, chain->size() - 1);
    std::uniform_int_distribution<Element> el(0, n - 1);
    std::vector<Degree> p(n), r(n * n), q(1);
    for (auto& v : p) v = deg(rng);
    for (auto& v : r) v = deg(rng);
    q[0] = deg(rng);
    s.set_predicate("P", 1, p);
    s.set_predicate("R", 2, r);
    s.set_predicate("q", 0, q);
    std::vector<Element> f(n);
    for (auto& v : f) v = el(rng);
    s.set_function("f", 1, f);
    std::stringstream out;
    write_model(out, s);
    ASSERT_TRUE(read_model(out, reg) == s) << out.str();
  }
}

TEST(ModelFile, Errors) {
  ChainRegistry reg;
  auto fails_with = [&](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    const std::string msg = message_of([&] { read_model(in, reg, "m.model"); });
    EXPECT_NE(msg.find(fragment), std::string::npos) << "got: " << msg;
  };
  fails_with("model m\ndomain a\nP a = 1\n", "missing 'algebra");
  fails_with("model m\nalgebra G3\nP a = 1\n", "missing 'domain");
  fails_with("algebra G3\ndomain a b\nP a = 1\n", "not assigned on every tuple");
  fails_with("algebra G3\ndomain a\nP a = 1\nP a = 2\n", "m.model:4");
  fails_with("algebra G3\ndomain a\nP a = 7\n", "outside chain");
  fails_with("algebra G3\ndomain a\nP z = 1\n", "'z' is not in the domain");
  fails_with("algebra G3\ndomain a b\nP a = 1\nP a b = 1\nP b = 1\n", "different arities");
  fails_with("algebra G3\ndomain a\nP a 1\n", "expected '<symbol> <args> = <value>'");
  fails_with("algebra Q9\ndomain a\n", "unknown chain");
  fails_with("algebra G3\ndomain 1a\n", "identifiers");
  fails_with("algebra G3\ndomain a b\nf a = b\nf b = 2\n", "not a domain element");
}

TEST(ModelChainFile, LoadsRelativePaths) {
  ChainRegistry reg;
  const auto links = load_model_chain(kSamples / "elementary.list", reg);
  ASSERT_EQ(links.size(), 3u);
  EXPECT_EQ(links[2].size(), 4u);
  EXPECT_TRUE(is_substructure(links[0], links[2]));
}

TEST(TableauFile, LoadsAndRoundTrips) {
  Signature sig;
  const Tableau t = load_tableau(kSamples / "transitivity.tab", sig);
  EXPECT_EQ(t.left().size(), 2u);
  EXPECT_EQ(t.right().size(), 1u);
  std::stringstream out;
  write_tableau(out, t);
  Signature again;
  EXPECT_EQ(read_tableau(out, again), t);

  std::istringstream bad("p\nT:\nq\n");
  EXPECT_NE(message_of([&] { read_tableau(bad, sig, "x.tab"); }).find("x.tab:1"), std::string::npos);
  std::istringstream parse_error("T:\np ->\n");
  const auto msg = message_of([&] { read_tableau(parse_error, sig, "y.tab"); });
  EXPECT_NE(msg.find("y.tab:2:"), std::string::npos) << msg;
}

TEST(TableauFile, RandomRoundTrip) {
  std::mt19937_64 rng(89);
  FormulaGenerator gen;
  gen.propositions = {"p", "q"};
  gen.predicates = {{"P", 1}};
  gen.constants = {"c"};
  gen.quantifiers = true;
  for (int i = 0; i < 100; ++i) {
    const Tableau t = random_tableau(rng, gen, 3, 3, 3);
    std::stringstream out;
    write_tableau(out, t);
    Signature sig;
    ASSERT_EQ(read_tableau(out, sig), t) << out.str();
  }
}

TEST(TypeFile, LoadsWithParameters) {
  Signature sig;
  const TypePair t = load_type(kSamples / "positive.type", sig);
  EXPECT_TRUE(t.p.empty());
  ASSERT_EQ(t.p_prime.size(), 1u);
  EXPECT_EQ(to_string(t.p_prime[0]), "P(x) -> 0");

  std::istringstream with_params("p:\nR(x, @b) & P(@a)\np':\nP(x)\n");
  const TypePair w = read_type(with_params, sig);
  EXPECT_EQ(w.parameters, (std::vector<std::string>{"a", "b"}));
  std::stringstream out;
  write_type(out, w);
  EXPECT_EQ(read_type(out, sig), w);

  std::istringstream two_vars("p:\nR(x, y)\n");
  EXPECT_THROW(read_type(two_vars, sig), error);
}

TEST(TheoryFile, OneFormulaPerLine) {
  Signature sig;
  std::istringstream in("# comment\nforall x. P(x)\n\n  exists y. P(y) # trailing\n");
  const auto fs = read_theory(in, sig);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(to_string(fs[1]), "exists y. P(y)");
}
