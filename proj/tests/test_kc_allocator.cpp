#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sololab/kc_allocator.hpp"

using namespace sololab;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }

}  // namespace

TEST(KraftAllocator, LeftmostFit) {
  KraftAllocator a;
  EXPECT_EQ(a.request(1).str(), "0");
  EXPECT_EQ(a.request(2).str(), "10");
  EXPECT_EQ(a.request(3).str(), "110");
  EXPECT_EQ(a.free_mass(), dy("1/8"));
  EXPECT_EQ(a.request(4).str(), "1110");
  EXPECT_TRUE(a.conserved());
  EXPECT_THROW(a.request(3), KraftExhausted);
  EXPECT_EQ(a.request(4).str(), "1111");
  EXPECT_EQ(a.free_mass(), DyadicRational(0));
}

TEST(KraftAllocator, OutOfOrderRequests) {
  KraftAllocator a;
  EXPECT_EQ(a.request(3).str(), "000");
  EXPECT_EQ(a.request(1).str(), "1");
  EXPECT_EQ(a.request(2).str(), "01");
  EXPECT_EQ(a.request(3).str(), "001");
  EXPECT_THROW(a.request(10), KraftExhausted);
}

TEST(KraftAllocator, ZeroLength) {
  KraftAllocator fresh;
  EXPECT_EQ(fresh.request(0).str(), "");
  EXPECT_THROW(fresh.request(5), KraftExhausted);
  KraftAllocator used;
  used.request(2);
  EXPECT_THROW(used.request(0), KraftExhausted);
}

TEST(KraftAllocator, SucceedsExactlyWhenFeasible) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(0, 7);
  for (int it = 0; it < 400; ++it) {
    KraftAllocator a;
    std::vector<BitString> issued;
    DyadicRational requested;
    for (int r = 0; r < 14; ++r) {
      const std::size_t k = len(rng);
      const bool expect = oracle::feasible(issued, k);
      const DyadicRational after = requested + DyadicRational::pow2_neg(static_cast<std::uint32_t>(k));
      EXPECT_EQ(expect, after <= DyadicRational(1));
      const auto got = a.try_request(k);
      ASSERT_EQ(got.has_value(), expect);
      if (got) {
        EXPECT_EQ(got->size(), k);
        issued.push_back(*got);
        requested = after;
      }
      EXPECT_TRUE(a.conserved());
      EXPECT_TRUE(is_prefix_free(a.issued()));
      EXPECT_EQ(a.issued(), issued);
    }
  }
}

TEST(KraftAllocator, FreeIntervalsHaveDistinctIncreasingSizes) {
  std::mt19937_64 rng(100);
  for (int it = 0; it < 200; ++it) {
    KraftAllocator a;
    for (int r = 0; r < 12; ++r) {
      a.try_request(1 + rng() % 8);
      const auto f = a.free_intervals();
      for (std::size_t k = 1; k < f.size(); ++k) EXPECT_GT(f[k - 1].size(), f[k].size());
    }
  }
}

TEST(Decompose, BinaryExpansion) {
  const WeightScheme s{{{4, dy("5/8")}, {9, dy("1/4")}}};
  const WeightDecomposition d = decompose_weights(s);
  ASSERT_EQ(d.entries.size(), 2u);
  EXPECT_EQ(d.entries[0].lengths, (std::vector<std::uint32_t>{1, 3}));
  EXPECT_EQ(d.entries[1].lengths, (std::vector<std::uint32_t>{2}));
  EXPECT_THROW(decompose_weights(WeightScheme{{{0, dy("1")}, {1, dy("1/2")}}}), InvalidWeights);
}

TEST(Synthesis, DefaultSchemeReproducesIndexCode) {
  const SynthesizedUniversal u = synthesize_universal(default_scheme(8));
  ASSERT_EQ(u.entries().size(), 8u);
  for (std::uint64_t i = 0; i < 8; ++i) {
    EXPECT_EQ(u.entries()[i].codeword, code_I(i));
    EXPECT_EQ(u.entries()[i].machine, i);
  }
}

TEST(Synthesis, RunsSelectedMachine) {
  const MachineIndex copier = encode_machine(catalog::copier());
  const SynthesizedUniversal u = synthesize_universal(WeightScheme{{{copier, dy("5/8")}, {0, dy("1/4")}}});
  // allocation order: copier 2^-1, copier 2^-3, machine 0 2^-2
  ASSERT_EQ(u.entries().size(), 3u);
  EXPECT_EQ(u.entries()[0].codeword.str(), "0");
  EXPECT_EQ(u.entries()[1].codeword.str(), "100");
  EXPECT_EQ(u.entries()[2].codeword.str(), "11");
  EXPECT_EQ(u.entries()[1].machine, copier);
  EXPECT_EQ(u.entries()[2].machine, 0);
  EXPECT_EQ(u.run(BitString::parse("0101"), 50).output.str(), "101");
  EXPECT_EQ(u.run(BitString::parse("10011"), 50).output.str(), "11");
  EXPECT_EQ(u.run(BitString::parse("1111"), 50).output.str(), "00");
  const RunResult off_table = u.run(BitString::parse("1010"), 50);
  EXPECT_TRUE(off_table.output.empty());
  EXPECT_EQ(off_table.status, RunStatus::Halted);
}

TEST(Synthesis, MatchesMixture) {
  const MachineIndex copier = encode_machine(catalog::copier());
  const WeightScheme custom{{{copier, dy("5/8")}, {0, dy("1/4")}, {5, dy("1/16")}}};
  EXPECT_TRUE(kc_verify(custom, 4, {8, 40}).passed());
  EXPECT_TRUE(kc_verify(default_scheme(8), 3, {9, 30}).passed());
  EXPECT_TRUE(kc_verify(WeightScheme{{{copier, dy("1")}}}, 3, {3, 30}).passed());
}

TEST(Synthesis, MatchesBruteForceDispatcher) {
  const WeightScheme s{{{2, dy("3/8")}, {1, dy("1/4")}, {6, dy("1/8")}}};
  const SynthesizedUniversal u = synthesize_universal(s);
  const Budget b{7, 20};
  const oracle::RunFn run_u = [&u](const BitString& in, std::uint64_t fuel) { return u.run(in, fuel); };
  EXPECT_EQ(u.tabulate(3, b).values, oracle::naive_table(run_u, 3, b));
}

TEST(Synthesis, RejectsNonPrefixFreeTables) {
  EXPECT_THROW(SynthesizedUniversal({{BitString::parse("0"), 1}, {BitString::parse("01"), 2}}), Error);
  EXPECT_THROW(SynthesizedUniversal({{BitString::parse("01"), 1}, {BitString::parse("0"), 2}}), Error);
  EXPECT_THROW(SynthesizedUniversal({{BitString::parse("1"), 1}, {BitString::parse("1"), 2}}), Error);
}

TEST(Synthesis, JsonRoundTrip) {
  const SynthesizedUniversal u = synthesize_universal(default_scheme(5));
  const Json j = to_json(u);
  EXPECT_EQ(j["dispatch"]["100"], "1");
  const SynthesizedUniversal back = synthesized_from_json(j);
  ASSERT_EQ(back.entries().size(), u.entries().size());
  for (std::size_t k = 0; k < u.entries().size(); ++k) {
    EXPECT_EQ(back.entries()[k].codeword, u.entries()[k].codeword);
    EXPECT_EQ(back.entries()[k].machine, u.entries()[k].machine);
  }
}
