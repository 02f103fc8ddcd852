#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sololab/cli.hpp"

using namespace sololab;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string log;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sololab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, log);
  return {code, out.str(), log.str()};
}

std::string sample(const char* name) { return std::string(SOLOLAB_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, ParseCanonicalizes) {
  const Outcome o = run_cli({"parse", sample("copier.tm")});
  ASSERT_EQ(o.code, 0) << o.log;
  const Json j = Json::parse(o.out);
  EXPECT_EQ(j["num_states"], 2);
  EXPECT_EQ(j["index"], encode_machine(catalog::copier()).str());
}

TEST(Cli, ParseErrorsExitTwo) {
  const Outcome o = run_cli({"parse", sample("nontotal.tm")});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.log.find("state 1 symbol B"), std::string::npos);
  EXPECT_EQ(run_cli({"parse", sample("missing.tm")}).code, 2);
}

TEST(Cli, Enum) {
  EXPECT_EQ(run_cli({"enum", "code", "3"}).out, "11000\n");
  const Json d = Json::parse(run_cli({"enum", "decode", "110000"}).out);
  EXPECT_EQ(d["index"], "3");
  EXPECT_EQ(d["remainder"], "0");
  EXPECT_EQ(run_cli({"enum", "decode", "1111"}).code, 2);
  EXPECT_EQ(run_cli({"enum", "code", "-4"}).code, 2);
  const Outcome show = run_cli({"enum", "show", "0"});
  EXPECT_EQ(show.code, 0);
  EXPECT_EQ(parse_machine_text(show.out), decode_machine(0));
  EXPECT_EQ(run_cli({"enum", "encode", sample("zeros.tm")}).out, encode_machine(catalog::zeros_emitter()).str() + "\n");
}

TEST(Cli, LambdaSingleValue) {
  const Outcome o = run_cli({"lambda", "--spec", sample("copier.tm"), "--x", "10", "--max-len", "4", "--fuel", "8"});
  ASSERT_EQ(o.code, 0) << o.log;
  const Json j = Json::parse(o.out);
  EXPECT_EQ(j["minimal_programs"], Json::array({"10"}));
  EXPECT_EQ(j["value"]["mantissa"], "1");
  EXPECT_EQ(j["value"]["exponent"], 2);
}

TEST(Cli, LambdaTableCsv) {
  const Outcome o = run_cli({"lambda", "--spec", sample("copier.tm"), "--depth", "1", "--max-len", "3", "--fuel", "8",
                         "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.log;
  EXPECT_EQ(o.out, "x,value_mantissa,value_exponent\n,1,0\n0,1,1\n1,1,1\n");
}

TEST(Cli, LambdaNeedsOneSource) {
  EXPECT_EQ(run_cli({"lambda"}).code, 2);
  EXPECT_EQ(run_cli({"lambda", "--universal", "--index", "3"}).code, 2);
  EXPECT_EQ(run_cli({"lambda", "--universal", "--x", "012"}).code, 2);
}

TEST(Cli, MixChecksPass) {
  EXPECT_EQ(run_cli({"mix", "split-check", "--depth", "2", "--max-len", "7", "--fuel", "20"}).code, 0);
  EXPECT_EQ(run_cli({"mix", "split-check", "--depth", "2", "--max-len", "7", "-N", "3"}).code, 2);
  const Outcome dom = run_cli({"mix", "dominance", "-j", "0", "-j", "5", "--depth", "2", "--max-len", "7", "--fuel", "20"});
  EXPECT_EQ(dom.code, 0);
  EXPECT_EQ(Json::parse(dom.out)["results"].size(), 2u);
  EXPECT_EQ(run_cli({"mix", "dominance", "-j", "40", "--max-len", "7"}).code, 2);
  EXPECT_EQ(run_cli({"mix", "eval", "--weights", sample("weights8.json"), "--depth", "2", "--max-len", "6"}).code, 0);
  EXPECT_EQ(run_cli({"mix", "eval", "--weights", sample("overweight.json")}).code, 2);
}

TEST(Cli, KcRequest) {
  const Outcome ok = run_cli({"kc", "request", "1", "2", "2"});
  EXPECT_EQ(ok.code, 0);
  const Json j = Json::parse(ok.out);
  EXPECT_EQ(j["issued"][2]["codeword"], "11");
  const Outcome full = run_cli({"kc", "request", "1", "1", "3"});
  EXPECT_EQ(full.code, 1);
  const Json f = Json::parse(full.out);
  EXPECT_EQ(f["failed_request"], 3);
  EXPECT_EQ(f["issued"].size(), 2u);
}

TEST(Cli, KcSynthAndVerify) {
  const Outcome s = run_cli({"kc", "synth", "-N", "4"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(Json::parse(s.out)["dispatch"], Json::parse(R"({"0":"0","100":"1","101":"2","11000":"3"})"));
  EXPECT_EQ(run_cli({"kc", "verify", "--weights", sample("weights8.json"), "--depth", "2", "--max-len", "7", "--fuel",
                 "20"})
                .code,
            0);
}

TEST(Cli, Gap) {
  const Outcome dp = run_cli({"gap", "delta-prime", "--depth", "2", "--max-len", "7", "--fuel", "20"});
  ASSERT_EQ(dp.code, 0) << dp.log;
  const Json j = Json::parse(dp.out);
  EXPECT_EQ(j["verdict"], "not-a-mixture: root gap 0");
  EXPECT_EQ(j["covered_machines"], 15);
  const Outcome rep = run_cli({"gap", "report", "--spec", sample("copier.tm"), "--depth", "2", "--max-len", "3"});
  EXPECT_EQ(rep.code, 1);
  EXPECT_EQ(run_cli({"gap", "report", "--c", "0"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"lambda", "--universal", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"lambda", "--universal", "--depth", "x"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}
