#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anyon/cli.h"
#include "anyon/group_spec.h"

using namespace anyon;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "anyonctl");
  std::ostringstream out, err;
  int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json report(const Run& r) { return nlohmann::json::parse(r.out); }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(group_spec, semidirect_examples) {
  auto s3 = parse_group_spec("Z3⋊(t=2)Z2");
  EXPECT_EQ(s3.kind, GroupSpecAST::Kind::kSemidirectPQ);
  EXPECT_EQ(s3.pq.p, 3u);
  EXPECT_EQ(s3.pq.q, 2u);
  EXPECT_EQ(s3.pq.t, 2u);
  auto z7 = parse_group_spec("Z7⋊(t=2)Z3");
  EXPECT_EQ(z7.pq.p, 7u);
  EXPECT_EQ(z7.pq.q, 3u);
  EXPECT_EQ(parse_group_spec("Z7xsd(t=2)Z3"), z7);
  EXPECT_TRUE(build_group(z7).same_table(semidirect_pq({7, 3, 2})));
}

TEST(group_spec, errors_carry_positions) {
  try {
    parse_group_spec("Z3⋊(t=1)Z2");
    FAIL() << "t = 1 accepted";
  } catch (const SpecError& e) {
    EXPECT_EQ(e.position(), 2u);
    EXPECT_NE(std::string(e.what()).find("t must"), std::string::npos);
  }
  EXPECT_THROW(parse_group_spec("Z3x"), SpecError);
  EXPECT_THROW(parse_group_spec("Z3 ) "), SpecError);
  EXPECT_THROW(parse_group_spec("nosuchgroup"), SpecError);
  EXPECT_THROW(parse_group_spec("S3⋊(t=2)Z2"), SpecError);
  EXPECT_THROW(parse_group_spec("Z4⋊(t=3)Z2"), SpecError);  // 4 is not prime
  EXPECT_THROW(parse_group_spec("S9"), SpecError);
}

TEST(group_spec, print_parse_idempotent) {
  for (const char* text : {"Z3⋊(t=2)Z2", "Z7xsd(t=2)Z3", "a4", "z3z3_q8", "z3z3_d4", "z3z3_z3z2", "S3", "A5", "Q8",
                           "D4", "Z2xZ3", "(Z2xZ3)xZ5", "Z2x(Z3xsd(t=2)Z2)", " Z13 ⋊ (t=3) Z3 "}) {
    auto ast = parse_group_spec(text);
    for (bool ascii : {false, true}) {
      auto again = parse_group_spec(print_group_spec(ast, ascii));
      EXPECT_EQ(again, ast) << text;
      EXPECT_EQ(print_group_spec(again, ascii), print_group_spec(ast, ascii)) << text;
    }
  }
  EXPECT_EQ(print_group_spec(parse_group_spec("Z2x(Z3xZ5)")), "Z2xZ3xZ5");
  EXPECT_EQ(build_group(parse_group_spec("Z2xZ3xZ5")).order(), 30u);
}

TEST(cli, classify_s3) {
  auto r = run({"classify", "S3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = report(r);
  EXPECT_EQ(j["schema"], cli::kReportSchema);
  EXPECT_EQ(j["results"]["solvable"], true);
  EXPECT_EQ(j["results"]["nilpotent"], false);
  EXPECT_EQ(j["results"]["power"], "CX");
  EXPECT_EQ(j["seed"], 1);
}

TEST(cli, fusion_table_csv_for_s3_sign) {
  auto r = run({"fusion-table", "Z3⋊(t=2)Z2", "--rep", "2d", "--gamma", "sign"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row0, row1, row2;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header, "key,gamma,re,im,magnitude2");
  EXPECT_EQ(row0.rfind("0,1,0,0", 0), 0u);
  EXPECT_NE(row1.find("-0.866025403784438"), std::string::npos);
  EXPECT_EQ(row2.find("-0.866"), std::string::npos);
}

TEST(cli, simulate_toffoli_enumerate) {
  auto r = run({"simulate", "toffoli", "--group", "Z3⋊(t=2)Z2", "--mode", "enumerate"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = report(r);
  EXPECT_LT(j["results"]["max_deficit"].get<double>(), 1e-9);
  EXPECT_EQ(j["results"]["inputs"], 27);
}

TEST(cli, exit_codes) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"classify"}).code, cli::kUsageError);
  EXPECT_EQ(run({"classify", "Z3⋊(t=1)Z2"}).code, cli::kUsageError);
  EXPECT_EQ(run({"decompose", "Q8"}).code, cli::kUsageError);
  EXPECT_EQ(run({"--mode", "fast", "classify", "S3"}).code, cli::kUsageError);
  EXPECT_EQ(run({"simulate", "nonsense"}).code, cli::kUsageError);
  EXPECT_EQ(run({"verify", "99"}).code, cli::kUsageError);
  EXPECT_EQ(run({"verify", "3"}).code, cli::kVerificationFailed);
  EXPECT_EQ(run({"verify", "3", "--expect-fail", "3"}).code, cli::kOk);
  // an absurd tolerance turns a correct run into a verification failure
  EXPECT_EQ(run({"simulate", "cx", "--tolerance", "-1"}).code, cli::kVerificationFailed);
}

TEST(cli, errors_are_json_with_flag) {
  const std::string path = ::testing::TempDir() + "cli_error.json";
  auto r = run({"--json", path, "classify", "Z9x"});
  EXPECT_EQ(r.code, cli::kUsageError);
  auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["error"]["kind"], "usage");
  EXPECT_NE(j["error"]["message"].get<std::string>().find("offset"), std::string::npos);
  std::remove(path.c_str());
}

TEST(cli, reports_replay_identically) {
  const std::string a = ::testing::TempDir() + "replay_a.json", b = ::testing::TempDir() + "replay_b.json";
  std::vector<std::string> args{"simulate", "pp_zero_perp", "--group", "Z7xsd(t=2)Z3", "--mode", "sample", "--seed", "9"};
  auto first = args;
  first.insert(first.begin(), {"--json", a});
  ASSERT_EQ(run(first).code, 0);
  auto ja = nlohmann::json::parse(slurp(a));
  // the report alone is enough to re-run it
  std::vector<std::string> replay = ja["argv"].get<std::vector<std::string>>();
  replay.erase(replay.begin());
  for (auto& s : replay)
    if (s == a) s = b;
  ASSERT_EQ(run(replay).code, 0);
  auto jb = nlohmann::json::parse(slurp(b));
  ja.erase("wall_time_s");
  jb.erase("wall_time_s");
  jb["argv"] = ja["argv"];
  EXPECT_EQ(ja.dump(), jb.dump());
  std::remove(a.c_str());
  std::remove(b.c_str());
}
