// Copyright 2026 The CareLedger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <regex>

#include "careledger/careflow/motion.hpp"
#include "careledger/ledger/json_fields.hpp"
#include "careledger/ledger/chain.hpp"
#include "support/process.hpp"
#include "support/test_util.hpp"

namespace {

using testutil::run;
using testutil::TempDir;

const std::string kCli = CARELEDGER_CLI_PATH;
const std::string kNode = CARELEDGER_NODE_PATH;

class CliAgainstNode : public ::testing::Test {
 protected:
  void SetUp() override {
    node_ = std::make_unique<testutil::Child>(std::vector<std::string>{
        kNode, "--data-dir", (dir / "data").string(), "--listen", "127.0.0.1:0",
        "--seal-interval-ms", "0"});
    std::smatch m;
    const std::string line = node_->first_line();
    ASSERT_TRUE(std::regex_search(line, m, std::regex(R"(listening on 127\.0\.0\.1:(\d+))")))
        << line;
    url = "http://127.0.0.1:" + m[1].str();
  }

  testutil::RunResult cli(std::vector<std::string> args, const std::string& key = "") {
    std::vector<std::string> full{kCli, "--node", url};
    if (!key.empty()) full.insert(full.end(), {"--key", key});
    full.insert(full.end(), args.begin(), args.end());
    return run(std::move(full));
  }

  std::string admin_key() const { return (dir / "data" / "admin.key").string(); }

  std::string enroll(const std::string& id, const std::string& role) {
    EXPECT_EQ(cli({"register", "--user", id, "--role", role, "--name", id}).exit_code, 0);
    const std::string key = (dir / (id + ".key")).string();
    EXPECT_EQ(cli({"approve", id, "--out", key}, admin_key()).exit_code, 0);
    return key;
  }

  TempDir dir;
  std::string url;
  std::unique_ptr<testutil::Child> node_;
};

TEST_F(CliAgainstNode, UploadShareFetch) {
  const std::string pat = enroll("pat", "patient");
  const std::string doc = enroll("doc", "physician");
  const auto src = dir / "history.txt";
  std::ofstream(src) << "allergic to nothing";

  auto up = cli({"--json", "upload", src.string(), "--kind", "medical_history"}, pat);
  ASSERT_EQ(up.exit_code, 0) << up.out;
  const std::string hash = careledger::jf::parse(up.out)["content_hash"];

  auto denied = cli({"--json", "fetch", hash}, doc);
  EXPECT_EQ(denied.exit_code, 2);
  EXPECT_EQ(careledger::jf::parse(denied.out)["message"], "User is not valid");

  EXPECT_EQ(cli({"share", hash, "doc"}, pat).exit_code, 0);
  auto got = cli({"fetch", hash}, doc);
  EXPECT_EQ(got.exit_code, 0);
  EXPECT_EQ(got.out, "allergic to nothing");

  auto integ = cli({"--json", "integrity", hash}, doc);
  EXPECT_EQ(integ.exit_code, 0);
  EXPECT_EQ(careledger::jf::parse(integ.out)["message"], "Integrity completed");

  auto verify = cli({"--json", "chain", "verify"});
  EXPECT_EQ(verify.exit_code, 0);
  EXPECT_EQ(careledger::jf::parse(verify.out)["valid"], true);
}

TEST_F(CliAgainstNode, JsonOutputIsCanonical) {
  enroll("doc", "physician");
  const std::string pat = enroll("pat", "patient");
  auto r = cli({"--json", "physicians"}, pat);
  ASSERT_EQ(r.exit_code, 0);
  ASSERT_FALSE(r.out.empty());
  const std::string body = r.out.substr(0, r.out.size() - 1);
  EXPECT_EQ(careledger::canonical(careledger::jf::parse(body)), body);
}

TEST_F(CliAgainstNode, UnknownKeyIsRejected) {
  auto r = cli({"--json", "pending"}, (dir / "missing.key").string());
  EXPECT_EQ(r.exit_code, 4);
}

TEST(Cli, UnreachableNode) {
  auto r = run({kCli, "--node", "http://127.0.0.1:1", "--json", "chain", "verify"});
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Cli, OfflineVerifyReportsFirstBadHeight) {
  TempDir dir;
  {
    testutil::Child node({kNode, "--data-dir", (dir / "data").string(), "--listen",
                          "127.0.0.1:0", "--seal-interval-ms", "0"});
    std::smatch m;
    const std::string line = node.first_line();
    ASSERT_TRUE(std::regex_search(line, m, std::regex(R"(:(\d+) )")));
    const std::string url = "http://127.0.0.1:" + m[1].str();
    for (const char* id : {"a", "b", "c"}) {
      ASSERT_EQ(run({kCli, "--node", url, "register", "--user", id, "--role", "patient",
                     "--name", id})
                    .exit_code,
                0);
    }
    EXPECT_EQ(node.stop(), 0);
  }
  const auto log = dir / "data" / "chain.log";
  auto good = run({kCli, "--json", "chain", "verify", "--log", log.string()});
  EXPECT_EQ(good.exit_code, 0);
  auto replay = run({kCli, "--json", "chain", "replay", "--log", log.string()});
  EXPECT_EQ(replay.exit_code, 0);
  EXPECT_EQ(careledger::jf::parse(replay.out)["height"], 3);

  std::string bytes = careledger::ledger::read_file(log);
  std::size_t pos = 0;
  for (int i = 0; i < 2; ++i) pos = bytes.find('\n', pos) + 1;  // start of height 2
  bytes[pos + 60] ^= 0x04;
  std::ofstream(log, std::ios::binary | std::ios::trunc) << bytes;

  auto bad = run({kCli, "chain", "verify", "--log", log.string()});
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.out.find("first_bad_height=2"), std::string::npos) << bad.out;

  // The node refuses the same directory.
  auto refused = run({kNode, "--data-dir", (dir / "data").string(), "--listen", "127.0.0.1:0"});
  EXPECT_EQ(refused.exit_code, 1);
}

TEST(Cli, SimulatedAmplitudeDoublesMeanAbsDelta) {
  TempDir dir;
  double mad[2] = {0, 0};
  int i = 0;
  for (const char* amp : {"3", "6"}) {
    const auto out = dir / (std::string("m") + amp);
    ASSERT_EQ(run({kCli, "simulate-device", "--patient", "pat", "--dry-run", "--noise-deg", "0",
                   "--amplitude-deg", amp, "--out", out.string()})
                  .exit_code,
              0);
    auto f = run({kCli, "--json", "features", out.string()});
    ASSERT_EQ(f.exit_code, 0);
    const auto fv = careledger::careflow::feature_vector_from_json(
        careledger::jf::parse(f.out)["features"]);
    mad[i++] = fv.mean_abs_delta_deg(0);
  }
  EXPECT_NEAR(mad[0], 1.140021150341113, 1e-12);
  EXPECT_NEAR(mad[1] / mad[0], 2.0, 1e-12);
}

}  // namespace
