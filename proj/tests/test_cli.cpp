// Drives the built tetratile binary and checks its outputs against the JSON schemas.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_schema.hpp"
#include "tetratile/report.hpp"

using namespace tetratile;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run tt(const std::string& args) {
  std::string cmd = std::string(TT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json schema(const std::string& name) {
  return json::parse(slurp(fs::path(TT_SCHEMA_DIR) / (name + ".schema.json")));
}

void expect_valid(const json& doc, const std::string& schema_name, const std::string& what = "") {
  auto errors = schema_check::validate(doc, schema(schema_name));
  std::string all;
  for (const auto& e : errors) all += "  " + e + "\n";
  EXPECT_TRUE(errors.empty()) << schema_name << " " << what << "\n" << all;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("tetratile_cli_" + name + "_" + std::to_string(getpid()));
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

const char* kSommervilleEdges = "1,1.1547005383792515,1,1,1.1547005383792515,1";

}  // namespace

TEST(Analyze, SommervilleNo1Tiles) {
  auto r = tt("--format json analyze --edges " + std::string(kSommervilleEdges));
  ASSERT_EQ(r.rc, 0);
  auto j = json::parse(r.out);
  expect_valid(j, "analyze");
  const auto& res = j["result"];
  EXPECT_EQ(res["type"], "b");
  EXPECT_EQ(res["verdict"]["kind"], "tiles");
  EXPECT_NEAR(res["normalized_area"].get<double>(), kSommervilleArea, 1e-9);
}

TEST(Analyze, AnglesInput) {
  auto r = tt("--format json analyze --angles pi/2,pi/3,pi/3,pi/3,pi/3,pi/2");
  ASSERT_EQ(r.rc, 0);
  auto j = json::parse(r.out);
  expect_valid(j, "analyze");
  EXPECT_NEAR(j["result"]["normalized_area"].get<double>(), kSommervilleArea, 1e-9);
  EXPECT_EQ(j["result"]["verdict"]["kind"], "tiles");
}

TEST(Analyze, RegularTetrahedronDoesNotTile) {
  auto r = tt("--format json analyze --edges 1,1,1,1,1,1");
  ASSERT_EQ(r.rc, 0);
  auto j = json::parse(r.out);
  expect_valid(j, "analyze");
  EXPECT_EQ(j["result"]["type"], "a");
  EXPECT_NE(j["result"]["verdict"]["kind"], "tiles");
}

TEST(Analyze, BadInputExitsWithTwo) {
  EXPECT_EQ(tt("analyze --edges 1,1,1,1,1,2").rc, 2);
  EXPECT_EQ(tt("analyze --edges 1,1,1").rc, 2);
  EXPECT_EQ(tt("analyze --edges 1,1,1,1,1,x").rc, 2);
  EXPECT_EQ(tt("analyze --angles pi/0,1,1,1,1,1").rc, 2);
  EXPECT_EQ(tt("analyze --edges 1,1,1,1,1,1 --angles pi/2,pi/2,pi/2,pi/2,pi/2,pi/2").rc, 2);
  EXPECT_EQ(tt("nosuchcommand").rc, 2);
  EXPECT_EQ(tt("").rc, 2);
  EXPECT_EQ(tt("--format yaml analyze --edges 1,1,1,1,1,1").rc, 2);
}

TEST(Search2pin, ElevenCandidatesWithCertificates) {
  auto dir = scratch("search");
  auto r = tt("--format json --out " + dir.string() + " search2pin");
  ASSERT_EQ(r.rc, 0);
  auto j = json::parse(r.out);
  expect_valid(j, "search2pin");
  const auto& res = j["result"];
  EXPECT_EQ(res["count"], 11);
  EXPECT_EQ(res["candidates"].size(), 11u);
  EXPECT_EQ(res["least_area_name"], "Sommerville No. 1");
  EXPECT_NEAR(res["least_area"].get<double>(), kSommervilleArea, 1e-9);
  int certs = 0;
  for (const auto& c : res["candidates"]) {
    if (c["certificate"].is_null()) {
      EXPECT_TRUE(c["tiles"].get<bool>()) << c["name"];
      continue;
    }
    ++certs;
    auto p = dir / c["certificate"].get<std::string>();
    ASSERT_TRUE(fs::exists(p)) << p;
    expect_valid(json::parse(slurp(p)), "nontiling", p.string());
  }
  EXPECT_EQ(certs, 6);
  fs::remove_all(dir);
}

TEST(Goldberg, FamilyMinima) {
  auto r = tt("--format json goldberg --all");
  ASSERT_EQ(r.rc, 0);
  auto j = json::parse(r.out);
  expect_valid(j, "goldberg");
  const double want[] = {7.4126, 8.1090, 8.2732};
  ASSERT_EQ(j["result"]["families"].size(), 3u);
  for (int f = 0; f < 3; ++f) {
    const auto& row = j["result"]["families"][f];
    EXPECT_NEAR(row["area_star"].get<double>(), want[f], 5e-5);
    EXPECT_TRUE(row["certified"].get<bool>());
  }
  EXPECT_EQ(tt("goldberg --family 4").rc, 2);
  EXPECT_EQ(tt("goldberg").rc, 2);
}

TEST(Casework, AbccbbOutputsValidateAndRerunIdentically) {
  auto dir = scratch("casework");
  auto first = tt("--format text --out " + dir.string() + " casework --type abccbb");
  ASSERT_EQ(first.rc, 0);
  auto report = json::parse(slurp(dir / "report.json"));
  expect_valid(report, "casework", "report.json");
  expect_valid(json::parse(slurp(dir / "config.json")), "config", "config.json");
  EXPECT_EQ(report["result"]["total_cases"], 54);
  EXPECT_EQ(report["result"]["survivors"].size(), 2u);
  EXPECT_FALSE(report["result"]["proof_gap"].get<bool>());
  EXPECT_EQ(slurp(dir / "summary.txt"), first.out);
  EXPECT_EQ(render_text(report), first.out);

  int cases = 0;
  for (const auto& e : fs::directory_iterator(dir / "cases")) {
    expect_valid(json::parse(slurp(e.path())), "case", e.path().string());
    ++cases;
  }
  EXPECT_EQ(cases, 54);
  for (const auto& e : fs::directory_iterator(dir / "certificates"))
    expect_valid(json::parse(slurp(e.path())), "certificate", e.path().string());

  auto before = snapshot(dir);
  auto second = tt("--format text --out " + dir.string() + " casework --type abccbb");
  EXPECT_EQ(second.rc, 0);
  EXPECT_EQ(second.out, first.out);
  EXPECT_EQ(snapshot(dir), before);

  // Resume after losing some records reproduces them byte for byte.
  fs::remove(dir / "cases" / "1954.json");
  fs::remove(dir / "certificates" / "1980.json");
  fs::remove(dir / "report.json");
  auto resumed = tt("--format text --out " + dir.string() + " casework --type abccbb --resume");
  EXPECT_EQ(resumed.rc, 0);
  EXPECT_EQ(resumed.out, first.out);
  EXPECT_EQ(snapshot(dir), before);
  fs::remove_all(dir);
}

TEST(Casework, ConfigHandling) {
  auto dir = scratch("config");
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  auto unknown = write("unknown.json", R"({"width_floor": 1e-3, "no_such_key": 1})");
  EXPECT_EQ(tt("--config " + unknown + " goldberg --all").rc, 2);
  auto negative = write("negative.json", R"({"budget": -5})");
  EXPECT_EQ(tt("--config " + negative + " goldberg --all").rc, 2);
  EXPECT_EQ(tt("--config " + (dir / "missing.json").string() + " goldberg --all").rc, 2);

  auto tiny = write("tiny.json", R"({"budget": 3})");
  auto out = dir / "run";
  auto r = tt("--format json --config " + tiny + " --out " + out.string() + " casework --type abccbb");
  EXPECT_EQ(r.rc, 4);
  auto j = json::parse(r.out);
  expect_valid(j, "casework");
  EXPECT_TRUE(j["result"]["proof_gap"].get<bool>());
  EXPECT_TRUE(j["result"]["budget_exhausted"].get<bool>());

  // Resuming into a directory written under another configuration is refused.
  EXPECT_EQ(tt("--out " + out.string() + " casework --type abccbb --resume").rc, 2);
  fs::remove_all(dir);
}

// The text rendering is derived from the JSON report and nothing else.
TEST(Formats, TextIsRenderedFromJson) {
  auto dir = scratch("formats");
  for (std::string cmd : {"analyze --edges " + std::string(kSommervilleEdges), std::string("goldberg --all"),
                          "--out " + dir.string() + " search2pin"}) {
    auto j = tt("--format json " + cmd);
    auto t = tt("--format text " + cmd);
    ASSERT_EQ(j.rc, 0) << cmd;
    ASSERT_EQ(t.rc, 0) << cmd;
    EXPECT_EQ(render_text(json::parse(j.out)), t.out) << cmd;
    auto c = tt("--format csv " + cmd);
    ASSERT_EQ(c.rc, 0);
    EXPECT_EQ(render_csv(json::parse(j.out)), c.out) << cmd;
  }
  fs::remove_all(dir);
}

// The validator must reject broken documents, otherwise the checks above prove nothing.
TEST(Schemas, ValidatorRejectsBrokenReports) {
  auto r = tt("--format json analyze --edges 1,1,1,1,1,1");
  ASSERT_EQ(r.rc, 0);
  auto good = json::parse(r.out);
  auto s = schema("analyze");
  EXPECT_TRUE(schema_check::validate(good, s).empty());

  auto missing = good;
  missing["result"].erase("type");
  EXPECT_FALSE(schema_check::validate(missing, s).empty());
  auto extra = good;
  extra["result"]["surprise"] = 1;
  EXPECT_FALSE(schema_check::validate(extra, s).empty());
  auto wrong = good;
  wrong["schema"] = "tetratile.analyze/2";
  EXPECT_FALSE(schema_check::validate(wrong, s).empty());
  auto typed = good;
  typed["result"]["volume"] = "big";
  EXPECT_FALSE(schema_check::validate(typed, s).empty());
}
