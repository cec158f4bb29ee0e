#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifndef STABFORGE_BIN
#error "STABFORGE_BIN must point at the command-line binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + STABFORGE_BIN + " " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, k);
  const int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("classify writes the golden bytes") {
  auto r = run("classify --p 2 --n 2 --u-mod 5");
  CHECK(r.code == 0);
  CHECK(r.out == read_file("tests/golden/gn_p2_n2_u5.json"));
  auto s = run("classify --sn --p 3 --n 6");
  CHECK(s.out == read_file("tests/golden/sn_p3_n6.json"));
}

TEST_CASE("table output and scans are deterministic") {
  auto a = run("--format table classify --scan");
  auto b = run("classify --scan --format table");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("p\tn\tu\tlabel", 0) == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') > 300);
}

TEST_CASE("classify with a full unit") {
  CHECK(run("classify --p 3 --n 2 --u-mod 1 --u 10").code == 0);
  CHECK(run("classify --p 3 --n 2 --u-mod 1 --u 5").code == 2);
  CHECK(run("classify --p 11 --n 2 --u-mod 1").code == 2);
  auto j = nlohmann::json::parse(run("classify --abelian --p 2 --n 2").out);
  CHECK(j["pairs"].size() == 5);
}

TEST_CASE("epsilon expansions") {
  auto r = run("epsilon --p 3 --alpha 2");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  std::vector<int> head;
  for (int i = 0; i < 5; ++i) head.push_back(j["minus_eps"]["signed_digits"][i].get<int>());
  CHECK(head == std::vector<int>{1, 0, 0, 1, -1});
  auto e = nlohmann::json::parse(run("epsilon --p 2 --alpha 3").out);
  std::vector<int> d;
  for (int i = 0; i < 8; ++i) d.push_back(e["eps"]["digits"][i].get<int>());
  CHECK(d == std::vector<int>{1, 0, 1, 0, 1, 1, 1, 0});
}

TEST_CASE("verify scripts") {
  CHECK(run("verify data/q8.rel").code == 0);
  CHECK(run("verify data/c3_normalizer.rel").code == 0);
  const std::string bad = "/tmp/stabforge_cli_bad.rel";
  std::ofstream(bad) << "params p=2 n=2 u=1\ncheck S * omega == omega * S\n";
  auto r = run("verify " + bad);
  CHECK(r.code == 1);
  CHECK(r.out.find("\"fails\"") != std::string::npos);
  CHECK(run("verify /nonexistent/file.rel").code == 2);
}

TEST_CASE("membership, r1 and cohomology") {
  CHECK(run("membership --p 3 --alpha 2 --k 3 --eps --u 1").code == 1);
  CHECK(run("membership --p 2 --alpha 3 --k 4 --eps --u 1").code == 1);
  CHECK(run("membership --p 3 --alpha 2 --k 2 --eps --u 1").code == 0);
  CHECK(run("membership --p 3 --alpha 2 --k 3 --elem \"pi^0 * [1]\"").code == 0);
  auto r1 = nlohmann::json::parse(run("r1 --p 3 --n 6 --alpha 2 --d 2 --u 4").out);
  CHECK(r1["max"] == 2);
  auto c = nlohmann::json::parse(run("cohomology --rank 1 --torsion 4 --action \"1,1;0,-1\" --order 2").out);
  CHECK(c["H_odd"]["factors"].empty());
  CHECK(c["H_even"]["factors"] == nlohmann::json::array({"2"}));
  CHECK(run("cohomology --torsion 5 --action \"2\" --order 2").code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("classify --n 2").code == 2);
  CHECK(run("classify --p 3 --n 2 --u-mod 1", "STABFORGE_PREC_OVERRIDE=x").code == 0);
  CHECK(run("verify data/q8.rel", "STABFORGE_PREC_OVERRIDE=x").code == 2);
  CHECK(run("verify data/q8.rel", "STABFORGE_PREC_OVERRIDE=8").code == 0);
}
