// End-to-end checks of the command-line tool: exit codes, output contracts,
// and byte-level reproducibility. Runs the real binary via popen.

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int g_failures = 0;

#define REQUIRE(cond)                                                     \
  do {                                                                    \
    if (!(cond)) {                                                        \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " #cond \
                << "\n";                                                  \
      ++g_failures;                                                       \
    }                                                                     \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(BICM_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  RunResult res;
  if (pipe == nullptr) return res;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string json_body(const std::string& output) {
  const auto pos = output.find('{');
  return pos == std::string::npos ? "" : output.substr(pos);
}

}  // namespace

int main() {
  // Usage and config errors exit with code 2.
  REQUIRE(run("--help").exit_code == 0);
  REQUIRE(run("no-such-subcommand").exit_code == 2);
  REQUIRE(run("gmi --mod 8psk --sigma 1 --samples 20000").exit_code == 2);
  REQUIRE(run("gmi --mod qpsk --sigma 1 --ebn0-db 2 --samples 20000").exit_code == 2);
  REQUIRE(run("gmi --mod qpsk --samples 20000").exit_code == 2);  // no operating point
  REQUIRE(run("threshold --ensemble nonsense").exit_code == 2);

  // A small GMI evaluation: parses, reports config echo, seed, version.
  const std::string gmi_args =
      "gmi --mod qpsk --channel awgn --sigma 0.9 --samples 50000 --seed 7";
  const RunResult r1 = run(gmi_args);
  REQUIRE(r1.exit_code == 0);
  const auto j1 = nlohmann::json::parse(json_body(r1.output));
  REQUIRE(j1.at("seed").get<std::uint64_t>() == 7);
  REQUIRE(j1.at("version").get<std::string>() == "0.1.0");
  REQUIRE(j1.at("config").at("mod").get<std::string>() == "qpsk");
  REQUIRE(j1.at("result").at("gmi").get<double>() > 0.9);
  REQUIRE(j1.at("result").at("gmi").get<double>() < 1.4);
  REQUIRE(j1.at("result").at("gmi_stderr").get<double>() > 0.0);

  // Same config + seed: byte-identical JSON body.
  const RunResult r2 = run(gmi_args);
  REQUIRE(json_body(r1.output) == json_body(r2.output));

  // Different seed changes the Monte-Carlo result.
  const RunResult r3 = run("gmi --mod qpsk --channel awgn --sigma 0.9 --samples 50000 --seed 8");
  REQUIRE(json_body(r3.output) != json_body(r1.output));

  // --out writes the same JSON to a file.
  const RunResult r4 = run(gmi_args + " --out cli_test_out.json");
  REQUIRE(r4.exit_code == 0);
  {
    std::ifstream in("cli_test_out.json");
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(nlohmann::json::parse(content) == j1);
  }
  std::remove("cli_test_out.json");

  // Config file supplies flags; command line overrides.
  {
    std::ofstream cfg("cli_test_cfg.ini");
    cfg << "[gmi]\nmod=qpsk\nsigma=0.9\nsamples=50000\nseed=7\n";
  }
  const RunResult r5 = run("--config cli_test_cfg.ini gmi");
  REQUIRE(r5.exit_code == 0);
  REQUIRE(json_body(r5.output) == json_body(r1.output));
  std::remove("cli_test_cfg.ini");

  if (g_failures == 0) std::cout << "cli_tests: all checks passed\n";
  return g_failures == 0 ? 0 : 1;
}
