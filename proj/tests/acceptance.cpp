// Acceptance run: one line per criterion, exit 0 iff all pass.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>

#include <sys/wait.h>

#include "lwos/cli.hpp"

#ifndef LWOS_CLI_PATH
#error "LWOS_CLI_PATH must name the lwos executable"
#endif

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

// Runs the CLI; returns its exit status.
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + LWOS_CLI_PATH + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 42;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string report = "acceptance_report.json";
  std::uint64_t determinismReplicas = 2000;
  app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--report", report, "where to write the JSON reports");
  app.add_option("--determinism-replicas", determinismReplicas, "replica override for the determinism check")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  lwos::RunConfig cfg;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.retryOnFail = true;

  bool all = true;
  lwos::VerifyResult result;
  for (const auto& info : lwos::suite_registry()) {
    const auto start = std::chrono::steady_clock::now();
    auto outcome = lwos::run_suite(info, cfg);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t passed = 0;
    double worstP = 1.0;
    for (const auto& r : outcome.reports) {
      passed += r.pass;
      if (r.pvalue) worstP = std::min(worstP, *r.pvalue);
    }
    std::printf("criterion %2d %-18s %s  %zu/%zu checks", info.criterion, info.name.c_str(),
                outcome.pass ? "PASS" : "FAIL", passed, outcome.reports.size());
    if (worstP < 1.0) std::printf(", min p %.4g", worstP);
    if (outcome.attempts > 1) std::printf(", retried");
    std::printf(", %.1f s\n", sec);
    for (const auto& r : outcome.reports) {
      if (!r.pass) std::printf("    failed: %s statistic %.6g %s\n", r.name.c_str(), r.statistic, r.note.c_str());
    }
    std::fflush(stdout);
    all = all && outcome.pass;
    result.suites.push_back(std::move(outcome));
  }
  {
    std::ofstream f(report, std::ios::binary);
    f << lwos::to_json(result, cfg).dump(2) << "\n";
  }

  // Criterion 12: same seed, different thread counts, byte-identical reports.
  {
    const auto start = std::chrono::steady_clock::now();
    const auto dir = std::filesystem::temp_directory_path() / ("lwos_acceptance_" + std::to_string(seed));
    std::filesystem::create_directories(dir);
    const auto a = dir / "threads1.json";
    const auto b = dir / "threads3.json";
    const std::string common = "verify all --seed " + std::to_string(seed) + " --replicas " +
                               std::to_string(determinismReplicas) + " --out ";
    const int ea = run_cli(common + "\"" + a.string() + "\" --threads 1");
    const int eb = run_cli(common + "\"" + b.string() + "\" --threads 3");
    const std::string ra = read_file(a);
    const std::string rb = read_file(b);
    const bool ran = (ea == 0 || ea == 1) && (eb == 0 || eb == 1);
    const bool same = ran && !ra.empty() && ra == rb;
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion 12 %-18s %s  exit codes %d/%d, %zu bytes, %s, %.1f s\n", "determinism", same ? "PASS" : "FAIL",
                ea, eb, ra.size(), same ? "identical" : "different", sec);
    all = all && same;
    std::filesystem::remove_all(dir);
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
