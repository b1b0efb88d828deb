// lwos: closed forms, samplers and the verification suite.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "lwos/cli.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicas;
  std::optional<double> gridStep;
  double vMax = 8.0;
  double levelCap = 12.0;
  double safety = 2.0;
  std::string format;
  std::string out;
  unsigned threads = 1;
  bool retryOnFail = false;
  bool timing = false;
  lwos::Params params;
};

lwos::RunConfig to_config(const Options& o) {
  lwos::RunConfig cfg;
  cfg.seed = o.seed.value_or(0);
  cfg.replicas = o.replicas;
  cfg.gridStep = o.gridStep;
  cfg.vMax = o.vMax;
  cfg.levelCap = o.levelCap;
  cfg.safety = o.safety;
  cfg.threads = o.threads;
  cfg.retryOnFail = o.retryOnFail;
  cfg.timing = o.timing;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw lwos::UsageError(e.what());
  }
  return cfg;
}

lwos::OutputFormat format_of(const Options& o, lwos::OutputFormat fallback) {
  if (o.format.empty()) return fallback;
  return o.format == "csv" ? lwos::OutputFormat::csv : lwos::OutputFormat::json;
}

// Writes through a temporary stream and reports I/O failures.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void add_common(CLI::App* cmd, Options& o, bool simulation) {
  cmd->add_option("--seed", o.seed, "master seed (64-bit)");
  cmd->add_option("--replicas", o.replicas, simulation ? "number of replicas" : "override every per-check replica count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-step", o.gridStep, "grid step for BESQ paths")->check(CLI::PositiveNumber);
  cmd->add_option("--v-max", o.vMax, "top level for level-indexed samplers")->check(CLI::PositiveNumber);
  cmd->add_option("--level-cap", o.levelCap, "level cap for branching runs")->check(CLI::PositiveNumber);
  cmd->add_option("--safety", o.safety, "Bessel switch level as a multiple of the target (>= 1)")
      ->check(CLI::Range(1.0, 1e6));
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_flag("--timing", o.timing, "record runtimeMs in reports");
}

void add_io(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output file (default standard output)");
}

void add_law_params(CLI::App* cmd, Options& o) {
  for (const char* name : {"k", "v", "z", "K", "s", "x", "t", "u", "n", "N", "lambda"}) {
    cmd->add_option(std::string("--") + name, o.params[name], "value, list a,b,c or range a..b[:step]");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lwos: order statistics of the Laplace walk - closed forms, samplers, verification"};
  app.require_subcommand(1);
  Options o;

  std::string law;
  auto* exact = app.add_subcommand("exact", "print a table of a closed-form law");
  exact->add_option("law", law, "law name (see 'lwos list')")->required();
  add_law_params(exact, o);
  add_io(exact, o);

  std::string sampler;
  auto* simulate = app.add_subcommand("simulate", "dump samples, one row per replica or per point");
  simulate->add_option("sampler", sampler, "sampler name (see 'lwos list')")->required();
  add_common(simulate, o, true);
  add_law_params(simulate, o);
  add_io(simulate, o);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run verification suites; exit 0 iff every check passes");
  verify->add_option("suite", suite, "suite name or 'all'");
  add_common(verify, o, false);
  verify->add_flag("--retry-on-fail", o.retryOnFail, "rerun a failing suite once with a derived seed");
  add_io(verify, o);

  auto* list = app.add_subcommand("list", "list laws, samplers and suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*list) {
      std::cout << "laws:\n";
      for (const auto& l : lwos::law_registry()) std::cout << "  " << l.name << "  " << l.usage << "\n";
      std::cout << "samplers:\n";
      for (const auto& s : lwos::sampler_registry()) std::cout << "  " << s.name << "  " << s.usage << "\n";
      std::cout << "suites:\n";
      for (const auto& s : lwos::suite_registry())
        std::cout << "  " << s.name << "  (criterion " << s.criterion << ") " << s.summary << "\n";
      return kExitPass;
    }
    if (*exact) {
      const auto table = lwos::cmd_exact(law, o.params);
      const auto f = format_of(o, lwos::OutputFormat::csv);
      emit(o.out, [&](std::ostream& os) { lwos::write_table(os, table, f); });
      return kExitPass;
    }
    if (*simulate) {
      if (!o.seed) throw lwos::UsageError("simulate needs --seed");
      const auto cfg = to_config(o);
      const auto table = lwos::cmd_simulate(sampler, o.params, cfg);
      const auto f = format_of(o, lwos::OutputFormat::csv);
      emit(o.out, [&](std::ostream& os) { lwos::write_table(os, table, f); });
      return kExitPass;
    }
    if (*verify) {
      const auto cfg = to_config(o);
      std::vector<const lwos::SuiteInfo*> selected;
      try {
        selected = lwos::resolve_suites(suite);
      } catch (const std::invalid_argument&) {
        lwos::cmd_verify(suite, cfg);  // throws the usage error listing the suites
      }
      for (const auto* s : selected) {
        if (s->random && !o.seed) throw lwos::UsageError("suite '" + s->name + "' is randomized and needs --seed");
      }
      const auto result = lwos::cmd_verify(suite, cfg, [](const lwos::SuiteOutcome& s) {
        std::size_t failed = 0;
        for (const auto& r : s.reports) failed += !r.pass;
        std::cerr << (s.pass ? "[pass] " : "[FAIL] ") << s.name << " (criterion " << s.criterion << "): "
                  << s.reports.size() - failed << "/" << s.reports.size() << " checks"
                  << (s.attempts > 1 ? ", retried" : "") << "\n";
      });
      const auto f = format_of(o, lwos::OutputFormat::json);
      emit(o.out, [&](std::ostream& os) { lwos::write_reports(os, result, cfg, f); });
      return result.pass() ? kExitPass : kExitFail;
    }
  } catch (const lwos::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
