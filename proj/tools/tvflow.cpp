#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tvflow/io.hpp"
#include "tvflow/studies.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCertificateFailure = 1;
constexpr int kUsageError = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tvflow::ConfigError(0, "", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_failure(const tvflow::CertificateReport& r) {
  std::printf("FAIL %s at %ld: %s > %s\n", r.name.c_str(), r.location,
              tvflow::format_double(r.value).c_str(), tvflow::format_double(r.tolerance).c_str());
}

int report(const std::vector<tvflow::CertificateReport>& failures) {
  for (const auto& f : failures) print_failure(f);
  return failures.empty() ? kPass : kCertificateFailure;
}

int cmd_run(const std::string& config_path, const std::string& output) {
  const std::string text = read_text(config_path);
  const tvflow::RunSpec spec = tvflow::parse_config(text);
  const std::string dir = output.empty() ? spec.output : output;
  const tvflow::RunOutcome out = tvflow::run_to_directory(spec, text, dir);
  std::printf("steps %zu, output %s\n", out.records.size(), dir.c_str());
  if (out.aborted) std::printf("aborted: %s\n", out.aborted->c_str());
  int code = report(out.failures);
  if (out.aborted && code == kPass) code = kCertificateFailure;
  return code;
}

int cmd_verify(const std::string& dir) {
  const tvflow::VerifyOutcome out = tvflow::verify_directory(dir);
  std::printf("checked %d steps, %zu certificates\n", out.steps_checked, out.reports.size());
  return report(out.failures);
}

int cmd_oracle(int n, int count) {
  const tvflow::OracleBattery b = tvflow::oracle_battery(n, count);
  std::printf("instances %d\nworst_linf_error %s\nworst_gap %s\n", b.instances,
              tvflow::format_double(b.worst_error).c_str(),
              tvflow::format_double(b.worst_gap).c_str());
  if (!b.all_converged) std::printf("FAIL some instances did not reach the gap tolerance\n");
  if (b.worst_error > 1e-6) {
    std::printf("FAIL oracle error %s > 1e-6 on seed %d\n",
                tvflow::format_double(b.worst_error).c_str(), b.worst_instance);
  }
  return b.all_converged && b.worst_error <= 1e-6 ? kPass : kCertificateFailure;
}

int cmd_mollify(const std::string& config_path) {
  const tvflow::RunSpec spec = tvflow::parse_config(read_text(config_path));
  const tvflow::CauchyTable table = tvflow::mollification_study(spec, spec.truncation_levels);
  std::fputs(tvflow::format_cauchy_table(table).c_str(), stdout);
  std::printf("monotone %d\nbounded %d\n", table.monotone ? 1 : 0, table.bounded ? 1 : 0);
  int code = report(table.failures);
  if (!table.bounded) {
    std::printf("FAIL a difference exceeds its source bound\n");
    code = kCertificateFailure;
  }
  return code;
}

int cmd_extinction(const std::string& config_path) {
  const tvflow::RunSpec spec = tvflow::parse_config(read_text(config_path));
  const tvflow::ExtinctionResult res = tvflow::extinction_study(spec);
  std::printf("threshold %s\n", tvflow::format_double(res.threshold).c_str());
  if (res.extinction_time) {
    std::printf("extinction_time %s\n", tvflow::format_double(*res.extinction_time).c_str());
  } else {
    std::printf("extinction_time none (not reached by t_end)\n");
  }
  if (res.predicted) {
    std::printf("predicted %s\n", tvflow::format_double(*res.predicted).c_str());
    if (res.extinction_time && *res.predicted > 0.0) {
      std::printf("relative_error %s\n",
                  tvflow::format_double(std::abs(*res.extinction_time - *res.predicted) /
                                        *res.predicted)
                      .c_str());
    }
  }
  return report(res.failures);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit time stepping for the total variation flow with certified steps"};
  app.require_subcommand(1);
  app.footer(tvflow::config_reference());

  std::string config_path, dir, output;
  int oracle_n = 32, oracle_count = 100;

  auto* run = app.add_subcommand("run", "Run a config and write diagnostics and snapshots");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("-o,--output", output, "Output directory (overrides the config)");

  auto* verify = app.add_subcommand("verify", "Re-check every certificate of a run directory");
  verify->add_option("dir", dir, "Run directory")->required();

  auto* oracle = app.add_subcommand("oracle", "Compare the 1D solver with the exact 1D solution");
  oracle->add_option("n", oracle_n, "Cells per instance")->required()->check(CLI::Range(2, 1 << 20));
  oracle->add_option("seed-count", oracle_count, "Number of random instances")
      ->required()
      ->check(CLI::Range(1, 1 << 24));

  auto* mollify =
      app.add_subcommand("study-mollify", "Cauchy table over truncated sources T_n(f)");
  mollify->add_option("config", config_path, "Config file")->required();

  auto* extinction =
      app.add_subcommand("study-extinction", "Extinction time of the zero-source flow");
  extinction->add_option("config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*run) return cmd_run(config_path, output);
    if (*verify) return cmd_verify(dir);
    if (*oracle) return cmd_oracle(oracle_n, oracle_count);
    if (*mollify) return cmd_mollify(config_path);
    if (*extinction) return cmd_extinction(config_path);
  } catch (const tvflow::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsageError;
  } catch (const tvflow::SnapshotFormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}
