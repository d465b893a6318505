// billiard: command-line front end for the open-cavity transport pipelines.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "billiard/commands.hpp"
#include "billiard/error.hpp"
#include "billiard/io.hpp"

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("-c,--config", common.config_path, "JSON config file (defaults apply when omitted)");
  sub->add_option("--set", common.overrides, "Override a config key, e.g. --set basis.m_max=40")->take_all();
}

billiard::RunConfig load(const Common& common) {
  billiard::RunConfig config;
  if (!common.config_path.empty()) config = billiard::RunConfig::load(common.config_path);
  for (const auto& o : common.overrides) config.apply_override(o);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-billiard transport: cavity eigenmodes, R/S-matrix sweeps, length spectra"};
  app.set_version_flag("--version", billiard::library_version());
  app.require_subcommand(1);

  Common common;
  auto* solve = app.add_subcommand("solve-cavity", "Assemble and diagonalise the cavity (cached)");
  auto* sweep = app.add_subcommand("sweep", "Conductance versus k over sweep.k_min..k_max");
  auto* spectrum = app.add_subcommand("spectrum", "Power and t11 length spectra over the configured windows");
  auto* oned = app.add_subcommand("validate-1d", "Step-barrier R-matrix vs analytic transmission");
  auto* validate = app.add_subcommand("validate", "Run the oracle suite and write a JSON report");
  auto* two_body = app.add_subcommand("two-body", "Interacting pair energies in the lowest cavity states");
  auto* dump = app.add_subcommand("print-config", "Print the effective config as JSON");
  for (auto* sub : {solve, sweep, spectrum, oned, validate, two_body, dump}) add_common(sub, common);

  double self_test = 0.0;
  spectrum->add_option("--self-test", self_test,
                       "Transform exp(i k L0) instead of cavity data and report the peak position");
  std::string fault;
  validate->add_option("--inject-fault", fault, "Negative control (cross-sign)")->check(CLI::IsMember({"cross-sign"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const billiard::RunConfig config = load(common);
    auto& log = std::cerr;
    if (*dump) {
      std::cout << config.to_json() << '\n';
    } else if (*solve) {
      billiard::cmd_solve_cavity(config, log);
    } else if (*sweep) {
      billiard::cmd_sweep(config, log);
    } else if (*spectrum) {
      if (self_test > 0.0) {
        const double found = billiard::spectrum_self_test(config, self_test);
        std::cout << "self-test L0=" << billiard::format_double(self_test)
                  << " peak=" << billiard::format_double(found) << '\n';
        return std::abs(found - self_test) < 0.05 ? 0 : 1;
      }
      const auto report = billiard::cmd_spectrum(config, log);
      for (const auto& w : report.windows) {
        std::cout << "window " << w.window.k_min << ".." << w.window.k_max << " leading peaks:";
        for (const auto& p : billiard::leading_peaks(w.peaks, 5)) std::cout << ' ' << billiard::format_double(p.position);
        std::cout << '\n';
      }
    } else if (*oned) {
      const double worst = billiard::cmd_validate_1d(config, log);
      return worst <= 1e-3 ? 0 : 1;
    } else if (*validate) {
      billiard::ValidationOptions options;
      options.inject_cross_term_fault = fault == "cross-sign";
      options.threads = config.threads;
      const auto report = billiard::cmd_validate(config, options, log);
      std::cout << report.to_json() << '\n';
      return report.passed() ? 0 : 1;
    } else if (*two_body) {
      billiard::cmd_two_body(config, log);
    }
  } catch (const billiard::InvalidInput& e) {
    std::cerr << "billiard: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "billiard: error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
