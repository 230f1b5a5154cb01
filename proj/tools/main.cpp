// qcoin: experiment runner for the quantum perturbed-coin simulator.

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace qcoin::cli;

  CLI::App app{"Quantum-enhanced stochastic simulation of the perturbed coin"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool paper_params = false;
  bool inject_fault = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"futures", "Exact future outcome distributions for an l/m sweep"},
      {"complexity-sweep", "Classical and quantum statistical complexity over m"},
      {"hom-dip", "Two-photon interference dip, optional Poisson noise, visibility fit"},
      {"compare-sweep", "Interference visibility between pairs of processes"},
      {"oracle-check", "Cross-checks between circuit, closed forms and enumeration"},
      {"counts", "Finite-count sampling and classical fidelity to theory"},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (default $QCOIN_OUT_DIR or ./qcoin_out)");
    seed_opts.push_back(sub->add_option("--seed", seed, "Seed override for stochastic commands"));
    sub->add_flag("--paper-params", paper_params,
                  "Use the implemented experimental parameters (complexity-sweep)");
    if (name == "oracle-check") {
      sub->add_flag("--inject-fault", inject_fault, "Perturb one amplitude by 1e-6 (self-test)");
    }
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const std::string& name = commands[i].first;
    RunOptions options;
    options.out_dir = out_dir.empty() ? default_out_dir() : std::filesystem::path(out_dir);
    if (seed_opts[i]->count() > 0) options.seed = seed;
    options.paper_params = paper_params;
    options.inject_fault = inject_fault;

    nlohmann::json config = nlohmann::json::object();
    if (!config_path.empty()) {
      try {
        config = load_config(config_path, name);
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
      }
    }

    const auto result = run_command(name, config, options);
    if (result.report.contains("error")) {
      std::cerr << name << ": " << result.report["error"].get<std::string>() << "\n";
    }
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    if (result.report.contains("checks")) {
      for (const auto& c : result.report["checks"]) {
        std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
                  << " max_abs_deviation=" << c["max_abs_deviation"].get<double>()
                  << " tolerance=" << c["tolerance"].get<double>() << "\n";
      }
    }
    if (result.report.contains("fit") && result.report["fit"].contains("visibility")) {
      const auto& fit = result.report["fit"];
      std::cout << "fitted visibility " << fit["visibility"].get<double>() << " +/- "
                << fit["visibility_sigma"].get<double>() << "\n";
    }
    if (result.report.contains("min_fidelity")) {
      std::cout << "minimum classical fidelity " << result.report["min_fidelity"].get<double>()
                << "\n";
    }
    return result.exit_code;
  }
  return kExitConfigError;
}
