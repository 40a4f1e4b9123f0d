// kpi-lab: command line front end for the experiment engines.
//
// Exit codes: 0 ok, 2 configuration or argument error, 3 numerical
// consistency error (including non-convergence), 1 anything else.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kpi/errors.hpp"
#include "kpi/experiments.hpp"

namespace {

struct Subcommand {
  std::string name;
  std::string kind;
  std::string help;
  std::vector<std::string> keys;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> list{
      {"evolve", "evolve", "Evolve a field exactly in Fourier space",
       {"nx", "ny", "K", "L", "alpha", "lambda", "times", "input"}},
      {"observe", "observe", "Observability Gramian blocks and the observability constant",
       {"nx", "ny", "K", "L", "alpha", "lambda", "T", "control", "a", "b", "profile",
        "check_panels"}},
      {"gramian", "gramian", "Assemble one Gramian block",
       {"nx", "ny", "K", "L", "alpha", "lambda", "T", "control", "a", "b", "profile", "index"}},
      {"control", "control", "HUM control synthesis and verification",
       {"nx", "ny", "K", "L", "alpha", "lambda", "T", "control", "a", "b", "profile", "tol",
        "max_iter", "samples", "input", "target", "verify", "verify_steps"}},
      {"dichotomy", "dichotomy", "Wave-packet ratio sequence",
       {"alpha", "T", "n_first", "n_last", "b", "B", "beta"}},
      {"spectral-constant", "spectral-constant", "Spectral constant kappa(m0) in high precision",
       {"nx", "a", "b", "profile", "m0_max"}},
      {"dispersion", "dispersion", "Tabulate the reduced dispersion symbol",
       {"alpha", "lambda", "xi_min", "xi_max", "points"}},
  };
  return list;
}

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const kpi::ConfigError& x) {
    std::cerr << "config error: " << x.what() << '\n';
    return 2;
  } catch (const kpi::ParameterError& x) {
    std::cerr << "parameter error: " << x.what() << '\n';
    return 2;
  } catch (const kpi::DimensionError& x) {
    std::cerr << "dimension error: " << x.what() << '\n';
    return 2;
  } catch (const kpi::ConstraintError& x) {
    std::cerr << "constraint error: " << x.what() << '\n';
    return 2;
  } catch (const kpi::DomainError& x) {
    std::cerr << "domain error: " << x.what() << '\n';
    return 2;
  } catch (const kpi::NonConvergenceError& x) {
    std::cerr << "no convergence: " << x.what() << '\n';
    return 3;
  } catch (const kpi::NumericalConsistencyError& x) {
    std::cerr << "numerical consistency error: " << x.what() << '\n';
    return 3;
  } catch (const std::exception& x) {
    std::cerr << "error: " << x.what() << '\n';
    return 1;
  }
}

void print_records(const std::vector<kpi::RunRecord>& records, const std::string& root) {
  for (const auto& r : records) {
    std::cout << r.name << " (" << r.kind << "): " << r.status << " in " << r.seconds << " s\n";
  }
  std::cout << "outputs under " << root << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpi-lab: dispersive KP-I observability and control experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output;
  app.add_option("--seed", seed, "Random seed (overrides [global] seed)");
  app.add_option("--threads", threads, "Worker threads (0 = hardware)");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "bin"}));
  app.add_option("--output", output, "Output root (default $KPI_OUTPUT_ROOT or ./kpi-out)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run every experiment in a config file");
  run->add_option("config", config_path, "Config file")->required();

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> apps;
  for (const auto& sc : subcommands()) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    apps[sc.name] = sub;
    for (const auto& key : sc.keys) {
      sub->add_option("--" + key, values[sc.name][key], key);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    kpi::RunOptions options;
    options.root = output.empty() ? kpi::output_root_from_env() : std::filesystem::path(output);
    options.format = kpi::parse_format(format);
    options.seed = seed;
    options.seed_overridden = app.count("--seed") > 0;
    options.threads = threads;

    std::string text;
    if (run->parsed()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw kpi::ConfigError("cannot open config '" + config_path + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    } else {
      for (const auto& sc : subcommands()) {
        CLI::App* sub = apps[sc.name];
        if (!sub->parsed()) continue;
        std::ostringstream ss;
        ss << "[" << sc.name << "]\nkind = " << sc.kind << "\n";
        for (const auto& key : sc.keys) {
          if (sub->count("--" + key) > 0) ss << key << " = " << values[sc.name][key] << "\n";
        }
        text = ss.str();
      }
    }
    const auto records = kpi::run_experiment(text, options);
    print_records(records, options.root.string());
    return 0;
  } catch (...) {
    return exit_code_for(std::current_exception());
  }
}
