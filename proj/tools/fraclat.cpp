// fraclat command-line front end.
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fraclat/app.hpp"
#include "fraclat/config.hpp"
#include "fraclat/errors.hpp"

using fraclat::config::Command;

namespace {

struct Globals {
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

struct FlagSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> keys;
  void set(const std::string& key, const std::optional<std::string>& v) {
    if (v) keys.emplace_back(key, *v);
  }
  std::string text() const {
    std::string t = "[" + name + "]\n";
    for (const auto& [k, v] : keys) t += k + " = " + v + "\n";
    return t;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range lattice interactions and their fractional continuum limits"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--output", g.output, "output directory");
  app.add_option("--seed", g.seed, "seed for random initial data");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  std::optional<Command> command;
  std::optional<std::string> config_path;
  std::optional<std::string> kernel, kmin, kmax, points, threshold, dx, method, terms;

  auto* classify = app.add_subcommand("classify", "fit the small-k exponent of a kernel and print JSON");
  classify->add_option("--config", config_path, "config file");
  classify->add_option("--kernel", kernel, "kernel spec, e.g. powerlaw:s=1.5");
  classify->add_option("--kmin", kmin);
  classify->add_option("--kmax", kmax);
  classify->add_option("--points", points);
  classify->add_option("--threshold", threshold);
  classify->add_option("--dx", dx, "lattice spacing for the reported k0");
  classify->callback([&] { command = Command::Classify; });

  auto* kernel_cmd = app.add_subcommand("kernel", "kernel utilities");
  kernel_cmd->require_subcommand(1);
  auto* spectrum = kernel_cmd->add_subcommand("spectrum", "tabulate the lattice spectrum");
  spectrum->add_option("--config", config_path, "config file");
  spectrum->add_option("--kernel", kernel, "kernel spec");
  spectrum->add_option("--kmin", kmin);
  spectrum->add_option("--kmax", kmax);
  spectrum->add_option("--points", points);
  spectrum->add_option("--method", method, "closed | sum");
  spectrum->add_option("--terms", terms, "terms for --method sum");
  spectrum->callback([&] { command = Command::KernelSpectrum; });

  auto config_sub = [&](CLI::App* parent, const std::string& name, const std::string& help, Command c) {
    auto* sub = parent->add_subcommand(name, help);
    sub->add_option("--config", config_path, "config file")->required();
    sub->callback([&command, c] { command = c; });
  };
  auto* lattice = app.add_subcommand("lattice", "lattice simulations");
  lattice->require_subcommand(1);
  config_sub(lattice, "run", "integrate a ring of oscillators", Command::LatticeRun);
  auto* pde = app.add_subcommand("pde", "continuum solver");
  pde->require_subcommand(1);
  config_sub(pde, "run", "integrate a continuum equation", Command::PdeRun);
  auto* compare = app.add_subcommand("compare", "lattice against continuum");
  compare->require_subcommand(1);
  config_sub(compare, "dispersion", "compare dispersion relations", Command::CompareDispersion);
  config_sub(compare, "evolution", "compare time evolution under refinement", Command::CompareEvolution);
  config_sub(compare, "divergence", "self-interaction growth in the non-invariant form", Command::Divergence);

  auto* run = app.add_subcommand("run", "run whatever command the config names");
  run->add_option("--config", config_path, "config file")->required();
  run->callback([&] { command = std::nullopt; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  fraclat::config::RunConfig cfg;
  try {
    if (config_path) {
      cfg = fraclat::config::load_config_file(*config_path, command);
    } else if (command == Command::Classify || command == Command::KernelSpectrum) {
      if (!kernel) throw fraclat::ConfigError("--kernel or --config is required");
      FlagSection s{command == Command::Classify ? "classify" : "spectrum", {}};
      s.set("kernel", kernel);
      s.set("k_min", kmin);
      s.set("k_max", kmax);
      s.set("points", points);
      if (command == Command::Classify) {
        s.set("threshold", threshold);
        s.set("dx", dx);
      } else {
        s.set("method", method);
        s.set("terms", terms);
      }
      cfg = fraclat::config::load_config(s.text(), command);
    }
  } catch (const fraclat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fraclat::app::failure;
  }
  if (g.output) cfg.output_dir = *g.output;
  if (g.seed) cfg.seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  return fraclat::app::run(cfg, std::cout, std::cerr);
}
