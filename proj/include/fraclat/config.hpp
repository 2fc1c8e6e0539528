#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraclat/continuum.hpp"
#include "fraclat/kernels.hpp"
#include "fraclat/lattice.hpp"

namespace fraclat::config {

enum class Command {
  KernelSpectrum,
  Classify,
  LatticeRun,
  PdeRun,
  CompareDispersion,
  CompareEvolution,
  Divergence
};

std::string to_string(Command c);
Command parse_command(std::string_view text);

// Initial data: mode:j,amp | gaussian:width,amp | random:seed,amp | random:amp
struct Profile {
  enum class Kind { Mode, Gaussian, Random } kind = Kind::Mode;
  double index = 1.0;  // mode index j
  double width = 0.1;  // gaussian width (absolute length)
  std::uint64_t seed = 0;
  bool explicit_seed = false;
  double amplitude = 0.1;

  // u(x) on a ring of circumference length; `seed` is used for random
  // profiles unless the spec carried its own
  double operator()(double x, double length) const;
  std::string to_string() const;
};

Profile parse_profile(std::string_view text);

struct SpectrumSection {
  std::optional<kernels::InteractionKernel> kernel;
  double k_min = 0.0;
  double k_max = 3.14159265358979323846;
  int points = 65;
  bool summation = false;
  long terms = 1000000;
};

struct ClassifySection {
  std::optional<kernels::InteractionKernel> kernel;
  double k_min = 1e-4;
  double k_max = 1e-1;
  int points = 24;
  double threshold = 1e-4;
  double dx = 1.0;
};

struct LatticeSection {
  lattice::LatticeConfig lattice;
  std::optional<double> dt;  // default: 0.1 of the stability limit
  long steps = 1000;
  Profile initial;
  long snapshot_every = 100;
  std::vector<int> modes{1};
};

struct PdeSection {
  continuum::PdeSpec spec;
  int n = 256;
  double length = 6.28318530717958647692;
  double dt = 1e-3;
  long steps = 1000;
  Profile initial;
  long snapshot_every = 100;
  bool spectra = false;
};

struct CompareSection {
  double k_max_fraction = 0.1;
  int points = 64;
  double t_final = 1.0;
  int levels = 3;
  double cfl = 0.05;
  Profile initial;
  double k_min = 1e-4;
  double k_max = 1e-1;
  int window_points = 24;
  double threshold = 1e-4;
};

struct DivergenceSection {
  double alpha = 0.5;
  double g_alpha = 1.0;
  std::vector<double> dx{1e-1, 1e-2, 1e-3, 1e-4};
};

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

struct RunConfig {
  Command command = Command::Classify;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<SpectrumSection> spectrum;
  std::optional<ClassifySection> classify;
  std::optional<LatticeSection> lattice;
  std::optional<PdeSection> pde;
  std::optional<CompareSection> compare;
  std::optional<DivergenceSection> divergence;
  // every key/value as read, in file order (echoed into output metadata)
  std::vector<Entry> entries;
};

// INI-style text:
//   # comment
//   command = lattice-run        (top-level keys: command, output, seed, threads)
//   [lattice]
//   kernel = nearest
// Duplicate keys, unknown sections and unknown keys are errors carrying the
// line number. `command` may be omitted when the caller supplies it.
RunConfig load_config(std::string_view text, std::optional<Command> command = std::nullopt);
RunConfig load_config_file(const std::string& path, std::optional<Command> command = std::nullopt);

}  // namespace fraclat::config
