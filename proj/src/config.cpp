#include "fraclat/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fraclat/errors.hpp"
#include "fraclat/fft.hpp"
#include "fraclat/special.hpp"

namespace fraclat::config {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) break;
    s = s.substr(p + 1);
  }
  return out;
}

bool parse_double(std::string_view s, double& v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
}

template <class Int>
bool parse_int(std::string_view s, Int& v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Keys of one [section]; every lookup marks the key as consumed.
class Section {
 public:
  Section(std::string name, int line) : name_(std::move(name)), line_(line) {}

  void add(const Entry& e) {
    auto [it, fresh] = kv_.emplace(e.key, e);
    if (!fresh)
      throw ConfigError("duplicate key (first set on line " + std::to_string(it->second.line) + ")", e.line,
                        field(e.key));
  }

  const std::string& name() const { return name_; }
  int line() const { return line_; }
  std::string field(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  const Entry* find(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  int line_of(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? line_ : it->second.line;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(msg, line_of(key), field(key));
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw ConfigError("required key is missing", line_, field(key));
    return *e;
  }

  double number(const std::string& key, double fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    return number_of(*e);
  }
  double number(const std::string& key) { return number_of(require(key)); }

  std::optional<double> maybe_number(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return number_of(*e);
  }

  template <class Int>
  Int integer(const std::string& key, Int fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    Int v{};
    if (!parse_int(e->value, v)) throw ConfigError("expected an integer, got '" + e->value + "'", e->line, field(key));
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    throw ConfigError("expected true or false, got '" + e->value + "'", e->line, field(key));
  }

  // Runs a parser on the value and turns its DomainError into a located error.
  template <class Fn>
  auto parsed(const std::string& key, Fn fn) -> decltype(fn(std::string_view{})) {
    const Entry& e = require(key);
    try {
      return fn(e.value);
    } catch (const DomainError& err) {
      throw ConfigError(err.what(), e.line, field(key));
    }
  }

  void forbid_unused() const {
    for (const auto& [key, e] : kv_)
      if (!used_.count(key)) throw ConfigError("unknown key", e.line, field(key));
  }

 private:
  double number_of(const Entry& e) const {
    double v = 0.0;
    if (!parse_double(e.value, v)) throw ConfigError("expected a finite number, got '" + e.value + "'", e.line, field(e.key));
    return v;
  }

  std::string name_;
  int line_;
  std::map<std::string, Entry> kv_;
  std::set<std::string> used_;
};

void check(bool ok, Section& s, const std::string& key, const std::string& msg) {
  if (!ok) s.fail(key, msg);
}

kernels::InteractionKernel read_kernel(Section& s) {
  return s.parsed("kernel", [](std::string_view v) { return kernels::InteractionKernel::parse(v); });
}

Profile read_profile(Section& s, const Profile& fallback) {
  if (!s.has("initial")) return fallback;
  return s.parsed("initial", [](std::string_view v) { return parse_profile(v); });
}

SpectrumSection read_spectrum(Section& s) {
  SpectrumSection out;
  out.kernel = read_kernel(s);
  out.k_min = s.number("k_min", out.k_min);
  out.k_max = s.number("k_max", out.k_max);
  out.points = s.integer<int>("points", out.points);
  const std::string method = s.text("method", "closed");
  out.terms = s.integer<long>("terms", out.terms);
  check(method == "closed" || method == "sum", s, "method", "must be 'closed' or 'sum'");
  out.summation = method == "sum";
  check(out.k_min <= out.k_max, s, "k_max", "must not be below k_min");
  check(out.points >= 1, s, "points", "must be at least 1");
  check(out.terms >= 1, s, "terms", "must be at least 1");
  return out;
}

ClassifySection read_classify(Section& s) {
  ClassifySection out;
  out.kernel = read_kernel(s);
  out.k_min = s.number("k_min", out.k_min);
  out.k_max = s.number("k_max", out.k_max);
  out.points = s.integer<int>("points", out.points);
  out.threshold = s.number("threshold", out.threshold);
  out.dx = s.number("dx", out.dx);
  check(out.k_min > 0, s, "k_min", "must be positive");
  check(out.k_max > out.k_min && out.k_max <= 0.5, s, "k_max", "must satisfy k_min < k_max <= 0.5");
  check(out.points >= 8, s, "points", "must be at least 8");
  check(out.threshold > 0, s, "threshold", "must be positive");
  check(out.dx > 0, s, "dx", "must be positive");
  return out;
}

LatticeSection read_lattice(Section& s) {
  LatticeSection out;
  auto& c = out.lattice;
  c.kernel = read_kernel(s);
  c.n_sites = s.integer<int>("n_sites", c.n_sites);
  check(fft::is_power_of_two(c.n_sites) && c.n_sites >= 16, s, "n_sites",
        "must be a power of two >= 16 (got " + std::to_string(c.n_sites) + ")");
  c.dx = s.number("dx");
  check(c.dx > 0, s, "dx", "must be positive");
  c.coupling = s.number("g");
  const std::string form = s.text("form", "invariant");
  check(form == "invariant" || form == "noninvariant", s, "form", "must be 'invariant' or 'noninvariant'");
  c.form = form == "invariant" ? lattice::InteractionForm::Invariant : lattice::InteractionForm::NonInvariant;
  if (s.has("nonlinearity")) c.nonlinearity = s.parsed("nonlinearity", [](std::string_view v) { return parse_nonlinearity(v); });
  if (s.has("force")) c.force = s.parsed("force", [](std::string_view v) { return parse_force(v); });
  const std::string order = s.text("order", "second");
  check(order == "first" || order == "second", s, "order", "must be 'first' or 'second'");
  c.order = order == "first" ? lattice::TimeOrder::First : lattice::TimeOrder::Second;
  const std::string ring = s.text("ring", "periodized");
  check(ring == "periodized" || ring == "truncated", s, "ring", "must be 'periodized' or 'truncated'");
  c.ring = ring == "periodized" ? lattice::RingCoupling::Periodized : lattice::RingCoupling::Truncated;
  out.dt = s.maybe_number("dt");
  if (out.dt) check(*out.dt > 0, s, "dt", "must be positive");
  out.steps = s.integer<long>("steps", out.steps);
  check(out.steps >= 0, s, "steps", "must be nonnegative");
  out.snapshot_every = s.integer<long>("snapshot_every", out.snapshot_every);
  check(out.snapshot_every >= 1, s, "snapshot_every", "must be at least 1");
  out.initial = read_profile(s, out.initial);
  if (s.has("modes")) {
    out.modes.clear();
    const Entry& e = s.require("modes");
    for (const auto& item : split(e.value, ',')) {
      int j = 0;
      if (!parse_int(item, j)) throw ConfigError("expected a list of mode indices", e.line, s.field("modes"));
      out.modes.push_back(j);
    }
  }
  for (int j : out.modes)
    check(j >= 1 && j <= c.n_sites / 2, s, "modes", "mode indices must lie in [1, n_sites/2]");
  return out;
}

PdeSection read_pde(Section& s) {
  PdeSection out;
  const std::string family = s.parsed("family", [](std::string_view v) { return std::string(v); });
  auto order = [&](double fallback) {
    const double a = s.number("alpha", fallback);
    check(a > 0 && a <= 2, s, "alpha", "must lie in (0, 2]");
    return a;
  };
  auto f_and_force = [&](Nonlinearity& f, OnSiteForce& force) {
    if (s.has("nonlinearity")) f = s.parsed("nonlinearity", [](std::string_view v) { return parse_nonlinearity(v); });
    if (s.has("force")) force = s.parsed("force", [](std::string_view v) { return parse_force(v); });
  };
  if (family == "wave") {
    continuum::FractionalWave w;
    w.alpha = order(2.0);
    w.ga = s.number("ga");
    f_and_force(w.f, w.force);
    out.spec = w;
  } else if (family == "diffusion") {
    continuum::FractionalDiffusion d;
    d.alpha = order(2.0);
    d.ga = s.number("ga");
    f_and_force(d.f, d.force);
    out.spec = d;
  } else if (family == "burgers") {
    continuum::Burgers b;
    b.g1 = s.number("g1", b.g1);
    b.g2 = s.number("g2", b.g2);
    if (s.has("alpha")) b.alpha = order(2.0);
    out.spec = b;
  } else if (family == "kdv") {
    continuum::KdV k;
    k.g1 = s.number("g1", k.g1);
    k.g3 = s.number("g3", k.g3);
    if (s.has("alpha")) k.alpha = order(2.0);
    out.spec = k;
  } else if (family == "boussinesq") {
    continuum::Boussinesq b;
    b.g2 = s.number("g2", b.g2);
    b.g4 = s.number("g4", b.g4);
    b.gprime = s.number("gprime", b.gprime);
    out.spec = b;
  } else if (family == "nls") {
    continuum::FractionalNLS n;
    n.alpha = order(2.0);
    n.g = s.number("g", n.g);
    n.omega0 = s.number("omega0", n.omega0);
    n.b = {s.number("b_re", 0.0), s.number("b_im", 0.0)};
    out.spec = n;
  } else {
    s.fail("family", "must be one of wave, diffusion, burgers, kdv, boussinesq, nls (got '" + family + "')");
  }
  out.n = s.integer<int>("n", out.n);
  check(fft::is_power_of_two(out.n) && out.n >= 16, s, "n", "must be a power of two >= 16 (got " + std::to_string(out.n) + ")");
  out.length = s.number("length", out.length);
  check(out.length > 0, s, "length", "must be positive");
  out.dt = s.number("dt", out.dt);
  check(out.dt > 0, s, "dt", "must be positive");
  out.steps = s.integer<long>("steps", out.steps);
  check(out.steps >= 0, s, "steps", "must be nonnegative");
  out.snapshot_every = s.integer<long>("snapshot_every", out.snapshot_every);
  check(out.snapshot_every >= 1, s, "snapshot_every", "must be at least 1");
  out.spectra = s.boolean("spectra", out.spectra);
  out.initial = read_profile(s, out.initial);
  return out;
}

CompareSection read_compare(Section& s) {
  CompareSection out;
  out.k_max_fraction = s.number("k_max_fraction", out.k_max_fraction);
  check(out.k_max_fraction > 0 && out.k_max_fraction <= 1, s, "k_max_fraction", "must lie in (0, 1]");
  out.points = s.integer<int>("points", out.points);
  check(out.points >= 2, s, "points", "must be at least 2");
  out.t_final = s.number("t_final", out.t_final);
  check(out.t_final > 0, s, "t_final", "must be positive");
  out.levels = s.integer<int>("levels", out.levels);
  check(out.levels >= 3 && out.levels <= 12, s, "levels", "must lie in [3, 12]");
  out.cfl = s.number("cfl", out.cfl);
  check(out.cfl > 0 && out.cfl <= 1, s, "cfl", "must lie in (0, 1]");
  out.initial = read_profile(s, out.initial);
  out.k_min = s.number("k_min", out.k_min);
  out.k_max = s.number("k_max", out.k_max);
  check(out.k_min > 0, s, "k_min", "must be positive");
  check(out.k_max > out.k_min && out.k_max <= 0.5, s, "k_max", "must satisfy k_min < k_max <= 0.5");
  out.window_points = s.integer<int>("window_points", out.window_points);
  check(out.window_points >= 8, s, "window_points", "must be at least 8");
  out.threshold = s.number("threshold", out.threshold);
  check(out.threshold > 0, s, "threshold", "must be positive");
  return out;
}

DivergenceSection read_divergence(Section& s) {
  DivergenceSection out;
  out.alpha = s.number("alpha");
  check(out.alpha > 0 && out.alpha < 2 && out.alpha != 1.0, s, "alpha", "must lie in (0, 2) and differ from 1");
  out.g_alpha = s.number("g_alpha", out.g_alpha);
  check(out.g_alpha > 0, s, "g_alpha", "must be positive");
  if (s.has("dx")) {
    const Entry& e = s.require("dx");
    out.dx.clear();
    for (const auto& item : split(e.value, ',')) {
      double v = 0;
      if (!parse_double(item, v)) throw ConfigError("expected a comma-separated list of numbers", e.line, s.field("dx"));
      out.dx.push_back(v);
    }
  }
  check(out.dx.size() >= 4, s, "dx", "needs at least four values");
  for (size_t i = 0; i < out.dx.size(); ++i) {
    check(out.dx[i] > 0, s, "dx", "values must be positive");
    if (i) check(out.dx[i] < out.dx[i - 1], s, "dx", "values must decrease");
  }
  check(out.dx.front() / out.dx.back() >= 100.0, s, "dx", "values must span at least two decades");
  return out;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::KernelSpectrum: return "kernel-spectrum";
    case Command::Classify: return "classify";
    case Command::LatticeRun: return "lattice-run";
    case Command::PdeRun: return "pde-run";
    case Command::CompareDispersion: return "compare-dispersion";
    case Command::CompareEvolution: return "compare-evolution";
    case Command::Divergence: return "divergence";
  }
  return "?";
}

Command parse_command(std::string_view text) {
  for (Command c : {Command::KernelSpectrum, Command::Classify, Command::LatticeRun, Command::PdeRun,
                    Command::CompareDispersion, Command::CompareEvolution, Command::Divergence})
    if (to_string(c) == text) return c;
  throw DomainError("unknown command '" + std::string(text) + "'");
}

double Profile::operator()(double x, double length) const {
  switch (kind) {
    case Kind::Mode:
      return amplitude * std::cos(special::two_pi * index * x / length);
    case Kind::Gaussian: {
      const double z = (x - 0.5 * length) / width;
      return amplitude * std::exp(-0.5 * z * z);
    }
    case Kind::Random: {
      // smooth random data: the lowest eight ring modes with 1/j decay
      std::mt19937_64 rng(seed);
      auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
      double u = 0.0;
      for (int j = 1; j <= 8; ++j) {
        const double a = unit(), b = unit();
        const double phase = special::two_pi * j * x / length;
        u += (a * std::cos(phase) + b * std::sin(phase)) / j;
      }
      return amplitude * u;
    }
  }
  return 0.0;
}

std::string Profile::to_string() const {
  switch (kind) {
    case Kind::Mode: return "mode:" + fmt(index) + "," + fmt(amplitude);
    case Kind::Gaussian: return "gaussian:" + fmt(width) + "," + fmt(amplitude);
    case Kind::Random: return "random:" + std::to_string(seed) + "," + fmt(amplitude);
  }
  return "?";
}

Profile parse_profile(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("initial condition: expected kind:args, got '" + std::string(text) + "'");
  const std::string kind(text.substr(0, colon));
  const auto args = split(text.substr(colon + 1), ',');
  auto num = [&](size_t i) {
    double v = 0;
    if (!parse_double(args[i], v)) throw DomainError("initial condition: bad number '" + args[i] + "'");
    return v;
  };
  Profile p;
  if (kind == "mode" && args.size() == 2) {
    p.kind = Profile::Kind::Mode;
    p.index = num(0);
    p.amplitude = num(1);
  } else if (kind == "gaussian" && args.size() == 2) {
    p.kind = Profile::Kind::Gaussian;
    p.width = num(0);
    p.amplitude = num(1);
    if (!(p.width > 0)) throw DomainError("initial condition: gaussian width must be positive");
  } else if (kind == "random" && (args.size() == 1 || args.size() == 2)) {
    p.kind = Profile::Kind::Random;
    if (args.size() == 2) {
      if (!parse_int(args[0], p.seed)) throw DomainError("initial condition: bad seed '" + args[0] + "'");
      p.explicit_seed = true;
    }
    p.amplitude = num(args.size() - 1);
  } else {
    throw DomainError("initial condition: expected mode:j,amp | gaussian:width,amp | random:seed,amp");
  }
  return p;
}

RunConfig load_config(std::string_view text, std::optional<Command> command) {
  RunConfig cfg;
  std::vector<Section> sections;
  sections.emplace_back("", 0);
  std::set<std::string> seen;
  static const std::set<std::string> known{"spectrum", "classify", "lattice", "pde", "compare", "divergence"};

  int line_no = 0;
  std::string_view rest = text;
  while (!rest.empty() || line_no == 0) {
    const auto nl = rest.find('\n');
    std::string_view raw = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) {
      if (rest.empty()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known.count(name)) throw ConfigError("unknown section [" + name + "]", line_no);
      if (!seen.insert(name).second) throw ConfigError("duplicate section [" + name + "]", line_no);
      sections.emplace_back(name, line_no);
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
      Entry e{sections.back().name(), trim(std::string_view(line).substr(0, eq)),
              trim(std::string_view(line).substr(eq + 1)), line_no};
      if (e.key.empty()) throw ConfigError("empty key", line_no);
      if (e.value.empty()) throw ConfigError("empty value", line_no, sections.back().field(e.key));
      sections.back().add(e);
      cfg.entries.push_back(e);
    }
    if (rest.empty()) break;
  }

  Section& top = sections.front();
  if (top.has("command")) {
    const Command c = top.parsed("command", [](std::string_view v) { return parse_command(v); });
    if (command && *command != c)
      throw ConfigError("config is for '" + to_string(c) + "' but '" + to_string(*command) + "' was requested",
                        top.line_of("command"), "command");
    cfg.command = c;
  } else if (command) {
    cfg.command = *command;
  } else {
    throw ConfigError("no command given (set 'command = ...' or use a subcommand)", 0, "command");
  }
  cfg.output_dir = top.text("output", cfg.output_dir);
  cfg.seed = top.integer<std::uint64_t>("seed", cfg.seed);
  cfg.threads = top.integer<int>("threads", cfg.threads);
  check(cfg.threads >= 1, top, "threads", "must be at least 1");
  top.forbid_unused();

  for (size_t i = 1; i < sections.size(); ++i) {
    Section& s = sections[i];
    const std::string& n = s.name();
    if (n == "spectrum") cfg.spectrum = read_spectrum(s);
    if (n == "classify") cfg.classify = read_classify(s);
    if (n == "lattice") cfg.lattice = read_lattice(s);
    if (n == "pde") cfg.pde = read_pde(s);
    if (n == "compare") cfg.compare = read_compare(s);
    if (n == "divergence") cfg.divergence = read_divergence(s);
    s.forbid_unused();
  }

  auto need = [&](bool present, const char* name) {
    if (!present)
      throw ConfigError(std::string("command '") + to_string(cfg.command) + "' needs a [" + name + "] section");
  };
  switch (cfg.command) {
    case Command::KernelSpectrum: need(cfg.spectrum.has_value(), "spectrum"); break;
    case Command::Classify: need(cfg.classify.has_value(), "classify"); break;
    case Command::LatticeRun: need(cfg.lattice.has_value(), "lattice"); break;
    case Command::PdeRun: need(cfg.pde.has_value(), "pde"); break;
    case Command::CompareDispersion:
    case Command::CompareEvolution:
      need(cfg.lattice.has_value(), "lattice");
      if (!cfg.compare) cfg.compare = CompareSection{};
      break;
    case Command::Divergence: need(cfg.divergence.has_value(), "divergence"); break;
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, std::optional<Command> command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), command);
}

}  // namespace fraclat::config
