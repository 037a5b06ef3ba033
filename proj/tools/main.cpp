#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "paradom/error.hpp"
#include "paradom/pcf.hpp"

namespace {

const char* kExitCodes =
    "Exit codes:\n"
    "  0   success\n"
    "  1   unexpected failure\n"
    "  2   usage error (unknown flag, bad value, missing input)\n"
    "  10  resolution error (grid cannot resolve the data or the cutoff cap was reached)\n"
    "  11  certificate violation (smallness or contraction bound failed, verify mismatch)\n"
    "  12  data too rough (no contracting KPZ shift found)\n"
    "  13  no convergence (iteration limit reached)\n"
    "  14  shift too small (resolvent solver stagnated; raise --lam0)\n"
    "  15  range error (exponential argument too large)\n"
    "  16  divergence (KPZ iterates blew up)\n"
    "  17  data error (missing or inconsistent files)\n"
    "  18  multiplier error (non-finite Fourier symbol)\n"
    "  19  numerical breakdown\n"
    "\nA --config FILE of key=value lines supplies defaults for the flags of the\n"
    "chosen subcommand; flags given on the command line override it.";

// Moves "--config FILE" out of argv and turns its key=value lines into flags
// placed right after the subcommand, so later command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out{args[0]};
  if (config.empty() || rest.empty()) {
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  out.push_back(rest.front());
  for (const auto& [k, v] : paradom::read_meta(config)) {
    if (k == "trace") {
      if (v == "1" || v == "true") out.push_back("--trace");
      continue;
    }
    out.push_back("--" + k);
    out.push_back(v);
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

void add_common(CLI::App* s, paradom::cli::Args& a) {
  s->add_option("--grid", a.grid, "grid points per axis (even)")->check(CLI::PositiveNumber);
  s->add_option("--dim", a.dim, "dimension (1..3)")->check(CLI::Range(1, 3));
  s->add_option("--eps", a.eps, "mollification scales: 2^-3,2^-4 or 2^-3..2^-6");
  s->add_option("--seed", a.seed, "seed (study accepts a comma list)");
  s->add_option("--kind", a.kind, "anderson2d|generic_I|generic_II|smooth");
  s->add_option("--out", a.out, "output directory");
  s->add_flag("--trace", a.trace, "write iteration traces");
  s->add_option("--tol", a.tol, "KPZ tolerance")->check(CLI::PositiveNumber);
  s->add_option("--amplitude", a.amplitude, "data amplitude (generic and smooth kinds)");
  s->add_option("--delta", a.delta, "regularity offset delta");
  s->add_option("--delta1", a.delta1, "regularity offset delta'");
  s->add_option("--delta2", a.delta2, "regularity offset delta''");
  s->add_option("--p", a.p, "integrability of xi");
  s->add_option("--q", a.q, "integrability of V");
  s->add_option("--r", a.r, "integrability of rho");
}

int run(int argc, char** argv) {
  namespace c = paradom::cli;
  c::Args a;
  CLI::App app{"paradom: paracontrolled domains of singular elliptic operators on the torus"};
  app.footer(kExitCodes);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const c::Args&);
  };
  const Sub subs[] = {
      {"noise", "sample and mollify the noise, write PCF files", c::cmd_noise},
      {"enhance", "build the enhanced data (W, Z, c and products)", c::cmd_enhance},
      {"kpz", "solve the elliptic KPZ-type equation standalone", c::cmd_kpz},
      {"stack", "choose cutoffs, build and certify the transform stack", c::cmd_stack},
      {"verify", "re-check a persisted stack bit for bit", c::cmd_verify},
      {"study", "epsilon convergence study (resolvents, factorization, spectra)", c::cmd_study},
      {"check", "property reports as CSV on stdout", c::cmd_check},
  };
  int (*chosen)(const c::Args&) = nullptr;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, a);
    if (std::string(s.name) == "study") {
      sub->add_option("--k-eigs", a.k_eigs, "number of eigenvalues")->check(CLI::PositiveNumber);
      sub->add_option("--lam0", a.lam0, "resolvent shift (default: 10, doubled as needed)");
      sub->add_option("--trials", a.trials, "random fields for the norm equivalence")
          ->check(CLI::PositiveNumber);
      sub->add_option("--power-iterations", a.power_iterations, "power iteration steps")
          ->check(CLI::PositiveNumber);
      sub->add_option("--power-restarts", a.power_restarts, "power iteration restarts")
          ->check(CLI::PositiveNumber);
    }
    if (std::string(s.name) == "check")
      sub->add_option("--trials", a.check_trials, "random fields per report")
          ->check(CLI::PositiveNumber);
    const auto fn = s.fn;
    sub->callback([&chosen, fn] { chosen = fn; });
  }

  const std::vector<std::string> args = expand_config(argc, argv);
  std::vector<const char*> cargs;
  for (const auto& s : args) cargs.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(paradom::ExitCode::usage);
  }
  return chosen(a);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const paradom::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(paradom::ExitCode::failure);
  }
}
