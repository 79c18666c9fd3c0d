// phasegbs command-line driver.
//
//   phasegbs simulate --config run.json --out results/
//   phasegbs compare  --config model.json --patterns clicks.txt --out cmp/
//   phasegbs entangle --samples 1200000 --subensembles 1200
//   phasegbs oracle   --config small.json
//   phasegbs selftest
//
// Exit codes: 0 success, 1 usage or config error, 2 runtime or numerical
// error, 3 selftest failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "phasegbs/config.hpp"
#include "phasegbs/io.hpp"
#include "phasegbs/runner.hpp"
#include "phasegbs/selftest.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> subensembles;
  std::optional<std::string> out;
  std::optional<std::string> patterns;
  std::optional<std::string> matrix;
  std::optional<double> epsilon;
  std::optional<double> scale;
  std::optional<std::size_t> threads;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--samples", o.samples, "Total number of phase-space samples");
  cmd->add_option("--subensembles", o.subensembles, "Number of sub-ensembles");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--patterns", o.patterns, "Measured click patterns, one 0/1 string per line");
  cmd->add_option("--matrix", o.matrix, "Transmission matrix file");
  cmd->add_option("--epsilon", o.epsilon, "Thermal decoherence fraction");
  cmd->add_option("--scale", o.scale, "Multiply every transmission entry by this factor");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

phasegbs::RunConfig resolve(phasegbs::Task task, const Overrides& o) {
  using namespace phasegbs;
  RunConfig c = o.config.empty() ? RunConfig::defaults(task) : load_config(o.config, task);
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.subensembles) c.subensembles = *o.subensembles;
  if (o.out) c.out = *o.out;
  if (o.patterns) c.patterns = *o.patterns;
  if (o.matrix) {
    c.transmission = TransmissionSource{};
    c.transmission.kind = TransmissionSource::Kind::file;
    c.transmission.path = *o.matrix;
  }
  if (o.epsilon) c.decoherence = *o.epsilon;
  if (o.scale) {
    TransmissionSource scaled;
    scaled.kind = TransmissionSource::Kind::scaled;
    scaled.factor = *o.scale;
    scaled.inner = {c.transmission};
    c.transmission = scaled;
  }
  if (o.threads) c.threads = *o.threads;
  validate_config(c);
  return c;
}

void report_distribution(const phasegbs::GroupedDistribution& d, double seconds) {
  std::cout << "bins: " << d.size() << "  sum: " << phasegbs::format_number(d.sum())
            << "  samples: " << d.sample_count << "  time: " << seconds << " s\n";
}

int run(phasegbs::Task task, const Overrides& o) {
  using namespace phasegbs;
  if (task == Task::selftest) {
    const SelftestReport report = run_selftest(o.seed.value_or(1));
    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    return report.passed() ? 0 : 3;
  }

  const RunConfig c = resolve(task, o);
  switch (task) {
    case Task::simulate: {
      const auto r = run_simulate(c);
      report_distribution(r.distribution, r.seconds);
      break;
    }
    case Task::compare: {
      const auto r = run_compare(c);
      std::cout << "chi2: " << format_number(r.chi.chi2) << "  k: " << r.chi.k
                << "  chi2/k: " << format_number(r.chi.ratio) << "  time: " << r.seconds << " s\n";
      break;
    }
    case Task::entangle: {
      const auto r = run_entangle(c);
      const auto& w = r.report;
      std::cout << "modes: " << w.modes << "\n"
                << "var_u: " << format_number(w.var_u.value) << " +- " << w.var_u.std_error << "\n"
                << "var_v: " << format_number(w.var_v.value) << " +- " << w.var_v.std_error << "\n"
                << "product: " << w.product.value << " (threshold " << w.threshold_product << ") "
                << (w.pass_product ? "entangled" : "not certified") << "\n"
                << "sum: " << w.sum.value << " (threshold " << w.threshold_sum << ") "
                << (w.pass_sum ? "entangled" : "not certified") << "\n";
      break;
    }
    case Task::oracle: {
      const auto r = run_oracle(c);
      report_distribution(r.distribution, r.seconds);
      break;
    }
    case Task::selftest: break;
  }
  if (!c.out.empty()) std::cout << "wrote " << c.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space simulation of Gaussian boson sampling"};
  app.require_subcommand(1);

  Overrides o;
  std::optional<phasegbs::Task> chosen;
  for (phasegbs::Task t : {phasegbs::Task::simulate, phasegbs::Task::compare,
                           phasegbs::Task::entangle, phasegbs::Task::oracle,
                           phasegbs::Task::selftest}) {
    static const char* help[] = {"Grouped click distribution from positive-P sampling",
                                 "Compare a simulated model with measured click patterns",
                                 "Multipartite entanglement witness from Wigner sampling",
                                 "Exact click distribution for small networks",
                                 "Run the built-in health checks"};
    auto* cmd = app.add_subcommand(std::string(phasegbs::task_name(t)),
                                   help[static_cast<int>(t)]);
    add_flags(cmd, o);
    cmd->callback([&chosen, t] { chosen = t; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return run(*chosen, o);
  } catch (const phasegbs::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
