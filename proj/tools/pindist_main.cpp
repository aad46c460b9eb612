// Command-line front end: field-info, verify, sweep and experiment
// subcommands over the pindist library. All heavy lifting lives in
// pindist/runner.hpp so it stays testable.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "pindist/pindist.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pinned-distance verification laboratory over finite fields F_q, odd q"};
  app.require_subcommand(1);

  pindist::RunConfig cfg;
  std::string a_text = "2/1";
  std::string backend_text = "auto";

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--p", cfg.p, "field characteristic (odd prime)");
    sc->add_option("--k", cfg.k, "extension degree, q = p^k");
    sc->add_option("--d", cfg.d, "ambient dimension");
    sc->add_option("--set", cfg.set_spec, "set spec, e.g. full | sphere:1 | random:20:seed=7");
    sc->add_option("--a", a_text, "threshold parameter a > 1 as num/den");
    sc->add_option("--backend", backend_text, "sweep backend: auto | naive | dft")
        ->check(CLI::IsMember({"auto", "naive", "dft"}));
    sc->add_option("--out", cfg.out_dir, "output directory for reports and CSVs");
    sc->add_option("--cap", cfg.cap, "maximum allowed q^d");
    sc->add_option("--threads", cfg.threads, "worker threads (default: PINDIST_THREADS or cores)");
    sc->add_option("--seed", cfg.seed, "base seed for experiment trials");
  };

  CLI::App* info = app.add_subcommand("field-info", "print field parameters as JSON");
  add_common(info);

  CLI::App* verify = app.add_subcommand("verify", "run the verification checks and write reports");
  add_common(verify);

  CLI::App* sweep = app.add_subcommand("sweep", "per-pin second-moment sweep to CSV");
  add_common(sweep);

  CLI::App* experiment = app.add_subcommand("experiment", "random-set trials to CSV");
  add_common(experiment);
  experiment->add_option("--sizes", cfg.sizes, "comma-separated set sizes")->delimiter(',');
  experiment->add_option("--trials", cfg.trials, "trials per size");

  CLI11_PARSE(app, argc, argv);

  try {
    pindist::RationalParam a = pindist::parse_rational_param(a_text);
    cfg.a_num = a.num;
    cfg.a_den = a.den;
    cfg.backend = pindist::parse_backend_choice(backend_text);
  } catch (const pindist::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  if (info->parsed()) return pindist::run_field_info(cfg, std::cout, std::cerr);
  if (verify->parsed()) return pindist::run_verify(cfg, std::cout, std::cerr);
  if (sweep->parsed()) return pindist::run_sweep(cfg, std::cout, std::cerr);
  if (experiment->parsed()) return pindist::run_experiment(cfg, std::cout, std::cerr);
  return 2;
}
