#include <algorithm>
#include <iostream>

#include "CLI11.hpp"
#include "wnv/cli_io.hpp"
#include "wnv/error.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out{"."};
  int periods{-1};
  double dx{0.0};
  int snapshot_every{-1};
  int threads{-1};
};

void drop_default(wnv::RunConfig& c, const std::string& key) {
  c.defaulted.erase(std::remove(c.defaulted.begin(), c.defaulted.end(), key), c.defaulted.end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seasonal West Nile virus free-boundary model"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"eigen", "principal eigenvalue of the spatially independent problem"},
      {"lamP", "principal eigenvalue on a fixed interval"},
      {"periodic", "positive periodic solution on a fixed interval or in the ODE limit"},
      {"simulate", "free-boundary simulation"},
      {"classify", "spreading or vanishing verdict, with optional threshold search"},
      {"sweep", "phase diagram over delta, b1, mu and h0"},
      {"contour", "zero contour of lambda1_O in the (delta, b1) plane"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", o.config, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "output directory");
    sub->add_option("--periods", o.periods, "override numerics.periods")->check(CLI::NonNegativeNumber);
    sub->add_option("--dx", o.dx, "override numerics.dx")->check(CLI::PositiveNumber);
    sub->add_option("--snapshot-every", o.snapshot_every, "override simulate.snapshot_every")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", o.threads, "override sweep.threads")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    wnv::RunConfig cfg = wnv::load_config(o.config);
    if (o.periods >= 0) cfg.numerics.periods = o.periods, drop_default(cfg, "numerics.periods");
    if (o.dx > 0.0) cfg.numerics.dx = o.dx, drop_default(cfg, "numerics.dx");
    if (o.snapshot_every >= 0) {
      cfg.simulate.snapshot_every = o.snapshot_every;
      drop_default(cfg, "simulate.snapshot_every");
    }
    if (o.threads >= 0) cfg.sweep.threads = o.threads, drop_default(cfg, "sweep.threads");
    wnv::validate_config(cfg);
    wnv::run_command(command, cfg, o.out, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "wnv " << command << ": " << e.what() << "\n";
    return wnv::exit_code_for(e);
  }
  return 0;
}
