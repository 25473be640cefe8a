#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <sstream>
#include <string>

#include "wheelins/commands.h"
#include "wheelins/errors.h"

namespace {

void add_common(CLI::App* app, wheelins::CommonArgs& a, std::string& seed) {
  app->add_option("--config", a.config_path, "key=value configuration file");
  app->add_option("--seed", seed, "random seed (overrides the config)");
  app->add_option("--out", a.out_dir, "output directory");
}

void add_run(CLI::App* app, wheelins::RunArgs& a, std::string& lever) {
  app->add_option("--model", a.model, "velocity|displacement|contact");
  app->add_option("--imu", a.imu_path, "IMU CSV");
  app->add_option("--reference", a.reference_path, "reference trajectory CSV");
  app->add_option("--reference-heading", a.reference_heading,
                  "yaw column of the reference: imu|vehicle");
  app->add_option("--flag", a.flags, "eq18 and/or gate")->take_all();
  app->add_option("--lever-arm-error", lever, "estimator lever-arm error dy,dz in m");
}

void apply_seed(const std::string& text, wheelins::CommonArgs& a) {
  if (text.empty()) return;
  std::size_t used = 0;
  const unsigned long long v = std::stoull(text, &used);
  if (used != text.size() || text.front() == '-') {
    throw CLI::ValidationError("--seed", "expected a non-negative integer");
  }
  a.seed = v;
}

void apply_lever(const std::string& text, wheelins::RunArgs& a) {
  if (text.empty()) return;
  std::istringstream in(text);
  double dy = 0.0, dz = 0.0;
  char comma = 0;
  if (!(in >> dy >> comma >> dz) || comma != ',' || !in.eof()) {
    throw CLI::ValidationError("--lever-arm-error", "expected dy,dz");
  }
  a.lever_arm_error = std::array<double, 2>{dy, dz};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wheel-mounted IMU dead reckoning"};
  app.require_subcommand(1);

  wheelins::SimulateArgs sim;
  wheelins::RunArgs run;
  wheelins::EvaluateArgs ev;
  wheelins::CompareArgs cmp;
  std::string sim_seed, run_seed, ev_seed, cmp_seed, run_lever, cmp_lever;

  auto* s = app.add_subcommand("simulate", "write a simulated IMU stream and truth");
  add_common(s, sim, sim_seed);
  s->add_option("--profile", sim.profile, "test1|test5|straight");

  auto* r = app.add_subcommand("run", "run the filter on an IMU file");
  add_common(r, run, run_seed);
  add_run(r, run, run_lever);
  r->get_option("--imu")->required();
  r->get_option("--reference")->required();

  auto* e = app.add_subcommand("evaluate", "score an estimate against a reference");
  add_common(e, ev, ev_seed);
  e->add_option("--estimate", ev.estimate_path, "estimate trajectory CSV")->required();
  e->add_option("--estimate-heading", ev.estimate_heading, "imu|vehicle");
  e->add_option("--reference", ev.reference_path, "reference trajectory CSV")->required();
  e->add_option("--reference-heading", ev.reference_heading, "imu|vehicle");

  auto* c = app.add_subcommand("compare", "run all three models on one dataset");
  add_common(c, cmp, cmp_seed);
  add_run(c, cmp, cmp_lever);
  c->add_option("--profile", cmp.profile, "simulate this profile when --imu is absent");

  try {
    app.parse(argc, argv);
    apply_seed(sim_seed, sim);
    apply_seed(run_seed, run);
    apply_seed(ev_seed, ev);
    apply_seed(cmp_seed, cmp);
    apply_lever(run_lever, run);
    apply_lever(cmp_lever, cmp);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }

  try {
    if (*s) wheelins::simulate_cmd(sim);
    if (*r) wheelins::run_cmd(run);
    if (*e) wheelins::evaluate_cmd(ev);
    if (*c) wheelins::compare_cmd(cmp);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
