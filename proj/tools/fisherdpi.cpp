// Copyright 2026 The fisherdpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fisherdpi: command-line front end.
//
// Every command prints JSON on stdout (one object per line) and reports
// failures as a single `error:<code>:<detail>` line on stderr.
//
// Exit codes: 0 ok, 2 invalid input, 3 dimension mismatch, 4 singular
// outcome, 5 data-processing violation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fisherdpi/fisherdpi.hpp"
#include "fisherdpi/io.hpp"

namespace fd = fisherdpi;
using fd::io::Json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitDimension = 3;
constexpr int kExitSingular = 4;
constexpr int kExitViolation = 5;

int exit_code_for(fd::ErrorCode code) {
  switch (code) {
    case fd::ErrorCode::DimensionMismatch: return kExitDimension;
    case fd::ErrorCode::SingularOutcome:
    case fd::ErrorCode::DerivativeOffSupport:
    case fd::ErrorCode::ZeroEvidence: return kExitSingular;
    default: return kExitInvalid;
  }
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int fail(const std::string& code, const std::string& detail, int exit_code) {
  std::cerr << "error:" << code << ":" << one_line(detail) << "\n";
  return exit_code;
}

class Stopwatch {
 public:
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(Json report, const Stopwatch& clock) {
  report["runtime_ms"] = clock.elapsed_ms();
  std::cout << report.dump() << "\n";
}

Json fisher_tolerances() {
  return {{"probability_floor", fd::kProbabilityFloor}, {"slope_floor", fd::kSlopeFloor}};
}

Json file_input(const std::string& path, const Json& doc) { return {{"path", path}, {"document", doc}}; }

void require_same_dim(const fd::ParameterizedModel& model, const fd::Povm& povm) {
  if (model.dim() != povm.dim()) {
    throw fd::Error(fd::ErrorCode::DimensionMismatch, "model has dim " + std::to_string(model.dim()) +
                                                          " but POVM has dim " + std::to_string(povm.dim()));
  }
}

Json context_json(const fd::OptimizationResult& r) {
  return {{"state", fd::io::to_json(r.best_state)}, {"povm", fd::io::to_json(r.best_povm)}};
}

// ---------------------------------------------------------------------------

struct FisherArgs {
  std::string model, povm;
  double theta = 0.0;
};

int run_fisher(const FisherArgs& a) {
  Stopwatch clock;
  const Json mdoc = fd::io::load_json_file(a.model);
  const Json pdoc = fd::io::load_json_file(a.povm);
  const auto model = fd::io::parse_model(mdoc);
  const auto povm = fd::io::parse_povm(pdoc);
  require_same_dim(model, povm);
  const auto value = fd::classical_fisher(model, povm, a.theta);
  emit({{"command", "fisher"},
        {"inputs", {{"model", file_input(a.model, mdoc)}, {"povm", file_input(a.povm, pdoc)}, {"theta", a.theta}}},
        {"value", value.value},
        {"seed", nullptr},
        {"tolerances", fisher_tolerances()}},
       clock);
  return 0;
}

struct QfiArgs {
  std::string model;
  double theta = 0.0;
};

int run_qfi(const QfiArgs& a) {
  Stopwatch clock;
  const Json mdoc = fd::io::load_json_file(a.model);
  const auto model = fd::io::parse_model(mdoc);
  const auto sld = fd::sld_solve(model, a.theta);
  const auto povm = fd::sld_optimal_povm(sld);
  const double achieved = fd::classical_fisher(model, povm, a.theta, fd::SingularPolicy::Limit).value;
  emit({{"command", "qfi"},
        {"inputs", {{"model", file_input(a.model, mdoc)}, {"theta", a.theta}}},
        {"values", {{"qfi", sld.qfi}, {"achieved_by_sld_povm", achieved}, {"support_rank", sld.support_rank}}},
        {"context", {{"sld", fd::io::to_json(sld.sld)}, {"povm", fd::io::to_json(povm)}}},
        {"seed", nullptr},
        {"tolerances", {{"eigen_floor", fd::kSldEigenFloor}, {"off_support", fd::kSldOffSupportTol}}}},
       clock);
  return 0;
}

struct BayesArgs {
  std::string model, povm, prior;
  std::size_t grid = fd::kDefaultGridNodes;
};

int run_bayes(const BayesArgs& a) {
  Stopwatch clock;
  const Json mdoc = fd::io::load_json_file(a.model);
  const Json pdoc = fd::io::load_json_file(a.povm);
  const auto model = fd::io::parse_model(mdoc);
  const auto povm = fd::io::parse_povm(pdoc);
  require_same_dim(model, povm);
  const auto prior = fd::PriorGrid::parse(a.prior, a.grid);
  const auto risk = fd::bayes_risk_breakdown(prior, model, povm);
  const auto bcrb = fd::check_bcrb(prior, model, povm);

  Json outcomes = Json::array();
  for (std::size_t x = 0; x < povm.size(); ++x) {
    Json o = {{"label", povm.labels()[x]}, {"evidence", risk.evidence[x]}};
    o["estimate"] = std::isnan(risk.estimates[x]) ? Json(nullptr) : Json(risk.estimates[x]);
    outcomes.push_back(std::move(o));
  }
  Json bound = {{"j", bcrb.j}, {"vacuous", bcrb.vacuous}, {"satisfied", bcrb.satisfied}};
  bound["inverse_information"] = bcrb.vacuous ? Json(nullptr) : Json(bcrb.bound);
  if (bcrb.van_trees_bound) {
    bound["van_trees"] = *bcrb.van_trees_bound;
    bound["van_trees_satisfied"] = *bcrb.van_trees_satisfied;
  }
  emit({{"command", "bayes"},
        {"inputs",
         {{"model", file_input(a.model, mdoc)},
          {"povm", file_input(a.povm, pdoc)},
          {"prior", a.prior},
          {"grid", a.grid}}},
        {"values",
         {{"risk", risk.expected_posterior_variance},
          {"risk_direct", risk.direct},
          {"prior_variance", prior.variance()},
          {"outcomes", std::move(outcomes)},
          {"bcrb", std::move(bound)}}},
        {"seed", nullptr},
        {"tolerances", {{"bcrb", fd::kBcrbTol}, {"min_evidence", fd::kMinEvidence}}}},
       clock);
  return 0;
}

struct OptimizeArgs {
  std::string model, fix_povm, prior;
  double theta = 0.0;
  int restarts = 32;
  std::uint64_t seed = 0;
  bool fix_state = false;
  std::size_t grid = fd::kDefaultGridNodes;
};

int run_optimize(const OptimizeArgs& a) {
  Stopwatch clock;
  const Json mdoc = fd::io::load_json_file(a.model);
  const auto model = fd::io::parse_model(mdoc);
  auto space = fd::ContextSpace::unrestricted(model.dim());
  Json inputs = {{"model", file_input(a.model, mdoc)}, {"restarts", a.restarts}, {"fix_state", a.fix_state}};
  std::vector<std::string> pins;
  if (a.fix_state) {
    space.fixed_state = model.initial_state();
    pins.push_back("state fixed to the model's initial state");
  }
  if (!a.fix_povm.empty()) {
    const Json pdoc = fd::io::load_json_file(a.fix_povm);
    const auto povm = fd::io::parse_povm(pdoc);
    require_same_dim(model, povm);
    space.fixed_povm = povm;
    inputs["fix_povm"] = file_input(a.fix_povm, pdoc);
    pins.push_back("measurement fixed to " + a.fix_povm);
  }
  if (!pins.empty()) {
    space.restriction_label = pins.front();
    for (std::size_t i = 1; i < pins.size(); ++i) space.restriction_label += "; " + pins[i];
  }

  fd::OptimizeOptions opts;
  opts.restarts = a.restarts;
  opts.seed = a.seed;
  Json values;
  const fd::OptimizationResult result = [&] {
    if (a.prior.empty()) {
      inputs["theta"] = a.theta;
      auto r = fd::maximize_fisher(model, space, a.theta, opts);
      values["fisher"] = r.best_value;
      return r;
    }
    inputs["prior"] = a.prior;
    inputs["grid"] = a.grid;
    auto r = fd::maximize_bayesian(model, space, fd::PriorGrid::parse(a.prior, a.grid), opts);
    values["bayesian_information"] = r.best_value;
    return r;
  }();
  values["restarts_used"] = result.restarts_used;
  values["restriction"] = space.restriction_label;
  emit({{"command", "optimize"},
        {"inputs", std::move(inputs)},
        {"values", std::move(values)},
        {"context", context_json(result)},
        {"seed", a.seed},
        {"tolerances", {{"simplex_spread", opts.nelder_mead.tolerance}, {"max_iterations", opts.nelder_mead.max_iterations}}}},
       clock);
  return 0;
}

struct DpiArgs {
  std::string mode = "classical";
  std::size_t trials = 100;
  std::size_t dim = 2;
  std::size_t kraus = 2;
  std::uint64_t seed = 0;
  int restarts = 32;
};

int run_dpi(const DpiArgs& a) {
  Stopwatch clock;
  std::vector<fd::DpiTrialReport> reports;
  Json tolerances;
  if (a.mode == "classical") {
    fd::ClassicalDpiOptions opts;
    opts.dim = a.dim;
    reports = fd::classical_dpi_suite(a.trials, a.seed, opts);
    tolerances = {{"information", fd::kClassicalDpiTol}};
  } else if (a.mode == "quantum") {
    fd::QuantumDpiOptions opts;
    opts.dim = a.dim;
    opts.kraus_count = a.kraus;
    opts.optimizer.restarts = a.restarts;
    reports = fd::quantum_dpi_suite(a.trials, a.seed, opts);
    tolerances = {{"optimized_information", fd::kQuantumDpiTol},
                  {"sld_monotonicity", fd::kSldMonotonicityTol},
                  {"dual_identity", fd::kDualIdentityTol}};
  } else {
    throw fd::Error(fd::ErrorCode::InvalidArgument, "--mode must be classical or quantum");
  }

  double min_gap = reports.front().gap;
  for (const auto& r : reports) {
    std::cout << fd::io::to_json(r).dump() << "\n";
    min_gap = std::min(min_gap, r.gap);
  }
  const std::size_t violations = fd::count_violations(reports);
  emit({{"command", "dpi"},
        {"inputs",
         {{"mode", a.mode}, {"trials", a.trials}, {"dim", a.dim}, {"kraus", a.kraus}, {"restarts", a.restarts}}},
        {"summary", {{"trials", reports.size()}, {"violations", violations}, {"min_gap", min_gap}}},
        {"seed", a.seed},
        {"tolerances", std::move(tolerances)}},
       clock);
  return violations == 0 ? 0 : kExitViolation;
}

struct PaperArgs {
  double theta = 0.4;
  int restarts = 32;
  std::uint64_t seed = 0;
};

int run_paper_example(const PaperArgs& a) {
  Stopwatch clock;
  fd::OptimizeOptions opts;
  opts.restarts = a.restarts;
  opts.seed = a.seed;
  const auto r = fd::circumvention_report(a.theta, opts);
  emit({{"command", "paper-example"},
        {"inputs", {{"theta", a.theta}, {"restarts", a.restarts}}},
        {"values",
         {{"base", r.base},
          {"multipass", r.multipass},
          {"restricted", r.restricted},
          {"restricted_plus_rotation", r.restricted_plus_rotation},
          {"unrestricted_optimum", r.unrestricted_optimum}}},
        {"notes", r.notes},
        {"seed", a.seed},
        {"tolerances", fisher_tolerances()}},
       clock);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher information and data-processing toolkit"};
  app.require_subcommand(1);

  FisherArgs fisher;
  auto* c_fisher = app.add_subcommand("fisher", "classical Fisher information of a model and POVM");
  c_fisher->add_option("--model", fisher.model, "model document")->required();
  c_fisher->add_option("--povm", fisher.povm, "POVM document")->required();
  c_fisher->add_option("--theta", fisher.theta, "parameter value")->required();

  QfiArgs qfi;
  auto* c_qfi = app.add_subcommand("qfi", "SLD quantum Fisher information and its optimal measurement");
  c_qfi->add_option("--model", qfi.model, "model document")->required();
  c_qfi->add_option("--theta", qfi.theta, "parameter value")->required();

  BayesArgs bayes;
  auto* c_bayes = app.add_subcommand("bayes", "Bayes risk, Bayesian information and the BCRB check");
  c_bayes->add_option("--model", bayes.model, "model document")->required();
  c_bayes->add_option("--povm", bayes.povm, "POVM document")->required();
  c_bayes->add_option("--prior", bayes.prior, "uniform:a,b or gauss:mu,sigma,a,b")->required();
  c_bayes->add_option("--grid", bayes.grid, "quadrature nodes")->check(CLI::Range(3, 1000000));

  OptimizeArgs optimize;
  auto* c_opt = app.add_subcommand("optimize", "maximize information over probe states and measurements");
  c_opt->add_option("--model", optimize.model, "model document")->required();
  c_opt->add_option("--theta", optimize.theta, "parameter value (ignored with --prior)");
  c_opt->add_option("--restarts", optimize.restarts, "Nelder-Mead restarts")->check(CLI::Range(1, 100000));
  c_opt->add_option("--seed", optimize.seed, "random seed");
  c_opt->add_flag("--fix-state", optimize.fix_state, "keep the model's initial state");
  c_opt->add_option("--fix-povm", optimize.fix_povm, "keep this POVM document");
  c_opt->add_option("--prior", optimize.prior, "maximize Bayesian information under this prior");
  c_opt->add_option("--grid", optimize.grid, "prior quadrature nodes")->check(CLI::Range(3, 1000000));

  DpiArgs dpi;
  auto* c_dpi = app.add_subcommand("dpi", "randomized data-processing inequality suite");
  c_dpi->add_option("--mode", dpi.mode, "classical or quantum")->check(CLI::IsMember({"classical", "quantum"}));
  c_dpi->add_option("--trials", dpi.trials, "number of trials")->check(CLI::Range(1, 10000000));
  c_dpi->add_option("--dim", dpi.dim, "Hilbert-space dimension (classical: 0 mixes 2 and 3)");
  c_dpi->add_option("--kraus", dpi.kraus, "Kraus operators per random channel")->check(CLI::Range(1, 64));
  c_dpi->add_option("--seed", dpi.seed, "random seed");
  c_dpi->add_option("--restarts", dpi.restarts, "optimizer restarts (quantum)")->check(CLI::Range(1, 100000));

  PaperArgs paper;
  auto* c_paper = app.add_subcommand("paper-example", "the four qubit phase-rotation informations");
  c_paper->add_option("--theta", paper.theta, "parameter value");
  c_paper->add_option("--restarts", paper.restarts, "optimizer restarts")->check(CLI::Range(1, 100000));
  c_paper->add_option("--seed", paper.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("ParseError", e.what(), kExitInvalid);
  }

  try {
    if (*c_fisher) return run_fisher(fisher);
    if (*c_qfi) return run_qfi(qfi);
    if (*c_bayes) return run_bayes(bayes);
    if (*c_opt) return run_optimize(optimize);
    if (*c_dpi) return run_dpi(dpi);
    if (*c_paper) return run_paper_example(paper);
  } catch (const fd::Error& e) {
    return fail(std::string(e.name()), e.what(), exit_code_for(e.code()));
  } catch (const Json::exception& e) {
    return fail("ParseError", e.what(), kExitInvalid);
  } catch (const std::exception& e) {
    return fail("Internal", e.what(), kExitInvalid);
  }
  return kExitInvalid;
}
