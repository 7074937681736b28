#include "luorbit/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

// Exit codes: 0 all checks pass, 1 verification failure, 2 usage/input
// error, 3 numerical ambiguity under --strict (takes precedence over 1).
constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAmbiguous = 3;

struct CommonOpts {
  double tol = 1e-9;
  double gap_warn = 1e4;
  std::string format = "text";
  std::string out;
  bool strict = false;

  luorbit::TolerancePolicy policy() const { return {tol, gap_warn}; }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--tol", o.tol, "Relative singular-value cutoff (default 1e-9)")
      ->envname("LU_ORBIT_TOL");
  cmd->add_option("--gap-warn", o.gap_warn,
                  "Flag rank decisions whose retained/discarded gap falls below this (default 1e4)");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--out", o.out, "Write the report to this path instead of stdout");
  cmd->add_flag("--strict", o.strict, "Exit 3 when any rank decision is ambiguous");
}

void deliver(const std::string& report, const CommonOpts& o) {
  if (o.out.empty()) {
    std::cout << report;
  } else {
    luorbit::write_file(o.out, report);
  }
}

luorbit::DensityMatrix build_state(const std::string& state, const std::vector<int>& dims,
                                   const std::vector<double>& params) {
  return luorbit::special_state(luorbit::parse_state_kind(state), luorbit::PartyDims{dims},
                                params);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local unitary orbit dimensions of multipartite mixed states"};
  app.require_subcommand(1);

  // verify thm1 / thm2
  auto* verify = app.add_subcommand("verify", "Reproduce the orbit-dimension theorems");
  verify->require_subcommand(1);

  auto* thm1 = verify->add_subcommand(
      "thm1", "Sweep bipartite witness states against orbit dim m^2+n^2-2");
  int m_max = 0, n_max = 0;
  CommonOpts thm1_opts;
  thm1->add_option("--m-max", m_max, "Largest first-party dimension")->required();
  thm1->add_option("--n-max", n_max, "Largest second-party dimension")->required();
  add_common(thm1, thm1_opts);

  auto* thm2 = verify->add_subcommand(
      "thm2", "Multipartite witness candidate plus random survey against sum(d_i^2)-k");
  std::vector<int> thm2_dims;
  int thm2_samples = 0;
  std::uint64_t thm2_seed = 0;
  CommonOpts thm2_opts;
  thm2->add_option("--dims", thm2_dims, "Party dimensions, e.g. 2,2,3")
      ->required()
      ->delimiter(',');
  thm2->add_option("--samples", thm2_samples, "Number of random states")->required();
  thm2->add_option("--seed", thm2_seed, "Master seed")->required();
  add_common(thm2, thm2_opts);

  // orbit-dim
  auto* orbit = app.add_subcommand("orbit-dim", "Stabilizer report for a named state");
  std::string orbit_state;
  std::vector<int> orbit_dims;
  std::vector<double> orbit_params;
  std::string dump_path;
  CommonOpts orbit_opts;
  orbit->add_option("--state", orbit_state,
                    "witness | maximally-mixed | pure-product | bell-diagonal")
      ->required();
  orbit->add_option("--dims", orbit_dims, "Party dimensions")->required()->delimiter(',');
  orbit->add_option("--params", orbit_params, "Bell-diagonal probabilities p1,p2,p3,p4")
      ->delimiter(',');
  orbit->add_option("--dump", dump_path, "Also write the state as JSON to this path");
  add_common(orbit, orbit_opts);

  // survey
  auto* surv = app.add_subcommand("survey", "Orbit-dimension histogram over random states");
  std::vector<int> surv_dims;
  int surv_samples = 0;
  std::uint64_t surv_seed = 0;
  int surv_rank = -1;
  CommonOpts surv_opts;
  surv->add_option("--dims", surv_dims, "Party dimensions")->required()->delimiter(',');
  surv->add_option("--samples", surv_samples, "Number of random states")->required();
  surv->add_option("--seed", surv_seed, "Master seed")->required();
  surv->add_option("--rank", surv_rank, "State rank (default: full rank D)");
  add_common(surv, surv_opts);

  // check-element
  auto* check = app.add_subcommand(
      "check-element", "Residual of a candidate discrete stabilizer element");
  std::string check_state;
  std::vector<int> check_dims;
  std::vector<double> check_params;
  std::string unitaries_path;
  CommonOpts check_opts;
  check->add_option("--state", check_state,
                    "witness | maximally-mixed | pure-product | bell-diagonal")
      ->required();
  check->add_option("--dims", check_dims, "Party dimensions")->required()->delimiter(',');
  check->add_option("--params", check_params, "Bell-diagonal probabilities")->delimiter(',');
  check->add_option("--unitaries", unitaries_path,
                    "JSON file: array of per-party unitaries {re: [[..]], im: [[..]]}")
      ->required();
  add_common(check, check_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (thm1->parsed()) {
      const auto rows = luorbit::verify_theorem1(m_max, n_max, thm1_opts.policy());
      deliver(luorbit::emit_report(rows, luorbit::parse_format(thm1_opts.format)), thm1_opts);
      bool all_pass = true, any_warn = false;
      for (const auto& r : rows) {
        all_pass = all_pass && r.pass;
        any_warn = any_warn || r.gap_warning;
      }
      if (thm1_opts.strict && any_warn) return kExitAmbiguous;
      return all_pass ? kExitPass : kExitVerificationFailure;
    }

    if (thm2->parsed()) {
      const auto res = luorbit::verify_theorem2(luorbit::PartyDims{thm2_dims}, thm2_samples,
                                                thm2_seed, thm2_opts.policy());
      deliver(luorbit::emit_report(res, luorbit::parse_format(thm2_opts.format)), thm2_opts);
      if (thm2_opts.strict && (res.witness_row.gap_warning || res.survey.gap_warnings > 0)) {
        return kExitAmbiguous;
      }
      return res.pass ? kExitPass : kExitVerificationFailure;
    }

    if (orbit->parsed()) {
      const auto state = build_state(orbit_state, orbit_dims, orbit_params);
      const auto rep = luorbit::stabilize(state, orbit_opts.policy());
      deliver(luorbit::emit_report(rep, luorbit::parse_format(orbit_opts.format)), orbit_opts);
      if (!dump_path.empty()) {
        luorbit::write_file(dump_path, luorbit::density_to_json(state).dump(2) + '\n');
      }
      if (orbit_opts.strict && rep.gap_warning) return kExitAmbiguous;
      return kExitPass;
    }

    if (surv->parsed()) {
      const luorbit::PartyDims dims{surv_dims};
      const auto res =
          luorbit::survey(dims, surv_samples, surv_seed, surv_rank, surv_opts.policy());
      deliver(luorbit::emit_report(res, luorbit::parse_format(surv_opts.format)), surv_opts);
      if (surv_opts.strict && res.gap_warnings > 0) return kExitAmbiguous;
      const int bound = dims.sum_squares() - dims.parties();
      return res.max_observed <= bound ? kExitPass : kExitVerificationFailure;
    }

    if (check->parsed()) {
      const auto state = build_state(check_state, check_dims, check_params);
      const auto us = luorbit::unitaries_from_json(luorbit::load_json_file(unitaries_path));
      const double residual = luorbit::check_group_element(state.matrix, us);
      const bool member = residual < 1e-10;
      const auto fmt = luorbit::parse_format(check_opts.format);
      std::string report;
      if (fmt == luorbit::ReportFormat::json) {
        luorbit::Json j;
        j["residual"] = residual;
        j["member"] = member;
        report = j.dump(2) + '\n';
      } else {
        report = "residual=" + luorbit::detail::format_double(residual) +
                 " member=" + (member ? std::string("true") : std::string("false")) + '\n';
      }
      deliver(report, check_opts);
      return member ? kExitPass : kExitVerificationFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  return kExitUsage;
}
