// gslab: batch driver for the radial p-growth energy laboratory.
// Subcommands parse JSON problem descriptions, dispatch into the core
// library, and emit deterministic CSV/JSON reports.
//
// Exit codes: 0 verdict-success, 2 verdict-failure, 1 usage or input error.

#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gslab/energy.hpp"
#include "gslab/linearized.hpp"
#include "gslab/nullseq.hpp"
#include "gslab/picone.hpp"
#include "gslab/serialize.hpp"
#include "gslab/solutions.hpp"
#include "manifest.hpp"

namespace {

using namespace gslab;
using namespace gslab::cli;
using nlohmann::json;

constexpr int kPass = 0;
constexpr int kFail = 2;
constexpr int kUsage = 1;

// --phi/--psi/--v accept either a JSON file path or a bare family name whose
// parameters come from the flags.
ScalarField resolve_field(const std::string& spec, const std::map<std::string, double>& params) {
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")
    return serialize::field_from_json(load_json(spec));
  return serialize::field_by_name(spec, params);
}

struct FieldFlags {
  double p = 2.0;
  int d = 3;
  double alpha = 0.0;
  double gamma = 1.0;
  double beta = -0.2;

  std::map<std::string, double> as_params() const {
    return {{"p", p},         {"d", static_cast<double>(d)}, {"alpha", alpha},
            {"gamma", gamma}, {"beta", beta}};
  }
  void add_flags(CLI::App* cmd) {
    cmd->add_option("--p", p, "growth exponent p > 1");
    cmd->add_option("--d", d, "space dimension");
    cmd->add_option("--alpha", alpha, "family shift parameter");
    cmd->add_option("--gamma", gamma, "iterated-log exponent");
    cmd->add_option("--beta", beta, "envelope power");
  }
};

RadialDomain domain_for_field(const std::string& name) {
  if (name == "eta_phi") return RadialDomain::exterior(16.0);
  if (name == "oscillatory_psi") return RadialDomain::exterior(1.0);
  if (name == "constant" || name == "mp_supersol") return RadialDomain::full_space();
  return RadialDomain::punctured_ray();
}

int run_verify_inequality(const std::vector<double>& ps, int t_decades, int theta_samples,
                          const std::string& out) {
  RunManifest man;
  man.subcommand = "verify-inequality";
  man.set("t_decades", t_decades);
  man.set("theta_samples", theta_samples);
  std::string plist;
  for (double p : ps) plist += (plist.empty() ? "" : ";") + fmt_double(p);
  man.set("p", plist);
  man.out = out;

  CsvWriter csv(man,
                "p [1],c_lower [1],c_upper [1],argmin_t [1],argmin_theta [1],"
                "argmax_t [1],argmax_theta [1]");
  bool ok = true;
  const double t_hi = std::pow(10.0, 0.5 * t_decades);
  for (double p : ps) {
    auto c = picone::estimate_equivalence_constants(Exponent(p), 1.0 / t_hi, t_hi, 64,
                                                    theta_samples);
    ok = ok && c.c_lower > 0.0 && std::isfinite(c.c_upper) && c.c_lower <= c.c_upper;
    csv.row({fmt_double(p), fmt_double(c.c_lower), fmt_double(c.c_upper),
             fmt_double(c.argmin_t), fmt_double(c.argmin_theta), fmt_double(c.argmax_t),
             fmt_double(c.argmax_theta)});
  }
  csv.flush(out);
  return ok ? kPass : kFail;
}

int run_picone_check(int samples, const std::vector<double>& ps, std::uint64_t seed,
                     const std::string& out) {
  RunManifest man;
  man.subcommand = "picone-check";
  man.set("samples", samples);
  man.seed = seed;
  man.out = out;

  CsvWriter csv(man,
                "p [1],samples [1],max_identity_gap [rel],max_split_gap [rel],"
                "min_L1 [1],min_L2 [1],pass [bool]");
  bool all_ok = true;
  for (double p : ps) {
    const Exponent pe(p);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double max_gap = 0.0, max_split = 0.0, min_l1 = 0.0, min_l2 = 0.0;
    for (int i = 0; i < samples; ++i) {
      const picone::PointState s(3.0 * uni(rng), 4.0 * (uni(rng) - 0.5),
                                 0.05 + 3.0 * uni(rng), 4.0 * (uni(rng) - 0.5));
      const double L = picone::lagrangian_L(s, pe);
      const double R = picone::picone_R(s, pe);
      const double L1 = picone::lagrangian_L1(s, pe);
      const double L2 = picone::lagrangian_L2(s, pe);
      max_gap = std::max(max_gap, std::abs(R - L) / (1.0 + std::abs(L)));
      max_split = std::max(max_split, std::abs(L1 + L2 - L) / (1.0 + std::abs(L)));
      min_l1 = std::min(min_l1, L1);
      min_l2 = std::min(min_l2, L2);
    }
    const bool ok = max_gap <= 1e-10 && max_split <= 1e-10 && min_l1 >= -1e-12 &&
                    min_l2 >= -1e-12;
    all_ok = all_ok && ok;
    csv.row({fmt_double(p), std::to_string(samples), fmt_double(max_gap),
             fmt_double(max_split), fmt_double(min_l1), fmt_double(min_l2),
             ok ? "true" : "false"});
  }
  csv.flush(out);
  return all_ok ? kPass : kFail;
}

int run_energy(const std::string& spec_path, const std::string& v_path,
               const std::string& w_path, const std::string& mode_str,
               const std::string& out) {
  RunManifest man;
  man.subcommand = "energy";
  man.set("spec", spec_path);
  man.set("v", v_path);
  man.set("w", w_path);
  man.set("mode", mode_str);
  man.out = out;

  const auto spec = serialize::spec_from_json(load_json(spec_path));
  const auto v = serialize::field_from_json(load_json(v_path));
  const auto family = serialize::family_from_json(load_json(w_path), spec.domain);
  const auto mode = mode_str == "one-sided" ? energy::EquivalenceMode::one_sided
                                            : energy::EquivalenceMode::two_sided;

  const auto rep = energy::equivalence_report(v, family, spec, mode);
  const auto constants = picone::estimate_equivalence_constants(spec.exponent);

  bool pass = !rep.violation;
  for (double ratio : rep.ratios) {
    if (!std::isfinite(ratio)) continue;
    if (mode == energy::EquivalenceMode::two_sided)
      pass = pass && ratio >= constants.c_lower * (1.0 - 1e-6) &&
             ratio <= constants.c_upper * (1.0 + 1e-6);
    else
      pass = pass && ratio <= constants.c_upper * (1.0 + 1e-6);
  }

  json j;
  j["manifest"] = man.to_json();
  j["mode"] = mode_str;
  j["ratios"] = rep.ratios;
  j["q_direct"] = rep.q_direct;
  if (mode == energy::EquivalenceMode::two_sided) j["q_expanded"] = rep.q_expanded;
  j["simplified"] = rep.simplified;
  j["inf"] = rep.inf_ratio;
  j["sup"] = rep.sup_ratio;
  j["max_route_disagreement"] = rep.max_route_disagreement;
  j["constants_reference"] = {{"p", spec.exponent.p()},
                              {"c_lower", constants.c_lower},
                              {"c_upper", constants.c_upper}};
  j["violation"] = rep.violation;
  j["pass"] = pass;
  write_json(j, out);
  return pass ? kPass : kFail;
}

int run_residual(const std::string& family, const FieldFlags& ff, const std::string& mode,
                 int points, double lo, double hi, std::uint64_t seed,
                 const std::string& out) {
  RunManifest man;
  man.subcommand = "residual";
  man.set("family", family);
  man.set("p", ff.p);
  man.set("d", ff.d);
  man.set("alpha", ff.alpha);
  man.set("mode", mode);
  man.set("points", points);
  man.seed = seed;
  man.out = out;

  auto fam = solutions::make_family(family, Exponent(ff.p), Dimension(ff.d),
                                    {{"alpha", ff.alpha}});
  solutions::CertifyOptions co;
  co.points = points;
  co.lo = lo;
  co.hi = hi;
  co.seed = seed;
  const auto mode_e =
      mode == "weak" ? solutions::ResidualMode::weak : solutions::ResidualMode::strong;
  const auto rep = solutions::certify(fam.field, fam.spec(), mode_e, co);

  CsvWriter csv(man, mode == "weak" ? "bump_center [r],residual [pairing],relative [1]"
                                    : "r [r],residual [density],relative [1]");
  for (std::size_t i = 0; i < rep.location.size(); ++i)
    csv.row({fmt_double(rep.location[i]), fmt_double(rep.residual[i]),
             fmt_double(rep.relative[i])});
  csv.flush(out);

  const bool ok = fam.claimed_status && solutions::verdict_matches(rep, *fam.claimed_status);
  return ok ? kPass : kFail;
}

int run_classify(const std::string& phi_spec, const FieldFlags& ff, int refine,
                 const std::string& out) {
  RunManifest man;
  man.subcommand = "classify";
  man.set("phi", phi_spec);
  man.set("p", ff.p);
  man.set("d", ff.d);
  man.set("refine", refine);
  man.out = out;

  const auto phi = resolve_field(phi_spec, ff.as_params());
  const auto domain = domain_for_field(phi.name());
  nullseq::TailProbeOptions opts;
  opts.per_octave = refine;
  if (phi.name().rfind("oscillatory", 0) == 0)
    opts.max_argument = nullseq::oscillatory_psi_max_radius() / 4.0;

  const auto cv =
      nullseq::classify_ground_state(phi, Exponent(ff.p), Dimension(ff.d), domain, opts);

  json j;
  j["manifest"] = man.to_json();
  j["M1"] = serialize::to_json(cv.M1);
  if (cv.M2) j["M2"] = serialize::to_json(*cv.M2);
  j["verdict"] = nullseq::to_string(cv.verdict);
  j["p_vs_d"] = cv.p_vs_d;
  j["rationale"] = cv.rationale;
  j["pass"] = cv.verdict != nullseq::Verdict::inconclusive;
  write_json(j, out);
  return cv.verdict != nullseq::Verdict::inconclusive ? kPass : kFail;
}

int run_nullseq(const std::string& spec_path, const std::string& v_spec, int K,
                double R_growth, const std::string& schedule, const std::string& profile,
                double decay_fraction, const std::string& out) {
  RunManifest man;
  man.subcommand = "nullseq";
  man.set("spec", spec_path);
  man.set("v", v_spec);
  man.set("K", K);
  man.set("R_growth", R_growth);
  man.set("schedule", schedule);
  man.set("profile", profile);
  man.set("decay_fraction", decay_fraction);
  man.out = out;

  const auto spec = serialize::spec_from_json(load_json(spec_path));
  FieldFlags ff;
  ff.p = spec.exponent.p();
  ff.d = spec.dimension.d();
  const auto v = resolve_field(v_spec, ff.as_params());

  auto family = log_cutoff_family(
      K, R_growth, spec.domain,
      profile == "smooth" ? CutoffProfile::smooth : CutoffProfile::log_linear,
      schedule == "linear" ? CutoffSchedule::linear : CutoffSchedule::geometric);
  nullseq::DecayConvention conv;
  conv.decay_fraction = decay_fraction;
  const auto rep = nullseq::verify_null_sequence(family, v, spec, std::nullopt, conv);

  CsvWriter csv(man, "k [1],Q [energy],normalization [Lp^p]");
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    csv.row({std::to_string(i + 1), fmt_double(rep.values[i]),
             fmt_double(rep.normalization[i])});
  csv.flush(out);
  return rep.is_null ? kPass : kFail;
}

int run_transfer(const std::string& phi_spec, const std::string& psi_spec,
                 const std::string& spec0_path, const std::string& spec1_path, int K,
                 double R_growth, const std::string& schedule, double C_budget,
                 const FieldFlags& ff, const std::string& out) {
  RunManifest man;
  man.subcommand = "transfer";
  man.set("phi", phi_spec);
  man.set("psi", psi_spec);
  man.set("spec0", spec0_path);
  man.set("spec1", spec1_path);
  man.set("K", K);
  man.set("R_growth", R_growth);
  man.set("schedule", schedule);
  man.set("C_budget", C_budget);
  man.out = out;

  const auto spec0 = serialize::spec_from_json(load_json(spec0_path));
  const auto spec1 = serialize::spec_from_json(load_json(spec1_path));
  FieldFlags f1 = ff;
  f1.p = spec1.exponent.p();
  f1.d = spec1.dimension.d();
  const auto phi = resolve_field(phi_spec, f1.as_params());
  FieldFlags f0 = ff;
  f0.p = spec0.exponent.p();
  f0.d = spec0.dimension.d();
  const auto psi = resolve_field(psi_spec, f0.as_params());

  auto family = log_cutoff_family(K, R_growth, spec1.domain, CutoffProfile::log_linear,
                                  schedule == "linear" ? CutoffSchedule::linear
                                                       : CutoffSchedule::geometric);
  nullseq::TransferOptions opts;
  opts.C_budget = C_budget;
  const auto rep = nullseq::transfer_null_sequence(phi, psi, spec0, spec1, family, opts);

  json j;
  j["manifest"] = man.to_json();
  j["conditions"] = serialize::to_json(rep.conditions);
  j["base"] = serialize::to_json(rep.base);
  j["q0_direct"] = rep.q0_direct;
  j["q0_bound"] = rep.q0_bound;
  j["normalization"] = rep.normalization;
  j["transferred"] = serialize::to_json(rep.transferred);
  j["outcome"] = nullseq::to_string(rep.outcome);
  j["pass"] = rep.outcome == nullseq::TransferOutcome::transferred;
  write_json(j, out);
  return rep.outcome == nullseq::TransferOutcome::transferred ? kPass : kFail;
}

int run_linearize(const std::string& phi_family, const FieldFlags& ff,
                  const std::string& direction, int K, double R_growth,
                  const std::string& schedule, const std::string& out) {
  RunManifest man;
  man.subcommand = "linearize";
  man.set("phi", phi_family);
  man.set("p", ff.p);
  man.set("d", ff.d);
  man.set("direction", direction);
  man.set("K", K);
  man.set("R_growth", R_growth);
  man.set("schedule", schedule);
  man.out = out;

  auto fam = solutions::make_family(phi_family, Exponent(ff.p), Dimension(ff.d),
                                    {{"alpha", ff.alpha}});
  auto family = log_cutoff_family(K, R_growth, fam.domain, CutoffProfile::log_linear,
                                  schedule == "linear" ? CutoffSchedule::linear
                                                       : CutoffSchedule::geometric);
  linearized::TransferSequence seq;
  if (direction == "q2a")
    seq = linearized::transfer_Q_to_a(family, fam.field, fam.spec());
  else if (direction == "a2q")
    seq = linearized::transfer_a_to_Q(family, fam.field, fam.spec());
  else
    throw CLI::ValidationError("--direction must be q2a or a2q");

  CsvWriter csv(man, "k [1],value [energy],second_route [energy]");
  for (std::size_t i = 0; i < seq.values.size(); ++i)
    csv.row({std::to_string(i + 1), fmt_double(seq.values[i]), fmt_double(seq.aux[i])});
  csv.flush(out);
  return seq.judgement.is_null ? kPass : kFail;
}

int run_report(const std::vector<std::string>& inputs, const std::string& out) {
  if (inputs.empty()) throw std::runtime_error("report: need at least one input file");
  RunManifest man;
  man.subcommand = "report";
  for (std::size_t i = 0; i < inputs.size(); ++i)
    man.set("input" + std::to_string(i), inputs[i]);
  man.out = out;

  json items = json::array();
  bool all_pass = true;
  for (const auto& path : inputs) {
    const json j = load_json(path);
    json item;
    item["file"] = path;
    if (j.contains("manifest") && j["manifest"].contains("subcommand"))
      item["subcommand"] = j["manifest"]["subcommand"];
    const bool pass = j.value("pass", false);
    item["pass"] = pass;
    all_pass = all_pass && pass;
    items.push_back(item);
  }

  json j;
  j["manifest"] = man.to_json();
  j["items"] = items;
  j["overall"] = all_pass ? "pass" : "fail";
  j["pass"] = all_pass;
  write_json(j, out);
  return all_pass ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"gslab: radial p-growth energy laboratory"};
  app.require_subcommand(1);

  // verify-inequality
  std::vector<double> vi_p{1.5, 2.0, 2.5, 3.0, 4.0};
  int vi_decades = 12, vi_theta = 201;
  std::string vi_out;
  auto* vi = app.add_subcommand("verify-inequality",
                                "two-sided constants of the vector inequality");
  vi->add_option("--p", vi_p, "exponents to sweep");
  vi->add_option("--t-decades", vi_decades, "decades of t covered");
  vi->add_option("--theta-samples", vi_theta, "number of theta samples");
  vi->add_option("--out", vi_out, "output CSV path");

  // picone-check
  int pc_samples = 100000;
  std::vector<double> pc_p{1.1, 1.5, 2.0, 2.5, 3.0, 4.0};
  std::uint64_t pc_seed = 12345;
  std::string pc_out;
  auto* pc = app.add_subcommand("picone-check", "pointwise identity sweep");
  pc->add_option("--samples", pc_samples, "random states per exponent");
  pc->add_option("--p", pc_p, "exponents");
  pc->add_option("--seed", pc_seed, "RNG seed");
  pc->add_option("--out", pc_out, "output CSV path");

  // energy
  std::string en_spec, en_v, en_w, en_mode = "two-sided", en_out;
  auto* en = app.add_subcommand("energy", "equivalence report over a cutoff family");
  en->add_option("--spec", en_spec, "problem spec JSON")->required();
  en->add_option("--v", en_v, "base field JSON")->required();
  en->add_option("--w", en_w, "cutoff family JSON")->required();
  en->add_option("--mode", en_mode, "two-sided|one-sided")
      ->check(CLI::IsMember({"two-sided", "one-sided"}));
  en->add_option("--out", en_out, "output JSON path");

  // residual
  std::string rs_family, rs_mode = "strong", rs_out;
  FieldFlags rs_ff;
  int rs_points = 100;
  double rs_lo = 1e-2, rs_hi = 1e2;
  std::uint64_t rs_seed = 777;
  auto* rs = app.add_subcommand("residual", "certify a named family");
  rs->add_option("--family", rs_family, "family name")->required();
  rs_ff.add_flags(rs);
  rs->add_option("--mode", rs_mode, "strong|weak")
      ->check(CLI::IsMember({"strong", "weak"}));
  rs->add_option("--points", rs_points, "sample count");
  rs->add_option("--lo", rs_lo, "lower radius");
  rs->add_option("--hi", rs_hi, "upper radius");
  rs->add_option("--seed", rs_seed, "bump placement seed");
  rs->add_option("--out", rs_out, "output CSV path");

  // classify
  std::string cl_phi, cl_out;
  FieldFlags cl_ff;
  int cl_refine = 1;
  auto* cl = app.add_subcommand("classify", "ground state vs spectral gap");
  cl->add_option("--phi", cl_phi, "field JSON path or family name")->required();
  cl_ff.add_flags(cl);
  cl->add_option("--refine", cl_refine, "probes per octave");
  cl->add_option("--out", cl_out, "output JSON path");

  // nullseq
  std::string ns_spec, ns_v, ns_schedule = "geometric", ns_profile = "log_linear", ns_out;
  int ns_K = 8;
  double ns_R = 4.0, ns_fraction = 0.05;
  auto* ns = app.add_subcommand("nullseq", "null-sequence verification");
  ns->add_option("--spec", ns_spec, "problem spec JSON")->required();
  ns->add_option("--v", ns_v, "field JSON path or family name")->required();
  ns->add_option("--K", ns_K, "family size");
  ns->add_option("--R-growth", ns_R, "plateau growth");
  ns->add_option("--schedule", ns_schedule, "geometric|linear")
      ->check(CLI::IsMember({"geometric", "linear"}));
  ns->add_option("--profile", ns_profile, "log_linear|smooth")
      ->check(CLI::IsMember({"log_linear", "smooth"}));
  ns->add_option("--decay-fraction", ns_fraction, "decay gate");
  ns->add_option("--out", ns_out, "output CSV path");

  // transfer
  std::string tr_phi, tr_psi, tr_spec0, tr_spec1, tr_schedule = "geometric", tr_out;
  int tr_K = 8;
  double tr_R = 4.0, tr_budget = 1e3;
  FieldFlags tr_ff;
  auto* tr = app.add_subcommand("transfer", "comparison-principle engine");
  tr->add_option("--phi", tr_phi, "base ground state (JSON or name)")->required();
  tr->add_option("--psi", tr_psi, "candidate subsolution (JSON or name)")->required();
  tr->add_option("--spec0", tr_spec0, "target problem JSON")->required();
  tr->add_option("--spec1", tr_spec1, "base problem JSON")->required();
  tr->add_option("--K", tr_K, "family size");
  tr->add_option("--R-growth", tr_R, "plateau growth");
  tr->add_option("--schedule", tr_schedule, "geometric|linear")
      ->check(CLI::IsMember({"geometric", "linear"}));
  tr->add_option("--C-budget", tr_budget, "constant budget for the conditions");
  tr_ff.add_flags(tr);
  tr->add_option("--out", tr_out, "output JSON path");

  // linearize
  std::string ln_phi, ln_direction, ln_schedule = "geometric", ln_out;
  FieldFlags ln_ff;
  int ln_K = 8;
  double ln_R = 4.0;
  auto* ln = app.add_subcommand("linearize", "frozen-solution quadratic form transfer");
  ln->add_option("--phi", ln_phi, "family name")->required();
  ln_ff.add_flags(ln);
  ln->add_option("--direction", ln_direction, "q2a|a2q")
      ->required()
      ->check(CLI::IsMember({"q2a", "a2q"}));
  ln->add_option("--K", ln_K, "family size");
  ln->add_option("--R-growth", ln_R, "plateau growth");
  ln->add_option("--schedule", ln_schedule, "geometric|linear")
      ->check(CLI::IsMember({"geometric", "linear"}));
  ln->add_option("--out", ln_out, "output CSV path");

  // report
  std::vector<std::string> rp_inputs;
  std::string rp_out;
  auto* rp = app.add_subcommand("report", "aggregate prior JSON reports");
  rp->add_option("inputs", rp_inputs, "JSON report files")->required();
  rp->add_option("--out", rp_out, "output JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (vi->parsed())
      return run_verify_inequality(vi_p, vi_decades, vi_theta, vi_out);
    if (pc->parsed()) return run_picone_check(pc_samples, pc_p, pc_seed, pc_out);
    if (en->parsed()) return run_energy(en_spec, en_v, en_w, en_mode, en_out);
    if (rs->parsed())
      return run_residual(rs_family, rs_ff, rs_mode, rs_points, rs_lo, rs_hi, rs_seed,
                          rs_out);
    if (cl->parsed()) return run_classify(cl_phi, cl_ff, cl_refine, cl_out);
    if (ns->parsed())
      return run_nullseq(ns_spec, ns_v, ns_K, ns_R, ns_schedule, ns_profile, ns_fraction,
                         ns_out);
    if (tr->parsed())
      return run_transfer(tr_phi, tr_psi, tr_spec0, tr_spec1, tr_K, tr_R, tr_schedule,
                          tr_budget, tr_ff, tr_out);
    if (ln->parsed())
      return run_linearize(ln_phi, ln_ff, ln_direction, ln_K, ln_R, ln_schedule, ln_out);
    if (rp->parsed()) return run_report(rp_inputs, rp_out);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
