#include "gslab/serialize.hpp"

#include <cmath>
#include <stdexcept>

namespace gslab::serialize {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key,
             const char* who) {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument(std::string(who) + ": missing parameter '" + key + "'");
  return it->second;
}

std::map<std::string, double> params_from_json(const json& j) {
  std::map<std::string, double> out;
  if (!j.contains("params")) return out;
  for (auto& [k, v] : j.at("params").items()) out[k] = v.get<double>();
  return out;
}

} // namespace

ScalarField field_by_name(const std::string& name,
                          const std::map<std::string, double>& params) {
  if (name == "eta_phi") {
    return nullseq::make_eta_phi(param(params, "gamma", "eta_phi"),
                                 Exponent(param(params, "p", "eta_phi")),
                                 Dimension(static_cast<int>(param(params, "d", "eta_phi"))));
  }
  if (name == "oscillatory_psi") {
    auto it = params.find("blend");
    const auto blend = (it != params.end() && it->second == 1.0)
                           ? nullseq::BlendKind::cubic
                           : nullseq::BlendKind::quintic;
    return nullseq::make_oscillatory_psi(param(params, "beta", "oscillatory_psi"), blend);
  }
  // potential-carrying families
  auto fam = solutions::make_family(
      name, Exponent(param(params, "p", name.c_str())),
      Dimension(static_cast<int>(param(params, "d", name.c_str()))), params);
  return fam.field;
}

ScalarField field_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "closed_form")
    return field_by_name(j.at("name").get<std::string>(), params_from_json(j));
  if (kind == "sampled") {
    auto r = j.at("r").get<std::vector<double>>();
    auto v = j.at("v").get<std::vector<double>>();
    std::vector<double> dv;
    if (j.contains("dv")) dv = j.at("dv").get<std::vector<double>>();
    const bool positive = j.value("positive", false);
    return ScalarField::sampled(j.value("name", std::string("sampled")), std::move(r),
                                std::move(v), std::move(dv), positive);
  }
  throw std::invalid_argument("field_from_json: unknown kind '" + kind + "'");
}

Potential potential_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sampled") {
    auto field = field_from_json(j);
    return Potential(field.name(), [field](double r) { return field.value(r); }, 0.0);
  }
  if (kind != "closed_form")
    throw std::invalid_argument("potential_from_json: unknown kind '" + kind + "'");

  const std::string name = j.at("name").get<std::string>();
  auto params = params_from_json(j);
  if (name == "zero") return Potential::zero();
  if (name == "hardy") {
    const double p = param(params, "p", "hardy potential");
    const double d = param(params, "d", "hardy potential");
    const double c = solutions::hardy_constant(Exponent(p), Dimension(static_cast<int>(d)));
    return Potential("hardy", [c, p](double r) { return -c * std::pow(r, -p); }, p,
                     [c](double) { return -c; });
  }
  if (name == "w_alpha") {
    auto fam = solutions::make_family(
        "psi_alpha", Exponent(param(params, "p", "w_alpha")),
        Dimension(static_cast<int>(param(params, "d", "w_alpha"))), params);
    return fam.potential;
  }
  if (name == "power") {
    // V(r) = coeff * r^{-s}
    const double coeff = param(params, "coeff", "power potential");
    const double s = param(params, "s", "power potential");
    if (s > 0.0)
      return Potential("power", [coeff, s](double r) { return coeff * std::pow(r, -s); },
                       s, [coeff](double) { return coeff; });
    return Potential("power", [coeff, s](double r) { return coeff * std::pow(r, -s); });
  }
  throw std::invalid_argument("potential_from_json: unknown potential '" + name + "'");
}

ProblemSpec spec_from_json(const json& j) {
  const Exponent p(j.at("p").get<double>());
  const Dimension d(j.at("d").get<int>());
  RadialDomain domain = RadialDomain::punctured_ray();
  if (j.contains("domain")) {
    const auto& dj = j.at("domain");
    const double lo = dj.value("r_min", 0.0);
    double hi = std::numeric_limits<double>::infinity();
    if (dj.contains("r_max") && dj.at("r_max").is_number())
      hi = dj.at("r_max").get<double>();
    domain = RadialDomain(lo, hi, dj.value("punctured", lo == 0.0));
  }
  Potential V = j.contains("potential") ? potential_from_json(j.at("potential"))
                                        : Potential::zero();
  return ProblemSpec(p, d, domain, std::move(V));
}

CutoffFamily family_from_json(const json& j, const RadialDomain& domain) {
  const int K = j.at("K").get<int>();
  const double R = j.at("R_growth").get<double>();
  const auto profile = j.value("profile", std::string("log_linear")) == "smooth"
                           ? CutoffProfile::smooth
                           : CutoffProfile::log_linear;
  const auto schedule = j.value("schedule", std::string("geometric")) == "linear"
                            ? CutoffSchedule::linear
                            : CutoffSchedule::geometric;
  auto family = log_cutoff_family(K, R, domain, profile, schedule);
  if (j.contains("B")) {
    auto b = j.at("B").get<std::vector<double>>();
    if (b.size() != 2) throw std::invalid_argument("family_from_json: B must be [lo, hi]");
    family.set_window({b[0], b[1]});
  }
  return family;
}

json to_json(const quad::TailVerdict& v) {
  json j;
  j["verdict"] = quad::to_string(v.verdict);
  j["power_x"] = v.power_x;
  j["power_log"] = v.power_log;
  j["confidence"] = v.confidence;
  if (v.degenerate_gradient) j["degenerate_gradient"] = true;
  if (v.from_partial_sums) j["from_partial_sums"] = true;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json to_json(const nullseq::IntegralClassification& c) {
  json j;
  j["at_infinity"] = to_json(c.at_infinity);
  if (c.at_zero) j["at_zero"] = to_json(*c.at_zero);
  return j;
}

json to_json(const nullseq::ConditionReport& c) {
  json j;
  j["C_value"] = c.C_value;
  j["C_grad"] = std::isfinite(c.C_grad) ? json(c.C_grad) : json("inf");
  j["C_grad_alt"] = std::isfinite(c.C_grad_alt) ? json(c.C_grad_alt) : json("inf");
  j["value_pass"] = c.value_pass;
  j["grad_pass"] = c.grad_pass;
  j["grad_alt_pass"] = c.grad_alt_pass;
  j["budget"] = c.budget;
  j["admissible"] = c.admissible();
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json to_json(const nullseq::SequenceReport& r) {
  json j;
  j["values"] = r.values;
  j["normalization"] = r.normalization;
  j["strictly_decreasing"] = r.strictly_decreasing;
  j["decay_ratio"] = r.decay_ratio;
  j["fitted_exponent"] = r.fitted_exponent;
  j["fit_confidence"] = r.fit_confidence;
  j["normalization_stable"] = r.normalization_stable;
  j["is_null"] = r.is_null;
  j["diagnosis"] = r.diagnosis;
  return j;
}

} // namespace gslab::serialize
