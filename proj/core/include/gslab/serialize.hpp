#ifndef GSLAB_SERIALIZE_HPP
#define GSLAB_SERIALIZE_HPP

#include <map>
#include <string>

#include "json.hpp"

#include "gslab/cutoff.hpp"
#include "gslab/domain.hpp"
#include "gslab/nullseq.hpp"
#include "gslab/solutions.hpp"

namespace gslab::serialize {

using json = nlohmann::json;

/// {"kind":"closed_form","name":...,"params":{...}} or
/// {"kind":"sampled","r":[...],"v":[...],"dv":[...],"positive":bool}
ScalarField field_from_json(const json& j);

/// Closed-form field by name; params as in field_from_json.
ScalarField field_by_name(const std::string& name,
                          const std::map<std::string, double>& params);

/// {"kind":"closed_form","name":"zero"|"hardy"|"w_alpha"|"power","params":{...}}
/// or a sampled table (derivative-free).
Potential potential_from_json(const json& j);

/// {"p":..,"d":..,"domain":{"r_min":..,"r_max":..|"inf","punctured":..},
///  "potential":{...}}
ProblemSpec spec_from_json(const json& j);

/// {"K":..,"R_growth":..,"profile":"log_linear"|"smooth",
///  "schedule":"geometric"|"linear","B":[lo,hi]?}
CutoffFamily family_from_json(const json& j, const RadialDomain& domain);

json to_json(const quad::TailVerdict& v);
json to_json(const nullseq::IntegralClassification& c);
json to_json(const nullseq::ConditionReport& c);
json to_json(const nullseq::SequenceReport& r);

} // namespace gslab::serialize

#endif
