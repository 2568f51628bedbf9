#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "liouville/conditions.hpp"
#include "liouville/harness.hpp"
#include "liouville/nonlinearity.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/simulator.hpp"

namespace liouville {

using Json = nlohmann::ordered_json;

/// A real as a JSON number, or the string "inf", "-inf" or "nan".
Json real(double x);

/// Serializes with every floating-point number written to 17 significant
/// digits; the output does not depend on the locale.
std::string dump(const Json& j, int indent = 2);

Json to_json(const IntegralVerdict& v, bool include_blocks = false);
Json to_json(const LiminfDiagnostics& d);
Json to_json(const NonexistenceCheck& c);
/// {outcome, theorems, evidence: {t211, t221, t231}}
Json to_json(const Verdict& v);
/// Reports the sampled range rather than every grid point.
Json to_json(const AdmissibilityReport& r);
Json to_json(const GTable& t);
Json to_json(const DecayCurve& d);
Json to_json(const KoEquivalence& e);

/// Status and blow-up bracket of a profile; the samples go to profile_csv.
Json profile_header(const RadialProfile& p);
/// Columns r,u,v_1..v_(m/2-1).
std::string profile_csv(const RadialProfile& p);
Json to_json(const CounterexampleReport& r);

/// Harness reports share the shape {lemma, inputs, empirical_constant, pass, witnesses}.
Json to_json(const AnnulusReport& r);
Json to_json(const DoublingTrace& t);
Json to_json(const ComparisonReport& r, const ComparisonCase& c);
Json to_json(const TailBoundReport& r);

}  // namespace liouville
