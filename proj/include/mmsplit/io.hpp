#pragma once

// JSON encodings of the library's data and reports. Marginal labels are
// one-based in every file ("1,2" names the pair of the first two
// marginals). Non-finite numbers are written as the strings "inf" and
// "-inf".

#include <json.hpp>

#include "mmsplit/antiderivative.hpp"
#include "mmsplit/core.hpp"
#include "mmsplit/monotone.hpp"
#include "mmsplit/onedim.hpp"
#include "mmsplit/quadratic.hpp"
#include "mmsplit/splitting.hpp"

namespace mmsplit::io {

using json = nlohmann::json;

json number(double v);
double to_number(const json& j);

json point_to_json(const MarginalPoint& x);
MarginalPoint point_from_json(const json& j);
json product_point_to_json(const ProductPoint& p);
ProductPoint product_point_from_json(const json& j);
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// {"N": int, "dims": [int], "points": [[[f64]]]}
json gamma_to_json(const GammaSet& g);
GammaSet gamma_from_json(const json& j);

/// {"terms": [{"type": "quadratic", "A", "b", "c", "constraint"} |
///            {"type": "power_sum", "terms": [{"coef", "num", "den"}]}]}
json closed_form_to_json(const ClosedForm& f);
ClosedForm closed_form_from_json(const json& j);

json pairwise_to_json(const PairwiseCost& c);
PairwiseCost pairwise_from_json(const json& j);

/// {"dims": [int], "pairs": {"i,j": {"kind", "sign", ...}}, "shift": [...]}
/// or {"classical": "c1" | "c2" | "c3", "N": int, "dims": [int]} with equal dims.
json cost_to_json(const CostSpec& c);
CostSpec cost_from_json(const json& j);

/// {"pairs": [[[x], [y]], ...]}
json pairs_to_json(const std::vector<PointPair>& pairs);
std::vector<PointPair> pairs_from_json(const json& j);

/// {"points": [[f64]], "values": [f64 | "inf"], "closed_form": ...}
json potential_to_json(const Potential& p);
Potential potential_from_json(const json& j);

json witness_to_json(const Witness& w);
json verdict_to_json(const MonotonicityVerdict& v);
json certificate_to_json(const SplittingCertificate& c);
json exactness_to_json(const ExactnessReport& r);
json characterization_to_json(const Characterization& r);
json counterexample_report_to_json(const CounterexampleReport& r);

/// Parses text; syntax and schema problems surface as Error(ParseError).
json parse(const std::string& text);
json read_file(const std::string& path);

}  // namespace mmsplit::io
