#pragma once

#include "json.hpp"
#include <string>
#include <variant>
#include <vector>

#include "varorder/linalg.hpp"
#include "varorder/order_structure.hpp"
#include "varorder/quantum_state.hpp"
#include "varorder/variance_order.hpp"

namespace varorder::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "varorder";
inline constexpr const char* kToolVersion = "0.1.0";

/// Reads a whole file and parses it; throws InputError on I/O or syntax errors.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

/// Complex entries are [re, im] pairs or plain numbers. Matrices are row-major,
/// either nested (n rows of n entries) or flat (n*n entries).
Complex complex_from_json(const Json& j);
ComplexMatrix matrix_from_json(const Json& j, std::size_t dim);
Json complex_to_json(Complex z);
Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);

/// {"dim": n, "matrix": ...}
HermitianObservable observable_from_json(const Json& j);
Json observable_to_json(const HermitianObservable& a);
UnitaryMap unitary_from_json(const Json& j, bool antiunitary);

using State = std::variant<PureState, DensityState>;
/// {"dim": n, "vector": [...]} or {"dim": n, "density": ...}
State state_from_json(const Json& j);

/// A flat JSON array of reals, or a comma-separated list such as "0,1,3,7".
std::vector<double> spectrum_from_json(const Json& j);
std::vector<double> spectrum_from_text(const std::string& text);

/// {"q": [[...]]} or a bare nested array.
QMatrix qmatrix_from_json(const Json& j);
Json qmatrix_to_json(const QMatrix& q);

Json table_to_json(const FunctionTable& f);
FunctionTable table_from_json(const Json& j);
Json measure_to_json(const BornMeasure& mu);

Json verdict_to_json(const OrderVerdict& v);
Json oracle_to_json(const OracleResult& r, const OracleConfig& cfg);
Json families_to_json(const std::vector<TwoPointFamily>& families);
Json reconstruction_to_json(const MetricReconstruction& r);
Json automorphism_report_to_json(const AutomorphismReport& r);

/// Adds "tool" and "version" in front of the payload's own keys.
Json with_header(const Json& payload);

}  // namespace varorder::io
