#pragma once

#include "fibercz/czd.hpp"
#include "fibercz/grid.hpp"
#include "fibercz/norms.hpp"
#include "fibercz/operators.hpp"

#include "json.hpp"

#include <string>
#include <variant>

namespace fcz::io {

using Json = nlohmann::json;

// Interchange documents:
//   1D      {origin, step, count, values:[...]}
//   tensor  {gridX:{origin,step,count}, gridY:{...}, terms:[{values:[...], indexSet:[...]}]}
//   dense   {gridX:{...}, gridY:{...}, values:[[row y=0], [row y=1], ...]}
// Parse failures throw fcz::Error with ErrorCode::Parse.

Json to_json(const Grid1D& g);
Grid1D grid_from_json(const Json& j);

Json to_json(const SampledFunction1D& f);
SampledFunction1D signal_from_json(const Json& j);

Json to_json(const TensorFunction2D& f);
TensorFunction2D tensor_from_json(const Json& j);

Json to_json(const DenseFunction2D& f);
DenseFunction2D dense_from_json(const Json& j);

enum class DocumentKind { Signal, Tensor, Dense };
DocumentKind detect_kind(const Json& j);

/// Accepts a dense or a tensor document.
DenseFunction2D dense_or_tensor_from_json(const Json& j);

/// {gamma, good:{...}, atoms:[{generation, offset, values:[...]}]}
Json to_json(const CZDecomposition& d);
Json to_json(const CZReport& r);
/// {gamma, goodPart:{tensor}, terms:[{indexSet, decomposition}], exceptionalSet:{measure, rowMeasure}}
Json to_json(const FiberDecomposition& d);

/// {ladder:{jMin,jMax}, psiRadius, phiRadius, decayOrder, profileStep, strict}; every field optional.
ParaproductConfig config_from_json(const Json& j);

/// One CSV row per y index, values across x.
std::string dense_to_csv(const DenseFunction2D& f);
/// "x,value" lines.
std::string signal_to_csv(const SampledFunction1D& f);
/// "alpha,measure" lines.
std::string weak_to_csv(const WeakNormEstimate& w);

Json parse(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Locale-independent shortest round-trip formatting.
std::string format_number(double v);

} // namespace fcz::io
