#pragma once

// JSON encodings.
//
//   FourierSeries       {"lo": int, "re": [...], "im": [...]}
//   MatrixSeries        {"r": int, "lo": int, "entries": [series, ...]}  row-major
//   GridMatrixFunction  {"r": int, "K": int, "samples": [...]}
//                       samples: for each k, row-major entries as re, im pairs
//   FactorizationResult MatrixSeries fields plus "diagnostics"
//
// Field order is fixed. Non-finite reals are written as the string "inf".

#include <filesystem>

#include <nlohmann/json.hpp>

#include "specfact/completion.hpp"
#include "specfact/fourier.hpp"
#include "specfact/recursion.hpp"
#include "specfact/verification.hpp"

namespace specfact {

using Json = nlohmann::ordered_json;

Json to_json(const FourierSeries& s);
Json to_json(const MatrixSeries& s);
Json to_json(const GridMatrixFunction& f);
Json to_json(const FactorizationResult& result);
Json to_json(const VerificationReport& report);
Json to_json(const EquivalenceReport& report);
Json to_json(const FactorizationConfig& config);
/// Debug dump: {"m", "N", "rows", "cols", "re", "im"} with row-major arrays.
Json to_json(const CompletionSystem& system);

// All parsers throw Error(ErrorKind::Parse) naming the offending field.
FourierSeries series_from_json(const Json& j);
MatrixSeries matrix_series_from_json(const Json& j);
GridMatrixFunction grid_function_from_json(const Json& j);
/// Keys K, tauTotal, tauAnalytic, N0, Nmax, seed; all optional.
FactorizationConfig config_from_json(const Json& j, FactorizationConfig base = {});

/// True for documents shaped like a GridMatrixFunction (have "samples").
bool is_grid_function(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace specfact
