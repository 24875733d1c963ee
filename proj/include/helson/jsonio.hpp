#pragma once

/**
 * @file jsonio.hpp
 * @brief JSON ingestion and normalized emission for measure specifications,
 *        moment sequences, form specs, and diagnostic reports.
 *
 * Field names follow the CLI contract:
 *   {"type":"discrete","atoms":[{"w":..,"point":{"explicit":[[j,v],..]}
 *                                         | {"bohr":s}}]}
 *   {"type":"halfline","density":"lebesgue" | "appendix" | "inverse-square"
 *                                | {"poly":{"interval":[a,b],"coeffs":[..]}}}
 *   {"type":"multiplicative","primes":{"<pos>": "delta"|"hilbert"|"appendix"
 *                                              | [c0,c1,...]}}
 *   {"type":"closed","name":"multiplicative-hilbert"|"power-of-two-hilbert"}
 *   {"type":"form","terms":[{"scalar":[re,im],
 *                            "directions":[[[j,re,im],...] | "dirichlet",...],
 *                            "point":{...}}]}
 */

#include <string>

#include <json.hpp>

#include "helson/diagnostics.hpp"
#include "helson/finiterank.hpp"
#include "helson/moments.hpp"

namespace helson {

Point pointFromJson(const nlohmann::json& j);
nlohmann::json pointToJson(const Point& p);

DiscreteMeasure discreteMeasureFromJson(const nlohmann::json& j);
HelsonFormSpec formSpecFromJson(const nlohmann::json& j);
nlohmann::json formSpecToJson(const HelsonFormSpec& spec);

/// Accepts every "type" listed above; "form" becomes a form-induced sequence.
MomentSequence momentSequenceFromJson(const nlohmann::json& j);

/// Normalized echo: parsing the result yields an identical structure, and
/// re-emitting it yields identical bytes.
nlohmann::json momentSequenceToJson(const MomentSequence& seq);

nlohmann::json diagnosticReportToJson(const DiagnosticReport& report);

/// Parse-then-emit normalization; idempotent, so emitted specs re-parse to
/// identical structures byte for byte.
nlohmann::json normalizeSpecJson(const nlohmann::json& j);

} // namespace helson
