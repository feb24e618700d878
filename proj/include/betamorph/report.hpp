#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "betamorph/field.hpp"

namespace betamorph {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Json, Csv, Text };

// Fixed-significant-digit decimal rendering; exact integer arithmetic end to
// end, so the output is byte-stable across runs and platforms.
std::string rat_decimal_string(const Rat& r, int digits);
std::string decimal_string(const FieldElement& x, int digits);

Json versions_block();

// Every command report carries the requested beta spec, the minimal
// polynomial actually used, and a decimal approximation.
Json beta_block(const FieldPtr& f, const std::string& beta_spec, int digits);

// Isomorphism verdict via the preimage-count obstruction; multinacci betas
// additionally carry the transition-matrix certificate.  forced_iterate
// overrides the compared power when positive.
Json certify_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                    int forced_iterate = 0);

// Self-check bundle for the regime of beta; "all_ok" aggregates the checks.
// level_override pins the decomposition level when positive.
Json verify_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                   int level_override = 0);

// Preimage-count step functions of T^n and/or S^n.  which: 'T', 'S' or 'B'
// for both (witness comparison included when both are present).
Json spectrum_report(const FieldPtr& f, const std::string& beta_spec, int digits, int n,
                     char which);

// Markov partition, transition matrix, spectral certificate, stationary chain
// and entropy for one map; "found": false when the orbit of 1 never closes.
Json markov_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                   char map_letter, int depth);

// Orbit of 1 under one map, with the exact cycle when it closes.
Json orbit_report(const FieldPtr& f, const std::string& beta_spec, int digits,
                  char map_letter, int depth);

std::string render(const Json& report, ReportFormat fmt);

// Merges reports of the same command (one per beta) into one document:
// a JSON array, one CSV table, or text blocks in input order.
std::string render_many(const std::vector<Json>& reports, ReportFormat fmt);

}  // namespace betamorph
