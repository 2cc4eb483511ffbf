// Copyright 2026 The qpmme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpmme/analysis.hpp"
#include "qpmme/bohr.hpp"
#include "qpmme/generator.hpp"
#include "qpmme/model.hpp"

namespace qpmme::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Complex numbers are [re, im]; matrices are arrays of rows.
Json to_json(Complex z);
Json to_json(const CMatrix& m);
Json to_json(const MultiIndex& n);
Json to_json(const FourierOperatorSeries& s);
CMatrix matrix_from_json(const Json& j, const std::string& field);

// Model file: see README for the schema. p_t is given either as explicit
// coefficients ("p_series") or as a periodic-generator recipe ("p_generator");
// if neither is present p = I.
ReducedModel model_from_json(const Json& j);
Json model_to_json(const ReducedModel& m);
ReducedModel load_model(const std::string& path);
ReducedModel parse_model(const std::string& text);
void save_model(const ReducedModel& m, const std::string& path);

Json validation_to_json(const ValidationReport& r, const Tolerances& tol);
Json decomposition_to_json(const BohrDecomposition& d);
Json bundle_to_json(const GeneratorBundle& g);
Json stability_to_json(const StabilityReport& r);
Json limit_cycle_to_json(const LimitCycle& c, const std::vector<double>& grid);
Json decay_fit_to_json(const DecayFit& f);
Json cptp_to_json(const CptpReport& r);
Json error_to_json(const std::string& code, const std::string& message);

// Deterministic serialization: insertion-ordered keys, doubles printed with
// 17 significant digits, two-space indentation.
std::string dump(const Json& j);

// Columns: t, re/im of each product-form entry (column-major order), trace,
// min_eig, and when `direct` is non-empty the direct-integrator entries and
// the trace-norm distance between the two paths.
void write_trajectory_csv(std::ostream& os, const std::vector<double>& times, const std::vector<CMatrix>& product,
                          const std::vector<CMatrix>& direct);

} // namespace qpmme::io
