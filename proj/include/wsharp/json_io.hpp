// Copyright 2026 The wsharp Authors.
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

// JSON encodings for polytopes, expressions and exhauster families.
//
// Polytope: [[x11,...,x1n], ...]
// Expr:     {"op":"affine","a":[...],"b":r}, {"op":"abs","arg":{...}},
//           {"op":"max","args":[...]}, ... (see docs/funcexpr.schema.json)
//
// Parse errors carry the JSON pointer of the offending node.

#include <string>
#include <vector>

#include <json.hpp>

#include "wsharp/geometry.hpp"
#include "wsharp/qdcalc.hpp"

namespace wsharp {

using json = nlohmann::json;

// Serializes with %.17g floats and insertion-ordered keys; non-finite
// floats must already be strings.
std::string dump_g17(const nlohmann::ordered_json& j, int indent = 2);

[[noreturn]] void schema_error(const std::string& pointer,
                               const std::string& message);

Vector vector_from_json(const json& j, const std::string& pointer,
                        int expected_dim = -1);
json vector_to_json(const Vector& v);

Polytope polytope_from_json(const json& j, const std::string& pointer = "");
json polytope_to_json(const Polytope& p);

// `dim` is the ambient dimension; atoms without explicit size (norm2) use it.
Expr expr_from_json(const json& j, int dim, const std::string& pointer = "");
json expr_to_json(const Expr& e);

// A list of polytopes.
std::vector<Polytope> polytope_list_from_json(const json& j,
                                              const std::string& pointer = "");

}  // namespace wsharp
