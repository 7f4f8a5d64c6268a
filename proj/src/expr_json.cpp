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

#include "wsharp/json_io.hpp"

#include <cmath>

namespace wsharp {

void schema_error(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::Schema,
              (pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

namespace {

const json& field(const json& j, const char* key, const std::string& ptr) {
  if (!j.is_object()) schema_error(ptr, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) {
    schema_error(ptr, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) schema_error(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(ptr, "non-finite number");
  return v;
}

std::vector<Monomial> terms_from_json(const json& j, int dim,
                                      const std::string& ptr) {
  if (!j.is_array()) schema_error(ptr, "expected an array of terms");
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    Monomial m;
    m.coef = number(field(j[i], "c", p), p + "/c");
    const json& e = field(j[i], "e", p);
    if (!e.is_array() || static_cast<int>(e.size()) != dim) {
      schema_error(p + "/e", "expected " + std::to_string(dim) +
                                 " integer exponents");
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (!e[k].is_number_integer() || e[k].get<int>() < 0) {
        schema_error(p + "/e/" + std::to_string(k),
                     "expected a nonnegative integer");
      }
      m.exponents.push_back(e[k].get<int>());
    }
    out.push_back(std::move(m));
  }
  return out;
}

json terms_to_json(const std::vector<Monomial>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back({{"c", t.coef}, {"e", t.exponents}});
  return arr;
}

std::vector<Expr> args_from_json(const json& j, int dim,
                                 const std::string& ptr) {
  const json& a = field(j, "args", ptr);
  if (!a.is_array() || a.empty()) {
    schema_error(ptr + "/args", "expected a nonempty array");
  }
  std::vector<Expr> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(expr_from_json(a[i], dim, ptr + "/args/" + std::to_string(i)));
  }
  return out;
}

Expr arg_from_json(const json& j, int dim, const std::string& ptr) {
  return expr_from_json(field(j, "arg", ptr), dim, ptr + "/arg");
}

}  // namespace

Vector vector_from_json(const json& j, const std::string& pointer,
                        int expected_dim) {
  if (j.is_number() && expected_dim == 1) {
    return Vector::Constant(1, number(j, pointer));
  }
  if (!j.is_array() || j.empty()) {
    schema_error(pointer, "expected a nonempty array of numbers");
  }
  if (expected_dim >= 0 && static_cast<int>(j.size()) != expected_dim) {
    schema_error(pointer, "expected " + std::to_string(expected_dim) +
                              " coordinates, got " + std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        number(j[i], pointer + "/" + std::to_string(i));
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Polytope polytope_from_json(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) {
    schema_error(pointer, "polytope must be a nonempty array of vertices");
  }
  std::vector<Vector> pts;
  int dim = -1;
  for (std::size_t i = 0; i < j.size(); ++i) {
    pts.push_back(vector_from_json(j[i], pointer + "/" + std::to_string(i), dim));
    dim = static_cast<int>(pts.back().size());
  }
  return Polytope(std::move(pts));
}

json polytope_to_json(const Polytope& p) {
  json arr = json::array();
  for (const auto& v : p.vertices()) arr.push_back(vector_to_json(v));
  return arr;
}

std::vector<Polytope> polytope_list_from_json(const json& j,
                                              const std::string& pointer) {
  if (!j.is_array() || j.empty()) {
    schema_error(pointer, "expected a nonempty array of polytopes");
  }
  std::vector<Polytope> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(polytope_from_json(j[i], pointer + "/" + std::to_string(i)));
    check_same_dim("exhauster", out.front().dim(), out.back().dim());
  }
  return out;
}

Expr expr_from_json(const json& j, int dim, const std::string& ptr) {
  if (!j.is_object()) schema_error(ptr, "expression must be an object");
  const json& opj = field(j, "op", ptr);
  if (!opj.is_string()) schema_error(ptr + "/op", "expected a string");
  const std::string op = opj.get<std::string>();

  try {
    if (op == "affine") {
      const Vector a = vector_from_json(field(j, "a", ptr), ptr + "/a", dim);
      const double b = j.contains("b") ? number(j["b"], ptr + "/b") : 0.0;
      return Expr::affine(a, b);
    }
    if (op == "const") {
      return Expr::constant(dim, number(field(j, "value", ptr), ptr + "/value"));
    }
    if (op == "coord") {
      const json& i = field(j, "index", ptr);
      if (!i.is_number_integer() || i.get<int>() < 0 || i.get<int>() >= dim) {
        schema_error(ptr + "/index", "coordinate index out of range");
      }
      return Expr::coordinate(dim, i.get<int>());
    }
    if (op == "norm2") {
      std::optional<Vector> c;
      if (j.contains("center")) {
        c = vector_from_json(j["center"], ptr + "/center", dim);
      }
      return Expr::norm2(dim, c);
    }
    if (op == "poly") {
      return Expr::poly(dim, terms_from_json(field(j, "terms", ptr), dim,
                                             ptr + "/terms"));
    }
    if (op == "rational") {
      return Expr::rational(
          dim, terms_from_json(field(j, "num", ptr), dim, ptr + "/num"),
          terms_from_json(field(j, "den", ptr), dim, ptr + "/den"));
    }
    if (op == "sum") return Expr::sum(args_from_json(j, dim, ptr));
    if (op == "max") return Expr::max(args_from_json(j, dim, ptr));
    if (op == "min") return Expr::min(args_from_json(j, dim, ptr));
    if (op == "scale") {
      return Expr::scale(number(field(j, "alpha", ptr), ptr + "/alpha"),
                         arg_from_json(j, dim, ptr));
    }
    if (op == "neg") return Expr::neg(arg_from_json(j, dim, ptr));
    if (op == "pospart") return Expr::pospart(arg_from_json(j, dim, ptr));
    if (op == "abs") return Expr::abs(arg_from_json(j, dim, ptr));
    if (op == "piecewise") {
      const json& c = field(j, "coord", ptr);
      if (!c.is_number_integer()) schema_error(ptr + "/coord", "expected an integer");
      const json& br = field(j, "breaks", ptr);
      if (!br.is_array()) schema_error(ptr + "/breaks", "expected an array");
      std::vector<double> breaks;
      for (std::size_t i = 0; i < br.size(); ++i) {
        breaks.push_back(number(br[i], ptr + "/breaks/" + std::to_string(i)));
      }
      const json& pc = field(j, "pieces", ptr);
      if (!pc.is_array()) schema_error(ptr + "/pieces", "expected an array");
      std::vector<Expr> pieces;
      for (std::size_t i = 0; i < pc.size(); ++i) {
        pieces.push_back(
            expr_from_json(pc[i], dim, ptr + "/pieces/" + std::to_string(i)));
      }
      return Expr::piecewise(c.get<int>(), std::move(breaks), std::move(pieces));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema_error(ptr, e.what());
  }
  schema_error(ptr + "/op", "unknown op \"" + op + "\"");
}

json expr_to_json(const Expr& e) {
  const ExprNode& n = e.node();
  json j;
  j["op"] = to_string(n.kind);
  switch (n.kind) {
    case ExprKind::Affine:
      j["a"] = vector_to_json(n.a);
      j["b"] = n.b;
      break;
    case ExprKind::Norm2:
      if (!n.a.isZero(0.0)) j["center"] = vector_to_json(n.a);
      break;
    case ExprKind::Poly:
      j["terms"] = terms_to_json(n.num);
      break;
    case ExprKind::Rational:
      j["num"] = terms_to_json(n.num);
      j["den"] = terms_to_json(n.den);
      break;
    case ExprKind::Sum:
    case ExprKind::Max:
    case ExprKind::Min: {
      json arr = json::array();
      for (const auto& c : n.args) arr.push_back(expr_to_json(c));
      j["args"] = arr;
      break;
    }
    case ExprKind::Scale:
      j["alpha"] = n.b;
      j["arg"] = expr_to_json(n.args[0]);
      break;
    case ExprKind::Neg:
    case ExprKind::PosPart:
    case ExprKind::Abs:
      j["arg"] = expr_to_json(n.args[0]);
      break;
    case ExprKind::Piecewise: {
      j["coord"] = n.coord;
      j["breaks"] = n.breaks;
      json arr = json::array();
      for (const auto& c : n.args) arr.push_back(expr_to_json(c));
      j["pieces"] = arr;
      break;
    }
  }
  return j;
}

}  // namespace wsharp
