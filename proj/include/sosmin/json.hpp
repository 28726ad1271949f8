#pragma once

// JSON forms of every reported type. Rationals are {"num", "den"} string
// pairs and integers are numbers when they fit in 64 bits, strings otherwise.

#include <nlohmann/json.hpp>

#include "sosmin/cones.hpp"
#include "sosmin/linalg.hpp"
#include "sosmin/polytope.hpp"
#include "sosmin/sym_matrix.hpp"
#include "sosmin/variety.hpp"
#include "sosmin/witness.hpp"

namespace nlohmann {

template <>
struct adl_serializer<mpz_class> {
  static void to_json(json& j, const mpz_class& x);
  static void from_json(const json& j, mpz_class& x);
};

template <>
struct adl_serializer<mpq_class> {
  static void to_json(json& j, const mpq_class& x);
  static void from_json(const json& j, mpq_class& x);
};

template <>
struct adl_serializer<sosmin::RationalMatrix> {
  static void to_json(json& j, const sosmin::RationalMatrix& a);
  static sosmin::RationalMatrix from_json(const json& j);
};

template <>
struct adl_serializer<sosmin::LatticePolytope> {
  static void to_json(json& j, const sosmin::LatticePolytope& q);
  static sosmin::LatticePolytope from_json(const json& j);
};

/// Known constructions are recorded and rebuilt on parsing, so a parsed
/// model has the same canonical R2 basis as the original.
template <>
struct adl_serializer<sosmin::VarietyModel> {
  static void to_json(json& j, const sosmin::VarietyModel& model);
  static sosmin::VarietyModel from_json(const json& j);
};

template <>
struct adl_serializer<sosmin::WitnessReport> {
  static void to_json(json& j, const sosmin::WitnessReport& r);
  static sosmin::WitnessReport from_json(const json& j);
};

}  // namespace nlohmann

namespace sosmin {

using Json = nlohmann::json;

void to_json(Json& j, const SparsePolynomial& f);
void from_json(const Json& j, SparsePolynomial& f);
void to_json(Json& j, const HStar& h);
void from_json(const Json& j, HStar& h);
void to_json(Json& j, const NormalityCheck& c);
void from_json(const Json& j, NormalityCheck& c);
void to_json(Json& j, const ModelMap& map);
void from_json(const Json& j, ModelMap& map);
void to_json(Json& j, const ClassificationReport& r);
void from_json(const Json& j, ClassificationReport& r);
void to_json(Json& j, const AmGmWitness& w);
void from_json(const Json& j, AmGmWitness& w);
void to_json(Json& j, const DiagonalObstruction& o);
void from_json(const Json& j, DiagonalObstruction& o);

void to_json(Json& j, const QuadraticForm& f);
void from_json(const Json& j, QuadraticForm& f);
void to_json(Json& j, const SymMatrix& s);
void from_json(const Json& j, SymMatrix& s);
void to_json(Json& j, const DualFunctional& ell);
void from_json(const Json& j, DualFunctional& ell);
void to_json(Json& j, const SosBudget& b);
void from_json(const Json& j, SosBudget& b);
void to_json(Json& j, const SosOutcome& o);
void from_json(const Json& j, SosOutcome& o);
void to_json(Json& j, const SeparatingFunctional& s);
void from_json(const Json& j, SeparatingFunctional& s);

void to_json(Json& j, const HyperplaneSections& s);
void from_json(const Json& j, HyperplaneSections& s);
void to_json(Json& j, const FormChoice& f);
void from_json(const Json& j, FormChoice& f);
void to_json(Json& j, const DeltaChoice& d);
void from_json(const Json& j, DeltaChoice& d);
void to_json(Json& j, const NotSosCertificate& c);
void from_json(const Json& j, NotSosCertificate& c);

SosStatus sos_status_from_string(const std::string& s);
PolytopeFamily family_from_string(const std::string& s);
Density density_from_string(const std::string& s);
ConeEquality cone_equality_from_string(const std::string& s);

}  // namespace sosmin
