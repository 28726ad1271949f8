#include "sosmin/json.hpp"

#include <cmath>
#include <limits>

#include "sosmin/errors.hpp"

namespace nlohmann {

using sosmin::Error;
using sosmin::ErrorKind;

void adl_serializer<mpz_class>::to_json(json& j, const mpz_class& x) {
  if (x.fits_slong_p()) {
    j = x.get_si();
  } else {
    j = x.get_str();
  }
}

void adl_serializer<mpz_class>::from_json(const json& j, mpz_class& x) {
  if (j.is_number_integer()) {
    x = j.get<long>();
  } else if (j.is_string()) {
    if (x.set_str(j.get<std::string>(), 10) != 0) throw Error(ErrorKind::Validation, "bad integer " + j.dump());
  } else {
    throw Error(ErrorKind::Validation, "expected an integer, got " + j.dump());
  }
}

void adl_serializer<mpq_class>::to_json(json& j, const mpq_class& x) {
  j = json{{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}};
}

void adl_serializer<mpq_class>::from_json(const json& j, mpq_class& x) {
  if (j.is_object()) {
    auto part = [&](const char* key) {
      const auto& v = j.at(key);
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    x = sosmin::make_rational(part("num"), j.contains("den") ? part("den") : "1");
  } else if (j.is_number_integer()) {
    x = j.get<long>();
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto slash = s.find('/');
    x = slash == std::string::npos ? sosmin::make_rational(s) : sosmin::make_rational(s.substr(0, slash), s.substr(slash + 1));
  } else {
    throw Error(ErrorKind::Validation, "expected a rational, got " + j.dump());
  }
}

void adl_serializer<sosmin::RationalMatrix>::to_json(json& j, const sosmin::RationalMatrix& a) {
  json rows = json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) rows.push_back(std::vector<mpq_class>(a.row(r).begin(), a.row(r).end()));
  j = json{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", rows}};
}

sosmin::RationalMatrix adl_serializer<sosmin::RationalMatrix>::from_json(const json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
  std::vector<mpq_class> entries;
  for (const auto& row : j.at("entries")) {
    if (row.size() != cols) throw Error(ErrorKind::DimensionMismatch, "matrix row length differs from cols");
    for (const auto& x : row) entries.push_back(x.get<mpq_class>());
  }
  if (entries.size() != rows * cols) throw Error(ErrorKind::DimensionMismatch, "matrix entry count differs from rows x cols");
  return sosmin::RationalMatrix(rows, cols, std::move(entries));
}

void adl_serializer<sosmin::LatticePolytope>::to_json(json& j, const sosmin::LatticePolytope& q) {
  j = json{{"ambient_rank", q.ambient_rank()}, {"vertices", q.vertices()}};
}

sosmin::LatticePolytope adl_serializer<sosmin::LatticePolytope>::from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices")) throw Error(ErrorKind::Validation, "polytope needs \"vertices\"");
  auto vertices = j.at("vertices").get<std::vector<sosmin::LatticePoint>>();
  if (vertices.empty()) throw Error(ErrorKind::Validation, "polytope needs at least one vertex");
  const std::size_t rank = j.contains("ambient_rank") ? j.at("ambient_rank").get<std::size_t>() : vertices.front().size();
  return sosmin::LatticePolytope(rank, std::move(vertices));
}

void adl_serializer<sosmin::VarietyModel>::to_json(json& j, const sosmin::VarietyModel& model) {
  json relations = json::array();
  for (const auto& r : model.i2_basis()) relations.push_back(sosmin::relation_matrix(r, model.vars()));
  j = json{{"name", model.name()},       {"n", model.n()},
           {"m", model.m()},             {"r1_basis", model.r1_basis()},
           {"i2_basis", relations},      {"dim_r2", model.dim_r2()}};
  if (model.degree()) j["degree"] = *model.degree();
  if (model.is_toric()) {
    const auto& pts = model.r1_exponents();
    j["construction"] = {{"kind", "toric"}, {"polytope", sosmin::LatticePolytope(pts.front().size(), pts)}};
  } else if (model.sampler() == sosmin::PointSampler::Scroll) {
    j["construction"] = {{"kind", "scroll"}, {"degrees", model.scroll_degrees()}};
  } else if (model.sampler() == sosmin::PointSampler::VeroneseCone) {
    j["construction"] = {{"kind", "veronese_cone"}};
  } else if (model.sampler() == sosmin::PointSampler::Quadric) {
    j["construction"] = {{"kind", "quadric"}};
  }
}

sosmin::VarietyModel adl_serializer<sosmin::VarietyModel>::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, "model must be an object");
  std::vector<sosmin::QuadraticRelation> relations;
  std::vector<std::string> labels;
  if (j.contains("r1_basis")) {
    labels = j.at("r1_basis").get<std::vector<std::string>>();
  } else if (j.contains("n")) {
    for (std::size_t i = 0; i <= j.at("n").get<std::size_t>(); ++i) labels.push_back("x" + std::to_string(i));
  }
  if (j.contains("n") && j.at("n").get<std::size_t>() + 1 != labels.size())
    throw Error(ErrorKind::DimensionMismatch, "n does not match r1_basis");
  if (j.contains("i2_basis"))
    for (const auto& r : j.at("i2_basis"))
      relations.push_back(sosmin::relation_from_matrix(r.get<std::vector<mpq_class>>(), labels.size()));

  if (j.contains("construction")) {
    const auto& c = j.at("construction");
    const auto kind = c.at("kind").get<std::string>();
    std::optional<sosmin::VarietyModel> built;
    if (kind == "toric") {
      built = sosmin::toric_model(c.at("polytope").get<sosmin::LatticePolytope>());
    } else if (kind == "scroll") {
      built = sosmin::scroll_model(c.at("degrees").get<std::vector<long>>());
    } else if (kind == "veronese_cone") {
      built = sosmin::veronese_cone_model(j.at("n").get<std::size_t>());
    } else if (kind == "quadric") {
      built = sosmin::quadric_model(j.at("n").get<std::size_t>());
    } else {
      throw Error(ErrorKind::Validation, "unknown model construction " + kind);
    }
    if (j.contains("i2_basis") && built->i2_basis() != relations)
      throw Error(ErrorKind::Validation, "i2_basis does not match the recorded construction");
    if (!labels.empty() && built->r1_basis() != labels)
      throw Error(ErrorKind::Validation, "r1_basis does not match the recorded construction");
    return *std::move(built);
  }
  if (labels.empty()) throw Error(ErrorKind::Validation, "model needs r1_basis or n");
  if (!j.contains("m")) throw Error(ErrorKind::Validation, "model needs m");
  return sosmin::VarietyModel(j.value("name", std::string("custom")), std::move(labels), j.at("m").get<std::size_t>(),
                              std::move(relations));
}

namespace {

json finite(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

void adl_serializer<sosmin::WitnessReport>::to_json(json& j, const sosmin::WitnessReport& r) {
  json points = json::array();
  for (std::size_t i = 0; i < r.sections.points.size(); ++i) {
    const bool selected = std::find(r.selected.begin(), r.selected.end(), i) != r.selected.end();
    points.push_back({{"coordinates", r.sections.points[i]}, {"selected", selected}});
  }
  j = json{{"d", r.d},
           {"model", r.model},
           {"hyperplanes",
            {{"first", r.sections.first},
             {"second", r.sections.second},
             {"h0", r.h[0]},
             {"h1", r.h[1]},
             {"h2", r.h[2]},
             {"draws", r.sections.draws}}},
           {"points", points},
           {"selected", r.selected},
           {"f", r.form.f},
           {"form", r.form},
           {"delta", r.delta.delta},
           {"delta_search", r.delta},
           {"witness", r.witness},
           {"not_sos_certificate", r.certificate},
           {"nonneg_evidence",
            {{"count", r.delta.samples}, {"min_value", finite(r.delta.min_value)}, {"margin", finite(r.delta.margin())}}},
           {"attempts", r.attempts}};
  j["functional"] = r.functional ? json(*r.functional) : json(nullptr);
  j["sos_status"] = r.sos_status ? json(to_string(*r.sos_status)) : json(nullptr);
}

sosmin::WitnessReport adl_serializer<sosmin::WitnessReport>::from_json(const json& j) {
  sosmin::WitnessReport r{.d = j.at("d").get<std::size_t>(),
                          .model = j.at("model").get<sosmin::VarietyModel>(),
                          .sections = {},
                          .selected = j.at("selected").get<std::vector<std::size_t>>(),
                          .h = {},
                          .form = j.at("form").get<sosmin::FormChoice>(),
                          .delta = j.at("delta_search").get<sosmin::DeltaChoice>(),
                          .witness = j.at("witness").get<sosmin::QuadraticForm>(),
                          .certificate = j.at("not_sos_certificate").get<sosmin::NotSosCertificate>(),
                          .functional = std::nullopt,
                          .sos_status = std::nullopt,
                          .attempts = j.at("attempts").get<std::size_t>()};
  const auto& hp = j.at("hyperplanes");
  r.sections.d = r.d;
  r.sections.first = hp.at("first").get<std::vector<sosmin::LinearForm>>();
  r.sections.second = hp.at("second").get<std::vector<sosmin::LinearForm>>();
  r.sections.h1 = hp.at("h1").get<std::vector<mpq_class>>();
  r.sections.h2 = hp.at("h2").get<std::vector<mpq_class>>();
  r.sections.draws = hp.at("draws").get<std::size_t>();
  for (const auto& p : j.at("points")) r.sections.points.push_back(p.at("coordinates").get<sosmin::ProjectivePoint>());
  r.h = {hp.at("h0").get<std::vector<mpq_class>>(), r.sections.h1, r.sections.h2};
  r.form.f = j.at("f").get<sosmin::QuadraticForm>();
  r.delta.delta = j.at("delta").get<mpq_class>();
  if (!j.at("functional").is_null()) r.functional = j.at("functional").get<sosmin::SeparatingFunctional>();
  if (!j.at("sos_status").is_null()) r.sos_status = sosmin::sos_status_from_string(j.at("sos_status").get<std::string>());
  return r;
}

}  // namespace nlohmann

namespace sosmin {

namespace {

Json finite(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double read_double(const Json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

template <class T>
std::optional<T> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

SosStatus sos_status_from_string(const std::string& s) {
  for (auto v : {SosStatus::Certificate, SosStatus::Infeasible, SosStatus::Undetermined})
    if (to_string(v) == s) return v;
  throw Error(ErrorKind::Validation, "unknown SOS status " + s);
}

PolytopeFamily family_from_string(const std::string& s) {
  for (auto v : {PolytopeFamily::PyramidOverTwiceSimplex, PolytopeFamily::CayleySegments, PolytopeFamily::ImageOfModel,
                 PolytopeFamily::NotMinimal})
    if (s == to_string(v)) return v;
  throw Error(ErrorKind::Validation, "unknown polytope family " + s);
}

Density density_from_string(const std::string& s) {
  for (auto v : {Density::Dense, Density::NotDense})
    if (s == to_string(v)) return v;
  throw Error(ErrorKind::Validation, "unknown density " + s);
}

ConeEquality cone_equality_from_string(const std::string& s) {
  for (auto v : {ConeEquality::Equal, ConeEquality::NotEqual})
    if (s == to_string(v)) return v;
  throw Error(ErrorKind::Validation, "unknown cone comparison " + s);
}

void to_json(Json& j, const SparsePolynomial& f) {
  Json terms = Json::array();
  for (const auto& [exp, c] : f.terms())
    terms.push_back({{"exp", exp}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  j = Json{{"rank", f.rank()}, {"terms", terms}};
}

void from_json(const Json& j, SparsePolynomial& f) {
  const auto& terms = j.at("terms");
  std::size_t rank = j.value("rank", std::size_t{0});
  if (!j.contains("rank") && !terms.empty()) rank = terms.front().at("exp").size();
  f = SparsePolynomial(rank);
  for (const auto& t : terms) {
    auto exp = t.at("exp").get<LatticePoint>();
    if (exp.size() != rank) throw Error(ErrorKind::DimensionMismatch, "term exponent length differs from rank");
    f.add_term(exp, t.get<Rational>());
  }
}

void to_json(Json& j, const HStar& h) { j = h.coefficients; }
void from_json(const Json& j, HStar& h) {
  h.coefficients = (j.is_object() ? j.at("coefficients") : j).get<std::vector<Integer>>();
}

void to_json(Json& j, const NormalityCheck& c) {
  j = Json{{"normal", c.normal}, {"counterexample", optional_json(c.counterexample)}};
}
void from_json(const Json& j, NormalityCheck& c) {
  c.normal = j.at("normal").get<bool>();
  c.counterexample = read_optional<LatticePoint>(j, "counterexample");
}

void to_json(Json& j, const ModelMap& map) {
  j = Json{{"linear", map.linear},
           {"translation", map.translation},
           {"segment_lengths", map.segment_lengths},
           {"pyramid_apexes", map.pyramid_apexes}};
}
void from_json(const Json& j, ModelMap& map) {
  map.linear = j.at("linear").get<std::vector<IntegerVector>>();
  map.translation = j.at("translation").get<IntegerVector>();
  map.segment_lengths = j.at("segment_lengths").get<std::vector<long>>();
  map.pyramid_apexes = j.at("pyramid_apexes").get<std::size_t>();
}

void to_json(Json& j, const ClassificationReport& r) {
  j = Json{{"h_star", r.h_star},
           {"h2_zero", r.h2_zero},
           {"two_normal", r.two_normal},
           {"polytope_degree", r.polytope_degree},
           {"degree_one", r.degree_one},
           {"family", to_string(r.family)},
           {"model_map", optional_json(r.model_map)},
           {"sublattice_index", r.sublattice_index},
           {"density", to_string(r.density)},
           {"density_criterion", r.density_criterion},
           {"pos_equals_sos", to_string(r.pos_equals_sos)}};
}
void from_json(const Json& j, ClassificationReport& r) {
  r.h_star = j.at("h_star").get<HStar>();
  r.h2_zero = j.at("h2_zero").get<bool>();
  r.two_normal = j.at("two_normal").get<bool>();
  r.polytope_degree = j.at("polytope_degree").get<std::size_t>();
  r.degree_one = j.at("degree_one").get<bool>();
  r.family = family_from_string(j.at("family").get<std::string>());
  r.model_map = read_optional<ModelMap>(j, "model_map");
  r.sublattice_index = j.at("sublattice_index").get<Integer>();
  r.density = density_from_string(j.at("density").get<std::string>());
  r.density_criterion = j.at("density_criterion").get<std::string>();
  r.pos_equals_sos = cone_equality_from_string(j.at("pos_equals_sos").get<std::string>());
}

void to_json(Json& j, const AmGmWitness& w) {
  j = Json{{"polynomial", w.polynomial}, {"u", w.u}, {"support", w.support}, {"weights", w.weights}};
}
void from_json(const Json& j, AmGmWitness& w) {
  w.polynomial = j.at("polynomial").get<SparsePolynomial>();
  w.u = j.at("u").get<LatticePoint>();
  w.support = j.at("support").get<std::vector<LatticePoint>>();
  w.weights = j.at("weights").get<std::vector<Integer>>();
}

void to_json(Json& j, const DiagonalObstruction& o) {
  j = Json{{"exponent", o.exponent}, {"pair_count", o.pair_count}};
}
void from_json(const Json& j, DiagonalObstruction& o) {
  o.exponent = j.at("exponent").get<LatticePoint>();
  o.pair_count = j.at("pair_count").get<std::size_t>();
}

void to_json(Json& j, const QuadraticForm& f) { j = Json{{"coefficients", f.coefficients}}; }
void from_json(const Json& j, QuadraticForm& f) {
  f.coefficients = (j.is_object() ? j.at("coefficients") : j).get<std::vector<Rational>>();
}

void to_json(Json& j, const SymMatrix& s) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < s.dim(); ++k) row.push_back(finite(s(i, k)));
    rows.push_back(std::move(row));
  }
  j = Json{{"dim", s.dim()}, {"rows", rows}};
}
void from_json(const Json& j, SymMatrix& s) {
  const auto& rows = j.at("rows");
  const std::size_t dim = j.value("dim", rows.size());
  if (rows.size() != dim) throw Error(ErrorKind::DimensionMismatch, "matrix row count differs from dim");
  std::vector<double> dense;
  for (const auto& row : rows) {
    if (row.size() != dim) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
    for (const auto& x : row) dense.push_back(read_double(x));
  }
  s = SymMatrix::from_dense(dim, dense);
}

void to_json(Json& j, const DualFunctional& ell) {
  Json values = Json::array();
  for (double v : ell.values) values.push_back(finite(v));
  j = Json{{"values", values},
           {"exact_values", optional_json(ell.exact_values)},
           {"moment", ell.moment},
           {"exact_moment", optional_json(ell.exact_moment)}};
}
void from_json(const Json& j, DualFunctional& ell) {
  ell.values.clear();
  for (const auto& v : j.at("values")) ell.values.push_back(read_double(v));
  ell.exact_values = read_optional<std::vector<Rational>>(j, "exact_values");
  ell.moment = j.at("moment").get<SymMatrix>();
  ell.exact_moment = read_optional<RationalMatrix>(j, "exact_moment");
}

void to_json(Json& j, const SosBudget& b) {
  j = Json{{"max_iterations", b.max_iterations},
           {"feas_tol", b.feas_tol},
           {"psd_tol", b.psd_tol},
           {"sep_tol", b.sep_tol},
           {"check_every", b.check_every}};
}
void from_json(const Json& j, SosBudget& b) {
  b.max_iterations = j.at("max_iterations").get<std::size_t>();
  b.feas_tol = j.at("feas_tol").get<double>();
  b.psd_tol = j.at("psd_tol").get<double>();
  b.sep_tol = j.at("sep_tol").get<double>();
  b.check_every = j.at("check_every").get<std::size_t>();
}

void to_json(Json& j, const SosOutcome& o) {
  j = Json{{"status", to_string(o.status)},
           {"budget", o.budget},
           {"iterations", o.iterations},
           {"residual", finite(o.residual)},
           {"min_eigenvalue", finite(o.min_eigenvalue)},
           {"dual_value", finite(o.dual_value)}};
  if (o.gram) {
    const auto eig = sym_eigen(*o.gram);
    j["gram"] = {{"matrix", *o.gram},
                 {"eigenvalues", {{"min", finite(eig.values.front())}, {"max", finite(eig.values.back())}}}};
  } else {
    j["gram"] = nullptr;
  }
  j["dual"] = optional_json(o.dual);
}
void from_json(const Json& j, SosOutcome& o) {
  o.status = sos_status_from_string(j.at("status").get<std::string>());
  o.budget = j.at("budget").get<SosBudget>();
  o.iterations = j.at("iterations").get<std::size_t>();
  o.residual = read_double(j.at("residual"));
  o.min_eigenvalue = read_double(j.at("min_eigenvalue"));
  o.dual_value = read_double(j.at("dual_value"));
  o.gram.reset();
  if (!j.at("gram").is_null()) o.gram = j.at("gram").at("matrix").get<SymMatrix>();
  o.dual = read_optional<DualFunctional>(j, "dual");
}

void to_json(Json& j, const SeparatingFunctional& s) {
  j = Json{{"functional", s.functional},
           {"points", s.points},
           {"lambdas", s.lambdas},
           {"kappas", s.kappas},
           {"interpolant", s.interpolant}};
}
void from_json(const Json& j, SeparatingFunctional& s) {
  s.functional = j.at("functional").get<DualFunctional>();
  s.points = j.at("points").get<std::vector<std::vector<Rational>>>();
  s.lambdas = j.at("lambdas").get<std::vector<Rational>>();
  s.kappas = j.at("kappas").get<std::vector<Rational>>();
  s.interpolant = j.at("interpolant").get<std::vector<Rational>>();
}

void to_json(Json& j, const HyperplaneSections& s) {
  j = Json{{"d", s.d},   {"first", s.first},   {"second", s.second}, {"h1", s.h1},
           {"h2", s.h2}, {"points", s.points}, {"draws", s.draws}};
}
void from_json(const Json& j, HyperplaneSections& s) {
  s.d = j.at("d").get<std::size_t>();
  s.first = j.at("first").get<std::vector<LinearForm>>();
  s.second = j.at("second").get<std::vector<LinearForm>>();
  s.h1 = j.at("h1").get<std::vector<Rational>>();
  s.h2 = j.at("h2").get<std::vector<Rational>>();
  s.points = j.at("points").get<std::vector<ProjectivePoint>>();
  s.draws = j.at("draws").get<std::size_t>();
}

void to_json(Json& j, const FormChoice& f) {
  j = Json{{"solution_dimension", f.solution_dimension},
           {"l2_rank", f.l2_rank},
           {"quotient_dimension", f.quotient_dimension}};
}
void from_json(const Json& j, FormChoice& f) {
  f.solution_dimension = j.at("solution_dimension").get<std::size_t>();
  f.l2_rank = j.at("l2_rank").get<std::size_t>();
  f.quotient_dimension = j.at("quotient_dimension").get<std::size_t>();
  if (j.contains("f")) f.f = j.at("f").get<QuadraticForm>();
}

void to_json(Json& j, const DeltaChoice& d) {
  j = Json{{"delta", d.delta},
           {"estimate", finite(d.estimate)},
           {"halvings", d.halvings},
           {"samples", d.samples},
           {"min_value", finite(d.min_value)},
           {"scale", finite(d.scale)}};
}
void from_json(const Json& j, DeltaChoice& d) {
  d.delta = j.at("delta").get<Rational>();
  d.estimate = read_double(j.at("estimate"));
  d.halvings = j.at("halvings").get<std::size_t>();
  d.samples = j.at("samples").get<std::size_t>();
  d.min_value = read_double(j.at("min_value"));
  d.scale = read_double(j.at("scale"));
}

void to_json(Json& j, const NotSosCertificate& c) {
  j = Json{{"vanishing_dimension", c.vanishing_dimension},
           {"span_rank", c.span_rank},
           {"l2_rank", c.l2_rank},
           {"l2_with_f_rank", c.l2_with_f_rank}};
}
void from_json(const Json& j, NotSosCertificate& c) {
  c.vanishing_dimension = j.at("vanishing_dimension").get<std::size_t>();
  c.span_rank = j.at("span_rank").get<std::size_t>();
  c.l2_rank = j.at("l2_rank").get<std::size_t>();
  c.l2_with_f_rank = j.at("l2_with_f_rank").get<std::size_t>();
}

}  // namespace sosmin
