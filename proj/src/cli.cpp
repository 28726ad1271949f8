#include "sosmin/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "sosmin/errors.hpp"
#include "sosmin/json.hpp"

namespace sosmin {

namespace {

const std::set<std::string> kPolytopeFamilies = {"simplex", "higashitani", "reeve", "cayley", "pyramid", "segment"};

Error invalid(const std::string& what) { return Error(ErrorKind::Validation, what); }

std::size_t count_param(const Json& j, const char* key) {
  const long v = j.at(key).get<long>();
  if (v < 0) throw invalid(std::string(key) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

LatticePolytope parse_polytope(const Json& j) {
  if (!j.is_object()) throw invalid("polytope input must be a JSON object");
  if (j.contains("polytope")) return parse_polytope(j.at("polytope"));
  if (!j.contains("family")) return j.get<LatticePolytope>();
  const auto family = j.at("family").get<std::string>();
  if (family == "simplex") return simplex(count_param(j, "m"), j.value("scale", 1L));
  if (family == "higashitani") return higashitani_simplex(count_param(j, "m"), j.at("k").get<long>());
  if (family == "reeve") return reeve_simplex(j.at("q").get<long>());
  if (family == "cayley") return cayley_segments(j.at("lengths").get<std::vector<long>>());
  if (family == "pyramid") return pyramid_over_doubled_triangle(count_param(j, "m"));
  if (family == "segment") return segment(j.at("lo").get<long>(), j.at("hi").get<long>());
  throw invalid("unknown polytope family " + family);
}

bool is_polytope_input(const Json& j) {
  if (j.contains("polytope") || j.contains("vertices")) return true;
  return j.contains("family") && kPolytopeFamilies.contains(j.at("family").get<std::string>());
}

VarietyModel parse_model(const Json& j) {
  if (!j.is_object()) throw invalid("model input must be a JSON object");
  if (j.contains("model")) return parse_model(j.at("model"));
  if (is_polytope_input(j)) return toric_model(parse_polytope(j));
  if (j.contains("family")) {
    const auto family = j.at("family").get<std::string>();
    if (family == "veronese") return veronese_model(count_param(j, "n"), count_param(j, "d"));
    if (family == "segre_veronese")
      return segre_veronese_model(j.at("dims").get<std::vector<std::size_t>>(),
                                  j.at("degrees").get<std::vector<std::size_t>>());
    if (family == "scroll") return scroll_model(j.at("degrees").get<std::vector<long>>());
    if (family == "veronese_cone") return veronese_cone_model(count_param(j, "n"));
    if (family == "quadric") return quadric_model(count_param(j, "n"));
    throw invalid("unknown model family " + family);
  }
  return j.get<VarietyModel>();
}

Json read_input(const std::optional<std::string>& input) {
  if (!input) throw invalid("--input is required for this subcommand");
  const auto first = input->find_first_not_of(" \t\r\n");
  if (first != std::string::npos && ((*input)[first] == '{' || (*input)[first] == '[')) return Json::parse(*input);
  if (*input == "-") return Json::parse(std::cin);
  std::ifstream in(*input);
  if (!in) throw invalid("cannot read input file " + *input);
  return Json::parse(in);
}

void check_options(const CommandRequest& r) {
  const std::string& s = r.subcommand;
  if (std::find(kSubcommands.begin(), kSubcommands.end(), s) == kSubcommands.end())
    throw invalid("unknown subcommand '" + s + "'");
  auto reject = [&](bool present, const char* flag, std::initializer_list<const char*> allowed) {
    if (!present) return;
    for (const char* a : allowed)
      if (s == a) return;
    throw invalid(std::string(flag) + " does not apply to " + s);
  };
  reject(r.k.has_value(), "--k", {"normal"});
  reject(r.d.has_value(), "--d", {"epsilon", "witness"});
  reject(r.seed.has_value(), "--seed", {"witness"});
  reject(r.samples.has_value(), "--samples", {"witness"});
  reject(r.tol.has_value(), "--tol", {"sos-check"});
  reject(r.oracle, "--oracle", {"hstar", "normal"});
  if (r.k && *r.k < 1) throw invalid("--k must be at least 1");
  if (r.d && s == "witness" && *r.d < 3) throw invalid("--d must be at least 3 for witness");
  if (r.d && *r.d < 1) throw invalid("--d must be at least 1");
  if (r.samples && *r.samples < 1) throw invalid("--samples must be positive");
  if (r.tol && !(*r.tol > 0.0)) throw invalid("--tol must be positive");
  if (s == "witness" && r.input) throw invalid("witness takes no --input");
}

Json hstar_report(const CommandRequest& r, const LatticePolytope& q) {
  const HStar h = h_star(q);
  Json out = {{"h_star", h}, {"normalized_volume", normalized_volume(q)}, {"dimension", q.dimension()}};
  if (r.oracle) {
    const HStar brute = oracle::h_star(q);
    out["oracle"] = {{"h_star", brute}, {"agrees", brute == h}};
    if (!(brute == h)) throw Error(ErrorKind::InconsistentModel, "brute-force h* disagrees: " + Json(brute).dump());
  }
  return out;
}

Json normal_report(const CommandRequest& r, const LatticePolytope& q) {
  const long k = r.k.value_or(2);
  const NormalityCheck c = is_k_normal(q, k);
  Json out = c;
  out["k"] = k;
  if (r.oracle) {
    const bool brute = oracle::is_k_normal(q, k);
    out["oracle"] = {{"normal", brute}, {"agrees", brute == c.normal}};
    if (brute != c.normal) throw Error(ErrorKind::InconsistentModel, "brute-force normality check disagrees");
  }
  return out;
}

Json amgm_report(const LatticePolytope& q) {
  Json out = {{"witness", nullptr}, {"obstruction", nullptr}};
  const auto w = amgm_witness(q);
  out["two_normal"] = !w.has_value();
  if (w) {
    out["witness"] = *w;
    if (auto o = find_diagonal_obstruction(w->polynomial, q)) out["obstruction"] = *o;
  }
  return out;
}

Json epsilon_report(const CommandRequest& r, const Json& in) {
  std::optional<LatticePolytope> q;
  if (is_polytope_input(in)) {
    q = parse_polytope(in);
    if (r.d) q = veronese_reembedding(*q, *r.d);
  } else if (r.d) {
    throw invalid("--d applies to polytope input only");
  }
  const VarietyModel model = q ? toric_model(*q) : parse_model(in);
  const std::size_t eps = epsilon(model);
  Json out = {{"name", model.name()},
              {"n", model.n()},
              {"m", model.m()},
              {"e", model.e()},
              {"dim_r2", model.dim_r2()},
              {"i2_dimension", model.i2_basis().size()},
              {"epsilon", eps},
              {"minimal_degree", eps == 0}};
  if (model.degree()) out["degree"] = *model.degree();
  if (q) out["h_star_2"] = h_star(*q).at(2);
  return out;
}

Json sos_report(const CommandRequest& r, const Json& in) {
  if (!in.is_object() || !in.contains("form")) throw invalid("sos-check input needs \"form\" and a model");
  Json source = in;
  source.erase("form");
  const VarietyModel model = parse_model(source);
  const auto f = in.at("form").get<QuadraticForm>();
  SosBudget budget;
  if (r.tol) budget.feas_tol = *r.tol;
  Json out = sos_check(f, build_gram_slice(model), budget);
  out["model"] = model.name();
  return out;
}

Json witness_report(const CommandRequest& r) {
  WitnessOptions options;
  if (r.samples) options.samples = static_cast<std::size_t>(*r.samples);
  const std::size_t d = static_cast<std::size_t>(r.d.value_or(3));
  const std::uint64_t seed = r.seed.value_or(0);
  const WitnessReport report = hilbert_witness(d, seed, options);
  Json out = report;
  out["seed"] = seed;
  out["certify_not_sos"] = certify_not_sos(report);
  return out;
}

Json dispatch(const CommandRequest& r) {
  const std::string& s = r.subcommand;
  if (s == "witness") return witness_report(r);
  const Json in = read_input(r.input);
  if (s == "epsilon") return epsilon_report(r, in);
  if (s == "sos-check") return sos_report(r, in);
  const LatticePolytope q = parse_polytope(in);
  if (s == "hstar") return hstar_report(r, q);
  if (s == "normal") return normal_report(r, q);
  if (s == "classify") return classify(q);
  if (s == "density")
    return {{"sublattice_index", sublattice_index(q)}, {"density", to_string(real_density(q))}, {"criterion", "index parity"}};
  return amgm_report(q);
}

}  // namespace

CommandResult run(const CommandRequest& request) {
  CommandResult result;
  try {
    check_options(request);
    const std::string text = dispatch(request).dump(2) + "\n";
    if (request.output) {
      std::ofstream out(*request.output);
      if (!out) throw invalid("cannot write " + *request.output);
      out << text;
    } else {
      result.output = text;
    }
  } catch (const Error& e) {
    const bool bad_request = e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::DimensionMismatch;
    result.exit_code = bad_request ? 2 : 3;
    result.error = e.what();
  } catch (const Json::exception& e) {
    result.exit_code = 2;
    result.error = std::string("invalid JSON input: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.error = e.what();
  }
  return result;
}

}  // namespace sosmin
