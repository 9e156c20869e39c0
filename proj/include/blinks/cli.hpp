#pragma once

#include "cluster.hpp"
#include "factor.hpp"
#include "words.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace blinks::cli {

// Exit codes: 0 clean, 1 validation findings, 2 malformed input or usage.
inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;
inline constexpr int kError = 2;

inline nlohmann::json read_json_input(const std::string& path) {
  try {
    if (path == "-") {
      nlohmann::json j;
      std::cin >> j;
      return j;
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed json in " + path + ": " + e.what());
  }
}

inline void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

inline std::vector<long long> split_csv_int(const std::string& s) {
  std::vector<long long> out;
  for (const auto& tok : split_csv(s)) out.push_back(std::stoll(tok));
  return out;
}

inline nlohmann::json issues_json(const ValidationReport& report) {
  nlohmann::json issues = nlohmann::json::array();
  for (const auto& i : report) issues.push_back({{"code", i.code}, {"detail", i.detail}});
  return {{"issues", std::move(issues)}};
}

inline nlohmann::json rational_map_json(const std::map<VertexId, Rational>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, r] : m) j[v] = rational_str(r);
  return j;
}

// --- subcommand bodies ------------------------------------------------

inline int run_hj(long long n, long long q, const std::string& chain_csv) {
  if (chain_csv.empty() == (n == 0))
    throw std::invalid_argument("hj: give either --n/--q or --chain");
  ChainWeights chain;
  nlohmann::json out;
  if (!chain_csv.empty()) {
    chain = split_csv_int(chain_csv);
    const HjType t = hj_contract(chain);
    out["n"] = t.n;
    out["q"] = t.q;
  } else {
    const HjType t{n, q};
    chain = hj_expand(t);
    out["n"] = t.n;
    out["q"] = t.q;
  }
  out["chain"] = chain;
  nlohmann::json ds = nlohmann::json::array();
  for (const auto& c : chain_discrepancies(chain)) ds.push_back(rational_str(c));
  out["discrepancies"] = std::move(ds);
  out["index_first"] = boundary_index(chain, ChainEnd::First);
  out["index_last"] = boundary_index(chain, ChainEnd::Last);
  emit(out);
  return kOk;
}

inline int run_discrepancy(const std::string& input, const std::string& boundary_csv,
                           const std::string& exceptional_csv) {
  const WeightedGraph g = graph_from_json(read_json_input(input));
  std::set<VertexId> boundary;
  for (const auto& v : split_csv(boundary_csv)) boundary.insert(v);
  std::set<VertexId> exceptional;
  if (exceptional_csv.empty()) {
    for (const auto& v : g.order)
      if (!boundary.count(v)) exceptional.insert(v);
  } else {
    for (const auto& v : split_csv(exceptional_csv)) exceptional.insert(v);
  }
  emit({{"discrepancies", rational_map_json(log_discrepancies(g, boundary, exceptional))}});
  return kOk;
}

inline int run_cluster(const std::string& input, const std::string& aux) {
  const ClusterState st = run_cluster_script(read_json_input(input));
  nlohmann::json out;
  out["graph"] = graph_to_json(st.graph);
  out["exceptional"] = nlohmann::json::array();
  for (const auto& v : st.graph.order)
    if (st.exceptional.count(v)) out["exceptional"].push_back(v);
  out["coeffs"] = nlohmann::json::object();
  for (const auto& h : st.aux_names) {
    if (!aux.empty() && h != aux) continue;
    nlohmann::json cj = nlohmann::json::object();
    for (const auto& [v, c] : total_transform_coeffs(st, h)) cj[v] = c;
    out["coeffs"][h] = std::move(cj);
  }
  if (!aux.empty() && !out["coeffs"].contains(aux))
    throw std::invalid_argument("cluster: unknown aux curve: " + aux);
  emit(out);
  return kOk;
}

inline int run_factorize(const std::string& input, const std::string& order) {
  const MapResolution r = resolution_from_json(read_json_input(input));
  const ValidationReport report = validate_map_constraints(r);
  if (!report.empty()) {
    emit(issues_json(report));
    return kFindings;
  }
  const auto ord =
      order == "far" ? detail::ContractionOrder::FarFirst : detail::ContractionOrder::NearFirst;
  const Factorization f = factorize(r, ord);
  nlohmann::json out = factorization_to_json(f);
  out["triangular"] = is_triangular(f);
  emit(out);
  return kOk;
}

inline int run_simulate(long long d, const std::string& choices_csv) {
  std::vector<Choice> choices;
  for (const auto& tok : split_csv(choices_csv)) {
    if (tok == "s" || tok == "sing")
      choices.push_back(Choice::AtSingularPoint);
    else if (tok == "e" || tok == "else")
      choices.push_back(Choice::Elsewhere);
    else
      throw std::invalid_argument("simulate: choice must be s|sing or e|else, got " + tok);
  }
  emit({{"indices", simulate_indices(d, choices)}});
  return kOk;
}

inline int run_sarkisov(const std::string& input, std::string aux) {
  const ClusterState st = run_cluster_script(read_json_input(input));
  if (aux.empty()) {
    if (st.aux_names.size() != 1)
      throw std::invalid_argument("sarkisov: pick one aux curve with --aux");
    aux = st.aux_names.front();
  }
  std::set<VertexId> boundary;
  for (const auto& v : st.graph.order) boundary.insert(v);
  const auto discreps = log_discrepancies(st.graph, boundary, st.exceptional);
  const LambdaResult lambda = sarkisov_lambda(discreps, total_transform_coeffs(st, aux));
  nlohmann::json out;
  out["discrepancies"] = rational_map_json(discreps);
  out["lambda"] = rational_map_json(lambda.lambda);
  out["max"] = rational_str(lambda.max);
  out["argmax"] = nlohmann::json::array();
  for (const auto& v : lambda.argmax) out["argmax"].push_back(v);
  emit(out);
  return kOk;
}

inline nlohmann::json base_points_json(const std::optional<std::pair<ModelPoint, ModelPoint>>& bp) {
  if (!bp) return nullptr;
  return {{"source", model_point_to_json(bp->first)}, {"target", model_point_to_json(bp->second)}};
}

inline int run_word(const std::string& input, const std::string& op, const std::string& strategy) {
  const Word w = word_from_json(read_json_input(input));
  check_word(w);
  const ReduceStrategy strat =
      strategy == "rightmost" ? ReduceStrategy::Rightmost : ReduceStrategy::Leftmost;
  nlohmann::json out;
  if (op == "reduce") {
    const Word r = reduce(w, formal_cancel, strat);
    out["word"] = word_to_json(r);
    out["length"] = triangular_count(r);
    out["base_points"] = base_points_json(proper_base_points(w));
  } else if (op == "length") {
    out["length"] = word_length(w);
  } else if (op == "normal-form") {
    const NormalForm nf = normal_form(w);
    switch (nf.cls) {
      case NormalClass::Biregular: out["class"] = "biregular"; break;
      case NormalClass::SpecialTriangular: out["class"] = "special-triangular"; break;
      case NormalClass::GeneralPair: out["class"] = "general-pair"; break;
    }
    out["core"] = word_to_json(nf.core);
    out["conjugator"] = word_to_json(nf.conjugator);
  } else if (op == "tame") {
    bool all = true;
    nlohmann::json letters = nlohmann::json::array();
    for (const auto& l : w.letters) {
      if (l.type != LetterType::Triangular) continue;
      nlohmann::json entry = {{"src", model_point_to_json(l.src)},
                              {"dst", model_point_to_json(l.dst)}};
      if (l.src.model == l.dst.model) {
        const bool tame = is_tame_triangular(l);
        all = all && tame;
        entry["tame"] = tame;
      } else {
        // Tameness is a property of self-maps of one model; a letter that
        // moves between models is never certified.
        all = false;
        entry["tame"] = nullptr;
      }
      letters.push_back(std::move(entry));
    }
    out["letters"] = std::move(letters);
    out["all_tame"] = all;
  } else {
    throw std::invalid_argument("word: unknown op " + op);
  }
  emit(out);
  return kOk;
}

inline int run_catalog(const std::string& name, long long degree) {
  nlohmann::json models = nlohmann::json::array();
  for (const ModelDescriptor& m : catalog().models) {
    if (!name.empty() && m.name != name) continue;
    if (degree != 0 && m.degree != degree) continue;
    nlohmann::json mj;
    mj["name"] = m.name;
    mj["degree"] = m.degree;
    mj["classes"] = nlohmann::json::array();
    for (const OrbitClass& oc : m.classes) {
      nlohmann::json cj;
      cj["kind"] = oc.kind == OrbitKind::Fixed     ? "fixed"
                   : oc.kind == OrbitKind::Open    ? "open"
                                                   : "finite_generic";
      cj["points"] = nlohmann::json::array();
      for (const Param& p : oc.points) cj["points"].push_back(param_str(p));
      cj["profile"] = oc.profile.mult;
      mj["classes"].push_back(std::move(cj));
    }
    mj["generators"] = nlohmann::json::array();
    for (const ModelGenerator& g : m.generators) mj["generators"].push_back(g.name);
    models.push_back(std::move(mj));
  }
  if (!name.empty() && models.empty())
    throw std::invalid_argument("catalog: unknown model: " + name);
  emit({{"version", catalog().version}, {"models", std::move(models)}});
  return kOk;
}

inline int run_validate(const std::string& input, const std::string& kind) {
  const nlohmann::json j = read_json_input(input);
  ValidationReport report;
  if (kind == "graph") {
    graph_from_json(j);
  } else if (kind == "completion") {
    report = validate_dlt(completion_from_json(j));
  } else if (kind == "map") {
    report = validate_map_constraints(resolution_from_json(j));
  } else if (kind == "word") {
    try {
      check_word(word_from_json(j));
    } catch (const std::invalid_argument& e) {
      report.push_back({"invalid-word", e.what()});
    }
  } else {
    throw std::invalid_argument("validate: unknown kind " + kind);
  }
  emit(issues_json(report));
  return report.empty() ? kOk : kFindings;
}

// --- option wiring -----------------------------------------------------

inline int run(int argc, const char* const* argv) {
  CLI::App app{"exact tools for boundary chains, link factorizations and word reduction"};
  app.require_subcommand(1);

  auto* hj = app.add_subcommand("hj", "expand a cyclic quotient type or contract a chain");
  long long hj_n = 0, hj_q = 0;
  std::string hj_chain;
  hj->add_option("--n", hj_n, "order of the cyclic quotient point");
  hj->add_option("--q", hj_q, "rotation weight");
  hj->add_option("--chain", hj_chain, "comma list of chain weights, e.g. 2,3");

  auto* disc = app.add_subcommand("discrepancy", "log discrepancies on a weighted graph");
  std::string disc_input, disc_boundary, disc_exceptional;
  disc->add_option("--input", disc_input, "graph json file, - for stdin")->required();
  disc->add_option("--boundary", disc_boundary, "comma list of boundary vertices")->required();
  disc->add_option("--exceptional", disc_exceptional,
                   "comma list of exceptional vertices (default: the complement)");

  auto* cluster = app.add_subcommand("cluster", "run a blow-up script");
  std::string cluster_input, cluster_aux;
  cluster->add_option("--input", cluster_input, "cluster script json file, - for stdin")
      ->required();
  cluster->add_option("--aux", cluster_aux, "restrict coefficients to one auxiliary curve");

  auto* fact = app.add_subcommand("factorize", "decompose a map resolution into links");
  std::string fact_input, fact_order = "near";
  fact->add_option("--input", fact_input, "map resolution json file, - for stdin")->required();
  fact->add_option("--order", fact_order, "contraction tie-break: near or far")
      ->check(CLI::IsMember({"near", "far"}));

  auto* sim = app.add_subcommand("simulate", "predict link indices from a choice sequence");
  long long sim_d = 0;
  std::string sim_choices;
  sim->add_option("--d", sim_d, "boundary degree")->required();
  sim->add_option("--choices", sim_choices, "comma list of s|e (at singular point or elsewhere)");

  auto* sark = app.add_subcommand("sarkisov", "rank exceptional curves of a blow-up script");
  std::string sark_input, sark_aux;
  sark->add_option("--input", sark_input, "cluster script json file, - for stdin")->required();
  sark->add_option("--aux", sark_aux, "auxiliary curve carrying the multiplicities");

  auto* word = app.add_subcommand("word", "reduce or classify a word of letters");
  std::string word_input, word_op, word_strategy = "leftmost";
  word->add_option("--input", word_input, "word json file, - for stdin")->required();
  word->add_option("--op", word_op, "reduce, length, normal-form or tame")
      ->required()
      ->check(CLI::IsMember({"reduce", "length", "normal-form", "tame"}));
  word->add_option("--strategy", word_strategy, "which special pair composes first")
      ->check(CLI::IsMember({"leftmost", "rightmost"}));

  auto* cat = app.add_subcommand("catalog", "list the boundary models");
  std::string cat_name;
  long long cat_degree = 0;
  cat->add_option("--model", cat_name, "show one model");
  cat->add_option("--degree", cat_degree, "show models of one boundary degree");

  auto* val = app.add_subcommand("validate", "check a json input against its contract");
  std::string val_input, val_kind;
  val->add_option("--input", val_input, "json file, - for stdin")->required();
  val->add_option("--kind", val_kind, "graph, completion, map or word")
      ->required()
      ->check(CLI::IsMember({"graph", "completion", "map", "word"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (hj->parsed()) return run_hj(hj_n, hj_q, hj_chain);
    if (disc->parsed()) return run_discrepancy(disc_input, disc_boundary, disc_exceptional);
    if (cluster->parsed()) return run_cluster(cluster_input, cluster_aux);
    if (fact->parsed()) return run_factorize(fact_input, fact_order);
    if (sim->parsed()) return run_simulate(sim_d, sim_choices);
    if (sark->parsed()) return run_sarkisov(sark_input, sark_aux);
    if (word->parsed()) return run_word(word_input, word_op, word_strategy);
    if (cat->parsed()) return run_catalog(cat_name, cat_degree);
    if (val->parsed()) return run_validate(val_input, val_kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace blinks::cli
