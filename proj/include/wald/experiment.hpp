#pragma once

// Experiment driver: strict JSON configuration, dispatch to the engines and
// deterministic CSV output. Every output is a pure function of the
// effective configuration; the worker count and output directory never
// affect a byte of it.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wald/csv.hpp"
#include "wald/decision_model.hpp"
#include "wald/missing_data.hpp"
#include "wald/predictors.hpp"
#include "wald/regret_engine.hpp"
#include "wald/state_space.hpp"
#include "wald/validation_compare.hpp"

namespace wald {

/// Invalid or incomplete experiment configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeightRange {
  double start = 0.5;
  double stop = 1.0;
  double step = 0.001;
};

struct MidpointCase {
  MissingDataSetting setting;
  std::optional<double> observed_mean;
};

struct CvSection {
  std::vector<int> design;
  std::size_t folds = CvProtocol::leave_one_out;
  std::size_t replications = 200;
  std::vector<double> generating_state;
};

struct CriteriaSection {
  std::vector<std::vector<double>> table;
  std::vector<double> prior;
};

/// Defaults reproduce the reference experiment run by `table1`.
struct ExperimentConfig {
  // State space: either the banded pair form or explicit boxes + constraints.
  std::vector<double> lower{0.2, 0.1};
  std::vector<double> upper{0.6, 0.7};
  std::vector<VariationConstraint> variation{{0, 1, -0.1, 0.1}};

  // Welfare, stored in general form.
  double surveil_well = 1.0, surveil_ill = 0.0, treat_well = 0.6, treat_ill = 0.6;

  std::vector<std::vector<int>> designs{{10, 10}, {5, 15}, {15, 5}, {20, 20}, {10, 30}, {30, 10}};
  std::size_t target_cell = 0;
  std::vector<std::vector<double>> weights{{0.5, 1.0 - 0.5}, {0.6, 1.0 - 0.6}, {0.7, 1.0 - 0.7},
                                           {0.8, 1.0 - 0.8}, {0.9, 1.0 - 0.9}, {1.0, 0.0}};
  WeightRange weight_grid;
  std::vector<std::size_t> grid_resolution{50, 50};

  bool monte_carlo = false;
  std::uint64_t draws = 20000;
  std::uint64_t seed = 20240101;
  unsigned workers = 1;
  std::string output_dir = "results";
  std::uint64_t enumeration_cap = default_enumeration_cap;
  double mmr_tie_tolerance = default_mmr_tie_tolerance;

  std::optional<std::vector<MidpointCase>> midpoint;
  std::optional<std::vector<MissingDataSetting>> missing_data_designs;
  std::optional<CvSection> cv;
  std::optional<CriteriaSection> criteria;

  BernoulliStateSpace space() const { return {lower, upper, variation}; }
  WelfareModel welfare() const { return {surveil_well, surveil_ill, treat_well, treat_ill}; }
  EvaluationOptions options() const {
    EvaluationOptions o;
    if (monte_carlo) o.method = MonteCarloMethod{draws, seed};
    o.workers = workers;
    o.enumeration_cap = enumeration_cap;
    return o;
  }
  std::vector<KernelWeights> weight_list() const {
    std::vector<KernelWeights> out;
    for (const auto& w : weights) out.emplace_back(w);
    return out;
  }
  std::vector<KernelWeights> search_grid() const {
    return binary_weight_grid(weight_grid.start, weight_grid.stop, weight_grid.step);
  }
};

namespace detail {

using json = nlohmann::json;

inline void require_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw config_error(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw config_error(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& obj, std::string_view key, std::string_view where) {
  try {
    return obj.at(std::string(key)).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string(where) + "." + std::string(key) + ": " + e.what());
  }
}

template <class T>
void get_optional(const json& obj, std::string_view key, std::string_view where, T& out) {
  if (obj.contains(std::string(key))) out = get<T>(obj, key, where);
}

inline std::vector<double> weight_vector(const json& entry) {
  if (entry.is_number()) {
    const double w0 = entry.get<double>();
    return {w0, 1.0 - w0};
  }
  return entry.get<std::vector<double>>();
}

inline MissingDataSetting parse_setting(const json& obj, std::string_view where) {
  MissingDataSetting s;
  s.observed_share = get<double>(obj, "observed_share", where);
  if (obj.contains("observed_count")) s.observed_count = get<int>(obj, "observed_count", where);
  return s;
}

}  // namespace detail

/// Parses and validates a configuration. Missing keys keep their defaults;
/// unknown keys and invariant violations raise config_error.
inline ExperimentConfig parse_config(const nlohmann::json& root) {
  using detail::get;
  using detail::get_optional;
  using detail::require_keys;
  ExperimentConfig cfg;
  require_keys(root, "config",
               {"state_space", "welfare", "designs", "target_cell", "weights", "weight_grid", "grid_resolution",
                "method", "draws", "seed", "workers", "output_dir", "enumeration_cap", "mmr_tie_tolerance",
                "midpoint", "missing_data_designs", "cv", "criteria"});

  if (root.contains("state_space")) {
    const auto& ss = root["state_space"];
    if (ss.is_object() && ss.contains("p0_lower")) {
      require_keys(ss, "state_space", {"p0_lower", "p0_upper", "lambda_minus", "lambda_plus"});
      try {
        const auto space = BernoulliStateSpace::banded_pair(
            get<double>(ss, "p0_lower", "state_space"), get<double>(ss, "p0_upper", "state_space"),
            get<double>(ss, "lambda_minus", "state_space"), get<double>(ss, "lambda_plus", "state_space"));
        cfg.lower = {space.lower(0), space.lower(1)};
        cfg.upper = {space.upper(0), space.upper(1)};
        cfg.variation = space.variation();
      } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
      }
    } else {
      require_keys(ss, "state_space", {"lower", "upper", "variation"});
      cfg.lower = get<std::vector<double>>(ss, "lower", "state_space");
      cfg.upper = get<std::vector<double>>(ss, "upper", "state_space");
      cfg.variation.clear();
      if (ss.contains("variation")) {
        for (const auto& c : ss["variation"]) {
          require_keys(c, "state_space.variation", {"cell", "other", "lambda_minus", "lambda_plus"});
          cfg.variation.push_back({get<std::size_t>(c, "cell", "variation"), get<std::size_t>(c, "other", "variation"),
                                   get<double>(c, "lambda_minus", "variation"),
                                   get<double>(c, "lambda_plus", "variation")});
        }
      }
    }
  }

  if (root.contains("welfare")) {
    const auto& w = root["welfare"];
    if (w.is_object() && w.contains("treat")) {
      require_keys(w, "welfare", {"treat"});
      const double ub = get<double>(w, "treat", "welfare");
      if (!(ub > 0.0 && ub < 1.0)) throw config_error("welfare.treat must lie in (0,1)");
      cfg.surveil_well = 1.0, cfg.surveil_ill = 0.0, cfg.treat_well = ub, cfg.treat_ill = ub;
    } else {
      require_keys(w, "welfare", {"surveil_well", "surveil_ill", "treat_well", "treat_ill"});
      cfg.surveil_well = get<double>(w, "surveil_well", "welfare");
      cfg.surveil_ill = get<double>(w, "surveil_ill", "welfare");
      cfg.treat_well = get<double>(w, "treat_well", "welfare");
      cfg.treat_ill = get<double>(w, "treat_ill", "welfare");
    }
  }

  get_optional(root, "designs", "config", cfg.designs);
  get_optional(root, "target_cell", "config", cfg.target_cell);
  if (root.contains("weights")) {
    cfg.weights.clear();
    try {
      for (const auto& entry : root["weights"]) cfg.weights.push_back(detail::weight_vector(entry));
    } catch (const nlohmann::json::exception& e) {
      throw config_error(std::string("config.weights: ") + e.what());
    }
  }
  if (root.contains("weight_grid")) {
    const auto& g = root["weight_grid"];
    require_keys(g, "weight_grid", {"start", "stop", "step"});
    get_optional(g, "start", "weight_grid", cfg.weight_grid.start);
    get_optional(g, "stop", "weight_grid", cfg.weight_grid.stop);
    get_optional(g, "step", "weight_grid", cfg.weight_grid.step);
  }
  get_optional(root, "grid_resolution", "config", cfg.grid_resolution);
  if (root.contains("method")) {
    const auto m = get<std::string>(root, "method", "config");
    if (m != "exact" && m != "mc") throw config_error("config.method must be 'exact' or 'mc'");
    cfg.monte_carlo = m == "mc";
  }
  get_optional(root, "draws", "config", cfg.draws);
  get_optional(root, "seed", "config", cfg.seed);
  get_optional(root, "workers", "config", cfg.workers);
  get_optional(root, "output_dir", "config", cfg.output_dir);
  get_optional(root, "enumeration_cap", "config", cfg.enumeration_cap);
  get_optional(root, "mmr_tie_tolerance", "config", cfg.mmr_tie_tolerance);

  if (root.contains("midpoint")) {
    std::vector<MidpointCase> cases;
    for (const auto& c : root["midpoint"]) {
      require_keys(c, "midpoint[]", {"observed_share", "observed_count", "observed_mean"});
      MidpointCase mc{detail::parse_setting(c, "midpoint[]"), std::nullopt};
      if (c.contains("observed_mean")) mc.observed_mean = get<double>(c, "observed_mean", "midpoint[]");
      cases.push_back(mc);
    }
    cfg.midpoint = std::move(cases);
  }
  if (root.contains("missing_data_designs")) {
    std::vector<MissingDataSetting> designs;
    for (const auto& c : root["missing_data_designs"]) {
      require_keys(c, "missing_data_designs[]", {"observed_share", "observed_count"});
      designs.push_back(detail::parse_setting(c, "missing_data_designs[]"));
    }
    cfg.missing_data_designs = std::move(designs);
  }
  if (root.contains("cv")) {
    const auto& c = root["cv"];
    require_keys(c, "cv", {"design", "folds", "replications", "generating_state"});
    CvSection cv;
    cv.design = get<std::vector<int>>(c, "design", "cv");
    if (c.contains("folds")) {
      if (c["folds"].is_string()) {
        if (c["folds"].get<std::string>() != "loo") throw config_error("cv.folds must be an integer or \"loo\"");
      } else {
        cv.folds = get<std::size_t>(c, "folds", "cv");
        if (cv.folds < 2) throw config_error("cv.folds must be >= 2");
      }
    }
    get_optional(c, "replications", "cv", cv.replications);
    cv.generating_state = get<std::vector<double>>(c, "generating_state", "cv");
    cfg.cv = std::move(cv);
  }
  if (root.contains("criteria")) {
    const auto& c = root["criteria"];
    require_keys(c, "criteria", {"table", "prior"});
    CriteriaSection cs;
    cs.table = get<std::vector<std::vector<double>>>(c, "table", "criteria");
    get_optional(c, "prior", "criteria", cs.prior);
    cfg.criteria = std::move(cs);
  }
  return cfg;
}

/// Checks every module invariant the configuration refers to.
inline void validate(const ExperimentConfig& cfg) {
  try {
    const auto space = cfg.space();
    cfg.welfare();
    if (cfg.grid_resolution.size() != space.cells())
      throw config_error("grid_resolution needs one entry per cell");
    for (auto r : cfg.grid_resolution)
      if (r < 2) throw config_error("grid_resolution entries must be >= 2");
    if (cfg.designs.empty()) throw config_error("designs: empty list");
    for (const auto& d : cfg.designs) {
      if (SampleDesign(d).cells() != space.cells()) throw config_error("designs: cell count differs from state space");
    }
    if (cfg.target_cell >= space.cells()) throw config_error("target_cell out of range");
    if (cfg.weights.empty()) throw config_error("weights: empty list");
    for (const auto& w : cfg.weights)
      if (KernelWeights(w).cells() != space.cells()) throw config_error("weights: cell count differs from state space");
    cfg.search_grid();
    if (cfg.draws == 0) throw config_error("draws must be >= 1");
    if (cfg.workers == 0) throw config_error("workers must be >= 1");
    if (!(cfg.mmr_tie_tolerance >= 0.0)) throw config_error("mmr_tie_tolerance must be >= 0");
    if (cfg.midpoint)
      for (const auto& c : *cfg.midpoint) c.setting.validate();
    if (cfg.missing_data_designs)
      for (const auto& d : *cfg.missing_data_designs) d.validate();
    if (cfg.cv) {
      if (SampleDesign(cfg.cv->design).cells() != space.cells()) throw config_error("cv.design: wrong cell count");
      if (cfg.cv->replications == 0) throw config_error("cv.replications must be >= 1");
      if (!is_feasible(State{cfg.cv->generating_state}, space))
        throw config_error("cv.generating_state is outside the state space");
    }
    if (cfg.criteria) ExpectedLossTable{cfg.criteria->table};
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config file '" + path + "': " + e.what());
  }
  return parse_config(root);
}

/// Canonical JSON of everything that can influence results.
inline nlohmann::json effective_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["lower"] = cfg.lower;
  j["upper"] = cfg.upper;
  auto& var = j["variation"] = nlohmann::json::array();
  for (const auto& c : cfg.variation)
    var.push_back({{"cell", c.cell}, {"other", c.other}, {"lambda_minus", c.lambda_minus}, {"lambda_plus", c.lambda_plus}});
  j["welfare"] = {cfg.surveil_well, cfg.surveil_ill, cfg.treat_well, cfg.treat_ill};
  j["designs"] = cfg.designs;
  j["target_cell"] = cfg.target_cell;
  j["weights"] = cfg.weights;
  j["weight_grid"] = {cfg.weight_grid.start, cfg.weight_grid.stop, cfg.weight_grid.step};
  j["grid_resolution"] = cfg.grid_resolution;
  j["method"] = cfg.monte_carlo ? "mc" : "exact";
  j["draws"] = cfg.draws;
  j["seed"] = cfg.seed;
  j["enumeration_cap"] = cfg.enumeration_cap;
  j["mmr_tie_tolerance"] = cfg.mmr_tie_tolerance;
  if (cfg.midpoint) {
    auto& m = j["midpoint"] = nlohmann::json::array();
    for (const auto& c : *cfg.midpoint)
      m.push_back({c.setting.observed_share, c.setting.observed_count.value_or(-1), c.observed_mean.value_or(-1.0)});
  }
  if (cfg.missing_data_designs) {
    auto& m = j["missing_data_designs"] = nlohmann::json::array();
    for (const auto& d : *cfg.missing_data_designs) m.push_back({d.observed_share, d.observed_count.value_or(-1)});
  }
  if (cfg.cv)
    j["cv"] = {cfg.cv->design, cfg.cv->folds, cfg.cv->replications, cfg.cv->generating_state};
  if (cfg.criteria) j["criteria"] = {cfg.criteria->table, cfg.criteria->prior};
  return j;
}

/// FNV-1a over the canonical effective configuration.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : effective_json(cfg).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct CsvFile {
  std::string name;
  std::string content;
};

namespace detail {

inline std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

inline void provenance(csv::Writer& out, std::string_view command, const ExperimentConfig& cfg,
                       const StateGrid* grid) {
  out.comment("command", command);
  out.comment("config_hash", hex(config_hash(cfg)));
  out.comment("seed", std::to_string(cfg.seed));
  out.comment("method", cfg.monte_carlo ? "mc(draws=" + std::to_string(cfg.draws) + ")" : "exact");
  if (grid) {
    std::string res;
    for (auto r : grid->resolution()) res += (res.empty() ? "" : "x") + std::to_string(r);
    out.comment("state_grid", res + " (" + std::to_string(grid->size()) + " feasible states)");
  }
}

inline std::string weight_label(const KernelWeights& w) {
  if (w.cells() == 2) return "w0=" + csv::num(w[0]);
  std::string s = "w=(";
  for (std::size_t k = 0; k < w.cells(); ++k) s += (k ? ";" : "") + csv::num(w[k]);
  return s + ")";
}

inline std::vector<std::string> design_fields(const std::vector<int>& d) {
  std::vector<std::string> f;
  for (int n : d) f.push_back(std::to_string(n));
  return f;
}

inline std::vector<std::string> cell_headers(std::string_view prefix, std::size_t cells) {
  std::vector<std::string> f;
  for (std::size_t k = 0; k < cells; ++k) f.push_back(std::string(prefix) + std::to_string(k));
  return f;
}

template <class T>
void append(std::vector<T>& to, const std::vector<T>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

inline std::vector<std::string> state_fields(const State& s) {
  std::vector<std::string> f;
  for (double p : s.p) f.push_back(csv::num(p));
  return f;
}

}  // namespace detail

/// One row per design: max regret at each configured weighting, then the
/// minimax-regret value and its weight over the search grid.
inline CsvFile run_table1(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto grid = build_grid(cfg.space(), cfg.grid_resolution);
  const auto welfare = cfg.welfare();
  const auto options = cfg.options();
  const auto columns = cfg.weight_list();
  const auto search = cfg.search_grid();

  csv::Writer out;
  detail::provenance(out, "table1", cfg, &grid);
  out.comment("mmr_search", "w0 in [" + csv::num(cfg.weight_grid.start) + ", " + csv::num(cfg.weight_grid.stop) +
                                "] step " + csv::num(cfg.weight_grid.step) + ", tie tolerance " +
                                csv::num(cfg.mmr_tie_tolerance));
  auto header = detail::cell_headers("N", grid.space().cells());
  for (const auto& w : columns) header.push_back(detail::weight_label(w));
  header.push_back("mmr");
  header.push_back("mmr_weight");
  out.row(header);

  for (const auto& d : cfg.designs) {
    const SampleDesign design(d);
    const auto table = detail::regret_matrix(columns, design, grid, welfare, cfg.target_cell, options);
    auto fields = detail::design_fields(d);
    for (std::size_t w = 0; w < columns.size(); ++w) {
      const auto row = table.row(w);
      fields.push_back(csv::num(*std::max_element(row.begin(), row.end())));
    }
    const auto best = mmr_weight_search(search, design, grid, welfare, cfg.target_cell, options, cfg.mmr_tie_tolerance);
    fields.push_back(csv::num(best.report.max_regret));
    fields.push_back(csv::num(best.weights[cfg.target_cell]));
    out.row(fields);
  }
  return {"table1.csv", out.str()};
}

/// Per-state expected regret for each (design, weighting), plus a summary.
inline std::vector<CsvFile> run_max_regret(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto grid = build_grid(cfg.space(), cfg.grid_resolution);
  const auto welfare = cfg.welfare();
  const auto options = cfg.options();
  const auto weights = cfg.weight_list();
  const std::size_t cells = grid.space().cells();

  csv::Writer states, summary;
  detail::provenance(states, "max-regret", cfg, &grid);
  detail::provenance(summary, "max-regret", cfg, &grid);
  auto sh = detail::cell_headers("N", cells);
  sh.push_back("weight");
  detail::append(sh, detail::cell_headers("p", cells));
  sh.push_back("expected_regret");
  states.row(sh);
  auto mh = detail::cell_headers("N", cells);
  mh.push_back("weight");
  mh.push_back("max_regret");
  detail::append(mh, detail::cell_headers("argmax_p", cells));
  summary.row(mh);

  for (const auto& d : cfg.designs) {
    const SampleDesign design(d);
    for (const auto& w : weights) {
      const auto report = max_regret(w, design, grid, welfare, cfg.target_cell, options);
      for (std::size_t s = 0; s < grid.size(); ++s) {
        auto f = detail::design_fields(d);
        f.push_back(detail::weight_label(w));
        detail::append(f, detail::state_fields(grid[s]));
        f.push_back(csv::num(report.regrets[s]));
        states.row(f);
      }
      auto f = detail::design_fields(d);
      f.push_back(detail::weight_label(w));
      f.push_back(csv::num(report.max_regret));
      detail::append(f, detail::state_fields(report.argmax_state));
      summary.row(f);
    }
  }
  return {{"max_regret.csv", states.str()}, {"max_regret_summary.csv", summary.str()}};
}

inline std::vector<CsvFile> run_mmr_search(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto grid = build_grid(cfg.space(), cfg.grid_resolution);
  const auto welfare = cfg.welfare();
  const auto options = cfg.options();
  const auto search = cfg.search_grid();
  const std::size_t cells = grid.space().cells();

  csv::Writer curve, summary;
  detail::provenance(curve, "mmr-search", cfg, &grid);
  detail::provenance(summary, "mmr-search", cfg, &grid);
  auto ch = detail::cell_headers("N", cells);
  ch.push_back("w0");
  ch.push_back("max_regret");
  curve.row(ch);
  auto sh = detail::cell_headers("N", cells);
  sh.push_back("mmr");
  sh.push_back("mmr_weight");
  detail::append(sh, detail::cell_headers("argmax_p", cells));
  summary.row(sh);

  for (const auto& d : cfg.designs) {
    const SampleDesign design(d);
    const auto best = mmr_weight_search(search, design, grid, welfare, cfg.target_cell, options, cfg.mmr_tie_tolerance);
    for (std::size_t w = 0; w < search.size(); ++w) {
      auto f = detail::design_fields(d);
      f.push_back(csv::num(search[w][cfg.target_cell]));
      f.push_back(csv::num(best.max_regret_by_weight[w]));
      curve.row(f);
    }
    auto f = detail::design_fields(d);
    f.push_back(csv::num(best.report.max_regret));
    f.push_back(csv::num(best.weights[cfg.target_cell]));
    detail::append(f, detail::state_fields(best.report.argmax_state));
    summary.row(f);
  }
  return {{"mmr_search.csv", curve.str()}, {"mmr_summary.csv", summary.str()}};
}

inline CsvFile run_midpoint(const ExperimentConfig& cfg) {
  validate(cfg);
  if (!cfg.midpoint) throw config_error("midpoint: section missing");
  csv::Writer out;
  detail::provenance(out, "midpoint", cfg, nullptr);
  out.row({"observed_share", "observed_count", "observed_mean", "midpoint_estimate", "max_regret"});
  for (const auto& c : *cfg.midpoint) {
    const auto& s = c.setting;
    out.row({csv::num(s.observed_share), s.observed_count ? std::to_string(*s.observed_count) : "",
             c.observed_mean ? csv::num(*c.observed_mean) : "",
             c.observed_mean ? csv::num(midpoint_estimate(*c.observed_mean, s)) : "",
             csv::num(midpoint_max_regret(s))});
  }
  return {"midpoint.csv", out.str()};
}

inline CsvFile run_designs(const ExperimentConfig& cfg) {
  validate(cfg);
  if (!cfg.missing_data_designs) throw config_error("missing_data_designs: section missing");
  csv::Writer out;
  detail::provenance(out, "designs", cfg, nullptr);
  out.row({"rank", "observed_share", "observed_count", "max_regret"});
  const auto table = design_max_regret_table(*cfg.missing_data_designs);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& s = table[i].setting;
    out.row({std::to_string(i + 1), csv::num(s.observed_share),
             s.observed_count ? std::to_string(*s.observed_count) : "", csv::num(table[i].max_regret)});
  }
  return {"designs.csv", out.str()};
}

inline std::vector<CsvFile> run_compare_cv(const ExperimentConfig& cfg) {
  validate(cfg);
  if (!cfg.cv) throw config_error("cv: section missing");
  const auto grid = build_grid(cfg.space(), cfg.grid_resolution);
  const SampleDesign design(cfg.cv->design);
  const CvProtocol protocol{cfg.cv->folds, cfg.search_grid(), cfg.seed};
  const auto cmp = compare_cv_vs_mmr(design, grid, cfg.welfare(), protocol, cfg.cv->replications,
                                     State{cfg.cv->generating_state}, cfg.target_cell, cfg.options(),
                                     cfg.mmr_tie_tolerance);

  csv::Writer per_weight, summary;
  detail::provenance(per_weight, "compare-cv", cfg, &grid);
  detail::provenance(summary, "compare-cv", cfg, &grid);
  per_weight.row({"w0", "max_regret", "cv_selected"});
  for (std::size_t w = 0; w < protocol.weight_grid.size(); ++w)
    per_weight.row({csv::num(protocol.weight_grid[w][cfg.target_cell]), csv::num(cmp.max_regret_by_weight[w]),
                    std::to_string(cmp.selection_histogram[w])});
  summary.row({"replications", "folds", "mmr_weight", "mmr", "ratio_mean", "ratio_median", "ratio_min", "ratio_max"});
  summary.row({std::to_string(cfg.cv->replications),
               cfg.cv->folds == CvProtocol::leave_one_out ? "loo" : std::to_string(cfg.cv->folds),
               csv::num(protocol.weight_grid[cmp.mmr_index][cfg.target_cell]), csv::num(cmp.mmr_value),
               csv::num(cmp.ratio_mean()), csv::num(cmp.ratio_quantile(0.5)), csv::num(cmp.ratio_min()),
               csv::num(cmp.ratio_max())});
  return {{"compare_cv.csv", per_weight.str()}, {"compare_cv_summary.csv", summary.str()}};
}

inline CsvFile run_criteria(const ExperimentConfig& cfg) {
  validate(cfg);
  if (!cfg.criteria) throw config_error("criteria: section missing");
  const ExpectedLossTable table(cfg.criteria->table);
  csv::Writer out;
  detail::provenance(out, "criteria", cfg, nullptr);
  out.row({"criterion", "selected_row", "score"});
  const auto emit = [&](const char* name, Criterion c, std::span<const double> prior) {
    const auto scores = criterion_scores(table, c, prior);
    const auto pick = criterion_select(table, c, prior);
    out.row({name, std::to_string(pick), csv::num(scores[pick])});
  };
  if (!cfg.criteria->prior.empty()) {
    try {
      emit("bayes", Criterion::bayes, cfg.criteria->prior);
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("criteria.prior: ") + e.what());
    }
  }
  emit("minimax", Criterion::minimax, {});
  emit("minimax_regret", Criterion::minimax_regret, {});
  return {"criteria.csv", out.str()};
}

inline const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"table1", "max-regret", "mmr-search", "midpoint",
                                              "designs", "compare-cv", "criteria"};
  return names;
}

/// Dispatches a named subcommand. Unknown names raise config_error.
inline std::vector<CsvFile> run_subcommand(std::string_view name, const ExperimentConfig& cfg) {
  if (name == "table1") return {run_table1(cfg)};
  if (name == "max-regret") return run_max_regret(cfg);
  if (name == "mmr-search") return run_mmr_search(cfg);
  if (name == "midpoint") return {run_midpoint(cfg)};
  if (name == "designs") return {run_designs(cfg)};
  if (name == "compare-cv") return run_compare_cv(cfg);
  if (name == "criteria") return {run_criteria(cfg)};
  throw config_error("unknown subcommand '" + std::string(name) + "'");
}

}  // namespace wald
