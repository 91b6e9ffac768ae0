#ifndef INFOCRIT_TOOLS_CLI_HPP
#define INFOCRIT_TOOLS_CLI_HPP

// Command-line driver. run() never calls exit(), so tests can drive it in
// process: exit codes are 0 ok, 1 internal error, 2 bad input, 3 numeric
// failure, 4 model refusal.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infocrit/infocrit.hpp"
#include "infocrit/json.hpp"

namespace infocrit::cli {

enum class Format { table, json, csv };

enum ExitCode : int { kOk = 0, kInternal = 1, kInput = 2, kNumeric = 3, kRefusal = 4 };

struct Common {
  std::string output;
  std::string format_name;  // empty: the subcommand's default
  Format format = Format::table;
  std::size_t draws = 100000;
  std::uint64_t seed = 12345;
  unsigned threads = 0;  // 0: all hardware threads
};

namespace detail {

inline std::string fmt(double v, int decimals = 4) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFormatError("cannot open " + path);
  return in;
}

/// Writes to --output or to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputFormatError("cannot write " + path);
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw InputFormatError("cannot write " + path);
  body(f);
}

inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_left,count\n";
  for (std::size_t b = 0; b < h.count.size(); ++b) out << csv::format_double(h.bin_left[b]) << ',' << h.count[b] << '\n';
}

/// Flattens nested objects into dotted keys; arrays of numbers are joined
/// with spaces.
inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    std::string s;
    bool scalar = true;
    for (const auto& v : j) scalar = scalar && (v.is_primitive());
    if (!scalar) {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
      return;
    }
    for (const auto& v : j) {
      if (!s.empty()) s += ' ';
      s += v.is_string() ? v.get<std::string>() : v.dump();
    }
    out.emplace_back(prefix, s);
  } else if (j.is_null()) {
    out.emplace_back(prefix, "unavailable");
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

/// Generic rendering of a JSON report in the requested format.
inline void emit(std::ostream& out, const Json& j, Format f) {
  if (f == Format::json) {
    out << j.dump(2) << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  if (f == Format::csv) {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << csv_cell(k) << ',' << csv_cell(v) << '\n';
    return;
  }
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  for (const auto& [k, v] : rows) out << k << std::string(w - k.size() + 2, ' ') << v << '\n';
}

}  // namespace detail

// --- model loading shared by fit and loo -----------------------------------

struct ModelOptions {
  std::string model = "normal";  // normal | regression | schools | balanced
  std::string input;
  double m = 0.0;
  double mu0 = 0.0;
  std::string pooling = "hierarchical";
  std::string prediction_mode = "existing";
  std::string counting = "observation";
  double mu = 0.0;
  double tau = 1.0;
};

inline Pooling parse_pooling(const std::string& s) {
  if (s == "none" || s == "no_pooling") return Pooling::none;
  if (s == "complete" || s == "complete_pooling") return Pooling::complete;
  if (s == "hierarchical") return Pooling::hierarchical;
  throw std::invalid_argument("unknown pooling " + s);
}

inline std::vector<double> read_y_column(const std::string& path) {
  auto in = detail::open_in(path);
  return csv::numeric_column(csv::read_table(in, {"y"}), "y");
}

/// Columns x,y; an election file (growth,vote) is accepted as well.
inline RegressionFlatSpec read_xy(const std::string& path) {
  auto in = detail::open_in(path);
  const auto t = csv::read_table(in, {});
  const auto has = [&](const char* name) { return std::find(t.header.begin(), t.header.end(), name) != t.header.end(); };
  if (!has("x") && has("growth") && has("vote")) {
    return {csv::numeric_column(t, "growth"), csv::numeric_column(t, "vote")};
  }
  for (const char* name : {"x", "y"}) {
    if (!has(name)) throw InputFormatError(std::string("missing column '") + name + "'", 1, 1);
  }
  return {csv::numeric_column(t, "x"), csv::numeric_column(t, "y")};
}

inline EightSchoolsData load_schools(const std::string& path) {
  if (path.empty()) return EightSchoolsData::rubin1981();
  auto in = detail::open_in(path);
  return read_schools_csv(in);
}

inline ElectionData load_election(const std::string& path) {
  if (path.empty()) return ElectionData::hibbs();
  auto in = detail::open_in(path);
  return read_election_csv(in);
}

/// Columns group,y; rows of a group need not be contiguous.
inline BalancedHierarchicalData read_balanced(const std::string& path, double mu, double tau) {
  auto in = detail::open_in(path);
  const auto t = csv::read_table(in, {"group", "y"});
  const auto y = csv::numeric_column(t, "y");
  std::size_t gcol = 0;
  while (t.header[gcol] != "group") ++gcol;
  std::map<std::string, std::size_t> index;
  BalancedHierarchicalData d;
  d.mu = mu;
  d.tau = tau;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& g = t.rows[r][gcol];
    auto [it, fresh] = index.emplace(g, d.groups.size());
    if (fresh) d.groups.emplace_back();
    d.groups[it->second].push_back(y[r]);
  }
  for (const auto& g : d.groups) {
    if (g.size() != d.groups.front().size()) throw InputFormatError("groups must have equal sizes");
  }
  return d;
}

// --- subcommands --------------------------------------------------------------

struct CriteriaOptions {
  std::string input;
  std::optional<double> lpd_at_mean;
  std::optional<double> lpd_at_mle;
  std::optional<int> k;
  int waic_variant = 2;
  std::string histogram;
};

inline WaicVariant to_variant(int v) { return v == 1 ? WaicVariant::p_waic1 : WaicVariant::p_waic2; }

inline Json report_json(const CriterionReport& r, const Common& c, const char* subcommand) {
  return Json{{"subcommand", subcommand}, {"draws", r.draws}, {"seed", c.seed}, {"report", r}};
}

inline int cmd_criteria(const CriteriaOptions& o, const Common& c, std::ostream& out) {
  auto in = detail::open_in(o.input);
  const auto m = csv::read_matrix(in);
  std::optional<PointEstimateLogLik> mle;
  if (o.lpd_at_mle) {
    if (!o.k) throw std::invalid_argument("--lpd-mle needs --k");
    mle = PointEstimateLogLik{*o.lpd_at_mle, EstimateKind::mle, *o.k};
  }
  const auto r = assemble_report(m, o.lpd_at_mean, mle, to_variant(o.waic_variant));
  if (!o.histogram.empty()) {
    const auto totals = m.row_totals();
    detail::write_file(o.histogram, [&](std::ostream& f) { detail::write_histogram_csv(f, make_histogram(totals)); });
  }
  detail::Sink sink(c.output, out);
  detail::emit(sink.stream(), report_json(r, c, "criteria"), c.format);
  return kOk;
}

struct FitOptions {
  ModelOptions model;
  int waic_variant = 2;
  std::string dump_loglik;
  std::string tau_density;
};

inline int cmd_fit(const FitOptions& o, const Common& c, std::ostream& out) {
  const auto& mo = o.model;
  LogLikMatrix ll;
  std::optional<double> lpd_mean;
  std::optional<PointEstimateLogLik> mle;
  Json extra = Json::object();
  if (mo.model == "normal") {
    const auto y = read_y_column(mo.input);
    const NormalMeanModel model{mo.m, mo.mu0};
    const auto fit = model.fit(y, std::nullopt, c.draws, c.seed);
    ll = fit.pointwise_loglik(all_points(model, y));
    lpd_mean = fit.lpd_at_posterior_mean();
    const auto in = oracle::OracleInput::from_data(y);
    mle = PointEstimateLogLik{oracle::lpd_mle(in), EstimateKind::mle, 1};
    extra["posterior_mean"] = fit.posterior_mean();
  } else if (mo.model == "regression") {
    const auto spec = read_xy(mo.input);
    const RegressionModel model;
    const auto fit = model.fit(spec, std::nullopt, c.draws, c.seed);
    ll = fit.pointwise_loglik(all_points(model, spec));
    lpd_mean = fit.lpd_at_posterior_mean();
    mle = fit.mle_loglik();
    extra["mle"] = fit.mle();
    extra["posterior_means"] = fit.posterior_means();
  } else if (mo.model == "schools") {
    const auto d = load_schools(mo.input);
    const auto mode = mo.prediction_mode == "new" ? PredictionMode::new_groups : PredictionMode::existing_groups;
    if (mo.prediction_mode != "new" && mo.prediction_mode != "existing") {
      throw std::invalid_argument("--prediction-mode must be existing or new");
    }
    const SchoolsModel model{parse_pooling(mo.pooling), mode};
    const auto fit = model.fit(d, std::nullopt, c.draws, c.seed);
    ll = fit.pointwise_loglik(all_points(model, d));
    lpd_mean = fit.lpd_at_posterior_mean();
    mle = fit.mle_loglik();
    extra["model"] = pooling_name(model.pooling);
    extra["prediction_mode"] = mo.prediction_mode;
    if (!o.tau_density.empty()) {
      if (model.pooling != Pooling::hierarchical) throw std::invalid_argument("--tau-density needs the hierarchical model");
      const auto tp = tau_posterior(d, std::vector<bool>(d.J(), true), model.grid);
      const auto dens = tp.density();
      detail::write_file(o.tau_density, [&](std::ostream& f) {
        f << "tau,density\n";
        for (std::size_t i = 0; i < dens.size(); ++i) f << csv::format_double(tp.tau[i]) << ',' << csv::format_double(dens[i]) << '\n';
      });
    }
  } else if (mo.model == "balanced") {
    const auto d = read_balanced(mo.input, mo.mu, mo.tau);
    Counting counting = Counting::observation;
    if (mo.counting == "group") {
      counting = Counting::group;
    } else if (mo.counting != "observation") {
      throw std::invalid_argument("--counting must be observation or group");
    }
    const auto theta = balanced_posterior_draws(d, c.draws, c.seed);
    ll = balanced_hierarchical_loglik(theta, d, counting);
    extra["counting"] = mo.counting;
  } else {
    throw std::invalid_argument("unknown model " + mo.model);
  }
  if (!o.dump_loglik.empty()) detail::write_file(o.dump_loglik, [&](std::ostream& f) { csv::write_matrix(f, ll); });
  const auto r = assemble_report(ll, lpd_mean, mle, to_variant(o.waic_variant));
  auto j = report_json(r, c, "fit");
  j["model"] = mo.model;
  j["fit"] = extra;
  detail::Sink sink(c.output, out);
  detail::emit(sink.stream(), j, c.format);
  return kOk;
}

inline int cmd_loo(const ModelOptions& mo, const Common& c, std::ostream& out) {
  LooReport r;
  if (mo.model == "normal") {
    r = run_loo(NormalMeanModel{mo.m, mo.mu0}, read_y_column(mo.input), c.draws, c.seed, c.threads);
  } else if (mo.model == "regression") {
    r = run_loo(RegressionModel{}, read_xy(mo.input), c.draws, c.seed, c.threads);
  } else if (mo.model == "schools") {
    const auto mode = mo.prediction_mode == "new" ? PredictionMode::new_groups : PredictionMode::existing_groups;
    r = run_loo(SchoolsModel{parse_pooling(mo.pooling), mode}, load_schools(mo.input), c.draws, c.seed, c.threads);
  } else {
    throw std::invalid_argument("leave-one-out supports models normal, regression, schools");
  }
  Json j{{"subcommand", "loo"}, {"model", mo.model}, {"draws", r.draws}, {"seed", r.seed}, {"report", r}};
  detail::Sink sink(c.output, out);
  detail::emit(sink.stream(), j, c.format);
  return kOk;
}

struct SchoolsTableOptions {
  std::string input;
  std::string tau_density;
};

inline std::vector<std::pair<std::string, std::array<std::string, 3>>> schools_rows(const SchoolsTable& t) {
  std::vector<std::pair<std::string, std::array<std::string, 3>>> rows;
  auto row = [&](const std::string& label, auto&& cell) {
    std::array<std::string, 3> r;
    for (std::size_t c = 0; c < 3; ++c) r[c] = cell(t.columns[c]);
    rows.emplace_back(label, r);
  };
  const auto f1 = [](double v) { return detail::fmt(v, 1); };
  row("AIC   -2 lpd (mle)", [&](const SchoolsColumn& c) { return c.lpd_mle ? f1(-2.0 * *c.lpd_mle) : c.aic_undefined; });
  row("AIC   k", [&](const SchoolsColumn& c) { return c.k ? f1(*c.k) : c.aic_undefined; });
  row("AIC   AIC", [&](const SchoolsColumn& c) { return c.aic ? f1(*c.aic) : c.aic_undefined; });
  row("DIC   -2 lpd (Bayes)", [&](const SchoolsColumn& c) { return f1(-2.0 * c.lpd_bayes); });
  row("DIC   p_DIC", [&](const SchoolsColumn& c) { return f1(c.p_dic); });
  row("DIC   DIC", [&](const SchoolsColumn& c) { return f1(c.dic); });
  row("WAIC  -2 lppd", [&](const SchoolsColumn& c) { return f1(-2.0 * c.lppd); });
  row("WAIC  p_WAIC1", [&](const SchoolsColumn& c) { return f1(c.p_waic1); });
  row("WAIC  p_WAIC2", [&](const SchoolsColumn& c) { return f1(c.p_waic2); });
  row("WAIC  WAIC", [&](const SchoolsColumn& c) { return f1(c.waic); });
  row("LOO   -2 lppd", [&](const SchoolsColumn& c) { return c.loo ? f1(-2.0 * c.lppd) : c.loo_undefined; });
  row("LOO   p_loo", [&](const SchoolsColumn& c) { return c.loo ? f1(c.loo->p_loo) : c.loo_undefined; });
  row("LOO   -2 lppd_loo", [&](const SchoolsColumn& c) { return c.loo ? f1(-2.0 * c.loo->lppd_loo) : c.loo_undefined; });
  return rows;
}

inline int cmd_schools_table(const SchoolsTableOptions& o, const Common& c, std::ostream& out) {
  const auto t = schools_table(load_schools(o.input), c.draws, c.seed, c.threads);
  if (!o.tau_density.empty()) {
    const auto dens = t.tau->density();
    detail::write_file(o.tau_density, [&](std::ostream& f) {
      f << "tau,density\n";
      for (std::size_t i = 0; i < dens.size(); ++i) f << csv::format_double(t.tau->tau[i]) << ',' << csv::format_double(dens[i]) << '\n';
    });
  }
  detail::Sink sink(c.output, out);
  auto& s = sink.stream();
  if (c.format == Format::json) {
    Json j = t;
    j = Json{{"subcommand", "schools-table"}, {"draws", t.draws}, {"seed", t.seed}, {"table", j}};
    s << j.dump(2) << '\n';
    return kOk;
  }
  const auto rows = schools_rows(t);
  const char* heads[] = {"no pooling", "complete pooling", "hierarchical"};
  if (c.format == Format::csv) {
    s << "row,no_pooling,complete_pooling,hierarchical\n";
    for (const auto& [label, r] : rows) {
      s << detail::csv_cell(label) << ',' << detail::csv_cell(r[0]) << ',' << detail::csv_cell(r[1]) << ','
        << detail::csv_cell(r[2]) << '\n';
    }
    return kOk;
  }
  s << "# draws " << t.draws << ", seed " << t.seed << '\n';
  std::size_t lw = 0;
  std::array<std::size_t, 3> w{};
  for (std::size_t k = 0; k < 3; ++k) w[k] = std::string(heads[k]).size();
  for (const auto& [label, r] : rows) {
    lw = std::max(lw, label.size());
    for (std::size_t k = 0; k < 3; ++k) w[k] = std::max(w[k], r[k].size());
  }
  auto line = [&](const std::string& label, const std::array<std::string, 3>& r) {
    s << label << std::string(lw - label.size(), ' ');
    for (std::size_t k = 0; k < 3; ++k) s << "  " << std::string(w[k] - r[k].size(), ' ') << r[k];
    s << '\n';
  };
  line("", {heads[0], heads[1], heads[2]});
  for (const auto& [label, r] : rows) line(label, r);
  return kOk;
}

struct ElectionOptions {
  std::string input;
  std::string histogram;
};

inline int cmd_election(const ElectionOptions& o, const Common& c, std::ostream& out) {
  const auto e = election_report(load_election(o.input), c.draws, c.seed, c.threads);
  if (!o.histogram.empty()) {
    detail::write_file(o.histogram, [&](std::ostream& f) { detail::write_histogram_csv(f, e.lpd_posterior.histogram); });
  }
  Json j = e;
  j = Json{{"subcommand", "election"}, {"draws", e.draws}, {"seed", e.seed}, {"election", j}};
  if (c.format != Format::json) j["election"]["lpd_posterior"].erase("histogram");
  detail::Sink sink(c.output, out);
  detail::emit(sink.stream(), j, c.format);
  return kOk;
}

struct OracleOptions {
  int n = 1;
  double m = 0.0;
  double ybar = 0.0;
  double s2y = 0.0;
  double mu0 = 0.0;
  double theta0 = 0.0;
  std::string data;  // optional y column; overrides n, ybar, s2y and enables LOO
};

inline int cmd_oracle(const OracleOptions& o, const Common& c, std::ostream& out) {
  oracle::OracleInput in{o.n, o.s2y, o.ybar, o.mu0, o.m};
  std::vector<double> y;
  if (!o.data.empty()) {
    y = read_y_column(o.data);
    in = oracle::OracleInput::from_data(y, o.m, o.mu0);
  }
  const auto obs = y.empty() ? oracle::observed(in) : oracle::observed(in, std::span<const double>(y));
  Json j{{"subcommand", "oracle"}, {"observed", obs}};
  j["expected_fixed_theta"] = oracle::expected_values({in.n, in.m, oracle::ThetaSource::fixed, o.theta0, in.mu0});
  j["expected_fixed_theta"]["theta0"] = o.theta0;
  if (in.m > 0) {
    j["expected_from_prior"] = oracle::expected_values({in.n, in.m, oracle::ThetaSource::from_prior, 0.0, in.mu0});
  }
  Json flat{{"expected_elppd", oracle::expected_elppd(in.n)},
            {"expected_lppd", oracle::expected_lppd(in.n)},
            {"true_p", oracle::true_p(in.n)},
            {"expected_aic_gap", oracle::expected_aic_gap(in.n)},
            {"expected_p_waic1", oracle::expected_p_waic1(in.n)},
            {"expected_p_waic2", oracle::expected_p_waic2(in.n)},
            {"expected_waic1_gap", oracle::expected_waic1_gap(in.n)},
            {"expected_waic2_gap", oracle::expected_waic2_gap(in.n)}};
  if (in.n >= 2) {
    flat["expected_loo_gap"] = oracle::expected_loo_gap(in.n);
    flat["expected_p_loo"] = oracle::expected_p_loo(in.n);
    flat["expected_p_cloo"] = oracle::expected_p_cloo(in.n);
    flat["expected_cloo_gap"] = oracle::expected_cloo_gap(in.n);
  }
  j["flat_prior_expectations"] = flat;
  detail::Sink sink(c.output, out);
  // A JSON table by default; --format table/csv flatten it.
  detail::emit(sink.stream(), j, c.format);
  return kOk;
}

struct ExpectOptions {
  int n = 1;
  double m = 0.0;
  std::size_t replicates = 100000;
  std::vector<std::string> estimators;
  std::string theta_source = "fixed";
  double theta0 = 0.0;
  double mu0 = 0.0;
  std::string path = "closed_form";
  std::size_t sim_draws = 4000;
  std::vector<int> curve;
};

inline int cmd_expect(const ExpectOptions& o, const Common& c, std::ostream& out) {
  ReplicationPlan p;
  p.R = o.replicates;
  p.n = o.n;
  p.m = o.m;
  p.seed = c.seed;
  p.theta0 = o.theta0;
  p.mu0 = o.mu0;
  p.threads = c.threads;
  p.draws = o.sim_draws;
  if (o.theta_source == "prior" || o.theta_source == "from_prior") {
    p.theta_source = oracle::ThetaSource::from_prior;
  } else if (o.theta_source != "fixed") {
    throw std::invalid_argument("--theta-source must be fixed or prior");
  }
  if (o.path == "simulation") {
    p.path = ComputePath::simulation;
  } else if (o.path != "closed_form") {
    throw std::invalid_argument("--path must be closed_form or simulation");
  }
  if (!o.estimators.empty()) {
    p.estimators.clear();
    for (const auto& s : o.estimators) {
      // Quantity names such as p_waic2 select their estimator.
      std::optional<Estimator> e = parse_estimator(s);
      if (!e && s.rfind("p_", 0) == 0) e = parse_estimator(s.substr(2));
      if (!e && s.rfind("elppd_", 0) == 0) e = parse_estimator(s.substr(6));
      if (!e && s.rfind("elpd_", 0) == 0) e = parse_estimator(s.substr(5));
      if (!e && s.size() > 4 && s.compare(s.size() - 4, 4, "_gap") == 0) e = parse_estimator(s.substr(0, s.size() - 4));
      if (!e) throw std::invalid_argument("unknown estimator " + s);
      p.estimators.insert(*e);
    }
  }
  p.validate();
  detail::Sink sink(c.output, out);
  auto& s = sink.stream();
  if (!o.curve.empty()) {
    if (p.estimators.size() != 1) throw std::invalid_argument("--curve needs exactly one --estimator");
    const auto rows = bias_curve(o.curve, *p.estimators.begin(), p);
    write_curve_csv(s, rows);
    return kOk;
  }
  const auto res = run_expectation_study(p);
  Json j{{"subcommand", "expect"}, {"seed", c.seed}, {"result", res}};
  if (c.format == Format::table) {
    s << "# R " << p.R << ", n " << p.n << ", m " << p.m << ", seed " << p.seed << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %12s %10s %12s %8s\n", "quantity", "mc_mean", "mc_se", "oracle", "z");
    s << buf;
    for (const auto& q : res.quantities) {
      std::snprintf(buf, sizeof buf, "%-12s %12.5f %10.5f %12.5f %8.2f\n", q.name.c_str(), q.mc_mean, q.mc_se, q.oracle,
                    q.z_score);
      s << buf;
    }
    return kOk;
  }
  if (c.format == Format::csv) {
    s << "quantity,mc_mean,mc_se,oracle,z_score\n";
    for (const auto& q : res.quantities) {
      s << q.name << ',' << csv::format_double(q.mc_mean) << ',' << csv::format_double(q.mc_se) << ','
        << csv::format_double(q.oracle) << ',' << csv::format_double(q.z_score) << '\n';
    }
    return kOk;
  }
  s << j.dump(2) << '\n';
  return kOk;
}

// --- entry point ----------------------------------------------------------------

inline void add_common(CLI::App* sub, Common& c, bool with_draws = true) {
  sub->add_option("--output,-o", c.output, "write the report here instead of stdout");
  sub->add_option("--format,-f", c.format_name, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--seed", c.seed, "master random seed");
  if (with_draws) sub->add_option("--draws,-S", c.draws, "posterior draws per fit")->check(CLI::PositiveNumber);
  sub->add_option("--threads", c.threads, "worker threads for LOO folds and replicates (0 = all)");
}

inline void add_model_options(CLI::App* sub, ModelOptions& m) {
  sub->add_option("--model", m.model, "normal, regression, schools or balanced");
  sub->add_option("--input,-i", m.input, "data CSV (normal: y; regression: x,y; schools: school,y,sigma; balanced: group,y)");
  sub->add_option("--m", m.m, "prior precision for the normal model (0 = flat)");
  sub->add_option("--mu0", m.mu0, "prior mean for the normal model");
  sub->add_option("--pooling", m.pooling, "schools: none, complete or hierarchical");
  sub->add_option("--prediction-mode", m.prediction_mode, "schools: existing or new");
  sub->add_option("--counting", m.counting, "balanced: observation or group");
  sub->add_option("--mu", m.mu, "balanced: known hyperparameter mu");
  sub->add_option("--tau", m.tau, "balanced: known hyperparameter tau");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predictive information criteria from posterior draws", "infocrit"};
  app.require_subcommand(1);
  Common common;

  CriteriaOptions criteria;
  auto* s_criteria = app.add_subcommand("criteria", "criteria from a pointwise log-likelihood CSV (draws x points)");
  add_common(s_criteria, common, false);
  s_criteria->add_option("--input,-i", criteria.input, "log-likelihood matrix CSV")->required();
  s_criteria->add_option("--lpd-at-mean", criteria.lpd_at_mean, "log p(y | posterior mean), enables DIC");
  s_criteria->add_option("--lpd-mle", criteria.lpd_at_mle, "log p(y | MLE), enables AIC");
  s_criteria->add_option("--k", criteria.k, "number of parameters for AIC");
  s_criteria->add_option("--waic-variant", criteria.waic_variant, "1 or 2")->check(CLI::IsMember({1, 2}));
  s_criteria->add_option("--histogram", criteria.histogram, "write a histogram of per-draw total log-likelihood");

  FitOptions fit;
  auto* s_fit = app.add_subcommand("fit", "fit a built-in model and report criteria");
  add_common(s_fit, common);
  add_model_options(s_fit, fit.model);
  s_fit->add_option("--waic-variant", fit.waic_variant, "1 or 2")->check(CLI::IsMember({1, 2}));
  s_fit->add_option("--dump-loglik", fit.dump_loglik, "write the pointwise log-likelihood matrix CSV");
  s_fit->add_option("--tau-density", fit.tau_density, "schools hierarchical: write gridded p(tau | y)");

  ModelOptions loo;
  auto* s_loo = app.add_subcommand("loo", "exact leave-one-out by refitting");
  add_common(s_loo, common);
  add_model_options(s_loo, loo);

  SchoolsTableOptions schools;
  auto* s_schools = app.add_subcommand("schools-table", "deviance table for the 8-schools models");
  add_common(s_schools, common);
  s_schools->add_option("--input,-i", schools.input, "school,y,sigma CSV (default: bundled data)");
  s_schools->add_option("--tau-density", schools.tau_density, "write gridded p(tau | y)");

  ElectionOptions election;
  auto* s_election = app.add_subcommand("election", "election regression analysis");
  add_common(s_election, common);
  s_election->add_option("--input,-i", election.input, "year,growth,vote CSV (default: bundled data)");
  s_election->add_option("--histogram", election.histogram, "write the log p(y | theta) histogram CSV");

  OracleOptions orc;
  auto* s_oracle = app.add_subcommand("oracle", "closed forms for the normal-mean model");
  add_common(s_oracle, common, false);
  s_oracle->add_option("--n", orc.n, "sample size")->check(CLI::PositiveNumber);
  s_oracle->add_option("--m", orc.m, "prior precision (0 = flat)");
  s_oracle->add_option("--ybar", orc.ybar, "sample mean");
  s_oracle->add_option("--s2y", orc.s2y, "sample variance, divisor n-1");
  s_oracle->add_option("--mu0", orc.mu0, "prior mean");
  s_oracle->add_option("--theta0", orc.theta0, "true theta for the fixed-theta expectations");
  s_oracle->add_option("--data", orc.data, "CSV with column y; overrides n, ybar, s2y");

  ExpectOptions ex;
  auto* s_expect = app.add_subcommand("expect", "replicated-data study against the closed forms");
  add_common(s_expect, common, false);
  s_expect->add_option("--n", ex.n, "sample size per replicate")->check(CLI::PositiveNumber);
  s_expect->add_option("--m", ex.m, "prior precision (0 = flat)");
  s_expect->add_option("--replicates,-R", ex.replicates, "number of simulated data sets");
  s_expect->add_option("--estimator,-e", ex.estimators, "aic dic waic1 waic2 loo cloo lppd elppd (repeatable)");
  s_expect->add_option("--theta-source", ex.theta_source, "fixed or prior");
  s_expect->add_option("--theta0", ex.theta0, "true theta when --theta-source fixed");
  s_expect->add_option("--mu0", ex.mu0, "prior mean");
  s_expect->add_option("--path", ex.path, "closed_form or simulation");
  s_expect->add_option("--sim-draws", ex.sim_draws, "posterior draws per replicate on the simulation path");
  s_expect->add_option("--curve", ex.curve, "n values; emits a bias-curve CSV")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }
  if (common.format_name.empty()) {
    common.format = s_oracle->parsed() ? Format::json : Format::table;
  } else {
    common.format = common.format_name == "json" ? Format::json : common.format_name == "csv" ? Format::csv : Format::table;
  }

  try {
    if (s_criteria->parsed()) return cmd_criteria(criteria, common, out);
    if (s_fit->parsed()) return cmd_fit(fit, common, out);
    if (s_loo->parsed()) return cmd_loo(loo, common, out);
    if (s_schools->parsed()) return cmd_schools_table(schools, common, out);
    if (s_election->parsed()) return cmd_election(election, common, out);
    if (s_oracle->parsed()) return cmd_oracle(orc, common, out);
    if (s_expect->parsed()) return cmd_expect(ex, common, out);
  } catch (const InputFormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const ModelRefusal& e) {
    err << "refused: " << e.what() << '\n';
    return kRefusal;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace infocrit::cli

#endif  // INFOCRIT_TOOLS_CLI_HPP
