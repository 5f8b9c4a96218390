#include "benford/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace benford {

namespace {

using ordered_json = nlohmann::ordered_json;

template <class E>
using Names = std::vector<std::pair<E, const char*>>;

const Names<MapFamily>& map_family_names() {
  static const Names<MapFamily> names = {
      {MapFamily::AffinePlus, "affine_plus"},
      {MapFamily::ContractionFixedPoint, "contraction"},
      {MapFamily::PowerPlus, "power_plus"},
      {MapFamily::AnalyticFlat, "analytic_flat"},
      {MapFamily::Exponential, "exponential"},
      {MapFamily::Tent, "tent"},
      {MapFamily::NonAutonomousLinear, "non_autonomous_linear"},
      {MapFamily::NonAutonomousPower, "non_autonomous_power"},
  };
  return names;
}

const Names<GTag>& g_names() {
  static const Names<GTag> names = {
      {GTag::Zero, "zero"}, {GTag::One, "one"}, {GTag::Sqrt, "sqrt"}, {GTag::ExpNeg, "exp_neg"}};
  return names;
}

const Names<IndexedRule::Kind>& rule_names() {
  static const Names<IndexedRule::Kind> names = {
      {IndexedRule::Kind::Constant, "constant"},
      {IndexedRule::Kind::Harmonic, "harmonic"},
      {IndexedRule::Kind::Linear, "linear"},
      {IndexedRule::Kind::Geometric, "geometric"},
  };
  return names;
}

const Names<NewtonTarget>& newton_names() {
  static const Names<NewtonTarget> names = {
      {NewtonTarget::ExpMinus2, "exp_minus_2"},
      {NewtonTarget::ExpMinus2Cubed, "exp_minus_2_cubed"},
  };
  return names;
}

const Names<NewtonSystem::Series>& series_names() {
  static const Names<NewtonSystem::Series> names = {
      {NewtonSystem::Series::Diffs, "diffs"}, {NewtonSystem::Series::Errors, "errors"}};
  return names;
}

const Names<DistSpec::Family>& dist_names() {
  static const Names<DistSpec::Family> names = {
      {DistSpec::Family::Uniform, "uniform"},
      {DistSpec::Family::Exponential, "exponential"},
      {DistSpec::Family::Normal, "normal"},
      {DistSpec::Family::Cantor10, "cantor10"},
      {DistSpec::Family::PointMass, "point_mass"},
  };
  return names;
}

const Names<RandomPathSystem::Kind>& path_names() {
  static const Names<RandomPathSystem::Kind> names = {
      {RandomPathSystem::Kind::Power, "power"},
      {RandomPathSystem::Kind::IidProduct, "iid_product"},
  };
  return names;
}

const Names<oracle::SequenceKind>& sequence_names() {
  static const Names<oracle::SequenceKind> names = {
      {oracle::SequenceKind::PowerOfTwo, "power_of_two"},
      {oracle::SequenceKind::Fibonacci, "fibonacci"},
      {oracle::SequenceKind::Factorial, "factorial"},
      {oracle::SequenceKind::LinearRecursion, "linear"},
      {oracle::SequenceKind::TwoStepPoly, "two_step"},
  };
  return names;
}

template <class E>
std::string name_of(const Names<E>& names, E e) {
  for (const auto& [value, name] : names) {
    if (value == e) return name;
  }
  return "?";
}

/// Strict reader for one JSON object: typed lookups with defaults, and an
/// error for any key nobody asked about.
class Fields {
 public:
  Fields(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }

  const ordered_json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const ordered_json& require(const std::string& key) {
    const ordered_json* v = find(key);
    if (v == nullptr) throw ConfigError(at(key), "missing required field");
    return *v;
  }

  double number(const std::string& key, double fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ConfigError(at(key), "expected a number");
    return v->get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(at(key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  int integer(const std::string& key, int fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v->get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  template <class E>
  E choice(const std::string& key, const Names<E>& names, E fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (v->is_string()) {
      for (const auto& [value, name] : names) {
        if (v->get<std::string>() == name) return value;
      }
    }
    std::string allowed;
    for (const auto& [value, name] : names) allowed += std::string(allowed.empty() ? "" : ", ") + name;
    throw ConfigError(at(key), "expected one of " + allowed);
  }

  /// A number or a string such as "1.2" or "6/5"; kept exact when possible.
  ExactReal exact(const std::string& key, ExactReal fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    try {
      if (v->is_string()) return ExactReal::parse(v->get<std::string>());
      if (v->is_number()) return ExactReal::parse(v->dump());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at(key), e.what());
    }
    throw ConfigError(at(key), "expected a number or a numeric string");
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  std::vector<std::uint64_t> counts(const std::string& key, std::vector<std::uint64_t> fallback) {
    const ordered_json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_array()) throw ConfigError(at(key), "expected an array of non-negative integers");
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_unsigned()) {
        throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a non-negative integer");
      }
      out.push_back((*v)[i].get<std::uint64_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError(at(item.key()), "unknown field");
    }
  }

 private:
  const ordered_json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(static_cast<double>(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from(const ordered_json& j, const std::string& path, bool allow_empty) {
  if (j.is_null() && allow_empty) return Matrix();
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  const std::size_t d = j.size();
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != d) throw ConfigError(row_path, "expected a square matrix");
    for (std::size_t k = 0; k < d; ++k) {
      if (!j[i][k].is_number()) throw ConfigError(row_path + "[" + std::to_string(k) + "]", "expected a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

ordered_json rule_json(const IndexedRule& r) {
  ordered_json j;
  j["kind"] = name_of(rule_names(), r.kind);
  j["p"] = r.p;
  j["q"] = r.q;
  return j;
}

IndexedRule rule_from(Fields& parent, const std::string& key, IndexedRule fallback) {
  const ordered_json* v = parent.find(key);
  if (v == nullptr) return fallback;
  Fields f(*v, parent.at(key));
  IndexedRule r;
  r.kind = f.choice("kind", rule_names(), fallback.kind);
  r.p = f.number("p", fallback.p);
  r.q = f.number("q", fallback.q);
  f.finish();
  return r;
}

ordered_json system_json(const SystemSpec& system) {
  ordered_json j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, OracleSystem>) {
          j["type"] = "oracle";
          j["sequence"] = name_of(sequence_names(), s.kind.kind);
          j["coefficients"] = s.kind.coefficients;
          j["seeds"] = s.kind.seeds;
          j["a1"] = s.kind.a1;
          j["a2"] = s.kind.a2;
          j["b1"] = s.kind.b1;
          j["b2"] = s.kind.b2;
        } else if constexpr (std::is_same_v<T, MapSystem>) {
          j["type"] = "map";
          j["family"] = name_of(map_family_names(), s.spec.family);
          j["a"] = s.spec.a;
          j["b"] = s.spec.b;
          j["g"] = name_of(g_names(), s.spec.g);
          j["a_rule"] = rule_json(s.spec.a_rule);
          j["b_rule"] = rule_json(s.spec.b_rule);
          j["x0"] = s.x0;
        } else if constexpr (std::is_same_v<T, NewtonSystem>) {
          j["type"] = "newton";
          j["target"] = name_of(newton_names(), s.target);
          j["x0"] = s.x0;
          j["series"] = name_of(series_names(), s.series);
        } else if constexpr (std::is_same_v<T, MatrixPowerSystem>) {
          j["type"] = "matrix_power";
          j["matrix"] = matrix_json(s.a);
          j["k"] = s.k;
          j["l"] = s.l;
        } else if constexpr (std::is_same_v<T, RecursionSystem>) {
          j["type"] = "linear_recursion";
          j["coefficients"] = s.spec.coeffs;
          j["seeds"] = s.spec.seeds;
        } else if constexpr (std::is_same_v<T, MarkovSystem>) {
          j["type"] = "markov";
          j["matrix"] = s.p.size() == 0 ? ordered_json(nullptr) : matrix_json(s.p);
          j["dimension"] = s.dimension;
          j["k"] = s.k;
          j["l"] = s.l;
        } else if constexpr (std::is_same_v<T, RandomPathSystem>) {
          j["type"] = "random_path";
          j["kind"] = name_of(path_names(), s.kind);
          ordered_json d;
          d["family"] = name_of(dist_names(), s.dist.family);
          d["p1"] = s.dist.p1;
          d["p2"] = s.dist.p2;
          j["dist"] = d;
        } else if constexpr (std::is_same_v<T, GbmPathSystem>) {
          j["type"] = "gbm_path";
          j["mu"] = s.spec.mu;
          j["sigma"] = s.spec.sigma;
          j["x0"] = s.spec.x0;
          j["t_end"] = s.spec.t_end;
          j["dt"] = s.spec.dt;
        } else if constexpr (std::is_same_v<T, TwoStepSystem>) {
          j["type"] = "twostep";
          j["a1"] = s.params.a1.to_string();
          j["a2"] = s.params.a2.to_string();
          j["b1"] = s.params.b1.to_string();
          j["b2"] = s.params.b2.to_string();
          j["extended"] = s.params.extended;
          j["x1"] = s.x1;
          j["x2"] = s.x2;
        }
      },
      system);
  return j;
}

SystemSpec system_from(const ordered_json& j, const std::string& path) {
  Fields f(j, path);
  const std::string type = f.text("type", "");
  SystemSpec out;
  if (type == "oracle") {
    OracleSystem s;
    s.kind.kind = f.choice("sequence", sequence_names(), oracle::SequenceKind::PowerOfTwo);
    s.kind.coefficients = f.counts("coefficients", {});
    s.kind.seeds = f.counts("seeds", {});
    s.kind.a1 = f.unsigned_int("a1", 1);
    s.kind.a2 = f.unsigned_int("a2", 1);
    s.kind.b1 = static_cast<unsigned>(f.unsigned_int("b1", 2));
    s.kind.b2 = static_cast<unsigned>(f.unsigned_int("b2", 2));
    out = s;
  } else if (type == "map") {
    MapSystem s;
    s.spec.family = f.choice("family", map_family_names(), MapFamily::AffinePlus);
    s.spec.a = f.number("a", 2.0);
    s.spec.b = f.number("b", 2.0);
    s.spec.g = f.choice("g", g_names(), GTag::Zero);
    s.spec.a_rule = rule_from(f, "a_rule", IndexedRule{});
    s.spec.b_rule = rule_from(f, "b_rule", IndexedRule::constant(2.0));
    s.x0 = f.number("x0", 1.0);
    try {
      s.spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
    out = s;
  } else if (type == "newton") {
    NewtonSystem s;
    s.target = f.choice("target", newton_names(), NewtonTarget::ExpMinus2);
    s.x0 = f.number("x0", 1.0);
    s.series = f.choice("series", series_names(), NewtonSystem::Series::Diffs);
    out = s;
  } else if (type == "matrix_power") {
    MatrixPowerSystem s;
    s.a = matrix_from(f.require("matrix"), f.at("matrix"), false);
    s.k = f.integer("k", 1);
    s.l = f.integer("l", 1);
    out = s;
  } else if (type == "linear_recursion") {
    RecursionSystem s;
    s.spec.coeffs = f.numbers("coefficients", s.spec.coeffs);
    s.spec.seeds = f.numbers("seeds", s.spec.seeds);
    try {
      s.spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
    out = s;
  } else if (type == "markov") {
    MarkovSystem s;
    const ordered_json* m = f.find("matrix");
    if (m != nullptr) s.p = matrix_from(*m, f.at("matrix"), true);
    s.dimension = f.integer("dimension", 2);
    s.k = f.integer("k", 1);
    s.l = f.integer("l", 1);
    if (s.p.size() == 0 && s.dimension < 2) throw ConfigError(f.at("dimension"), "must be >= 2");
    out = s;
  } else if (type == "random_path") {
    RandomPathSystem s;
    s.kind = f.choice("kind", path_names(), RandomPathSystem::Kind::Power);
    if (const ordered_json* d = f.find("dist")) {
      Fields df(*d, f.at("dist"));
      s.dist.family = df.choice("family", dist_names(), DistSpec::Family::Uniform);
      s.dist.p1 = df.number("p1", 0.0);
      s.dist.p2 = df.number("p2", 1.0);
      df.finish();
    }
    try {
      s.dist.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(f.at("dist"), e.what());
    }
    out = s;
  } else if (type == "gbm_path") {
    GbmPathSystem s;
    s.spec.mu = f.number("mu", s.spec.mu);
    s.spec.sigma = f.number("sigma", s.spec.sigma);
    s.spec.x0 = f.number("x0", s.spec.x0);
    s.spec.t_end = f.number("t_end", s.spec.t_end);
    s.spec.dt = f.number("dt", s.spec.dt);
    try {
      s.spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
    out = s;
  } else if (type == "twostep") {
    TwoStepSystem s;
    s.params.a1 = f.exact("a1", 1.0);
    s.params.a2 = f.exact("a2", 1.0);
    s.params.b1 = f.exact("b1", 2.0);
    s.params.b2 = f.exact("b2", 2.0);
    s.params.extended = f.boolean("extended", false);
    s.x1 = f.number("x1", 1.0);
    s.x2 = f.number("x2", 1.0);
    try {
      s.params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
    if (!(s.x1 > 0) || !(s.x2 > 0)) throw ConfigError(f.at("x1"), "seeds must be positive");
    out = s;
  } else {
    throw ConfigError(f.at("type"),
                      "expected one of oracle, map, newton, matrix_power, linear_recursion, "
                      "markov, random_path, gbm_path, twostep");
  }
  f.finish();
  return out;
}

std::string csv_row(const std::string& label, const std::array<std::int64_t, 9>& v, bool percent) {
  std::string out = label;
  for (std::int64_t x : v) out += "," + (percent ? format_hundredths(x) : std::to_string(x));
  return out + "\n";
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["system"] = system_json(c.system);
  j["n"] = c.n;
  j["seed"] = c.seed;
  ordered_json t;
  t["ks_threshold"] = c.thresholds.ks_threshold;
  t["weyl_threshold"] = c.thresholds.weyl_threshold;
  t["harmonics"] = c.thresholds.harmonics;
  t["reference_n"] = c.thresholds.reference_n;
  t["min_samples"] = c.thresholds.min_samples;
  j["thresholds"] = t;
  ordered_json o;
  o["dir"] = c.out_dir;
  o["format"] = c.format;
  j["output"] = o;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  Fields f(j, "$");
  ExperimentConfig c;
  c.system = system_from(f.require("system"), f.at("system"));
  c.n = f.unsigned_int("n", c.n);
  if (c.n == 0) throw ConfigError(f.at("n"), "must be >= 1");
  c.seed = f.unsigned_int("seed", c.seed);
  if (const ordered_json* t = f.find("thresholds")) {
    Fields tf(*t, f.at("thresholds"));
    c.thresholds.ks_threshold = tf.number("ks_threshold", c.thresholds.ks_threshold);
    c.thresholds.weyl_threshold = tf.number("weyl_threshold", c.thresholds.weyl_threshold);
    c.thresholds.harmonics = tf.integer("harmonics", c.thresholds.harmonics);
    c.thresholds.reference_n = tf.unsigned_int("reference_n", c.thresholds.reference_n);
    c.thresholds.min_samples = tf.unsigned_int("min_samples", c.thresholds.min_samples);
    if (!(c.thresholds.ks_threshold > 0) || !(c.thresholds.weyl_threshold > 0)) {
      throw ConfigError(f.at("thresholds"), "thresholds must be positive");
    }
    if (c.thresholds.harmonics < 1) throw ConfigError(tf.at("harmonics"), "must be >= 1");
    tf.finish();
  }
  if (const ordered_json* o = f.find("output")) {
    Fields of(*o, f.at("output"));
    c.out_dir = of.text("dir", c.out_dir);
    c.format = of.text("format", c.format);
    if (c.format != "json" && c.format != "csv") throw ConfigError(of.at("format"), "expected json or csv");
    of.finish();
  }
  f.finish();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

RunResult run_experiment(const ExperimentConfig& c) {
  RunResult r;
  bool report_done = false;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, OracleSystem>) {
          r.sequence = oracle::exact_log_values(s.kind, c.n);
        } else if constexpr (std::is_same_v<T, MapSystem>) {
          Orbit orbit = iterate_map(s.spec, static_cast<long double>(s.x0), c.n);
          r.sequence = std::move(orbit.values);
          if (orbit.truncated) r.note = "orbit truncated: " + orbit.reason;
        } else if constexpr (std::is_same_v<T, NewtonSystem>) {
          NewtonSequences seqs = newton_sequences(s.target, s.x0, c.n);
          r.sequence = s.series == NewtonSystem::Series::Diffs ? std::move(seqs.diffs)
                                                               : std::move(seqs.errors);
        } else if constexpr (std::is_same_v<T, MatrixPowerSystem>) {
          r.sequence = matrix_power_entries(s.a, s.k, s.l, c.n);
        } else if constexpr (std::is_same_v<T, RecursionSystem>) {
          r.sequence = linear_recursion(s.spec, c.n).seq;
        } else if constexpr (std::is_same_v<T, MarkovSystem>) {
          Matrix p = s.p;
          if (p.size() == 0) {
            Rng rng(c.seed);
            p = random_stochastic_matrix(s.dimension, rng);
          }
          MarkovSequences m = markov_sequences(p, s.k, s.l, c.n);
          r.sequence = std::move(m.diff);
          if (m.eventually_zero) r.note = "difference sequence is eventually zero";
        } else if constexpr (std::is_same_v<T, RandomPathSystem>) {
          Rng rng(c.seed);
          RandomPath path = s.kind == RandomPathSystem::Kind::Power
                                ? rv_power_path(s.dist, rng, c.n)
                                : iid_product_path(s.dist, rng, c.n);
          r.sequence = std::move(path.values);
          if (path.resampled_zeros > 0) {
            r.note = "resampled " + std::to_string(path.resampled_zeros) + " zero draws";
          }
        } else if constexpr (std::is_same_v<T, GbmPathSystem>) {
          Rng rng(c.seed);
          GBMPath path = gbm_path(s.spec, rng);
          r.report = gbm_path_conformance(path, c.thresholds);
          r.sequence = std::move(path.x);
          report_done = true;
        } else if constexpr (std::is_same_v<T, TwoStepSystem>) {
          r.sequence = orbit_log(s.params, static_cast<long double>(s.x1),
                                 static_cast<long double>(s.x2), c.n);
        }
      },
      c.system);
  if (!report_done) r.report = conformance_report(r.sequence, c.thresholds);
  return r;
}

std::string orbit_csv(std::span<const SignedLogValue> seq) {
  std::string out = "n,sign,log_mag,first_digit\n";
  char buf[128];
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const SignedLogValue& v = seq[i];
    if (v.is_zero()) {
      std::snprintf(buf, sizeof buf, "%zu,0,,0\n", i + 1);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%d,%.21Lg,%d\n", i + 1, v.sign, v.log_mag(), first_digit(v));
    }
    out += buf;
  }
  return out;
}

std::string write_artifacts(const ExperimentConfig& c, const RunResult& r) {
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  const bool csv = c.format == "csv";
  const std::string report =
      csv ? report_csv_header() + "\n" + report_to_csv_row(r.report) + "\n" : report_to_json(r.report) + "\n";
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  write(dir / (csv ? "report.csv" : "report.json"), report);
  write(dir / "orbit.csv", orbit_csv(r.sequence));
  return report;
}

Figure parse_figure(const std::string& name) {
  if (name == "fig1") return Figure::Fig1;
  if (name == "fig1a") return Figure::Fig1a;
  if (name == "fig2" || name == "fig2-boundary") return Figure::Fig2Boundary;
  throw std::invalid_argument("unknown figure '" + name + "' (expected fig1, fig1a, fig2)");
}

std::vector<DigitRow> fig1_table(std::size_t n) {
  const std::pair<const char*, oracle::ExactSequenceKind> seqs[] = {
      {"2^n", oracle::ExactSequenceKind::power_of_two()},
      {"F_n", oracle::ExactSequenceKind::fibonacci()},
      {"n!", oracle::ExactSequenceKind::factorial()},
  };
  std::vector<DigitRow> rows;
  for (const auto& [label, kind] : seqs) {
    const DigitHistogram h = oracle::exact_digit_histogram(kind, n);
    DigitRow row{label, {}};
    for (int d = 1; d <= 9; ++d) row.values[d - 1] = percent_hundredths(h.count(d), h.nonzero());
    rows.push_back(row);
  }
  DigitRow bl{"exact BL", {}};
  const auto probs = benford_digit_probabilities();
  for (int d = 0; d < 9; ++d) bl.values[d] = truncated_percent_hundredths(probs[d]);
  rows.push_back(bl);
  return rows;
}

std::vector<DigitRow> fig1a_table() {
  std::vector<DigitRow> rows;
  for (std::uint64_t n : {100u, 1000u, 10000u}) {
    const DigitHistogram h = oracle::exact_digit_histogram(oracle::ExactSequenceKind::fibonacci(), n);
    DigitRow counts{"N=" + std::to_string(n) + " counts", {}};
    DigitRow vec{"N=" + std::to_string(n) + " benford_vector", {}};
    const auto bv = benford_vector(n);
    for (int d = 0; d < 9; ++d) {
      counts.values[d] = static_cast<std::int64_t>(h.counts[d]);
      vec.values[d] = static_cast<std::int64_t>(bv[d]);
    }
    rows.push_back(counts);
    rows.push_back(vec);
  }
  return rows;
}

std::vector<BoundaryScanPoint> fig2_boundary() {
  return boundary_scan(TwoStepParams::make(1, 1, 2, 2), 360);
}

std::string boundary_csv(std::span<const BoundaryScanPoint> points) {
  std::string out = "angle,r,x1,x2\n";
  char buf[160];
  for (const BoundaryScanPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17Lg,%.17Lg,%.17Lg\n", p.theta, p.r, p.x1, p.x2);
    out += buf;
  }
  return out;
}

std::string reproduce(Figure figure, const std::string& format) {
  if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
  const bool json = format == "json";
  if (figure == Figure::Fig2Boundary) {
    const auto points = fig2_boundary();
    if (!json) return boundary_csv(points);
    ordered_json arr = ordered_json::array();
    for (const auto& p : points) {
      ordered_json o;
      o["angle"] = p.theta;
      o["r"] = static_cast<double>(p.r);
      o["x1"] = static_cast<double>(p.x1);
      o["x2"] = static_cast<double>(p.x2);
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }
  const bool percent = figure == Figure::Fig1;
  const auto rows = percent ? fig1_table() : fig1a_table();
  if (json) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json o;
      o["label"] = row.label;
      ordered_json vals = ordered_json::array();
      for (std::int64_t v : row.values) {
        if (percent) {
          vals.push_back(format_hundredths(v));
        } else {
          vals.push_back(v);
        }
      }
      o["values"] = vals;
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }
  std::string out = "label,d1,d2,d3,d4,d5,d6,d7,d8,d9\n";
  for (const auto& row : rows) out += csv_row(row.label, row.values, percent);
  return out;
}

}  // namespace benford
