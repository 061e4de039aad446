#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <vector>

#include "jtm/optimal_policy.hpp"

namespace jtm::cli {
namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field,
                         const std::string& message) const {
    std::ostringstream os;
    os << source_;
    if (at.IsDefined() && at.Mark().line >= 0) {
      os << ':' << at.Mark().line + 1 << ':' << at.Mark().column + 1;
    }
    os << ": " << field << ": " << message;
    throw ConfigError(os.str());
  }

  void expect_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void allow_keys(const YAML::Node& node, const std::string& field,
                  std::initializer_list<const char*> keys) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) fail(kv.first, join(field, key), "unknown key");
    }
  }

  YAML::Node require(const YAML::Node& node, const std::string& field, const char* key) const {
    const YAML::Node child = node[key];
    if (!child.IsDefined() || child.IsNull()) fail(node, join(field, key), "missing required key");
    return child;
  }

  double number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected a number, got '" + node.Scalar() + "'");
    }
    if (std::isnan(v)) fail(node, field, "must not be nan");
    return v;
  }

  double finite(const YAML::Node& node, const std::string& field) const {
    const double v = number(node, field);
    if (!std::isfinite(v)) fail(node, field, "must be finite");
    return v;
  }

  std::uint64_t whole(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a non-negative integer");
    const std::string& s = node.Scalar();
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      fail(node, field, "expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  bool flag(const YAML::Node& node, const std::string& field) const {
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected true or false");
    }
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < node.size(); ++k) {
      out.push_back(finite(node[k], field + "[" + std::to_string(k) + "]"));
    }
    return out;
  }

  static std::string join(const std::string& field, const std::string& key) {
    return field.empty() ? key : field + "." + key;
  }

 private:
  std::string source_;
};

MarkDistribution read_jump(const Reader& rd, const YAML::Node& node, const std::string& field) {
  rd.expect_map(node, field);
  rd.allow_keys(node, field, {"kind", "params"});
  const YAML::Node kind_node = rd.require(node, field, "kind");
  const std::string kind = rd.text(kind_node, field + ".kind");
  const YAML::Node params = rd.require(node, field, "params");
  const std::string pf = field + ".params";
  rd.expect_map(params, pf);
  try {
    if (kind == "negative_power" || kind == "positive_power") {
      rd.allow_keys(params, pf, {"eta"});
      const double eta = rd.finite(rd.require(params, pf, "eta"), pf + ".eta");
      return kind == "negative_power" ? MarkDistribution::negative_power(eta)
                                      : MarkDistribution::positive_power(eta);
    }
    if (kind == "point_mass") {
      rd.allow_keys(params, pf, {"y"});
      return MarkDistribution::point_mass(rd.finite(rd.require(params, pf, "y"), pf + ".y"));
    }
    if (kind == "discrete") {
      rd.allow_keys(params, pf, {"values", "probabilities"});
      return MarkDistribution::discrete(
          rd.numbers(rd.require(params, pf, "values"), pf + ".values"),
          rd.numbers(rd.require(params, pf, "probabilities"), pf + ".probabilities"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    rd.fail(params, pf, e.what());
  }
  rd.fail(kind_node, field + ".kind",
          "unknown jump kind '" + kind +
              "' (negative_power, positive_power, point_mass, discrete)");
}

struct RegimeDraft {
  RegimeSpec spec;
  std::optional<double> target_pi;
  YAML::Node target_node;
};

RegimeDraft read_regime(const Reader& rd, const YAML::Node& node, const std::string& field,
                        bool allow_nonpositive) {
  rd.expect_map(node, field);
  rd.allow_keys(node, field,
                {"r", "mu", "target_pi", "lambda", "jump", "jump_map", "fraction_bounds"});
  const double r = rd.finite(rd.require(node, field, "r"), field + ".r");
  if (!(r > 0.0) && !allow_nonpositive) {
    rd.fail(node["r"], field + ".r",
            "must be > 0 (set market.options.allow_nonpositive_rates to accept r <= 0)");
  }
  const double lambda = rd.finite(rd.require(node, field, "lambda"), field + ".lambda");
  if (!(lambda > 0.0)) rd.fail(node["lambda"], field + ".lambda", "must be > 0");

  RegimeDraft d{RegimeSpec{r, 0.0, lambda, read_jump(rd, rd.require(node, field, "jump"),
                                                     field + ".jump")},
                std::nullopt, YAML::Node()};
  const bool has_mu = node["mu"].IsDefined(), has_target = node["target_pi"].IsDefined();
  if (has_mu == has_target) rd.fail(node, field, "give exactly one of mu and target_pi");
  if (has_mu) {
    d.spec.mu = rd.finite(node["mu"], field + ".mu");
  } else {
    d.target_pi = rd.finite(node["target_pi"], field + ".target_pi");
    d.target_node = node["target_pi"];
  }

  if (const YAML::Node m = node["jump_map"]; m.IsDefined()) {
    const std::string mf = field + ".jump_map";
    rd.expect_map(m, mf);
    rd.allow_keys(m, mf, {"scale", "shift"});
    const double scale = m["scale"].IsDefined() ? rd.finite(m["scale"], mf + ".scale") : 1.0;
    const double shift = m["shift"].IsDefined() ? rd.finite(m["shift"], mf + ".shift") : 0.0;
    d.spec.jump_map = JumpMap::affine(scale, shift);
    try {
      validate_jump_map(d.spec.jump_dist, d.spec.jump_map);
    } catch (const ValidationError& e) {
      rd.fail(m, mf, e.what());
    }
  }
  if (const YAML::Node b = node["fraction_bounds"]; b.IsDefined()) {
    const std::string bf = field + ".fraction_bounds";
    if (!b.IsSequence() || b.size() != 2) rd.fail(b, bf, "expected [lo, hi]");
    const double lo = rd.number(b[0], bf + "[0]"), hi = rd.number(b[1], bf + "[1]");
    if (!(lo < hi)) rd.fail(b, bf, "needs lo < hi");
    d.spec.fraction_bounds = Interval{lo, hi, std::isfinite(lo), std::isfinite(hi)};
  }
  return d;
}

MarketParams::Matrix read_matrix(const Reader& rd, const YAML::Node& node, const std::string& field,
                                 std::size_t m) {
  if (!node.IsSequence() || node.size() != m) {
    rd.fail(node, field, "expected " + std::to_string(m) + " rows");
  }
  MarketParams::Matrix out;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    auto row = rd.numbers(node[i], rf);
    if (row.size() != m) rd.fail(node[i], rf, "expected " + std::to_string(m) + " entries");
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
  rd.allow_keys(root, "", {"market", "utility", "x0", "mc", "output"});

  const YAML::Node mk = rd.require(root, "", "market");
  rd.expect_map(mk, "market");
  rd.allow_keys(mk, "market",
                {"regimes", "transition", "horizon", "s0", "initial_regime", "options"});

  bool allow_nonpositive = false;
  if (const YAML::Node opt = mk["options"]; opt.IsDefined()) {
    rd.expect_map(opt, "market.options");
    rd.allow_keys(opt, "market.options", {"allow_nonpositive_rates"});
    if (opt["allow_nonpositive_rates"].IsDefined()) {
      allow_nonpositive =
          rd.flag(opt["allow_nonpositive_rates"], "market.options.allow_nonpositive_rates");
    }
  }

  const YAML::Node regs = rd.require(mk, "market", "regimes");
  if (!regs.IsSequence() || regs.size() < 2) {
    rd.fail(regs, "market.regimes", "expected a list of at least 2 regimes");
  }
  std::vector<RegimeDraft> drafts;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    drafts.push_back(read_regime(rd, regs[i], "market.regimes[" + std::to_string(i) + "]",
                                 allow_nonpositive));
  }

  const double horizon = rd.finite(rd.require(mk, "market", "horizon"), "market.horizon");
  if (!(horizon >= 0.0)) rd.fail(mk["horizon"], "market.horizon", "must be >= 0");
  MarketParams::Matrix transition;
  if (mk["transition"].IsDefined()) {
    transition = read_matrix(rd, mk["transition"], "market.transition", drafts.size());
  }

  std::vector<RegimeSpec> specs;
  for (const auto& d : drafts) specs.push_back(d.spec);
  MarketOptions options;
  options.allow_nonpositive_rates = allow_nonpositive;
  std::optional<MarketParams> market;
  try {
    market.emplace(specs, horizon, transition, options);
  } catch (const ValidationError& e) {
    rd.fail(mk, "market", e.what());
  }

  // target_pi plants a root of the log condition: μ = r - λ ∫ f/(1+πf) dF.
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    if (!drafts[i].target_pi) continue;
    const double target = *drafts[i].target_pi;
    const std::string tf = "market.regimes[" + std::to_string(i) + "].target_pi";
    const Interval dom = market->fraction_domain(i);
    if (!(target > dom.lo && target < dom.hi)) {
      rd.fail(drafts[i].target_node, tf,
              "outside the open fraction domain (" + format_double(dom.lo) + ", " +
                  format_double(dom.hi) + ")");
    }
    const MarketParams zero = market->with_drift(i, 0.0);
    market.emplace(market->with_drift(i, -g_log(zero, i, target)));
  }

  Config cfg{source, *market};
  if (const YAML::Node s0 = mk["s0"]; s0.IsDefined()) {
    cfg.s0 = rd.finite(s0, "market.s0");
    if (!(cfg.s0 > 0.0)) rd.fail(s0, "market.s0", "must be > 0");
  }
  if (const YAML::Node ir = mk["initial_regime"]; ir.IsDefined()) {
    cfg.initial_regime = rd.whole(ir, "market.initial_regime");
    if (cfg.initial_regime >= drafts.size()) {
      rd.fail(ir, "market.initial_regime", "no such regime");
    }
  }

  if (const YAML::Node u = root["utility"]; u.IsDefined()) {
    rd.expect_map(u, "utility");
    rd.allow_keys(u, "utility", {"kind", "alpha"});
    const std::string kind = rd.text(rd.require(u, "utility", "kind"), "utility.kind");
    if (kind == "log") {
      cfg.utility = UtilityKind::Log;
    } else if (kind == "power") {
      cfg.utility = UtilityKind::Power;
      cfg.alpha = rd.finite(rd.require(u, "utility", "alpha"), "utility.alpha");
      if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        rd.fail(u["alpha"], "utility.alpha", "must lie in (0, 1)");
      }
    } else {
      rd.fail(u["kind"], "utility.kind", "expected log or power");
    }
  }

  if (const YAML::Node x0 = root["x0"]; x0.IsDefined()) {
    cfg.x0 = rd.finite(x0, "x0");
    if (!(cfg.x0 > 0.0)) rd.fail(x0, "x0", "must be > 0");
  }

  if (const YAML::Node mc = root["mc"]; mc.IsDefined()) {
    rd.expect_map(mc, "mc");
    rd.allow_keys(mc, "mc", {"n_paths", "seed", "workers"});
    if (mc["n_paths"].IsDefined()) {
      cfg.mc.n_paths = rd.whole(mc["n_paths"], "mc.n_paths");
      if (cfg.mc.n_paths < 100) rd.fail(mc["n_paths"], "mc.n_paths", "must be >= 100");
    }
    if (mc["seed"].IsDefined()) cfg.mc.seed = rd.whole(mc["seed"], "mc.seed");
    if (mc["workers"].IsDefined()) {
      const auto w = rd.whole(mc["workers"], "mc.workers");
      if (w > 4096) rd.fail(mc["workers"], "mc.workers", "must be <= 4096");
      cfg.mc.workers = static_cast<unsigned>(w);
    }
  }

  if (const YAML::Node out = root["output"]; out.IsDefined()) {
    cfg.output = rd.text(out, "output");
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

const std::string& config_schema() {
  static const std::string schema = R"(# jtm configuration (YAML). Keys marked * are required.
market:                       # *
  horizon: 10.0               # * T >= 0, in years
  s0: 1.0                     # initial price, > 0 (default 1)
  initial_regime: 0           # starting state for simulate and verify (default 0)
  options:
    allow_nonpositive_rates: false   # accept r <= 0 (needed for power-utility solutions)
  transition:                 # post-jump state law, rows sum to 1, zero diagonal.
    - [0, 1]                  # default: alternate for 2 regimes, uniform otherwise
    - [1, 0]
  regimes:                    # * at least 2
    - r: 0.01                 # * interest rate, > 0 unless allowed above
      mu: 0.16                # * appreciation rate ...
      # target_pi: 0.5        #   ... or the log-optimal fraction to plant (mu is back-computed)
      lambda: 0.3             # * exit intensity, > 0
      jump:                   # * mark distribution
        kind: negative_power  #   negative_power {eta > 0}    density eta (1+y)^(eta-1) on (-1, 0)
        params: {eta: 1.0}    #   positive_power {eta > 1}    density eta (1+y)^-(eta+1) on (0, inf)
                              #   point_mass {y}              y in (-1, inf), y != 0
                              #   discrete {values, probabilities}
      jump_map: {scale: 1.0, shift: 0.0}   # f(y) = scale*y + shift (default identity)
      fraction_bounds: [-.inf, .inf]       # optional constraint on the fraction
    - r: 0.01
      mu: -0.2
      lambda: 1.2
      jump: {kind: positive_power, params: {eta: 2.0}}
utility:
  kind: log                   # log | power
  alpha: 0.5                  # power only, in (0, 1)
x0: 1.0                       # initial wealth, > 0
mc:
  n_paths: 10000              # >= 100
  seed: 1
  workers: 0                  # 0 = all hardware threads
output: out                   # directory for CSV output
)";
  return schema;
}

}  // namespace jtm::cli
