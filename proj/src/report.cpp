#include "mop/report.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mop {

using nlohmann::json;

namespace {

constexpr double kGridAgreementTol = 1e-5;

std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("builtin channel parameter '" + item + "' is not key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

template <typename T>
T param(const std::map<std::string, std::string>& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("builtin channel needs parameter '" + key + "'");
  try {
    if constexpr (std::is_same_v<T, int>) return std::stoi(it->second);
    else return std::stod(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("builtin channel parameter '" + key + "' is malformed");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChannelError("cannot open channel file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = n ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  ComplexMatrix out(n, m);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      out(r, c) = Complex(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
  return out;
}

void fill_rows(Report& r, const PuritySequence& seq) {
  for (const auto& l : seq.levels)
    r.rows.push_back({l.n, l.dim, l.mu, l.iterations, l.residual, l.wall_ms});
}

void fill_solution(Report& r, const MopResult& res) {
  fill_rows(r, res.sequence);
  r.fit = res.fit;
  r.nu_q = res.nu_q;
  r.rho_opt = res.rho_opt.matrix();
  r.rho_opt_value = res.rho_opt_value;
  r.input_state = res.input_state;
  r.input_state_value = res.input_state_value;
  r.local_search = res.certificate;
  r.diagnostics = res.diagnostics;
}

Report run_validate(const RunConfig& cfg) {
  Report r;
  r.config = cfg;
  std::vector<ComplexMatrix> kraus;
  try {
    if (cfg.channel.rfind("builtin:", 0) == 0)
      kraus = resolve_channel(cfg.channel, cfg.seed).kraus();
    else
      kraus = kraus_from_json(read_file(cfg.channel));
    r.kraus_count = kraus.size();
    r.d = kraus.empty() ? 0 : static_cast<int>(kraus.front().rows());
    validate_channel(kraus);
    r.tp_deviation = trace_preservation_deviation(kraus);
    r.verdict = Verdict::certified;
  } catch (const std::exception& e) {
    if (!kraus.empty()) {
      bool square = true;
      for (const auto& k : kraus) square = square && k.rows() == r.d && k.cols() == r.d;
      if (square) r.tp_deviation = trace_preservation_deviation(kraus);
    }
    r.verdict = Verdict::failed;
    r.diagnostics.emplace_back(e.what());
  }
  return r;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::sweep: return "sweep";
    case Command::compare: return "compare";
    case Command::validate: return "validate";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::degraded: return "degraded";
    case Verdict::failed: return "failed";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  if (s == "solve") return Command::solve;
  if (s == "sweep") return Command::sweep;
  if (s == "compare") return Command::compare;
  if (s == "validate") return Command::validate;
  throw std::invalid_argument("unknown command '" + s + "'");
}

static Verdict parse_verdict(const std::string& s) {
  if (s == "certified") return Verdict::certified;
  if (s == "degraded") return Verdict::degraded;
  if (s == "failed") return Verdict::failed;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

void RunConfig::check() const {
  if (channel.empty()) throw std::invalid_argument("--channel is required");
  if (command == Command::validate) return;
  if (q < 2 || q > 4) throw std::invalid_argument("--q must be 2, 3 or 4");
  if (n_max < 1) throw std::invalid_argument("--n-max must be >= 1");
  if (!(eig_tol > 0.0)) throw std::invalid_argument("--eig-tol must be > 0");
  if (window < 3) throw std::invalid_argument("--window must be >= 3");
  if (command != Command::sweep && n_max < window)
    throw std::invalid_argument("--n-max must be >= --window for " +
                                std::string(to_string(command)));
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (grid_resolution < 3) throw std::invalid_argument("grid resolution must be >= 3");
}

QuantumChannel resolve_channel(const std::string& source, std::uint64_t seed) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) != 0) return load_channel_file(source);
  const std::string rest = source.substr(prefix.size());
  const auto colon = rest.find(':');
  const std::string kind = rest.substr(0, colon);
  const auto params = parse_params(colon == std::string::npos ? "" : rest.substr(colon + 1));
  if (kind == "depolarizing")
    return make_depolarizing(param<int>(params, "d"), param<double>(params, "p"));
  if (kind == "random")
    return make_random_channel(param<int>(params, "d"), param<int>(params, "k"), seed);
  if (kind == "identity") return make_depolarizing(param<int>(params, "d"), 1.0);
  throw std::invalid_argument("unknown builtin channel '" + kind + "'");
}

Report run(const RunConfig& cfg) {
  cfg.check();
  if (cfg.command == Command::validate) return run_validate(cfg);

  Report r;
  r.config = cfg;
  try {
    const QuantumChannel channel = resolve_channel(cfg.channel, cfg.seed);
    r.d = channel.dim();
    r.kraus_count = channel.kraus().size();

    if (cfg.command == Command::sweep) {
      LiftedOperator a = lift_channel(choi_of(channel), cfg.q);
      if (cfg.q > 2) a = symmetrize(a);
      SequenceOptions so;
      so.eig_tol = cfg.eig_tol;
      so.seed = cfg.seed;
      const PuritySequence seq = purity_sequence(compress(a), dense_schedule(cfg.n_max), so);
      fill_rows(r, seq);
      if (seq.levels.size() >= static_cast<std::size_t>(cfg.window))
        r.fit = extrapolate(seq, static_cast<std::size_t>(cfg.window));
      r.verdict = Verdict::certified;
      return r;
    }

    MopOptions opts;
    opts.n_max = cfg.n_max;
    opts.eig_tol = cfg.eig_tol;
    opts.window = static_cast<std::size_t>(cfg.window);
    opts.seed = cfg.seed;
    opts.restarts = cfg.restarts;
    const MopResult res = solve_max_output_purity(channel, cfg.q, opts);
    fill_solution(r, res);
    bool ok = res.certified;

    if (cfg.command == Command::compare) {
      for (const auto& row : r.rows)
        if (res.certificate > row.mu + kMonotonicityTol) {
          std::ostringstream os;
          os.precision(15);
          os << "local search " << res.certificate << " exceeds mu_" << row.n << " = " << row.mu;
          r.diagnostics.push_back(os.str());
          ok = false;
        }
      if (channel.dim() == 2) {
        r.grid = bloch_grid_oracle(channel, cfg.q, cfg.grid_resolution);
        if (res.fit.mu_inf < r.grid->lower - kGridAgreementTol ||
            res.fit.mu_inf > r.grid->upper + kGridAgreementTol) {
          std::ostringstream os;
          os.precision(15);
          os << "extrapolated limit " << res.fit.mu_inf << " outside grid bracket ["
             << r.grid->lower << ", " << r.grid->upper << "] +- " << kGridAgreementTol;
          r.diagnostics.push_back(os.str());
          ok = false;
        }
      }
    }
    r.verdict = ok ? Verdict::certified : Verdict::degraded;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    r.verdict = Verdict::failed;
    r.diagnostics.emplace_back(e.what());
  }
  return r;
}

int exit_status(Verdict v) {
  switch (v) {
    case Verdict::certified: return 0;
    case Verdict::degraded: return 2;
    case Verdict::failed: return 1;
  }
  return 1;
}

std::string to_json(const Report& r) {
  const RunConfig& c = r.config;
  json doc;
  doc["config"] = {{"command", to_string(c.command)},
                   {"channel", c.channel},
                   {"q", c.q},
                   {"n_max", c.n_max},
                   {"eig_tol", c.eig_tol},
                   {"window", c.window},
                   {"seed", c.seed},
                   {"format", c.format == OutputFormat::json ? "json" : "csv"},
                   {"restarts", c.restarts},
                   {"grid_resolution", c.grid_resolution}};
  doc["channel"] = {{"d", r.d}, {"kraus_count", r.kraus_count}};
  json rows = json::array();
  for (const auto& l : r.rows)
    rows.push_back({{"n", l.n},
                    {"dim", l.dim},
                    {"mu", l.mu},
                    {"iters", l.iters},
                    {"residual", l.residual},
                    {"wall_ms", l.wall_ms}});
  doc["levels"] = std::move(rows);
  if (r.fit)
    doc["fit"] = {{"mu_inf", r.fit->mu_inf},     {"a", r.fit->a},
                  {"b", r.fit->b},               {"residual", r.fit->residual},
                  {"decaying", r.fit->decaying}, {"window_first", r.fit->window_first},
                  {"window_last", r.fit->window_last}, {"estimates", r.fit->estimates}};
  if (r.nu_q) doc["nu_q"] = *r.nu_q;
  if (r.rho_opt) doc["rho_opt"] = matrix_json(*r.rho_opt);
  if (r.rho_opt_value) doc["rho_opt_value"] = *r.rho_opt_value;
  if (r.input_state) doc["input_state"] = matrix_json(*r.input_state);
  if (r.input_state_value) doc["input_state_value"] = *r.input_state_value;
  if (r.local_search || r.grid) {
    json base = json::object();
    if (r.local_search) base["local_search"] = *r.local_search;
    if (r.grid)
      base["grid"] = {{"lower", r.grid->lower},
                      {"upper", r.grid->upper},
                      {"theta", r.grid->theta},
                      {"phi", r.grid->phi}};
    doc["baseline"] = std::move(base);
  }
  if (r.tp_deviation) doc["tp_deviation"] = *r.tp_deviation;
  doc["verdict"] = to_string(r.verdict);
  doc["diagnostics"] = r.diagnostics;
  return doc.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os.precision(17);
  if (r.config.command == Command::validate) {
    os << "valid,d,kraus,deviation\n"
       << (r.verdict == Verdict::certified ? 1 : 0) << ',' << r.d << ',' << r.kraus_count << ','
       << (r.tp_deviation ? *r.tp_deviation : std::nan("")) << '\n';
  } else {
    os << "n,dim,mu,iters,residual,wall_ms\n";
    for (const auto& l : r.rows)
      os << l.n << ',' << l.dim << ',' << l.mu << ',' << l.iters << ',' << l.residual << ','
         << l.wall_ms << '\n';
    if (r.fit)
      os << "# fit mu_inf=" << r.fit->mu_inf << " a=" << r.fit->a << " b=" << r.fit->b
         << " residual=" << r.fit->residual << '\n';
    if (r.nu_q) os << "# nu_q=" << *r.nu_q << '\n';
    if (r.local_search) os << "# local_search=" << *r.local_search << '\n';
    if (r.grid) os << "# grid lower=" << r.grid->lower << " upper=" << r.grid->upper << '\n';
  }
  os << "# verdict=" << to_string(r.verdict) << '\n';
  for (const auto& d : r.diagnostics) os << "# " << d << '\n';
  return os.str();
}

Report report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  Report r;
  const json& c = doc.at("config");
  r.config.command = parse_command(c.at("command").get<std::string>());
  r.config.channel = c.at("channel").get<std::string>();
  r.config.q = c.at("q").get<int>();
  r.config.n_max = c.at("n_max").get<int>();
  r.config.eig_tol = c.at("eig_tol").get<double>();
  r.config.window = c.at("window").get<int>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.format = c.at("format").get<std::string>() == "csv" ? OutputFormat::csv
                                                               : OutputFormat::json;
  r.config.restarts = c.at("restarts").get<int>();
  r.config.grid_resolution = c.at("grid_resolution").get<int>();
  r.d = doc.at("channel").at("d").get<int>();
  r.kraus_count = doc.at("channel").at("kraus_count").get<std::size_t>();
  for (const auto& l : doc.at("levels"))
    r.rows.push_back({l.at("n").get<int>(), l.at("dim").get<std::size_t>(),
                      l.at("mu").get<double>(), l.at("iters").get<std::size_t>(),
                      l.at("residual").get<double>(), l.at("wall_ms").get<double>()});
  if (doc.contains("fit")) {
    const json& f = doc["fit"];
    ExtrapolationFit fit;
    fit.mu_inf = f.at("mu_inf").get<double>();
    fit.a = f.at("a").get<double>();
    fit.b = f.at("b").get<double>();
    fit.residual = f.at("residual").get<double>();
    fit.decaying = f.at("decaying").get<bool>();
    fit.window_first = f.at("window_first").get<int>();
    fit.window_last = f.at("window_last").get<int>();
    fit.estimates = f.at("estimates").get<std::size_t>();
    r.fit = fit;
  }
  if (doc.contains("nu_q")) r.nu_q = doc["nu_q"].get<double>();
  if (doc.contains("rho_opt")) r.rho_opt = matrix_from(doc["rho_opt"]);
  if (doc.contains("rho_opt_value")) r.rho_opt_value = doc["rho_opt_value"].get<double>();
  if (doc.contains("input_state")) r.input_state = ComplexVector(matrix_from(doc["input_state"]));
  if (doc.contains("input_state_value"))
    r.input_state_value = doc["input_state_value"].get<double>();
  if (doc.contains("baseline")) {
    const json& b = doc["baseline"];
    if (b.contains("local_search")) r.local_search = b["local_search"].get<double>();
    if (b.contains("grid")) {
      const json& g = b["grid"];
      r.grid = GridBracket{g.at("lower").get<double>(), g.at("upper").get<double>(),
                           g.at("theta").get<double>(), g.at("phi").get<double>()};
    }
  }
  if (doc.contains("tp_deviation")) r.tp_deviation = doc["tp_deviation"].get<double>();
  r.verdict = parse_verdict(doc.at("verdict").get<std::string>());
  for (const auto& d : doc.at("diagnostics")) r.diagnostics.push_back(d.get<std::string>());
  return r;
}

}  // namespace mop
