#include "lotto/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lotto/core.hpp"
#include "lotto/favoritism.hpp"
#include "lotto/interplay.hpp"
#include "lotto/oracle.hpp"
#include "lotto/stackelberg.hpp"

namespace lotto::cli {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form, so repeated runs are byte-identical.
std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(bool v) { return v ? "1" : "0"; }

// Collected option values; explicit flags win over config-file params,
// which win over built-in defaults.
struct Bag {
  json config = json::object();
  std::map<std::string, double> nums;
  std::map<std::string, std::vector<double>> vecs;
  std::map<std::string, std::string> strs;

  json cparams() const {
    if (config.contains("params") && config["params"].is_object()) return config["params"];
    return json::object();
  }

  double num(const std::string& key, double def) const {
    if (auto it = nums.find(key); it != nums.end()) return it->second;
    const json p = cparams();
    if (p.contains(key) && p[key].is_number()) return p[key].get<double>();
    return def;
  }

  std::vector<double> vec(const std::string& key) const {
    if (auto it = vecs.find(key); it != vecs.end()) return it->second;
    const json p = cparams();
    if (p.contains(key) && p[key].is_array()) return p[key].get<std::vector<double>>();
    return {};
  }

  std::string str(const std::string& key, const std::string& def) const {
    if (auto it = strs.find(key); it != strs.end()) return it->second;
    const json p = cparams();
    if (p.contains(key) && p[key].is_string()) return p[key].get<std::string>();
    return def;
  }
};

struct Sink {
  std::optional<std::string> path;
  std::string format;
};

Sink make_sink(const Bag& bag, const std::string& default_format) {
  Sink s;
  s.format = default_format;
  if (bag.config.contains("output") && bag.config["output"].is_object()) {
    const json& o = bag.config["output"];
    if (o.contains("path") && o["path"].is_string()) s.path = o["path"].get<std::string>();
    if (o.contains("format") && o["format"].is_string()) s.format = o["format"].get<std::string>();
  }
  if (auto it = bag.strs.find("out"); it != bag.strs.end()) s.path = it->second;
  if (auto it = bag.strs.find("format"); it != bag.strs.end()) s.format = it->second;
  if (s.format != "json" && s.format != "csv")
    throw Error(Err::NonPositiveValue, "format must be json or csv, got '" + s.format + "'");
  return s;
}

// Write to <path>.tmp first and rename, so readers never see a torn file.
void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    if (!f.good()) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

void deliver(const Sink& sink, const std::string& content, std::ostream& out) {
  if (sink.path)
    atomic_write(*sink.path, content);
  else
    out << content;
}

unsigned thread_count() {
  const char* env = std::getenv("LOTTO_LAB_THREADS");
  if (env == nullptr || *env == '\0')
    return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0)
    throw Error(Err::NonPositiveValue, "LOTTO_LAB_THREADS must be a nonnegative integer");
  if (v == 0) return std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(v);
}

// ---- single-shot commands ------------------------------------------------

json spe_json(double P, double RA, double RB) {
  const SpeResult r = spe_payoff(P, RA, RB);
  return json{{"command", "spe"},
              {"P", P},
              {"R_A", RA},
              {"R_B", RB},
              {"pi_A", r.pi_A},
              {"pi_B", r.pi_B},
              {"regime", to_string(r.regime.tag)},
              {"boundary_distance", r.regime.boundary_distance},
              {"degenerate", r.degenerate},
              {"p_star", r.p_star.p}};
}

int do_spe(const Bag& bag, std::ostream& out) {
  const double q = bag.num("q", 1.0);
  const double P = bag.num("P", 0.0);
  const double RA = bag.num("RA", 0.0);
  const double RB = bag.num("RB", 1.0) * q;
  const Sink sink = make_sink(bag, "json");
  if (sink.format == "csv") {
    const SpeResult r = spe_payoff(P, RA, RB);
    std::string csv = "P,R_A,R_B,pi_A,pi_B,boundary_distance,degenerate,regime\n";
    csv += fmt(P) + "," + fmt(RA) + "," + fmt(RB) + "," + fmt(r.pi_A) + "," + fmt(r.pi_B) + "," +
           fmt(r.regime.boundary_distance) + "," + fmt(r.degenerate) + "," +
           to_string(r.regime.tag) + "\n";
    deliver(sink, csv, out);
  } else {
    deliver(sink, spe_json(P, RA, RB).dump(2) + "\n", out);
  }
  return 0;
}

int do_stage2(const Bag& bag, std::ostream& out, std::ostream& err) {
  std::vector<double> p = bag.vec("p");
  if (p.empty()) throw Error(Err::NonPositiveValue, "stage2 requires --p");
  std::vector<double> w = bag.vec("w");
  if (w.empty()) w.assign(p.size(), 1.0);  // uniform battlefield values

  GameConfig raw;
  raw.w = w;
  raw.R_A = bag.num("RA", 0.0);
  raw.R_B = bag.num("RB", 1.0);
  raw.q = bag.num("q", 1.0);
  double wsum = 0.0;
  for (double v : w) wsum += v;
  const PreAllocation pre = make_preallocation(p);
  raw.P = pre.P;
  const GameConfig cfg = normalize_config(raw);
  if (std::abs(wsum - 1.0) > 1e-9)
    err << json{{"note", "battlefield values rescaled to sum 1"}}.dump() << "\n";

  const std::string method = bag.str("method", "auto");
  Stage2Outcome outcome;
  if (method == "auto") {
    outcome = stage2_payoff(pre, cfg);
  } else if (method == "closed") {
    outcome.kappa = solve_partition_closed(pre, cfg);
    outcome.pi_A = stage2_value(outcome.kappa, pre, cfg);
    outcome.pi_B = 1.0 - outcome.pi_A;
  } else if (method == "numeric") {
    outcome.kappa = solve_numeric(pre, cfg);
    outcome.pi_A = stage2_value(outcome.kappa, pre, cfg);
    outcome.pi_B = 1.0 - outcome.pi_A;
  } else {
    throw Error(Err::NonPositiveValue, "method must be auto, closed or numeric");
  }

  const json j{{"command", "stage2"},
               {"p", pre.p},
               {"w", cfg.w},
               {"R_A", cfg.R_A},
               {"R_B", cfg.R_B},
               {"pi_A", outcome.pi_A},
               {"pi_B", outcome.pi_B},
               {"kappa_A", outcome.kappa.kappa_A},
               {"kappa_B", outcome.kappa.kappa_B},
               {"partition_B1", outcome.kappa.partition_B1},
               {"partition_B2", outcome.kappa.partition_B2},
               {"residual_A", outcome.kappa.residual_A},
               {"residual_B", outcome.kappa.residual_B},
               {"method", to_string(outcome.kappa.method)}};
  const Sink sink = make_sink(bag, "json");
  if (sink.format == "csv") {
    std::string csv = "pi_A,pi_B,kappa_A,kappa_B,residual_A,residual_B,method\n";
    csv += fmt(outcome.pi_A) + "," + fmt(outcome.pi_B) + "," + fmt(outcome.kappa.kappa_A) + "," +
           fmt(outcome.kappa.kappa_B) + "," + fmt(outcome.kappa.residual_A) + "," +
           fmt(outcome.kappa.residual_B) + "," + to_string(outcome.kappa.method) + "\n";
    deliver(sink, csv, out);
  } else {
    deliver(sink, j.dump(2) + "\n", out);
  }
  return 0;
}

int do_ratio(const Bag& bag, std::ostream& out) {
  const double RA = bag.num("RA", 0.0);
  const double RB = bag.num("RB", 1.0);
  const double E = effectiveness_ratio(RA, RB);
  const double P_eq = equivalent_preallocation(RA, RB);
  const Sink sink = make_sink(bag, "json");
  if (sink.format == "csv") {
    deliver(sink, "R_A,R_B,E,P_eq\n" + fmt(RA) + "," + fmt(RB) + "," + fmt(E) + "," + fmt(P_eq) + "\n", out);
  } else {
    deliver(sink,
            json{{"command", "ratio"}, {"R_A", RA}, {"R_B", RB}, {"E", E}, {"P_eq", P_eq}}.dump(2) +
                "\n",
            out);
  }
  return 0;
}

int do_invest(const Bag& bag, std::ostream& out) {
  const double MA = bag.num("MA", 0.0);
  const double cA = bag.num("cA", 0.0);
  const double RB = bag.num("RB", 1.0) * bag.num("q", 1.0);
  const InvestmentPlan plan = optimal_investment(MA, cA, RB);
  const Sink sink = make_sink(bag, "json");
  if (sink.format == "csv") {
    std::string csv = "M_A,c_A,R_B,P_star,RA_star,pi_opt,indifference_end,branch\n";
    csv += fmt(MA) + "," + fmt(cA) + "," + fmt(RB) + "," + fmt(plan.P_star) + "," +
           fmt(plan.R_A_star) + "," + fmt(plan.pi_opt) + "," + fmt(plan.indifference_end) + "," +
           to_string(plan.branch) + "\n";
    deliver(sink, csv, out);
  } else {
    deliver(sink,
            json{{"command", "invest"},
                 {"M_A", MA},
                 {"c_A", cA},
                 {"R_B", RB},
                 {"P_star", plan.P_star},
                 {"RA_star", plan.R_A_star},
                 {"pi_opt", plan.pi_opt},
                 {"indifference_end", plan.indifference_end},
                 {"branch", to_string(plan.branch)}}
                    .dump(2) +
                "\n",
            out);
  }
  return 0;
}

int do_stackelberg(const Bag& bag, std::ostream& out) {
  MonetaryParams mp;
  mp.M_A = bag.num("MA", 0.0);
  mp.M_B = bag.num("MB", 0.0);
  mp.c_A = bag.num("cA", 0.0);
  mp.c_B = bag.num("cB", 0.0);
  const StackelbergOutcome eq = stackelberg_equilibrium(mp);
  const Sink sink = make_sink(bag, "json");
  if (sink.format == "csv") {
    std::string csv = "M_A,M_B,c_A,c_B,p_A_star,p_B_star,u_A,u_B,case\n";
    csv += fmt(mp.M_A) + "," + fmt(mp.M_B) + "," + fmt(mp.c_A) + "," + fmt(mp.c_B) + "," +
           fmt(eq.p_A_star) + "," + fmt(eq.p_B_star) + "," + fmt(eq.u_A) + "," + fmt(eq.u_B) +
           "," + to_string(eq.case_tag) + "\n";
    deliver(sink, csv, out);
  } else {
    json j{{"command", "stackelberg"}, {"M_A", mp.M_A}, {"M_B", mp.M_B},
           {"c_A", mp.c_A},            {"c_B", mp.c_B}, {"p_A_star", eq.p_A_star},
           {"p_B_star", eq.p_B_star},  {"u_A", eq.u_A}, {"u_B", eq.u_B},
           {"case", to_string(eq.case_tag)}};
    if (eq.p_A_dagger) j["p_A_dagger"] = *eq.p_A_dagger;
    if (eq.p_B_alt) j["p_B_alt"] = *eq.p_B_alt;
    deliver(sink, j.dump(2) + "\n", out);
  }
  return 0;
}

int do_level_curve(const Bag& bag, std::ostream& out) {
  const double Pi = bag.num("Pi", 0.5);
  const double RB = bag.num("RB", 1.0) * bag.num("q", 1.0);
  const int samples = static_cast<int>(bag.num("samples", 100.0));
  const LevelCurve curve = sample_level_curve(Pi, RB, samples);
  const Sink sink = make_sink(bag, "csv");
  if (sink.format == "csv") {
    std::string csv = "P,R_A\n";
    for (auto [P, R] : curve.samples) csv += fmt(P) + "," + fmt(R) + "\n";
    deliver(sink, csv, out);
  } else {
    json arr = json::array();
    for (auto [P, R] : curve.samples) arr.push_back({P, R});
    deliver(sink,
            json{{"command", "level-curve"},
                 {"Pi", curve.Pi},
                 {"R_B", curve.R_B},
                 {"domain_end", curve.domain_end},
                 {"samples", arr}}
                    .dump(2) +
                "\n",
            out);
  }
  return 0;
}

int do_verify(const Bag& bag, std::ostream& out, bool list_only) {
  if (list_only) {
    std::string text;
    for (const auto& name : oracle::registered_checks()) text += name + "\n";
    out << text;
    return 0;
  }
  oracle::GridSpec grid;
  grid.resolution = static_cast<int>(bag.num("resolution", 100.0));
  grid.seed = static_cast<unsigned>(bag.num("seed", 0.0));
  std::vector<std::string> checks;
  if (auto it = bag.strs.find("checks"); it != bag.strs.end()) {
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) checks.push_back(item);
  } else {
    const json p = bag.cparams();
    if (p.contains("checks") && p["checks"].is_array())
      checks = p["checks"].get<std::vector<std::string>>();
  }
  const auto reports = oracle::run_suite(checks, grid);

  bool all_pass = true;
  const Sink sink = make_sink(bag, "json");
  if (sink.format == "csv") {
    std::string csv = "check,instances,max_violation,tolerance,pass\n";
    for (const auto& r : reports) {
      csv += r.check_name + "," + std::to_string(r.instances_run) + "," + fmt(r.max_violation) +
             "," + fmt(r.tolerance) + "," + fmt(r.pass) + "\n";
      all_pass = all_pass && r.pass;
    }
    deliver(sink, csv, out);
  } else {
    json arr = json::array();
    for (const auto& r : reports) {
      arr.push_back({{"check", r.check_name},
                     {"instances", r.instances_run},
                     {"max_violation", r.max_violation},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass},
                     {"worst_case_input", r.worst_case_input}});
      all_pass = all_pass && r.pass;
    }
    deliver(sink, arr.dump(2) + "\n", out);
  }
  return all_pass ? 0 : 3;
}

// ---- sweep ----------------------------------------------------------------

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  double value(int i) const {
    if (steps == 1) return start;
    return start + (stop - start) * static_cast<double>(i) / (steps - 1);
  }
};

Axis parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4)
    throw Error(Err::NonPositiveValue, "axis must look like name:start:stop:steps, got '" + text + "'");
  Axis ax;
  ax.name = parts[0];
  try {
    ax.start = std::stod(parts[1]);
    ax.stop = std::stod(parts[2]);
    ax.steps = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw Error(Err::NonPositiveValue, "cannot parse axis '" + text + "'");
  }
  if (ax.steps < 1) throw Error(Err::NonPositiveValue, "axis steps must be >= 1");
  return ax;
}

struct SweepCmd {
  std::set<std::string> params;
  std::vector<std::string> columns;
  std::function<std::vector<std::string>(const std::map<std::string, double>&)> eval;
};

const std::map<std::string, SweepCmd>& sweep_commands() {
  static const std::map<std::string, SweepCmd> table = {
      {"spe",
       {{"P", "RA", "RB", "q"},
        {"pi_A", "pi_B", "boundary_distance", "degenerate", "regime"},
        [](const std::map<std::string, double>& v) {
          const SpeResult r =
              spe_payoff(v.at("P"), v.at("RA"), v.at("RB") * v.at("q"));
          return std::vector<std::string>{fmt(r.pi_A), fmt(r.pi_B),
                                          fmt(r.regime.boundary_distance), fmt(r.degenerate),
                                          to_string(r.regime.tag)};
        }}},
      {"invest",
       {{"MA", "cA", "RB", "q"},
        {"P_star", "RA_star", "pi_opt", "indifference_end", "branch"},
        [](const std::map<std::string, double>& v) {
          const InvestmentPlan plan =
              optimal_investment(v.at("MA"), v.at("cA"), v.at("RB") * v.at("q"));
          return std::vector<std::string>{fmt(plan.P_star), fmt(plan.R_A_star), fmt(plan.pi_opt),
                                          fmt(plan.indifference_end), to_string(plan.branch)};
        }}},
      {"ratio",
       {{"RA", "RB"},
        {"E", "P_eq"},
        [](const std::map<std::string, double>& v) {
          return std::vector<std::string>{fmt(effectiveness_ratio(v.at("RA"), v.at("RB"))),
                                          fmt(equivalent_preallocation(v.at("RA"), v.at("RB")))};
        }}},
      {"stackelberg",
       {{"MA", "MB", "cA", "cB"},
        {"p_A_star", "p_B_star", "u_A", "u_B", "case"},
        [](const std::map<std::string, double>& v) {
          MonetaryParams mp;
          mp.M_A = v.at("MA");
          mp.M_B = v.at("MB");
          mp.c_A = v.at("cA");
          mp.c_B = v.at("cB");
          const StackelbergOutcome eq = stackelberg_equilibrium(mp);
          return std::vector<std::string>{fmt(eq.p_A_star), fmt(eq.p_B_star), fmt(eq.u_A),
                                          fmt(eq.u_B), to_string(eq.case_tag)};
        }}},
  };
  return table;
}

int do_sweep(const Bag& bag, const std::vector<std::string>& axis_flags, std::ostream& out) {
  const std::string cmd = bag.str("cmd", "");
  const auto& table = sweep_commands();
  const auto cmd_it = table.find(cmd);
  if (cmd_it == table.end())
    throw Error(Err::NonPositiveValue,
                "sweep --cmd must be one of spe, invest, ratio, stackelberg; got '" + cmd + "'");
  const SweepCmd& sc = cmd_it->second;

  std::vector<Axis> axes;
  for (const auto& text : axis_flags) axes.push_back(parse_axis(text));
  if (axes.empty() && bag.config.contains("sweep") && bag.config["sweep"].is_array()) {
    for (const json& item : bag.config["sweep"]) {
      Axis ax;
      ax.name = item.at("axis").get<std::string>();
      ax.start = item.at("start").get<double>();
      ax.stop = item.at("stop").get<double>();
      ax.steps = item.at("steps").get<int>();
      if (ax.steps < 1) throw Error(Err::NonPositiveValue, "axis steps must be >= 1");
      axes.push_back(ax);
    }
  }
  if (axes.empty() || axes.size() > 2)
    throw Error(Err::NonPositiveValue, "sweep needs one or two axes");
  std::set<std::string> seen;
  for (const auto& ax : axes) {
    if (!sc.params.count(ax.name))
      throw Error(Err::NonPositiveValue, "axis '" + ax.name + "' is not a parameter of " + cmd);
    if (!seen.insert(ax.name).second)
      throw Error(Err::NonPositiveValue, "duplicate axis '" + ax.name + "'");
  }

  std::map<std::string, double> base;
  for (const auto& key : sc.params) base[key] = bag.num(key, key == "RB" || key == "q" ? 1.0 : 0.0);

  const long total = axes.size() == 2 ? static_cast<long>(axes[0].steps) * axes[1].steps
                                      : axes[0].steps;
  std::vector<std::string> rows(static_cast<std::size_t>(total));

  auto compute_row = [&](long idx) {
    std::map<std::string, double> v = base;
    std::string prefix;
    if (axes.size() == 2) {
      const int i = static_cast<int>(idx / axes[1].steps);
      const int j = static_cast<int>(idx % axes[1].steps);
      v[axes[0].name] = axes[0].value(i);
      v[axes[1].name] = axes[1].value(j);
      prefix = fmt(v[axes[0].name]) + "," + fmt(v[axes[1].name]);
    } else {
      v[axes[0].name] = axes[0].value(static_cast<int>(idx));
      prefix = fmt(v[axes[0].name]);
    }
    const auto fields = sc.eval(v);
    std::string row = prefix;
    for (const auto& f : fields) row += "," + f;
    rows[static_cast<std::size_t>(idx)] = row;
  };

  const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<long>(total, 1)));
  std::exception_ptr fail;
  std::mutex fail_mx;
  if (workers <= 1) {
    for (long i = 0; i < total; ++i) compute_row(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const long i = next.fetch_add(1);
          if (i >= total) return;
          try {
            compute_row(i);
          } catch (...) {
            std::lock_guard<std::mutex> lk(fail_mx);
            if (!fail) fail = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (fail) std::rethrow_exception(fail);
  }

  std::string header = axes[0].name;
  if (axes.size() == 2) header += "," + axes[1].name;
  for (const auto& c : sc.columns) header += "," + c;

  const Sink sink = make_sink(bag, "csv");
  if (sink.format == "csv") {
    std::string csv = header + "\n";
    for (const auto& r : rows) csv += r + "\n";
    deliver(sink, csv, out);
  } else {
    // JSON sweeps keep the same cells as the CSV, organized per row.
    json arr = json::array();
    std::vector<std::string> cols;
    {
      std::stringstream ss(header);
      std::string c;
      while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    for (const auto& r : rows) {
      json obj;
      std::stringstream ss(r);
      std::string cell;
      std::size_t k = 0;
      while (std::getline(ss, cell, ',') && k < cols.size()) {
        char* end = nullptr;
        const double d = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() && *end == '\0')
          obj[cols[k]] = d;
        else
          obj[cols[k]] = cell;
        ++k;
      }
      arr.push_back(obj);
    }
    deliver(sink, arr.dump(2) + "\n", out);
  }
  return 0;
}

// ---- argument wiring -------------------------------------------------------

void add_common(CLI::App* cmd, Bag& bag, std::string& config_path) {
  cmd->add_option_function<std::string>(
         "--config", [&](const std::string& v) { config_path = v; },
         "JSON config file; explicit flags override its params");
  cmd->add_option_function<std::string>(
         "--out", [&bag](const std::string& v) { bag.strs["out"] = v; },
         "output file (written atomically); stdout when omitted");
  cmd->add_option_function<std::string>(
         "--format", [&bag](const std::string& v) { bag.strs["format"] = v; }, "json or csv");
}

void add_num(CLI::App* cmd, Bag& bag, const char* flag, const char* key, const char* desc) {
  cmd->add_option_function<double>(
      flag, [&bag, key](double v) { bag.nums[key] = v; }, desc);
}

void load_config(const std::string& path, Bag& bag) {
  if (path.empty()) return;
  std::ifstream f(path);
  if (!f) throw Error(Err::NonPositiveValue, "cannot read config file '" + path + "'");
  try {
    f >> bag.config;
  } catch (const std::exception& e) {
    throw Error(Err::NonPositiveValue, std::string("config is not valid JSON: ") + e.what());
  }
  if (!bag.config.is_object())
    throw Error(Err::NonPositiveValue, "config root must be a JSON object");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"equilibrium and investment calculator for two-stage allocation contests"};
  app.require_subcommand(0, 1);

  Bag bags[8];
  std::string config_paths[8];
  std::vector<std::string> axis_flags;
  bool verify_list = false;

  CLI::App* c_spe = app.add_subcommand("spe", "aggregate-game equilibrium payoffs");
  add_common(c_spe, bags[0], config_paths[0]);
  add_num(c_spe, bags[0], "--P", "P", "pre-allocated budget");
  add_num(c_spe, bags[0], "--RA", "RA", "A's stage-two budget");
  add_num(c_spe, bags[0], "--RB", "RB", "B's stage-two budget (default 1)");
  add_num(c_spe, bags[0], "--q", "q", "discount on B's budget (default 1)");

  CLI::App* c_stage2 = app.add_subcommand("stage2", "stage-two solve for an explicit split");
  add_common(c_stage2, bags[1], config_paths[1]);
  c_stage2->add_option_function<std::vector<double>>(
              "--p", [&](const std::vector<double>& v) { bags[1].vecs["p"] = v; },
              "per-battlefield pre-allocation, comma separated")
      ->delimiter(',');
  c_stage2->add_option_function<std::vector<double>>(
              "--w", [&](const std::vector<double>& v) { bags[1].vecs["w"] = v; },
              "battlefield values (default uniform)")
      ->delimiter(',');
  add_num(c_stage2, bags[1], "--RA", "RA", "A's stage-two budget");
  add_num(c_stage2, bags[1], "--RB", "RB", "B's stage-two budget (default 1)");
  add_num(c_stage2, bags[1], "--q", "q", "discount on B's budget (default 1)");
  c_stage2->add_option_function<std::string>(
      "--method", [&](const std::string& v) { bags[1].strs["method"] = v; },
      "auto | closed | numeric");

  CLI::App* c_ratio = app.add_subcommand("ratio", "pre-allocation effectiveness of a budget");
  add_common(c_ratio, bags[2], config_paths[2]);
  add_num(c_ratio, bags[2], "--RA", "RA", "A's stage-two budget");
  add_num(c_ratio, bags[2], "--RB", "RB", "B's stage-two budget (default 1)");

  CLI::App* c_invest = app.add_subcommand("invest", "optimal budget split against a fixed opponent");
  add_common(c_invest, bags[3], config_paths[3]);
  add_num(c_invest, bags[3], "--MA", "MA", "A's monetary budget");
  add_num(c_invest, bags[3], "--cA", "cA", "A's unit cost of pre-allocation");
  add_num(c_invest, bags[3], "--RB", "RB", "B's stage-two budget (default 1)");
  add_num(c_invest, bags[3], "--q", "q", "discount on B's budget (default 1)");

  CLI::App* c_stack = app.add_subcommand("stackelberg", "leader-follower investment equilibrium");
  add_common(c_stack, bags[4], config_paths[4]);
  add_num(c_stack, bags[4], "--MA", "MA", "leader's monetary budget");
  add_num(c_stack, bags[4], "--MB", "MB", "follower's monetary budget");
  add_num(c_stack, bags[4], "--cA", "cA", "leader's unit cost");
  add_num(c_stack, bags[4], "--cB", "cB", "follower's unit cost");

  CLI::App* c_curve = app.add_subcommand("level-curve", "sample one iso-payoff curve");
  add_common(c_curve, bags[5], config_paths[5]);
  add_num(c_curve, bags[5], "--Pi", "Pi", "target payoff in [0, 1)");
  add_num(c_curve, bags[5], "--RB", "RB", "B's stage-two budget (default 1)");
  add_num(c_curve, bags[5], "--q", "q", "discount on B's budget (default 1)");
  add_num(c_curve, bags[5], "--samples", "samples", "number of samples (default 100)");

  CLI::App* c_sweep = app.add_subcommand("sweep", "tabulate a command over one or two axes");
  add_common(c_sweep, bags[6], config_paths[6]);
  c_sweep->add_option_function<std::string>(
      "--cmd", [&](const std::string& v) { bags[6].strs["cmd"] = v; },
      "spe | invest | ratio | stackelberg");
  c_sweep->add_option("--axis", axis_flags, "axis spec name:start:stop:steps (repeatable, max 2)");
  for (const char* key : {"P", "RA", "RB", "q", "MA", "MB", "cA", "cB"})
    add_num(c_sweep, bags[6], (std::string("--") + key).c_str(), key, "fixed parameter");

  CLI::App* c_verify = app.add_subcommand("verify", "run the consistency-check suite");
  add_common(c_verify, bags[7], config_paths[7]);
  c_verify->add_option_function<std::string>(
      "--checks", [&](const std::string& v) { bags[7].strs["checks"] = v; },
      "comma-separated check names (default: all)");
  add_num(c_verify, bags[7], "--resolution", "resolution", "grid resolution (default 100)");
  add_num(c_verify, bags[7], "--seed", "seed", "random seed (default 0)");
  c_verify->add_flag("--list", verify_list, "list registered checks and exit");

  // Allow `--config file.json` without a subcommand: take it from the file.
  std::vector<std::string> argv = args;
  if (!argv.empty() && argv[0].rfind("--", 0) == 0) {
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
      if (argv[i] == "--config") {
        Bag probe;
        load_config(argv[i + 1], probe);
        if (probe.config.contains("command") && probe.config["command"].is_string())
          argv.insert(argv.begin(), probe.config["command"].get<std::string>());
        break;
      }
    }
  }

  std::vector<std::string> full = {"lotto-lab"};
  full.insert(full.end(), argv.begin(), argv.end());
  std::vector<const char*> ptrs;
  ptrs.reserve(full.size());
  for (const auto& s : full) ptrs.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream igne;
    const int code = app.exit(e, out, igne);
    if (!igne.str().empty()) err << igne.str();
    return code == 0 ? 0 : 1;
  }

  const std::vector<std::pair<CLI::App*, int>> slots = {
      {c_spe, 0}, {c_stage2, 1}, {c_ratio, 2},  {c_invest, 3},
      {c_stack, 4}, {c_curve, 5}, {c_sweep, 6}, {c_verify, 7}};
  for (auto [cmd, i] : slots) {
    if (!cmd->parsed()) continue;
    load_config(config_paths[i], bags[i]);
    if (bags[i].config.contains("command") && bags[i].config["command"].is_string()) {
      const std::string want = bags[i].config["command"].get<std::string>();
      if (want != cmd->get_name())
        throw Error(Err::NonPositiveValue,
                    "config is for command '" + want + "' but '" + cmd->get_name() + "' was invoked");
    }
    switch (i) {
      case 0: return do_spe(bags[0], out);
      case 1: return do_stage2(bags[1], out, err);
      case 2: return do_ratio(bags[2], out);
      case 3: return do_invest(bags[3], out);
      case 4: return do_stackelberg(bags[4], out);
      case 5: return do_level_curve(bags[5], out);
      case 6: return do_sweep(bags[6], axis_flags, out);
      case 7: return do_verify(bags[7], out, verify_list);
    }
  }
  out << app.help();
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << json{{"error", to_string(e.code())}, {"detail", e.what()}}.dump() << "\n";
    return exit_category(e.code());
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"detail", e.what()}}.dump() << "\n";
    return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace lotto::cli
