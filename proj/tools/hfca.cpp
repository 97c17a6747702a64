// hfca: command-line driver for the experiments and verifications.
//
// Every subcommand reads an optional key=value config file (--config) whose
// keys mirror the flags; flags given on the command line override the file.
// Result rows go to stdout (CSV, or JSON with --format json) and are appended
// to --out when given. Exit codes: 0 success, 1 verification failure, 2 usage.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hfca/compiler.hpp"
#include "hfca/harness.hpp"
#include "hfca/lattice.hpp"
#include "hfca/rng.hpp"
#include "hfca/simulator.hpp"
#include "hfca/stack3d.hpp"
#include "hfca/tsirelson.hpp"
#include "hfca/verifier.hpp"

using namespace hfca;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Keys that never influence results and are left out of the config hash.
const char* const kPlumbingKeys[] = {"workers", "out", "format", "witness", "counterexamples", "config"};

struct Context {
  std::string command;
  ExperimentConfig cfg;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string hash;
};

// Collects rows for one subcommand and prints them at the end.
class Table {
 public:
  Table(const Context& ctx, std::vector<std::string> columns) : ctx_(ctx) {
    columns_ = {"schema", "command", "record"};
    columns_.insert(columns_.end(), columns.begin(), columns.end());
    columns_.push_back("seed");
    columns_.push_back("config_hash");
    memory_ = std::make_unique<CsvSink>(columns_);
    const std::string out = ctx.cfg.get("out");
    if (!out.empty()) file_ = std::make_unique<CsvSink>(out, columns_);
  }

  // `cells` maps column name to value; missing columns are left empty.
  void row(const std::string& record, const std::map<std::string, std::string>& cells) {
    std::vector<std::string> r;
    for (const auto& c : columns_) {
      if (c == "schema") r.push_back(std::to_string(CsvSink::kSchemaVersion));
      else if (c == "command") r.push_back(ctx_.command);
      else if (c == "record") r.push_back(record);
      else if (c == "seed") r.push_back(std::to_string(ctx_.seed));
      else if (c == "config_hash") r.push_back(ctx_.hash);
      else {
        auto it = cells.find(c);
        r.push_back(it == cells.end() ? "" : it->second);
      }
    }
    for (const auto& [k, v] : cells)
      if (std::find(columns_.begin(), columns_.end(), k) == columns_.end())
        throw std::logic_error("unknown column " + k);
    memory_->row(r);
    if (file_) file_->row(r);
    rows_.push_back(std::move(r));
  }

  void print(std::ostream& os) const {
    if (ctx_.cfg.get("format", "csv") == "json") {
      nlohmann::json doc;
      doc["schema"] = CsvSink::kSchemaVersion;
      doc["command"] = ctx_.command;
      doc["config_hash"] = ctx_.hash;
      doc["rows"] = nlohmann::json::array();
      for (const auto& r : rows_) {
        nlohmann::json o;
        for (std::size_t i = 0; i < columns_.size(); ++i)
          if (!r[i].empty()) o[columns_[i]] = r[i];
        doc["rows"].push_back(o);
      }
      os << doc.dump(2) << '\n';
    } else {
      os << memory_->text();
    }
  }

 private:
  const Context& ctx_;
  std::vector<std::string> columns_;
  std::unique_ptr<CsvSink> memory_, file_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fmt(double v) { return fmt_double(v); }
std::string fmt(long v) { return std::to_string(v); }

// Per-point stream seed: a function of the master seed and the point's own
// parameters, so a single point re-run alone reproduces its row.
std::uint64_t point_seed(const Context& ctx, const std::string& tag) { return derive_seed(ctx.seed, 0, tag); }

int checked_int(const ExperimentConfig& cfg, const std::string& key, long long fallback, long long lo, long long hi) {
  const long long v = cfg.get_int(key, fallback);
  if (v < lo || v > hi)
    throw UsageError(key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::vector<double> probabilities(const ExperimentConfig& cfg, const std::vector<double>& fallback) {
  auto ps = cfg.get_doubles("p", fallback);
  if (ps.empty()) throw UsageError("p: empty list");
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p must lie in [0, 1]");
  return ps;
}

// Slope of log t against log(1/p) over the points with < 5% censoring.
void emit_fit(Table& tab, const std::vector<double>& ps, const std::vector<double>& ts,
              const std::vector<double>& censored) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (ps[i] > 0 && ts[i] > 0 && censored[i] < 0.05) {
      x.push_back(1.0 / ps[i]);
      y.push_back(ts[i]);
    }
  if (x.size() < 2) return;
  const PowerFit f = fit_power_law(x, y);
  tab.row("fit", {{"slope", fmt(f.slope)}, {"slope_se", fmt(f.slope_se)}, {"points", fmt(long{f.points})}});
}

// ---------------------------------------------------------------- tsirelson

Noise1D noise_1d(const ExperimentConfig& cfg, double p) {
  const std::string kind = cfg.get("noise", "wire");
  Noise1D noise;
  if (kind == "wire") {
    noise.wire.p = p;
    noise.wire.eta = cfg.get_double("eta", 0.0);
  } else if (kind == "gadget") {
    noise.gadget.p = p;
  } else {
    throw UsageError("noise must be wire or gadget");
  }
  noise.validate();
  return noise;
}

Variant1D variant_1d(const ExperimentConfig& cfg) {
  // Gadget noise defaults to the modified family, whose level-1 gadgets satisfy
  // the Gate/EC conditions; wire noise defaults to the original recursion.
  const std::string fallback = cfg.get("noise", "wire") == "gadget" ? "modified" : "original";
  return parse_variant1d(cfg.get("variant", fallback));
}

std::vector<int> levels(const ExperimentConfig& cfg) {
  std::vector<int> ns;
  if (cfg.has("n")) {
    for (long long n : cfg.get_ints("n", {})) {
      if (n < 1 || n > 8) throw UsageError("n must lie in [1, 8]");
      ns.push_back(static_cast<int>(n));
    }
  } else {
    for (long long L : cfg.get_ints("L", {27})) {
      const int n = log3_exact(L);
      if (n < 1 || n > 8) throw UsageError("L must be 3^n with 1 <= n <= 8");
      ns.push_back(n);
    }
  }
  if (ns.empty()) throw UsageError("no system size given");
  return ns;
}

int cmd_tsirelson_fidelity(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto ns = levels(cfg);
  const int T = checked_int(cfg, "T", 50, 1, 1 << 24);
  const long trials = checked_int(cfg, "trials", 2048, 1, 1 << 30);
  const auto ps = probabilities(cfg, {0.012});
  const Variant1D variant = variant_1d(cfg);
  Table tab(ctx, {"L", "T", "p", "eta", "noise", "variant", "trials", "F", "se", "F0", "F1", "L_pair", "p_cross"});
  std::vector<std::vector<double>> curves(ns.size());
  for (std::size_t a = 0; a < ns.size(); ++a) {
    const long L = pow3(ns[a]);
    for (double p : ps) {
      const Noise1D noise = noise_1d(cfg, p);
      const std::string tag = "fidelity L=" + std::to_string(L) + " T=" + std::to_string(T) + " p=" + fmt(p) +
                              " eta=" + fmt(noise.wire.eta) + " noise=" + cfg.get("noise", "wire") +
                              " variant=" + to_string(variant);
      const auto e = estimate_fidelity(ns[a], T, noise, trials, point_seed(ctx, tag), ctx.workers, variant);
      curves[a].push_back(e.f);
      tab.row("point", {{"L", fmt(L)}, {"T", fmt(long{T})}, {"p", fmt(p)}, {"eta", fmt(noise.wire.eta)},
                        {"noise", cfg.get("noise", "wire")}, {"variant", to_string(variant)},
                        {"trials", fmt(e.trials)}, {"F", fmt(e.f)}, {"se", fmt(e.se)}, {"F0", fmt(e.f0)},
                        {"F1", fmt(e.f1)}});
    }
  }
  if (ps.size() >= 2)
    for (std::size_t a = 0; a + 1 < ns.size(); ++a)
      tab.row("crossing", {{"L_pair", std::to_string(pow3(ns[a])) + "/" + std::to_string(pow3(ns[a + 1]))},
                           {"p_cross", fmt(crossing_point(ps, curves[a], curves[a + 1]))}});
  tab.print(std::cout);
  return 0;
}

int cmd_tsirelson_trel(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto ns = levels(cfg);
  if (ns.size() != 1) throw UsageError("tsirelson-trel takes a single system size");
  const int n = ns[0];
  const long trials = checked_int(cfg, "trials", 512, 1, 1 << 30);
  const long t_max = checked_int(cfg, "t_max", 100000, 1, 1 << 30);
  const auto ps = probabilities(cfg, {0.01, 0.007, 0.005});
  const Variant1D variant = variant_1d(cfg);
  Table tab(ctx, {"L", "p", "eta", "noise", "variant", "trials", "t_max", "t_rel", "se", "censored", "codeword",
                  "slope", "slope_se", "points"});
  std::vector<double> ts, cens;
  for (double p : ps) {
    const Noise1D noise = noise_1d(cfg, p);
    const std::string tag = "trel1d n=" + std::to_string(n) + " p=" + fmt(p) + " eta=" + fmt(noise.wire.eta) +
                            " noise=" + cfg.get("noise", "wire") + " variant=" + to_string(variant) +
                            " t_max=" + std::to_string(t_max);
    const auto e = estimate_trel_1d(n, noise, trials, t_max, point_seed(ctx, tag), ctx.workers, variant);
    ts.push_back(e.mean);
    cens.push_back(e.censored_fraction);
    tab.row("point", {{"L", fmt(long{pow3(n)})}, {"p", fmt(p)}, {"eta", fmt(noise.wire.eta)},
                      {"noise", cfg.get("noise", "wire")}, {"variant", to_string(variant)},
                      {"trials", fmt(e.trials)}, {"t_max", fmt(e.t_max)}, {"t_rel", fmt(e.mean)},
                      {"se", fmt(e.se)}, {"censored", fmt(e.censored_fraction)}, {"codeword", fmt(long{e.codeword})}});
  }
  emit_fit(tab, ps, ts, cens);
  tab.print(std::cout);
  return 0;
}

// -------------------------------------------------------------------- toric

int cmd_toric_trel(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int s = checked_int(cfg, "s", 1, 1, 3);
  const NoiseKind model = parse_noise_kind(cfg.get("model", "qubit"));
  const long trials = checked_int(cfg, "trials", 1024, 1, 1 << 30);
  const long t_max = checked_int(cfg, "t_max", 20000, 1, 1 << 30);
  const bool half = cfg.get_int("half_ec", 1) != 0;
  const auto ps = probabilities(cfg, {6.25e-4, 3.125e-4, 1.5625e-4});
  Table tab(ctx, {"s", "L", "model", "half_ec", "p", "trials", "t_max", "t_rel", "se", "censored", "defects",
                  "slope", "slope_se", "points"});
  std::vector<double> ts, cens;
  for (double p : ps) {
    const std::string tag = "toric s=" + std::to_string(s) + " model=" + to_string(model) + " p=" + fmt(p) +
                            " half=" + std::to_string(half) + " t_max=" + std::to_string(t_max);
    const auto e = estimate_trel(s, NoiseModel::single(model, p), trials, t_max, point_seed(ctx, tag), ctx.workers,
                                 half);
    ts.push_back(e.mean);
    cens.push_back(e.censored_fraction);
    tab.row("point", {{"s", fmt(long{s})}, {"L", fmt(long{pow3(s)})}, {"model", to_string(model)},
                      {"half_ec", half ? "1" : "0"}, {"p", fmt(p)}, {"trials", fmt(e.trials)},
                      {"t_max", fmt(e.t_max)}, {"t_rel", fmt(e.mean)}, {"se", fmt(e.se)},
                      {"censored", fmt(e.censored_fraction)}, {"defects", fmt(e.defects)}});
  }
  emit_fit(tab, ps, ts, cens);
  tab.print(std::cout);
  return 0;
}

nlohmann::json to_json(const Fault& f) {
  nlohmann::json j{{"kind", to_string(f.kind)}, {"t", f.t}};
  if (f.kind == NoiseKind::Gadget) {
    j["gadget"] = f.gadget;
    j["syndromes"] = f.pattern;
  } else {
    j[f.kind == NoiseKind::Qubit ? "link" : "vertex"] = f.index;
  }
  return j;
}

int cmd_minweight(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int s = checked_int(cfg, "s", 1, 1, 2);
  const NoiseKind model = parse_noise_kind(cfg.get("model", "qubit"));
  const std::string mode = cfg.get("mode", "exhaustive");
  if (mode != "exhaustive") throw UsageError("mode: only exhaustive searches are implemented");
  const int max_weight = checked_int(cfg, "max_weight", 2, 1, 3);
  if (s == 2 && model != NoiseKind::Qubit) throw UsageError("s = 2 searches support the qubit model only");
  const auto r = min_weight_search(s, model, max_weight, ctx.workers);
  Table tab(ctx, {"s", "model", "mode", "max_weight", "w_link", "w_c", "w_link_h", "w_link_v", "w_c_main",
                  "w_c_anti", "simulations"});
  tab.row("result", {{"s", fmt(long{s})}, {"model", to_string(model)},
                     {"mode", r.exhaustive ? "exhaustive" : "targeted"}, {"max_weight", fmt(long{r.max_weight})},
                     {"w_link", fmt(long{r.w_link})}, {"w_c", fmt(long{r.w_corner})},
                     {"w_link_h", fmt(long{r.w_link_or[0]})}, {"w_link_v", fmt(long{r.w_link_or[1]})},
                     {"w_c_main", fmt(long{r.w_corner_or[0]})}, {"w_c_anti", fmt(long{r.w_corner_or[1]})},
                     {"simulations", fmt(r.simulations)}});
  const std::string witness = cfg.get("witness", "");
  if (!witness.empty()) {
    std::ofstream os(witness);
    if (!os) throw std::runtime_error("cannot open witness file: " + witness);
    const char* names[4] = {"link_h", "link_v", "corner_main", "corner_anti"};
    nlohmann::json doc{{"s", s}, {"model", to_string(model)}, {"config_hash", ctx.hash}};
    for (int c = 0; c < 4; ++c) {
      const auto& w = c < 2 ? r.link_witness[c] : r.corner_witness[c - 2];
      doc["witnesses"][names[c]] = nlohmann::json::array();
      for (const Fault& f : w) doc["witnesses"][names[c]].push_back(to_json(f));
    }
    os << doc.dump(2) << '\n';
  }
  tab.print(std::cout);
  return 0;
}

// ------------------------------------------------------------ verification

void dump_examples(const ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::vector<std::string>>>& ex) {
  const std::string path = cfg.get("counterexamples", "");
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open counterexample file: " + path);
  for (const auto& [check, lines] : ex)
    for (const auto& l : lines) os << check << ": " << l << '\n';
}

int cmd_verify_nilpotence(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ChainVariant variant = parse_chain_variant(cfg.get("variant", "clean"));
  const int j_max = checked_int(cfg, "j_max", 4, 1, 8);
  const bool link_model = cfg.get_int("link_model", 0) != 0;
  const auto rep = nilpotence_report(variant, j_max, ctx.workers, link_model);
  Table tab(ctx, {"variant", "link_model", "j", "I", "Th", "Tv", "Mh", "Mv", "evaluations", "defects", "empty_at",
                  "pass"});
  for (const auto& it : rep.iterations)
    tab.row("iteration", {{"variant", to_string(variant)}, {"link_model", link_model ? "1" : "0"},
                          {"j", fmt(long{it.j})}, {"I", fmt(long(it.sizes[0]))}, {"Th", fmt(long(it.sizes[1]))},
                          {"Tv", fmt(long(it.sizes[2]))}, {"Mh", fmt(long(it.sizes[3]))},
                          {"Mv", fmt(long(it.sizes[4]))}, {"evaluations", fmt(it.evaluations)},
                          {"defects", fmt(it.defects)}});
  const bool pass = rep.empty_at >= 0 && rep.defects == 0;
  tab.row("summary", {{"variant", to_string(variant)}, {"link_model", link_model ? "1" : "0"},
                      {"defects", fmt(rep.defects)}, {"empty_at", fmt(long{rep.empty_at})},
                      {"pass", pass ? "1" : "0"}});
  std::vector<std::string> ex;
  if (!rep.sets.empty()) {
    const auto& last = rep.sets.back();
    for (int k = 0; k < 5; ++k)
      for (const auto& p : last.sets[k])
        ex.push_back(to_string(static_cast<GadgetKind>(k)) + " j=" + std::to_string(last.j) + " " + to_string(p));
  }
  dump_examples(cfg, {{"nilpotence", ex}});
  tab.print(std::cout);
  return pass ? 0 : 1;
}

int cmd_verify_gadgets(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const long random_inputs = checked_int(cfg, "random_inputs", 100000, 0, 1 << 30);
  Table tab(ctx, {"check", "cases", "failures", "pass"});
  std::vector<std::pair<std::string, std::vector<std::string>>> ex;
  bool all = true;
  auto add = [&](const std::string& name, long cases, long failures, const std::vector<std::string>& examples) {
    const bool ok = failures == 0;
    all = all && ok;
    tab.row("check", {{"check", name}, {"cases", fmt(cases)}, {"failures", fmt(failures)}, {"pass", ok ? "1" : "0"}});
    ex.emplace_back(name, examples);
  };
  for (bool half : {false, true}) {
    const auto r = r0_single_fault_check(half);
    add(half ? "r0_half_single_fault" : "r0_single_fault", r.cases, r.failures, r.examples);
  }
  const auto d = diff_m1_tables(m1_reversibility_table(), m1_reference_table());
  add("m1_table", d.cells, d.mismatches + d.irreversible, d.details);
  const auto st = structural_checks(random_inputs, ctx.seed, ctx.workers);
  add("coarse_graining", st.coarse_cases, st.coarse_failures, st.examples);
  add("linearity", st.linearity_cases, st.linearity_failures, {});
  add("confinement", st.confinement_cases, st.confinement_failures, {});
  dump_examples(cfg, ex);
  tab.print(std::cout);
  return all ? 0 : 1;
}

SimParams sim_params(const ExperimentConfig& cfg) {
  SimParams sp;
  sp.k = checked_int(cfg, "k", 1, 1, 3);
  sp.n = checked_int(cfg, "n", 1, 1, 3);
  sp.T = checked_int(cfg, "T", 1, 1, 1 << 20);
  sp.half_ec = cfg.get_int("half_ec", 0) != 0;
  if (sp.n * sp.k > 4) throw UsageError("n * k must be at most 4");
  return sp;
}

int cmd_stack3d_equivalence(const Context& ctx) {
  const SimParams sp = sim_params(ctx.cfg);
  Table tab(ctx, {"check", "L", "k", "n", "starts", "frames", "mismatches", "pass"});
  const auto eq = stack3d_equivalence(sp, ctx.seed);
  const auto sw = swap_failure_check(sp, ctx.seed);
  for (const auto& [name, r] : {std::pair{"noiseless_equivalence", &eq}, std::pair{"swap_failure", &sw}})
    tab.row("check", {{"check", name}, {"L", fmt(long{sp.L()})}, {"k", fmt(long{sp.k})}, {"n", fmt(long{sp.n})},
                      {"starts", fmt(r->starts)}, {"frames", fmt(r->frames)}, {"mismatches", fmt(r->mismatches)},
                      {"pass", r->ok() ? "1" : "0"}});
  dump_examples(ctx.cfg, {{"noiseless_equivalence", eq.examples}, {"swap_failure", sw.examples}});
  tab.print(std::cout);
  return eq.ok() && sw.ok() ? 0 : 1;
}

int cmd_dump_schedule(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::string what = cfg.get("schedule", "outer");
  SchedulePtr s;
  if (what == "outer") {
    s = outer_ft(sim_params(cfg));
  } else if (what == "period") {
    s = outer_period(sim_params(cfg));
  } else if (what == "ec") {
    s = ec_schedule(checked_int(cfg, "s", 1, 1, 3), cfg.get_int("half_ec", 1) != 0);
  } else if (what == "gadget") {
    const GadgetKind kind = parse_gadget_kind(cfg.get("gadget", "I0"));
    const int level = checked_int(cfg, "level", 1, 1, 3);
    const GadgetTemplate t = inner_gate(kind, level, cfg.get_int("half_ec", 0) != 0);
    const int L = std::lcm(t.footprint.width(), t.footprint.height());
    s = tiled_schedule(t, L);
  } else {
    throw UsageError("schedule must be outer, period, ec or gadget");
  }
  const long t_begin = cfg.get_int("t_begin", 0);
  const long t_end = cfg.get_int("t_end", -1);
  const std::string out = cfg.get("out", "");
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw std::runtime_error("cannot open output file: " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "# schedule " << what << " L " << s->L() << " depth " << depth(*s) << " config_hash " << ctx.hash << '\n';
  dump_schedule(*s, os, t_begin, t_end);
  return 0;
}

struct Command {
  const char* name;
  const char* help;
  int (*run)(const Context&);
  std::vector<std::pair<const char*, const char*>> keys;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Command> commands = {
      {"tsirelson-fidelity", "F(T) of the 1D memory automaton at each (L, p)", cmd_tsirelson_fidelity,
       {{"L", "system sizes 3^n, comma separated"}, {"n", "levels instead of L"}, {"T", "applications"},
        {"p", "noise strengths"}, {"eta", "bias of replaced bits"}, {"noise", "wire | gadget"},
        {"variant", "original | modified | stabilizer"}, {"trials", "trials per codeword"}}},
      {"tsirelson-trel", "relaxation time of the 1D memory automaton", cmd_tsirelson_trel,
       {{"L", "system size 3^n"}, {"n", "level instead of L"}, {"p", "noise strengths"}, {"eta", "bias"},
        {"noise", "wire | gadget"}, {"variant", "original | modified | stabilizer"}, {"trials", "trials"},
        {"t_max", "censoring time"}}},
      {"toric-trel", "relaxation time of the toric-code automaton", cmd_toric_trel,
       {{"s", "level (L = 3^s)"}, {"model", "qubit | measurement | gadget | skip"}, {"p", "noise strengths"},
        {"trials", "trials"}, {"t_max", "censoring time"}, {"half_ec", "use the half error correction (0/1)"}}},
      {"minweight", "minimal fault weights producing level-s damage", cmd_minweight,
       {{"s", "level"}, {"model", "qubit | measurement | gadget"}, {"mode", "exhaustive"},
        {"max_weight", "largest weight searched"}, {"witness", "file receiving the witness faults"}}},
      {"verify-nilpotence", "damage-set iteration of the level-1 gadgets", cmd_verify_nilpotence,
       {{"variant", "clean | arbitrary"}, {"j_max", "iterations"}, {"link_model", "start from single links (0/1)"},
        {"counterexamples", "file receiving the surviving patterns"}}},
      {"verify-gadgets", "R0 fault check, M1 table, structural checks", cmd_verify_gadgets,
       {{"random_inputs", "random inputs of the coarse-graining check"},
        {"counterexamples", "file receiving counterexamples"}}},
      {"stack3d-equivalence", "moving-frame equivalence of the 3D stack", cmd_stack3d_equivalence,
       {{"k", "inner level"}, {"n", "outer iterations"}, {"T", "idle steps"}, {"half_ec", "0/1"},
        {"counterexamples", "file receiving counterexamples"}}},
      {"dump-schedule", "print a schedule layer by layer", cmd_dump_schedule,
       {{"schedule", "outer | period | ec | gadget"}, {"k", "inner level"}, {"n", "outer iterations"},
        {"T", "idle steps"}, {"s", "level of the ec schedule"}, {"gadget", "elementary kind (gadget schedule)"},
        {"level", "gadget level"}, {"half_ec", "0/1"}, {"t_begin", "first layer"}, {"t_end", "end layer"}}},
  };

  CLI::App app{"hfca: hierarchical fault-tolerant cellular automata experiments"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> config_path;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    auto add = [&](const std::string& key, const std::string& help) {
      options[c.name][key] = sub->add_option("--" + key, values[c.name][key], help);
    };
    sub->add_option("--config", config_path[c.name], "key = value config file");
    for (const auto& [k, h] : c.keys) add(k, h);
    add("seed", "master seed");
    add("workers", "worker threads (default $HFCA_WORKERS or all cores)");
    add("format", "stdout format: csv | json");
    if (std::string(c.name) != "dump-schedule") add("out", "append rows to this CSV file");
    else add("out", "write the schedule to this file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (!dynamic_cast<const CLI::RequiredError*>(&e)) std::cerr << '\n';
    std::cerr << app.help();
    return 2;
  }

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    try {
      Context ctx;
      ctx.command = c.name;
      if (!config_path[c.name].empty()) ctx.cfg = ExperimentConfig::load(config_path[c.name]);
      for (const auto& [k, opt] : options[c.name])
        if (opt->count() > 0) ctx.cfg.set(k, values[c.name][k]);
      std::set<std::string> known{"seed", "workers", "format", "out"};
      for (const auto& [k, h] : c.keys) known.insert(k);
      for (const auto& [k, v] : ctx.cfg.values())
        if (!known.count(k)) throw UsageError("unknown key '" + k + "' for " + c.name);
      const std::string format = ctx.cfg.get("format", "csv");
      if (format != "csv" && format != "json") throw UsageError("format must be csv or json");
      ctx.seed = ctx.cfg.get_u64("seed", 1);
      ctx.workers = static_cast<int>(ctx.cfg.get_int("workers", default_workers()));
      if (ctx.workers < 1) throw UsageError("workers must be positive");
      ExperimentConfig stripped;
      for (const auto& [k, v] : ctx.cfg.values())
        if (std::find(std::begin(kPlumbingKeys), std::end(kPlumbingKeys), k) == std::end(kPlumbingKeys))
          stripped.set(k, v);
      stripped.set("command", c.name);
      ctx.hash = hex64(stripped.hash());
      return c.run(ctx);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
