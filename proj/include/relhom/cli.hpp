#pragma once

// The `relhom` command line: job parsing, dispatch and report rendering.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relhom/relhom.hpp"

namespace relhom::cli {

enum Exit : int { ok = 0, verification_failed = 1, input_error = 2 };

/// Flat JSON object as a config file: {"m": 4, "M": "Z2", "range": 3}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    io::Json j = io::Json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
      std::string name = opt->get_lnames().front();
      if (opt->count() > 0)
        j[name] = opt->as<std::string>();
      else if (default_also && !opt->get_default_str().empty())
        j[name] = opt->get_default_str();
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    io::Json j;
    try {
      j = io::Json::parse(in);
    } catch (const io::Json::parse_error& e) {
      throw CLI::ConversionError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_string())
        item.inputs = {value.get<std::string>()};
      else
        item.inputs = {value.dump()};
      items.push_back(std::move(item));
    }
    return items;
  }
};

/// Everything a run needs; flags override the config file, which overrides defaults.
struct JobSpec {
  std::string command;
  std::optional<std::string> modulus;
  std::string M, N, N1, N2, X = "", W = "PROJ", T, f, g;
  std::string route = "complete", variance = "covariant", demo;
  std::optional<int> range, depth, lo;
  std::optional<std::uint64_t> seed;
  int budget = 10;
  std::string format = "text";
};

class Runner {
 public:
  Runner(const JobSpec& job, std::ostream& out) : job_(job), out_(out) {}

  int dispatch() {
    const std::string& c = job_.command;
    if (c == "ext") return ext();
    if (c == "tate") return tate();
    if (c == "resolve") return resolve();
    if (c == "lift") return lift();
    if (c == "am") return am();
    if (c == "les") return les();
    if (c == "demo") return demo();
    if (c == "prop") return prop();
    throw InputError("unknown command '" + c + "'");
  }

 private:
  const JobSpec& job_;
  std::ostream& out_;

  std::optional<Integer> modulus() const {
    if (!job_.modulus) return std::nullopt;
    return io::parse_integer(*job_.modulus, "--m");
  }

  ZmModule module(const std::string& lit, const char* flag) const {
    if (lit.empty()) throw InputError(std::string(flag) + " is required");
    return io::parse_module(lit, modulus());
  }

  SubcatDescriptor subcat(const std::string& spec, const Integer& m, const char* fallback) const {
    return io::parse_subcat(spec.empty() ? fallback : spec, m);
  }

  int range_or(int fallback) const { return job_.range.value_or(fallback); }

  /// The window margin rule, checked before any work.
  int depth_for(int range) const {
    int depth = job_.depth.value_or(range + 2);
    if (depth < range + 2)
      throw InputError("--depth " + std::to_string(depth) + " is below range + 2 = " +
                       std::to_string(range + 2));
    return depth;
  }

  void emit_table(const ExtTable& t) {
    if (job_.format == "json")
      out_ << io::ext_table_json(t).dump() << "\n";
    else if (job_.format == "csv")
      out_ << io::ext_table_csv(t);
    else
      out_ << io::ext_table_text(t);
  }

  int emit_sequence(const ExactSequence& s, const std::string& summary, bool certified,
                    io::Json extra = io::Json::object()) {
    if (job_.format == "json") {
      io::Json j = io::sequence_json(s);
      for (auto& [k, v] : extra.items()) j[k] = v;
      j["certified"] = certified;
      out_ << j.dump() << "\n";
    } else {
      out_ << io::sequence_text(s);
      out_ << summary << "\n";
    }
    return certified ? Exit::ok : Exit::verification_failed;
  }

  int ext() {
    ZmModule a = module(job_.M, "--M");
    ZmModule b = io::parse_module(job_.N.empty() ? "" : job_.N, a.modulus());
    if (job_.N.empty()) throw InputError("--N is required");
    auto x = subcat(job_.X, a.modulus(), "PROJ");
    int range = range_or(4);
    int depth = depth_for(range);
    emit_table(ext_table(a, b, x, range, Precovering::stop_in_add, depth));
    return Exit::ok;
  }

  int tate() {
    ZmModule a = module(job_.M, "--M");
    if (job_.N.empty()) throw InputError("--N is required");
    ZmModule b = io::parse_module(job_.N, a.modulus());
    int range = range_or(4);
    int lo = job_.lo.value_or(1);
    if (lo > range) throw InputError("--lo must not exceed --range");
    ExtTable t;
    t.flavor = ExtFlavor::tate;
    if (job_.route == "complete") {
      if (!same_subcategory(subcat(job_.W, a.modulus(), "PROJ"), SubcatDescriptor::PROJ(a.modulus())))
        throw UnsupportedSubcategory("the complete route needs --W PROJ");
      int window = depth_for(std::max(std::abs(lo), std::abs(range)));
      t.depth_used = window;
      for (int n = lo; n <= range; ++n) t.entries.emplace(n, tate_ext_complete(a, b, n, window));
    } else if (job_.route == "cone") {
      if (lo < 1) throw InputError("the cone route needs --lo >= 1");
      int depth = job_.depth.value_or(range + 3);
      if (depth < range + 3) throw InputError("the cone route needs --depth >= range + 3");
      auto x = subcat(job_.X, a.modulus(), "GP");
      auto w = subcat(job_.W, a.modulus(), "PROJ");
      t.depth_used = depth;
      for (int n = lo; n <= range; ++n)
        t.entries.emplace(n, tate_ext_cone(a, b, n, x, w, depth));
    } else {
      throw InputError("--route must be complete or cone");
    }
    emit_table(t);
    return Exit::ok;
  }

  Complex complex_arg() const {
    if (job_.T.empty()) throw InputError("--T is required (complex JSON or a path to one)");
    std::string text = job_.T;
    if (io::trim(text).rfind('{', 0) != 0) {
      std::ifstream in(text);
      if (!in) throw InputError("cannot read complex file '" + text + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    Complex t = io::complex_from_json(io::parse_json(text, "--T"));
    if (auto m = modulus(); m && *m != t.modulus())
      throw InputError("modulus mismatch: complex is over Z/" + t.modulus().get_str());
    return t;
  }

  int resolve() {
    Complex t = complex_arg();
    auto x = subcat(job_.X, t.modulus(), "GP");
    int depth = depth_for(range_or(0));
    auto r = resolve_complex(t, x, depth);
    if (job_.format == "json") {
      io::Json j;
      j["D"] = io::complex_json(r.D);
      j["K"] = io::complex_json(r.K);
      j["alpha"] = io::chain_map_json(r.alpha)["components"];
      j["window_bottom"] = r.window_bottom;
      j["components_in_add"] = r.components_in_add;
      j["kernel_x_acyclic"] = r.kernel_x_acyclic;
      j["hom_exact"] = r.hom_exact;
      j["density"] = r.density;
      out_ << j.dump() << "\n";
    } else {
      out_ << "D: " << r.D.to_string() << "\n";
      out_ << "K: " << r.K.to_string() << "\n";
      out_ << "components in add(" << x.name << "): " << (r.components_in_add ? "yes" : "NO") << "\n";
      out_ << "K " << x.name << "-acyclic above " << r.window_bottom << ": "
           << (r.kernel_x_acyclic ? "yes" : "NO") << "\n";
      out_ << "degreewise Hom(G,-)-exact: " << (r.hom_exact ? "yes" : "NO") << "\n";
    }
    return r.ok() ? Exit::ok : Exit::verification_failed;
  }

  int lift() {
    ZmModule a = module(job_.M, "--M");
    if (job_.N.empty()) throw InputError("--N is required");
    ZmModule b = io::parse_module(job_.N, a.modulus());
    if (job_.f.empty()) throw InputError("--f is required (row-major matrix)");
    ModuleMorphism f = io::morphism_from_json(io::parse_json(job_.f, "--f"), a, b, "--f");
    auto x = subcat(job_.X, a.modulus(), "PROJ");
    int depth = depth_for(range_or(2));
    auto p = proper_resolution(a, x, depth), q = proper_resolution(b, x, depth);
    ChainMap beta = comparison_lift(f, p, q, x);
    ChainMap other = comparison_lift_global(f, p, q);
    bool homotopic_lifts = homotopic(beta, other);
    if (job_.format == "json") {
      io::Json j;
      j["source"] = io::complex_json(p.complex);
      j["target"] = io::complex_json(q.complex);
      j["components"] = io::chain_map_json(beta)["components"];
      j["lifts_homotopic"] = homotopic_lifts;
      out_ << j.dump() << "\n";
    } else {
      out_ << "resolution of " << a.to_string() << ": " << p.complex.to_string() << "\n";
      out_ << "resolution of " << b.to_string() << ": " << q.complex.to_string() << "\n";
      for (const auto& [k, c] : beta.components())
        out_ << "beta^" << k << " = " << io::matrix_json(c.entries()).dump() << "\n";
      out_ << "independent lift homotopic: " << (homotopic_lifts ? "yes" : "NO") << "\n";
    }
    return homotopic_lifts ? Exit::ok : Exit::verification_failed;
  }

  int am() {
    ZmModule a = module(job_.M, "--M");
    if (job_.N.empty()) throw InputError("--N is required");
    ZmModule b = io::parse_module(job_.N, a.modulus());
    auto x = subcat(job_.X, a.modulus(), "GP");
    auto w = subcat(job_.W, a.modulus(), "PROJ");
    int depth = job_.depth.value_or(6);
    if (job_.range) depth_for(*job_.range);
    auto s = am_sequence(a, b, x, w, depth);
    std::string summary;
    if (s.certified()) {
      summary = "exact at all nodes, d = " + std::to_string(s.d);
    } else {
      summary = "NOT certified, d = " + std::to_string(s.d);
      if (!s.sequence.exact()) summary += "; exactness fails";
      if (!s.cone_h1_vanishes) summary += "; H^1(Hom(cone(f),N)) != 0";
      if (!s.ext_vanishes_above_d) summary += "; Ext^{d+1}_X != 0";
      if (s.tate_agrees && !*s.tate_agrees) summary += "; Tate routes disagree";
    }
    io::Json extra{{"d", s.d},
                   {"range", s.range},
                   {"cone_h1_vanishes", s.cone_h1_vanishes},
                   {"ext_vanishes_above_d", s.ext_vanishes_above_d}};
    if (s.tate_agrees) extra["tate_agrees"] = *s.tate_agrees;
    return emit_sequence(s.sequence, summary, s.certified(), extra);
  }

  int les() {
    Integer m;
    if (auto given = modulus()) {
      m = *given;
    } else {
      m = module(job_.M, "--M").modulus();
    }
    ZmModule a = io::parse_module(job_.N, m), b = io::parse_module(job_.N1, m),
             c = io::parse_module(job_.N2, m);
    ZmModule fixed = module(job_.M, "--M");
    if (job_.f.empty() || job_.g.empty()) throw InputError("--f and --g are required");
    ShortExactSequence s{io::morphism_from_json(io::parse_json(job_.f, "--f"), a, b, "--f"),
                         io::morphism_from_json(io::parse_json(job_.g, "--g"), b, c, "--g")};
    auto x = subcat(job_.X, m, "PROJ");
    int range = range_or(3);
    depth_for(range);
    ExactSequence seq;
    if (job_.variance == "covariant")
      seq = les_covariant(fixed, s, x, range);
    else if (job_.variance == "contravariant")
      seq = les_contravariant(s, fixed, x, range);
    else
      throw InputError("--variance must be covariant or contravariant");
    return emit_sequence(seq, seq.exact() ? "exact at all nodes" : "NOT exact", seq.exact());
  }

  int demo() {
    if (job_.demo != "example-3-10")
      throw InputError("unknown demo '" + job_.demo + "' (available: example-3-10)");
    ZmModule z4 = ZmModule::cyclic(4, 4);
    ModuleMorphism times2(z4, z4, IntMatrix{{2}});
    AbGroup k = kernel(times2).module.group();
    XPd pd = x_pd(ZmModule::cyclic(4, 2), SubcatDescriptor::PROJ(4), 8);
    if (job_.format == "json") {
      out_ << io::Json{{"kernel", io::group_json(k)}, {"x_pd", pd.to_string()}}.dump() << "\n";
    } else {
      out_ << "kernel of ×2 on Z4 is " << k.to_string() << "\n";
      out_ << "x_pd(Z2, PROJ, 8) = " << pd.to_string() << "\n";
    }
    bool expected = k == AbGroup::from_invariant_factors({2}) && !pd.finite() && pd.lower_bound == 8;
    return expected ? Exit::ok : Exit::verification_failed;
  }

  int prop() {
    PropConfig cfg;
    cfg.seed = job_.seed.value_or(1);
    cfg.budget = job_.budget;
    PropReport r = prop_suite(cfg);
    if (job_.format == "json") {
      io::Json arr = io::Json::array();
      for (const auto& p : r.results) {
        io::Json e{{"name", p.name}, {"passed", p.passed}, {"total", p.total}};
        if (p.failing_seed) {
          e["replay_seed"] = *p.failing_seed;
          e["counterexample"] = p.counterexample;
        }
        arr.push_back(e);
      }
      out_ << io::Json{{"seed", cfg.seed}, {"budget", cfg.budget}, {"results", arr}}.dump() << "\n";
    } else {
      out_ << "seed " << cfg.seed << ", budget " << cfg.budget << "\n" << r.to_text();
    }
    return r.ok() ? Exit::ok : Exit::verification_failed;
  }
};

inline bool is_input_error(const Error& e) {
  return dynamic_cast<const InputError*>(&e) || dynamic_cast<const ModulusMismatch*>(&e) ||
         dynamic_cast<const WindowTooSmall*>(&e) || dynamic_cast<const PdExceedsBudget*>(&e) ||
         dynamic_cast<const NotXAcyclicInput*>(&e) || dynamic_cast<const NotXQuasiIso*>(&e) ||
         dynamic_cast<const UnsupportedSubcategory*>(&e) ||
         dynamic_cast<const DimensionMismatch*>(&e);
}

/// Parses args (without the program name), runs the job and returns the exit status.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               const char* env_seed = std::getenv("RELHOM_SEED")) {
  CLI::App app{"Relative homological algebra over Z/m", "relhom"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  JobSpec job;
  app.add_option("--m", job.modulus, "Modulus m of the ground ring Z/m");
  app.add_option("--M", job.M, "Module literal, e.g. Z4+Z2");
  app.add_option("--N", job.N, "Second module literal (left term of --N --N1 --N2 for les)");
  app.add_option("--N1", job.N1, "Middle term of the short exact sequence (les)");
  app.add_option("--N2", job.N2, "Right term of the short exact sequence (les)");
  app.add_option("--f", job.f, "Morphism as a row-major JSON matrix");
  app.add_option("--g", job.g, "Second morphism of the short exact sequence (les)");
  app.add_option("--X", job.X, "Subcategory: PROJ, GP, generator literals or JSON");
  app.add_option("--W", job.W, "Smaller subcategory for Tate cohomology (default PROJ)");
  app.add_option("--T", job.T, "Complex as JSON or a path to a JSON file");
  app.add_option("--range", job.range, "Highest degree requested");
  app.add_option("--lo", job.lo, "Lowest degree for tate (default 1)");
  app.add_option("--depth", job.depth, "Resolution depth; at least range + 2");
  app.add_option("--route", job.route, "Tate route: complete or cone")
      ->check(CLI::IsMember({"complete", "cone"}));
  app.add_option("--variance", job.variance, "les: covariant or contravariant")
      ->check(CLI::IsMember({"covariant", "contravariant"}));
  app.add_option("--seed", job.seed, "Seed (falls back to RELHOM_SEED)");
  app.add_option("--budget", job.budget, "Instances per property for prop");
  app.add_option("--format", job.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  const std::pair<const char*, const char*> commands[] = {
      {"ext", "Ext^n_X(M, N) for n = 0..range"},
      {"tate", "Tate cohomology by the complete-resolution or cone route"},
      {"resolve", "Resolve a bounded complex by an X-resolution"},
      {"lift", "Lift a module map to X-resolutions"},
      {"am", "Avramov-Martsinkovsky sequence for W inside X"},
      {"les", "Long exact Ext sequence of a short exact sequence"},
      {"prop", "Seeded property suite"}};
  for (const auto& [name, about] : commands) app.add_subcommand(name, about)->fallthrough();
  auto* demo = app.add_subcommand("demo", "Reproduce a worked example");
  demo->add_option("name", job.demo, "Example name, e.g. example-3-10")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "relhom: " << e.what() << "\n";
    return Exit::input_error;
  }
  job.command = app.get_subcommands().front()->get_name();
  if (!job.seed && env_seed) {
    try {
      job.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      err << "relhom: RELHOM_SEED is not an unsigned integer\n";
      return Exit::input_error;
    }
  }
  try {
    return Runner(job, out).dispatch();
  } catch (const Error& e) {
    err << "relhom: " << e.what() << "\n";
    return is_input_error(e) ? Exit::input_error : Exit::verification_failed;
  }
}

}  // namespace relhom::cli
