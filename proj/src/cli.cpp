#include "latdesign/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "latdesign/errors.hpp"
#include "latdesign/layers.hpp"
#include "latdesign/theta.hpp"

namespace latdesign {

using nlohmann::json;

namespace {

json rational_json(const Rational& r) { return to_string(r); }

json optional_rational(const std::optional<Rational>& r) { return r ? json(to_string(*r)) : json(nullptr); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Common {
  std::string gram_file;
  std::string name;
  std::string format = "text";
};

LatticeDescriptor resolve_input(const Common& c) {
  if (!c.gram_file.empty() && !c.name.empty()) throw CLI::ValidationError("--gram and --name are exclusive");
  if (!c.name.empty()) {
    const LatticeDescriptor* e = load_catalog().find(c.name);
    if (!e) throw CLI::ValidationError("unknown catalog entry '" + c.name + "'");
    return *e;
  }
  if (c.gram_file.empty()) throw CLI::ValidationError("an input lattice is required (--gram FILE or --name NAME)");
  return read_lattice_file(c.gram_file);
}

void add_input_options(CLI::App* sub, Common& c) {
  sub->add_option("--gram", c.gram_file, "Gram matrix file (JSON or whitespace text)");
  sub->add_option("file", c.gram_file, "Gram matrix file");
  sub->add_option("--name", c.name, "catalog entry name");
}

LatticeDescriptor random_form(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-2, 2);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (auto& row : a)
    for (auto& x : row) x = entry(rng);
  std::vector<std::vector<Rational>> q(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational s = i == j ? 1 : 0;
      for (std::size_t k = 0; k < n; ++k) s += a[k][i] * a[k][j];
      q[i][j] = s;
    }
  return LatticeDescriptor{std::nullopt, GramMatrix::from_rows(q), std::nullopt, std::nullopt, std::nullopt, false, std::nullopt};
}

}  // namespace

json to_json(const DesignVerdict& v) {
  return {{"norm", rational_json(v.norm)},
          {"t", v.t},
          {"lhs", rational_json(v.lhs)},
          {"rhs", rational_json(v.rhs)},
          {"half_lhs", rational_json(v.half_lhs())},
          {"half_rhs", rational_json(v.half_rhs())},
          {"is_design", v.is_design}};
}

json to_json(const FullyCriticalReport& r) {
  json layers = json::array();
  for (const auto& v : r.per_layer) layers.push_back(to_json(v));
  return {{"verdict", to_string(r.verdict)},
          {"doubled", r.doubled},
          {"augmented_with_A1", r.augmented_with_A1},
          {"level", r.level},
          {"weight", r.weight},
          {"bound_B", r.bound_B},
          {"sturm_B", r.sturm_B},
          {"bound_from_override", r.bound_from_override},
          {"target_norm", rational_json(r.target_norm)},
          {"certified_norm", rational_json(r.certified_norm)},
          {"failure_norm", optional_rational(r.failure_norm)},
          {"failure_working_norm", optional_rational(r.failure_working_norm)},
          {"vectors_enumerated", r.vectors_enumerated},
          {"message", r.message},
          {"layers", std::move(layers)}};
}

json to_json(const HeightReport& r) {
  return {{"height", r.height},
          {"F_value", r.F_value},
          {"constant_C", r.constant_C},
          {"projected_residual", r.projected_residual},
          {"gradient", matrix_json(r.gradient)},
          {"truncation_radius", r.truncation_radius},
          {"tail_estimate", r.tail_estimate}};
}

json to_json(const TableRow& r) {
  return {{"name", r.name},
          {"dim", r.dim},
          {"traditional_name", r.traditional_name ? json(*r.traditional_name) : json(nullptr)},
          {"verdict", r.verdict ? json(to_string(*r.verdict)) : json(nullptr)},
          {"expected", to_string(r.expected)},
          {"matches", r.matches()},
          {"bound_used", r.bound_used},
          {"sturm_B", r.sturm_B},
          {"reference_N", r.reference_N ? json(*r.reference_N) : json(nullptr)},
          {"level", r.level},
          {"incomplete_table", r.incomplete_table},
          {"vectors_enumerated", r.vectors_enumerated},
          {"seconds", r.seconds},
          {"error", r.error ? json(*r.error) : json(nullptr)}};
}

json RunReport::to_json() const {
  json j;
  j["command"] = command;
  j["input"] = input ? json::parse(gram_to_json(*input)) : json(nullptr);
  j["outcome"] = outcome;
  j["wall_seconds"] = wall_seconds;
  j["truncation"] = truncation;
  j["version"] = version;
  j["exit_code"] = exit_code;
  return j;
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  try {
    r.command = j.at("command").get<std::string>();
    if (!j.at("input").is_null()) r.input = parse_lattice(j.at("input").dump());
    r.outcome = j.at("outcome");
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.truncation = j.at("truncation");
    r.version = j.at("version").get<std::string>();
    r.exit_code = j.at("exit_code").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed run report: ") + e.what());
  }
  return r;
}

std::string transcript_line(const DesignVerdict& v) {
  std::ostringstream os;
  os << to_string(v.half_lhs()) << (v.is_design ? " = " : " != ") << to_string(v.half_rhs()) << ", "
     << (v.is_design ? std::to_string(v.t) + "-DESIGN" : "FAILURE") << " on the layer (x,x)=" << to_string(v.norm);
  return os.str();
}

std::string transcript(const FullyCriticalReport& r) {
  std::ostringstream os;
  std::size_t next = 0;
  // The input is integral, so every norm is an integer.
  for (Integer m = 1; Rational(m) <= r.certified_norm; ++m) {
    if (next < r.per_layer.size() && r.per_layer[next].norm == Rational(m)) {
      os << transcript_line(r.per_layer[next++]) << '\n';
    } else {
      os << "the layer (x,x)=" << m.get_str() << " is empty\n";
    }
  }
  for (; next < r.per_layer.size(); ++next) os << transcript_line(r.per_layer[next]) << '\n';
  return os.str();
}

RunReport run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;

  CLI::App app{"Layer design tests, fully-critical certification and heights of lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Common common;

  std::string bound_text;
  bool fast_paper_bound = false;
  int t = 2;
  double radius = 0;
  std::string dump_path;
  unsigned threads = 1;
  std::string layer_norm;
  std::vector<std::size_t> dims;
  int random_count = 0;
  std::uint64_t seed = 1;
  std::size_t max_vectors = 0;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "text"}));
    s->add_option("--max-vectors", max_vectors, "enumeration budget (0 = command default)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "basic invariants and the first layers");
  add_input_options(analyze, common);
  add_format(analyze);

  CLI::App* layers = app.add_subcommand("layers", "layer cardinalities up to a norm bound");
  add_input_options(layers, common);
  add_format(layers);
  layers->add_option("--bound", bound_text, "norm bound (rational)")->required();
  layers->add_option("--dump-layers", dump_path, "write every layer's vectors to this file");

  CLI::App* design = app.add_subcommand("design", "t-design test on one layer or all layers up to a bound");
  add_input_options(design, common);
  add_format(design);
  design->add_option("--layer-norm", layer_norm, "norm of the layer to test");
  design->add_option("--bound", bound_text, "test every layer up to this norm");
  design->add_option("--t", t, "even design strength")->check(CLI::Range(2, 64));

  CLI::App* fc = app.add_subcommand("fully-critical", "certify that every layer is a 2-design");
  add_input_options(fc, common);
  add_format(fc);
  fc->add_option("--bound", bound_text, "pivot exponent B overriding the Sturm bound");
  fc->add_flag("--fast-paper-bound", fast_paper_bound, "use the catalog's reference N as B");
  fc->add_option("--dump-layers", dump_path, "write the tested layers to this file");

  CLI::App* ht = app.add_subcommand("height", "height of the lattice scaled to covolume 1");
  add_input_options(ht, common);
  add_format(ht);
  ht->add_option("--radius", radius, "lattice-sum radius (disables automatic expansion)");

  CLI::App* st = app.add_subcommand("stationarity", "tangential gradient of the height");
  add_input_options(st, common);
  add_format(st);
  st->add_option("--radius", radius, "lattice-sum radius (disables automatic expansion)");

  CLI::App* tables = app.add_subcommand("tables", "rerun the classification tables");
  add_format(tables);
  tables->add_option("--dim", dims, "dimensions to run (default 2..6)")->check(CLI::Range(2, 7));
  tables->add_flag("--fast-paper-bound", fast_paper_bound, "use the reference N instead of the Sturm bound");

  CLI::App* probe = app.add_subcommand("probe-conjecture", "search for a lattice whose first two layers are "
                                                           "2-designs but a later one is not");
  add_input_options(probe, common);
  add_format(probe);
  probe->add_option("--random", random_count, "number of random integral forms per dimension 2..4");
  probe->add_option("--seed", seed, "random seed");
  probe->add_option("--bound", bound_text, "pivot exponent B overriding the Sturm bound");
  probe->add_flag("--fast-paper-bound", fast_paper_bound, "use the catalog's reference N as B");

  for (CLI::App* s : app.get_subcommands({})) s->add_option("--threads", threads, "worker threads (0 = auto)");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    report.exit_code = code == 0 ? kExitOk : kExitInconclusive;
    return report;
  }

  CLI::App* sub = app.get_subcommands().front();
  report.command = sub->get_name();
  const bool as_json = common.format == "json";
  std::ostringstream text;
  const bool streaming = sub == fc || sub == tables || sub == probe;
  EnumerationLimits limits{max_vectors ? max_vectors
                                       : streaming ? kStreamingBudget : EnumerationLimits{}.max_vectors};

  try {
    if (sub == tables) {
      TableOptions opt;
      opt.fast_paper_bound = fast_paper_bound;
      opt.threads = threads;
      opt.limits = limits;
      std::set<std::size_t> ds(dims.begin(), dims.end());
      if (ds.empty()) ds = {2, 3, 4, 5, 6};
      const TableSummary s = reproduce_tables(ds, opt);
      json rows = json::array();
      bool failure = false;
      bool unknown = false;
      for (const auto& r : s.rows) {
        rows.push_back(to_json(r));
        failure = failure || r.verdict == Verdict::Failure;
        unknown = unknown || !r.verdict || r.verdict == Verdict::Inconclusive;
      }
      report.outcome = {{"rows", rows}, {"mismatches", s.mismatches()}};
      report.truncation = {{"fast_paper_bound", fast_paper_bound}};
      text << format_table(s) << s.rows.size() << " entries, " << s.mismatches() << " mismatches\n";
      report.exit_code = failure ? kExitFailure : unknown ? kExitInconclusive : kExitOk;
    } else if (sub == probe && random_count > 0) {
      std::mt19937_64 rng(seed);
      json hits = json::array();
      json runs = json::array();
      FullyCriticalOptions opt;
      opt.limits = limits;
      for (std::size_t n = 2; n <= 4; ++n) {
        for (int k = 0; k < random_count; ++k) {
          const LatticeDescriptor d = random_form(n, rng);
          const ConjectureProbe p = conjecture_probe(d, opt);
          runs.push_back({{"gram", json::parse(gram_to_json(d))},
                          {"first_two_designs", p.first_two_designs},
                          {"verdict", p.verdict ? json(to_string(*p.verdict)) : json(nullptr)}});
          if (p.counterexample()) {
            hits.push_back(json::parse(gram_to_json(d)));
            err << "WOULD-BE COUNTEREXAMPLE:\n" << gram_to_text(d.gram);
          }
        }
      }
      report.outcome = {{"runs", runs}, {"counterexamples", hits}};
      text << runs.size() << " random forms probed, " << hits.size() << " counterexamples\n";
      report.exit_code = hits.empty() ? kExitOk : kExitFailure;
    } else {
      const LatticeDescriptor input = resolve_input(common);
      report.input = input;
      const GramMatrix& q = input.gram;

      if (sub == analyze) {
        const Rational det = determinant(q);
        json o = {{"dim", q.dim()},
                  {"determinant", rational_json(det)},
                  {"integral", q.is_integral()},
                  {"even", q.is_integral() && is_even(q)}};
        text << "dimension " << q.dim() << ", determinant " << to_string(det) << '\n';
        if (q.is_integral()) {
          const GramMatrix w = is_even(q) ? q : doubled(q);
          const GramMatrix m = q.dim() % 2 ? orthosum_A1(w) : w;
          const std::uint64_t lv = level(m);
          const std::uint64_t wt = m.dim() / 2 + 2;
          o["level"] = lv;
          o["weight"] = wt;
          o["sturm_B"] = sturm_bound(wt, lv);
          text << (is_even(q) ? "even" : "odd (working with 2Q)") << ", level " << lv << ", weight " << wt
               << ", Sturm bound " << sturm_bound(wt, lv) << '\n';
        }
        json ls = json::array();
        for (const auto& l : first_layers(q, 2, limits)) {
          const DesignVerdict v = is_t_design(l, q, 2);
          ls.push_back({{"norm", rational_json(l.norm)}, {"size", l.cardinality()}, {"design2", v.is_design}});
          text << "layer (x,x)=" << to_string(l.norm) << ": " << l.cardinality() << " vectors, "
               << (v.is_design ? "2-design" : "not a 2-design") << '\n';
        }
        o["first_layers"] = ls;
        report.outcome = o;
      } else if (sub == layers) {
        const Rational bound = parse_rational(bound_text);
        const LayerSpectrum s = enumerate_layers(q, bound, limits);
        json ls = json::array();
        for (const auto& [m, c] : layer_cardinalities(s)) {
          ls.push_back({{"norm", rational_json(m)}, {"size", c}});
          text << to_string(m) << ' ' << c << '\n';
        }
        if (!dump_path.empty()) {
          std::ofstream f(dump_path);
          if (!f) throw DomainError("cannot write " + dump_path);
          write_layer_dump(f, s);
        }
        report.outcome = {{"layers", ls}};
        report.truncation = {{"bound", rational_json(bound)}};
      } else if (sub == design) {
        if (layer_norm.empty() == bound_text.empty())
          throw CLI::ValidationError("give exactly one of --layer-norm and --bound");
        if (t % 2) throw CLI::ValidationError("--t must be even");
        std::vector<DesignVerdict> vs;
        if (!layer_norm.empty()) {
          const Rational m = parse_rational(layer_norm);
          const LayerSpectrum s = enumerate_layers(q, m, limits);
          const Layer* l = s.find(m);
          if (!l) throw DomainError("the layer (x,x)=" + to_string(m) + " is empty");
          vs.push_back(is_t_design(*l, q, t));
          report.truncation = {{"bound", rational_json(m)}};
        } else {
          const Rational b = parse_rational(bound_text);
          for (const auto& l : enumerate_layers(q, b, limits).layers) vs.push_back(is_t_design(l, q, t));
          report.truncation = {{"bound", rational_json(b)}};
        }
        json arr = json::array();
        bool all = true;
        for (const auto& v : vs) {
          arr.push_back(to_json(v));
          text << transcript_line(v) << '\n';
          all = all && v.is_design;
        }
        report.outcome = {{"layers", arr}};
        report.exit_code = all ? kExitOk : kExitFailure;
      } else if (sub == fc || sub == probe) {
        FullyCriticalOptions opt;
        opt.limits = limits;
        if (!bound_text.empty()) {
          const Rational b = parse_rational(bound_text);
          if (b.get_den() != 1 || sgn(b) <= 0) throw CLI::ValidationError("--bound must be a positive integer");
          opt.override_bound = b.get_num().get_ui();
        } else if (fast_paper_bound) {
          if (!input.reference_N) throw CLI::ValidationError("--fast-paper-bound needs a catalog entry with N");
          opt.override_bound = static_cast<std::uint64_t>(*input.reference_N);
        }
        if (sub == fc) {
          const FullyCriticalReport r = fully_critical(input, opt);
          report.outcome = to_json(r);
          report.truncation = {{"bound_B", r.bound_B}, {"target_norm", rational_json(r.target_norm)}};
          text << input.label() << ": level " << r.level << ", weight " << r.weight << ", B = " << r.bound_B
               << (r.bound_from_override ? " (override)" : " (Sturm)") << (r.doubled ? ", working with 2Q" : "")
               << (r.augmented_with_A1 ? ", modular data of the sum with A1" : "") << '\n'
               << transcript(r) << to_string(r.verdict) << ": " << r.message << '\n';
          if (!dump_path.empty()) {
            std::ofstream f(dump_path);
            if (!f) throw DomainError("cannot write " + dump_path);
            write_layer_dump(f, enumerate_layers(q, r.certified_norm, limits));
          }
          report.exit_code = r.exit_code();
        } else {
          const ConjectureProbe p = conjecture_probe(input, opt);
          report.outcome = {{"first_two_designs", p.first_two_designs},
                            {"fully_critical", p.fully_critical},
                            {"verdict", p.verdict ? json(to_string(*p.verdict)) : json(nullptr)},
                            {"counterexample", p.counterexample()}};
          text << input.label() << ": first two layers "
               << (p.first_two_designs ? "are 2-designs" : "are not both 2-designs");
          if (p.verdict) text << ", verdict " << to_string(*p.verdict);
          text << '\n';
          if (p.counterexample()) err << "WOULD-BE COUNTEREXAMPLE: " << input.label() << '\n';
          report.exit_code = p.counterexample() ? kExitFailure
                             : (p.verdict == Verdict::Inconclusive) ? kExitInconclusive
                                                                    : kExitOk;
        }
      } else if (sub == ht || sub == st) {
        SumOptions opt;
        opt.limits = limits;
        if (radius > 0) {
          opt.radius = radius;
          opt.auto_expand = false;
        }
        const HeightReport h = height(q, opt);
        report.truncation = {{"radius", h.truncation_radius}, {"tail", h.tail_estimate}};
        char buf[160];
        if (sub == ht) {
          report.outcome = to_json(h);
          std::snprintf(buf, sizeof buf, "h = %.15g\nF = %.15g, C = %.15g\n", h.height, h.F_value, h.constant_C);
          text << buf;
        } else {
          report.outcome = {{"residual", h.projected_residual}, {"gradient", matrix_json(h.gradient)}};
          std::snprintf(buf, sizeof buf, "stationarity residual %.3e\n", h.projected_residual);
          text << buf;
          report.exit_code = h.projected_residual < 1e-6   ? kExitOk
                             : h.projected_residual > 1e-3 ? kExitFailure
                                                           : kExitInconclusive;
        }
        std::snprintf(buf, sizeof buf, "radius %.1f, tail bound %.2e\n", h.truncation_radius, h.tail_estimate);
        text << buf;
      }
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    report.exit_code = kExitInconclusive;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    report.exit_code = kExitInconclusive;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    report.exit_code = kExitInconclusive;
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (as_json) {
    out << report.to_json().dump(2) << '\n';
  } else {
    out << text.str();
  }
  return report;
}

}  // namespace latdesign
