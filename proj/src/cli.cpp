#include "mulspace/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mulspace/fixtures.hpp"
#include "mulspace/msgf.hpp"
#include "mulspace/multiplier.hpp"
#include "mulspace/norms.hpp"
#include "mulspace/partitions.hpp"
#include "mulspace/rng.hpp"
#include "mulspace/runtime.hpp"
#include "mulspace/verify.hpp"

using nlohmann::json;

namespace mulspace::cli {

namespace {

// ---------------------------------------------------------------- helpers

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_exponent(const std::string& field, const std::string& text) {
  std::string t = lower(trim(text));
  if (t == "inf" || t == "+inf" || t == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw validation_error(field, field + " must be a number or 'inf'");
  }
}

json exponent_json(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

std::vector<double> parse_double_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw validation_error(field, field + " must be a comma-separated number list");
    }
  }
  return out;
}

/// "name" or "name:p1,p2" -> catalog symbol.
Symbol parse_symbol_arg(const std::string& text) {
  if (text.empty()) throw validation_error("symbol", "no symbol given");
  std::size_t colon = text.find(':');
  std::string name = text.substr(0, colon == std::string::npos ? text.size() : colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    params = parse_double_list("symbol", text.substr(colon + 1));
  }
  return symbol_catalog(name, params);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

// ------------------------------------------------------------ run config

struct GridOpts {
  int dim = 1;
  int n = 0;            // 0 keeps the subcommand default
  double half_width = 0.0;  // likewise
};

struct CommonOpts {
  GridOpts grid;
  int jmin = -8;
  int jmax = 8;
  double sharpness = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "json";
  std::string config;  // consumed before parsing; registered so parse accepts it
};

void add_grid_opts(CLI::App* sc, GridOpts& g) {
  sc->add_option("--dim", g.dim, "grid dimension, 1 or 2")->capture_default_str();
  sc->add_option("--N", g.n, "points per axis (power of two >= 8)");
  sc->add_option("--L", g.half_width, "box half width");
}

void add_common_opts(CLI::App* sc, CommonOpts& c, bool with_jrange) {
  add_grid_opts(sc, c.grid);
  if (with_jrange) {
    sc->add_option("--jmin", c.jmin, "lowest dyadic index")->capture_default_str();
    sc->add_option("--jmax", c.jmax, "highest dyadic index")->capture_default_str();
  }
  sc->add_option("--sharpness", c.sharpness, "dyadic cutoff transition sharpness")
      ->capture_default_str();
  sc->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sc->add_option("--threads", c.threads, "worker threads (default from MULSPACE_THREADS)")
      ->envname("MULSPACE_THREADS");
  sc->add_option("--format", c.format, "output format: json or csv")->capture_default_str();
  sc->add_option("--config", c.config, "flat key=value config file (applied before flags)");
}

Grid resolve_grid(const GridOpts& g, bool piece_default) {
  if (g.dim != 1 && g.dim != 2) throw validation_error("dim", "dim must be 1 or 2");
  Grid dflt = piece_default ? piece_reference_grid(g.dim)
                            : (g.dim == 1 ? make_grid(1, 4096, 64.0 * kPi)
                                          : make_grid(2, 512, 16.0 * kPi));
  int n = g.n > 0 ? g.n : dflt.points_per_axis;
  double half = g.half_width > 0.0 ? g.half_width : dflt.half_width;
  return make_grid(g.dim, n, half);
}

void start(const CommonOpts& c) {
  if (c.threads < 1) throw validation_error("threads", "threads must be >= 1");
  if (c.format != "json" && c.format != "csv") {
    throw validation_error("format", "format must be json or csv");
  }
  runtime::set_thread_count(c.threads);
}

json run_config_json(const Grid& grid, const CommonOpts& c) {
  return json{
      {"grid", {{"dim", grid.dim}, {"N", grid.points_per_axis}, {"L", grid.half_width}}},
      {"j_range", {{"lo", c.jmin}, {"hi", c.jmax}}},
      {"partition",
       {{"dyadic_sharpness", c.sharpness}, {"uniform_lattice_radius", 16}}},
      {"rng", Philox::algorithm()},
      {"seed", c.seed},
      {"threads", c.threads},
      {"format", c.format},
  };
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

// ------------------------------------------------------------- subcommands

struct PartitionCheckOpts {
  CommonOpts common;
  std::string kind = "both";
  int samples = 4096;
};

int run_partition_check(const PartitionCheckOpts& o, std::ostream& out) {
  start(o.common);
  if (o.kind != "dyadic" && o.kind != "uniform" && o.kind != "both") {
    throw validation_error("kind", "kind must be dyadic, uniform, or both");
  }
  Grid grid = resolve_grid(o.common.grid, false);
  json doc{{"config", run_config_json(grid, o.common)}};

  if (o.kind != "uniform") {
    DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness, {o.common.jmin, o.common.jmax});
    doc["dyadic"] = {{"defect", partition_defect(dyadic, o.samples, o.common.seed)},
                     {"lower_bound_c", dyadic.lower_bound_c},
                     {"sharpness", dyadic.transition_sharpness}};
  }
  if (o.kind != "dyadic") {
    UniformPartition uniform = build_uniform_partition(o.common.grid.dim);
    doc["uniform"] = {{"defect", partition_defect(uniform, o.samples, o.common.seed)},
                      {"lattice_radius", uniform.lattice_radius}};
  }

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"kind", "defect"});
    if (doc.contains("dyadic")) csv.row({"dyadic", num(doc["dyadic"]["defect"])});
    if (doc.contains("uniform")) csv.row({"uniform", num(doc["uniform"]["defect"])});
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct NormOpts {
  CommonOpts common;
  std::string spec_text;
  std::string input;
};

NormSpec parse_norm_spec(const std::string& text, json& echo) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error("spec", std::string("spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family")) {
    throw validation_error("spec", "spec needs a \"family\" key");
  }

  NormSpec spec;
  std::string family = lower(j["family"].get<std::string>());
  static const std::map<std::string, NormFamily> kFamilies = {
      {"lp", NormFamily::lp},
      {"sobolev", NormFamily::sobolev},
      {"besov", NormFamily::besov},
      {"modulation", NormFamily::modulation},
      {"modulation_stft", NormFamily::modulation_stft},
      {"stft", NormFamily::modulation_stft},
      {"herz", NormFamily::herz},
      {"flq", NormFamily::flq},
      {"fourier_lebesgue", NormFamily::flq},
      {"hardy1", NormFamily::hardy1},
      {"hardy", NormFamily::hardy1},
  };
  auto fam = kFamilies.find(family);
  if (fam == kFamilies.end()) throw validation_error("spec", "unknown norm family " + family);
  spec.family = fam->second;

  auto exponent_field = [&j](const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (j[key].is_string()) return parse_exponent(key, j[key].get<std::string>());
    return j[key].get<double>();
  };
  spec.p = exponent_field("p", 2.0);
  spec.q = exponent_field("q", 2.0);
  if (j.contains("s")) spec.s = j["s"].get<double>();
  if (j.contains("stride")) spec.stft_stride = j["stride"].get<int>();
  if (j.contains("levels")) spec.hardy_levels = j["levels"].get<int>();
  if (j.contains("hardy_method")) {
    std::string method = lower(j["hardy_method"].get<std::string>());
    if (method == "riesz") {
      spec.hardy_method = HardyMethod::riesz;
    } else if (method == "maximal") {
      spec.hardy_method = HardyMethod::maximal;
    } else {
      throw validation_error("spec", "hardy_method must be riesz or maximal");
    }
  }

  echo = json{{"family", fam->first},
              {"p", exponent_json(spec.p)},
              {"q", exponent_json(spec.q)},
              {"s", spec.s}};
  if (spec.family == NormFamily::modulation_stft) echo["stride"] = spec.stft_stride;
  if (spec.family == NormFamily::hardy1) {
    echo["hardy_method"] = spec.hardy_method == HardyMethod::riesz ? "riesz" : "maximal";
    echo["levels"] = spec.hardy_levels;
  }
  return spec;
}

int run_norm(const NormOpts& o, std::ostream& out) {
  start(o.common);
  json echo;
  NormSpec spec = parse_norm_spec(o.spec_text, echo);
  GridFunction f = read_msgf(o.input);

  DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness);
  UniformPartition uniform = build_uniform_partition(f.grid.dim);
  NormResult r = compute_norm(f, spec, dyadic, uniform);

  CommonOpts echo_common = o.common;
  echo_common.grid = {f.grid.dim, f.grid.points_per_axis, f.grid.half_width};
  json doc{{"config", run_config_json(f.grid, echo_common)},
           {"input", o.input},
           {"side", f.side == Side::space ? "space" : "frequency"},
           {"spec", echo},
           {"value", r.value},
           {"truncation_mass", r.truncation_mass},
           {"warnings", r.warnings}};

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"value", "truncation_mass"});
    csv.row({num(r.value), num(r.truncation_mass)});
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct CheckOpts {
  CommonOpts common;
  std::string symbol;
  double s = 0.5;
  std::string p = "2";
};

int run_check(const CheckOpts& o, std::ostream& out) {
  start(o.common);
  Symbol m = parse_symbol_arg(o.symbol);
  double p = parse_exponent("p", o.p);
  Grid ref = resolve_grid(o.common.grid, true);
  DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness);
  UniformPartition uniform = build_uniform_partition(ref.dim);

  ConditionReport rep =
      condition_report(m, o.s, p, {o.common.jmin, o.common.jmax}, dyadic, uniform, ref);
  MihlinResult mihlin = mihlin_sup(m, ref.dim);

  json per_j = json::array();
  for (const auto& row : rep.per_j) {
    per_j.push_back({{"j", row.j},
                     {"sobolev", row.sobolev},
                     {"besov_half", row.besov_half},
                     {"modulation", row.modulation},
                     {"herz", row.herz},
                     {"modulation_p", row.modulation_p}});
  }
  json doc{{"config", run_config_json(ref, o.common)},
           {"symbol", m.label},
           {"s", rep.s},
           {"p", exponent_json(rep.p)},
           {"per_j", per_j},
           {"sup",
            {{"sobolev", rep.sup.sobolev},
             {"besov_half", rep.sup.besov_half},
             {"modulation", rep.sup.modulation},
             {"herz", rep.sup.herz},
             {"modulation_p", rep.sup.modulation_p}}},
           {"argmax_j",
            {{"sobolev", rep.argmax_j[0]},
             {"besov_half", rep.argmax_j[1]},
             {"modulation", rep.argmax_j[2]},
             {"herz", rep.argmax_j[3]},
             {"modulation_p", rep.argmax_j[4]}}},
           {"mihlin", {{"value", mihlin.value}, {"order", mihlin.order}, {"diverged", mihlin.diverged}}},
           {"warnings", rep.warnings}};

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"j", "sobolev", "besov_half", "modulation", "herz", "modulation_p"});
    for (const auto& row : rep.per_j) {
      csv.row({std::to_string(row.j), num(row.sobolev), num(row.besov_half),
               num(row.modulation), num(row.herz), num(row.modulation_p)});
    }
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct KernelOpts {
  CommonOpts common;
  std::string symbol;
  std::string radii = "2,4,8,16,32";
};

int run_kernel(const KernelOpts& o, std::ostream& out) {
  start(o.common);
  Symbol m = parse_symbol_arg(o.symbol);
  std::vector<double> radii = parse_double_list("radii", o.radii);
  if (radii.empty()) throw validation_error("radii", "no tail radii given");
  Grid ref = resolve_grid(o.common.grid, true);
  DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness);

  KernelDiagnostics diag =
      kernel_diagnostics(m, {o.common.jmin, o.common.jmax}, dyadic, ref, radii);

  json per_j = json::array();
  for (const auto& row : diag.per_j) {
    json tail = json::array();
    for (const auto& [r, mass] : row.tail) tail.push_back({{"R", r}, {"mass", mass}});
    per_j.push_back({{"j", row.j},
                     {"k_l1", row.k_l1},
                     {"grad_k_l1", row.grad_k_l1},
                     {"slope", row.slope},
                     {"tail", tail}});
  }
  json doc{{"config", run_config_json(ref, o.common)},
           {"symbol", m.label},
           {"per_j", per_j},
           {"max_slope", diag.max_slope},
           {"warnings", diag.warnings}};

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    std::vector<std::string> header{"j", "k_l1", "grad_k_l1", "slope"};
    for (double r : radii) header.push_back("tail_" + num(r));
    csv.row(header);
    for (const auto& row : diag.per_j) {
      std::vector<std::string> cells{std::to_string(row.j), num(row.k_l1), num(row.grad_k_l1),
                                     num(row.slope)};
      for (const auto& [r, mass] : row.tail) cells.push_back(num(mass));
      csv.row(cells);
    }
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct HormanderOpts {
  CommonOpts common;
  std::string symbol;
  std::string shifts;  // empty -> dyadic ladder along the first axis
};

int run_hormander(const HormanderOpts& o, std::ostream& out) {
  start(o.common);
  Symbol m = parse_symbol_arg(o.symbol);
  Grid grid = resolve_grid(o.common.grid, true);
  DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness);

  std::vector<Point> ys;
  if (o.shifts.empty()) {
    ys = default_shift_samples(grid);
  } else {
    for (double v : parse_double_list("shifts", o.shifts)) ys.push_back({v, 0.0});
  }
  if (ys.empty()) throw validation_error("shifts", "no shift samples given");

  HormanderReport rep =
      hormander_integral(m, {o.common.jmin, o.common.jmax}, dyadic, grid, ys);

  json per_y = json::array();
  for (const auto& e : rep.per_y) {
    per_y.push_back({{"y", {e.y[0], e.y[1]}}, {"direct", e.direct}, {"bound", e.bound}});
  }
  json doc{{"config", run_config_json(grid, o.common)},
           {"symbol", m.label},
           {"per_y", per_y},
           {"sup_direct", rep.sup_direct},
           {"sup_bound", rep.sup_bound}};

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"y0", "y1", "direct", "bound"});
    for (const auto& e : rep.per_y) {
      csv.row({num(e.y[0]), num(e.y[1]), num(e.direct), num(e.bound)});
    }
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct GenOpts {
  CommonOpts common;
  std::string kind = "band_limited";
  int count = 10;
  std::string out_dir;
  double band_lo = 0.0;
  double band_hi = 4.0;
  bool band_linf = false;
  double atom_scale = 1.0;
};

int run_gen(const GenOpts& o, std::ostream& out) {
  start(o.common);
  if (o.out_dir.empty()) throw validation_error("out", "no output directory given");
  Grid grid = resolve_grid(o.common.grid, false);

  EnsembleSpec spec;
  spec.kind = parse_ensemble_kind(o.kind);
  spec.count = o.count;
  spec.seed = o.common.seed;
  spec.band = {o.band_lo, o.band_hi, o.band_linf};
  spec.atom_scale = o.atom_scale;
  std::vector<GridFunction> members = make_ensemble(spec, grid);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw io_error("cannot create directory " + o.out_dir + ": " + ec.message());

  json files = json::array();
  for (std::size_t i = 0; i < members.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "member_%03zu.msgf", i);
    std::string path = (fs::path(o.out_dir) / name).string();
    write_msgf(path, members[i]);
    files.push_back(name);
  }

  json doc{{"config", run_config_json(grid, o.common)},
           {"kind", ensemble_kind_name(spec.kind)},
           {"count", spec.count},
           {"seed", spec.seed},
           {"band", {{"lo", spec.band.r_lo}, {"hi", spec.band.r_hi}, {"linf", spec.band.linf}}},
           {"atom_scale", spec.atom_scale},
           {"files", files}};

  std::ofstream manifest(fs::path(o.out_dir) / "manifest.json");
  if (!manifest) throw io_error("cannot write manifest in " + o.out_dir);
  manifest << doc.dump(2) << '\n';
  if (!manifest.good()) throw io_error("short write on manifest in " + o.out_dir);

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"index", "file"});
    for (std::size_t i = 0; i < files.size(); ++i) {
      csv.row({std::to_string(i), files[i].get<std::string>()});
    }
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct VerifyOpts {
  CommonOpts common;
  std::string mode;
  std::string symbol;
  int count = 50;
  std::string p = "2";
  std::string q = "2";
  double s = 0.0;
  std::string kind = "band_limited";
  double band_lo = 0.0;
  double band_hi = 4.0;
  bool band_linf = false;
  double atom_scale = 1.0;
};

json ratio_report_json(const RatioReport& rep) {
  json per_input = json::array();
  for (const auto& e : rep.per_input) {
    per_input.push_back({{"id", e.id}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"ratio", e.ratio}});
  }
  return json{{"mode", rep.mode},
              {"lhs", rep.lhs_label},
              {"rhs", rep.rhs_label},
              {"per_input", per_input},
              {"ratio_min", rep.ratio_min},
              {"ratio_max", rep.ratio_max},
              {"ratio_spread", rep.ratio_spread},
              {"warnings", rep.warnings}};
}

int run_verify(const VerifyOpts& o, std::ostream& out) {
  start(o.common);
  if (o.mode.empty()) throw validation_error("mode", "no mode given");
  EquivalenceParams params{parse_exponent("p", o.p), parse_exponent("q", o.q), o.s};

  std::vector<RatioReport> reports;
  Grid grid;

  if (o.mode == "herz16" || o.mode == "pnorm17") {
    Symbol m = parse_symbol_arg(o.symbol);
    grid = resolve_grid(o.common.grid, true);
    DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness);
    UniformPartition uniform = build_uniform_partition(grid.dim);
    reports = equivalence_ratio(o.mode, m, {o.common.jmin, o.common.jmax}, grid, params, dyadic,
                                uniform);
  } else if (o.mode == "atom_transfer") {
    Symbol m = parse_symbol_arg(o.symbol);
    grid = resolve_grid(o.common.grid, false);
    EnsembleSpec spec;
    spec.kind = EnsembleKind::h1_atom;
    spec.count = o.count;
    spec.seed = o.common.seed;
    spec.atom_scale = o.atom_scale;
    reports.push_back(atom_transfer_ratio(m, spec, grid));
  } else {
    grid = resolve_grid(o.common.grid, false);
    DyadicPartition dyadic = build_dyadic_partition(o.common.sharpness);
    UniformPartition uniform = build_uniform_partition(grid.dim);
    EnsembleSpec spec;
    spec.kind = parse_ensemble_kind(o.kind);
    spec.count = o.count;
    spec.seed = o.common.seed;
    spec.band = {o.band_lo, o.band_hi, o.band_linf};
    spec.atom_scale = o.atom_scale;
    reports = equivalence_ratio(o.mode, spec, grid, params, dyadic, uniform);
  }

  json reports_json = json::array();
  for (const auto& rep : reports) reports_json.push_back(ratio_report_json(rep));
  json doc{{"config", run_config_json(grid, o.common)},
           {"mode", o.mode},
           {"params",
            {{"p", exponent_json(params.p)}, {"q", exponent_json(params.q)}, {"s", params.s}}},
           {"reports", reports_json}};

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"mode", "id", "lhs", "rhs", "ratio"});
    for (const auto& rep : reports) {
      for (const auto& e : rep.per_input) {
        csv.row({rep.mode, e.id, num(e.lhs), num(e.rhs), num(e.ratio)});
      }
    }
  } else {
    emit_json(out, doc);
  }
  return 0;
}

struct OpnormOpts {
  CommonOpts common;
  std::string symbol;
  int iterations = 256;
};

int run_opnorm(const OpnormOpts& o, std::ostream& out) {
  start(o.common);
  Symbol m = parse_symbol_arg(o.symbol);
  Grid grid = resolve_grid(o.common.grid, false);

  double estimate = operator_norm_l2(m, grid, o.iterations, o.common.seed);
  double scan = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    scan = std::max(scan, std::abs(m(grid.freq_point(idx))));
  }

  json doc{{"config", run_config_json(grid, o.common)},
           {"symbol", m.label},
           {"iterations", o.iterations},
           {"estimate", estimate},
           {"max_node_abs", scan},
           {"relative_gap", scan > 0.0 ? std::abs(estimate - scan) / scan : estimate}};

  if (o.common.format == "csv") {
    CsvWriter csv(out);
    csv.row({"estimate", "max_node_abs", "relative_gap"});
    csv.row({num(estimate), num(scan), num(doc["relative_gap"].get<double>())});
  } else {
    emit_json(out, doc);
  }
  return 0;
}

// ------------------------------------------------------------ config file

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw validation_error("config", "config line is not key=value: " + t);
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

void apply_config(CLI::App* app, const std::map<std::string, std::string>& kv) {
  for (auto* opt : app->get_options()) {
    for (const auto& name : opt->get_lnames()) {
      if (name == "config") continue;
      auto it = kv.find(name);
      if (it != kv.end()) opt->default_val(it->second);
    }
  }
  for (auto* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
    apply_config(sub, kv);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mulspace: dyadic multiplier pieces, time-frequency norms, and kernel checks"};
  app.require_subcommand(0, 1);

  PartitionCheckOpts pc;
  auto* sc_pc = app.add_subcommand("partition-check", "measure partition-of-unity defects");
  add_common_opts(sc_pc, pc.common, true);
  sc_pc->add_option("--kind", pc.kind, "dyadic, uniform, or both")->capture_default_str();
  sc_pc->add_option("--samples", pc.samples, "random sample count")->capture_default_str();

  NormOpts no;
  auto* sc_norm = app.add_subcommand("norm", "evaluate a norm of a stored grid function");
  add_common_opts(sc_norm, no.common, false);
  sc_norm->add_option("--spec", no.spec_text, "norm spec JSON, e.g. {\"family\":\"besov\",...}");
  sc_norm->add_option("--input", no.input, ".msgf input path");

  CheckOpts co;
  auto* sc_check = app.add_subcommand("check", "per-piece boundedness criteria table");
  add_common_opts(sc_check, co.common, true);
  sc_check->add_option("--symbol", co.symbol, "catalog symbol, name[:params]");
  sc_check->add_option("--s", co.s, "weight exponent s")->capture_default_str();
  sc_check->add_option("--p", co.p, "integrability exponent p (number or inf)")
      ->capture_default_str();

  KernelOpts ko;
  auto* sc_kernel = app.add_subcommand("kernel", "piece kernel masses, gradients, and tails");
  add_common_opts(sc_kernel, ko.common, true);
  sc_kernel->add_option("--symbol", ko.symbol, "catalog symbol, name[:params]");
  sc_kernel->add_option("--radii", ko.radii, "comma list of tail radii")->capture_default_str();

  HormanderOpts ho;
  auto* sc_horm = app.add_subcommand("hormander", "shifted kernel-difference integral");
  add_common_opts(sc_horm, ho.common, true);
  sc_horm->add_option("--symbol", ho.symbol, "catalog symbol, name[:params]");
  sc_horm->add_option("--shifts", ho.shifts, "comma list of first-axis shift lengths");

  GenOpts go;
  auto* sc_gen = app.add_subcommand("gen", "write a random ensemble to .msgf files");
  add_common_opts(sc_gen, go.common, false);
  sc_gen->add_option("--kind", go.kind, "band_limited, h1_atom, or gaussian_mix")
      ->capture_default_str();
  sc_gen->add_option("--count", go.count, "ensemble size")->capture_default_str();
  sc_gen->add_option("--out", go.out_dir, "output directory");
  sc_gen->add_option("--band-lo", go.band_lo, "inner band radius")->capture_default_str();
  sc_gen->add_option("--band-hi", go.band_hi, "outer band radius")->capture_default_str();
  sc_gen->add_flag("--band-linf", go.band_linf, "measure the band radius in l-infinity");
  sc_gen->add_option("--atom-scale", go.atom_scale, "nominal atom cube side")
      ->capture_default_str();

  VerifyOpts vo;
  auto* sc_verify = app.add_subcommand("verify", "two-sided equivalence constants");
  add_common_opts(sc_verify, vo.common, true);
  sc_verify->add_option("--mode", vo.mode,
                        "prop32, herz16, pnorm17, embed110, toft_chain, or atom_transfer");
  sc_verify->add_option("--symbol", vo.symbol, "symbol for piece and atom modes");
  sc_verify->add_option("--count", vo.count, "ensemble size")->capture_default_str();
  sc_verify->add_option("--p", vo.p, "exponent p (number or inf)")->capture_default_str();
  sc_verify->add_option("--q", vo.q, "exponent q (number or inf)")->capture_default_str();
  sc_verify->add_option("--s", vo.s, "weight exponent s")->capture_default_str();
  sc_verify->add_option("--kind", vo.kind, "ensemble kind for ensemble modes")
      ->capture_default_str();
  sc_verify->add_option("--band-lo", vo.band_lo, "inner band radius")->capture_default_str();
  sc_verify->add_option("--band-hi", vo.band_hi, "outer band radius")->capture_default_str();
  sc_verify->add_flag("--band-linf", vo.band_linf, "measure the band radius in l-infinity");
  sc_verify->add_option("--atom-scale", vo.atom_scale, "nominal atom cube side")
      ->capture_default_str();

  OpnormOpts oo;
  auto* sc_opnorm = app.add_subcommand("opnorm", "L2 operator norm by power iteration");
  add_common_opts(sc_opnorm, oo.common, false);
  sc_opnorm->add_option("--symbol", oo.symbol, "catalog symbol, name[:params]");
  sc_opnorm->add_option("--iterations", oo.iterations, "power iteration count (>= 16)")
      ->capture_default_str();

  try {
    // The config file must be applied before parsing, so scan for it by hand.
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config_path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        config_path = args[i].substr(9);
      }
    }
    if (!config_path.empty()) apply_config(&app, load_config_file(config_path));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (*sc_pc) return run_partition_check(pc, out);
    if (*sc_norm) return run_norm(no, out);
    if (*sc_check) return run_check(co, out);
    if (*sc_kernel) return run_kernel(ko, out);
    if (*sc_horm) return run_hormander(ho, out);
    if (*sc_gen) return run_gen(go, out);
    if (*sc_verify) return run_verify(vo, out);
    if (*sc_opnorm) return run_opnorm(oo, out);

    err << json{{"error", "missing subcommand"}}.dump() << '\n';
    err << app.help();
    return 64;
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = app.get_subcommands().empty()
                                 ? static_cast<const CLI::App*>(&app)
                                 : app.get_subcommands().front();
    out << target->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty()) {
      err << json{{"error", std::string("unknown subcommand: ") + e.what()}}.dump() << '\n';
      return 64;
    }
    err << json{{"error", e.what()}, {"field", e.get_name()}}.dump() << '\n';
    return 2;
  } catch (const validation_error& e) {
    err << json{{"error", e.what()}, {"field", e.field}}.dump() << '\n';
    return 2;
  } catch (const io_error& e) {
    err << json{{"error", e.what()}}.dump() << '\n';
    return 74;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}}.dump() << '\n';
    return 70;
  }
}

}  // namespace mulspace::cli
