#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "serialize.hpp"

namespace qcorr::cli {

namespace {

struct Family {
  WitnessKind kind;
  std::size_t n;
};

// Fixed family order used by sweeps and threshold tables.
constexpr Family kFamilies[] = {
    {WitnessKind::Entanglement, 2}, {WitnessKind::Entanglement, 3}, {WitnessKind::Steering, 2},
    {WitnessKind::Steering, 3},     {WitnessKind::BellCHSH, 2},     {WitnessKind::Bell3322, 3},
};

std::string family_label(const Family& f) {
  return std::string(to_string(f.kind)) + "-" + std::to_string(f.n);
}

WitnessKind parse_kind(const std::string& name) {
  const auto kind = parse_witness_kind(name);
  if (!kind || *kind == WitnessKind::Custom) {
    throw UsageError("unknown kind '" + name + "' (expected entanglement, steering, chsh or bell3322)");
  }
  return *kind;
}

std::size_t default_n(WitnessKind kind) { return kind == WitnessKind::BellCHSH ? 2 : 3; }

void check_n(WitnessKind kind, std::size_t n) {
  const bool ok = (kind == WitnessKind::BellCHSH) ? n == 2
                  : (kind == WitnessKind::Bell3322) ? n == 3
                                                    : (n == 2 || n == 3);
  if (!ok) {
    throw UsageError("--n " + std::to_string(n) + " is not available for kind " + std::string(to_string(kind)));
  }
}

Family single_family(const RunConfig& config) {
  if (config.kinds.size() != 1) throw UsageError("exactly one --kind is required");
  const WitnessKind kind = parse_kind(config.kinds.front());
  if (config.ns.size() > 1) throw UsageError("at most one --n is allowed");
  const std::size_t n = config.ns.empty() ? default_n(kind) : config.ns.front();
  check_n(kind, n);
  return {kind, n};
}

std::vector<Family> selected_families(const RunConfig& config) {
  std::vector<WitnessKind> kinds;
  for (const std::string& k : config.kinds) kinds.push_back(parse_kind(k));
  std::vector<Family> out;
  for (const Family& f : kFamilies) {
    const bool kind_ok = kinds.empty() || std::find(kinds.begin(), kinds.end(), f.kind) != kinds.end();
    const bool n_ok = config.ns.empty() || std::find(config.ns.begin(), config.ns.end(), f.n) != config.ns.end();
    if (kind_ok && n_ok) out.push_back(f);
  }
  if (out.empty()) throw UsageError("no witness family matches the given --kind/--n filters");
  return out;
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError(what + " must lie in [0, 1]");
}

GridOptions grid_options(const RunConfig& config) {
  if (config.grid_points < 100 || config.grid_points > 10'000'000) {
    throw UsageError("--grid must lie in [100, 10000000]");
  }
  if (config.grid_restarts < 0 || config.grid_restarts > 50) {
    throw UsageError("--restarts must lie in [0, 50]");
  }
  return GridOptions{config.grid_points, config.grid_restarts};
}

OutputFormat format_or(const RunConfig& config, OutputFormat fallback) {
  return config.format.value_or(fallback);
}

// Runs fn(k) for every k in [0, count) concurrently and returns the results
// in index order.
template <class Fn>
auto fan_out(std::size_t count, Fn fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<std::future<Result>> futures;
  futures.reserve(count);
  for (std::size_t k = 0; k < count; ++k) futures.push_back(std::async(std::launch::async, fn, k));
  std::vector<Result> results;
  results.reserve(count);
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string csv_optional(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

// Writes the command output to --out, to the directory named by the
// environment variable, or to `out`.
void emit(const RunConfig& config, const std::string& default_name, const std::string& content,
          std::ostream& out, std::ostream& err) {
  std::filesystem::path path;
  if (!config.out_path.empty()) {
    path = config.out_path;
  } else if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    path = std::filesystem::path(dir) / default_name;
  } else {
    out << content;
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + path.string());
  file << content;
  if (!file) throw std::runtime_error("failed writing output file " + path.string());
  err << "wrote " << path.string() << "\n";
}

std::string extension(OutputFormat format) { return format == OutputFormat::Csv ? ".csv" : ".json"; }

// ---------------------------------------------------------------- bounds

int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Family family = single_family(config);
  const GridOptions grid = grid_options(config);
  if (config.seesaw_starts < 1 || config.seesaw_starts > 10000) throw UsageError("--starts must lie in [1, 10000]");
  const OutputFormat format = format_or(config, OutputFormat::Json);

  const WitnessSetup setup = canonical_setup(family.kind, family.n, grid);
  const BoundReport& report = setup.bound_report;
  const bool discrepancy = report.published && std::abs(*report.published - setup.bound) > 1e-6;

  std::optional<BoundReport> quantum;
  if (config.quantum) {
    SeesawOptions options;
    options.starts = config.seesaw_starts;
    quantum = quantum_maximum_seesaw(setup.tensor, DensityMatrix::from_pure(PureState::singlet()), config.seed,
                                     options);
  }

  std::string content;
  if (format == OutputFormat::Json) {
    Json j;
    j["command"] = "bounds";
    j["kind"] = std::string(to_string(family.kind));
    j["n"] = family.n;
    j["bound"] = setup.bound;
    j["algebraic_max"] = setup.algebraic_max;
    j["grid_points"] = grid.points;
    j["seed"] = config.seed;
    if (report.method == BoundMethod::Enumeration) j["strategies_enumerated"] = report.evaluations;
    j["settings"] = to_json(setup.settings);
    j["report"] = to_json(report);
    if (discrepancy) {
      j["paper_discrepancy"] = {{"published", *report.published},
                                {"computed", setup.bound},
                                {"note", report.note}};
    } else {
      j["paper_discrepancy"] = nullptr;
    }
    if (quantum) {
      Json q = to_json(*quantum);
      q["state"] = "singlet";
      j["quantum_maximum"] = std::move(q);
    }
    content = dump(j);
  } else {
    std::ostringstream csv;
    csv << "kind,n,bound,method,analytic,published,evaluations,quantum_maximum\n";
    csv << to_string(family.kind) << ',' << family.n << ',' << format_double(setup.bound) << ','
        << to_string(report.method) << ',' << csv_optional(report.analytic) << ','
        << csv_optional(report.published) << ',' << report.evaluations << ','
        << (quantum ? format_double(quantum->bound) : "") << '\n';
    content = csv.str();
  }
  emit(config, "bounds-" + family_label(family) + extension(format), content, out, err);
  return kExitSuccess;
}

// -------------------------------------------------------------- evaluate

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Family family = single_family(config);
  if (!config.p) throw UsageError("--p is required");
  check_probability(*config.p, "--p");
  const GridOptions grid = grid_options(config);
  const OutputFormat format = format_or(config, OutputFormat::Json);

  const WitnessSetup setup = canonical_setup(family.kind, family.n, grid);
  const JointDistribution dist = joint_distribution(werner_state(*config.p), setup.settings);
  const WitnessResult result = evaluate(setup.tensor, dist, setup.bound, setup.algebraic_max);

  std::string content;
  if (format == OutputFormat::Json) {
    Json j;
    j["command"] = "evaluate";
    j["p"] = *config.p;
    j["result"] = to_json(result);
    j["settings"] = to_json(setup.settings);
    j["distribution"] = to_json(dist);
    content = dump(j);
  } else {
    std::ostringstream csv;
    csv << "p,kind,n,value,bound,violated,normalized,entropy\n"
        << format_double(*config.p) << ',' << to_string(family.kind) << ',' << family.n << ','
        << format_double(result.value) << ',' << format_double(result.bound) << ','
        << csv_bool(result.violated) << ',' << format_double(result.normalized) << ','
        << format_double(result.entropy) << '\n';
    content = csv.str();
  }
  emit(config, "evaluate-" + family_label(family) + extension(format), content, out, err);
  return kExitSuccess;
}

// ----------------------------------------------------------------- sweep

struct SweepRow {
  double p;
  WitnessResult result;
};

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::vector<Family> families = selected_families(config);
  const GridOptions grid = grid_options(config);
  std::vector<double> ps;
  if (!config.p_list.empty()) {
    ps = config.p_list;
    for (double p : ps) check_probability(p, "--p");
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  } else {
    ps = p_grid(config.p_start, config.p_stop, config.p_step);
  }
  const OutputFormat format = format_or(config, OutputFormat::Csv);

  const auto per_family = fan_out(families.size(), [&](std::size_t f) {
    const WitnessSetup setup = canonical_setup(families[f].kind, families[f].n, grid);
    std::vector<SweepRow> rows;
    rows.reserve(ps.size());
    for (double p : ps) {
      const JointDistribution dist = joint_distribution(werner_state(p), setup.settings);
      rows.push_back({p, evaluate(setup.tensor, dist, setup.bound, setup.algebraic_max)});
    }
    return rows;
  });

  std::string content;
  if (format == OutputFormat::Csv) {
    std::ostringstream csv;
    csv << "p,kind,n,value,bound,violated,normalized,entropy\n";
    for (const auto& rows : per_family) {
      for (const SweepRow& row : rows) {
        const WitnessResult& r = row.result;
        csv << format_double(row.p) << ',' << to_string(r.kind) << ',' << r.n << ',' << format_double(r.value)
            << ',' << format_double(r.bound) << ',' << csv_bool(r.violated) << ','
            << format_double(r.normalized) << ',' << format_double(r.entropy) << '\n';
      }
    }
    content = csv.str();
  } else {
    Json rows = Json::array();
    for (const auto& family_rows : per_family) {
      for (const SweepRow& row : family_rows) {
        Json r = to_json(row.result);
        Json ordered;
        ordered["p"] = row.p;
        for (auto& [key, value] : r.items()) ordered[key] = value;
        rows.push_back(std::move(ordered));
      }
    }
    Json j;
    j["command"] = "sweep";
    j["grid_points"] = grid.points;
    j["rows"] = std::move(rows);
    content = dump(j);
  }
  emit(config, "sweep" + extension(format), content, out, err);
  return kExitSuccess;
}

// ------------------------------------------------------------ thresholds

int cmd_thresholds(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.tolerance > 0.0 && config.tolerance <= 1e-2)) throw UsageError("--tol must lie in (0, 0.01]");
  const GridOptions grid = grid_options(config);
  const OutputFormat format = format_or(config, OutputFormat::Json);
  const std::vector<Family> families(std::begin(kFamilies), std::end(kFamilies));

  const auto computed = fan_out(families.size(), [&](std::size_t f) {
    return violation_threshold(canonical_setup(families[f].kind, families[f].n, grid), config.tolerance);
  });

  struct Entry {
    std::string label;
    std::string kind;
    std::optional<std::size_t> n;
    std::string settings;
    std::optional<double> threshold;
    std::optional<double> bound;
    int iterations;
    bool computed;
    bool inconclusive;
    std::string note;
  };
  std::vector<Entry> entries;
  for (std::size_t f = 0; f < families.size(); ++f) {
    entries.push_back({family_label(families[f]), std::string(to_string(families[f].kind)), families[f].n,
                       std::to_string(families[f].n), computed[f].p, computed[f].bound, computed[f].iterations,
                       true, false, ""});
  }
  entries.push_back({"steering-infinite", "steering", std::nullopt, "infinite", kInfiniteSettingSteeringThreshold,
                     std::nullopt, 0, false, false,
                     "steerable for 1/2 < p <= 1 with infinitely many measurement settings"});
  entries.push_back({"bell-465", "bell", std::nullopt, "465", kBell465SettingThreshold, std::nullopt, 0, false, true,
                     "Bell nonlocal for 0.7056 < p <= 1 with 465 settings per side; the region between the "
                     "local-model bound and 0.7056 is inconclusive"});

  std::string content;
  if (format == OutputFormat::Json) {
    Json list = Json::array();
    for (const Entry& e : entries) {
      Json j;
      j["label"] = e.label;
      j["kind"] = e.kind;
      j["n"] = e.n ? Json(*e.n) : Json(nullptr);
      j["settings"] = e.settings;
      j["threshold"] = e.threshold ? Json(*e.threshold) : Json(nullptr);
      j["bound"] = e.bound ? Json(*e.bound) : Json(nullptr);
      j["source"] = e.computed ? "computed" : "literature";
      j["computed"] = e.computed;
      j["inconclusive_region"] = e.inconclusive;
      if (e.computed) j["iterations"] = e.iterations;
      if (!e.note.empty()) j["note"] = e.note;
      list.push_back(std::move(j));
    }
    Json j;
    j["command"] = "thresholds";
    j["tolerance"] = config.tolerance;
    j["entries"] = std::move(list);
    content = dump(j);
  } else {
    std::ostringstream csv;
    csv << "label,kind,n,settings,threshold,bound,source,computed,inconclusive_region\n";
    for (const Entry& e : entries) {
      csv << e.label << ',' << e.kind << ',' << (e.n ? std::to_string(*e.n) : "") << ',' << e.settings << ','
          << csv_optional(e.threshold) << ',' << csv_optional(e.bound) << ','
          << (e.computed ? "computed" : "literature") << ',' << csv_bool(e.computed) << ','
          << csv_bool(e.inconclusive) << '\n';
    }
    content = csv.str();
  }
  emit(config, "thresholds" + extension(format), content, out, err);
  return kExitSuccess;
}

// ------------------------------------------------------------------ tomo

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("malformed number '" + text + "' in " + what);
  }
  if (used != text.size()) throw UsageError("malformed number '" + text + "' in " + what);
  return value;
}

PureState parse_target(const std::string& name) {
  // The prepared photonic state is |psi+>; "psi-plus-like" names the same
  // target as written in experimental reports.
  if (name == "psi-plus" || name == "psi-plus-like" || name == "bell") return PureState::psi_plus();
  if (name == "singlet") return PureState::singlet();
  throw UsageError("unknown --target '" + name + "' (expected psi-plus, psi-plus-like or singlet)");
}

DensityMatrix parse_state(const std::string& spec, const PureState& target) {
  if (spec == "singlet") return DensityMatrix::from_pure(PureState::singlet());
  if (spec == "bell" || spec == "psi-plus") return DensityMatrix::from_pure(PureState::psi_plus());
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const double value = parse_number(spec.substr(colon + 1), "--state");
    if (head == "werner") {
      check_probability(value, "werner parameter");
      return werner_state(value);
    }
    if (head == "depolarized") {
      if (!(value >= 0.25 && value <= 1.0)) throw UsageError("depolarized fidelity must lie in [0.25, 1]");
      return depolarized_with_fidelity(target, value);
    }
  }
  throw UsageError("unknown --state '" + spec +
                   "' (expected singlet, bell, psi-plus, werner:P or depolarized:F)");
}

std::string mode_name(SamplingMode mode) {
  switch (mode) {
    case SamplingMode::Multinomial:
      return "multinomial";
    case SamplingMode::Poisson:
      return "poisson";
    case SamplingMode::Analytic:
      return "analytic";
  }
  return "unknown";
}

int cmd_tomo(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.analytic && config.poisson) throw UsageError("--analytic and --poisson are mutually exclusive");
  const PureState target = parse_target(config.target);
  const bool imported = !config.counts_in.empty();
  const OutputFormat format = format_or(config, OutputFormat::Json);

  TomographySpec spec;
  spec.seed = config.seed;
  spec.shots_per_setting = config.shots;
  spec.mode = config.analytic ? SamplingMode::Analytic
                              : (config.poisson ? SamplingMode::Poisson : SamplingMode::Multinomial);
  if (!imported) {
    if (spec.mode != SamplingMode::Analytic && (config.shots < 1 || config.shots > 1'000'000'000)) {
      throw UsageError("--shots must lie in [1, 1000000000]");
    }
    if (config.repetitions < 2 || config.repetitions > 100000) {
      throw UsageError("--reps must lie in [2, 100000]");
    }
  }

  Json j;
  j["command"] = "tomo";
  std::vector<double> fidelities;
  double mean = 0.0, std_dev = 0.0;
  std::optional<Reconstruction> last;

  if (imported) {
    std::ifstream in(config.counts_in, std::ios::binary);
    if (!in) throw UsageError("cannot open --counts-in file " + config.counts_in);
    const Reconstruction r = reconstruct(read_counts_csv(in));
    mean = fidelity(r.rho_physical, target);
    fidelities = {mean};
    last = r;
    j["state"] = "imported:" + std::filesystem::path(config.counts_in).filename().string();
    j["target"] = config.target;
    j["mode"] = "imported";
    j["shots_per_setting"] = nullptr;
    j["repetitions"] = 1;
    j["seed"] = nullptr;
    j["exact_overlap"] = nullptr;
  } else {
    const DensityMatrix state = parse_state(config.state, target);
    const ReconstructionResult result = fidelity_experiment(state, target, spec, config.repetitions);
    fidelities = result.fidelities;
    mean = result.fidelity_to_target;
    std_dev = result.fidelity_std;
    last = result.last;
    j["state"] = config.state;
    j["target"] = config.target;
    j["mode"] = mode_name(spec.mode);
    j["shots_per_setting"] = spec.mode == SamplingMode::Analytic ? Json(nullptr) : Json(spec.shots_per_setting);
    j["repetitions"] = config.repetitions;
    j["seed"] = config.seed;
    j["exact_overlap"] = fidelity(state, target);

    if (!config.counts_out.empty()) {
      // Counts of the final repetition, i.e. the one behind last_reconstruction.
      TomographySpec last_spec = spec;
      last_spec.seed = derive_seed(spec.seed, config.repetitions - 1);
      std::ofstream counts(config.counts_out, std::ios::binary);
      if (!counts) throw std::runtime_error("cannot open --counts-out file " + config.counts_out);
      write_counts_csv(counts, simulate_counts(state, last_spec));
      err << "wrote " << config.counts_out << "\n";
    }
  }

  std::string content;
  if (format == OutputFormat::Json) {
    j["fidelity_mean"] = mean;
    j["fidelity_std"] = std_dev;
    j["fidelities"] = fidelities;
    j["last_reconstruction"] = to_json(*last);
    content = dump(j);
  } else {
    std::ostringstream csv;
    csv << "repetition,fidelity\n";
    for (std::size_t r = 0; r < fidelities.size(); ++r) csv << r << ',' << format_double(fidelities[r]) << '\n';
    content = csv.str();
  }
  emit(config, "tomo" + extension(format), content, out, err);
  return kExitSuccess;
}

// ------------------------------------------------------------- decompose

int cmd_decompose(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.p) throw UsageError("--p is required");
  const double p = *config.p;
  check_probability(p, "--p");
  const OutputFormat format = format_or(config, OutputFormat::Json);

  const MixtureWeights weights = weights_for_p(p);
  const double deviation = max_abs_diff(werner_state(p).matrix(), twirl_mixture_state(weights).matrix());
  const std::optional<IntegerWeightRow> row = integer_row_for(p);
  const std::optional<double> row_deviation =
      row ? std::optional<double>(
                max_abs_diff(werner_state(p).matrix(), twirl_mixture_state(row->weights()).matrix()))
          : std::nullopt;

  std::string content;
  if (format == OutputFormat::Json) {
    Json j;
    j["command"] = "decompose";
    j["p"] = p;
    j["weights"] = to_json(weights);
    j["deviation"] = deviation;
    if (row) {
      j["integer_row"] = {{"p", row->p},
                          {"alpha", row->alpha},
                          {"beta", row->beta},
                          {"total", row->total()},
                          {"deviation", *row_deviation}};
    } else {
      j["integer_row"] = nullptr;
    }
    content = dump(j);
  } else {
    std::ostringstream csv;
    csv << "p,alpha,beta,gamma,delta,integer_alpha,integer_beta,deviation\n"
        << format_double(p) << ',' << format_double(weights.alpha) << ',' << format_double(weights.beta) << ','
        << format_double(weights.gamma) << ',' << format_double(weights.delta) << ','
        << (row ? std::to_string(row->alpha) : "") << ',' << (row ? std::to_string(row->beta) : "") << ','
        << format_double(deviation) << '\n';
    content = csv.str();
  }
  emit(config, "decompose" + extension(format), content, out, err);
  return kExitSuccess;
}

// ---------------------------------------------------------------- parser

void add_output_options(CLI::App& sub, RunConfig& config, std::string& format) {
  sub.add_option("--out,-o", config.out_path, "Output file (default: stdout, or $QCORR_OUTPUT_DIR/<name>)");
  sub.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_grid_options(CLI::App& sub, RunConfig& config) {
  sub.add_option("--grid", config.grid_points, "Sphere grid points for product/LHS bounds")
      ->capture_default_str();
  sub.add_option("--restarts", config.grid_restarts, "Simplex restarts after the grid scan")->capture_default_str();
}

}  // namespace

std::vector<double> p_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw UsageError("--p-step must be positive");
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop)) {
    throw UsageError("p grid must satisfy 0 <= --p-start <= --p-stop <= 1");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw UsageError("p grid has more than 10^6 points");
  std::vector<double> ps;
  ps.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double p = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
    ps.push_back(std::clamp(p, 0.0, 1.0));
  }
  return ps;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string format;
  std::string kind;
  std::size_t n = 0;
  double p = -1.0;

  CLI::App app{"qcorr: local-uncertainty witnesses for two-qubit correlations", "qcorr"};
  app.require_subcommand(1);

  auto* bounds = app.add_subcommand("bounds", "Classical bound of a witness functional");
  bounds->add_option("--kind", kind, "entanglement | steering | chsh | bell3322")->required();
  bounds->add_option("--n", n, "Number of measurement settings");
  bounds->add_flag("--quantum", config.quantum, "Also run the see-saw quantum maximum on the singlet");
  bounds->add_option("--starts", config.seesaw_starts, "See-saw random starts")->capture_default_str();
  bounds->add_option("--seed", config.seed, "Seed for the see-saw starts")->capture_default_str();
  add_grid_options(*bounds, config);
  add_output_options(*bounds, config, format);

  auto* eval = app.add_subcommand("evaluate", "Witness value on a Werner state");
  eval->add_option("--kind", kind, "entanglement | steering | chsh | bell3322")->required();
  eval->add_option("--n", n, "Number of measurement settings");
  eval->add_option("--p", p, "Werner mixing parameter")->required();
  add_grid_options(*eval, config);
  add_output_options(*eval, config, format);

  auto* sweep = app.add_subcommand("sweep", "Witness values over a grid of Werner states");
  sweep->add_option("--kind", config.kinds, "Restrict to these kinds (repeatable)");
  sweep->add_option("--n", config.ns, "Restrict to these setting counts (repeatable)");
  sweep->add_option("--p", config.p_list, "Explicit p values (overrides the regular grid)");
  sweep->add_option("--p-start", config.p_start, "First p of the regular grid")->capture_default_str();
  sweep->add_option("--p-stop", config.p_stop, "Last p of the regular grid")->capture_default_str();
  sweep->add_option("--p-step", config.p_step, "Spacing of the regular grid")->capture_default_str();
  add_grid_options(*sweep, config);
  add_output_options(*sweep, config, format);

  auto* thresholds = app.add_subcommand("thresholds", "Werner violation thresholds of every family");
  thresholds->add_option("--tol", config.tolerance, "Bisection tolerance")->capture_default_str();
  add_grid_options(*thresholds, config);
  add_output_options(*thresholds, config, format);

  auto* tomo = app.add_subcommand("tomo", "Simulated over-complete state tomography");
  tomo->add_option("--state", config.state, "singlet | bell | psi-plus | werner:P | depolarized:F")
      ->capture_default_str();
  tomo->add_option("--target", config.target, "psi-plus | psi-plus-like | singlet")->capture_default_str();
  tomo->add_option("--shots", config.shots, "Shots per setting pair")->capture_default_str();
  tomo->add_option("--reps", config.repetitions, "Repetitions")->capture_default_str();
  tomo->add_option("--seed", config.seed, "Base seed")->capture_default_str();
  tomo->add_flag("--analytic", config.analytic, "Use exact probabilities instead of sampling");
  tomo->add_flag("--poisson", config.poisson, "Poisson counts instead of a fixed number of shots");
  tomo->add_option("--counts-in", config.counts_in, "Reconstruct from a counts CSV instead of simulating");
  tomo->add_option("--counts-out", config.counts_out, "Write the final repetition's counts as CSV");
  add_output_options(*tomo, config, format);

  auto* decompose = app.add_subcommand("decompose", "Pauli-twirl mixing weights of a Werner state");
  decompose->add_option("--p", p, "Werner mixing parameter")->required();
  add_output_options(*decompose, config, format);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsageError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.command = chosen->get_name();
  if (!kind.empty()) config.kinds = {kind};
  auto given = [chosen](const std::string& name) {
    const CLI::Option* opt = chosen->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--n") && config.ns.empty()) config.ns = {n};
  if (given("--p") && config.p_list.empty()) config.p = p;
  if (format == "json") config.format = OutputFormat::Json;
  if (format == "csv") config.format = OutputFormat::Csv;

  try {
    if (config.command == "bounds") return cmd_bounds(config, out, err);
    if (config.command == "evaluate") return cmd_evaluate(config, out, err);
    if (config.command == "sweep") return cmd_sweep(config, out, err);
    if (config.command == "thresholds") return cmd_thresholds(config, out, err);
    if (config.command == "tomo") return cmd_tomo(config, out, err);
    if (config.command == "decompose") return cmd_decompose(config, out, err);
    throw UsageError("unknown command " + config.command);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputationFailure;
  }
}

}  // namespace qcorr::cli
