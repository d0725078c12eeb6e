#include "sgx/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "sgx/errors.hpp"
#include "sgx/extremes.hpp"
#include "sgx/io.hpp"
#include "sgx/parallel.hpp"
#include "sgx/polchinski.hpp"
#include "sgx/quadrature.hpp"
#include "sgx/rng.hpp"
#include "sgx/sinegordon.hpp"
#include "sgx/spectral.hpp"
#include "sgx/stats.hpp"

namespace sgx::experiments {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "sgx 1.0.0";

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    size_t pos = 0;
    double v = std::stod(item, &pos);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty numeric list: '" + text + "'");
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "experiment")
      cfg.kind = kind_from_string(value);
    else if (key == "n")
      cfg.n = std::stoi(value);
    else if (key == "mass_sq")
      cfg.mass_sq = std::stod(value);
    else if (key == "z")
      cfg.z = std::stod(value);
    else if (key == "beta")
      cfg.beta = std::stod(value);
    else if (key == "s")
      cfg.s = std::stod(value);
    else if (key == "r") {
      if (value == "default") {
        cfg.r_default = true;
      } else {
        cfg.r_default = false;
        cfg.r = std::stod(value);
      }
    } else if (key == "samples")
      cfg.samples = std::stoi(value);
    else if (key == "seed") {
      cfg.seed = std::stoull(value);
      cfg.seed_set = true;
    } else if (key == "out_dir")
      cfg.out_dir = value;
    else if (key == "threads")
      cfg.threads = std::stoi(value);
    else if (key == "chains")
      cfg.chains = std::stoi(value);
    else if (key == "burn_in")
      cfg.burn_in = std::stoi(value);
    else if (key == "thin")
      cfg.thin = std::stoi(value);
    else if (key == "mc_samples")
      cfg.mc_samples = std::stoi(value);
    else if (key == "n_boot")
      cfg.n_boot = std::stoi(value);
    else if (key == "flow_T")
      cfg.flow_T = std::stod(value);
    else if (key == "flow_dt")
      cfg.flow_dt = std::stod(value);
    else if (key == "lambda")
      cfg.lambda = std::stod(value);
    else if (key == "lambda_grid")
      cfg.lambda_grid = parse_double_list(value);
    else if (key == "t_grid")
      cfg.t_grid = parse_double_list(value);
    else if (key == "r_grid")
      cfg.r_grid = parse_double_list(value);
    else if (key == "s_grid")
      cfg.s_grid = parse_double_list(value);
    else
      throw ConfigError("unknown config key: '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad value for key '" + key + "': '" + value + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("value out of range for key '" + key + "': '" + value + "'");
  }
  cfg.echo[key] = value;
}

void validate(const ExperimentConfig& cfg) {
  if (!cfg.seed_set) throw ConfigError("seed is required (no entropy defaults)");
  if (!is_power_of_two(cfg.n) || cfg.n < 2 || cfg.n > 1024)
    throw ConfigError("n must be a power of two in [2, 1024]");
  if (cfg.beta <= 0.0 || cfg.beta >= 6.0 * M_PI)
    throw ConfigError("beta out of range (0, 6π)");
  if (cfg.mass_sq <= 0.0) throw ConfigError("mass_sq must be > 0");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (!cfg.r_default && cfg.r < 0.0) throw ConfigError("explicit r must be >= 0");
  if (cfg.chains < 1) throw ConfigError("chains must be >= 1");
}

}  // namespace

Kind kind_from_string(const std::string& name) {
  if (name == "gff-extremes") return Kind::GffExtremes;
  if (name == "sg-extremes") return Kind::SgExtremes;
  if (name == "coupling-xcheck") return Kind::CouplingXcheck;
  if (name == "decomposition-audit") return Kind::DecompositionAudit;
  if (name == "polchinski-residual") return Kind::PolchinskiResidual;
  if (name == "level-set-growth") return Kind::LevelSetGrowth;
  if (name == "near-maxima-geometry") return Kind::NearMaximaGeometry;
  throw ConfigError("unknown experiment kind: '" + name + "'");
}

std::string kind_to_string(Kind kind) {
  switch (kind) {
    case Kind::GffExtremes: return "gff-extremes";
    case Kind::SgExtremes: return "sg-extremes";
    case Kind::CouplingXcheck: return "coupling-xcheck";
    case Kind::DecompositionAudit: return "decomposition-audit";
    case Kind::PolchinskiResidual: return "polchinski-residual";
    case Kind::LevelSetGrowth: return "level-set-growth";
    case Kind::NearMaximaGeometry: return "near-maxima-geometry";
  }
  return "unknown";
}

double ExperimentConfig::extraction_radius() const {
  if (!r_default) return r;
  return extremes::default_extraction_radius(1.0 / n);
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  long line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::string stripped = line;
    size_t hash = stripped.find('#');
    if (hash != std::string::npos) stripped = stripped.substr(0, hash);
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    apply_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  for (const std::string& ov : overrides) {
    size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must be key=value: '" + ov + "'");
    apply_key(cfg, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  if (const char* env = std::getenv("SGX_OUT_DIR")) {
    cfg.out_dir = env;
    cfg.echo["out_dir"] = env;
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

namespace {

// collects output files and stream accounting while an experiment runs
struct RunContext {
  const ExperimentConfig& cfg;
  fs::path dir;
  RunManifest manifest;
  std::mutex mutex;

  explicit RunContext(const ExperimentConfig& c) : cfg(c), dir(c.out_dir) {
    fs::create_directories(dir);
    manifest.version = kVersion;
    manifest.config_echo = c.echo;
    manifest.config_echo["experiment"] = kind_to_string(c.kind);
    manifest.root_seed = c.seed;
  }

  int threads() const { return cfg.threads > 0 ? cfg.threads : default_threads(); }

  void note_file(const std::string& rel) {
    ManifestFile f;
    f.path = rel;
    fs::path full = dir / rel;
    f.bytes = fs::file_size(full);
    f.checksum = io::file_checksum(full.string());
    std::lock_guard<std::mutex> lock(mutex);
    manifest.files.push_back(f);
  }
  void note_stream(const std::string& label, long count) {
    std::lock_guard<std::mutex> lock(mutex);
    manifest.rng_streams.emplace_back(label, count);
  }
  void warn(const std::string& message) {
    std::lock_guard<std::mutex> lock(mutex);
    manifest.warnings.push_back(message);
    std::fprintf(stderr, "warning: %s\n", message.c_str());
  }

  std::string path(const std::string& rel) const { return (dir / rel).string(); }

  void write_json(const std::string& rel, const json& j) {
    io::write_text(path(rel), j.dump(2) + "\n");
    note_file(rel);
  }
  void write_csv(const std::string& rel, const std::string& text) {
    io::write_text(path(rel), text);
    note_file(rel);
  }
};

json fit_to_json(const stats::FitReport& rep) {
  json j;
  j["estimate"] = rep.estimate;
  j["std_error"] = rep.std_error;
  if (std::isfinite(rep.statistic)) j["statistic"] = rep.statistic;
  if (std::isfinite(rep.p_value)) j["p_value"] = rep.p_value;
  j["sample_size"] = rep.sample_size;
  if (!rep.note.empty()) j["note"] = rep.note;
  for (const auto& [k, v] : rep.details) j[k] = v;
  return j;
}

std::string points_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "points-%04d.jsonl", index);
  return buf;
}

// shared tail of the two extremal-process experiments: writes per-sample
// point files and the summary fits
void extremal_reports(RunContext& ctx,
                      const std::vector<extremes::ExtremalProcessSample>& samples) {
  for (size_t i = 0; i < samples.size(); ++i) {
    std::string rel = points_name(static_cast<int>(i));
    io::write_points(ctx.path(rel), samples[i]);
    ctx.note_file(rel);
  }

  std::vector<double> exceedances;
  std::string counts_csv = "sample,points,max_h\n";
  for (size_t i = 0; i < samples.size(); ++i) {
    double max_h = -std::numeric_limits<double>::infinity();
    for (const auto& p : samples[i].points) {
      if (p.h >= -1.0) exceedances.push_back(p.h);
      max_h = std::max(max_h, p.h);
    }
    counts_csv += std::to_string(i) + "," + std::to_string(samples[i].points.size()) +
                  "," + io::format_double(max_h) + "\n";
  }
  ctx.write_csv("counts.csv", counts_csv);

  json summary;
  summary["samples"] = samples.size();
  summary["r"] = samples.empty() ? 0.0 : samples[0].r;
  summary["m_eps"] = samples.empty() ? 0.0 : samples[0].m_eps;
  summary["exceedances_above_m_minus_1"] = exceedances.size();
  stats::FitReport fit = stats::exceedance_rate_fit(exceedances, -1.0);
  summary["exceedance_fit"] = fit_to_json(fit);
  if (samples.size() >= 2) {
    stats::FitReport strip =
        stats::strip_ratio_test(samples, -1.0, -0.8, ctx.cfg.n_boot,
                                rng::derive_seed(ctx.cfg.seed, "strip-bootstrap"));
    summary["strip_ratio"] = fit_to_json(strip);
    ctx.note_stream("strip-bootstrap", ctx.cfg.n_boot);
  }
  ctx.write_json("summary.json", summary);
}

void run_gff_extremes(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  spectral::SpectralMultiplier gff = spectral::gff_multiplier(lat, cfg.mass_sq, 0.0);
  double radius = cfg.extraction_radius();

  std::vector<extremes::ExtremalProcessSample> samples(cfg.samples);
  parallel_for(cfg.samples, ctx.threads(), [&](int i) {
    Field phi = spectral::sample_field(
        gff, rng::derive_seed(cfg.seed, "gff-field", static_cast<uint64_t>(i)));
    samples[i] = extremes::extremal_process(phi, radius);
    if (i == 0) {
      io::write_field(ctx.path("field-0000.fld"), phi);
    }
  });
  ctx.note_file("field-0000.fld");
  ctx.note_stream("gff-field", cfg.samples);
  extremal_reports(ctx, samples);
}

void run_sg_extremes(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  SgParams params(cfg.z, cfg.beta, cfg.mass_sq, lat);
  double stiffness = 2.0 * std::fabs(cfg.z) *
                     std::pow(lat.epsilon(), -cfg.beta / (4.0 * M_PI));
  if (stiffness > 50.0 * cfg.mass_sq)
    ctx.warn("stiff vertex: 2|z| eps^{-beta/4pi} = " + io::format_double(stiffness) +
             " exceeds 50*mass_sq; expect slow mixing at this resolution");

  double radius = cfg.extraction_radius();
  int per_chain = (cfg.samples + cfg.chains - 1) / cfg.chains;
  std::vector<extremes::ExtremalProcessSample> samples(
      static_cast<size_t>(per_chain) * cfg.chains);
  std::vector<ChainDiagnostics> diags(cfg.chains);

  parallel_for(cfg.chains, ctx.threads(), [&](int c) {
    MalaOptions opt;
    opt.n_samples = per_chain;
    opt.burn_in = cfg.burn_in;
    opt.thin = cfg.thin;
    int k = 0;
    diags[c] = mala_run(params, opt,
                        rng::derive_seed(cfg.seed, "sg-chain", static_cast<uint64_t>(c)),
                        [&](const Field& phi) {
                          samples[static_cast<size_t>(c) * per_chain + k] =
                              extremes::extremal_process(phi, radius);
                          ++k;
                        });
  });
  samples.resize(cfg.samples);
  ctx.note_stream("sg-chain", cfg.chains);

  std::string chain_csv = "chain,acceptance,autocorr_time,samples,step_size,warning\n";
  for (int c = 0; c < cfg.chains; ++c) {
    chain_csv += std::to_string(c) + "," + io::format_double(diags[c].acceptance_rate) +
                 "," + io::format_double(diags[c].autocorrelation_time) + "," +
                 std::to_string(diags[c].samples_kept) + "," +
                 io::format_double(diags[c].step_size) + "," + diags[c].warning + "\n";
    if (!diags[c].warning.empty())
      ctx.warn("chain " + std::to_string(c) + ": " + diags[c].warning);
  }
  ctx.write_csv("chains.csv", chain_csv);
  extremal_reports(ctx, samples);
}

void run_coupling_xcheck(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  SgParams params(cfg.z, cfg.beta, cfg.mass_sq, lat);

  // MALA side
  std::vector<ObservableSuite> mala_obs;
  MalaOptions opt;
  opt.n_samples = cfg.samples;
  opt.burn_in = cfg.burn_in;
  opt.thin = cfg.thin;
  ChainDiagnostics diag =
      mala_run(params, opt, rng::derive_seed(cfg.seed, "xcheck-mala"),
               [&](const Field& phi) { mala_obs.push_back(observable_suite(params, phi)); });
  ctx.note_stream("xcheck-mala", 1);

  // flow side
  polchinski::FlowOptions fopt;
  fopt.T = cfg.flow_T;
  fopt.dt = cfg.flow_dt;
  fopt.mc_samples = cfg.mc_samples;
  std::vector<ObservableSuite> flow_obs(cfg.samples);
  parallel_for(cfg.samples, ctx.threads(), [&](int i) {
    polchinski::CoupledPath path = polchinski::backward_flow(
        params, fopt, {}, rng::derive_seed(cfg.seed, "xcheck-flow", static_cast<uint64_t>(i)));
    flow_obs[i] = observable_suite(params, path.phi_sg_0);
  });
  ctx.note_stream("xcheck-flow", cfg.samples);

  auto collect = [](const std::vector<ObservableSuite>& obs,
                    double (*pick)(const ObservableSuite&)) {
    std::vector<double> vals;
    vals.reserve(obs.size());
    for (const auto& o : obs) vals.push_back(pick(o));
    return vals;
  };
  auto mean_se = [](const std::vector<double>& vals, double tau) {
    double m = 0.0;
    for (double v : vals) m += v;
    m /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - m) * (v - m);
    var /= std::max<size_t>(1, vals.size() - 1);
    return std::pair<double, double>(m, std::sqrt(2.0 * tau * var / vals.size()));
  };

  json report;
  std::string csv = "observable,mala_mean,mala_se,flow_mean,flow_se,z_score\n";
  struct Item {
    const char* name;
    double (*pick)(const ObservableSuite&);
  };
  const Item items[] = {
      {"mean", [](const ObservableSuite& o) { return o.mean; }},
      {"variance", [](const ObservableSuite& o) { return o.variance; }},
      {"mean_cos", [](const ObservableSuite& o) { return o.mean_cos; }},
      {"max", [](const ObservableSuite& o) { return o.max; }},
  };
  for (const Item& item : items) {
    std::vector<double> mv = collect(mala_obs, item.pick);
    std::vector<double> fv = collect(flow_obs, item.pick);
    double tau_m = integrated_autocorrelation_time(mv);
    auto [mm, ms] = mean_se(mv, tau_m);
    auto [fm, fse] = mean_se(fv, 0.5);  // flow paths are independent
    double zscore = std::fabs(mm - fm) / std::sqrt(ms * ms + fse * fse);
    json row;
    row["mala_mean"] = mm;
    row["mala_se"] = ms;
    row["flow_mean"] = fm;
    row["flow_se"] = fse;
    row["z_score"] = zscore;
    report[item.name] = row;
    csv += std::string(item.name) + "," + io::format_double(mm) + "," +
           io::format_double(ms) + "," + io::format_double(fm) + "," +
           io::format_double(fse) + "," + io::format_double(zscore) + "\n";
  }
  report["mala_acceptance"] = diag.acceptance_rate;
  report["mala_autocorr_time"] = diag.autocorrelation_time;
  ctx.write_json("xcheck.json", report);
  ctx.write_csv("xcheck.csv", csv);
}

void run_decomposition_audit(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  json report;
  std::string csv = "n,s,max_discrepancy\n";
  double worst = 0.0;
  for (double s : cfg.s_grid) {
    double d = spectral::decomposition_identity_check(lat, cfg.mass_sq, s);
    worst = std::max(worst, d);
    csv += std::to_string(cfg.n) + "," + io::format_double(s) + "," +
           io::format_double(d) + "\n";
    report[io::format_double(s)] = d;
  }
  report["max"] = worst;
  ctx.write_json("decomposition.json", report);
  ctx.write_csv("decomposition.csv", csv);
}

void run_polchinski_residual(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  SgParams params(cfg.z, cfg.beta, cfg.mass_sq, lat);
  Field zero(lat);
  json report;
  std::string csv = "t,residual,error_bar,conclusive,method\n";
  for (double t : cfg.t_grid) {
    json row;
    if (cfg.n == 2) {
      Eigen::VectorXd phi = Eigen::VectorXd::Zero(lat.site_count());
      double r = quadrature::polchinski_residual(params, t, phi, 1e-3, 32);
      row["residual"] = r;
      row["method"] = "quadrature";
      csv += io::format_double(t) + "," + io::format_double(r) + ",0,1,quadrature\n";
    } else {
      polchinski::PotentialEstimator est(t, cfg.mc_samples, params);
      polchinski::ResidualEstimate r = polchinski::polchinski_residual(
          est, zero, 0.05 * t, rng::derive_seed(cfg.seed, "residual", 0), 16);
      row["residual"] = r.residual;
      row["error_bar"] = r.error_bar;
      row["conclusive"] = r.conclusive;
      row["method"] = "monte-carlo";
      csv += io::format_double(t) + "," + io::format_double(r.residual) + "," +
             io::format_double(r.error_bar) + "," + (r.conclusive ? "1" : "0") +
             ",monte-carlo\n";
    }
    report[io::format_double(t)] = row;
  }
  ctx.note_stream("residual", static_cast<long>(cfg.t_grid.size()));
  ctx.write_json("residual.json", report);
  ctx.write_csv("residual.csv", csv);
}

void run_level_set_growth(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  spectral::SpectralMultiplier gff = spectral::gff_multiplier(lat, cfg.mass_sq, 0.0);
  double m_eps = extremes::centering(lat.epsilon());

  std::vector<std::vector<long>> sizes(cfg.samples);
  parallel_for(cfg.samples, ctx.threads(), [&](int i) {
    Field phi = spectral::sample_field(
        gff, rng::derive_seed(cfg.seed, "growth-field", static_cast<uint64_t>(i)));
    for (double lambda : cfg.lambda_grid)
      sizes[i].push_back(
          static_cast<long>(extremes::level_set(phi, lambda, m_eps).sites.size()));
  });
  ctx.note_stream("growth-field", cfg.samples);

  stats::GrowthReport growth = stats::level_set_growth_from_sizes(sizes, cfg.lambda_grid);
  std::string csv = "lambda,mean_log_size,nonempty,dropped\n";
  for (const auto& row : growth.rows)
    csv += io::format_double(row.lambda) + "," + io::format_double(row.mean_log_size) +
           "," + std::to_string(row.nonempty) + "," + (row.dropped ? "1" : "0") + "\n";
  ctx.write_csv("growth.csv", csv);
  json report;
  report["slope"] = fit_to_json(growth.slope);
  report["m_eps"] = m_eps;
  ctx.write_json("growth.json", report);
}

void run_near_maxima_geometry(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  TorusLattice lat(cfg.n);
  spectral::SpectralMultiplier gff = spectral::gff_multiplier(lat, cfg.mass_sq, 0.0);
  double m_eps = extremes::centering(lat.epsilon());

  std::vector<std::vector<long>> counts(cfg.samples);
  parallel_for(cfg.samples, ctx.threads(), [&](int i) {
    Field phi = spectral::sample_field(
        gff, rng::derive_seed(cfg.seed, "geometry-field", static_cast<uint64_t>(i)));
    extremes::LevelSet set = extremes::level_set(phi, cfg.lambda, m_eps);
    for (double r : cfg.r_grid)
      counts[i].push_back(extremes::intermediate_pair_count(lat, set, r));
  });
  ctx.note_stream("geometry-field", cfg.samples);

  std::string csv = "r,fraction_with_pairs,mean_pairs\n";
  json report;
  for (size_t ri = 0; ri < cfg.r_grid.size(); ++ri) {
    long with = 0;
    double mean_pairs = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
      with += counts[i][ri] > 0 ? 1 : 0;
      mean_pairs += static_cast<double>(counts[i][ri]);
    }
    mean_pairs /= cfg.samples;
    double frac = static_cast<double>(with) / cfg.samples;
    csv += io::format_double(cfg.r_grid[ri]) + "," + io::format_double(frac) + "," +
           io::format_double(mean_pairs) + "\n";
    report[io::format_double(cfg.r_grid[ri])] = frac;
  }
  report["lambda"] = cfg.lambda;
  ctx.write_csv("geometry.csv", csv);
  ctx.write_json("geometry.json", report);
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["version"] = m.version;
  j["config"] = m.config_echo;
  j["wall_seconds"] = m.wall_seconds;
  j["root_seed"] = m.root_seed;
  json files = json::array();
  for (const auto& f : m.files) {
    json jf;
    jf["path"] = f.path;
    jf["bytes"] = f.bytes;
    jf["fnv1a64"] = f.checksum;
    files.push_back(jf);
  }
  j["files"] = files;
  json streams = json::array();
  for (const auto& [label, count] : m.rng_streams) {
    json js;
    js["label"] = label;
    js["count"] = count;
    streams.push_back(js);
  }
  j["rng_streams"] = streams;
  j["warnings"] = m.warnings;
  return j;
}

}  // namespace

RunManifest run(const ExperimentConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  RunContext ctx(config);
  switch (config.kind) {
    case Kind::GffExtremes: run_gff_extremes(ctx); break;
    case Kind::SgExtremes: run_sg_extremes(ctx); break;
    case Kind::CouplingXcheck: run_coupling_xcheck(ctx); break;
    case Kind::DecompositionAudit: run_decomposition_audit(ctx); break;
    case Kind::PolchinskiResidual: run_polchinski_residual(ctx); break;
    case Kind::LevelSetGrowth: run_level_set_growth(ctx); break;
    case Kind::NearMaximaGeometry: run_near_maxima_geometry(ctx); break;
  }
  // stable listing order regardless of scheduling
  std::sort(ctx.manifest.files.begin(), ctx.manifest.files.end(),
            [](const ManifestFile& a, const ManifestFile& b) { return a.path < b.path; });
  auto t1 = std::chrono::steady_clock::now();
  ctx.manifest.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  io::write_text(ctx.path("manifest.json"), manifest_to_json(ctx.manifest).dump(2) + "\n");
  return ctx.manifest;
}

bool verify_manifest(const std::string& manifest_path, std::string& message) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest: " + manifest_path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError("manifest is not valid JSON");
  fs::path base = fs::path(manifest_path).parent_path();
  long checked = 0;
  for (const auto& f : j.at("files")) {
    fs::path p = base / f.at("path").get<std::string>();
    if (!fs::exists(p)) {
      message = "missing file: " + p.string();
      return false;
    }
    uint64_t actual = io::file_checksum(p.string());
    if (actual != f.at("fnv1a64").get<uint64_t>()) {
      message = "checksum mismatch: " + p.string();
      return false;
    }
    ++checked;
  }
  message = "verified " + std::to_string(checked) + " files";
  return true;
}

}  // namespace sgx::experiments
