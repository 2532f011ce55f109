#include "episcan/experiments.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "episcan/errors.hpp"
#include "episcan/parallel.hpp"
#include "episcan/simulate.hpp"

namespace episcan::xp {

namespace {

constexpr std::uint64_t kFixedGenotypeSub = 0x800000;  // correlated, drawn once

double binomial_se(double phat, std::size_t n) {
  return std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
}

void validate_study(const StudyConfig& c) {
  if (c.replicates < 1)
    throw_error(ErrorCode::InvalidInput, "experiment: replicates >= 1 required");
  if (c.fst.empty())
    throw_error(ErrorCode::InvalidInput, "experiment: need at least one fst");
  for (double t : c.fst)
    if (!(t > 0.0 && t <= 1.0))
      throw_error(ErrorCode::InvalidInput, "experiment: fst values in (0,1]");
}

ScanConfig scan_config_for(const StudyConfig& c, double fst) {
  ScanConfig sc;
  sc.family = c.family;
  sc.alpha = c.alpha;
  sc.stage1_threshold = fst;
  sc.quality = c.quality;
  sc.k1_mode = c.k1_mode;
  sc.threads = 1;  // replicates are the parallel axis
  return sc;
}

GenotypeMatrix draw_genotypes(const StudyConfig& c, int causal_count,
                              rng::Stream& stream) {
  if (c.markers == MarkerMode::Independent) {
    sim::IndependentGenotypeSpec gs;
    gs.n = c.n;
    gs.p = c.p;
    gs.maf_low = c.maf_low;
    gs.maf_high = c.maf_high;
    gs.causal_maf = c.causal_maf;
    gs.causal_count = causal_count;
    return sim::simulate_genotypes_independent(gs, stream);
  }
  sim::CorrelatedGenotypeSpec gs;
  gs.n = c.n;
  gs.p = c.p;
  gs.block_rho = c.block_rho;
  gs.causal_rho = c.causal_rho;
  gs.causal_maf1 = c.causal_maf1;
  gs.causal_maf2 = c.causal_maf2;
  gs.maf_low = c.maf_low;
  gs.maf_high = c.maf_high;
  return sim::simulate_genotypes_correlated(gs, stream);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t m = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(m);
  mb /= static_cast<double>(m);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

const char* marker_mode_name(MarkerMode m) {
  return m == MarkerMode::Independent ? "independent" : "correlated";
}

const char* main_effects_name(MainEffects m) {
  switch (m) {
    case MainEffects::None:
      return "none";
    case MainEffects::Both:
      return "both";
    case MainEffects::Opposite:
      return "opposite";
  }
  return "?";
}

std::vector<double> default_beta3_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.05 * i);
  return grid;
}

FwerReport estimate_fwer(const StudyConfig& config) {
  validate_study(config);
  FwerReport report;
  report.config = config;

  GenotypeMatrix fixed_geno;
  if (config.markers == MarkerMode::Correlated) {
    rng::Stream gs = rng::make_stream(config.seed, rng::Purpose::Genotype, 0,
                                      kFixedGenotypeSub);
    fixed_geno = draw_genotypes(config, 0, gs);
  }

  std::size_t n_cells = config.fst.size();
  std::size_t reps = config.replicates;
  for (std::size_t c = 0; c < n_cells; ++c) {
    ScanConfig sc = scan_config_for(config, config.fst[c]);
    std::vector<std::uint8_t> rejected(reps, 0);
    parallel_for(reps, config.threads, [&](std::size_t r, unsigned) {
      std::uint64_t rep = config.replicate_offset + r;
      sim::PhenotypeSpec ps;  // full null: beta1 = beta2 = beta3 = 0
      ps.family = config.family;

      const GenotypeMatrix* geno = &fixed_geno;
      GenotypeMatrix local;
      if (config.markers == MarkerMode::Independent) {
        rng::Stream gs = rng::make_stream(config.seed, rng::Purpose::Genotype,
                                          rep, c);
        local = draw_genotypes(config, 0, gs);
        geno = &local;
      }
      rng::Stream phs = rng::make_stream(config.seed, rng::Purpose::Phenotype,
                                         rep, c);
      Outcome outcome = sim::simulate_phenotype(*geno, ps, phs);
      ScanReport scan = run_two_stage(*geno, outcome, sc);
      rejected[r] = scan.any_rejection ? 1 : 0;
    });

    FwerCell cell;
    cell.fst = config.fst[c];
    cell.replicates = reps;
    for (std::uint8_t v : rejected) cell.rejections += v;
    cell.estimate = static_cast<double>(cell.rejections) / static_cast<double>(reps);
    cell.se = binomial_se(cell.estimate, reps);
    report.cells.push_back(cell);
  }
  return report;
}

PowerReport power_curve(const PowerConfig& config) {
  validate_study(config.base);
  if (config.beta3_grid.empty())
    throw_error(ErrorCode::InvalidInput, "power: empty beta3 grid");

  PowerReport report;
  report.config = config;

  const StudyConfig& base = config.base;
  double main = 0.0;
  if (config.main_effects == MainEffects::Both) main = config.main_effect_size;
  if (config.main_effects == MainEffects::Opposite) main = -config.main_effect_size;

  GenotypeMatrix fixed_geno;
  if (base.markers == MarkerMode::Correlated) {
    rng::Stream gs = rng::make_stream(base.seed, rng::Purpose::Genotype, 0,
                                      kFixedGenotypeSub);
    fixed_geno = draw_genotypes(base, 2, gs);
  }

  std::size_t reps = base.replicates;
  std::size_t n_beta = config.beta3_grid.size();
  for (std::size_t f = 0; f < base.fst.size(); ++f) {
    for (std::size_t b = 0; b < n_beta; ++b) {
      std::size_t cell_index = f * n_beta + b;
      ScanConfig sc = scan_config_for(base, base.fst[f]);
      std::vector<std::uint8_t> success(reps, 0);
      parallel_for(reps, base.threads, [&](std::size_t r, unsigned) {
        std::uint64_t rep = base.replicate_offset + r;
        sim::PhenotypeSpec ps;
        ps.family = base.family;
        ps.beta1 = main;
        ps.beta2 = main;
        ps.beta3 = config.beta3_grid[b];
        ps.causal_a = 0;
        ps.causal_b = 1;

        const GenotypeMatrix* geno = &fixed_geno;
        GenotypeMatrix local;
        if (base.markers == MarkerMode::Independent) {
          rng::Stream gs = rng::make_stream(base.seed, rng::Purpose::Genotype,
                                            rep, cell_index);
          local = draw_genotypes(base, 2, gs);
          geno = &local;
        }
        rng::Stream phs = rng::make_stream(base.seed, rng::Purpose::Phenotype,
                                           rep, cell_index);
        Outcome outcome = sim::simulate_phenotype(*geno, ps, phs);
        ScanReport scan = run_two_stage(*geno, outcome, sc);
        for (const PairRecord& rec : scan.pairs) {
          if (rec.k == 0 && rec.l == 1) {
            success[r] = rec.significant ? 1 : 0;
            break;
          }
        }
      });

      PowerCell cell;
      cell.fst = base.fst[f];
      cell.beta3 = config.beta3_grid[b];
      cell.replicates = reps;
      for (std::uint8_t v : success) cell.successes += v;
      cell.power = static_cast<double>(cell.successes) / static_cast<double>(reps);
      cell.se = binomial_se(cell.power, reps);
      report.cells.push_back(cell);
    }
  }
  return report;
}

IndependenceReport independence_check(const IndependenceConfig& config) {
  if (config.replicates < 3)
    throw_error(ErrorCode::InvalidInput, "independence: replicates >= 3 required");

  IndependenceReport report;
  report.config = config;

  std::size_t reps = config.replicates;
  std::vector<double> t_s1k(reps), t_s1j(reps), t_s2(reps);
  std::vector<std::uint8_t> ok(reps, 0);

  ScanConfig sc;
  sc.family = config.family;
  sc.standardize = true;
  sc.stage1_threshold = 1.0;

  parallel_for(reps, config.threads, [&](std::size_t r, unsigned) {
    std::uint64_t rep = config.replicate_offset + r;
    sim::IndependentGenotypeSpec gs;
    gs.n = config.n;
    gs.p = 3;
    gs.maf_low = config.maf_low;
    gs.maf_high = config.maf_high;
    rng::Stream gst = rng::make_stream(config.seed, rng::Purpose::Genotype, rep);
    GenotypeMatrix geno = sim::simulate_genotypes_independent(gs, gst);

    sim::PhenotypeSpec ps;  // full null
    ps.family = config.family;
    rng::Stream phs = rng::make_stream(config.seed, rng::Purpose::Phenotype, rep);
    Outcome outcome = sim::simulate_phenotype(geno, ps, phs);

    ModelStat s1k = stage_one_statistic(geno, outcome, sc, 0);
    ModelStat s1j = stage_one_statistic(geno, outcome, sc, 2);
    ModelStat s2 = stage_two_statistic(geno, outcome, sc, 0, 1);
    if (!s1k.ok || !s1j.ok || !s2.ok) return;
    t_s1k[r] = s1k.wald.z;
    t_s1j[r] = s1j.wald.z;
    t_s2[r] = s2.wald.z;
    ok[r] = 1;
  });

  std::vector<double> a, b, c;
  for (std::size_t r = 0; r < reps; ++r) {
    if (!ok[r]) continue;
    a.push_back(t_s1k[r]);
    b.push_back(t_s1j[r]);
    c.push_back(t_s2[r]);
  }
  report.replicates_used = a.size();
  if (report.replicates_used < 3)
    throw_error(ErrorCode::InvalidInput, "independence: too many failed fits");

  report.corr_s1k_s2 = pearson(a, c);
  report.corr_s1j_s2 = pearson(b, c);
  report.corr_s1k_s1j = pearson(a, b);

  // Mardia's multivariate skewness and kurtosis of the centered triple,
  // reported as diagnostics (asymptotically 0 and d(d+2) = 15 under
  // joint normality).
  std::size_t m = report.replicates_used;
  double mean[3] = {0, 0, 0};
  for (std::size_t i = 0; i < m; ++i) {
    mean[0] += a[i];
    mean[1] += b[i];
    mean[2] += c[i];
  }
  for (double& v : mean) v /= static_cast<double>(m);
  linalg::SymMat cov(3);
  for (std::size_t i = 0; i < m; ++i) {
    double d[3] = {a[i] - mean[0], b[i] - mean[1], c[i] - mean[2]};
    for (int u = 0; u < 3; ++u)
      for (int v = u; v < 3; ++v)
        cov.set_symmetric(u, v, cov(u, v) + d[u] * d[v] / static_cast<double>(m));
  }
  linalg::SymMat l;
  if (linalg::cholesky(cov, l)) {
    linalg::SymMat cinv = linalg::chol_inverse(l);
    std::vector<std::array<double, 3>> dev(m);
    for (std::size_t i = 0; i < m; ++i)
      dev[i] = {a[i] - mean[0], b[i] - mean[1], c[i] - mean[2]};
    auto quad = [&](const std::array<double, 3>& x, const std::array<double, 3>& y) {
      double s = 0.0;
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) s += x[u] * cinv(u, v) * y[v];
      return s;
    };
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      b2 += std::pow(quad(dev[i], dev[i]), 2.0);
      for (std::size_t j = 0; j < m; ++j) b1 += std::pow(quad(dev[i], dev[j]), 3.0);
    }
    report.mardia_skewness = b1 / (static_cast<double>(m) * static_cast<double>(m));
    report.mardia_kurtosis = b2 / static_cast<double>(m);
  }
  return report;
}

MarginalReport marginal_scan_study(const MarginalConfig& config) {
  if (!(config.beta_step > 0.0) || !(config.beta_min <= config.beta_max))
    throw_error(ErrorCode::InvalidInput, "marginal: bad beta grid");

  MarginalReport report;
  report.config = config;
  std::vector<double> grid;
  for (double b = config.beta_min; b <= config.beta_max + 1e-12;
       b += config.beta_step)
    grid.push_back(b);
  report.rows.resize(grid.size());

  ScanConfig sc;
  sc.family = config.family;

  parallel_for(grid.size(), config.threads, [&](std::size_t g, unsigned) {
    sim::IndependentGenotypeSpec gs;
    gs.n = config.n;
    gs.p = 2;
    gs.causal_count = 2;  // both markers at the fixed study MAF
    gs.causal_maf = config.marker_maf;
    rng::Stream gst = rng::make_stream(config.seed, rng::Purpose::Genotype, g);
    GenotypeMatrix geno = sim::simulate_genotypes_independent(gs, gst);

    sim::PhenotypeSpec ps;
    ps.family = config.family;
    ps.beta3 = grid[g];
    rng::Stream phs = rng::make_stream(config.seed, rng::Purpose::Phenotype, g);
    Outcome outcome = sim::simulate_phenotype(geno, ps, phs);

    ModelStat s = stage_one_statistic(geno, outcome, sc, 0);
    report.rows[g].beta3 = grid[g];
    report.rows[g].z =
        s.ok ? s.wald.z : std::numeric_limits<double>::quiet_NaN();
  });
  return report;
}

}  // namespace episcan::xp
