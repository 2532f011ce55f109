#include "episcan/two_stage.hpp"

#include <algorithm>
#include <cmath>

#include "episcan/cox.hpp"
#include "episcan/errors.hpp"
#include "episcan/kernels.hpp"
#include "episcan/parallel.hpp"

namespace episcan {

namespace ker = episcan::kernels;

const char* quality_flag_name(QualityFlag f) {
  switch (f) {
    case QualityFlag::Ok:
      return "ok";
    case QualityFlag::LowVariance:
      return "low_variance";
    case QualityFlag::LowMaf:
      return "low_maf";
    case QualityFlag::PairCollinear:
      return "pair_collinear";
    case QualityFlag::ProductCollinear:
      return "product_collinear";
    case QualityFlag::FitFailed:
      return "fit_failed";
  }
  return "?";
}

double ScanConfig::threshold_for(std::size_t marker) const {
  if (std::holds_alternative<double>(stage1_threshold))
    return std::get<double>(stage1_threshold);
  return std::get<std::vector<double>>(stage1_threshold)[marker];
}

namespace {

void validate_scan_inputs(const GenotypeMatrix& geno, const Outcome& outcome,
                          const ScanConfig& config) {
  if (geno.n() == 0 || geno.p() == 0)
    throw_error(ErrorCode::InvalidInput, "scan: empty genotype matrix");
  check_outcome_family(outcome, config.family);
  if (outcome_size(outcome) != geno.n())
    throw_error(ErrorCode::AlignmentError,
                "scan: outcome rows != genotype rows");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0))
    throw_error(ErrorCode::InvalidInput, "scan: alpha must be in (0,1]");
  if (std::holds_alternative<double>(config.stage1_threshold)) {
    double t = std::get<double>(config.stage1_threshold);
    if (!(t > 0.0 && t <= 1.0))
      throw_error(ErrorCode::InvalidInput, "scan: stage-1 threshold in (0,1]");
  } else {
    const auto& v = std::get<std::vector<double>>(config.stage1_threshold);
    if (v.size() != geno.p())
      throw_error(ErrorCode::InvalidInput,
                  "scan: one stage-1 threshold per marker required");
    for (double t : v)
      if (!(t > 0.0 && t <= 1.0))
        throw_error(ErrorCode::InvalidInput, "scan: stage-1 threshold in (0,1]");
  }
  if (config.fixed_covariates.size() != config.n_fixed * geno.n())
    throw_error(ErrorCode::InvalidInput, "scan: fixed covariate size mismatch");
  const QualityConfig& q = config.quality;
  if (!(q.r2_max > 0.0 && q.r2_max <= 1.0) || !(q.min_variance >= 0.0) ||
      !(q.min_maf >= 0.0 && q.min_maf < 0.5))
    throw_error(ErrorCode::InvalidInput, "scan: bad quality config");
}

// Marker columns as the models see them: raw allele counts, or centered and
// scaled copies when config.standardize is set.
struct MarkerData {
  const GenotypeMatrix* geno = nullptr;
  bool standardized = false;
  std::vector<double> std_cols;

  const double* col(std::size_t j) const {
    return standardized ? std_cols.data() + j * geno->n() : geno->col(j);
  }
};

MarkerData make_marker_data(const GenotypeMatrix& geno, const ScanConfig& config) {
  MarkerData md;
  md.geno = &geno;
  md.standardized = config.standardize;
  if (!config.standardize) return md;
  std::size_t n = geno.n();
  md.std_cols.resize(n * geno.p());
  for (std::size_t j = 0; j < geno.p(); ++j) {
    const double* src = geno.col(j);
    double* dst = md.std_cols.data() + j * n;
    double mean = geno.mean(j);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = src[i] - mean;
      dst[i] = d;
      ss += d * d;
    }
    if (n > 1 && ss > 0.0) {
      double sd = std::sqrt(ss / static_cast<double>(n - 1));
      for (std::size_t i = 0; i < n; ++i) dst[i] /= sd;
    }
  }
  return md;
}

struct FitContext {
  const GenotypeMatrix* geno = nullptr;
  const ScanConfig* config = nullptr;
  MarkerData markers;
  // GLM families
  const std::vector<double>* y = nullptr;
  const std::vector<double>* offsets = nullptr;
  glm::Family glm_family;
  bool is_cox = false;
  // Cox
  const SurvivalOutcome* surv = nullptr;
  std::vector<std::uint32_t> cox_order;
};

FitContext make_context(const GenotypeMatrix& geno, const Outcome& outcome,
                        const ScanConfig& config) {
  FitContext ctx;
  ctx.geno = &geno;
  ctx.config = &config;
  ctx.markers = make_marker_data(geno, config);
  switch (config.family) {
    case ModelFamily::Linear:
      ctx.y = &std::get<ContinuousOutcome>(outcome).y;
      ctx.glm_family = glm::Family::gaussian();
      break;
    case ModelFamily::Logistic:
      ctx.y = &std::get<BinaryOutcome>(outcome).y;
      ctx.glm_family = glm::Family::logistic();
      break;
    case ModelFamily::Poisson: {
      const auto& c = std::get<CountOutcome>(outcome);
      ctx.y = &c.y;
      ctx.offsets = &c.offset;
      ctx.glm_family = glm::Family::poisson_offset();
      break;
    }
    case ModelFamily::Cox: {
      ctx.is_cox = true;
      ctx.surv = &std::get<SurvivalOutcome>(outcome);
      cox::SurvivalData probe;
      probe.n = ctx.surv->time.size();
      probe.q = 0;
      probe.time = ctx.surv->time;
      probe.event = ctx.surv->event;
      ctx.cox_order = cox::sort_order(probe);
      break;
    }
  }
  return ctx;
}

// Per-worker scratch. The constant parts (intercept, fixed covariates,
// time/event) are laid out once; marker columns are overwritten per item.
struct Workspace {
  glm::DesignMatrix design;
  cox::SurvivalData sdata;
  std::size_t glm_marker_cols = 0;  // shape the buffers were built for
  std::size_t cox_marker_cols = 0;
};

void prepare_glm(const FitContext& ctx, Workspace& ws, std::size_t marker_cols) {
  if (ws.glm_marker_cols == marker_cols && ws.design.rows() == ctx.geno->n())
    return;
  std::size_t n = ctx.geno->n();
  std::size_t m = ctx.config->n_fixed;
  std::vector<glm::ColumnRole> roles;
  roles.push_back(glm::ColumnRole::Intercept);
  for (std::size_t j = 0; j < m; ++j) roles.push_back(glm::ColumnRole::Fixed);
  for (std::size_t j = 0; j < marker_cols; ++j)
    roles.push_back(j == 2 ? glm::ColumnRole::Interaction
                           : glm::ColumnRole::Tested);
  ws.design.resize(n, 1 + m + marker_cols, roles);
  for (std::size_t j = 0; j < m; ++j)
    std::copy_n(ctx.config->fixed_covariates.data() + j * n, n,
                ws.design.col(1 + j));
  ws.glm_marker_cols = marker_cols;
}

void prepare_cox(const FitContext& ctx, Workspace& ws, std::size_t marker_cols) {
  if (ws.cox_marker_cols == marker_cols && ws.sdata.n == ctx.geno->n()) return;
  std::size_t n = ctx.geno->n();
  std::size_t m = ctx.config->n_fixed;
  ws.sdata.n = n;
  ws.sdata.q = m + marker_cols;
  ws.sdata.time = ctx.surv->time;
  ws.sdata.event = ctx.surv->event;
  ws.sdata.x.assign(n * ws.sdata.q, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    std::copy_n(ctx.config->fixed_covariates.data() + j * n, n, ws.sdata.col(j));
  ws.cox_marker_cols = marker_cols;
}

ModelStat finish_glm(const FitContext& ctx, Workspace& ws) {
  ModelStat out;
  try {
    std::span<const double> offsets;
    if (ctx.offsets) offsets = {ctx.offsets->data(), ctx.offsets->size()};
    glm::FitResult fit =
        glm::fit_glm(ws.design, {ctx.y->data(), ctx.y->size()}, ctx.glm_family,
                     offsets, ctx.config->control);
    if (!fit.converged) {
      out.flag = QualityFlag::FitFailed;
      return out;
    }
    out.wald = glm::wald_test(fit, ws.design.cols() - 1);
    out.ok = true;
  } catch (const Error&) {
    out.flag = QualityFlag::FitFailed;
  }
  return out;
}

ModelStat finish_cox(const FitContext& ctx, Workspace& ws) {
  ModelStat out;
  try {
    glm::FitResult fit = cox::fit_cox(ws.sdata, ctx.cox_order, ctx.config->control);
    if (!fit.converged) {
      out.flag = QualityFlag::FitFailed;
      return out;
    }
    out.wald = cox::cox_wald_test(fit, ws.sdata.q - 1);
    out.ok = true;
  } catch (const Error&) {
    out.flag = QualityFlag::FitFailed;
  }
  return out;
}

ModelStat fit_marker_model(const FitContext& ctx, Workspace& ws, std::size_t k) {
  std::size_t n = ctx.geno->n();
  if (ctx.is_cox) {
    prepare_cox(ctx, ws, 1);
    std::copy_n(ctx.markers.col(k), n, ws.sdata.col(ws.sdata.q - 1));
    return finish_cox(ctx, ws);
  }
  prepare_glm(ctx, ws, 1);
  std::copy_n(ctx.markers.col(k), n, ws.design.col(ws.design.cols() - 1));
  return finish_glm(ctx, ws);
}

ModelStat fit_pair_model(const FitContext& ctx, Workspace& ws, std::size_t k,
                         std::size_t l) {
  std::size_t n = ctx.geno->n();
  const double* xk = ctx.markers.col(k);
  const double* xl = ctx.markers.col(l);
  if (ctx.is_cox) {
    prepare_cox(ctx, ws, 3);
    std::size_t q = ws.sdata.q;
    std::copy_n(xk, n, ws.sdata.col(q - 3));
    std::copy_n(xl, n, ws.sdata.col(q - 2));
    ker::mul(ws.sdata.col(q - 1), xk, xl, n);
    return finish_cox(ctx, ws);
  }
  prepare_glm(ctx, ws, 3);
  std::size_t q = ws.design.cols();
  std::copy_n(xk, n, ws.design.col(q - 3));
  std::copy_n(xl, n, ws.design.col(q - 2));
  ker::mul(ws.design.col(q - 1), xk, xl, n);
  return finish_glm(ctx, ws);
}

QualityCheck quality_check_impl(const GenotypeMatrix& geno, std::size_t k,
                                std::size_t l, const QualityConfig& config,
                                std::vector<double>& product) {
  std::size_t n = geno.n();
  double vk = geno.variance(k), vl = geno.variance(l);
  if (vk < config.min_variance || vl < config.min_variance)
    return {false, QualityFlag::LowVariance};
  if (geno.maf(k) < config.min_maf || geno.maf(l) < config.min_maf)
    return {false, QualityFlag::LowMaf};

  product.resize(n);
  ker::mul(product.data(), geno.col(k), geno.col(l), n);
  double inv_n = 1.0 / static_cast<double>(n);
  double mp = ker::sum(product.data(), n) * inv_n;
  double vp = ker::dot(product.data(), product.data(), n) * inv_n - mp * mp;
  if (vp < config.min_variance) return {false, QualityFlag::LowVariance};

  double mk = geno.mean(k), ml = geno.mean(l);
  double ckl = ker::dot(geno.col(k), geno.col(l), n) * inv_n - mk * ml;
  if (ckl * ckl >= config.r2_max * vk * vl)
    return {false, QualityFlag::PairCollinear};

  double ckp = ker::dot(geno.col(k), product.data(), n) * inv_n - mk * mp;
  double clp = ker::dot(geno.col(l), product.data(), n) * inv_n - ml * mp;
  if (ckp * ckp >= config.r2_max * vk * vp ||
      clp * clp >= config.r2_max * vl * vp)
    return {false, QualityFlag::ProductCollinear};

  return {true, QualityFlag::Ok};
}

std::size_t deterministic_k1(const GenotypeMatrix& geno, const ScanConfig& config) {
  double sum_thr = 0.0;
  for (std::size_t j = 0; j < geno.p(); ++j) sum_thr += config.threshold_for(j);
  double k1 = std::ceil(sum_thr * sum_thr);
  return k1 < 1.0 ? 1 : static_cast<std::size_t>(k1);
}

}  // namespace

QualityCheck quality_check(const GenotypeMatrix& geno, std::size_t k,
                           std::size_t l, const QualityConfig& config) {
  if (k == l || k >= geno.p() || l >= geno.p())
    throw_error(ErrorCode::InvalidInput, "quality_check: need distinct markers");
  std::vector<double> scratch;
  return quality_check_impl(geno, k, l, config, scratch);
}

ScreenResult stage_one_screen(const GenotypeMatrix& geno, const Outcome& outcome,
                              const ScanConfig& config) {
  validate_scan_inputs(geno, outcome, config);
  FitContext ctx = make_context(geno, outcome, config);

  std::size_t p = geno.p();
  ScreenResult result;
  result.markers.resize(p);

  unsigned threads = std::max(1u, config.threads);
  std::vector<Workspace> scratch(threads);
  parallel_for(p, threads, [&](std::size_t j, unsigned w) {
    MarkerScreen& m = result.markers[j];
    m.index = static_cast<std::uint32_t>(j);
    m.threshold = config.threshold_for(j);
    if (geno.variance(j) < config.quality.min_variance) {
      m.flag = QualityFlag::LowVariance;
      return;
    }
    if (geno.maf(j) < config.quality.min_maf) {
      m.flag = QualityFlag::LowMaf;
      return;
    }
    ModelStat stat = fit_marker_model(ctx, scratch[w], j);
    if (!stat.ok) {
      m.flag = QualityFlag::FitFailed;
      return;
    }
    m.z = stat.wald.z;
    m.p = stat.wald.p_value;
    m.passed = (m.threshold >= 1.0) || (m.p < m.threshold);
  });

  for (const MarkerScreen& m : result.markers)
    if (m.passed) result.selected.push_back(m.index);
  return result;
}

ScanReport stage_two_scan(const GenotypeMatrix& geno, const Outcome& outcome,
                          const ScreenResult& screen, const ScanConfig& config) {
  validate_scan_inputs(geno, outcome, config);
  FitContext ctx = make_context(geno, outcome, config);

  ScanReport report;
  report.screen = screen;

  const auto& sel = screen.selected;
  std::size_t s = sel.size();
  std::size_t n_pairs = s >= 2 ? s * (s - 1) / 2 : 0;
  report.pairs.resize(n_pairs);
  {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a + 1; b < s; ++b) {
        report.pairs[idx].k = sel[a];
        report.pairs[idx].l = sel[b];
        ++idx;
      }
  }

  unsigned threads = std::max(1u, config.threads);
  std::vector<Workspace> scratch(threads);
  std::vector<std::vector<double>> products(threads);
  parallel_for(n_pairs, threads, [&](std::size_t i, unsigned w) {
    PairRecord& rec = report.pairs[i];
    QualityCheck qc =
        quality_check_impl(geno, rec.k, rec.l, config.quality, products[w]);
    if (!qc.pass) {
      rec.flag = qc.reason;
      return;
    }
    ModelStat stat = fit_pair_model(ctx, scratch[w], rec.k, rec.l);
    if (!stat.ok) {
      rec.flag = QualityFlag::FitFailed;
      return;
    }
    rec.estimate = stat.wald.estimate;
    rec.z = stat.wald.z;
    rec.raw_p = stat.wald.p_value;
  });

  std::size_t quality_passing = 0, tested = 0;
  for (const PairRecord& rec : report.pairs) {
    if (rec.flag == QualityFlag::Ok || rec.flag == QualityFlag::FitFailed)
      ++quality_passing;
    if (rec.tested()) ++tested;
  }
  report.screen.k1 = quality_passing;

  report.k1_effective = config.k1_mode == K1Mode::Observed
                            ? tested
                            : deterministic_k1(geno, config);
  if (report.k1_effective >= 1) {
    double k1 = static_cast<double>(report.k1_effective);
    report.alpha2 = config.alpha / k1;
    for (PairRecord& rec : report.pairs) {
      if (!rec.tested()) continue;
      rec.corrected_p = std::min(1.0, rec.raw_p * k1);
      rec.significant = report.alpha2 >= 1.0 ? std::isfinite(rec.raw_p)
                                             : rec.raw_p < report.alpha2;
      report.any_rejection = report.any_rejection || rec.significant;
    }
  }
  return report;
}

ScanReport run_two_stage(const GenotypeMatrix& geno, const Outcome& outcome,
                         const ScanConfig& config) {
  ScreenResult screen = stage_one_screen(geno, outcome, config);
  return stage_two_scan(geno, outcome, screen, config);
}

ModelStat stage_one_statistic(const GenotypeMatrix& geno, const Outcome& outcome,
                              const ScanConfig& config, std::size_t marker) {
  validate_scan_inputs(geno, outcome, config);
  if (marker >= geno.p())
    throw_error(ErrorCode::InvalidInput, "stage_one_statistic: marker out of range");
  FitContext ctx = make_context(geno, outcome, config);
  Workspace ws;
  return fit_marker_model(ctx, ws, marker);
}

ModelStat stage_two_statistic(const GenotypeMatrix& geno, const Outcome& outcome,
                              const ScanConfig& config, std::size_t k,
                              std::size_t l) {
  validate_scan_inputs(geno, outcome, config);
  if (k >= geno.p() || l >= geno.p() || k == l)
    throw_error(ErrorCode::InvalidInput, "stage_two_statistic: bad pair");
  FitContext ctx = make_context(geno, outcome, config);
  Workspace ws;
  return fit_pair_model(ctx, ws, k, l);
}

}  // namespace episcan
