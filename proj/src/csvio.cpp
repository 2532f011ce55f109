#include "episcan/csvio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "episcan/errors.hpp"

namespace episcan::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw_error(ErrorCode::ParseError,
              path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& path, std::size_t line, std::size_t col,
                    const std::string& token) {
  std::string t = strip(token);
  if (t.empty())
    parse_fail(path, line, "empty value in column " + std::to_string(col));
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (errno != 0 || end == t.c_str() || *end != '\0')
    parse_fail(path, line,
               "cannot parse '" + t + "' in column " + std::to_string(col));
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::ParseError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && strip(lines.back()).empty()) lines.pop_back();
  return lines;
}

class CsvWriter {
public:
  explicit CsvWriter(const std::string& path) : path_(path), out_(path) {
    if (!out_) throw_error(ErrorCode::ParseError, "cannot write " + path);
  }
  ~CsvWriter() { out_.flush(); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void finish() {
    out_.flush();
    if (!out_) throw_error(ErrorCode::ParseError, "write failed: " + path_);
  }

private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

GenotypeMatrix read_genotype_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 2)
    throw_error(ErrorCode::ParseError, path + ": need a header and data rows");
  std::vector<std::string> names;
  for (const std::string& h : split_csv_line(lines[0])) names.push_back(strip(h));
  std::size_t p = names.size();
  std::size_t n = lines.size() - 1;

  std::vector<double> data(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t line_no = r + 2;
    std::vector<std::string> cells = split_csv_line(lines[r + 1]);
    if (cells.size() != p)
      parse_fail(path, line_no,
                 "expected " + std::to_string(p) + " entries, got " +
                     std::to_string(cells.size()));
    for (std::size_t j = 0; j < p; ++j) {
      double v = parse_double(path, line_no, j + 1, cells[j]);
      if (v != 0.0 && v != 1.0 && v != 2.0)
        parse_fail(path, line_no,
                   "genotype entry '" + strip(cells[j]) + "' in column " +
                       std::to_string(j + 1) + " is not 0/1/2");
      data[j * n + r] = v;
    }
  }
  return GenotypeMatrix(n, p, std::move(data), std::move(names));
}

void write_genotype_csv(const std::string& path, const GenotypeMatrix& geno) {
  CsvWriter w(path);
  std::vector<std::string> header;
  for (std::size_t j = 0; j < geno.p(); ++j) header.push_back(geno.name(j));
  w.row(header);
  std::vector<std::string> cells(geno.p());
  for (std::size_t i = 0; i < geno.n(); ++i) {
    for (std::size_t j = 0; j < geno.p(); ++j)
      cells[j] = std::to_string(static_cast<int>(geno.at(i, j)));
    w.row(cells);
  }
  w.finish();
}

CovariateData read_covariates_csv(const std::string& path,
                                  std::size_t expected_rows) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 2)
    throw_error(ErrorCode::ParseError, path + ": need a header and data rows");
  CovariateData cov;
  for (const std::string& h : split_csv_line(lines[0]))
    cov.names.push_back(strip(h));
  cov.m = cov.names.size();
  cov.n = lines.size() - 1;
  if (cov.n != expected_rows)
    throw_error(ErrorCode::AlignmentError,
                path + ": " + std::to_string(cov.n) + " rows, expected " +
                    std::to_string(expected_rows));
  cov.data.resize(cov.n * cov.m);
  for (std::size_t r = 0; r < cov.n; ++r) {
    std::vector<std::string> cells = split_csv_line(lines[r + 1]);
    if (cells.size() != cov.m)
      parse_fail(path, r + 2, "ragged covariate row");
    for (std::size_t j = 0; j < cov.m; ++j)
      cov.data[j * cov.n + r] = parse_double(path, r + 2, j + 1, cells[j]);
  }
  return cov;
}

Outcome read_phenotype_csv(const std::string& path, ModelFamily family) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 2)
    throw_error(ErrorCode::ParseError, path + ": need a header and data rows");
  std::vector<std::string> header = split_csv_line(lines[0]);
  for (std::string& h : header) h = strip(h);

  auto expect_header = [&](const std::vector<std::string>& want) {
    if (header != want) {
      std::string msg = "phenotype header for family '";
      msg += model_family_name(family);
      msg += "' must be '";
      for (std::size_t i = 0; i < want.size(); ++i)
        msg += (i ? "," : "") + want[i];
      msg += "'";
      parse_fail(path, 1, msg);
    }
  };

  std::size_t n = lines.size() - 1;
  switch (family) {
    case ModelFamily::Linear: {
      expect_header({"y"});
      ContinuousOutcome out;
      out.y.resize(n);
      for (std::size_t r = 0; r < n; ++r)
        out.y[r] = parse_double(path, r + 2, 1, lines[r + 1]);
      return out;
    }
    case ModelFamily::Logistic: {
      expect_header({"y"});
      BinaryOutcome out;
      out.y.resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        double v = parse_double(path, r + 2, 1, lines[r + 1]);
        if (v != 0.0 && v != 1.0)
          parse_fail(path, r + 2, "logistic outcome must be 0/1");
        out.y[r] = v;
      }
      return out;
    }
    case ModelFamily::Poisson: {
      expect_header({"y", "offset"});
      CountOutcome out;
      out.y.resize(n);
      out.offset.resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::string> cells = split_csv_line(lines[r + 1]);
        if (cells.size() != 2) parse_fail(path, r + 2, "expected y,offset");
        out.y[r] = parse_double(path, r + 2, 1, cells[0]);
        out.offset[r] = parse_double(path, r + 2, 2, cells[1]);
        if (!(out.y[r] >= 0.0) || std::floor(out.y[r]) != out.y[r])
          parse_fail(path, r + 2, "count outcome must be a non-negative integer");
        if (!(out.offset[r] > 0.0))
          parse_fail(path, r + 2, "offset must be positive");
      }
      return out;
    }
    case ModelFamily::Cox: {
      expect_header({"time", "event"});
      SurvivalOutcome out;
      out.time.resize(n);
      out.event.resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::string> cells = split_csv_line(lines[r + 1]);
        if (cells.size() != 2) parse_fail(path, r + 2, "expected time,event");
        out.time[r] = parse_double(path, r + 2, 1, cells[0]);
        double ev = parse_double(path, r + 2, 2, cells[1]);
        if (!(out.time[r] > 0.0)) parse_fail(path, r + 2, "time must be positive");
        if (ev != 0.0 && ev != 1.0) parse_fail(path, r + 2, "event must be 0/1");
        out.event[r] = ev != 0.0 ? 1 : 0;
      }
      return out;
    }
  }
  throw_error(ErrorCode::InvalidInput, "unknown family");
}

void write_phenotype_csv(const std::string& path, const Outcome& outcome) {
  CsvWriter w(path);
  switch (outcome_family(outcome)) {
    case ModelFamily::Linear: {
      const auto& o = std::get<ContinuousOutcome>(outcome);
      w.row({"y"});
      for (double v : o.y) w.row({format_double(v)});
      break;
    }
    case ModelFamily::Logistic: {
      const auto& o = std::get<BinaryOutcome>(outcome);
      w.row({"y"});
      for (double v : o.y) w.row({std::to_string(static_cast<int>(v))});
      break;
    }
    case ModelFamily::Poisson: {
      const auto& o = std::get<CountOutcome>(outcome);
      w.row({"y", "offset"});
      for (std::size_t i = 0; i < o.y.size(); ++i)
        w.row({format_double(o.y[i]), format_double(o.offset[i])});
      break;
    }
    case ModelFamily::Cox: {
      const auto& o = std::get<SurvivalOutcome>(outcome);
      w.row({"time", "event"});
      for (std::size_t i = 0; i < o.time.size(); ++i)
        w.row({format_double(o.time[i]), std::to_string(int(o.event[i]))});
      break;
    }
  }
  w.finish();
}

std::vector<double> read_threshold_file(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  std::vector<double> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string t = strip(lines[i]);
    if (t.empty()) continue;
    out.push_back(parse_double(path, i + 1, 1, t));
  }
  if (out.empty()) throw_error(ErrorCode::ParseError, path + ": no thresholds");
  return out;
}

void write_screen_csv(const std::string& path, const ScreenResult& screen) {
  CsvWriter w(path);
  w.row({"marker", "z", "p", "passed"});
  for (const MarkerScreen& m : screen.markers)
    w.row({std::to_string(m.index), format_double(m.z), format_double(m.p),
           m.passed ? "1" : "0"});
  w.finish();
}

void write_pairs_csv(const std::string& path, const ScanReport& report) {
  CsvWriter w(path);
  w.row({"k", "l", "estimate", "z", "raw_p", "corrected_p", "significant",
         "quality_flag"});
  for (const PairRecord& rec : report.pairs)
    w.row({std::to_string(rec.k), std::to_string(rec.l),
           format_double(rec.estimate), format_double(rec.z),
           format_double(rec.raw_p), format_double(rec.corrected_p),
           rec.significant ? "1" : "0", quality_flag_name(rec.flag)});
  w.finish();
}

void write_fwer_csv(const std::string& path, const xp::FwerReport& report) {
  CsvWriter w(path);
  w.row({"fst", "estimate", "se", "replicates", "seed"});
  for (const xp::FwerCell& c : report.cells)
    w.row({format_double(c.fst), format_double(c.estimate), format_double(c.se),
           std::to_string(c.replicates), std::to_string(report.config.seed)});
  w.finish();
}

void write_power_csv(const std::string& path, const xp::PowerReport& report) {
  CsvWriter w(path);
  w.row({"fst", "beta3", "power", "se"});
  for (const xp::PowerCell& c : report.cells)
    w.row({format_double(c.fst), format_double(c.beta3), format_double(c.power),
           format_double(c.se)});
  w.finish();
}

void write_independence_csv(const std::string& path,
                            const xp::IndependenceReport& report) {
  CsvWriter w(path);
  w.row({"quantity", "value", "replicates", "seed"});
  std::string reps = std::to_string(report.replicates_used);
  std::string seed = std::to_string(report.config.seed);
  w.row({"corr_s1k_s2", format_double(report.corr_s1k_s2), reps, seed});
  w.row({"corr_s1j_s2", format_double(report.corr_s1j_s2), reps, seed});
  w.row({"corr_s1k_s1j", format_double(report.corr_s1k_s1j), reps, seed});
  w.row({"mardia_skewness", format_double(report.mardia_skewness), reps, seed});
  w.row({"mardia_kurtosis", format_double(report.mardia_kurtosis), reps, seed});
  w.finish();
}

void write_marginal_csv(const std::string& path, const xp::MarginalReport& report) {
  CsvWriter w(path);
  w.row({"beta3", "z"});
  for (const xp::MarginalRow& r : report.rows)
    w.row({format_double(r.beta3), format_double(r.z)});
  w.finish();
}

}  // namespace episcan::io
