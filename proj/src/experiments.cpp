#include "kahler/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "kahler/cones.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/errors.hpp"
#include "kahler/flow.hpp"
#include "kahler/models.hpp"
#include "kahler/parallel.hpp"
#include "kahler/random.hpp"
#include "kahler/serialization.hpp"
#include "kahler/variations.hpp"
#include "kahler/weitzenbock.hpp"

namespace kahler {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::pair<Experiment, const char*> kNames[] = {
    {Experiment::VerifyExample12, "VerifyExample12"}, {Experiment::Certify, "Certify"},
    {Experiment::Flow, "Flow"},                       {Experiment::Variations, "Variations"},
    {Experiment::Decompose, "Decompose"},             {Experiment::InequalityChain, "InequalityChain"},
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad integer '" + s + "' in " + what);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad number '" + s + "' in " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

KahlerCurvatureTensor build_factor(const std::string& text, std::uint64_t seed) {
  const auto f = split(text, ':');
  const auto need = [&](std::size_t k) {
    if (f.size() != k) throw UsageError("model factor '" + text + "' has the wrong number of fields");
  };
  const auto dim = [&](const std::string& s, int lo) {
    const int n = parse_int(s, text);
    if (n < lo) throw UsageError("dimension in '" + text + "' must be at least " + std::to_string(lo));
    return n;
  };
  if (f.empty()) throw UsageError("empty model factor");
  if (f[0] == "flat") return need(2), flat(dim(f[1], 1));
  if (f[0] == "fs") return need(3), fubini_study(dim(f[1], 1), parse_double(f[2], text));
  if (f[0] == "surface") return need(2), riemann_surface(parse_double(f[1], text));
  if (f[0] == "example12") return need(2), example_1_2(dim(f[1], 1));
  if (f[0] == "random") return need(2), random_symmetric(seed, dim(f[1], 1));
  if (f[0] == "cone") return need(2), sample_cone(seed, dim(f[1], 2));
  throw UsageError("unknown model factor '" + f[0] + "'");
}

json cvector_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

json witness_json(const CertificationResult& r) {
  json cols = json::array();
  if (r.condition == Condition::Isotropic) {
    for (Eigen::Index j = 0; j < r.argmin.real_frame.cols(); ++j) {
      const RVector c = r.argmin.real_frame.col(j);
      cols.push_back(std::vector<double>(c.data(), c.data() + c.size()));
    }
  } else {
    for (Eigen::Index j = 0; j < r.argmin.vectors.cols(); ++j) cols.push_back(cvector_json(r.argmin.vectors.col(j)));
  }
  return cols;
}

json certification_json(const CertificationResult& r) {
  return json{{"condition", to_string(r.condition)}, {"minValue", r.min_value},
              {"status", to_string(r.status)},        {"starts", r.starts},
              {"convergedStarts", r.converged_starts}, {"witness", witness_json(r)}};
}

struct Checks {
  json list = json::array();
  bool failed = false;
  void add(const std::string& name, bool passed, double value, double threshold) {
    list.push_back({{"name", name}, {"passed", passed}, {"value", value}, {"threshold", threshold}});
    failed = failed || !passed;
  }
};

struct InternalFailure {
  std::string message;
  std::optional<KahlerCurvatureTensor> tensor;
};

struct SeedOutcome {
  json record;
  bool failed = false;
  std::vector<std::pair<std::string, std::string>> files;
  std::optional<InternalFailure> internal;
  std::optional<std::string> usage;
};

struct Job {
  const ExperimentConfig& config;
  const std::optional<KahlerCurvatureTensor>& loaded;
  std::uint64_t seed;
  SeedOutcome& out;
  std::optional<KahlerCurvatureTensor> current;  // for the diagnostic dump

  KahlerCurvatureTensor tensor(const std::string& fallback) {
    current = loaded ? *loaded : build_model(config.model.empty() ? fallback : config.model, seed);
    return *current;
  }
  CertifyOptions certify_options() const {
    CertifyOptions o;
    o.starts = config.starts;
    o.seed = seed;
    return o;
  }
};

void verify_example(Job& job, Checks& checks, json& rec) {
  int n = 2;
  if (job.loaded) throw UsageError("VerifyExample12 takes --model example12:N, not a tensor file");
  if (!job.config.model.empty()) {
    const auto f = split(job.config.model, ':');
    if (f.size() != 2 || f[0] != "example12") throw UsageError("VerifyExample12 takes --model example12:N");
    n = parse_int(f[1], job.config.model);
    if (n < 1) throw UsageError("example12 needs N >= 1");
  }
  const auto t = job.tensor("example12:" + std::to_string(n));
  const int dim = t.dim();

  Rng rng = make_rng(job.seed, 1);
  double residual = 0.0;
  for (int k = 0; k < 1000; ++k) {
    CVector a = random_complex_vector(rng, dim);
    CVector b = random_complex_vector(rng, dim);
    a.normalize();
    b -= inner(b, a) * a;
    b.normalize();
    double wedge = 0.0;
    for (int i = 1; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) wedge += std::norm(a[i] * b[j] - a[j] * b[i]);
    residual = std::max(residual, std::abs(evaluate_bisectional(t, a, b) - 2.0 * wedge));
  }
  rec["identityResidualMax"] = residual;
  checks.add("identity residual", residual <= 1e-10, residual, 1e-10);

  const CVector e0 = CVector::Unit(dim, 0), e1 = CVector::Unit(dim, 1);
  const double zero_frame = evaluate_bisectional(t, e0, e1);
  rec["zeroFrameValue"] = zero_frame;

  const auto ohb = certify(t, Condition::OHB, job.certify_options());
  rec["ohbMin"] = ohb.min_value;
  rec["ohb"] = certification_json(ohb);
  checks.add("orthogonal bisectional minimum is zero", std::abs(ohb.min_value) <= 1e-6, ohb.min_value, 1e-6);
  checks.add("explicit zero frame", std::abs(zero_frame) <= 1e-12, zero_frame, 1e-12);

  const auto iso = certify(t, Condition::Isotropic, job.certify_options());
  rec["isotropicMin"] = iso.min_value;
  rec["isotropic"] = certification_json(iso);
  checks.add("isotropic curvature goes negative", iso.status == CertificationStatus::Violated && iso.min_value < 0.0,
             iso.min_value, 0.0);
}

void certify_all(Job& job, Checks& checks, json& rec) {
  const auto t = job.tensor("fs:2:4");
  std::vector<Condition> conditions{Condition::HolSec, Condition::HB};
  if (t.dim() >= 2) conditions.insert(conditions.end(), {Condition::OHB, Condition::Isotropic});
  json results = json::array();
  for (Condition c : conditions) {
    const auto r = certify(t, c, job.certify_options());
    results.push_back(certification_json(r));
    checks.add(to_string(c) + " not violated", r.status != CertificationStatus::Violated, r.min_value,
               -r.tolerance);
  }
  rec["n"] = t.dim();
  rec["certifications"] = std::move(results);
}

void flow(Job& job, Checks& checks, json& rec) {
  const auto t0 = job.tensor("fs:2:4");
  const auto& cfg = job.config;
  const auto steps = static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  const int every = static_cast<int>(std::max(1L, steps / 100));
  FlowOptions opts;
  opts.seed = job.seed;
  opts.full_starts = cfg.starts;
  const auto traj = integrate(t0, cfg.dt, cfg.horizon, every, opts);

  std::ostringstream csv;
  csv << "time,scalar,ohbMin,minRicciEigenvalue,tensorNorm\n";
  double ohb_floor = std::numeric_limits<double>::infinity();
  double worst_defect = 0.0;
  for (const auto& m : traj.monitors) {
    csv << num(m.time) << ',' << num(m.scalar) << ',' << (m.ohb_min ? num(*m.ohb_min) : "") << ','
        << num(m.min_ricci_eigenvalue) << ',' << num(m.tensor_norm) << '\n';
    if (m.ohb_min) ohb_floor = std::min(ohb_floor, *m.ohb_min);
    worst_defect = std::max(worst_defect, m.symmetry_defect / (1.0 + m.tensor_norm * m.tensor_norm));
  }
  const std::string name = "trajectory_seed" + std::to_string(job.seed) + ".csv";
  job.out.files.emplace_back(name, csv.str());

  rec["trajectoryFile"] = name;
  rec["steps"] = steps;
  rec["recorded"] = traj.times.size();
  rec["finalTime"] = traj.times.back();
  rec["blowUp"] = traj.blow_up;
  rec["finalScalar"] = traj.monitors.back().scalar;
  rec["maxRelativeSymmetryDefect"] = worst_defect;
  checks.add("symmetry maintained", worst_defect <= 1e-10, worst_defect, 1e-10);

  if (t0.dim() >= 2 && std::isfinite(ohb_floor)) {
    const double start = *traj.monitors.front().ohb_min;
    rec["ohbMinInitial"] = start;
    rec["ohbMinTrajectory"] = ohb_floor;
    if (start >= -1e-6) checks.add("orthogonal bisectional cone preserved", ohb_floor >= -1e-6, ohb_floor, -1e-6);
  }

  const BlockTag tag = classify_block(t0, cfg.tol);
  if (tag.kind == BlockKind::FubiniStudyLike && !traj.blow_up) {
    const int n = t0.dim();
    const double c0 = tag.parameter;
    const double time = traj.times.back();
    const double denom = 1.0 - (n + 1) * c0 * time;
    if (denom > 0.0) {
      const double c = c0 / denom;
      const double residual = max_abs_difference(traj.states.back(), fubini_study(n, 2.0 * c));
      rec["closedForm"] = {{"c0", c0}, {"cT", c}, {"residual", residual}};
      checks.add("closed-form scaling", residual <= 1e-6, residual, 1e-6);
    }
  }
}

void variations(Job& job, Checks& checks, json& rec) {
  const auto t = job.tensor("random:3");
  const int n = t.dim();
  if (n < 2) throw UsageError("Variations needs n >= 2");
  constexpr double h = 1e-3;
  // Below these the coarse-step error is dominated by rounding and the ratio is meaningless.
  constexpr double floor_first = 1e-8, floor_second = 1e-6;
  Rng rng = make_rng(job.seed, 2);

  std::ostringstream csv;
  csv << "family,alpha,beta,mu,order,analytic,fd_h,fd_h2,err_h,err_h2,ratio\n";
  double worst_fine = 0.0;
  double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = -ratio_lo;
  int rows = 0, exact_rows = 0;
  auto row = [&](const VariationFamily& f, int order, double analytic) {
    const double fh = order == 1 ? finite_difference_first(t, f, h) : finite_difference_second(t, f, h);
    const double fh2 = order == 1 ? finite_difference_first(t, f, h / 2) : finite_difference_second(t, f, h / 2);
    const double eh = std::abs(fh - analytic), eh2 = std::abs(fh2 - analytic);
    const bool exact = eh <= (order == 1 ? floor_first : floor_second);
    const double ratio = exact ? std::numeric_limits<double>::quiet_NaN() : eh / eh2;
    csv << to_string(f.kind) << ',' << f.alpha << ',' << f.beta << ',' << f.mu << ',' << order << ','
        << num(analytic) << ',' << num(fh) << ',' << num(fh2) << ',' << num(eh) << ',' << num(eh2) << ','
        << (exact ? "" : num(ratio)) << '\n';
    ++rows;
    worst_fine = std::max(worst_fine, eh2);
    if (exact) {
      ++exact_rows;
    } else {
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
    }
  };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (const auto& f : {VariationFamily::rotation_real(n, a, b), VariationFamily::rotation_imag(n, a, b)})
        row(f, 1, first_variation(t, f));
      for (int m = 0; m < n; ++m) {
        if (m == a || m == b) continue;
        for (const auto& f : {VariationFamily::translation_real(n, a, b, m), VariationFamily::translation_imag(n, a, b, m),
                              VariationFamily::translation_beta_slot(n, a, b, m)})
          row(f, 1, first_variation(t, f));
      }
      if (n >= 3) {
        CVector wa = random_complex_vector(rng, n), wb = random_complex_vector(rng, n);
        wa[a] = wa[b] = wb[a] = wb[b] = 0.0;
        wa.normalize();
        wb.normalize();
        const auto f = VariationFamily::second_order(a, b, wa, wb);
        row(f, 1, first_variation(t, f));
        row(f, 2, second_variation(t, f));
      }
    }

  const std::string name = "variations_seed" + std::to_string(job.seed) + ".csv";
  job.out.files.emplace_back(name, csv.str());
  rec["tableFile"] = name;
  rec["n"] = n;
  rec["rows"] = rows;
  rec["rowsBelowNoiseFloor"] = exact_rows;
  rec["maxErrorFine"] = worst_fine;
  checks.add("agreement at finer step", worst_fine <= 1e-5, worst_fine, 1e-5);
  if (rows > exact_rows) {
    rec["ratioMin"] = ratio_lo;
    rec["ratioMax"] = ratio_hi;
    checks.add("convergence ratio lower", ratio_lo >= 3.5, ratio_lo, 3.5);
    checks.add("convergence ratio upper", ratio_hi <= 4.5, ratio_hi, 4.5);
  }
}

void decompose(Job& job, Checks& checks, json& rec) {
  const auto t = job.tensor("example12:2");
  const auto& cfg = job.config;
  const auto s = detect_blocks(t, cfg.tol, job.seed);
  const double mixed = max_mixed_component(t, s);
  const auto cross = cross_factor_bound(t, s, cfg.tol, job.certify_options());

  std::vector<bool> compact;
  json blocks = json::array();
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const auto& b = s.blocks[i];
    compact.push_back(b.tag.kind == BlockKind::FubiniStudyLike && b.tag.parameter > 0.0);
    blocks.push_back({{"dim", b.indices.size()},
                      {"tag", to_string(b.tag)},
                      {"minHolomorphicSectional", cross.block_min_holomorphic_sectional[i]}});
  }
  std::unique_ptr<bool[]> flags(new bool[compact.size()]);
  std::copy(compact.begin(), compact.end(), flags.get());
  const auto report =
      theorem_case(s, cross.block_min_holomorphic_sectional, std::span<const bool>(flags.get(), compact.size()), cfg.tol);

  json witnesses = json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"negativeBlock", w.negative_block}, {"otherBlock", w.other_block},
                         {"otherMin", w.other_min}, {"requiredMin", w.required_min}});
  }
  json pairs = json::array();
  for (const auto& p : cross.pairs) {
    pairs.push_back({{"i", p.block_i}, {"j", p.block_j}, {"minSum", p.min_sum}, {"flagged", p.flagged}});
  }
  rec["n"] = t.dim();
  rec["blocks"] = std::move(blocks);
  rec["maxMixedComponent"] = mixed;
  rec["degeneracyWarning"] = s.degeneracy_warning;
  rec["attempts"] = s.attempts;
  rec["crossFactorPairs"] = std::move(pairs);
  rec["case"] = {{"kind", to_string(report.kind)},
                 {"designatedBlock", report.designated_block >= 0 ? json(report.designated_block) : json(nullptr)},
                 {"witnesses", std::move(witnesses)},
                 {"notes", report.notes}};
  checks.add("block diagonal in adapted frame", mixed <= cfg.tol, mixed, cfg.tol);
  checks.add("case consistent", report.kind != TheoremCase::Violation, 0.0, 0.0);
}

void inequality_chain(Job& job, Checks& checks, json& rec) {
  std::vector<KahlerCurvatureTensor> tensors;
  if (job.loaded || !job.config.model.empty()) {
    tensors.push_back(job.tensor(""));
  } else {
    for (int n = 2; n <= 4; ++n) tensors.push_back(sample_cone(job.seed, n));
  }
  Rng rng = make_rng(job.seed, 3);
  json items = json::array();
  double worst = std::numeric_limits<double>::infinity();
  double worst_term = std::numeric_limits<double>::infinity();
  for (const auto& t : tensors) {
    job.current = t;
    const auto d = derived_inequalities(t, job.config.tol);
    double term_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 5; ++k) term_min = std::min(term_min, curvature_term(t, {random_real_vector(rng, t.dim())}));
    items.push_back({{"n", t.dim()}, {"minValue", d.min_value}, {"scalar", d.scalar},
                     {"failures", d.failures}, {"curvatureTermMin", term_min}});
    worst = std::min(worst, d.min_value);
    worst_term = std::min(worst_term, term_min);
  }
  rec["tensors"] = std::move(items);
  checks.add("derived inequalities", worst >= -job.config.tol, worst, -job.config.tol);
  checks.add("curvature term", worst_term >= -job.config.tol, worst_term, -job.config.tol);
}

void run_seed(Job& job) {
  Checks checks;
  json rec{{"seed", job.seed}};
  try {
    switch (job.config.experiment) {
      case Experiment::VerifyExample12: verify_example(job, checks, rec); break;
      case Experiment::Certify: certify_all(job, checks, rec); break;
      case Experiment::Flow: flow(job, checks, rec); break;
      case Experiment::Variations: variations(job, checks, rec); break;
      case Experiment::Decompose: decompose(job, checks, rec); break;
      case Experiment::InequalityChain: inequality_chain(job, checks, rec); break;
    }
  } catch (const InternalAssertionError& e) {
    job.out.internal = InternalFailure{e.what(), job.current};
  } catch (const TensorFileError& e) {
    job.out.usage = e.what();
  } catch (const std::invalid_argument& e) {
    job.out.usage = e.what();
  }
  rec["checks"] = std::move(checks.list);
  job.out.record = std::move(rec);
  job.out.failed = checks.failed;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void validate_config(const ExperimentConfig& c) {
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  if (!(c.dt > 0.0)) throw UsageError("--dt must be positive");
  if (!(c.horizon > 0.0)) throw UsageError("--horizon must be positive");
  if (c.starts < 1) throw UsageError("--starts must be at least 1");
  if (!c.model.empty() && !c.input.empty()) throw UsageError("--model and --input are exclusive");
  if (!c.input.empty() && !fs::exists(c.input)) throw UsageError("input file " + c.input.string() + " does not exist");
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kNames)
    if (k == e) return name;
  return "?";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  return std::nullopt;
}

KahlerCurvatureTensor build_model(const std::string& text, std::uint64_t seed) {
  if (text.empty()) throw UsageError("empty model");
  std::optional<KahlerCurvatureTensor> out;
  for (const auto& f : split(text, '*')) {
    auto t = build_factor(f, seed);
    out = out ? product(*out, t) : std::move(t);
  }
  return *out;
}

RunResult run(const ExperimentConfig& config) {
  RunResult result{kSuccess, json::object(), {}};
  json& summary = result.summary;
  summary["experiment"] = to_string(config.experiment);
  summary["model"] = config.model;
  summary["input"] = config.input.string();
  const std::vector<std::uint64_t> seeds = config.seeds.empty() ? std::vector<std::uint64_t>{0} : config.seeds;
  summary["seeds"] = seeds;
  summary["tolerance"] = config.tol;
  summary["dt"] = config.dt;
  summary["horizon"] = config.horizon;
  summary["starts"] = config.starts;

  std::error_code ec;
  fs::create_directories(config.out, ec);
  const bool can_write = fs::is_directory(config.out);
  auto finish = [&](int code, const std::string& status) {
    result.exit_code = code;
    summary["status"] = status;
    summary["exitCode"] = code;
    if (can_write) {
      const auto path = config.out / "summary.json";
      write_text(path, summary.dump(2) + "\n");
      result.files.push_back(path);
    }
    return result;
  };

  std::optional<KahlerCurvatureTensor> loaded;
  try {
    validate_config(config);
    if (!config.input.empty()) {
      const auto file = load_tensor(config.input, config.tol);
      summary["inputCompleted"] = file.completed();
      summary["inputCompletedEntries"] = file.completed_entries;
      loaded = file.tensor;
    }
  } catch (const std::exception& e) {
    summary["error"] = e.what();
    return finish(kUsageError, "usage-error");
  }
  if (!can_write) {
    result.exit_code = kUsageError;
    summary["status"] = "usage-error";
    summary["error"] = "cannot create output directory " + config.out.string();
    return result;
  }

  std::vector<SeedOutcome> outcomes(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    Job job{config, loaded, seeds[i], outcomes[i], std::nullopt};
    run_seed(job);
  });

  json runs = json::array();
  bool failed = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.internal) {
      json dump{{"seed", seeds[i]}, {"error", o.internal->message}};
      if (o.internal->tensor) dump["tensor"] = to_json(*o.internal->tensor);
      const auto path = config.out / "diagnostic.json";
      write_text(path, dump.dump(2) + "\n");
      result.files.push_back(path);
      summary["runs"] = runs;
      summary["error"] = o.internal->message;
      return finish(kInternalAssertion, "internal-assertion");
    }
    if (o.usage) {
      summary["error"] = *o.usage;
      return finish(kUsageError, "usage-error");
    }
    for (const auto& [name, text] : o.files) {
      write_text(config.out / name, text);
      result.files.push_back(config.out / name);
    }
    failed = failed || o.failed;
    runs.push_back(std::move(o.record));
  }

  if (config.experiment == Experiment::VerifyExample12) {
    double residual = 0.0, ohb = std::numeric_limits<double>::infinity(), iso = ohb;
    for (const auto& r : runs) {
      residual = std::max(residual, r["identityResidualMax"].get<double>());
      ohb = std::min(ohb, r["ohbMin"].get<double>());
      iso = std::min(iso, r["isotropicMin"].get<double>());
    }
    summary["identityResidualMax"] = residual;
    summary["ohbMin"] = ohb;
    summary["isotropicMin"] = iso;
  }
  summary["runs"] = std::move(runs);
  return failed ? finish(kPropertyFailure, "property-failure") : finish(kSuccess, "ok");
}

}  // namespace kahler
