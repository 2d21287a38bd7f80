// icmkit: batch front-end for constructing measurements, verifying
// informational completeness, sweeping the general construction, computing
// information volumes and running tomography experiments.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "icmkit/constructions.hpp"
#include "icmkit/criteria.hpp"
#include "icmkit/io.hpp"
#include "icmkit/linalg.hpp"
#include "icmkit/measurement.hpp"
#include "icmkit/tomography.hpp"
#include "icmkit/types.hpp"

namespace {

using namespace icmkit;

struct GlobalOptions {
  Tolerance tol;
  std::optional<std::uint64_t> seed_flag;
  std::string out_path;
  unsigned jobs = 0;

  std::uint64_t seed() const {
    if (seed_flag) {
      return *seed_flag;
    }
    if (const char* env = std::getenv("ICMKIT_SEED")) {
      try {
        return static_cast<std::uint64_t>(std::stoull(env));
      } catch (const std::exception&) {
        throw validation_error("ICMKIT_SEED must be an unsigned integer");
      }
    }
    return 0;
  }

  unsigned job_count() const {
    if (jobs > 0) {
      return jobs;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }
};

// Result JSON/CSV goes to --out when given (summary to stdout), otherwise to
// stdout (summary to stderr).
void emit(const GlobalOptions& opts, const std::string& payload, const std::string& summary) {
  if (!opts.out_path.empty()) {
    write_text_file(opts.out_path, payload);
    std::cout << summary << '\n';
  } else {
    std::cout << payload;
    if (payload.empty() || payload.back() != '\n') {
      std::cout << '\n';
    }
    std::cerr << summary << '\n';
  }
}

// MPICM family behind the local measurement and the mpicm volume rows:
// explicit listings for n = 4 and 6, the general construction for even
// n >= 10, MUB elsewhere (supported n only).
BasisFamily mpicm_like_family(Index n) {
  if (n == 4 || n == 6) {
    return mpicm_explicit(n);
  }
  if (n % 2 == 0 && n >= 10) {
    return mpicm_general(n);
  }
  return mub_family(n);
}

SubspaceBasis parse_subspace_spec(const std::string& spec, Index ambient_dim) {
  const auto parse_k = [&](const std::string& prefix) -> std::optional<Index> {
    if (spec.rfind(prefix, 0) != 0) {
      return std::nullopt;
    }
    try {
      return static_cast<Index>(std::stoll(spec.substr(prefix.size())));
    } catch (const std::exception&) {
      throw validation_error("subspace spec: cannot parse '" + spec + "'");
    }
  };
  if (const auto k = parse_k("embedded-")) {
    if (*k >= 1 && ambient_dim == *k * (*k + 1)) {
      return local_embedding_basis(*k);
    }
    return leading_coordinates_basis(ambient_dim, *k);
  }
  if (const auto k = parse_k("first-")) {
    return leading_coordinates_basis(ambient_dim, *k);
  }
  throw validation_error("subspace spec: expected embedded-K or first-K, got '" + spec + "'");
}

Povm as_povm(const std::variant<Povm, BasisFamily>& measurement) {
  if (std::holds_alternative<Povm>(measurement)) {
    return std::get<Povm>(measurement);
  }
  return povm_from_bases(std::get<BasisFamily>(measurement), true);
}

std::string ic_summary(const IcReport& report) {
  std::string out = "IC: ";
  out += report.is_ic ? "true" : "false";
  out += ", rank " + std::to_string(report.rank) + "/" + std::to_string(report.required);
  return out;
}

int run_construct(const GlobalOptions& opts, const std::string& kind, Index n,
                  const std::string& x_text, Index count, const std::vector<std::string>& inputs,
                  const std::string& method) {
  std::string payload;
  std::string summary;
  const auto povm_payload = [&](const Povm& povm, const std::string& label) {
    const IcReport report = is_ic(povm, opts.tol);
    payload = povm_json(povm);
    summary = label + ": dim " + std::to_string(povm.dim) + ", " +
              std::to_string(povm.effects.size()) + " effects, " + ic_summary(report);
  };
  const auto family_payload = [&](const BasisFamily& fam, const std::string& label) {
    const IcReport report = is_ic(povm_from_bases(fam, true), opts.tol);
    payload = family_json(fam);
    summary = label + ": dim " + std::to_string(fam.dim) + ", " +
              std::to_string(fam.bases.size()) + " bases, " + ic_summary(report);
  };
  if (kind == "mpicm") {
    family_payload((n == 4 || n == 6) ? mpicm_explicit(n) : mpicm_general(n), kind);
  } else if (kind == "canonical") {
    povm_payload(canonical_ic_set(n), kind);
  } else if (kind == "rank-one-ic") {
    std::optional<Complex> x;
    if (!x_text.empty()) {
      x = parse_complex(x_text);
    }
    povm_payload(rank_one_ic_povm(n, x), kind);
  } else if (kind == "mub") {
    family_payload(mub_family(n), kind);
  } else if (kind == "random-bases") {
    family_payload(random_bases(n, count > 0 ? count : n + 1, opts.seed()), kind);
  } else if (kind == "local") {
    povm_payload(local_tomography_measurement(mpicm_like_family(n), opts.tol), kind);
  } else if (kind == "dilate") {
    if (inputs.size() != 1) {
      throw validation_error("construct dilate: exactly one --input file required");
    }
    const Povm source = parse_povm_json(read_text_file(inputs.front()));
    if (method == "standard") {
      const NaimarkDilation dilation = naimark_standard(source, opts.tol);
      payload = matrix_json(dilation.unitary);
      summary = "dilate standard: system " + std::to_string(dilation.system_dim) + ", ancilla " +
                std::to_string(dilation.ancilla_dim) + ", unitary " +
                std::to_string(dilation.unitary.rows()) + "x" +
                std::to_string(dilation.unitary.cols());
    } else if (method == "compact") {
      povm_payload(naimark_dilate_rank_one(source, opts.tol), "dilate compact");
    } else {
      throw validation_error("construct dilate: --method must be compact or standard");
    }
  } else if (kind == "tensor") {
    if (inputs.size() < 2) {
      throw validation_error("construct tensor: at least two --input files required");
    }
    std::vector<Povm> parts;
    for (const auto& path : inputs) {
      parts.push_back(parse_povm_json(read_text_file(path)));
    }
    povm_payload(tensor_povm(parts), kind);
  } else {
    throw validation_error("construct: unknown kind '" + kind + "'");
  }
  emit(opts, payload, summary);
  return 0;
}

int run_verify(const GlobalOptions& opts, const std::string& input, const std::string& subspace) {
  const auto measurement = parse_measurement_json(read_text_file(input));
  const Povm povm = as_povm(measurement);
  validate(povm, opts.tol);
  const SubspaceBasis basis = subspace.empty()
                                  ? leading_coordinates_basis(povm.dim, povm.dim)
                                  : parse_subspace_spec(subspace, povm.dim);
  VerifyReport report;
  report.ic = is_ic_over_subspace(povm, basis, opts.tol);
  report.balance = trace_balance_check(povm, basis, opts.tol);
  report.trace_optimal = trace_optimal_check(povm, basis, opts.tol);
  try {
    UnitVectorSet kets;
    for (const auto& effect : povm.effects) {
      Vector ket = rank_one_ket(effect.matrix);
      ket.normalize();
      kets.kets.push_back(std::move(ket));
    }
    report.frame_potential = frame_potential(kets);
  } catch (const validation_error&) {
    report.frame_potential.reset();  // not a rank-one measurement
  }
  emit(opts, verify_report_json(report), ic_summary(report.ic));
  return 0;
}

int run_sweep(const GlobalOptions& opts, Index from, Index to, Index step, bool full) {
  if (full) {
    to = 100;
  }
  if (from % 2 != 0 || to % 2 != 0 || from < 10 || to < from || step < 2 || step % 2 != 0) {
    throw validation_error("sweep: need even 10 <= from <= to and even step");
  }
  std::vector<Index> ns;
  for (Index n = from; n <= to; n += step) {
    ns.push_back(n);
  }
  std::vector<SweepRow> rows(ns.size());
  const unsigned jobs = std::min<unsigned>(opts.job_count(), static_cast<unsigned>(ns.size()));
  std::vector<std::thread> workers;
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < ns.size(); i = next.fetch_add(1)) {
      const Index n = ns[i];
      const auto start = std::chrono::steady_clock::now();
      const BasisFamily fam = mpicm_general(n);
      const IcReport report = is_ic(povm_from_bases(fam, true), opts.tol);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      rows[i] = SweepRow{n, report.rank, report.required, report.is_ic, elapsed.count()};
    }
  };
  for (unsigned j = 1; j < jobs; ++j) {
    workers.emplace_back(work);
  }
  work();
  for (auto& worker : workers) {
    worker.join();
  }
  std::string summary = "sweep " + std::to_string(from) + ".." + std::to_string(to) + ": ";
  const bool all_ic = std::all_of(rows.begin(), rows.end(),
                                  [](const SweepRow& row) { return row.is_ic; });
  summary += all_ic ? "all IC" : "NOT all IC";
  emit(opts, sweep_csv(rows), summary);
  return 0;
}

int run_volume(const GlobalOptions& opts, const std::string& scheme, Index n, Index seed_count,
               const std::string& input) {
  std::vector<VolumeSurveyRow> rows;
  if (scheme == "single") {
    if (input.empty()) {
      throw validation_error("volume --scheme single: --input POVM file required");
    }
    const Povm povm = parse_povm_json(read_text_file(input));
    VolumeSurveyRow row;
    row.n = povm.dim;
    row.scheme = "single";
    row.report = single_measurement_volume(povm, opts.tol);
    rows.push_back(std::move(row));
  } else {
    std::vector<std::uint64_t> seeds;
    if (scheme == "random" || scheme == "all") {
      const std::uint64_t base = opts.seed();
      for (Index s = 0; s < seed_count; ++s) {
        seeds.push_back(base + static_cast<std::uint64_t>(s));
      }
    }
    std::vector<VolumeSurveyRow> survey = volume_survey(n, seeds, opts.tol);
    for (auto& row : survey) {
      if (scheme == "all" || row.scheme == scheme) {
        rows.push_back(std::move(row));
      }
    }
    if (rows.empty()) {
      throw validation_error("volume: scheme '" + scheme + "' is not available for n = " +
                             std::to_string(n));
    }
  }
  std::string summary = "volume " + scheme + ", n " + std::to_string(rows.front().n) + ": " +
                        std::to_string(rows.size()) + " row(s), log10 " +
                        format_double(rows.front().report.log10_volume);
  emit(opts, survey_csv(rows), summary);
  return 0;
}

int run_tomo(const GlobalOptions& opts, const std::string& input, const std::string& state_spec,
             std::optional<Index> rank, std::optional<Index> shots, std::optional<bool> psd,
             const std::string& subspace, const std::string& dist_path) {
  Povm povm = as_povm(parse_measurement_json(read_text_file(input)));
  if (!subspace.empty()) {
    povm = compress_effects(povm, parse_subspace_spec(subspace, povm.dim), opts.tol);
  }
  DensityState rho;
  if (state_spec == "random") {
    rho = random_density(povm.dim, rank, mix_seed(opts.seed(), 0x5u));
  } else if (state_spec == "maximally-mixed") {
    rho = DensityState{Matrix::Identity(povm.dim, povm.dim) / static_cast<double>(povm.dim)};
  } else {
    rho = DensityState{parse_matrix_json(read_text_file(state_spec))};
  }
  if (!dist_path.empty()) {
    const OutcomeDistribution dist =
        shots ? sample_outcomes(povm, rho, *shots, opts.seed(), opts.tol)
              : probabilities(povm, rho, opts.tol);
    write_text_file(dist_path, distribution_csv(dist));
  }
  const TomographyReport report = run_experiment(povm, rho, shots, opts.seed(), psd, opts.tol);
  const std::string summary = "tomo: hs_error " + format_double(report.hs_error) + ", residual " +
                              format_double(report.residual);
  emit(opts, tomography_report_json(report), summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"informationally complete measurement toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalOptions opts;
  app.add_option("--tol-rank", opts.tol.rel_rank_eps, "relative SVD rank cutoff");
  app.add_option("--tol-abs", opts.tol.abs_eps, "absolute comparison tolerance");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (fallback: ICMKIT_SEED, then 0)");
  app.add_option("--out", opts.out_path, "write the result payload to this file");
  app.add_option("--jobs", opts.jobs, "worker threads (default: hardware)");

  auto* construct = app.add_subcommand("construct", "build a measurement and export it");
  std::string kind;
  Index n = 0;
  std::string x_text;
  Index count = 0;
  std::vector<std::string> inputs;
  std::string method = "compact";
  construct->add_option("--kind", kind,
                        "mpicm | rank-one-ic | canonical | mub | random-bases | local | "
                        "dilate | tensor")
      ->required();
  construct->add_option("--n", n, "dimension");
  construct->add_option("--x", x_text, "rank-one-ic parameter, e.g. 2 or 1+1j");
  construct->add_option("--count", count, "random-bases: number of bases (default n+1)");
  construct->add_option("--input", inputs, "input POVM file(s) for dilate/tensor");
  construct->add_option("--method", method, "dilate: compact | standard");

  auto* verify = app.add_subcommand("verify", "IC report for a POVM or basis-family file");
  std::string verify_input;
  std::string subspace;
  verify->add_option("--input", verify_input, "POVM or family JSON")->required();
  verify->add_option("--subspace", subspace, "embedded-K or first-K");

  auto* sweep = app.add_subcommand("sweep", "rank sweep of the general construction");
  Index from = 10;
  Index to = 40;
  Index step = 2;
  bool full = false;
  sweep->add_option("--from", from, "first dimension (even, >= 10)");
  sweep->add_option("--to", to, "last dimension");
  sweep->add_option("--step", step, "dimension step (even)");
  sweep->add_flag("--full", full, "sweep up to n = 100");

  auto* volume = app.add_subcommand("volume", "information-volume survey");
  std::string scheme = "all";
  Index vol_n = 4;
  Index seed_count = 20;
  std::string vol_input;
  volume->add_option("--scheme", scheme, "mub | mpicm | random | single | all");
  volume->add_option("--n", vol_n, "dimension");
  volume->add_option("--seeds", seed_count, "number of random-bases seeds");
  volume->add_option("--input", vol_input, "POVM file for --scheme single");

  auto* tomo = app.add_subcommand("tomo", "tomography experiment through a measurement file");
  std::string tomo_input;
  std::string state_spec = "random";
  Index tomo_rank = 0;
  Index tomo_shots = 0;
  std::string tomo_subspace;
  std::string dist_path;
  bool psd_on = false;
  bool psd_off = false;
  tomo->add_option("--input", tomo_input, "POVM or family JSON")->required();
  tomo->add_option("--state", state_spec, "random | maximally-mixed | matrix JSON file");
  tomo->add_option("--rank", tomo_rank, "rank of the random state (default: full)");
  tomo->add_option("--shots", tomo_shots, "sample finitely many shots (default: exact)");
  tomo->add_option("--subspace", tomo_subspace, "reconstruct over embedded-K or first-K");
  tomo->add_option("--dump-dist", dist_path, "also write the outcome distribution CSV here");
  auto* psd_on_flag = tomo->add_flag("--psd", psd_on, "force PSD projection on");
  tomo->add_flag("--no-psd", psd_off, "force PSD projection off")->excludes(psd_on_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (seed_opt->count() > 0) {
      opts.seed_flag = seed_value;
    }
    validate(opts.tol);
    if (construct->parsed()) {
      return run_construct(opts, kind, n, x_text, count, inputs, method);
    }
    if (verify->parsed()) {
      return run_verify(opts, verify_input, subspace);
    }
    if (sweep->parsed()) {
      return run_sweep(opts, from, to, step, full);
    }
    if (volume->parsed()) {
      return run_volume(opts, scheme, vol_n, seed_count, vol_input);
    }
    if (tomo->parsed()) {
      std::optional<bool> psd;
      if (psd_on) {
        psd = true;
      } else if (psd_off) {
        psd = false;
      }
      return run_tomo(opts, tomo_input, state_spec,
                      tomo_rank > 0 ? std::optional<Index>(tomo_rank) : std::nullopt,
                      tomo_shots > 0 ? std::optional<Index>(tomo_shots) : std::nullopt, psd,
                      tomo_subspace, dist_path);
    }
    throw internal_error("no subcommand dispatched");
  } catch (const validation_error& err) {
    std::cerr << "validation error: " << err.what() << '\n';
    return 2;
  } catch (const io_error& err) {
    std::cerr << "io error: " << err.what() << '\n';
    return 3;
  } catch (const internal_error& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 5;
  }
}
