// Copyright 2026 The Tracefold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "tracefold/decompose.h"
#include "tracefold/folding.h"
#include "tracefold/serialize.h"
#include "tracefold/spectra.h"

namespace tracefold::cli {
namespace {

// Wraps failures that should map to the malformed-input exit code.
class JobError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  std::stringstream buffer;
  if (path.empty()) {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream file(path);
    if (!file) throw JobError("cannot open " + path);
    buffer << file.rdbuf();
  }
  return buffer.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

void emit(const JobSpec& job, const std::string& text, std::ostream& out) {
  if (job.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(job.output, std::ios::binary);
  if (!file) throw JobError("cannot write " + job.output);
  file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  Rational positive(long hi, long den) { return ratio(range(1, hi * den), den); }

 private:
  std::mt19937_64 engine_;
};

int run_decompose(const JobSpec& job, std::ostream& out) {
  const AtomsInput in = atoms_from_json(parse_json(read_input(job.input)));
  const Element x = from_atoms(CellSpace::create(1), in.atoms);
  const Decomposition d = (in.stabilize || job.stabilize) ? stabilize_decompose(x) : three_symmetric(x);
  emit(job, dump(to_json(d, job.order)), out);
  return d.report.ok() ? kOk : kInternal;
}

int run_verify(const JobSpec& job, std::ostream& out) {
  const LoadedDecomposition loaded = decomposition_from_json(parse_json(read_input(job.input)));
  const Report report = verify_decomposition(loaded.input, loaded.x1, loaded.x2, loaded.x3);
  emit(job, dump(Json{{"verified", report.ok()}, {"failures", to_json(report)}}), out);
  return report.ok() ? kOk : kVerifyFailed;
}

Element moments_input(const JobSpec& job) {
  if (job.demo == "mediator") return mediator(Projection::unit(CellSpace::create(1)));
  if (job.demo == "random") {
    Rng rng(job.seed);
    const long count = rng.range(1, 8);
    std::vector<Atom> atoms;
    for (long i = 0; i < count; ++i) atoms.push_back({ratio(rng.range(-40, 40), rng.range(1, 8)), ratio(1, 2 * count)});
    return from_atoms(CellSpace::create(1), atoms);
  }
  if (!job.demo.empty()) throw JobError("unknown demo \"" + job.demo + "\" (expected mediator or random)");
  return from_atoms(CellSpace::create(1), atoms_from_json(parse_json(read_input(job.input))).atoms);
}

int run_moments(const JobSpec& job, std::ostream& out) {
  if (job.order < 1) throw JobError("--order must be at least 1");
  const Element x = moments_input(job);
  const QuantileFunction w = quantile(x);
  std::ostringstream csv;
  csv << "k,moment,quantile_moment\n";
  for (unsigned k = 1; k <= job.order; ++k) {
    csv << k << ',' << to_string(moment(x, k)) << ',' << to_string(quantile_moment(w, k)) << '\n';
  }
  csv << "\nsymmetric," << (is_spectrally_symmetric(x) ? "true" : "false") << "\n\nt,omega\n";
  for (const auto& [t, v] : w.breakpoints()) csv << to_string(t) << ',' << to_string(v) << '\n';
  emit(job, csv.str(), out);
  return kOk;
}

struct LocalInput {
  Element x;
  Projection q;
};

LocalInput local_input(const JobSpec& job) {
  std::vector<Atom> atoms;
  Rational q_mass;
  if (job.input.empty()) {
    Rng rng(job.seed);
    const long steps = rng.range(1, 16);
    Rational value = 0;
    for (long i = 0; i < steps; ++i) {
      value += rng.positive(2, 4);
      atoms.push_back({value, ratio(1, 8 * steps)});
    }
    q_mass = ratio(rng.range(1, 8), 32);
  } else {
    const Json j = parse_json(read_input(job.input));
    atoms = atoms_from_json(j).atoms;
    if (!j.contains("q_mass")) throw FormatError("missing field \"q_mass\"");
    q_mass = rational_from_json(j.at("q_mass"));
  }
  const Element x = from_atoms(CellSpace::create(1), atoms);
  const Rational dims[] = {q_mass};
  const Carving c = carve(support(x).complement(), dims);
  return {lift(x, c.rest.space()), c.pieces[0]};
}

int run_fold_local(const JobSpec& job, std::ostream& out) {
  const LocalInput in = local_input(job);
  if (in.q.is_zero()) throw PreconditionError("Q must be nonzero");
  const Rational beta = quasitrace(in.x) / in.q.dimension();
  const Projection p = Projection::unit(in.x.space());
  const LocalFolding lf = local_folding(in.x, in.q, beta, p);
  const Folding& f = lf.folding;
  const CellSpace& space = f.space();
  const bool sums_to_x = f.first_sum() == lift(in.x, space);
  const bool sums_to_beta_q = f.second_sum() == beta * lift(in.q, space).element();
  const bool under_p = f.support().leq(lift(p, space));
  const bool valid = validate_folding(f).ok();
  const bool verified = sums_to_x && sums_to_beta_q && under_p && valid;
  const Json report{{"format", "tracefold.local_folding/1"},
                    {"beta", to_json(beta)},
                    {"space", to_json(space)},
                    {"x", to_json(lift(in.x, space))},
                    {"q", to_json(lift(in.q, space).element())},
                    {"folding", to_json(f)},
                    {"checks",
                     {{"first_sum_is_x", sums_to_x}, {"second_sum_is_beta_q", sums_to_beta_q}, {"support_under_p", under_p}}},
                    {"verified", verified}};
  emit(job, dump(report), out);
  return verified ? kOk : kInternal;
}

int run_demo_gamma(const JobSpec& job, std::ostream& out) {
  Rng rng(job.seed);
  const Rational alpha = rng.positive(4, 3), beta = rng.positive(4, 3);
  const Rational d1 = Rational(1) / (2 * (1 + alpha / beta)) * ratio(rng.range(1, 8), 8);
  const Rational d2 = alpha * d1 / beta;
  const Rational dims[] = {d1, d2, d1, d2};
  const Carving c = carve(Projection::unit(CellSpace::create(1)), dims);
  const CellSpace& space = c.rest.space();
  const Superprojection pi{lift(c.pieces[0], space), lift(c.pieces[1], space), lift(c.pieces[2], space),
                           lift(c.pieces[3], space)};
  const Folding g = gamma_folding(pi, alpha, beta);
  const Element &a = g.first()[0], &b = g.first()[1], &v = g.second()[0], &w = g.second()[1];

  // Closed forms with a = D(P2), b = D(P1) and lambda = a / alpha.
  const Rational da = d2, db = d1, lambda = d2 / alpha;
  Report report;
  Json moments = Json::array();
  for (unsigned k = 1; k <= job.order; ++k) {
    const Rational av = lambda * pow(alpha + beta, k + 1) / (k + 1);
    const Rational bw = (k % 2 == 0 ? 1 : -1) * (pow(alpha, k) * da + pow(beta, k) * db) / (k + 1);
    const Rational ma = moment(a, k), mb = moment(b, k), mv = moment(v, k), mw = moment(w, k);
    if (ma != av || mv != av) report.add("moment " + std::to_string(k) + " of A or V differs from the closed form");
    if (mb != bw || mw != bw) report.add("moment " + std::to_string(k) + " of B or W differs from the closed form");
    moments.push_back({{"k", k},
                       {"A", to_json(ma)},
                       {"V", to_json(mv)},
                       {"closed_form_AV", to_json(av)},
                       {"B", to_json(mb)},
                       {"W", to_json(mw)},
                       {"closed_form_BW", to_json(bw)}});
  }
  report.merge(validate_folding(g), "folding: ");
  const Json out_json{{"format", "tracefold.gamma/1"},
                      {"seed", job.seed},
                      {"alpha", to_json(alpha)},
                      {"beta", to_json(beta)},
                      {"dimensions", {to_json(d1), to_json(d2), to_json(d1), to_json(d2)}},
                      {"moments", std::move(moments)},
                      {"failures", to_json(report)},
                      {"verified", report.ok()}};
  emit(job, dump(out_json), out);
  return report.ok() ? kOk : kInternal;
}

}  // namespace

int run_job(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    try {
      if (job.command == "decompose") return run_decompose(job, out);
      if (job.command == "verify") return run_verify(job, out);
      if (job.command == "moments") return run_moments(job, out);
      if (job.command == "fold-local") return run_fold_local(job, out);
      if (job.command == "demo-gamma") return run_demo_gamma(job, out);
      throw JobError("unknown command \"" + job.command + "\"");
    } catch (const PreconditionError& e) {
      // A decomposition file that cannot even be assembled is malformed input.
      if (job.command == "verify") throw FormatError(e.what());
      throw;
    }
  } catch (const FormatError& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const JobError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const Json::exception& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact spectral decompositions of step elements into spectrally symmetric summands."};
  app.require_subcommand(1);
  JobSpec job;

  auto add_common = [&job](CLI::App* sub, bool needs_input) {
    auto* input = sub->add_option("-i,--input", job.input, "Input JSON file (stdin when omitted)");
    if (needs_input) input->check(CLI::ExistingFile);
    sub->add_option("-o,--output", job.output, "Output file (stdout when omitted)");
  };

  auto* decompose = app.add_subcommand("decompose", "Split an atoms file into three spectrally symmetric summands");
  add_common(decompose, true);
  decompose->add_option("-K,--order", job.order, "Highest odd moment order in the report")->check(CLI::PositiveNumber);
  decompose->add_flag("--stabilize", job.stabilize, "Embed into a doubled corner first (allows full support)");

  auto* verify = app.add_subcommand("verify", "Re-check a decomposition report from its serialized data");
  add_common(verify, true);

  auto* moments = app.add_subcommand("moments", "Moment and quantile-moment table with quantile breakpoints");
  add_common(moments, true);
  moments->add_option("-K,--order", job.order, "Highest moment order")->check(CLI::PositiveNumber);
  moments->add_option("--demo", job.demo, "Built-in input instead of a file")
      ->check(CLI::IsMember({"mediator", "random"}));
  moments->add_option("--seed", job.seed, "Seed for --demo random");

  auto* fold = app.add_subcommand("fold-local", "Fold a positive step element as beta times a projection");
  add_common(fold, true);
  fold->add_option("--seed", job.seed, "Seed for the random instance used without --input");

  auto* gamma = app.add_subcommand("demo-gamma", "Check the gamma folding moment identities on a random instance");
  gamma->add_option("-o,--output", job.output, "Output file (stdout when omitted)");
  gamma->add_option("-K,--order", job.order, "Highest moment order")->check(CLI::PositiveNumber);
  gamma->add_option("--seed", job.seed, "Instance seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kMalformed;
  }

  for (auto* sub : app.get_subcommands()) job.command = sub->get_name();
  if (job.command == "moments" && !job.demo.empty() && !job.input.empty()) {
    err << "--demo and --input are mutually exclusive\n";
    return kMalformed;
  }
  return run_job(job, out, err);
}

}  // namespace tracefold::cli
