// Command-line front end: problem-file ingestion, feasibility checks, IIS
// search, extreme-point extraction, uniqueness tests, and fixture emission.
// Reports are JSON on stdout; diagnostics go to stderr.
// Exit codes: 0 determinate verdict, 2 malformed input, 3 indeterminate or
// solver failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "altspec/iis.hpp"
#include "altspec/io.hpp"
#include "altspec/recovery.hpp"

namespace {

using altspec::AltPoint;
using altspec::Pencil;
using altspec::Settings;
using altspec::SymMatrix;
using json = nlohmann::ordered_json;

json settings_json(const Settings& st) {
  json j;
  j["tol_feas"] = st.tolFeas;
  j["tol_rank"] = st.tolRank;
  j["infeas_threshold"] = st.infeasThreshold;
  j["feas_band_low"] = st.feasBandLow;
  j["max_iter"] = st.maxIter;
  j["seed"] = st.seed;
  return j;
}

json matrix_json(const SymMatrix& a) {
  json j;
  j["n"] = a.dim();
  j["triplets"] = altspec::io::matrix_triplets(a);
  return j;
}

std::vector<int> one_based(const std::vector<int>& blocks) {
  std::vector<int> lab;
  lab.reserve(blocks.size());
  for (int b : blocks) lab.push_back(b + 1);
  return lab;
}

// Certificates leave the library in the pencil's canonical layout; reports
// use the ingested file layout.
json alt_point_json(const Pencil& p, const AltPoint& pt) {
  json j = matrix_json(p.toOriginal(pt.X));
  j["residuals"] = {{"max_eq", pt.maxEqResidual},
                    {"affine", pt.affineResidual},
                    {"min_eigenvalue", pt.minEigenvalue}};
  j["support"] = pt.support;
  j["labels"] = one_based(pt.support);
  return j;
}

const char* verdict_name(altspec::Verdict v) {
  return v == altspec::Verdict::WeaklyInfeasible ? "weakly_infeasible" : "weakly_feasible";
}

struct Common {
  std::string file;
  Settings settings;

  void attach(CLI::App* cmd, bool withFile = true) {
    if (withFile) cmd->add_option("file", file, "problem file")->required();
    cmd->add_option("--tol-feas", settings.tolFeas, "feasibility / zero tolerance");
    cmd->add_option("--tol-rank", settings.tolRank, "rank decision tolerance");
    cmd->add_option("--seed", settings.seed, "seed for randomized operations");
    cmd->add_option("--max-iter", settings.maxIter, "solver iteration cap");
  }

  Pencil load() const { return altspec::io::to_pencil(altspec::io::load_problem(file)); }
};

void print_report(json& report, std::chrono::steady_clock::time_point t0) {
  const auto dt = std::chrono::steady_clock::now() - t0;
  report["elapsed_seconds"] = std::chrono::duration<double>(dt).count();
  std::cout << report.dump(2) << "\n";
}

int run_check(const Common& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Pencil p = opt.load();
  altspec::FeasibilityStatus fs = altspec::classify(p, opt.settings);

  json report;
  report["command"] = "check";
  report["input"] = opt.file;
  report["settings"] = settings_json(opt.settings);
  report["verdict"] = verdict_name(fs.verdict);
  report["eta_opt"] = fs.etaOpt;
  if (fs.certificate) {
    report["certificate"] = alt_point_json(p, *fs.certificate);
  } else {
    json wits = json::array();
    for (const auto& [eps, y] : fs.epsilonWitnesses) {
      json w;
      w["eps"] = eps;
      w["y"] = std::vector<double>(y.data(), y.data() + y.size());
      wits.push_back(std::move(w));
    }
    report["epsilon_witnesses"] = std::move(wits);
  }
  print_report(report, t0);
  return 0;
}

int run_iis(const Common& opt, const std::string& method) {
  const auto t0 = std::chrono::steady_clock::now();
  Pencil p = opt.load();

  json report;
  report["command"] = "iis";
  report["input"] = opt.file;
  report["settings"] = settings_json(opt.settings);
  report["method"] = method;

  if (method == "greedy") {
    altspec::IISResult res = altspec::greedy_iis(p, opt.settings);
    report["blocks"] = res.blocks;
    report["labels"] = one_based(res.blocks);
    report["certificate"] = alt_point_json(p, res.certificate);
    report["certificate_extreme"] = res.certificateExtreme;
  } else if (method == "l21") {
    altspec::MinSupportResult res = altspec::min_support_l21(p, altspec::BlockNorm::Frobenius,
                                                             opt.settings);
    report["blocks"] = res.point.support;
    report["labels"] = one_based(res.point.support);
    report["objective"] = res.objective;
    report["certificate"] = alt_point_json(p, res.point);
    altspec::IISVerification ver = altspec::verify_iis(p, res.point.support, opt.settings);
    report["verified_iis"] = ver.verified;
    if (!ver.verified) report["refutation"] = ver.refutation;
  } else {  // brute
    altspec::BruteForceResult res = altspec::min_support_bruteforce(p, opt.settings);
    report["blocks"] = res.support;
    report["labels"] = one_based(res.support);
    report["certificate"] = alt_point_json(p, res.certificate);
  }
  print_report(report, t0);
  return 0;
}

int run_extreme(const Common& opt, const std::vector<int>& blocks) {
  const auto t0 = std::chrono::steady_clock::now();
  Pencil p = opt.load();
  altspec::FeasibilityStatus fs = altspec::restricted_alt(p, blocks, opt.settings);
  if (!fs.certificate)
    throw std::invalid_argument("restricted alternative system is empty for the given blocks");
  AltPoint extreme = altspec::purify(p, *fs.certificate, opt.settings);
  altspec::ExtremeTest check = altspec::is_extreme(p, extreme, opt.settings);

  json report;
  report["command"] = "extreme";
  report["input"] = opt.file;
  report["settings"] = settings_json(opt.settings);
  report["blocks"] = blocks;
  report["labels"] = one_based(blocks);
  report["point"] = alt_point_json(p, extreme);
  report["extreme"] = check.extreme;
  if (check.direction) report["direction"] = matrix_json(p.toOriginal(*check.direction));
  print_report(report, t0);
  return 0;
}

SymMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw altspec::io::ParseError("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw altspec::io::ParseError(std::string("matrix file: ") + e.what());
  }
  // either a bare matrix document or a report embedding one
  const nlohmann::json* mat = &doc;
  if (!doc.contains("triplets")) {
    if (doc.contains("certificate"))
      mat = &doc["certificate"];
    else if (doc.contains("point"))
      mat = &doc["point"];
  }
  if (!mat->contains("n") || !mat->contains("triplets"))
    throw altspec::io::ParseError("matrix file: no matrix document found");
  return altspec::io::matrix_from_triplets((*mat)["n"].get<int>(), (*mat)["triplets"]);
}

int run_unique(const Common& opt, std::optional<int> t, const std::string& x0path) {
  const auto t0 = std::chrono::steady_clock::now();
  altspec::io::ProblemFile pf = altspec::io::load_problem(opt.file);
  altspec::BlockPartition part(pf.n, pf.blocks);

  json report;
  report["command"] = "unique";
  report["input"] = opt.file;
  report["settings"] = settings_json(opt.settings);

  if (t) {
    altspec::UniquenessVerdict v =
        altspec::check_recovery_condition(pf.matrices, part, *t, 1000, opt.settings);
    report["t"] = *t;
    report["mode"] =
        v.mode == altspec::UniquenessMode::ExactKernelDimLeqOne ? "exact" : "randomized";
    report["outcome"] = v.outcome == altspec::UniquenessOutcome::Holds      ? "holds"
                        : v.outcome == altspec::UniquenessOutcome::Fails    ? "fails"
                                                                            : "inconclusive_sampled";
    if (v.trials > 0) report["trials"] = v.trials;
    if (v.witness) {
      report["witness"] = matrix_json(*v.witness);
      altspec::SignStats s = altspec::sign_stats(*v.witness, part, opt.settings.tolFeas);
      report["witness_sigma"] = {{"plus", s.sigmaPlus}, {"minus", s.sigmaMinus}};
    }
  } else {
    SymMatrix x0 = load_matrix_file(x0path);
    altspec::SingletonVerdict v =
        altspec::verify_unique_solution(pf.matrices, part, x0, 20, opt.settings);
    report["outcome"] =
        v.outcome == altspec::SingletonOutcome::ProbablyUnique ? "probably_unique" : "not_unique";
    report["trials"] = v.trials;
    if (v.witnessPair) {
      report["witness_pair"] =
          json::array({matrix_json(v.witnessPair->first), matrix_json(v.witnessPair->second)});
    }
  }
  print_report(report, t0);
  return 0;
}

struct GenOptions {
  std::string family;
  double eps = 1.0;
  int n = 4;
  double r = 1.0;
  std::vector<double> c{0.0, 0.0};
  std::vector<std::vector<double>> halfplanes;
};

int run_gen(const GenOptions& g) {
  altspec::io::ProblemFile pf;
  if (g.family == "blocklinear") {
    pf = altspec::io::from_pencil(altspec::gen_blocklinear());
  } else if (g.family == "blocksdp") {
    pf = altspec::io::from_pencil(altspec::gen_blocksdp(g.eps));
  } else if (g.family == "uniquelp" || g.family == "uniquesdp") {
    altspec::GeneratedSystem sys =
        g.family == "uniquelp" ? altspec::gen_unique_lp(g.n) : altspec::gen_unique_sdp(g.n);
    pf.n = sys.part.n();
    pf.blocks = sys.part.blocks();
    pf.matrices.push_back(SymMatrix::Zero(pf.n));  // no constant matrix in this family
    for (auto& m : sys.matrices) pf.matrices.push_back(std::move(m));
  } else {  // disc-halfplanes
    std::vector<Pencil> parts;
    std::vector<std::vector<double>> planes = g.halfplanes;
    if (planes.empty()) planes = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    for (const auto& hp : planes) {
      if (hp.size() != 3)
        throw std::invalid_argument("--halfplane takes three values: alpha beta gamma");
      parts.push_back(altspec::build_halfplane(hp[0], hp[1], hp[2]));
    }
    if (g.c.size() != 2) throw std::invalid_argument("--c takes two values");
    parts.push_back(altspec::build_disc(g.r, Eigen::Vector2d(g.c[0], g.c[1])));
    pf = altspec::io::from_pencil(altspec::concat_blocks(parts));
  }
  std::cout << altspec::io::emit_problem(pf);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-structured LMI infeasibility analysis"};
  app.require_subcommand(1);

  Common checkOpt, iisOpt, extremeOpt, uniqueOpt;
  std::string iisMethod = "greedy";
  std::vector<int> extremeBlocks;
  int uniqueT = -1;
  std::string uniqueX0;
  GenOptions gen;

  auto* cmdCheck = app.add_subcommand("check", "classify weak feasibility");
  checkOpt.attach(cmdCheck);

  auto* cmdIis = app.add_subcommand("iis", "find an irreducible infeasible block subsystem");
  iisOpt.attach(cmdIis);
  cmdIis->add_option("--method", iisMethod, "greedy|l21|brute")
      ->check(CLI::IsMember({"greedy", "l21", "brute"}));

  auto* cmdExtreme = app.add_subcommand("extreme", "extreme point of a restricted alternative");
  extremeOpt.attach(cmdExtreme);
  cmdExtreme->add_option("--blocks", extremeBlocks, "restriction block indices, 0-based");

  auto* cmdUnique = app.add_subcommand("unique", "uniqueness condition / singleton test");
  uniqueOpt.attach(cmdUnique);
  auto* optT = cmdUnique->add_option("--t", uniqueT, "sign-count threshold");
  auto* optX0 = cmdUnique->add_option("--x0", uniqueX0, "candidate solution matrix file");
  optT->excludes(optX0);

  auto* cmdGen = app.add_subcommand("gen", "emit a fixture problem file");
  cmdGen
      ->add_option("--family", gen.family,
                   "blocklinear|blocksdp|uniquelp|uniquesdp|disc-halfplanes")
      ->required()
      ->check(CLI::IsMember({"blocklinear", "blocksdp", "uniquelp", "uniquesdp",
                             "disc-halfplanes"}));
  cmdGen->add_option("--eps", gen.eps, "blocksdp deformation");
  cmdGen->add_option("--n", gen.n, "uniquelp/uniquesdp dimension parameter");
  cmdGen->add_option("--r", gen.r, "disc radius");
  cmdGen->add_option("--c", gen.c, "disc center (two values)")->expected(2);
  cmdGen
      ->add_option("--halfplane", gen.halfplanes,
                   "halfplane alpha beta gamma (repeatable; default two axis halfplanes)")
      ->expected(3)
      ->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmdCheck->parsed()) return run_check(checkOpt);
    if (cmdIis->parsed()) return run_iis(iisOpt, iisMethod);
    if (cmdExtreme->parsed()) return run_extreme(extremeOpt, extremeBlocks);
    if (cmdUnique->parsed()) {
      if (optT->count() == 0 && optX0->count() == 0)
        throw std::invalid_argument("unique: one of --t or --x0 is required");
      return run_unique(uniqueOpt, optT->count() ? std::optional<int>(uniqueT) : std::nullopt,
                        uniqueX0);
    }
    return run_gen(gen);
  } catch (const altspec::io::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const altspec::IndeterminateError& e) {
    std::cerr << "indeterminate: " << e.what() << "\n";
    return 3;
  } catch (const altspec::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
