// tetratile: command-line driver for the least-area tetrahedral tile proof.
//
//   tetratile analyze --edges 2,1.7320508,1.7320508,1.7320508,1.7320508,2
//   tetratile analyze --angles pi/2,pi/3,pi/3,pi/3,pi/3,pi/2
//   tetratile search2pin
//   tetratile goldberg --all
//   tetratile casework --all [--resume]
//
// Exit codes: 0 success, 2 input or geometry error, 3 proof gap, 4 proof gap where some
// case ran out of interval budget.

#include <iostream>

#include "CLI11.hpp"
#include "tetratile/report.hpp"

using namespace tetratile;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitProofGap = 3;
constexpr int kExitBudget = 4;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ProofGap: return kExitProofGap;
    case ErrorCode::BudgetExhausted: return kExitBudget;
    default: return kExitInput;
  }
}

void emit(const json& rep, const RunConfig& cfg, const std::vector<json>& cases = {}) {
  for (const auto& f : cfg.formats) {
    if (f == "json") std::cout << dump(rep);
    else if (f == "csv") std::cout << render_csv(rep, cases);
    else std::cout << render_text(rep);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified re-execution of the least-area tetrahedral tile proof"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, format;
  unsigned threads = 0;
  bool timing = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default $TETRATILE_OUT or ./tetratile-out)");
  app.add_option("--format", format, "comma-separated subset of json,text,csv");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "include wall times (reports are then not reproducible byte for byte)");

  auto* analyze = app.add_subcommand("analyze", "validity, type, angles, area and tile verdict of one tetrahedron");
  std::string edges, angles;
  auto* eopt = analyze->add_option("--edges", edges, "d12,d13,d14,d23,d24,d34");
  auto* aopt = analyze->add_option("--angles", angles, "theta12,...,theta34 as pi/N, 2pi/N, 60deg or radians");
  eopt->excludes(aopt);

  auto* search = app.add_subcommand("search2pin", "all tetrahedra with every dihedral angle 2pi/n");

  auto* goldberg = app.add_subcommand("goldberg", "area minima of the Goldberg families");
  int family = 0;
  bool all_families = false;
  auto* fopt = goldberg->add_option("--family", family, "1, 2 or 3");
  goldberg->add_flag("--all", all_families, "all three families")->excludes(fopt);

  auto* casework = app.add_subcommand("casework", "interval elimination and resolution of the enumerated cases");
  std::string type_name;
  bool all_types = false, resume = false;
  auto* topt = casework->add_option("--type", type_name, "code type, e.g. abccbb");
  casework->add_flag("--all", all_types, "every code type")->excludes(topt);
  casework->add_flag("--resume", resume, "reuse case records already in the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = apply_config(cfg, read_json_file(config_path));
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (threads) cfg.threads = threads;
    if (!format.empty()) cfg = apply_config(cfg, json{{"formats", split_list(format)}});
    const std::string dir = cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir;

    if (*analyze) {
      std::optional<std::string> e, a;
      if (*eopt) e = edges;
      if (*aopt) a = angles;
      emit(analyze_report(e, a, cfg), cfg);
    } else if (*search) {
      auto t0 = std::chrono::steady_clock::now();
      auto rep = search2pin_report(cfg, dir);
      if (timing) rep["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      emit(rep, cfg);
    } else if (*goldberg) {
      if (!all_families && !family) throw Error(ErrorCode::ParseError, "goldberg needs --family N or --all");
      std::vector<int> fams = all_families ? std::vector<int>{1, 2, 3} : std::vector<int>{family};
      emit(goldberg_report(fams), cfg);
    } else if (*casework) {
      if (!all_types && type_name.empty()) throw Error(ErrorCode::ParseError, "casework needs --type T or --all");
      std::vector<CodeTypeId> types;
      if (all_types) types.assign(kCodeTypes.begin(), kCodeTypes.end());
      else types.push_back(parse_code_type(type_name));
      cfg.output_dir = dir;
      auto run = run_campaign(types, cfg, all_types, resume, timing);
      namespace fs = std::filesystem;
      write_file(fs::path(dir) / "report.json", dump(run.summary));
      write_file(fs::path(dir) / "summary.txt", render_text(run.summary));
      emit(run.summary, cfg, run.case_records);
      if (run.report.proof_gap) return run.report.budget_exhausted ? kExitBudget : kExitProofGap;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
