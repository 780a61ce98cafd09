// Command-line front end: evaluate score files, build ECE profiles, compare
// systems, and generate synthetic two-Gaussian score sets.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include <zebra/zebra.hpp>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw zebra::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw zebra::Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw zebra::Error("write failed for '" + path + "'");
}

zebra::GridSpec parse_grid(const std::string& text) {
  zebra::GridSpec grid;
  long n = 0;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &grid.lo, &grid.hi, &n,
                  &trailing) != 3 ||
      n < 0) {
    throw zebra::InvalidGridError("grid must be lo:hi:n, e.g. -4:4:201");
  }
  grid.n = static_cast<std::size_t>(n);
  return grid;
}

struct EvaluateOptions {
  std::string scores_path;
  std::string nonmated_path;
  std::string format = "labeled-tsv";
  bool baselines = false;
  bool json = false;
};

zebra::ScoreSet load_scores(const std::string& scores_path,
                            const std::string& format,
                            const std::string& nonmated_path) {
  const auto file_format = zebra::score_file_format_from_string(format);
  if (!file_format.has_value()) {
    throw zebra::Error("unknown format '" + format + "'");
  }
  if (*file_format == zebra::ScoreFileFormat::SplitPair) {
    if (nonmated_path.empty()) {
      throw zebra::Error("split-pair format needs --nonmated FILE");
    }
    return zebra::parse_split_pair(read_file(scores_path),
                                   read_file(nonmated_path), scores_path);
  }
  return zebra::parse_labeled_tsv(read_file(scores_path), scores_path);
}

int run_evaluate(const EvaluateOptions& opt) {
  const zebra::ScoreSet scores =
      load_scores(opt.scores_path, opt.format, opt.nonmated_path);
  const zebra::ZebraReport report = zebra::evaluate(scores, opt.baselines);
  std::cout << zebra::write_report(
      report, opt.json ? zebra::ReportFormat::Json : zebra::ReportFormat::Text);
  return 0;
}

struct ProfileOptions {
  std::vector<std::string> scores_paths;
  std::string csv_path;
  std::string svg_path;
  std::string grid_text;
};

int run_profile(const ProfileOptions& opt) {
  zebra::GridSpec grid;
  if (!opt.grid_text.empty()) grid = parse_grid(opt.grid_text);

  std::vector<zebra::ProfileSeries> series;
  series.reserve(opt.scores_paths.size());
  for (const auto& path : opt.scores_paths) {
    const zebra::ScoreSet scores = load_scores(path, "labeled-tsv", "");
    const zebra::CalibratedLLRs cal = zebra::pav_calibrate(scores);
    series.push_back({path, zebra::build_profile(cal, grid),
                      zebra::evaluate(scores)});
  }

  write_file(opt.csv_path, zebra::emit_csv(series));
  if (!opt.svg_path.empty()) {
    write_file(opt.svg_path, zebra::emit_svg(series));
  }
  return 0;
}

struct CompareOptions {
  std::vector<std::string> scores_paths;
};

int run_compare(const CompareOptions& opt) {
  if (opt.scores_paths.size() < 2) {
    throw zebra::Error("compare needs at least 2 score files");
  }
  std::vector<zebra::ZebraReport> reports;
  reports.reserve(opt.scores_paths.size());
  for (const auto& path : opt.scores_paths) {
    reports.push_back(zebra::evaluate(load_scores(path, "labeled-tsv", "")));
  }
  // lower expected disclosure ranks first; worst case, then name, break ties
  std::sort(reports.begin(), reports.end(),
            [](const zebra::ZebraReport& a, const zebra::ZebraReport& b) {
              return std::tie(a.d_ece, a.log10_l, a.source_id) <
                     std::tie(b.d_ece, b.log10_l, b.source_id);
            });

  std::size_t id_width = 9;
  for (const auto& r : reports) id_width = std::max(id_width, r.source_id.size());
  std::printf("%-4s %-*s %8s %8s %4s\n", "rank", static_cast<int>(id_width),
              "source_id", "d_ece", "log10_l", "tag");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::printf("%-4zu %-*s %8.4f %8.4f %4s\n", i + 1,
                static_cast<int>(id_width), reports[i].source_id.c_str(),
                reports[i].d_ece, reports[i].log10_l,
                zebra::to_string(reports[i].tag));
  }
  return 0;
}

struct SimulateOptions {
  zebra::ScoreSimSpec spec;
  std::string out_path;
};

int run_simulate(const SimulateOptions& opt) {
  const zebra::ScoreSet scores = zebra::simulate_scores(opt.spec);
  write_file(opt.out_path, zebra::write_labeled_tsv(scores));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ZEBRA privacy assessment: quantifies the biometric identity "
      "information that leaks through a safeguard, from mated/non-mated "
      "recognition scores."};
  app.require_subcommand(1);

  EvaluateOptions eval_opt;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Report (D_ECE, log10(l), tag) for one score file");
  eval_cmd->add_option("--scores", eval_opt.scores_path,
                       "score file (mated scores file for split-pair)")
      ->required();
  eval_cmd->add_option("--format", eval_opt.format,
                       "labeled-tsv (default) or split-pair")
      ->check(CLI::IsMember({"labeled-tsv", "split-pair"}));
  eval_cmd->add_option("--nonmated", eval_opt.nonmated_path,
                       "non-mated scores file (split-pair only)");
  eval_cmd->add_flag(
      "--baselines", eval_opt.baselines,
      "also report Cllr and EER; contrast metrics only, they assume a fixed "
      "decision policy and tend to overstate the protection a safeguard "
      "provides");
  eval_cmd->add_flag("--json", eval_opt.json, "emit the report as JSON");

  ProfileOptions prof_opt;
  auto* prof_cmd = app.add_subcommand(
      "profile", "Write ECE-profile CSV (and optional SVG plot)");
  prof_cmd->add_option("--scores", prof_opt.scores_paths,
                       "labeled-tsv score file (repeatable)")
      ->required();
  prof_cmd->add_option("--csv", prof_opt.csv_path, "output CSV path")
      ->required();
  prof_cmd->add_option("--svg", prof_opt.svg_path, "output SVG path");
  prof_cmd->add_option("--grid", prof_opt.grid_text,
                       "prior log10-odds grid lo:hi:n (default -4:4:201)");

  CompareOptions cmp_opt;
  auto* cmp_cmd = app.add_subcommand(
      "compare", "Rank systems by expected privacy disclosure");
  cmp_cmd->add_option("--scores", cmp_opt.scores_paths,
                      "labeled-tsv score file (two or more)")
      ->required();

  SimulateOptions sim_opt;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Generate a two-Gaussian synthetic score file");
  sim_cmd->add_option("--mu-mated", sim_opt.spec.mu_mated, "mated mean")
      ->required();
  sim_cmd->add_option("--mu-nonmated", sim_opt.spec.mu_nonmated,
                      "non-mated mean")
      ->required();
  sim_cmd->add_option("--sigma", sim_opt.spec.sigma, "shared std deviation")
      ->required();
  sim_cmd->add_option("--n-mated", sim_opt.spec.n_mated, "mated count")
      ->required();
  sim_cmd->add_option("--n-nonmated", sim_opt.spec.n_nonmated,
                      "non-mated count")
      ->required();
  sim_cmd->add_option("--seed", sim_opt.spec.seed, "64-bit generator seed")
      ->required();
  sim_cmd->add_option("--out", sim_opt.out_path, "output labeled-tsv path")
      ->required();

  try {
    app.parse(argc, argv);
    if (eval_cmd->parsed()) return run_evaluate(eval_opt);
    if (prof_cmd->parsed()) return run_profile(prof_opt);
    if (cmp_cmd->parsed()) return run_compare(cmp_opt);
    if (sim_cmd->parsed()) return run_simulate(sim_opt);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const zebra::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
