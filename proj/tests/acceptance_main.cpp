// Acceptance gate: runs the ten numbered criteria against the numeric
// manifest and prints one PASS/FAIL line per criterion. Exit status is 0
// when every row passes, 1 on any failing row, 2 on setup errors.

#include "csmult/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

[[noreturn]] void usage() {
  std::fprintf(stderr, "usage: acceptance --config <file> --manifest <file> [--out <dir>]\n");
  std::exit(2);
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path;
  std::string manifest_path;
  std::string out_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) config_path = argv[++i];
    else if (arg == "--manifest" && i + 1 < argc) manifest_path = argv[++i];
    else if (arg == "--out" && i + 1 < argc) out_dir = argv[++i];
    else usage();
  }
  if (config_path.empty() || manifest_path.empty()) usage();

  try {
    const csmult::ExperimentConfig cfg = csmult::load_config(config_path);
    std::ifstream in(manifest_path);
    if (!in) throw std::invalid_argument("cannot open manifest " + manifest_path);
    const csmult::ordered_json manifest =
        csmult::ordered_json::parse(in, nullptr, true, true);
    const csmult::RunReport rep = csmult::run_acceptance(cfg, manifest);
    csmult::print_acceptance_summary(rep, stdout);
    if (!out_dir.empty()) csmult::write_report_files(rep, out_dir);
    return rep.any_fail() ? 1 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: error: %s\n", e.what());
    return 2;
  }
}
