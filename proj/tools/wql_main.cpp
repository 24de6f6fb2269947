// Batch experiment runner: wql <mode> --config <path> [--out <dir>]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "wql/experiment.hpp"

namespace {

void usage(std::ostream& out) {
  out << "usage: wql <mode> --config <path> [--out <dir>]\n"
         "modes: eval sweep lemma1 lemma4 audit gen-points plot\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return 1;
  }
  const std::string mode_arg = argv[1];
  if (mode_arg == "-h" || mode_arg == "--help") {
    usage(std::cout);
    return 0;
  }

  std::string config_path;
  std::string out_dir = ".";
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[++i];
    } else if (arg == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      std::cerr << "error: unknown argument: " << arg << '\n';
      usage(std::cerr);
      return 1;
    }
  }
  if (config_path.empty()) {
    std::cerr << "error: --config is required\n";
    return 1;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config: " << config_path << '\n';
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    wql::ExperimentConfig cfg = wql::parse_config(buf.str());
    const wql::Mode mode = wql::mode_from_string(mode_arg);
    if (cfg.mode && *cfg.mode != mode) {
      std::cerr << "error: config mode '" << wql::to_string(*cfg.mode)
                << "' disagrees with command line mode '" << mode_arg << "'\n";
      return 1;
    }
    cfg.mode = mode;
    return wql::run(cfg, out_dir);
  } catch (const wql::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == wql::ErrKind::Argument || e.kind() == wql::ErrKind::Io ? 1 : 2;
  }
}
