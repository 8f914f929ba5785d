#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Congruence Hecke algebras of GL_n, SL_n and restrictions over local fields"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = ".", window;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker cap");
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { seed = s, seed_set = true; }, "seed for sampled probes");
  app.add_option("--window", window, "sup-norm radius, or cocharacters like \"-1,1;0,0\"");
  for (const char* name : {"enumerate", "volume", "convolve", "verify", "transfer", "eisenstein"})
    app.add_subcommand(name)->fallthrough();
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  cli::RunConfig cfg;
  try {
    cfg = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    cfg.out_dir = out_dir;
    if (threads) cfg.threads = threads;
    if (seed_set) cfg.seed = seed;
    if (!window.empty()) cfg.window = cli::parse_window(window, cfg.spec.datum());
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return cli::kError;
  }
  return cli::run_command(cmd, cfg, std::cout, std::cerr);
}
