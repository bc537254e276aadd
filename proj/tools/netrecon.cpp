#include <netrecon/cli.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_rank;
  std::optional<double> tol_zero;
  std::optional<double> tol_consistency;
};

void add_common(CLI::App* sub, Options& o, bool needs_config) {
  auto* cfg = sub->add_option("--config", o.config, "run configuration (JSON)");
  if (needs_config) cfg->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--tol-rank", o.tol_rank, "relative rank tolerance");
  sub->add_option("--tol-zero", o.tol_zero, "zero threshold for supports and signs");
  sub->add_option("--tol-consistency", o.tol_consistency, "data-fit residual tolerance");
}

netrecon::cli::Overrides overrides(const Options& o) {
  netrecon::cli::Overrides ov;
  if (!o.out.empty()) ov.out = o.out;
  ov.seed = o.seed;
  ov.tol_rank = o.tol_rank;
  ov.tol_zero = o.tol_zero;
  ov.tol_consistency = o.tol_consistency;
  return ov;
}

}  // namespace

int main(int argc, char** argv) {
  namespace nc = netrecon::cli;
  CLI::App app{"Reconstructability analysis of network interaction matrices"};
  app.require_subcommand(1);
  Options opt;
  std::string demo_name;
  std::string demo_dir = NETRECON_DEMO_DIR;

  for (const char* name : {"simulate", "analyze", "reconstruct", "probe"})
    add_common(app.add_subcommand(name, std::string("run the ") + name + " command"), opt, true);
  auto* demo = app.add_subcommand("demo", "run a shipped demo configuration");
  demo->add_option("name", demo_name, "demo name")->required();
  demo->add_option("--demo-dir", demo_dir, "directory holding demo configs");
  add_common(demo, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nc::kExitError;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    nc::RunConfig config;
    if (sub->get_name() == "demo") {
      config = nc::load_config(nc::demo_path(demo_dir, demo_name));
      if (opt.out.empty()) config.out = config.out / demo_name;
    } else {
      config = nc::load_config(opt.config);
      config.command = sub->get_name();  // the subcommand wins over the file
    }
    nc::apply(config, overrides(opt));
    return nc::run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nc::kExitError;
  }
}
