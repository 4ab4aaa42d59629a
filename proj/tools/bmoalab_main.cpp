// Command-line front end: dispatches JSON experiment configs to the
// computation modules and writes report.json plus CSV profiles.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "bmoalab/cli.hpp"
#include "bmoalab/core.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "bmoalab — composition semigroups, Volterra operators, and "
      "BMOA-type norms on the unit disc"};
  app.set_version_flag("--version", std::string(bmoalab::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;

  for (const std::string& name : bmoalab::cli::command_ids()) {
    CLI::App* sub = app.add_subcommand(
        name, "run the \"" + name + "\" experiment from a JSON config");
    sub->add_option("--config", config_path, "path to the JSON config")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->add_option("--threads", threads,
                    "worker threads (default: hardware concurrency)");
  }

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) bmoalab::parallel::set_threads(threads);

  const std::string command = app.get_subcommands().front()->get_name();
  std::string error;
  const int code =
      bmoalab::cli::run_to_files(command, config_path, out_dir, &error);
  if (code == 2) {
    std::fprintf(stderr, "config error: %s\n", error.c_str());
  } else if (code == 3) {
    std::fprintf(stderr,
                 "computation failed; see the report in %s for details\n",
                 out_dir.c_str());
  }
  return code;
}
