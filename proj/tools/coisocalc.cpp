#include "coisocalc/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cli = coisocalc::cli;

int main(int argc, char** argv) {
  CLI::App app{"coisocalc: exact computations for coisotropic submanifolds of Poisson charts"};
  app.require_subcommand(1);
  std::string manifest_path, out_path;
  std::optional<int> degree, order, arity;
  for (const auto& name : cli::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--manifest", manifest_path, "manifest document (YAML or JSON)")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--degree", degree, "coefficient degree or weight bound");
    sub->add_option("--order", order, "Artin order N");
    sub->add_option("--arity", arity, "highest bracket arity");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(manifest_path);
    if (!in) {
      std::cerr << "error: cannot read " << manifest_path << "\n";
      return 2;
    }
    std::stringstream text;
    text << in.rdbuf();
    cli::Manifest m = cli::parse_manifest(text.str());
    if (degree) m.degree = *degree;
    if (order) m.order = *order;
    if (arity) m.arity = *arity;
    const std::string base = std::filesystem::path(manifest_path).parent_path().string();
    const std::string report = cli::render(cli::run(command, m, base.empty() ? "." : base));
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << report;
      if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
      }
    }
    return 0;
  } catch (const cli::ManifestError& e) {
    std::cerr << manifest_path << ": " << e.what() << "\n";
    return 2;
  } catch (const cli::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  }
}
