// fpoly command-line tool. Thin layer over the C API: argument parsing, file
// I/O and exit codes; all computation happens in fpoly_run.

#include "fpoly/fpoly.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

struct Args {
  std::string input;
  std::string output;
  std::string group;
  std::string format = "obj";
  std::optional<double> radius;
  std::optional<int> level;
  std::optional<long long> seed;
  std::optional<long long> trials;
  std::optional<double> spread;
  int words = 0;
  bool json = false;
};

bool read_file(const std::string& path, std::string& text) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

int emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out || !(out << text)) {
    std::fprintf(stderr, "error: cannot write %s\n", output.c_str());
    return 1;
  }
  return 0;
}

int run(const std::string& command, const std::optional<std::string>& input, const std::string& input_name,
        const nlohmann::json& options, const std::string& output) {
  char* out = nullptr;
  const std::string opts = options.dump();
  const fpoly_status st =
      fpoly_run(command.c_str(), input ? input->c_str() : nullptr, input_name.c_str(), opts.c_str(), &out);
  std::string text = out ? out : "";
  fpoly_string_free(out);
  int code = 0;
  switch (st) {
    case FPOLY_OK: code = 0; break;
    case FPOLY_ERR_VALIDATION:
    case FPOLY_ERR_IO: code = 1; break;
    default: code = 2; break;
  }
  if (!text.empty()) {
    const int wc = emit(text, output);
    if (wc && !code) code = wc;
  }
  if (st != FPOLY_OK) std::fprintf(stderr, "error: %s\n", fpoly_last_error());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpoly: Fuchsian convex polyhedra in Minkowski space"};
  app.set_version_flag("--version", std::string(fpoly_version()));
  app.require_subcommand(1);
  Args a;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", a.input, "input JSON file ('-' for stdin)")->required();
    sub->add_option("-o,--output", a.output, "write the result to a file");
  };

  auto* group_info = app.add_subcommand("group-info", "print generators and translation lengths");
  group_info->add_option("group", a.group, "built-in group name (octagon, boost:<length>) or group spec file")
      ->required();
  group_info->add_option("-o,--output", a.output, "write the result to a file");

  auto* orbit = app.add_subcommand("orbit", "orbit ball of a point as JSON");
  add_input(orbit);
  orbit->add_option("--radius", a.radius, "override the radius of the input");

  auto* build = app.add_subcommand("build", "build a polyhedron from a polyhedron spec");
  add_input(build);
  auto* covol = app.add_subcommand("covol", "covolume and facet areas");
  add_input(covol);
  auto* jacobian = app.add_subcommand("jacobian", "area Jacobian with positivity certificate");
  add_input(jacobian);
  auto* solve = app.add_subcommand("solve", "solve the Minkowski problem for prescribed facet areas");
  add_input(solve);
  auto* mixed = app.add_subcommand("mixed", "mixed covolume of a simple class");
  add_input(mixed);

  auto* check = app.add_subcommand("check", "run the reversed-inequality harness around a simple polyhedron");
  add_input(check);
  check->add_option("--seed", a.seed, "random seed (default 0)");
  check->add_option("--trials", a.trials, "number of random pairs (default 100)");
  check->add_option("--spread", a.spread, "relative jitter of support numbers (default 0.02)");

  auto* approx = app.add_subcommand("approx-ball", "tangent-plane approximations of the unit ball");
  approx->add_option("--group", a.group, "built-in group name or group spec file (default octagon)");
  approx->add_option("--level", a.level, "finest refinement level (default 4)");
  approx->add_option("--radius", a.radius, "pick the coarsest level with sample spacing <= radius");
  approx->add_option("-o,--output", a.output, "write the result to a file");

  auto* exp = app.add_subcommand("export", "export facets and their images as OBJ or JSON");
  add_input(exp);
  exp->add_option("--format", a.format, "obj or json")->check(CLI::IsMember({"obj", "json"}));
  exp->add_option("--words", a.words, "word length of the group elements to include")->check(CLI::NonNegativeNumber);

  auto* repro = app.add_subcommand("paper-repro", "closing octagon example: comparison table");
  repro->add_flag("--json", a.json, "print the table as JSON");
  repro->add_option("-o,--output", a.output, "write the result to a file");

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == argv[1];
    if (!known) {
      std::fprintf(stderr, "error: unknown command \"%s\"\n\n%s", argv[1], app.help().c_str());
      return 1;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), app.help().c_str());
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  nlohmann::json options = nlohmann::json::object();
  std::optional<std::string> input;
  std::string input_name = a.input;

  auto load = [&](const std::string& path) -> bool {
    std::string text;
    if (!read_file(path, text)) {
      std::fprintf(stderr, "error: cannot read %s\n", path.c_str());
      return false;
    }
    input = std::move(text);
    input_name = path == "-" ? "<stdin>" : path;
    return true;
  };
  auto group_arg = [&]() -> bool {
    if (a.group.empty()) return true;
    std::ifstream probe(a.group);
    if (probe.good() && a.group.find(':') == std::string::npos && a.group != "octagon") return load(a.group);
    options["group"] = a.group;
    return true;
  };

  if (command == "group-info" || command == "approx-ball") {
    if (!group_arg()) return 1;
  } else if (command != "paper-repro") {
    if (!load(a.input)) return 1;
  }
  if (a.radius) options["radius"] = *a.radius;
  if (a.level) options["level"] = *a.level;
  if (a.seed) options["seed"] = *a.seed;
  if (a.trials) options["trials"] = *a.trials;
  if (a.spread) options["spread"] = *a.spread;
  if (command == "export") {
    options["format"] = a.format;
    options["words"] = a.words;
  }
  if (command == "paper-repro") options["json"] = a.json;
  return run(command, input, input_name, options, a.output);
}
