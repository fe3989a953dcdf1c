#pragma once

// The `ribbonlab` command line. Exit codes: 0 success, 1 input or usage
// error, 2 search Unknown, 3 search Refuted.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ribbonlab/alexander.hpp"
#include "ribbonlab/generate.hpp"
#include "ribbonlab/moves.hpp"
#include "ribbonlab/quandle.hpp"
#include "ribbonlab/ribbon.hpp"
#include "ribbonlab/search.hpp"

namespace ribbonlab::cli {

enum ExitCode : int { Success = 0, InputError = 1, SearchUnknown = 2, SearchRefuted = 3 };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline RibbonData load_ribbon(const std::string& path) {
  try {
    return parse_ribbon(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

/// A built-in name (dihedral:<m>, trivial:<m>) or a quandle file.
inline FiniteQuandle load_quandle(const std::string& spec) {
  if (is_builtin_quandle_name(spec)) return builtin_quandle(spec);
  try {
    return parse_quandle(read_file(spec), spec);
  } catch (const ParseError& e) {
    throw Error(spec + ": " + e.what());
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ribbonlab: ribbon presentations, stable-equivalence moves and quandle invariants", "ribbonlab"};
  app.require_subcommand(1);

  std::string file;
  std::string file_b;
  std::string spec;
  std::vector<std::string> quandle_specs;
  std::string script_file;
  bool group = false;
  bool list = false;
  int depth = 8;
  int weak = 0;
  std::size_t states = 200000;
  int threads = 1;

  auto* validate_cmd = app.add_subcommand("validate", "check a ribbon file");
  validate_cmd->add_option("file", file)->required();
  auto* canon_cmd = app.add_subcommand("canon", "print the canonical form");
  canon_cmd->add_option("file", file)->required();
  auto* genus_cmd = app.add_subcommand("genus", "print |H| - |B| + 1");
  genus_cmd->add_option("file", file)->required();
  auto* quandle_cmd = app.add_subcommand("quandle", "print the quandle (or group) presentation");
  quandle_cmd->add_option("file", file)->required();
  quandle_cmd->add_flag("--group", group, "print the group presentation instead");
  auto* color_cmd = app.add_subcommand("color", "count colorings by finite quandles");
  color_cmd->add_option("file", file)->required();
  color_cmd->add_option("--quandle", quandle_specs, "dihedral:<m>, trivial:<m> or a quandle file")->required();
  color_cmd->add_flag("--list", list, "also print every coloring");
  color_cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);
  auto* alex_cmd = app.add_subcommand("alex", "print the Alexander polynomial");
  alex_cmd->add_option("file", file)->required();
  auto* apply_cmd = app.add_subcommand("apply", "apply a move script");
  apply_cmd->add_option("file", file)->required();
  apply_cmd->add_option("--script", script_file)->required();
  auto* search_cmd = app.add_subcommand("search", "search for a (weak) stable equivalence");
  search_cmd->add_option("a", file)->required();
  search_cmd->add_option("b", file_b)->required();
  search_cmd->add_option("--depth", depth)->required()->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--weak", weak)->required()->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--states", states)->check(CLI::PositiveNumber);
  search_cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);
  auto* gen_cmd = app.add_subcommand("gen", "print generated ribbon data");
  gen_cmd->add_option("spec", spec, "unknot | spun-trefoil | torus:<g> | stabilized:<k>:<seed> | random:<b>:<h>:<len>:<seed>")
      ->required();

  std::vector<std::string> argv_storage{"ribbonlab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return InputError;
  }

  try {
    if (validate_cmd->parsed()) {
      const auto diagnostics = validate(load_ribbon(file));
      if (diagnostics.empty()) {
        out << "ok\n";
        return Success;
      }
      for (const auto& d : diagnostics) out << "error: " << d.location << ": " << d.message << "\n";
      return InputError;
    }
    if (canon_cmd->parsed()) {
      const RibbonData d = load_ribbon(file);
      require_valid(d);
      out << serialize(canonical_form(d));
      return Success;
    }
    if (genus_cmd->parsed()) {
      out << genus(load_ribbon(file)) << "\n";
      return Success;
    }
    if (quandle_cmd->parsed()) {
      const RibbonData d = load_ribbon(file);
      out << (group ? to_string(group_presentation(d)) : to_string(quandle_presentation(d)));
      return Success;
    }
    if (color_cmd->parsed()) {
      const RibbonData d = load_ribbon(file);
      std::vector<FiniteQuandle> quandles;
      for (const auto& s : quandle_specs) quandles.push_back(load_quandle(s));
      for (const auto& q : quandles) {
        if (quandles.size() == 1) out << count_colorings(d, q, threads) << "\n";
        else out << q.id() << " " << count_colorings(d, q, threads) << "\n";
        if (list) {
          enumerate_colorings(d, q, [&](const std::vector<int>& colours) {
            for (std::size_t g = 1; g < colours.size(); ++g) out << (g > 1 ? " " : "") << colours[g];
            out << "\n";
          });
        }
      }
      return Success;
    }
    if (alex_cmd->parsed()) {
      out << alexander_polynomial(load_ribbon(file)).to_string() << "\n";
      return Success;
    }
    if (apply_cmd->parsed()) {
      const RibbonData d = load_ribbon(file);
      require_valid(d);
      MoveScript script;
      try {
        script = parse_script(read_file(script_file));
      } catch (const ParseError& e) {
        throw Error(script_file + ": " + e.what());
      }
      out << serialize(apply_script(d, script));
      return Success;
    }
    if (search_cmd->parsed()) {
      SearchOptions options;
      options.depth = depth;
      options.weak_budget = weak;
      options.state_cap = states;
      options.threads = threads;
      const SearchOutcome result = search_equiv(load_ribbon(file), load_ribbon(file_b), options);
      out << serialize_outcome(result);
      if (is_refuted(result)) return SearchRefuted;
      if (is_unknown(result)) return SearchUnknown;
      return Success;
    }
    if (gen_cmd->parsed()) {
      out << serialize(generate(spec));
      return Success;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return InputError;
  }
  err << app.help();
  return InputError;
}

}  // namespace ribbonlab::cli
