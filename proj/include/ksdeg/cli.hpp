#pragma once

// Command-line front end. `dispatch` runs one command and returns its exit
// code; verdicts go to `out`, diagnostics to `err`.
//
// Exit codes: 0 true / valid / forced, 1 false / invalid / not forced,
// 2 undecided at a cap or within bounds, 3 input error, 64 usage error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ksdeg/decider.hpp"
#include "ksdeg/formula.hpp"
#include "ksdeg/io.hpp"
#include "ksdeg/ksf/evaluator.hpp"
#include "ksdeg/ksf/forcing.hpp"
#include "ksdeg/ksf/trees.hpp"
#include "ksdeg/usl_enumerate.hpp"

namespace ksdeg::cli {

enum Exit : int { ok = 0, negative = 1, undecided = 2, input_error = 3, usage = 64 };

inline constexpr const char* kCapsVariable = "KSDEG_CAPS";

/// Bad input from the user: files, formats, values.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  decider::Caps caps;
  ksf::SearchBounds bounds;
  std::string format = "human";
  std::string report;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline io::Json read_json(const std::string& path) { return io::parse_json(read_file(path), path); }

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::uint64_t number(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19) {
    throw InputError(what + ": expected a natural number, got '" + s + "'");
  }
  return std::stoull(s);
}

// "key=value,key=value" with natural values.
inline void assignments(const std::string& spec, const std::string& what,
                        const std::function<void(const std::string&, std::uint64_t)>& set) {
  if (spec.empty()) return;
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError(what + ": expected key=value, got '" + item + "'");
    set(item.substr(0, eq), number(item.substr(eq + 1), what + " " + item.substr(0, eq)));
  }
}

}  // namespace detail

/// Caps from "max_vars=N,max_size=S"; unspecified caps keep their defaults.
inline decider::Caps parse_caps(const std::string& spec, decider::Caps caps = {}) {
  detail::assignments(spec, kCapsVariable, [&](const std::string& key, std::uint64_t v) {
    if (key == "max_vars") caps.max_vars = v;
    else if (key == "max_size") caps.max_size = v;
    else throw InputError(std::string(kCapsVariable) + ": unknown cap '" + key + "'");
  });
  if (caps.max_vars < 1 || caps.max_size < 1) throw InputError("caps must be positive");
  return caps;
}

inline ksf::SearchBounds parse_bounds(const std::string& spec, ksf::SearchBounds b = {}) {
  detail::assignments(spec, "--bounds", [&](const std::string& key, std::uint64_t v) {
    if (key == "max_new_axioms") b.max_new_axioms = v;
    else if (key == "max_use_length") b.max_use_length = v;
    else if (key == "max_axiom_input") b.max_axiom_input = v;
    else if (key == "max_new_reals") b.max_new_reals = v;
    else if (key == "max_steps") b.max_steps = v;
    else if (key == "inputs") b.inputs = v;
    else if (key == "oracle_length") b.oracle_length = v;
    else throw InputError("--bounds: unknown bound '" + key + "'");
  });
  if (b.max_use_length > 16) throw InputError("--bounds: max_use_length above 16 is not desk scale");
  return b;
}

inline ksf::Real parse_real(const std::string& text, const std::string& what) {
  try {
    return ksf::Real::parse(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(what + ": " + e.what());
  }
}

/// Parameter reals from "NAME=prefix:period" items.
inline std::map<std::string, ksf::Real> parse_env(const std::vector<std::string>& items) {
  std::map<std::string, ksf::Real> env;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--real: expected NAME=prefix:period, got '" + item + "'");
    env.insert_or_assign(item.substr(0, eq), parse_real(item.substr(eq + 1), "--real " + item.substr(0, eq)));
  }
  return env;
}

/// Programs from files, or "builtin:read_bit:N" / "builtin:constant:N".
/// Program e is the e-th one given.
inline ksf::ToyMachine load_programs(const std::vector<std::string>& specs) {
  ksf::ToyMachine tm;
  for (const auto& spec : specs) {
    if (spec.rfind("builtin:", 0) == 0) {
      const auto parts = detail::split(spec, ':');
      if (parts.size() != 3) throw InputError("--program: expected builtin:NAME:N, got '" + spec + "'");
      const auto n = detail::number(parts[2], "--program");
      if (parts[1] == "read_bit") tm.add(ksf::programs::read_bit(n));
      else if (parts[1] == "constant") tm.add(ksf::programs::constant(n));
      else throw InputError("--program: unknown builtin '" + parts[1] + "'");
    } else {
      try {
        tm.add(ksf::Program::parse(read_file(spec)));
      } catch (const ksf::ProgramError& e) {
        throw InputError(spec + ": " + e.what());
      }
    }
  }
  return tm;
}

inline ksf::Mode parse_mode(const std::string& mode, const std::string& a, const std::string& b) {
  if (mode == "P") {
    if (!a.empty() || !b.empty()) throw InputError("--A and --B need --mode Q");
    return ksf::Mode::full();
  }
  if (mode == "Q") {
    if (a.empty() || b.empty()) throw InputError("--mode Q needs --A and --B");
    return ksf::Mode::restricted(parse_real(a, "--A"), parse_real(b, "--B"));
  }
  throw InputError("--mode: expected P or Q");
}

/// "s1,s2,..." as a string vector; the empty text is the vector (e).
inline ksf::StringVector parse_vector(const std::string& text) {
  auto v = detail::split(text, ',');
  if (!ksf::is_string_vector(v)) throw InputError("vector '" + text + "': components must be bit strings of one length");
  return v;
}

namespace detail {

struct Emitter {
  const RunConfig& config;
  std::ostream& out;

  void operator()(const io::Json& structured, const std::string& human) const {
    if (!config.report.empty()) {
      std::ofstream f(config.report, std::ios::binary);
      if (!f) throw InputError("cannot write report '" + config.report + "'");
      f << structured.dump(2) << "\n";
    }
    if (config.format == "json") out << structured.dump(2) << "\n";
    else out << human;
  }
};

inline int truth_exit(decider::Truth t) {
  switch (t) {
    case decider::Truth::holds: return Exit::ok;
    case decider::Truth::fails: return Exit::negative;
    case decider::Truth::undecided_at_cap: return Exit::undecided;
  }
  return Exit::input_error;
}

}  // namespace detail

/// Runs one command. `caps_env` is the value of KSDEG_CAPS, if set.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                    const char* caps_env = std::getenv(kCapsVariable)) {
  for (const auto& a : args) {
    if (a == "--seed" || a.rfind("--seed=", 0) == 0) {
      err << "error: --seed is reserved and not accepted; every algorithm here is deterministic\n";
      return Exit::usage;
    }
  }

  RunConfig config;
  try {
    if (caps_env) config.caps = parse_caps(caps_env);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return Exit::input_error;
  }

  CLI::App app{"Sigma-2 decider for the degree structures and a desk-scale forcing kernel", "ksdeg"};
  app.require_subcommand(1);
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--report", config.report, "Also write the structured result to this file");

  std::function<int()> action;
  const detail::Emitter emit{config, out};

  // decide -------------------------------------------------------------------
  auto* decide = app.add_subcommand("decide", "Decide a Sigma-2 sentence");
  std::string sentence_text, structure = "turing";
  std::optional<std::size_t> max_vars, max_size;
  bool show_ast = false;
  decide->add_option("sentence", sentence_text, "Sentence, e.g. \"E x. A y. y<=x\"")->required();
  decide->add_option("--max-vars", max_vars, "Cap on |x|+|y|")->check(CLI::PositiveNumber);
  decide->add_option("--max-size", max_size, "Carrier cap")->check(CLI::PositiveNumber);
  decide->add_option("--structure", structure, "Degree structure (report label)")
      ->check(CLI::IsMember({"turing", "arithmetic", "hyperarithmetic"}));
  decide->add_flag("--ast", show_ast, "Print the parsed sentence and stop");
  decide->callback([&] {
    action = [&]() -> int {
      const auto s = formula::parse_sentence(sentence_text);
      if (show_ast) {
        const auto j = io::to_json(s);
        emit(j, j.dump(2) + "\n");
        return Exit::ok;
      }
      decider::Caps caps = config.caps;
      if (max_vars) caps.max_vars = *max_vars;
      if (max_size) caps.max_size = *max_size;
      const io::VerdictReport r{formula::to_string(s), structure, decider::decide(s, caps)};
      emit(io::to_json(r), io::render_human(r));
      return detail::truth_exit(r.verdict.truth);
    };
  });

  // usl ----------------------------------------------------------------------
  auto* usl_cmd = app.add_subcommand("usl", "Finite semilattices");
  usl_cmd->require_subcommand(1);
  std::string usl_file;
  auto* check = usl_cmd->add_subcommand("check", "Validate a USL file");
  check->add_option("file", usl_file, "USL file")->required();
  check->callback([&] {
    action = [&]() -> int {
      const auto j = read_json(usl_file);
      const auto tables = io::tables_from_json(j, usl_file);
      const auto c = usl::validate_usl(tables);
      io::Json s{{"valid", c.ok()}, {"axiom", c.axiom}, {"witness", c.witness}, {"message", c.message}};
      std::string human = c.ok() ? "valid upper semilattice with " + std::to_string(tables.size) + " elements\n"
                                 : "invalid: " + c.message + "\n";
      if (c.ok()) {
        const auto f = io::usl_from_json(j, usl_file);
        const bool gen = usl::generates(f.usl, f.valuation);
        s["valuation_generates"] = gen;
        if (!f.valuation.names.empty()) {
          human += std::string("valuation ") + (gen ? "join-generates" : "does not join-generate") + " the carrier\n";
        }
      }
      emit(s, human);
      return c.ok() ? Exit::ok : Exit::negative;
    };
  });

  std::size_t generators = 0;
  std::size_t enum_cap = 0;
  auto* enumerate = usl_cmd->add_subcommand("enum", "List the diagrams generated by k labeled generators");
  enumerate->add_option("k", generators, "Number of generators")->required()->check(CLI::Range(0, 4));
  enumerate->add_option("--max-size", enum_cap, "Carrier cap (default from caps)");
  enumerate->callback([&] {
    action = [&]() -> int {
      const auto r = usl::enumerate_generated(generators, enum_cap ? enum_cap : config.caps.max_size);
      io::Json list = io::Json::array();
      std::ostringstream human;
      human << r.diagrams.size() << " labeled diagrams on " << generators << " generators"
            << (r.truncated ? " (truncated at the carrier cap)" : "") << "\n";
      for (const auto& d : r.diagrams) {
        list.push_back(io::to_json(d.usl, &d.valuation));
        human << "  " << io::to_json(d.usl, &d.valuation).dump() << "\n";
      }
      emit(io::Json{{"generators", generators}, {"count", r.diagrams.size()}, {"truncated", r.truncated},
                    {"diagrams", std::move(list)}},
           human.str());
      return r.truncated ? Exit::undecided : Exit::ok;
    };
  });

  std::size_t new_generators = 0;
  auto* extend = usl_cmd->add_subcommand("extend", "List the end-extensions of a diagram by j new generators");
  extend->add_option("file", usl_file, "USL file with a generating valuation")->required();
  extend->add_option("j", new_generators, "Number of new generators")->required()->check(CLI::Range(0, 4));
  extend->add_option("--max-size", enum_cap, "Carrier cap (default from caps)");
  extend->callback([&] {
    action = [&]() -> int {
      const auto f = io::usl_from_json(read_json(usl_file), usl_file);
      if (!usl::generates(f.usl, f.valuation)) throw InputError(usl_file + ": valuation does not generate the carrier");
      const auto r =
          usl::enumerate_end_extensions(f.usl, f.valuation, new_generators, enum_cap ? enum_cap : config.caps.max_size);
      io::Json list = io::Json::array();
      std::ostringstream human;
      human << r.extensions.size() << " end-extensions" << (r.truncated ? " (truncated at the carrier cap)" : "")
            << "\n";
      for (const auto& e : r.extensions) {
        io::Json item{{"usl", io::to_json(e.usl, &e.valuation)}, {"embedding", e.embedding}};
        human << "  " << item.dump() << "\n";
        list.push_back(std::move(item));
      }
      emit(io::Json{{"count", r.extensions.size()}, {"truncated", r.truncated}, {"extensions", std::move(list)}},
           human.str());
      return r.truncated ? Exit::undecided : Exit::ok;
    };
  });

  // ksf ----------------------------------------------------------------------
  auto* ksf_cmd = app.add_subcommand("ksf", "Forcing kernel");
  ksf_cmd->require_subcommand(1);
  std::string mode_name = "P", real_a, real_b;
  std::vector<std::string> reals, program_specs, families;
  std::string bounds_spec, join_real = "0:0", psi_text;
  std::uint64_t program_index = 0;
  std::string file_a, file_b;

  auto mode_options = [&](CLI::App* c) {
    c->add_option("--mode", mode_name, "P or Q");
    c->add_option("--A", real_a, "The real A of Q, as prefix:period");
    c->add_option("--B", real_b, "The real B of Q, as prefix:period");
  };
  auto context_options = [&](CLI::App* c) {
    c->add_option("--real", reals, "Parameter real NAME=prefix:period");
    c->add_option("--program", program_specs, "Program file or builtin:read_bit:N / builtin:constant:N");
  };
  auto target_options = [&](CLI::App* c) {
    c->add_option("--family", families, "Conjunct family, e.g. \"forall u in prefixes(S, 3): !in(0,1,u)\"");
    c->add_option("--e", program_index, "Program index for split targets");
    c->add_option("--C", join_real, "Real joined with the generic, as prefix:period");
    c->add_option("--bounds", bounds_spec, "Search bounds, e.g. max_new_axioms=1,max_use_length=3");
  };

  auto* validate = ksf_cmd->add_subcommand("validate", "Check a functional or condition file");
  validate->add_option("file", file_a, "Condition file")->required();
  mode_options(validate);
  validate->callback([&] {
    action = [&]() -> int {
      const auto c = io::condition_from_json(read_json(file_a), file_a);
      const auto mode = parse_mode(mode_name, real_a, real_b);
      const auto check = ksf::validate_functional(c.phi);
      io::Json w = io::Json::array();
      for (const auto& a : check.witnesses) w.push_back(io::to_json(a));
      io::Json s{{"valid", check.ok()}, {"rule", ksf::to_string(check.rule)}, {"witnesses", w}, {"message", check.message}};
      std::string human = check.ok() ? "valid functional\n" : "invalid: " + check.message + "\n";
      bool ok = check.ok();
      if (ok && mode.is_q()) {
        const bool member = ksf::membership_q(c, mode.a, mode.b);
        s["member_q"] = member;
        human += member ? "condition of Q(A, B)\n" : "not a condition of Q(A, B)\n";
        ok = member;
      }
      emit(s, human);
      return ok ? Exit::ok : Exit::negative;
    };
  });

  auto* extends = ksf_cmd->add_subcommand("extends", "Does q extend p?");
  extends->add_option("p", file_a, "Condition p")->required();
  extends->add_option("q", file_b, "Condition q")->required();
  mode_options(extends);
  extends->callback([&] {
    action = [&]() -> int {
      const auto p = io::condition_from_json(read_json(file_a), file_a);
      const auto q = io::condition_from_json(read_json(file_b), file_b);
      const bool r = ksf::extends(q, p, parse_mode(mode_name, real_a, real_b));
      emit(io::Json{{"extends", r}}, std::string(r ? "q extends p\n" : "q does not extend p\n"));
      return r ? Exit::ok : Exit::negative;
    };
  });

  auto* force = ksf_cmd->add_subcommand("force", "Does the condition force the sentence?");
  force->add_option("p", file_a, "Condition")->required();
  force->add_option("psi", psi_text, "Quantifier-free sentence")->required();
  mode_options(force);
  context_options(force);
  force->callback([&] {
    action = [&]() -> int {
      const auto p = io::condition_from_json(read_json(file_a), file_a);
      const auto psi = ksf::parse_forcing(psi_text);
      const auto tm = load_programs(program_specs);
      const bool r = ksf::forces_qf(p, psi, parse_mode(mode_name, real_a, real_b), {&tm, parse_env(reals)});
      emit(io::Json{{"sentence", ksf::to_string(psi)}, {"forced", r}}, std::string(r ? "forced\n" : "not forced\n"));
      return r ? Exit::ok : Exit::negative;
    };
  });

  auto* decide_force = ksf_cmd->add_subcommand("decide-force", "Find reals X with (phi, X) forcing the sentence");
  decide_force->add_option("phi", file_a, "Functional (or condition, whose reals are ignored)")->required();
  decide_force->add_option("psi", psi_text, "Quantifier-free sentence")->required();
  mode_options(decide_force);
  context_options(decide_force);
  decide_force->callback([&] {
    action = [&]() -> int {
      const auto c = io::condition_from_json(read_json(file_a), file_a);
      if (!c.reals.empty()) err << "note: reals in " << file_a << " are ignored\n";
      const auto psi = ksf::parse_forcing(psi_text);
      const auto tm = load_programs(program_specs);
      const auto w = ksf::decide_qf_forcing(c.phi, psi, parse_mode(mode_name, real_a, real_b), {&tm, parse_env(reals)});
      io::Json s{{"sentence", ksf::to_string(psi)}, {"forceable", w.has_value()}};
      std::string human = "no reals make the functional force the sentence\n";
      if (w) {
        const ksf::Condition cond{c.phi, *w};
        s["condition"] = io::to_json(cond);
        human = "forced by " + io::render_human(cond) + "\n";
      } else {
        s["condition"] = nullptr;
      }
      emit(s, human);
      return w ? Exit::ok : Exit::negative;
    };
  });

  std::size_t oracle_length = 32;
  bool joined = false;
  auto* oracle = ksf_cmd->add_subcommand("oracle", "Print the generic bits a condition decides");
  oracle->add_option("p", file_a, "Condition")->required();
  oracle->add_option("--length", oracle_length, "Number of positions");
  oracle->add_flag("--joined", joined, "Print C join generic instead (see --C)");
  oracle->add_option("--C", join_real, "Real joined with the generic");
  mode_options(oracle);
  oracle->callback([&] {
    action = [&]() -> int {
      const auto p = io::condition_from_json(read_json(file_a), file_a);
      const auto mode = parse_mode(mode_name, real_a, real_b);
      ksf::require_member(p, mode, "condition");
      const auto bits = joined ? ksf::joined_oracle(p, parse_real(join_real, "--C"), oracle_length, mode)
                               : ksf::generic_oracle(p, oracle_length, mode);
      emit(io::Json{{"joined", joined}, {"bits", bits}}, bits + "\n");
      return Exit::ok;
    };
  });

  auto* codec = ksf_cmd->add_subcommand("codec", "Axiom codes");
  codec->require_subcommand(1);
  std::uint64_t cx = 0, cy = 0, code = 0;
  std::string csigma;
  auto* encode = codec->add_subcommand("encode", "Code of the axiom <x, y, sigma>");
  encode->add_option("x", cx)->required();
  encode->add_option("y", cy)->required();
  encode->add_option("sigma", csigma, "Use (may be empty: \"\")")->required();
  encode->callback([&] {
    action = [&]() -> int {
      if (cy > 1) throw InputError("axiom output must be 0 or 1");
      if (!ksf::is_binary(csigma)) throw InputError("use must be a string of 0s and 1s");
      const ksf::Axiom a{cx, static_cast<int>(cy), csigma};
      const auto n = ksf::encode(a);
      emit(io::Json{{"axiom", io::to_json(a)}, {"code", n}}, std::to_string(n) + "\n");
      return Exit::ok;
    };
  });
  auto* decode = codec->add_subcommand("decode", "Axiom coded by n, if any");
  decode->add_option("n", code)->required();
  decode->callback([&] {
    action = [&]() -> int {
      const auto d = ksf::decode(code);
      if (d.axiom) {
        emit(io::Json{{"code", code}, {"axiom", io::to_json(*d.axiom)}}, ksf::to_string(*d.axiom) + "\n");
        return Exit::ok;
      }
      emit(io::Json{{"code", code}, {"axiom", nullptr}, {"reason", d.reason}}, "not an axiom: " + d.reason + "\n");
      return Exit::negative;
    };
  });

  auto* split = ksf_cmd->add_subcommand("split", "Search for a split below a functional");
  split->add_option("phi", file_a, "Functional")->required();
  mode_options(split);
  context_options(split);
  target_options(split);
  split->callback([&] {
    action = [&]() -> int {
      const auto c = io::condition_from_json(read_json(file_a), file_a);
      const auto tm = load_programs(program_specs);
      if (program_index >= tm.size()) throw InputError("--e: no program with that index");
      const auto b = parse_bounds(bounds_spec);
      const ksf::SplitTarget t{program_index, parse_real(join_real, "--C")};
      const auto s = ksf::find_split(c.phi, t, b, parse_mode(mode_name, real_a, real_b), tm);
      emit(io::split_report(s, b), io::render_split_human(s, b));
      return s ? Exit::ok : Exit::undecided;
    };
  });

  auto make_target = [&](const ksf::ToyMachine& tm) -> ksf::EssentialTarget {
    if (!families.empty()) {
      ksf::ConjunctTarget t;
      for (const auto& f : families) t.families.push_back(ksf::parse_family(f));
      return t;
    }
    if (program_index >= tm.size()) throw InputError("give --family, or --program for a split target");
    return ksf::SplitTarget{program_index, parse_real(join_real, "--C")};
  };

  std::string tau_text;
  auto* essential = ksf_cmd->add_subcommand("essential", "Search for an extension avoiding a string vector");
  essential->add_option("phi", file_a, "Functional")->required();
  essential->add_option("--tau", tau_text, "Vector, e.g. 01,11")->required();
  mode_options(essential);
  context_options(essential);
  target_options(essential);
  essential->callback([&] {
    action = [&]() -> int {
      const auto c = io::condition_from_json(read_json(file_a), file_a);
      const auto tm = load_programs(program_specs);
      const auto v = ksf::essential_up_to(parse_vector(tau_text), c.phi, make_target(tm), parse_bounds(bounds_spec),
                                          parse_mode(mode_name, real_a, real_b), tm, parse_env(reals));
      emit(io::to_json(v), io::render_human(v));
      return v.refuted ? Exit::negative : Exit::undecided;
    };
  });

  std::string tree_kind;
  std::size_t tree_k = 1, depth = 1;
  auto* tree = ksf_cmd->add_subcommand("tree", "Frontier of the tree T (conjuncts) or U (splits) at a depth");
  tree->add_option("kind", tree_kind, "T or U")->required()->check(CLI::IsMember({"T", "U"}));
  tree->add_option("phi", file_a, "Functional")->required();
  tree->add_option("--k", tree_k, "Vector size");
  tree->add_option("--depth", depth, "String length")->required();
  mode_options(tree);
  context_options(tree);
  target_options(tree);
  tree->callback([&] {
    action = [&]() -> int {
      const auto c = io::condition_from_json(read_json(file_a), file_a);
      const auto tm = load_programs(program_specs);
      const auto target = make_target(tm);
      if ((tree_kind == "T") != std::holds_alternative<ksf::ConjunctTarget>(target)) {
        throw InputError(tree_kind == "T" ? "tree T needs --family" : "tree U needs --program and no --family");
      }
      const auto b = parse_bounds(bounds_spec);
      const auto f = ksf::tree_frontier(c.phi, target, tree_k, depth, b, parse_mode(mode_name, real_a, real_b), tm,
                                        parse_env(reals));
      emit(io::frontier_to_json(f, tree_k, depth, b), io::render_frontier_human(f, tree_k, depth, b));
      return Exit::ok;
    };
  });

  std::vector<std::string> chain_text;
  std::string period = "0";
  auto* path = ksf_cmd->add_subcommand("path", "Reals along a chain of vectors; with --family, check they force it");
  path->add_option("chain", chain_text, "Vectors of increasing length, e.g. 1 11 111")->required();
  path->add_option("--period", period, "Continuation period");
  path->add_option("--phi", file_b, "Functional for the forcing check (default empty)");
  mode_options(path);
  context_options(path);
  path->add_option("--family", families, "Conjunct family to check");
  path->callback([&] {
    action = [&]() -> int {
      std::vector<ksf::StringVector> chain;
      for (const auto& v : chain_text) chain.push_back(parse_vector(v));
      const auto mode = parse_mode(mode_name, real_a, real_b);
      const auto rs = ksf::path_reals(chain, period, mode);
      ksf::Condition cond{file_b.empty() ? ksf::TuringFunctional{} : io::condition_from_json(read_json(file_b), file_b).phi,
                          {rs.begin(), rs.end()}};
      io::Json list = io::Json::array();
      std::string human = "reals:";
      for (const auto& r : rs) {
        list.push_back(io::to_json(r));
        human += " " + r.to_string();
      }
      human += "\n";
      io::Json s{{"reals", list}};
      int code = Exit::ok;
      if (!families.empty()) {
        const auto tm = load_programs(program_specs);
        const auto env = parse_env(reals);
        std::vector<ksf::Family> fs;
        for (const auto& f : families) fs.push_back(ksf::parse_family(f));
        bool all = true;
        for (const auto& i : ksf::instances(fs, env)) all = all && ksf::forces_qf(cond, i.sentence, mode, {&tm, env});
        s["forces_within_bounds"] = all;
        human += all ? "the condition forces every instance within the family bounds\n"
                     : "the condition fails to force some instance\n";
        code = all ? Exit::ok : Exit::negative;
      }
      emit(s, human);
      return code;
    };
  });

  std::vector<const char*> argv{"ksdeg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return Exit::usage;
  }
  if (!action) {
    err << "usage error: no command given\n";
    return Exit::usage;
  }
  try {
    return action();
  } catch (const formula::ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ksf::LanguageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const io::SchemaError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return Exit::input_error + 1;
  }
  return Exit::input_error;
}

}  // namespace ksdeg::cli
