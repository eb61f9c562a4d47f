#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mono/io.hpp"
#include "mono/orbit.hpp"

namespace mono {

// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 property violation,
// 4 budget exhausted (inconclusive).
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kViolation = 3,
  kBudget = 4
};

struct CommandResult {
  int status = kOk;
  std::string human;
  std::vector<std::pair<std::string, std::string>> machine;
  // Raw document output (factorization or chart text); when present it is
  // the entire stdout, so the command pipes cleanly into a file.
  std::optional<std::string> document;

  std::string render() const {
    if (document) return *document;
    std::string s = human;
    if (!s.empty() && s.back() != '\n') s += '\n';
    if (!machine.empty()) {
      s += "---\n";
      for (const auto& [k, v] : machine) s += k + "=" + v + "\n";
    }
    return s;
  }
};

namespace cli_detail {

struct UsageError : Error {
  using Error::Error;
};

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;
  std::map<std::string, bool> switches;

  bool has(const std::string& name) const {
    return flags.count(name) || (switches.count(name) && switches.at(name));
  }
  std::string get(const std::string& name, const std::string& fallback) const {
    auto it = flags.find(name);
    return it == flags.end() ? fallback : it->second;
  }
  long long get_int(const std::string& name, long long fallback) const {
    auto it = flags.find(name);
    if (it == flags.end()) return fallback;
    long long v;
    if (!io_detail::parse_int(it->second, v))
      throw UsageError("flag --" + name + " needs an integer");
    return v;
  }
};

// value_flags take one argument; everything else starting with '-' is a switch
inline Args parse_args(const std::vector<std::string>& argv, std::size_t from,
                       const std::vector<std::string>& value_flags,
                       const std::vector<std::string>& switch_flags) {
  Args a;
  auto is_value = [&](const std::string& name) {
    for (const auto& f : value_flags)
      if (f == name) return true;
    return false;
  };
  auto is_switch = [&](const std::string& name) {
    for (const auto& f : switch_flags)
      if (f == name) return true;
    return false;
  };
  for (std::size_t i = from; i < argv.size(); ++i) {
    const std::string& t = argv[i];
    if (t.size() > 1 && t[0] == '-' && !std::isdigit(static_cast<unsigned char>(t[1]))) {
      std::string name = t.substr(t[1] == '-' ? 2 : 1);
      const auto eq = name.find('=');
      if (eq != std::string::npos) {
        std::string value = name.substr(eq + 1);
        name = name.substr(0, eq);
        if (!is_value(name)) throw UsageError("unknown flag --" + name);
        a.flags[name] = value;
        continue;
      }
      if (is_switch(name)) {
        a.switches[name] = true;
      } else if (is_value(name)) {
        if (i + 1 >= argv.size())
          throw UsageError("flag --" + name + " needs a value");
        a.flags[name] = argv[++i];
      } else {
        throw UsageError("unknown flag --" + name);
      }
    } else {
      a.positional.push_back(t);
    }
  }
  return a;
}

inline std::string move_token(const MoveRecord& m) {
  return (m.dir == MoveDir::Right ? "R" : "L") + std::to_string(m.index);
}

inline std::string moves_string(const std::vector<MoveRecord>& moves) {
  std::string s;
  for (const MoveRecord& m : moves) {
    if (!s.empty()) s += ' ';
    s += move_token(m);
  }
  return s;
}

inline std::string inline_factorization(const Factorization& f) {
  std::string s;
  for (const Sl2z& m : f.entries()) {
    if (!s.empty()) s += ";";
    s += format_matrix(m);
  }
  return s;
}

inline const char* usage_text() {
  return
      "usage: mono <command> [args]\n"
      "\n"
      "commands:\n"
      "  normalize <file> [--moves] [--budget N] [--entry-bound B]\n"
      "            [--max-bound M] [--jobs J]\n"
      "      certificate (p,q,k) and canonical form of a factorization;\n"
      "      --moves also searches for an explicit move sequence\n"
      "  equiv <a> <b>\n"
      "      decide whether two factorization files are related by\n"
      "      elementary transformations\n"
      "  orbit <file> [--entry-bound B] [--budget N] [--escalate-to M]\n"
      "            [--jobs J]\n"
      "      breadth-first search of the move orbit, pruned at the entry\n"
      "      bound, reporting canonical reachability\n"
      "  classify <descriptor>\n"
      "      total space of the fibration described by the descriptor file\n"
      "  chart validate <file>\n"
      "      check the chart conditions; reports counts when valid\n"
      "  chart canonical -p P -q Q -k K [--out FILE] [--dot FILE]\n"
      "      build the standard chart with p nucleons and boundary units\n"
      "  chart word <chart> <crossings>\n"
      "      intersection word of a transverse path\n"
      "  sweep [--max-p P] [--max-k K] [--seeds S] [--steps N]\n"
      "        [--entry-bound B] [--budget N] [--max-bound M] [--jobs J]\n"
      "      scramble canonical forms, recover certificates, and check\n"
      "      canonical reachability (--entry-bound 0 skips reachability)\n"
      "  scramble <file> --seed S --steps N [--out FILE]\n"
      "      apply a seeded pseudorandom move sequence\n"
      "  help\n"
      "\n"
      "files: factorizations are one [[a,b],[c,d]] matrix per line; '#'\n"
      "starts a comment. See README.md for the chart and descriptor formats.\n";
}

}  // namespace cli_detail

inline CommandResult cli_dispatch(const std::vector<std::string>& argv);

namespace cli_detail {

inline CommandResult cmd_normalize(const Args& a) {
  if (a.positional.size() != 1)
    throw UsageError("normalize needs a factorization file");
  const Factorization f = load_factorization(a.positional[0]);
  NormalForm nf = normalize(f);
  CommandResult r;
  r.human = "p=" + std::to_string(nf.p) + " q=" + std::to_string(nf.q) +
            " k=" + std::to_string(nf.k) + "\n";
  r.human += "length " + std::to_string(f.size()) + ", canonical form:\n";
  for (const Sl2z& m : nf.canonical.entries())
    r.human += "  " + format_matrix(m) + "\n";
  r.machine.emplace_back("p", std::to_string(nf.p));
  r.machine.emplace_back("q", std::to_string(nf.q));
  r.machine.emplace_back("k", std::to_string(nf.k));
  r.machine.emplace_back("n", std::to_string(f.size()));
  r.machine.emplace_back("canonical", inline_factorization(nf.canonical));
  if (a.has("moves")) {
    EscalationOptions opt;
    opt.initial_bound = a.get_int("entry-bound", 0);
    opt.max_bound = a.get_int("max-bound", 2048);
    opt.node_budget = static_cast<std::size_t>(a.get_int("budget", 1000000));
    opt.jobs = static_cast<unsigned>(a.get_int("jobs", 1));
    nf.moves = find_normalizing_moves(f, opt);
    if (nf.moves) {
      r.human += "moves: " + moves_string(*nf.moves) + "\n";
      r.machine.emplace_back("moves_found", "yes");
      r.machine.emplace_back("moves", moves_string(*nf.moves));
    } else {
      r.human += "move search inconclusive\n";
      r.machine.emplace_back("moves_found", "no");
      r.status = kBudget;
    }
  }
  return r;
}

inline CommandResult cmd_equiv(const Args& a) {
  if (a.positional.size() != 2)
    throw UsageError("equiv needs two factorization files");
  const Factorization f1 = load_factorization(a.positional[0]);
  const Factorization f2 = load_factorization(a.positional[1]);
  const EquivalenceResult res = equivalent(f1, f2);
  CommandResult r;
  switch (res.verdict) {
    case Verdict::Equivalent:
      r.human = "equivalent (certificate: " + res.reason + ")";
      r.machine.emplace_back("result", "equivalent");
      break;
    case Verdict::NotEquivalent:
      r.human = "not equivalent (" + res.reason + ")";
      r.machine.emplace_back("result", "not-equivalent");
      break;
    case Verdict::NotAdmissible:
      r.human = "not admissible (" + res.reason + ")";
      r.machine.emplace_back("result", "not-admissible");
      break;
  }
  r.machine.emplace_back("reason", res.reason);
  return r;
}

inline CommandResult cmd_orbit(const Args& a) {
  if (a.positional.size() != 1)
    throw UsageError("orbit needs a factorization file");
  const Factorization f = load_factorization(a.positional[0]);
  auto max_entry = max_abs_entry(f);
  if (!max_entry || *max_entry > kMaxOrbitEntryBound)
    throw Error("entries exceed the bounded-search range");
  const long long bound =
      a.get_int("entry-bound", std::max<long long>(64, 2 * *max_entry));
  const std::size_t budget =
      static_cast<std::size_t>(a.get_int("budget", 1000000));
  const unsigned jobs = static_cast<unsigned>(a.get_int("jobs", 1));
  const long long escalate_to = a.get_int("escalate-to", 0);

  OrbitReport rep;
  if (escalate_to > 0) {
    EscalationOptions opt;
    opt.initial_bound = bound;
    opt.max_bound = escalate_to;
    opt.node_budget = budget;
    opt.jobs = jobs;
    rep = enumerate_orbit_escalating(f, opt);
  } else {
    rep = enumerate_orbit(f, bound, budget, jobs);
  }

  CommandResult r;
  r.human += std::string("canonical reached: ") +
             (rep.canonical_reached ? "yes" : "no") + "\n";
  r.human += "states visited: " + std::to_string(rep.states_visited) + "\n";
  r.human += "pruned by bound: " + std::to_string(rep.pruned_by_bound) + "\n";
  r.human += "entry bound used: " + std::to_string(rep.entry_bound_used) + "\n";
  if (rep.canonical_reached)
    r.human += "witness: " + moves_string(*rep.witness_moves) + "\n";
  else if (rep.frontier_exhausted)
    r.human += "in-bound orbit exhausted without reaching the canonical form\n";
  else
    r.human += "node budget exhausted\n";
  r.machine.emplace_back("reached", rep.canonical_reached ? "yes" : "no");
  r.machine.emplace_back("visited", std::to_string(rep.states_visited));
  r.machine.emplace_back("pruned", std::to_string(rep.pruned_by_bound));
  r.machine.emplace_back("frontier_exhausted",
                         rep.frontier_exhausted ? "yes" : "no");
  r.machine.emplace_back("entry_bound", std::to_string(rep.entry_bound_used));
  if (rep.witness_moves)
    r.machine.emplace_back("witness", moves_string(*rep.witness_moves));
  if (!rep.canonical_reached) r.status = kBudget;
  return r;
}

inline CommandResult cmd_classify(const Args& a) {
  if (a.positional.size() != 1)
    throw UsageError("classify needs a descriptor file");
  const SblfDescriptor d = load_descriptor(a.positional[0]);
  const Classification c = classify(d);
  const ManifoldInvariants inv = manifold_invariants(c.manifold);
  CommandResult r;
  r.human = "manifold: " + to_string(c.manifold) + "\n";
  r.human += "euler=" + std::to_string(inv.euler) + " pi1=" + inv.pi1 +
             " b1=" + std::to_string(inv.b1) + "\n";
  r.human += "case: " + c.case_tag;
  if (c.pqk)
    r.human += " (p=" + std::to_string((*c.pqk)[0]) +
               " q=" + std::to_string((*c.pqk)[1]) +
               " k=" + std::to_string((*c.pqk)[2]) + ")";
  r.human += "\n";
  r.human += "blowups=" + std::to_string(c.blowups) + "\n";
  if (!c.stripped_candidates.empty()) {
    r.human += "candidates before blow-ups:\n";
    for (const ManifoldId& x : c.stripped_candidates)
      r.human += "  " + to_string(x) + "\n";
  }
  r.machine.emplace_back("manifold", to_string(c.manifold));
  r.machine.emplace_back("euler", std::to_string(inv.euler));
  r.machine.emplace_back("pi1", inv.pi1);
  r.machine.emplace_back("b1", std::to_string(inv.b1));
  r.machine.emplace_back("case", c.case_tag);
  if (c.pqk) {
    r.machine.emplace_back("p", std::to_string((*c.pqk)[0]));
    r.machine.emplace_back("q", std::to_string((*c.pqk)[1]));
    r.machine.emplace_back("k", std::to_string((*c.pqk)[2]));
  }
  r.machine.emplace_back("blowups", std::to_string(c.blowups));
  if (!c.stripped_candidates.empty()) {
    std::string joined;
    for (const ManifoldId& x : c.stripped_candidates) {
      if (!joined.empty()) joined += "; ";
      joined += to_string(x);
    }
    r.machine.emplace_back("candidates", joined);
  }
  return r;
}

inline CommandResult cmd_chart(const Args& a) {
  if (a.positional.empty()) throw UsageError("chart needs a subcommand");
  const std::string& sub = a.positional[0];
  CommandResult r;
  if (sub == "validate") {
    if (a.positional.size() != 2)
      throw UsageError("chart validate needs a chart file");
    const Chart c = load_chart(a.positional[1]);
    const ValidationReport report = validate(c);
    if (report.ok()) {
      r.human = report.has_hoops ? "ok (with hoops)" : "ok";
      r.machine.emplace_back("valid", "yes");
      r.machine.emplace_back("hoops", report.has_hoops ? "yes" : "no");
      const ChartCounts counts = chart_counts(c);
      r.machine.emplace_back("black", std::to_string(counts.black_count));
      r.machine.emplace_back("p_signed", std::to_string(counts.p_signed));
      r.machine.emplace_back("boundary", to_string(counts.boundary_word));
      if (counts.boundary_qk) {
        r.machine.emplace_back("q", std::to_string(counts.boundary_qk->first));
        r.machine.emplace_back("k",
                               std::to_string(counts.boundary_qk->second));
      }
    } else {
      r.human = "invalid:\n";
      for (const Violation& v : report.violations)
        r.human +=
            "  clause " + v.clause + " at " + v.element + ": " + v.message + "\n";
      r.machine.emplace_back("valid", "no");
      r.machine.emplace_back("violations",
                             std::to_string(report.violations.size()));
      r.status = kViolation;
    }
    return r;
  }
  if (sub == "canonical") {
    long long p = a.get_int("p", -1), q = a.get_int("q", -1),
              k = a.get_int("k", -1);
    if (p < 0 || q < 0 || k < 0)
      throw UsageError("chart canonical needs -p P -q Q -k K (all >= 0)");
    const Chart c = canonical_chart(p, static_cast<int>(q), k);
    const std::string text = serialize_chart(c);
    if (a.has("dot")) write_text_file(a.get("dot", ""), to_dot(c));
    if (a.has("out")) {
      write_text_file(a.get("out", ""), text);
      const ChartCounts counts = chart_counts(c);
      r.human = "wrote " + a.get("out", "") + "\n";
      r.machine.emplace_back("black", std::to_string(counts.black_count));
      r.machine.emplace_back("p_signed", std::to_string(counts.p_signed));
      r.machine.emplace_back("boundary", to_string(counts.boundary_word));
    } else {
      r.document = text;
    }
    return r;
  }
  if (sub == "word") {
    if (a.positional.size() != 3)
      throw UsageError("chart word needs a chart file and a crossings file");
    const Chart c = load_chart(a.positional[1]);
    const CrossingSequence path =
        parse_crossings(read_text_file(a.positional[2]));
    const GeneratorWord w = intersection_word(c, path);
    const Sl2z value = eval_word(w);
    r.human = "word: " + format_word(w) + "\n";
    r.human += "value: " + format_matrix(value) + "\n";
    r.machine.emplace_back("word", format_word(w));
    r.machine.emplace_back("value", format_matrix(value));
    r.machine.emplace_back("length", std::to_string(w.size()));
    return r;
  }
  throw UsageError("unknown chart subcommand '" + sub + "'");
}

inline CommandResult cmd_sweep(const Args& a) {
  SweepOptions opt;
  opt.max_p = a.get_int("max-p", 1);
  opt.max_k = a.get_int("max-k", 4);
  opt.seeds = static_cast<int>(a.get_int("seeds", 5));
  opt.scramble_steps = static_cast<std::size_t>(a.get_int("steps", 200));
  opt.entry_bound = a.get_int("entry-bound", 48);
  opt.max_entry_bound = a.get_int("max-bound", 768);
  opt.node_budget = static_cast<std::size_t>(a.get_int("budget", 200000));
  opt.jobs = static_cast<unsigned>(a.get_int("jobs", 1));
  const SweepSummary s = verify_theorem_sweep(opt);
  CommandResult r;
  for (const SweepRow& row : s.rows) {
    r.human += "p=" + std::to_string(row.p) + " q=" + std::to_string(row.q) +
               " k=" + std::to_string(row.k) +
               " seed=" + std::to_string(row.seed) + ": certificate " +
               (row.certificate_ok ? "ok" : "FAILED");
    switch (row.reach) {
      case Reach::Skipped: r.human += ", reachability skipped"; break;
      case Reach::Reached:
        r.human += ", reached (visited " + std::to_string(row.states_visited) +
                   ", bound " + std::to_string(row.entry_bound_used) + ")";
        break;
      case Reach::BudgetExhausted: r.human += ", budget exhausted"; break;
      case Reach::BoundExhausted: r.human += ", bound exhausted"; break;
      case Reach::EntryOverflow: r.human += ", entries out of range"; break;
    }
    r.human += "\n";
  }
  r.human += "rows=" + std::to_string(s.rows.size()) +
             " certificate_failures=" + std::to_string(s.certificate_failures) +
             " reached=" + std::to_string(s.reached) +
             " inconclusive=" + std::to_string(s.inconclusive) +
             " skipped=" + std::to_string(s.skipped) + "\n";
  r.machine.emplace_back("rows", std::to_string(s.rows.size()));
  r.machine.emplace_back("certificate_failures",
                         std::to_string(s.certificate_failures));
  r.machine.emplace_back("reached", std::to_string(s.reached));
  r.machine.emplace_back("inconclusive", std::to_string(s.inconclusive));
  r.machine.emplace_back("skipped", std::to_string(s.skipped));
  if (!s.all_certificates_ok())
    r.status = kViolation;
  else if (s.inconclusive > 0)
    r.status = kBudget;
  return r;
}

inline CommandResult cmd_scramble(const Args& a) {
  if (a.positional.size() != 1)
    throw UsageError("scramble needs a factorization file");
  if (!a.flags.count("seed") || !a.flags.count("steps"))
    throw UsageError("scramble needs --seed S and --steps N");
  const Factorization f = load_factorization(a.positional[0]);
  const long long seed = a.get_int("seed", 0);
  const long long steps = a.get_int("steps", 0);
  if (steps < 0) throw UsageError("steps must be >= 0");
  const Factorization out = scramble(f, static_cast<std::uint64_t>(seed),
                                     static_cast<std::size_t>(steps));
  CommandResult r;
  const std::string text = serialize_factorization(out);
  if (a.has("out")) {
    write_text_file(a.get("out", ""), text);
    r.human = "wrote " + a.get("out", "") + "\n";
    r.machine.emplace_back("n", std::to_string(out.size()));
  } else {
    r.document = text;
  }
  return r;
}

}  // namespace cli_detail

inline CommandResult cli_dispatch(const std::vector<std::string>& argv) {
  using namespace cli_detail;
  CommandResult r;
  try {
    if (argv.empty()) {
      r.human = usage_text();
      r.status = kUsage;
      return r;
    }
    const std::string& cmd = argv[0];
    if (cmd == "help" || cmd == "--help" || cmd == "-h") {
      r.human = usage_text();
      return r;
    }
    const std::vector<std::string> value_flags = {
        "budget", "entry-bound", "max-bound", "jobs", "escalate-to",
        "seed",   "steps",       "max-p",     "max-k", "seeds",
        "p",      "q",           "k",         "dot",   "out"};
    const std::vector<std::string> switch_flags = {"moves"};
    Args a = parse_args(argv, 1, value_flags, switch_flags);
    if (cmd == "normalize") return cmd_normalize(a);
    if (cmd == "equiv") return cmd_equiv(a);
    if (cmd == "orbit") return cmd_orbit(a);
    if (cmd == "classify") return cmd_classify(a);
    if (cmd == "chart") return cmd_chart(a);
    if (cmd == "sweep") return cmd_sweep(a);
    if (cmd == "scramble") return cmd_scramble(a);
    throw UsageError("unknown command '" + cmd + "'");
  } catch (const cli_detail::UsageError& e) {
    r.human = std::string("error: ") + e.what() + "\n\n" + usage_text();
    r.status = kUsage;
  } catch (const BudgetError& e) {
    r.human = std::string("error: ") + e.what();
    r.status = kBudget;
  } catch (const ParseError& e) {
    r.human = std::string("error: ") + e.what();
    r.status = kParse;
  } catch (const Error& e) {
    r.human = std::string("error: ") + e.what();
    r.status = kParse;
  } catch (const std::exception& e) {
    r.human = std::string("error: ") + e.what();
    r.status = kParse;
  }
  return r;
}

}  // namespace mono
