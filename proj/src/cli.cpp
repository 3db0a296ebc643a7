#include "ssc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssc/certify.hpp"
#include "ssc/disting.hpp"
#include "ssc/error.hpp"
#include "ssc/reach.hpp"
#include "ssc/search.hpp"
#include "ssc/shuffle.hpp"

namespace ssc {

namespace {

using nlohmann::json;

json big_json(const BigInt& x) {
  if (x <= BigInt(std::numeric_limits<std::uint64_t>::max())) return static_cast<std::uint64_t>(x);
  return x.str();
}

std::string grid_name(std::size_t m, std::size_t n) { return std::to_string(m) + "x" + std::to_string(n); }

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const auto m = std::stoul(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    const auto rest = s.substr(x + 1);
    const auto n = std::stoul(rest, &used);
    if (used != rest.size() || m == 0 || n == 0) throw std::invalid_argument(s);
    return {m, n};
  } catch (const std::logic_error&) {
    throw InputError("expected an instance like 3x4, got '" + s + "'");
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw InputError(path + ": cannot write");
  f << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError(path + ": cannot open");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

unsigned default_threads() {
  const char* env = std::getenv("SSC_THREADS");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoul(env, &used);
    if (used != std::string(env).size() || v == 0 || v > 1024) throw std::invalid_argument(env);
    return static_cast<unsigned>(v);
  } catch (const std::logic_error&) {
    throw InputError(std::string("SSC_THREADS must be a positive integer, got '") + env + "'");
  }
}

struct Context {
  std::ostream& out;
  bool as_json = false;
  unsigned threads = 1;

  void emit(const json& j) const { out << j.dump(2) << '\n'; }
};

int cmd_bound(const Context& c, std::size_t m, std::size_t n) {
  const auto f = bound_f(m, n);
  json j{{"command", "bound"}, {"m", m}, {"n", n}, {"bound", big_json(f)}};
  std::optional<BigInt> count;
  if (m * n <= kEnumerationGuard) {
    count = count_valid_subsets(m, n);
    j["valid_subsets"] = big_json(*count);
    j["matches"] = *count == f;
  }
  if (c.as_json) {
    c.emit(j);
  } else {
    c.out << "f(" << m << "," << n << ") = " << f << '\n';
    if (count) c.out << "valid subsets: " << *count << (*count == f ? " (matches)" : " (MISMATCH)") << '\n';
  }
  if (count && *count != f) throw InvariantError("valid-subset count differs from f(m,n)");
  return kExitOk;
}

int cmd_complexity(const Context& c, const std::string& left_path, const std::string& right_path) {
  const Dfa left = read_dfa_file(left_path);
  const Dfa right = read_dfa_file(right_path);
  if (left.alphabet() != right.alphabet()) {
    throw InputError(right_path + ": field 'alphabet': differs from the alphabet of " + left_path);
  }
  const auto kl = state_complexity(left);
  const auto kr = state_complexity(right);
  const auto ks = shuffle_state_complexity(left, right);
  const auto f = bound_f(kl, kr);
  const bool met = BigInt(ks) == f;
  if (BigInt(ks) > f) throw InvariantError("shuffle complexity exceeds f(m,n)");
  if (c.as_json) {
    c.emit({{"command", "complexity"},
            {"left", left_path},
            {"right", right_path},
            {"kappa_left", kl},
            {"kappa_right", kr},
            {"kappa_shuffle", ks},
            {"bound", big_json(f)},
            {"met", met}});
  } else {
    c.out << "κ(K) = " << kl << '\n'
          << "κ(L) = " << kr << '\n'
          << "κ(K ⧢ L) = " << ks << '\n'
          << "f(" << kl << "," << kr << ") = " << f << '\n'
          << "bound " << (met ? "met" : "not met") << '\n';
  }
  return kExitOk;
}

int cmd_reach(const Context& c, std::size_t m, std::size_t n, const std::string& alphabet,
              const std::string& checkpoint_dir, bool resume, std::optional<std::size_t> stop_after) {
  const auto letters = alphabet == "full" ? ExtremalAlphabet::full(m, n)
                                          : ExtremalAlphabet::letters(m, n, read_letter_file(alphabet, m, n));
  BfsOptions options;
  options.workers = c.threads;
  if (!checkpoint_dir.empty()) options.checkpoint_dir = checkpoint_dir;
  if (resume && checkpoint_dir.empty()) throw InputError("--resume needs --checkpoint-dir");
  options.resume = resume;
  options.stop_after_generations = stop_after;
  const auto r = bfs_reach(m, n, letters, options);
  if (c.as_json) {
    auto j = to_json(r);
    j["command"] = "reach";
    c.emit(j);
  } else {
    c.out << "reach " << grid_name(m, n) << " (" << (letters.is_full() ? "full alphabet" : "letter list") << ", "
          << r.letter_count << " letters): reached " << r.reached << " of " << r.bound << ", "
          << (r.complete ? "complete" : "incomplete") << '\n'
          << "generations: " << r.generations << ", elapsed: " << r.elapsed_seconds << " s, lineage "
          << r.lineage << '\n';
    if (!r.unreached_sample.empty()) {
      c.out << "unreached sample:";
      for (auto x : r.unreached_sample) c.out << ' ' << x;
      c.out << '\n';
    }
  }
  return kExitOk;
}

int cmd_certify(const Context& c, std::size_t m, std::size_t n, const std::vector<std::string>& base,
                bool trust_base, bool no_search, bool no_reductions, std::uint64_t budget,
                const std::string& output) {
  std::set<std::pair<std::size_t, std::size_t>> facts;
  json checked = json::array();
  for (const auto& b : base) {
    const auto [bm, bn] = parse_grid(b);
    if (!trust_base) {
      BfsOptions options;
      options.workers = c.threads;
      const auto r = bfs_reach(bm, bn, ExtremalAlphabet::full(bm, bn), options);
      checked.push_back({{"m", bm}, {"n", bn}, {"complete", r.complete}});
      if (!r.complete) throw InputError("base fact " + b + " does not hold: BFS reached " + std::to_string(r.reached) +
                                        " of " + std::to_string(r.bound));
    }
    facts.insert({bm, bn});
  }
  CertifyOptions options;
  options.predecessor_search = !no_search;
  options.use_reductions = !no_reductions;
  options.search.letter_budget = budget;
  const auto result = certify(m, n, facts, options);
  std::optional<VerifyResult> verified;
  if (result.ok()) {
    verified = verify_certificate(result.certificate);
    if (!verified->ok) throw InvariantError("generated certificate fails verification: " + verified->problems.front());
  }
  if (!output.empty()) write_json_file(output, to_json(result.certificate));
  std::size_t entries = 0;
  for (const auto& [key, inst] : result.certificate.instances) entries += inst.entries.size();
  if (c.as_json) {
    auto j = to_json(result, false);
    j["command"] = "certify";
    j["verified"] = verified.has_value() && verified->ok;
    j["entries"] = entries;
    j["base_checked"] = checked;
    c.emit(j);
  } else {
    c.out << "certify " << grid_name(m, n) << ": " << result.certificate.instances.size() << " instances, " << entries
          << " orbit representatives, " << (result.ok() ? "complete" : "INCOMPLETE") << ", verified: "
          << (verified && verified->ok ? "yes" : "no") << '\n';
    for (const auto& [kind, count] : result.counts) c.out << "  " << to_string(kind) << ": " << count << '\n';
    if (!result.gaps.empty()) {
      c.out << "gaps: " << result.gaps.size() << '\n';
      for (std::size_t i = 0; i < result.gaps.size() && i < 32; ++i) {
        c.out << "  " << grid_name(result.gaps[i].m, result.gaps[i].n) << " subset " << result.gaps[i].subset << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_verify(const Context& c, const std::string& path) {
  const auto cert = certificate_from_json(read_json_file(path));
  const auto v = verify_certificate(cert);
  if (c.as_json) {
    c.emit({{"command", "verify"}, {"file", path}, {"ok", v.ok}, {"problems", v.problems}});
  } else {
    c.out << path << ": " << (v.ok ? "certificate verified" : "certificate REJECTED") << '\n';
    for (const auto& p : v.problems) c.out << "  " << p << '\n';
  }
  return v.ok ? kExitOk : kExitInputError;
}

int cmd_distinguish(const Context& c, std::size_t m, std::size_t n, bool list_edges) {
  const auto [left, right] = ternary_witness(m, n);
  const auto product = build_shuffle_nfa(left, right);
  const auto& nfa = product.nfa();
  const auto edges = unique_in_subgraph(nfa);
  const auto closure = uniquely_distinguishable(nfa);
  const bool all = closure.size() == nfa.state_count();
  std::map<std::string, std::size_t> per_letter;
  json edge_list = json::array();
  for (const auto& e : edges) {
    const auto& letter = nfa.alphabet()[e.letter];
    ++per_letter[letter];
    const auto [p, q] = product.cell_of(e.from);
    const auto [r, s] = product.cell_of(e.to);
    edge_list.push_back({{"letter", letter}, {"from", {p, q}}, {"to", {r, s}}});
  }
  std::optional<std::size_t> classes;
  if (nfa.state_count() <= kOracleStateLimit) classes = brute_subset_classes(nfa);
  if (c.as_json) {
    json j{{"command", "distinguish"},
           {"m", m},
           {"n", n},
           {"states", nfa.state_count()},
           {"distinguishable", closure.size()},
           {"all_distinguishable", all},
           {"edge_count", edges.size()},
           {"edges_per_letter", per_letter},
           {"edges", edge_list}};
    if (classes) j["oracle_classes"] = *classes;
    c.emit(j);
  } else {
    if (all) {
      c.out << "all " << nfa.state_count() << " states uniquely distinguishable";
    } else {
      c.out << closure.size() << " of " << nfa.state_count() << " states uniquely distinguishable";
    }
    c.out << "; subgraph edges: " << edges.size() << '\n';
    for (const auto& [letter, count] : per_letter) c.out << "  " << letter << ": " << count << " edges\n";
    if (classes) {
      c.out << "subset oracle: " << *classes << " classes among " << (std::size_t{1} << nfa.state_count())
            << " subsets\n";
    }
    if (list_edges) {
      for (const auto& e : edge_list) {
        c.out << "  " << e["letter"].get<std::string>() << ": (" << e["from"][0] << "," << e["from"][1] << ") -> ("
              << e["to"][0] << "," << e["to"][1] << ")\n";
      }
    }
  }
  return kExitOk;
}

int cmd_search(const Context& c, std::size_t m, std::size_t n, std::size_t k, bool bound_only,
               bool distinguish_finals, std::size_t cap, std::optional<std::size_t> min_up_to, bool count_right,
               bool ignore_finals, const std::string& output) {
  SearchOptions options;
  options.bound_only = bound_only;
  options.distinguish_finals = distinguish_finals;
  options.result_cap = cap;
  options.workers = c.threads;
  if (min_up_to) {
    const auto found = min_witness_alphabet(m, n, k, *min_up_to, options);
    if (c.as_json) {
      c.emit({{"command", "search"},
              {"mode", "min-alphabet"},
              {"m", m},
              {"n", n},
              {"k_min", k},
              {"k_max", *min_up_to},
              {"min_alphabet", found ? json(*found) : json(nullptr)},
              {"lower_bound", m >= 2 && n >= 2 ? json(min_alphabet_lower_bound(m, n)) : json(nullptr)}});
    } else if (found) {
      c.out << "minimal witness alphabet for (" << m << "," << n << "): " << *found << '\n';
    } else {
      c.out << "no witness alphabet for (" << m << "," << n << ") in " << k << ".." << *min_up_to << '\n';
    }
    return kExitOk;
  }
  if (count_right) {
    const auto count = count_nonisomorphic_witness_right_dfas(m, n, k, ignore_finals, options);
    if (c.as_json) {
      c.emit({{"command", "search"},
              {"mode", "count-right"},
              {"m", m},
              {"n", n},
              {"k", k},
              {"ignore_finals", ignore_finals},
              {"right_dfas", count}});
    } else {
      c.out << "non-isomorphic right DFAs meeting f(" << m << "," << n << ") over " << k << " letters"
            << (ignore_finals ? " (final states ignored)" : "") << ": " << count << '\n';
    }
    return kExitOk;
  }
  const auto r = max_shuffle_complexity(m, n, k, options);
  const auto j = to_json(r);
  if (!output.empty()) write_json_file(output, j["witnesses"]);
  if (c.as_json) {
    auto o = j;
    o["command"] = "search";
    c.emit(o);
  } else {
    c.out << j["summary"].dump() << '\n';
    c.out << "witness classes: " << r.witness_count << " (" << r.witness_pairs << " pairs counting final states)\n";
  }
  return kExitOk;
}

int cmd_okhotin(const Context& c, std::size_t n) {
  const auto l = okhotin_witness(n);
  const auto kappa = shuffle_state_complexity(universal_dfa(l.alphabet()), l);
  const auto expected = ideal_bound(n);
  const bool matches = BigInt(kappa) == expected;
  if (c.as_json) {
    c.emit({{"command", "okhotin"},
            {"n", n},
            {"kappa_left", state_complexity(l)},
            {"kappa_shuffle", kappa},
            {"bound", big_json(expected)},
            {"matches", matches}});
  } else {
    c.out << "κ(Σ* ⧢ L) = " << kappa << (matches ? " = " : " != ") << "2^{" << n << "−2}+1" << '\n';
  }
  if (!matches) throw InvariantError("Okhotin witness misses 2^(n-2)+1");
  return kExitOk;
}

int cmd_direct(const Context& c, std::size_t m, std::size_t n) {
  const auto r = direct_smaller_check(m, n);
  if (c.as_json) {
    c.emit({{"command", "direct"}, {"m", m}, {"n", n}, {"checked", r.checked}, {"exceptions", r.exceptions}});
  } else {
    c.out << "direct-smaller check " << grid_name(m, n) << ": " << r.checked << " subsets of size >= 3, "
          << r.exceptions.size() << " exceptions\n";
    for (auto x : r.exceptions) c.out << "  " << x << '\n';
  }
  return kExitOk;
}

int cmd_alphabet(const Context& c, std::size_t m, std::size_t n, const std::string& check, const std::string& output) {
  if (!check.empty()) {
    const auto letters = read_letter_file(check, m, n);
    const bool ok = alphabet_sufficiency(m, n, letters);
    if (c.as_json) {
      c.emit({{"command", "alphabet"}, {"m", m}, {"n", n}, {"letters", letters.size()}, {"sufficient", ok}});
    } else {
      c.out << check << ": " << letters.size() << " letters, " << (ok ? "sufficient" : "not sufficient") << '\n';
    }
    return kExitOk;
  }
  const auto letters = greedy_alphabet(m, n);
  if (!output.empty()) write_letter_file(output, letters);
  if (c.as_json) {
    c.emit({{"command", "alphabet"}, {"m", m}, {"n", n}, {"letters", letters.size()}, {"alphabet", letters_to_json(letters)}});
  } else {
    c.out << "greedy alphabet for " << grid_name(m, n) << ": " << letters.size() << " letters\n";
    for (const auto& a : letters) c.out << "  " << to_string(a) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"State complexity workbench for the shuffle of regular languages", "ssc"};
  app.require_subcommand(1);
  bool as_json = false;
  unsigned threads = 0;
  app.add_flag("--json", as_json, "Emit one JSON object instead of text");
  app.add_option("--threads", threads, "Worker threads (default: SSC_THREADS or 1)")->check(CLI::Range(1U, 1024U));

  std::size_t m = 0, n = 0, k = 0;
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("m", m, "States of the left operand")->required()->check(CLI::PositiveNumber);
    sub->add_option("n", n, "States of the right operand")->required()->check(CLI::PositiveNumber);
  };

  auto* bound = app.add_subcommand("bound", "Print f(m,n) and cross-check it by counting valid subsets");
  add_grid(bound);

  std::string left_path, right_path;
  auto* complexity = app.add_subcommand("complexity", "State complexity of the shuffle of two DFA files");
  complexity->add_option("left", left_path, "Left DFA (JSON)")->required();
  complexity->add_option("right", right_path, "Right DFA (JSON)")->required();

  std::string alphabet = "full", checkpoint_dir;
  bool resume = false;
  std::optional<std::size_t> stop_after;
  auto* reach = app.add_subcommand("reach", "Breadth-first reachability in D_{m,n}");
  add_grid(reach);
  reach->add_option("--alphabet", alphabet, "'full' or a letter-list file");
  reach->add_option("--checkpoint-dir", checkpoint_dir, "Write a checkpoint after every generation");
  reach->add_flag("--resume", resume, "Continue from the latest checkpoint");
  reach->add_option("--stop-after", stop_after, "Stop after this many generations in total");

  std::vector<std::string> base;
  bool trust_base = false, no_search = false, no_reductions = false;
  std::uint64_t budget = 0;
  std::string output;
  auto* cert = app.add_subcommand("certify", "Build and verify a reachability certificate for all m' <= m, n' <= n");
  add_grid(cert);
  cert->add_option("--base", base, "Base fact instance such as 3x4 (checked by BFS unless --trust-base)");
  cert->add_flag("--trust-base", trust_base, "Accept base facts without running BFS");
  cert->add_flag("--no-search", no_search, "Do not fall back to predecessor search");
  cert->add_flag("--no-reductions", no_reductions, "Use only base facts and predecessor search");
  cert->add_option("--budget", budget, "Letters tried per subset in predecessor search (0: all)");
  cert->add_option("--output", output, "Write the certificate JSON here");

  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "Check a certificate file");
  verify->add_option("file", cert_path, "Certificate JSON")->required();

  bool list_edges = false;
  auto* dist = app.add_subcommand("distinguish", "Unique distinguishability for the ternary witness pair");
  add_grid(dist);
  dist->add_flag("--edges", list_edges, "List the unique in-transition subgraph");

  bool bound_only = false, distinguish_finals = false, count_right = false, ignore_finals = false;
  std::size_t cap = 16;
  std::optional<std::size_t> min_up_to;
  auto* search = app.add_subcommand("search", "Exhaustive witness search over k-letter DFA pairs");
  add_grid(search);
  search->add_option("k", k, "Alphabet size (lowest size with --min-alphabet)")->required()->check(CLI::PositiveNumber);
  search->add_flag("--bound-only", bound_only, "Only look for pairs meeting f(m,n)");
  search->add_flag("--distinguish-finals", distinguish_finals, "Count pairs differing in final states separately");
  search->add_option("--cap", cap, "Witnesses to report");
  search->add_option("--min-alphabet", min_up_to, "Find the least alphabet size in k..VALUE meeting f(m,n)");
  search->add_flag("--count-right", count_right, "Count non-isomorphic right DFAs of witness pairs");
  search->add_flag("--ignore-finals", ignore_finals, "With --count-right, ignore final states");
  search->add_option("--output", output, "Write the witness pairs here");

  std::size_t okhotin_n = 0;
  auto* okhotin = app.add_subcommand("okhotin", "Shuffle of Sigma* with the n-state ideal witness");
  okhotin->add_option("n", okhotin_n, "States, at least 3")->required();

  auto* direct = app.add_subcommand("direct", "Check that every valid subset of size >= 3 has a smaller predecessor");
  add_grid(direct);

  std::string check;
  auto* alpha = app.add_subcommand("alphabet", "Greedy letter selection, or a sufficiency check of a letter file");
  add_grid(alpha);
  alpha->add_option("--check", check, "Letter-list file to test");
  alpha->add_option("--output", output, "Write the greedy alphabet here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    Context c{out, as_json, threads ? threads : default_threads()};
    if (*bound) return cmd_bound(c, m, n);
    if (*complexity) return cmd_complexity(c, left_path, right_path);
    if (*reach) return cmd_reach(c, m, n, alphabet, checkpoint_dir, resume, stop_after);
    if (*cert) return cmd_certify(c, m, n, base, trust_base, no_search, no_reductions, budget, output);
    if (*verify) return cmd_verify(c, cert_path);
    if (*dist) return cmd_distinguish(c, m, n, list_edges);
    if (*search) {
      return cmd_search(c, m, n, k, bound_only, distinguish_finals, cap, min_up_to, count_right, ignore_finals,
                        output);
    }
    if (*okhotin) return cmd_okhotin(c, okhotin_n);
    if (*direct) return cmd_direct(c, m, n);
    if (*alpha) return cmd_alphabet(c, m, n, check, output);
  } catch (const InvariantError& e) {
    err << "internal invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitInputError;
}

}  // namespace ssc
