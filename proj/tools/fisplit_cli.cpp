// fisplit: classify fully invariant subgroups, run the theorem checks, reproduce the worked examples.
//
// exit codes: 0 success, 1 verification failure, 2 usage or parse error

#include <fisplit/fisplit.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace fisplit;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct Caps {
  std::uint64_t hom_budget = kDefaultHomBudget;
  std::uint64_t subgroups = kDefaultSubgroupCap;
  std::uint64_t endring = kDefaultEndringCap;
  int entry_bound = kDefaultEntryBound;

  SplitOptions options() const {
    SplitOptions o;
    o.hom_budget = hom_budget;
    o.subgroup_cap = subgroups;
    o.endring_cap = endring;
    o.entry_bound = entry_bound;
    return o;
  }
};

void add_caps(CLI::App* cmd, Caps& caps) {
  cmd->add_option("--budget-hom", caps.hom_budget, "largest Hom set enumerated by brute force")->capture_default_str();
  cmd->add_option("--cap-subgroups", caps.subgroups, "largest subgroup lattice enumerated")->capture_default_str();
  cmd->add_option("--cap-endring", caps.endring, "largest endomorphism ring enumerated")->capture_default_str();
  cmd->add_option("--entry-bound", caps.entry_bound, "coefficient bound for witness search")
      ->check(CLI::Range(0, 64))
      ->capture_default_str();
}

void write_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

void print_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) line += (i ? "  " : "") + (i + 1 < r.size() ? pad(r[i], width[i]) : r[i]);
    std::cout << line << "\n";
  }
}

std::string deciding_mode(const ClassifyRow& r) {
  for (const auto* v : {&r.primal.plain, &r.primal.strong, &r.dual.plain, &r.dual.strong})
    if (v->mode == Mode::Theorem) return "theorem";
  return "brute-force";
}

int cmd_classify(const std::string& spec, bool json, const Caps& caps) {
  FgAbGroup g = parse_group(spec);
  Session s(caps.options());
  Classification c = classify(g, s);
  if (json) {
    std::cout << to_json(c).dump(2) << "\n";
    return kOk;
  }
  std::cout << "group " << g.to_string() << "\n";
  if (c.partial) std::cout << "PARTIAL: " << c.note << "\n";
  std::vector<std::vector<std::string>> rows{{"generators", "order", "is_summand", "self_F_split", "strongly",
                                              "dual_self_F_split", "dual_strongly", "deciding_mode"}};
  for (const auto& r : c.rows)
    rows.push_back({r.F.to_string(), r.F.order() ? r.F.order()->get_str() : "infinite", r.summand ? "yes" : "no",
                    to_string(r.primal.plain.answer), to_string(r.primal.strong.answer), to_string(r.dual.plain.answer),
                    to_string(r.dual.strong.answer), deciding_mode(r)});
  print_table(rows);
  return kOk;
}

int cmd_verify(long max_order, const std::vector<std::string>& ids, bool json, const std::string& out,
               const Caps& caps) {
  validate_theorem_ids(ids);
  if (max_order < 1) throw CLI::ValidationError("--max-order", "must be at least 1");
  Session s(caps.options());
  VerifyResult v = verify(max_order, ids, s);
  ordered_json j = to_json(v);
  if (!out.empty()) write_file(out, j);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "corpus: " << v.corpus.groups.size() << " groups of order <= " << max_order << "\n";
    std::vector<std::vector<std::string>> rows{{"theorem", "result", "instances", "failures", "expected_failures",
                                                "skipped", "seconds"}};
    for (const auto& t : v.theorems) {
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.2f", t.elapsed_seconds);
      rows.push_back({t.id, t.passed() ? "pass" : "FAIL", std::to_string(t.instances), std::to_string(t.failures.size()),
                      std::to_string(t.expected_failures.size()), std::to_string(t.skipped.size()), secs});
    }
    print_table(rows);
    for (const auto& t : v.theorems)
      for (const auto& f : t.failures)
        std::cout << t.id << ": " << f.instance << ": expected " << f.expected << ", got " << f.got << "\n";
    std::cout << (v.passed() ? "all checks passed" : "verification failed") << "\n";
  }
  return v.passed() ? kOk : kFailed;
}

std::pair<long, long> parse_pq(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("expected 'p,q'", text.size());
  auto number = [&](std::size_t from, std::size_t to) {
    std::size_t i = from;
    while (i < to && text[i] == ' ') ++i;
    std::size_t start = i;
    long v = 0;
    while (i < to && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      if (v > 1'000'000) throw ParseError("number too large", start);
      ++i;
    }
    if (i == start) throw ParseError("expected a number", start);
    while (i < to && text[i] == ' ') ++i;
    if (i != to) throw ParseError("unexpected character", i);
    return v;
  };
  return {number(0, comma), number(comma + 1, text.size())};
}

int cmd_paper_examples(const std::vector<std::string>& pq, bool json, const std::string& out, const Caps& caps) {
  Session s(caps.options());
  ExamplesReport r;
  if (pq.empty()) {
    r = paper_examples_report(s);
  } else {
    std::vector<std::pair<long, long>> pairs;
    for (const auto& t : pq) {
      pairs.push_back(parse_pq(t));
      require_distinct_primes(pairs.back().first, pairs.back().second);
    }
    r = paper_examples_report(s, pairs, 0);
  }
  ordered_json j = to_json(r);
  if (!out.empty()) write_file(out, j);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& t : r.tables) {
      std::cout << "(p, q) = (" << t.p << ", " << t.q << "): " << t.group.to_string() << ", " << t.subgroup_count
                << " subgroups" << (t.all_fully_invariant() ? ", all fully invariant" : "") << "\n";
      std::vector<std::vector<std::string>> rows{{"label", "generators", "order", "self_F_split", "strongly",
                                                  "dual_self_F_split", "dual_strongly", "expected"}};
      for (const auto& row : t.rows) {
        std::string want;
        for (const auto& a : row.expected) want += std::string(want.empty() ? "" : "/") + to_string(a);
        rows.push_back({row.label, row.F.to_string(), row.F.order()->get_str(), to_string(row.got[0]),
                        to_string(row.got[1]), to_string(row.got[2]), to_string(row.got[3]), want});
      }
      print_table(rows);
    }
    if (!r.torsion.empty()) {
      std::size_t ok = 0;
      for (const auto& t : r.torsion) ok += t.matches();
      std::cout << "torsion splitting: " << ok << "/" << r.torsion.size() << " samples as expected\n";
    }
  }
  if (r.matches()) {
    if (!json) std::cout << "matches the stated classification\n";
    return kOk;
  }
  std::cerr << "differences from the stated classification:\n";
  for (const auto& m : r.mismatches()) std::cerr << "  " << m << "\n";
  return kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fully invariant splitness of finitely generated abelian groups"};
  app.require_subcommand(1);
  Caps caps;
  bool json = false;
  std::string out;

  std::string spec;
  auto* classify_cmd = app.add_subcommand("classify", "splitness flags for every fully invariant subgroup");
  classify_cmd->add_option("group", spec, "e.g. \"Z/4 x Z/3\", \"Z x Z/2\" or \"2,4,0\"")->required();
  classify_cmd->add_flag("--json", json, "structured output");
  add_caps(classify_cmd, caps);

  long max_order = 12;
  std::vector<std::string> ids = theorem_ids();
  auto* verify_cmd = app.add_subcommand("verify", "check the theorems over all groups up to an order");
  verify_cmd->add_option("--max-order", max_order, "corpus bound")->capture_default_str();
  verify_cmd->add_option("--theorems", ids, "comma separated theorem ids")->delimiter(',');
  verify_cmd->add_flag("--json", json, "print the report instead of a summary");
  verify_cmd->add_option("--out", out, "write the report here");
  add_caps(verify_cmd, caps);

  std::vector<std::string> pq;
  auto* examples_cmd = app.add_subcommand("paper-examples", "reproduce the Z/p^2 + Z/q tables and torsion splitting");
  examples_cmd->add_option("--pq", pq, "distinct primes p,q (repeatable)");
  examples_cmd->add_flag("--json", json, "print the report instead of tables");
  examples_cmd->add_option("--out", out, "write the report here");
  add_caps(examples_cmd, caps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(spec, json, caps);
    if (*verify_cmd) return cmd_verify(max_order, ids, json, out, caps);
    return cmd_paper_examples(pq, json, out, caps);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
