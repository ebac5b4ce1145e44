#include "softprove/verifier.hpp"

#include <algorithm>
#include <cstdio>

#include "softprove/errors.hpp"

namespace softprove {

std::string_view to_string(InvalidClass c) {
  switch (c) {
    case InvalidClass::MissingPlausiblePremise: return "MissingPlausiblePremise";
    case InvalidClass::NoDiscernibleArgument: return "NoDiscernibleArgument";
  }
  return "MissingPlausiblePremise";
}

std::optional<InvalidClass> parse_invalid_class(std::string_view text) {
  if (text == "MissingPlausiblePremise") return InvalidClass::MissingPlausiblePremise;
  if (text == "NoDiscernibleArgument") return InvalidClass::NoDiscernibleArgument;
  return std::nullopt;
}

std::set<std::string> EthicalCase::fact_ids() const {
  std::set<std::string> ids;
  for (const auto& f : nl_facts) ids.insert(f.id);
  return ids;
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::ValidNonRedundant: return "ValidNonRedundant";
    case OutcomeKind::ValidRedundant: return "ValidRedundant";
    case OutcomeKind::InvalidMismatch: return "InvalidMismatch";
    case OutcomeKind::InvalidNoProof: return "InvalidNoProof";
  }
  return "InvalidNoProof";
}

GoalSpec open_goal(const GoalSpec& goal) {
  GoalSpec out = goal;
  for (std::size_t i = 0; i < out.goal_atom.args.size(); ++i)
    out.goal_atom.args[i] = Term::variable("A" + std::to_string(i + 1));
  return out;
}

KnowledgeBase assemble_kb(const RuleDocument& library, std::span<const Rule> srl_facts,
                          std::span<const Rule> generated, bool open_goals) {
  KnowledgeBase kb;
  kb.add_all(library.rules);
  kb.add_all(srl_facts);
  kb.add_all(generated);
  for (const auto& g : library.goal_decls) kb.add_goal(open_goals ? open_goal(g) : g);
  return kb;
}

VerificationOutcome verify_case(const EthicalCase& c, const KnowledgeBase& kb,
                                const EmbeddingStore& store, const SolverConfig& config) {
  if (kb.goals().empty()) throw ConfigError("knowledge base declares no goals");
  VerificationOutcome out;
  out.proof = prove_all_goals(kb, kb.goals(), store, config);
  if (!out.proof) {
    out.kind = OutcomeKind::InvalidNoProof;
    return out;
  }
  out.entailed = out.proof->violation;
  if (out.entailed != c.hypothesis) {
    out.kind = OutcomeKind::InvalidMismatch;
    return out;
  }
  const std::set<std::string> used = facts_in_proof(out.proof->result, kb);
  for (const auto& id : c.fact_ids())
    if (!used.contains(id)) out.unused_fact_ids.insert(id);
  out.kind = out.unused_fact_ids.empty() ? OutcomeKind::ValidNonRedundant
                                         : OutcomeKind::ValidRedundant;
  return out;
}

int percent_tenths(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  return static_cast<int>((2000 * part + whole) / (2 * whole));
}

std::string format_tenths(int tenths) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%d.%d", tenths / 10, tenths % 10);
  return buf;
}

int MetricsRow::valid_tenths() const { return percent_tenths(valid, total); }
int MetricsRow::invalid_tenths() const { return percent_tenths(invalid, total); }
int MetricsRow::non_redundant_tenths() const { return percent_tenths(non_redundant, valid); }
int MetricsRow::redundant_tenths() const { return percent_tenths(redundant, valid); }

namespace {

void count(MetricsRow& row, OutcomeKind kind) {
  ++row.total;
  switch (kind) {
    case OutcomeKind::ValidNonRedundant:
      ++row.valid;
      ++row.non_redundant;
      break;
    case OutcomeKind::ValidRedundant:
      ++row.valid;
      ++row.redundant;
      break;
    case OutcomeKind::InvalidMismatch:
    case OutcomeKind::InvalidNoProof:
      ++row.invalid;
      break;
  }
}

}  // namespace

MetricsReport aggregate_metrics(std::span<const std::pair<int, OutcomeKind>> outcomes) {
  MetricsReport report;
  report.empty = outcomes.empty();
  for (const auto& [iteration, kind] : outcomes) {
    count(report.overall, kind);
    count(report.per_iteration[iteration], kind);
  }
  return report;
}

std::string render_metrics_table(const MetricsReport& report, const std::string& title) {
  static const char* kHeads[] = {"Iteration", "N", "Valid", "Invalid",
                                 "Valid and non-Redundant", "Valid but Redundant"};
  std::vector<std::vector<std::string>> rows;
  rows.emplace_back(std::begin(kHeads), std::end(kHeads));
  auto add = [&](const std::string& label, const MetricsRow& r) {
    rows.push_back({label, std::to_string(r.total), format_tenths(r.valid_tenths()),
                    format_tenths(r.invalid_tenths()), format_tenths(r.non_redundant_tenths()),
                    format_tenths(r.redundant_tenths())});
  };
  for (const auto& [iteration, row] : report.per_iteration) add(std::to_string(iteration), row);
  if (report.per_iteration.size() != 1) add("all", report.overall);

  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());

  std::string out;
  if (!title.empty()) out += title + "\n";
  if (report.empty) out += "(no outcomes)\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += "  ";
      // Label column left-aligned, numbers right-aligned.
      if (i == 0) {
        out += r[i] + std::string(width[i] - r[i].size(), ' ');
      } else {
        out += std::string(width[i] - r[i].size(), ' ') + r[i];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

}  // namespace softprove
