#pragma once

#include "kedit/embedding.hpp"
#include "kedit/store.hpp"
#include "kedit/templates.hpp"
#include "kedit/triple.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kedit {

// One multi-hop question whose answer changes under a set of injected edits.
struct Instance {
  std::string id;
  std::vector<std::string> questions; // paraphrases; the first one is run
  std::string orig_answer;
  std::vector<std::string> orig_answer_aliases;
  std::string new_answer;
  std::vector<std::string> new_answer_aliases;
  std::vector<EditedFact> edits;
  std::vector<Triple> gold_chain; // post-edit reasoning path
  std::size_t hops() const { return gold_chain.size(); }
};

struct Dataset {
  std::string name;
  std::vector<Instance> instances;
};

struct LoadReport {
  Dataset dataset;
  SentenceTemplates templates; // defaults + rewrite-prompt phrasings
  std::vector<std::string> warnings;
  std::size_t skipped = 0;
};

// Reads a JSON array of benchmark cases (the MQuAKE shape: case_id,
// questions, answer/answer_alias, new_answer/new_answer_alias,
// requested_rewrite, new_triples_labeled [+ new_triples for relation ids]).
// Malformed cases are skipped with warnings; an unreadable file or zero
// loadable cases throws std::runtime_error.
LoadReport load_dataset(const std::string& path);

// Writes instances back out in the same case shape, deriving rewrite
// prompts from the relations' sentence patterns.
void save_dataset(const Dataset& dataset, const SentenceTemplates& templates,
                  const std::string& path);

// Ids of instances whose gold chain is contradicted by another instance's
// edit: same (subject, relation), different object. Object comparison is
// alias-aware across each instance's answer alias groups.
std::set<std::string> detect_conflicts(const Dataset& dataset);

// Removes conflicted instances; by default repeats until no conflicts
// remain (removal can eliminate the edits that made others conflicted).
Dataset build_clean(const Dataset& dataset, bool fixed_point = true);

// Instances with the maximum edit count of `full` (computed before any
// exclusion), minus the excluded ids. Unknown excluded ids produce warnings.
Dataset build_hard(const Dataset& full, const std::set<std::string>& excluded,
                   std::vector<std::string>* warnings = nullptr);

struct Batch {
  std::vector<std::size_t> instance_indices; // into Dataset::instances
  std::shared_ptr<const KnowledgeStore> store; // edits of the whole batch
};

// Splits instances into consecutive groups of `batch_size` (the last group
// may be smaller); nullopt means one batch with every instance. With a
// shuffle seed the instance order is permuted deterministically first.
std::vector<Batch> make_batches(const Dataset& dataset,
                                std::optional<std::size_t> batch_size,
                                std::shared_ptr<EmbeddingProvider> provider,
                                std::optional<unsigned> shuffle_seed = {});

struct StatsRow {
  std::size_t instances = 0;
  double mean_hops = 0.0;
  double mean_edits = 0.0;
  std::size_t conflicted = 0;
};

StatsRow stats(const Dataset& dataset);

} // namespace kedit
