#include "kedit/dataset.hpp"

#include "kedit/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

namespace kedit {

namespace {

std::string case_id_of(const nlohmann::json& item, std::size_t index) {
  if (item.contains("case_id")) {
    const auto& id = item["case_id"];
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number_integer()) return std::to_string(id.get<long long>());
  }
  return "case-" + std::to_string(index);
}

std::vector<std::string> string_list(const nlohmann::json& item,
                                     const char* field) {
  std::vector<std::string> out;
  if (!item.contains(field)) return out;
  for (const auto& v : item[field]) {
    if (v.is_string()) out.push_back(v.get<std::string>());
  }
  return out;
}

// Fills a rewrite prompt's "{}" hole and appends the new object, dodging a
// double period when the object carries its own.
std::string render_rewrite(const std::string& prompt,
                           const std::string& subject,
                           const std::string& object) {
  std::string filled = prompt;
  auto hole = filled.find("{}");
  if (hole != std::string::npos) filled.replace(hole, 2, subject);
  std::string text = collapse_ws(filled) + " " + object;
  if (object.empty() || object.back() != '.') text += ".";
  return text;
}

Instance parse_case(const nlohmann::json& item, const std::string& id,
                    SentenceTemplates& templates,
                    std::vector<std::string>& warnings) {
  Instance inst;
  inst.id = id;

  inst.questions = string_list(item, "questions");
  if (inst.questions.empty())
    throw std::runtime_error("no questions");

  if (!item.contains("new_answer") || !item["new_answer"].is_string())
    throw std::runtime_error("no new_answer");
  inst.new_answer = item["new_answer"].get<std::string>();
  inst.new_answer_aliases = string_list(item, "new_answer_alias");
  if (item.contains("answer") && item["answer"].is_string())
    inst.orig_answer = item["answer"].get<std::string>();
  inst.orig_answer_aliases = string_list(item, "answer_alias");

  for (const auto& rewrite :
       item.value("requested_rewrite", nlohmann::json::array())) {
    const std::string prompt = rewrite.at("prompt").get<std::string>();
    const std::string subject = rewrite.at("subject").get<std::string>();
    const std::string relation = rewrite.at("relation_id").get<std::string>();
    const std::string target_new =
        rewrite.at("target_new").at("str").get<std::string>();

    templates.add(relation,
                  SentenceTemplates::pattern_from_rewrite_prompt(prompt));

    EditedFact fact;
    fact.triple = Triple{subject, relation, target_new};
    validate_triple(fact.triple);
    fact.text = render_rewrite(prompt, subject, target_new);
    fact.source_instance = id;
    if (!fact.text_mentions_entities()) {
      warnings.push_back("case " + id +
                         ": edit text does not mention its entities: " +
                         fact.text);
    }
    inst.edits.push_back(std::move(fact));
  }

  const auto labeled =
      item.value("new_triples_labeled", nlohmann::json::array());
  const auto coded = item.value("new_triples", nlohmann::json::array());
  if (labeled.empty()) throw std::runtime_error("no gold chain");
  const bool use_coded_relations = coded.size() == labeled.size();
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const auto& row = labeled[i];
    Triple t{row.at(0).get<std::string>(), row.at(1).get<std::string>(),
             row.at(2).get<std::string>()};
    // Labeled rows carry human-readable relation names; the rewrites use
    // relation ids. Prefer the id-coded rows so edits and chain agree.
    if (use_coded_relations) t.relation = coded[i].at(1).get<std::string>();
    validate_triple(t);
    inst.gold_chain.push_back(std::move(t));
  }

  const std::string last =
      normalize_entity(inst.gold_chain.back().object);
  bool matches = last == normalize_entity(inst.new_answer);
  for (const auto& alias : inst.new_answer_aliases) {
    matches = matches || last == normalize_entity(alias);
  }
  if (!matches) {
    warnings.push_back("case " + id +
                       ": gold chain does not end at the new answer");
  }
  return inst;
}

} // namespace

LoadReport load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("dataset is not valid JSON: " + path + ": " +
                             e.what());
  }
  if (!doc.is_array())
    throw std::runtime_error("dataset must be a JSON array: " + path);

  LoadReport report;
  report.dataset.name = path;
  report.templates = SentenceTemplates::defaults();
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string id = case_id_of(doc[i], i);
    try {
      report.dataset.instances.push_back(
          parse_case(doc[i], id, report.templates, report.warnings));
    } catch (const std::exception& e) {
      report.warnings.push_back("case " + id + " skipped: " + e.what());
      ++report.skipped;
    }
  }
  if (report.dataset.instances.empty())
    throw std::runtime_error("no loadable cases in " + path);
  return report;
}

namespace {

// Inverse of pattern_from_rewrite_prompt: drop the object slot and its tail.
std::string prompt_from_pattern(const std::string& pattern) {
  std::string p = pattern;
  auto op = p.find("{o}");
  if (op != std::string::npos) {
    p = p.substr(0, op);
    while (!p.empty() && p.back() == ' ') p.pop_back();
  }
  auto sp = p.find("{s}");
  if (sp != std::string::npos) p.replace(sp, 3, "{}");
  return p;
}

} // namespace

void save_dataset(const Dataset& dataset, const SentenceTemplates& templates,
                  const std::string& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& inst : dataset.instances) {
    nlohmann::json item;
    item["case_id"] = inst.id;
    item["questions"] = inst.questions;
    item["answer"] = inst.orig_answer;
    item["answer_alias"] = inst.orig_answer_aliases;
    item["new_answer"] = inst.new_answer;
    item["new_answer_alias"] = inst.new_answer_aliases;

    item["requested_rewrite"] = nlohmann::json::array();
    for (const auto& edit : inst.edits) {
      auto pattern = templates.first_pattern(edit.triple.relation);
      if (!pattern) {
        throw std::runtime_error("no sentence template for relation '" +
                                 edit.triple.relation + "' while saving " +
                                 inst.id);
      }
      item["requested_rewrite"].push_back(
          {{"prompt", prompt_from_pattern(*pattern)},
           {"subject", edit.triple.subject},
           {"relation_id", edit.triple.relation},
           {"target_new", {{"str", edit.triple.object}}}});
    }

    item["new_triples_labeled"] = nlohmann::json::array();
    item["new_triples"] = nlohmann::json::array();
    for (const auto& t : inst.gold_chain) {
      item["new_triples_labeled"].push_back({t.subject, t.relation, t.object});
      item["new_triples"].push_back({t.subject, t.relation, t.object});
    }
    doc.push_back(std::move(item));
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  out << doc.dump(2) << '\n';
}

namespace {

// Union-find over normalized entity names; answer alias groups make object
// comparison tolerant to spelling variants.
class AliasGroups {
public:
  void add_group(const std::vector<std::string>& names) {
    std::string first;
    for (const auto& name : names) {
      const std::string norm = normalize_entity(name);
      if (norm.empty()) continue;
      parent_.emplace(norm, norm);
      if (first.empty()) {
        first = norm;
      } else {
        unite(first, norm);
      }
    }
  }

  bool same(const std::string& a_norm, const std::string& b_norm) {
    if (a_norm == b_norm) return true;
    if (parent_.find(a_norm) == parent_.end()) return false;
    if (parent_.find(b_norm) == parent_.end()) return false;
    return find(a_norm) == find(b_norm);
  }

private:
  std::map<std::string, std::string> parent_;

  std::string find(const std::string& x) {
    std::string root = x;
    while (parent_[root] != root) root = parent_[root];
    std::string cur = x;
    while (parent_[cur] != root) {
      std::string next = parent_[cur];
      parent_[cur] = root;
      cur = next;
    }
    return root;
  }

  void unite(const std::string& a, const std::string& b) {
    parent_[find(a)] = find(b);
  }
};

AliasGroups alias_groups_of(const Dataset& dataset) {
  AliasGroups groups;
  for (const auto& inst : dataset.instances) {
    std::vector<std::string> new_group = {inst.new_answer};
    new_group.insert(new_group.end(), inst.new_answer_aliases.begin(),
                     inst.new_answer_aliases.end());
    groups.add_group(new_group);

    std::vector<std::string> orig_group = {inst.orig_answer};
    orig_group.insert(orig_group.end(), inst.orig_answer_aliases.begin(),
                      inst.orig_answer_aliases.end());
    groups.add_group(orig_group);
  }
  return groups;
}

} // namespace

std::set<std::string> detect_conflicts(const Dataset& dataset) {
  AliasGroups aliases = alias_groups_of(dataset);

  // (subject, relation) -> edits elsewhere in the dataset
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      edit_index;
  for (const auto& inst : dataset.instances) {
    for (const auto& edit : inst.edits) {
      edit_index[edit.triple.subject_relation_key()].push_back(
          {inst.id, normalize_entity(edit.triple.object)});
    }
  }

  std::set<std::string> conflicted;
  for (const auto& inst : dataset.instances) {
    for (const auto& triple : inst.gold_chain) {
      auto it = edit_index.find(triple.subject_relation_key());
      if (it == edit_index.end()) continue;
      const std::string object = normalize_entity(triple.object);
      for (const auto& [owner, edit_object] : it->second) {
        if (owner == inst.id) continue;
        if (!aliases.same(object, edit_object)) {
          conflicted.insert(inst.id);
          break;
        }
      }
      if (conflicted.count(inst.id)) break;
    }
  }
  return conflicted;
}

Dataset build_clean(const Dataset& dataset, bool fixed_point) {
  Dataset clean = dataset;
  clean.name = dataset.name + "-clean";
  for (;;) {
    std::set<std::string> conflicted = detect_conflicts(clean);
    if (conflicted.empty()) break;
    clean.instances.erase(
        std::remove_if(clean.instances.begin(), clean.instances.end(),
                       [&](const Instance& inst) {
                         return conflicted.count(inst.id) > 0;
                       }),
        clean.instances.end());
    if (!fixed_point) break;
  }
  return clean;
}

Dataset build_hard(const Dataset& full, const std::set<std::string>& excluded,
                   std::vector<std::string>* warnings) {
  std::set<std::string> known;
  for (const auto& inst : full.instances) known.insert(inst.id);
  if (warnings != nullptr) {
    for (const auto& id : excluded) {
      if (!known.count(id))
        warnings->push_back("excluded id not in dataset: " + id);
    }
  }

  std::size_t max_edits = 0;
  for (const auto& inst : full.instances)
    max_edits = std::max(max_edits, inst.edits.size());

  Dataset hard;
  hard.name = full.name + "-hard";
  for (const auto& inst : full.instances) {
    if (inst.edits.size() == max_edits && !excluded.count(inst.id))
      hard.instances.push_back(inst);
  }
  return hard;
}

std::vector<Batch> make_batches(const Dataset& dataset,
                                std::optional<std::size_t> batch_size,
                                std::shared_ptr<EmbeddingProvider> provider,
                                std::optional<unsigned> shuffle_seed) {
  std::vector<std::size_t> order(dataset.instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (shuffle_seed) {
    std::mt19937 rng(*shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  const std::size_t group =
      batch_size.value_or(order.empty() ? 1 : order.size());
  if (group == 0) throw std::invalid_argument("batch size must be >= 1");

  std::vector<Batch> batches;
  for (std::size_t begin = 0; begin < order.size(); begin += group) {
    Batch batch;
    std::vector<EditedFact> facts;
    const std::size_t end = std::min(order.size(), begin + group);
    for (std::size_t i = begin; i < end; ++i) {
      batch.instance_indices.push_back(order[i]);
      const auto& edits = dataset.instances[order[i]].edits;
      facts.insert(facts.end(), edits.begin(), edits.end());
    }
    batch.store = std::make_shared<KnowledgeStore>(
        KnowledgeStore::build(std::move(facts), provider));
    batches.push_back(std::move(batch));
  }
  return batches;
}

StatsRow stats(const Dataset& dataset) {
  StatsRow row;
  row.instances = dataset.instances.size();
  if (row.instances == 0) return row;
  double hops = 0.0, edits = 0.0;
  for (const auto& inst : dataset.instances) {
    hops += static_cast<double>(inst.hops());
    edits += static_cast<double>(inst.edits.size());
  }
  row.mean_hops = hops / static_cast<double>(row.instances);
  row.mean_edits = edits / static_cast<double>(row.instances);
  row.conflicted = detect_conflicts(dataset).size();
  return row;
}

} // namespace kedit
