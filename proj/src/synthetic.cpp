#include "tuplesim/synthetic.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "tuplesim/errors.hpp"
#include "tuplesim/util.hpp"

namespace tuplesim {

namespace {

std::string tag(const char* prefix, int a) { return prefix + std::to_string(a); }

std::string tag2(const char* prefix, int a, const char* mid, int b) {
  return prefix + std::to_string(a) + mid + std::to_string(b);
}

}  // namespace

SyntheticBenchmark generate_synthetic_benchmark(const SyntheticParams& params) {
  if (params.n_families < 2 || params.pairs_per_family < 3 ||
      params.topics_per_family < 2 || params.n_synonym_groups < 3 ||
      params.topics_per_group < 2 || params.n_fillers < 4) {
    throw std::invalid_argument("generate_synthetic_benchmark: degenerate params");
  }
  Rng rng(params.seed);
  SyntheticBenchmark bench;
  Lexicon& lex = bench.lexicon;

  // --- Relation families: agents act on objects through a family verb, with
  // family topic nouns gluing members into one domain cluster.
  std::vector<std::vector<std::string>> agents(params.n_families);
  std::vector<std::vector<std::string>> objects(params.n_families);
  std::vector<std::string> verbs;
  std::vector<std::vector<std::string>> topics(params.n_families);
  for (int f = 0; f < params.n_families; ++f) {
    for (int i = 0; i < params.pairs_per_family; ++i) {
      agents[f].push_back(tag2("ag", f, "x", i));
      objects[f].push_back(tag2("ob", f, "x", i));
      lex.add(agents[f].back(), Pos::Noun);
      lex.add(objects[f].back(), Pos::Noun);
    }
    verbs.push_back(tag("vb", f));
    lex.add(verbs.back(), Pos::Verb);
    for (int t = 0; t < params.topics_per_family; ++t) {
      topics[f].push_back(tag2("tp", f, "x", t));
      lex.add(topics[f].back(), Pos::Noun);
    }
  }

  // --- Synonym groups: the bigram "md hd" and the unigram "sy" share their
  // group topic contexts, so the unigram paraphrases the compound.
  std::vector<std::string> modifiers, heads, synonyms;
  std::vector<std::vector<std::string>> group_topics(params.n_synonym_groups);
  for (int g = 0; g < params.n_synonym_groups; ++g) {
    modifiers.push_back(tag("md", g));
    heads.push_back(tag("hd", g));
    synonyms.push_back(tag("sy", g));
    lex.add(modifiers.back(), Pos::Adj);
    lex.add(heads.back(), Pos::Noun);
    lex.add(synonyms.back(), Pos::Noun);
    for (int t = 0; t < params.topics_per_group; ++t) {
      group_topics[g].push_back(tag2("gt", g, "x", t));
      lex.add(group_topics[g].back(), Pos::Noun);
    }
  }

  // --- Pseudo-unigram grid for holistic question generation: every modifier
  // pairs with every head, so each compound has sharing distractors.
  std::vector<std::string> pseudo_mods, pseudo_heads;
  for (int i = 0; i < params.pseudo_modifiers; ++i) {
    pseudo_mods.push_back(tag("pm", i));
    lex.add(pseudo_mods.back(), Pos::Noun);
  }
  for (int j = 0; j < params.pseudo_heads; ++j) {
    pseudo_heads.push_back(tag("ph", j));
    lex.add(pseudo_heads.back(), Pos::Noun);
  }
  for (int i = 0; i < params.pseudo_modifiers; ++i) {
    for (int j = 0; j < params.pseudo_heads; ++j) {
      lex.add(pseudo_mods[i] + "_" + pseudo_heads[j], Pos::Noun);
    }
  }

  std::vector<std::string> fillers;
  for (int i = 0; i < params.n_fillers; ++i) {
    fillers.push_back(tag("fl", i));
    lex.add(fillers.back(), i % 2 == 0 ? Pos::Noun : Pos::Other);
  }

  // --- Corpus sentences.
  std::vector<std::string> sentences;
  const auto topic_of = [&](int f, int t) {
    return topics[f][static_cast<std::size_t>(t) % topics[f].size()];
  };
  for (int f = 0; f < params.n_families; ++f) {
    for (int i = 0; i < params.pairs_per_family; ++i) {
      for (int rep = 0; rep < params.relation_reps; ++rep) {
        sentences.push_back(topic_of(f, i + rep) + " " + agents[f][i] + " " +
                            verbs[f] + " " + objects[f][i] + " " +
                            topic_of(f, i + rep + 1));
      }
      for (int rep = 0; rep < params.topic_reps; ++rep) {
        sentences.push_back(topic_of(f, rep) + " " + agents[f][i] + " " +
                            topic_of(f, rep + 1));
        sentences.push_back(topic_of(f, rep + 1) + " " + objects[f][i] + " " +
                            topic_of(f, rep));
      }
    }
  }
  for (int g = 0; g < params.n_synonym_groups; ++g) {
    const auto& gt = group_topics[g];
    for (int rep = 0; rep < params.synonym_reps; ++rep) {
      const auto& left = gt[static_cast<std::size_t>(rep) % gt.size()];
      const auto& right = gt[static_cast<std::size_t>(rep + 1) % gt.size()];
      sentences.push_back(left + " " + modifiers[g] + " " + heads[g] + " " + right);
      sentences.push_back(right + " " + synonyms[g] + " " + left);
    }
  }
  for (int i = 0; i < params.pseudo_modifiers; ++i) {
    for (int j = 0; j < params.pseudo_heads; ++j) {
      for (int rep = 0; rep < params.pseudo_reps; ++rep) {
        const auto& fa = fillers[rng.index(fillers.size())];
        const auto& fb = fillers[rng.index(fillers.size())];
        // Adjacent components merge into the pseudo-unigram while tokenizing.
        sentences.push_back(fa + " " + pseudo_mods[i] + " " + pseudo_heads[j] +
                            " " + fb);
      }
    }
  }
  for (int c = 0; c < params.pseudo_modifiers + params.pseudo_heads; ++c) {
    const auto& word = c < params.pseudo_modifiers
                           ? pseudo_mods[c]
                           : pseudo_heads[c - params.pseudo_modifiers];
    for (int rep = 0; rep < params.pseudo_reps; ++rep) {
      const auto& fa = fillers[rng.index(fillers.size())];
      const auto& fb = fillers[rng.index(fillers.size())];
      sentences.push_back(fa + " " + word + " " + fb);
    }
  }
  {
    int emitted = 0;
    while (emitted < params.filler_tokens) {
      const int len = 8 + static_cast<int>(rng.index(5));
      std::string sentence;
      for (int i = 0; i < len; ++i) {
        if (i > 0) sentence += ' ';
        sentence += fillers[rng.index(fillers.size())];
      }
      sentences.push_back(std::move(sentence));
      emitted += len;
    }
  }
  rng.shuffle(sentences);
  std::ostringstream corpus;
  for (const auto& s : sentences) corpus << s << ".\n";
  bench.corpus = corpus.str();

  // --- Analogy questions: the solution pair shares the stem's family, the
  // distractor pairs come from four other families.
  for (int qi = 0; qi < params.n_analogy_questions; ++qi) {
    const int f = qi % params.n_families;
    const int stem_i = static_cast<int>(rng.index(
        static_cast<std::size_t>(params.pairs_per_family)));
    const int sol_i =
        (stem_i + 1 +
         static_cast<int>(rng.index(
             static_cast<std::size_t>(params.pairs_per_family - 1)))) %
        params.pairs_per_family;

    Question q;
    q.id = tag("analogy:", qi);
    q.kind = QuestionKind::Analogy5;
    q.stem = {agents[f][stem_i], objects[f][stem_i]};

    std::vector<int> others;
    for (int g = 0; g < params.n_families; ++g) {
      if (g != f) others.push_back(g);
    }
    rng.shuffle(others);
    std::vector<std::vector<std::string>> choices;
    choices.push_back({agents[f][sol_i], objects[f][sol_i]});
    for (int d = 0; d < 4; ++d) {
      const int g = others[static_cast<std::size_t>(d) % others.size()];
      const int i = static_cast<int>(rng.index(
          static_cast<std::size_t>(params.pairs_per_family)));
      choices.push_back({agents[g][i], objects[g][i]});
    }
    std::vector<int> slots(choices.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
    rng.shuffle(slots);
    q.choices.resize(choices.size());
    for (std::size_t i = 0; i < choices.size(); ++i) {
      q.choices[static_cast<std::size_t>(slots[i])] = std::move(choices[i]);
    }
    q.solution = slots[0];
    bench.analogy5.push_back(std::move(q));
  }

  // --- Paraphrase questions: solution is the group synonym; distractors are
  // the stem's own components, two foreign synonyms and two fillers.
  for (int qi = 0; qi < params.n_paraphrase_questions; ++qi) {
    const int g = qi % params.n_synonym_groups;
    Question q;
    q.id = tag("paraphrase:", qi);
    q.kind = QuestionKind::Paraphrase7;
    q.stem = {modifiers[g], heads[g]};

    std::vector<std::vector<std::string>> choices;
    choices.push_back({synonyms[g]});
    choices.push_back({modifiers[g]});
    choices.push_back({heads[g]});
    const int g2 = (g + 1 +
                    static_cast<int>(rng.index(
                        static_cast<std::size_t>(params.n_synonym_groups - 1)))) %
                   params.n_synonym_groups;
    int g3 = g2;
    while (g3 == g || g3 == g2) {
      g3 = static_cast<int>(rng.index(
          static_cast<std::size_t>(params.n_synonym_groups)));
    }
    choices.push_back({synonyms[g2]});
    choices.push_back({synonyms[g3]});
    const auto fa = rng.index(fillers.size());
    auto fb = rng.index(fillers.size());
    if (fb == fa) fb = (fb + 1) % fillers.size();
    choices.push_back({fillers[fa]});
    choices.push_back({fillers[fb]});

    std::vector<int> slots(choices.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
    rng.shuffle(slots);
    q.choices.resize(choices.size());
    for (std::size_t i = 0; i < choices.size(); ++i) {
      q.choices[static_cast<std::size_t>(slots[i])] = std::move(choices[i]);
    }
    q.solution = slots[0];
    bench.paraphrase7.push_back(std::move(q));
  }

  // --- Prototypicality ground truth: paradigm pairs are the first two pairs
  // of each family; scored pairs degrade from in-family to unrelated.
  for (int f = 0; f < params.n_families; ++f) {
    ParadigmSet set;
    set.subcategory = tag("family", f);
    set.pairs.emplace_back(agents[f][0], objects[f][0]);
    set.pairs.emplace_back(agents[f][1], objects[f][1]);
    bench.paradigms.push_back(set);

    const int last = params.pairs_per_family - 1;
    const int g = (f + 1) % params.n_families;
    bench.scored_pairs.push_back(
        {set.subcategory, {agents[f][2], objects[f][2]}, 3.0});
    bench.scored_pairs.push_back(
        {set.subcategory, {agents[f][last - 1], objects[f][last]}, 2.5});
    bench.scored_pairs.push_back(
        {set.subcategory, {agents[f][last], objects[g][last]}, 1.5});
    bench.scored_pairs.push_back(
        {set.subcategory,
         {fillers[static_cast<std::size_t>(2 * f) % fillers.size()],
          fillers[static_cast<std::size_t>(2 * f + 1) % fillers.size()]},
         0.5});
  }
  return bench;
}

}  // namespace tuplesim
