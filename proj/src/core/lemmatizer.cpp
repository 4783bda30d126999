#include "autosas/lemmatizer.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "autosas/error.hpp"

namespace autosas {

namespace {

enum class Condition { None, Doubled, VowelConsonant, PlainS };

struct ParsedRule {
  std::string replacement;
  Condition condition = Condition::None;
  bool dictionary_only = false;
};

ParsedRule parse_replacement(std::string_view field) {
  ParsedRule out;
  const auto bar = field.find('|');
  out.replacement = std::string(field.substr(0, bar));
  if (bar == std::string_view::npos) return out;
  std::string_view flags = field.substr(bar + 1);
  while (!flags.empty()) {
    const auto comma = flags.find(',');
    std::string_view flag = flags.substr(0, comma);
    if (flag == "doubled") out.condition = Condition::Doubled;
    else if (flag == "vc") out.condition = Condition::VowelConsonant;
    else if (flag == "plain-s") out.condition = Condition::PlainS;
    else if (flag == "dict") out.dictionary_only = true;
    flags = comma == std::string_view::npos ? std::string_view{} : flags.substr(comma + 1);
  }
  return out;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool holds(Condition cond, std::string_view stem) {
  const std::size_t n = stem.size();
  switch (cond) {
    case Condition::None:
      return true;
    case Condition::Doubled:
      return n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]);
    case Condition::VowelConsonant: {
      if (n < 2) return false;
      const char last = stem[n - 1];
      if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
      if (!is_vowel(stem[n - 2])) return false;
      return n == 2 || !is_vowel(stem[n - 3]);
    }
    case Condition::PlainS:
      return n >= 1 && stem[n - 1] != 's' && stem[n - 1] != 'u' && stem[n - 1] != 'i';
  }
  return true;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string strip_possessive(std::string_view w) {
  if (w.size() > 2 && w.substr(w.size() - 2) == "'s") return std::string(w.substr(0, w.size() - 2));
  if (w.size() > 4 && w.substr(w.size() - 4) == "\xE2\x80\x99s") return std::string(w.substr(0, w.size() - 4));
  return std::string(w);
}

void add_rules(LemmaRules& r, std::string_view tag, std::initializer_list<std::pair<const char*, const char*>> rules) {
  for (const auto& [suffix, replacement] : rules) r.rules.push_back({std::string(tag), suffix, replacement});
}

void add_exceptions(LemmaRules& r, std::string_view tag,
                    std::initializer_list<std::pair<const char*, const char*>> pairs) {
  auto& table = r.exceptions[std::string(tag)];
  for (const auto& [word, lemma] : pairs) table.emplace(word, lemma);
}

}  // namespace

LemmaRules LemmaRules::english() {
  LemmaRules r;
  for (std::string_view tag : {"NNS", "NNPS"}) {
    add_rules(r, tag, {{"sses", "ss"}, {"ies", "y"}, {"ies", "ie|dict"}, {"xes", "x"}, {"zes", "z"},
                       {"ches", "ch"}, {"shes", "sh"}, {"oes", "oe|dict"}, {"oes", "o"},
                       {"ses", "se|dict"}, {"ses", "s|dict"}, {"ves", "ve"}, {"ves", "f|dict"},
                       {"men", "man"}, {"s", "|plain-s"}});
  }
  add_rules(r, "VBZ", {{"ies", "y"}, {"sses", "ss"}, {"ches", "ch"}, {"shes", "sh"}, {"xes", "x"},
                       {"zzes", "zz"}, {"oes", "o"}, {"s", "|plain-s"}, {"ses", "s|dict"}});
  for (std::string_view tag : {"VBD", "VBN"}) {
    add_rules(r, tag, {{"ied", "y"}, {"ed", "|doubled,dict"}, {"bbed", "b"}, {"dded", "d"},
                       {"gged", "g"}, {"mmed", "m"}, {"nned", "n"}, {"pped", "p"}, {"rred", "r"},
                       {"tted", "t"}, {"ed", "e|vc,dict"}, {"ed", ""}, {"ed", "e|dict"}});
  }
  add_rules(r, "VBG", {{"ing", "|doubled,dict"}, {"bbing", "b"}, {"dding", "d"}, {"gging", "g"},
                       {"mming", "m"}, {"nning", "n"}, {"pping", "p"}, {"rring", "r"},
                       {"tting", "t"}, {"ing", "e|vc,dict"}, {"ing", ""}, {"ing", "e|dict"}});
  add_rules(r, "JJR", {{"ier", "y"}, {"gger", "g"}, {"tter", "t"}, {"nner", "n"}, {"dder", "d"},
                       {"mmer", "m"}, {"er", "e|vc,dict"}, {"er", ""}, {"er", "e|dict"}});
  add_rules(r, "JJS", {{"iest", "y"}, {"ggest", "g"}, {"ttest", "t"}, {"nnest", "n"},
                       {"ddest", "d"}, {"mmest", "m"}, {"est", "e|vc,dict"}, {"est", ""},
                       {"est", "e|dict"}});

  add_exceptions(r, "NN", {
      {"men", "man"}, {"women", "woman"}, {"children", "child"}, {"people", "person"},
      {"mice", "mouse"}, {"geese", "goose"}, {"feet", "foot"}, {"teeth", "tooth"},
      {"lives", "life"}, {"knives", "knife"}, {"wives", "wife"}, {"leaves", "leaf"},
      {"wolves", "wolf"}, {"halves", "half"}, {"calves", "calf"}, {"shelves", "shelf"},
      {"loaves", "loaf"}, {"thieves", "thief"}, {"selves", "self"}, {"species", "species"},
      {"series", "series"}, {"bacteria", "bacterium"}, {"criteria", "criterion"},
      {"phenomena", "phenomenon"}, {"analyses", "analysis"}, {"hypotheses", "hypothesis"},
      {"theses", "thesis"}, {"crises", "crisis"}, {"oxen", "ox"}, {"fungi", "fungus"},
      {"nuclei", "nucleus"}, {"cacti", "cactus"}, {"stimuli", "stimulus"},
      {"indices", "index"}, {"matrices", "matrix"}, {"appendices", "appendix"},
      {"data", "data"}, {"news", "news"}, {"ties", "tie"}, {"pies", "pie"}, {"lies", "lie"}});
  add_exceptions(r, "VB", {
      {"am", "be"}, {"are", "be"}, {"is", "be"}, {"was", "be"}, {"were", "be"}, {"been", "be"},
      {"being", "be"}, {"'s", "be"}, {"'re", "be"}, {"'m", "be"},
      {"has", "have"}, {"had", "have"}, {"having", "have"}, {"'ve", "have"},
      {"does", "do"}, {"did", "do"}, {"done", "do"}, {"doing", "do"},
      {"goes", "go"}, {"went", "go"}, {"gone", "go"},
      {"made", "make"}, {"said", "say"}, {"says", "say"}, {"took", "take"}, {"taken", "take"},
      {"came", "come"}, {"saw", "see"}, {"seen", "see"}, {"knew", "know"}, {"known", "know"},
      {"got", "get"}, {"gotten", "get"}, {"gave", "give"}, {"given", "give"}, {"found", "find"},
      {"thought", "think"}, {"told", "tell"}, {"became", "become"}, {"left", "leave"},
      {"felt", "feel"}, {"brought", "bring"}, {"began", "begin"}, {"begun", "begin"},
      {"kept", "keep"}, {"held", "hold"}, {"wrote", "write"}, {"written", "write"},
      {"stood", "stand"}, {"heard", "hear"}, {"meant", "mean"}, {"met", "meet"}, {"ran", "run"},
      {"paid", "pay"}, {"sat", "sit"}, {"spoke", "speak"}, {"spoken", "speak"}, {"lain", "lie"},
      {"led", "lead"}, {"grew", "grow"}, {"grown", "grow"}, {"lost", "lose"}, {"fell", "fall"},
      {"fallen", "fall"}, {"sent", "send"}, {"built", "build"}, {"understood", "understand"},
      {"drew", "draw"}, {"drawn", "draw"}, {"broke", "break"}, {"broken", "break"},
      {"spent", "spend"}, {"rose", "rise"}, {"risen", "rise"}, {"drove", "drive"},
      {"driven", "drive"}, {"bought", "buy"}, {"wore", "wear"}, {"worn", "wear"},
      {"chose", "choose"}, {"chosen", "choose"}, {"ate", "eat"}, {"eaten", "eat"},
      {"taught", "teach"}, {"caught", "catch"}, {"fought", "fight"}, {"threw", "throw"},
      {"thrown", "throw"}, {"sought", "seek"}, {"sold", "sell"}, {"won", "win"}, {"hid", "hide"},
      {"hidden", "hide"}, {"struck", "strike"}, {"shook", "shake"}, {"shaken", "shake"},
      {"sang", "sing"}, {"sung", "sing"}, {"swam", "swim"}, {"swum", "swim"}, {"flew", "fly"},
      {"flown", "fly"}, {"forgot", "forget"}, {"forgotten", "forget"}, {"beaten", "beat"},
      {"bit", "bite"}, {"bitten", "bite"}, {"blew", "blow"}, {"blown", "blow"}, {"dug", "dig"},
      {"fed", "feed"}, {"fled", "flee"}, {"froze", "freeze"}, {"frozen", "freeze"},
      {"hung", "hang"}, {"lent", "lend"}, {"lit", "light"}, {"rang", "ring"}, {"rung", "ring"},
      {"rode", "ride"}, {"ridden", "ride"}, {"shot", "shoot"}, {"slept", "sleep"},
      {"slid", "slide"}, {"spun", "spin"}, {"stole", "steal"}, {"stolen", "steal"},
      {"stuck", "stick"}, {"stung", "sting"}, {"swept", "sweep"}, {"swung", "swing"},
      {"tore", "tear"}, {"torn", "tear"}, {"woke", "wake"}, {"woken", "wake"}, {"wept", "weep"},
      {"withdrew", "withdraw"}, {"mistook", "mistake"}, {"overcame", "overcome"},
      {"arose", "arise"}, {"arisen", "arise"}, {"bore", "bear"}, {"born", "bear"},
      {"bent", "bend"}, {"bled", "bleed"}, {"bred", "breed"}, {"clung", "cling"},
      {"crept", "creep"}, {"dealt", "deal"}, {"dreamt", "dream"}, {"forgave", "forgive"},
      {"forgiven", "forgive"}, {"knelt", "kneel"}, {"laid", "lay"}, {"leapt", "leap"},
      {"learnt", "learn"}, {"sank", "sink"}, {"sunk", "sink"}, {"shone", "shine"},
      {"sprang", "spring"}, {"sprung", "spring"}, {"swore", "swear"}, {"sworn", "swear"},
      {"wove", "weave"}, {"woven", "weave"}, {"dies", "die"}, {"died", "die"}, {"dying", "die"},
      {"lies", "lie"}, {"lied", "lie"}, {"lying", "lie"}, {"ties", "tie"}, {"tied", "tie"},
      {"tying", "tie"}, {"sees", "see"}, {"seeing", "see"}, {"agreed", "agree"},
      {"freed", "free"}, {"exceeded", "exceed"}, {"needed", "need"}, {"proceeded", "proceed"}});
  add_exceptions(r, "JJ", {{"better", "good"}, {"best", "good"}, {"worse", "bad"},
                           {"worst", "bad"}, {"further", "far"}, {"farther", "far"},
                           {"furthest", "far"}, {"farthest", "far"}, {"less", "little"},
                           {"least", "little"}, {"more", "much"}, {"most", "much"}});
  add_exceptions(r, "RB", {{"better", "well"}, {"best", "well"}, {"worse", "badly"},
                           {"worst", "badly"}, {"more", "much"}, {"most", "much"}});
  return r;
}

void LemmaRules::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lemma rules: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts;
    std::istringstream fields(line);
    std::string part;
    while (std::getline(fields, part, '\t')) parts.push_back(part);
    if (parts.size() == 3 && parts[0] == "rule") parts.emplace_back();
    if (parts.size() != 4 || (parts[0] != "rule" && parts[0] != "exc"))
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'rule|exc<TAB>TAG<TAB>from<TAB>to'");
    if (parts[0] == "rule")
      rules.push_back({parts[1], parts[2], parts[3]});
    else
      exceptions[parts[1]][to_lower_ascii(parts[2])] = to_lower_ascii(parts[3]);
  }
}

Lemmatizer::Lemmatizer(LemmaRules rules, std::shared_ptr<const Lexicon> dictionary)
    : rules_(std::move(rules)), dictionary_(std::move(dictionary)) {}

std::string Lemmatizer::lemma(std::string_view word, std::string_view pos) const {
  const std::string w = strip_possessive(to_lower_ascii(word));
  for (const auto& [prefix, table] : rules_.exceptions) {
    if (!starts_with(pos, prefix)) continue;
    if (auto it = table.find(w); it != table.end()) return it->second;
  }
  std::optional<std::string> fallback;
  for (const SuffixRule& rule : rules_.rules) {
    if (!starts_with(pos, rule.tag_prefix)) continue;
    if (w.size() <= rule.suffix.size() || w.compare(w.size() - rule.suffix.size(), rule.suffix.size(), rule.suffix) != 0)
      continue;
    const ParsedRule parsed = parse_replacement(rule.replacement);
    const std::string_view stem = std::string_view(w).substr(0, w.size() - rule.suffix.size());
    if (!holds(parsed.condition, stem)) continue;
    std::string candidate = std::string(stem) + parsed.replacement;
    if (dictionary_ && dictionary_->contains(candidate)) return candidate;
    if (!parsed.dictionary_only && !fallback) fallback = std::move(candidate);
  }
  return fallback ? *fallback : w;
}

TaggedDoc lemmatize(TaggedDoc doc, const Lemmatizer& lemmatizer) {
  for (Token& tok : doc.tokens) tok.lemma = lemmatizer.lemma(tok.surface, tok.pos);
  return doc;
}

}  // namespace autosas
