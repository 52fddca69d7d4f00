#include <sstream>

#include <doctest.h>

#include "neuromst/conllx.hpp"
#include "neuromst/embeddings.hpp"
#include "neuromst/errors.hpp"
#include "neuromst/eval.hpp"
#include "neuromst/unicode.hpp"
#include "neuromst/vocab.hpp"
#include "test_support.hpp"

using namespace neuromst;

namespace {

const char* kTwoSentences =
    "1\tThe\t_\tDT\tDT\t_\t2\tdet\t_\t_\n"
    "2\tcat\t_\tNN\tNN\t_\t3\tnsubj\t_\t_\n"
    "3\tsat\t_\tVB\tVBD\t_\t0\troot\t_\t_\n"
    "\n"
    "# a comment between sentences\n"
    "1\tBirds\t_\tNN\tNNS\t_\t2\tnsubj\t_\t_\n"
    "2\tfly\t_\tVB\tVBP\t_\t0\troot\t_\t_\n";

}  // namespace

TEST_CASE("reader splits sentences and fills every column") {
  std::istringstream in(kTwoSentences);
  const auto sents = read_conllx(in);
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].n() == 3);
  CHECK(sents[1].n() == 2);

  const Token& cat = sents[0].tokens[2];
  CHECK(cat.id == 2);
  CHECK(cat.form == "cat");
  CHECK(cat.cpos == "NN");
  CHECK(cat.pos == "NN");
  CHECK(cat.head == 3);
  CHECK(cat.deprel == "nsubj");

  // Index 0 is the synthetic root.
  CHECK(sents[0].tokens[0].id == 0);
  CHECK(sents[0].tokens[0].form == kRootForm);
  CHECK(sents[0].tokens[0].head == -1);
}

TEST_CASE("reader handles a missing trailing blank line and CRLF") {
  std::istringstream in("1\ta\t_\tX\tX\t_\t0\troot\t_\t_\r\n");
  const auto sents = read_conllx(in);
  REQUIRE(sents.size() == 1);
  CHECK(sents[0].tokens[1].form == "a");
}

TEST_CASE("reader errors carry the offending line number") {
  std::istringstream bad_cols("1\ta\t_\tX\tX\t_\t0\troot\t_\n");
  CHECK_THROWS_AS(read_conllx(bad_cols), ParseError);

  std::istringstream gap(
      "1\ta\t_\tX\tX\t_\t0\troot\t_\t_\n"
      "3\tb\t_\tX\tX\t_\t1\tdep\t_\t_\n");
  try {
    read_conllx(gap);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream bad_id("x\ta\t_\tX\tX\t_\t0\troot\t_\t_\n");
  CHECK_THROWS_AS(read_conllx(bad_id), ParseError);

  std::istringstream bad_head(
      "1\ta\t_\tX\tX\t_\t5\troot\t_\t_\n"
      "2\tb\t_\tX\tX\t_\t1\tdep\t_\t_\n");
  try {
    read_conllx(bad_head);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);  // HEAD 5 out of range for 2 tokens
  }

  CHECK_THROWS_AS(read_conllx_file("/no/such/file.conllx"), ParseError);
}

TEST_CASE("underscore HEAD means unset and cannot be written back") {
  std::istringstream in("1\ta\t_\tX\tX\t_\t_\t_\t_\t_\n");
  const auto sents = read_conllx(in);
  CHECK(sents[0].tokens[1].head == -1);
  std::ostringstream out;
  CHECK_THROWS_AS(write_conllx(out, sents), OutputError);
}

TEST_CASE("writer round-trips byte for byte") {
  std::istringstream in(kTwoSentences);
  const auto sents = read_conllx(in);
  std::ostringstream out;
  write_conllx(out, sents);

  // The comment is not preserved; re-reading must give identical sentences.
  std::istringstream again(out.str());
  const auto sents2 = read_conllx(again);
  REQUIRE(sents2.size() == sents.size());
  std::ostringstream out2;
  write_conllx(out2, sents2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("fine POS falls back to coarse when absent") {
  Token t;
  t.cpos = "NN";
  t.pos = "_";
  CHECK(effective_pos(t) == "NN");
  t.pos = "NNS";
  CHECK(effective_pos(t) == "NNS");
}

TEST_CASE("normalization lowercases and collapses digit runs") {
  CHECK(normalize_form("Hello") == "hello");
  CHECK(normalize_form("ABC-123-x") == "abc-0-x");
  CHECK(normalize_form("1914") == "0");
  CHECK(normalize_form("12 34") == "0 0");
  CHECK(normalize_form("a1b2c3") == "a0b0c0");
  CHECK(normalize_form("") == "");
}

TEST_CASE("vocabulary ids are ranked by frequency then lexicographically") {
  std::vector<Token> body;
  auto add = [&](const std::string& form) {
    Token t;
    t.id = static_cast<int>(body.size()) + 1;
    t.form = form;
    t.cpos = "X";
    t.pos = "X";
    t.head = 0;
    t.deprel = "dep";
    body.push_back(t);
  };
  // zz x3; aa x2; mm x2; qq x1.
  add("zz"); add("zz"); add("zz"); add("aa"); add("aa"); add("mm"); add("mm"); add("qq");
  // Heads: make a flat valid tree (token 1 is root child, rest attach to 1).
  for (std::size_t i = 0; i < body.size(); ++i) body[i].head = i == 0 ? 0 : 1;
  const std::vector<Sentence> train = {make_sentence(body)};

  const Vocab v = build_vocab(train);
  REQUIRE(v.words.size() == 3 + 4);
  CHECK(v.words[0] == "<PAD>");
  CHECK(v.words[1] == "<UNK>");
  CHECK(v.words[2] == kRootForm);
  CHECK(v.words[3] == "zz");   // freq 3
  CHECK(v.words[4] == "aa");   // freq 2, before mm lexicographically
  CHECK(v.words[5] == "mm");
  CHECK(v.words[6] == "qq");
  CHECK(v.word_id("zz") == 3);
  CHECK(v.word_id("absent") == kUnkId);
  CHECK(v.is_singleton(v.word_id("qq")));
  CHECK(!v.is_singleton(v.word_id("aa")));
}

TEST_CASE("min-freq drops rare words unless the pretrained list keeps them") {
  std::vector<Token> body;
  for (int i = 0; i < 3; ++i) {
    Token t;
    t.id = i + 1;
    t.form = (i < 2) ? "common" : "rare";
    t.cpos = "X";
    t.pos = "X";
    t.head = i == 0 ? 0 : 1;
    t.deprel = "dep";
    body.push_back(t);
  }
  const std::vector<Sentence> train = {make_sentence(body)};

  const Vocab dropped = build_vocab(train, nullptr, 2);
  CHECK(dropped.word_id("common") != kUnkId);
  CHECK(dropped.word_id("rare") == kUnkId);

  const std::vector<std::string> pre = {"rare", "outside"};
  const Vocab kept = build_vocab(train, &pre, 2);
  CHECK(kept.word_id("rare") != kUnkId);
  CHECK(kept.word_id("outside") != kUnkId);  // pretrained-only row
  CHECK(kept.word_freq[kept.word_id("outside")] == 0);
}

TEST_CASE("characters come from raw forms as codepoints") {
  std::vector<Token> body;
  Token t;
  t.id = 1;
  t.form = "Ab1";  // raw: 'A' stays uppercase in the char table
  t.cpos = "X";
  t.pos = "X";
  t.head = 0;
  t.deprel = "dep";
  body.push_back(t);
  const std::vector<Sentence> train = {make_sentence(body)};
  const Vocab v = build_vocab(train);

  CHECK(v.char_id('A') != kUnkId);
  CHECK(v.char_id('a') == kUnkId);  // lowercased form never reaches the chars
  CHECK(v.char_id('1') != kUnkId);  // digits survive at the char level
  CHECK(v.word_id("ab0") != kUnkId);  // but not at the word level

  const TokenSeq seq = encode_tokens(train[0], v);
  REQUIRE(seq.size() == 2);
  CHECK(seq[0].word == kRootId);
  CHECK(seq[0].pos == kRootId);
  // Root characters spell the literal root form.
  CHECK(seq[0].chars.size() == std::string(kRootForm).size());
  CHECK(seq[1].chars.size() == 3);
  CHECK(seq[1].chars[0] == v.char_id('A'));
}

TEST_CASE("labels have no reserved rows") {
  std::istringstream in(kTwoSentences);
  const auto sents = read_conllx(in);
  const Vocab v = build_vocab(sents);
  // det, nsubj, root: exactly three labels.
  CHECK(v.num_labels() == 3);
  CHECK(v.label_id("nsubj") >= 0);
  CHECK(v.label_id("nsubj") < 3);
  CHECK(v.label_id("missing") == -1);
}

TEST_CASE("gold structures validate") {
  std::istringstream in(kTwoSentences);
  const auto sents = read_conllx(in);
  const Vocab v = build_vocab(sents);
  const DependencyTree tree = gold_tree(sents[0], v);
  CHECK(tree.head[1] == 2);
  CHECK(tree.head[3] == 0);
  CHECK(tree.label[2] == v.label_id("nsubj"));

  Sentence cyc = sents[0];
  cyc.tokens[1].head = 2;
  cyc.tokens[2].head = 1;
  cyc.tokens[3].head = 1;
  CHECK_THROWS_AS(gold_tree(cyc, v), InvalidTreeError);

  Sentence bad_label = sents[0];
  bad_label.tokens[1].deprel = "nowhere";
  CHECK_THROWS_AS(gold_tree(bad_label, v), VocabError);

  Sentence headless = sents[0];
  headless.tokens[2].head = -1;
  CHECK_THROWS_AS(gold_tree(headless, v), InvalidTreeError);
}

TEST_CASE("utf8 decoding and punctuation classes") {
  const auto cps = utf8_decode("aé中!");
  REQUIRE(cps.size() == 4);
  CHECK(cps[0] == 'a');
  CHECK(cps[1] == 0xE9);
  CHECK(cps[2] == 0x4E2D);
  CHECK(cps[3] == '!');

  // Malformed bytes decode as one replacement per byte.
  const std::string broken = "a\xC3";
  const auto bad = utf8_decode(broken);
  REQUIRE(bad.size() == 2);
  CHECK(bad[1] == 0xFFFD);

  CHECK(is_unicode_punct('.'));
  CHECK(is_unicode_punct(','));
  CHECK(is_unicode_punct(0x201C));  // left double quote
  CHECK(is_unicode_punct(0x3002));  // ideographic full stop
  CHECK(!is_unicode_punct('a'));
  CHECK(!is_unicode_punct('7'));
  CHECK(!is_unicode_punct(0xFF17));  // fullwidth digit is not punctuation

  CHECK(is_all_punctuation("."));
  CHECK(is_all_punctuation("«»"));
  CHECK(is_all_punctuation("...!?"));
  CHECK(!is_all_punctuation("a."));
  CHECK(!is_all_punctuation(""));
  CHECK(!is_all_punctuation("7"));
}

TEST_CASE("attachment scores match the hand-built fixture") {
  const testsup::EvalFixture fx = testsup::make_eval_fixture();
  const EvalResult all = evaluate(fx.gold, fx.pred, PunctuationPolicy::include_all);
  CHECK(all.uas == fx.uas_all);
  CHECK(all.las == fx.las_all);
  CHECK(all.scored == 40);

  const EvalResult nop = evaluate(fx.gold, fx.pred, PunctuationPolicy::exclude_unicode_punct);
  CHECK(nop.uas == fx.uas_nopunct);
  CHECK(nop.las == fx.las_nopunct);
  CHECK(nop.scored == 30);
}

TEST_CASE("identity predictions score 100 and empty denominators default to 100") {
  const testsup::EvalFixture fx = testsup::make_eval_fixture();
  const EvalResult perfect = evaluate(fx.gold, fx.gold, PunctuationPolicy::include_all);
  CHECK(perfect.uas == 100.0);
  CHECK(perfect.las == 100.0);

  // All-punctuation corpus with the punctuation-excluding policy.
  std::vector<Token> body;
  Token t;
  t.id = 1;
  t.form = ".";
  t.cpos = ".";
  t.pos = ".";
  t.head = 0;
  t.deprel = "punct";
  body.push_back(t);
  const std::vector<Sentence> just_punct = {make_sentence(body)};
  const EvalResult empty = evaluate(just_punct, just_punct, PunctuationPolicy::exclude_unicode_punct);
  CHECK(empty.scored == 0);
  CHECK(empty.uas == 100.0);
  CHECK(empty.las == 100.0);
}

TEST_CASE("misaligned evaluation inputs name the sentence") {
  const testsup::EvalFixture fx = testsup::make_eval_fixture();
  auto shorter = fx.pred;
  shorter.pop_back();
  CHECK_THROWS_AS(evaluate(fx.gold, shorter, PunctuationPolicy::include_all), EvalError);

  auto mangled = fx.pred;
  mangled[4].tokens.pop_back();
  try {
    evaluate(fx.gold, mangled, PunctuationPolicy::include_all);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find('5') != std::string::npos);  // sentence 5
  }
}

TEST_CASE("pretrained embeddings load and validate") {
  std::istringstream in(
      "hello 0.5 -0.25 1.0\n"
      "world 0.1 0.2 0.3\n");
  const PretrainedEmbeddings emb = load_pretrained_embeddings(in);
  CHECK(emb.dim() == 3);
  REQUIRE(emb.words.size() == 2);
  CHECK(emb.words[1] == "world");
  CHECK(emb.vectors(0, 1) == doctest::Approx(-0.25));

  std::istringstream ragged(
      "hello 0.5 -0.25\n"
      "world 0.1 0.2 0.3\n");
  CHECK_THROWS_AS(load_pretrained_embeddings(ragged), ConfigError);

  std::istringstream empty("");
  CHECK_THROWS_AS(load_pretrained_embeddings(empty), ConfigError);
}

TEST_CASE("synthetic treebank sentences are valid parseable trees") {
  const auto bank = testsup::make_treebank(7, 60);
  REQUIRE(bank.size() == 60);
  const Vocab v = build_vocab(bank);
  for (const Sentence& s : bank) {
    REQUIRE(s.n() >= 1);
    CHECK_NOTHROW(gold_tree(s, v));
  }
  // Deterministic: same seed, same corpus.
  const auto again = testsup::make_treebank(7, 60);
  std::ostringstream a, b;
  write_conllx(a, bank);
  write_conllx(b, again);
  CHECK(a.str() == b.str());
}
