#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "corpuskit/langid.hpp"
#include "corpuskit/metrics.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "support.hpp"

using namespace corpuskit;
namespace fs = std::filesystem;

namespace {
const fs::path kDataDir = CORPUSKIT_DATA_DIR;
}

TEST_CASE("character and byte counts are code-point based") {
  CHECK(count_chars("") == 0);
  CHECK(count_chars("abc") == 3);
  CHECK(count_chars("\xC3\xA9") == 1);  // é: one code point
  CHECK(count_utf8_bytes("\xC3\xA9") == 2);
  CHECK(count_utf8_bytes("abc") == 3);
  CHECK(count_chars("\xF0\x9F\x98\x80") == 1);  // emoji
  CHECK(count_utf8_bytes("\xF0\x9F\x98\x80") == 4);
}

TEST_CASE("word count follows whitespace tokenization") {
  CHECK(count_words("") == 0);
  CHECK(count_words("one") == 1);
  CHECK(count_words("hej, världen!") == 2);
  CHECK(count_words("a  b\n c\t") == 3);
}

TEST_CASE("sentence count") {
  CHECK(count_sentences("") == 0);
  CHECK(count_sentences("Hi. Bye!") == 2);
  CHECK(count_sentences("no terminator") == 1);
  CHECK(count_sentences("3.14 is pi.") == 1);  // interior dot does not split
  CHECK(count_sentences("Really?! Yes.") == 2);  // terminator runs collapse
  CHECK(count_sentences("...") == 0);  // nothing but a terminator run
  CHECK(count_sentences("a. b. c.") == 3);
  CHECK(count_sentences("a. . b.") == 2);  // whitespace-only segment dropped
  // Invariant: never more sentences than words.
  CHECK(count_sentences("! ! !") <= count_words("! ! !"));
}

TEST_CASE("md5 reference vectors") {
  CHECK(md5_hex("") == "d41d8cd98f00b204e9800998ecf8427e");
  CHECK(md5_hex("abc") == "900150983cd24fb0d6963f7d28e17f72");
  CHECK(md5_hex("The quick brown fox jumps over the lazy dog") ==
        "9e107d9d372bb6826bd81d3542a419d6");
}

TEST_CASE("stop-word classifier votes by hit fraction") {
  StopwordClassifier clf = StopwordClassifier::from_dir(kDataDir / "stopwords");

  LanguageVerdict v = clf.identify("the quick brown fox and the dog");
  CHECK(v.lang == "en");
  CHECK(v.confidence == doctest::Approx(3.0 / 7.0));

  v = clf.identify("det är en sak som alla vet och ser");
  CHECK(v.lang == "sv");

  v = clf.identify("qqq zzz xxx");
  CHECK(v.lang == "und");
  CHECK(v.confidence == 0.0);

  v = clf.identify("");
  CHECK(v.lang == "und");

  // Tokens are matched through word_key: punctuation and case are ignored.
  v = clf.identify("The, quick brown fox AND the dog");
  CHECK(v.lang == "en");
  CHECK(v.confidence == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("stop-word ties break by language code order") {
  std::map<std::string, std::unordered_set<std::string>> lists;
  lists["da"] = {"og"};
  lists["no"] = {"og"};
  lists["sv"] = {"och"};
  StopwordClassifier clf(std::move(lists));

  LanguageVerdict v = clf.identify("og");
  CHECK(v.lang == "da");  // da before no
  CHECK(v.confidence == doctest::Approx(1.0));

  // "og" is a stop word in da, is and no in the shipped lists too.
  StopwordClassifier shipped = StopwordClassifier::from_dir(kDataDir / "stopwords");
  CHECK(shipped.identify("og").lang == "da");
}

TEST_CASE("compute_metrics assembles every field") {
  StopwordClassifier clf = StopwordClassifier::from_dir(kDataDir / "stopwords");
  DocumentMetrics m = compute_metrics("The cat sat. The dog ran!", clf);
  CHECK(m.lang == "en");
  CHECK(m.num_chars == 25);
  CHECK(m.num_utf8bytes == 25);
  CHECK(m.num_words == 6);
  CHECK(m.num_sents == 2);
  CHECK(m.md5 == md5_hex("The cat sat. The dog ran!"));

  Document doc;
  doc.id = "d";
  doc.text = "The cat sat. The dog ran!";
  doc.source = "s";
  doc.category = "Books";
  Document out = annotate_metrics(doc, clf);
  REQUIRE(out.metrics.has_value());
  CHECK(out.metrics->lang == "en");
  CHECK(out.metrics->md5 == m.md5);
}

TEST_CASE("classifier is thread safe") {
  StopwordClassifier clf = StopwordClassifier::from_dir(kDataDir / "stopwords");
  std::atomic<int> en_hits{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 200; ++i)
        if (clf.identify("the quick brown fox and the dog").lang == "en") ++en_hits;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(en_hits == 8 * 200);
}

TEST_CASE("load_word_list trims, skips blanks and comments") {
  testkit::ScratchDir tmp;
  const fs::path file = tmp.path() / "words.txt";
  testkit::write_file(file, "# comment\nalpha\n  beta \t\n\ngamma\r\n");
  auto words = load_word_list(file);
  CHECK(words.size() == 3);
  CHECK(words.count("alpha") == 1);
  CHECK(words.count("beta") == 1);
  CHECK(words.count("gamma") == 1);
}

TEST_CASE("make_classifier understands both specs") {
  auto base = make_classifier("baseline", kDataDir);
  CHECK(base->identify("the quick brown fox and the dog").lang == "en");
  CHECK_THROWS_AS(make_classifier("magic", kDataDir), std::invalid_argument);
}

TEST_CASE("http classifier round trips through a live server") {
  httplib::Server server;
  std::atomic<int> requests{0};
  server.Post("/identify", [&](const httplib::Request& req, httplib::Response& res) {
    ++requests;
    auto body = nlohmann::json::parse(req.body);
    nlohmann::json out;
    out["lang"] = body["text"] == "goddag" ? "da" : "und";
    out["confidence"] = 0.93;
    res.set_content(out.dump(), "application/json");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string url = "http://127.0.0.1:" + std::to_string(port);
  HttpClassifier clf(url);
  LanguageVerdict v = clf.identify("goddag");
  CHECK(v.lang == "da");
  CHECK(v.confidence == doctest::Approx(0.93));
  CHECK(requests == 1);

  auto made = make_classifier("external:" + url, kDataDir);
  CHECK(made->identify("goddag").lang == "da");

  server.stop();
  worker.join();

  // With the server gone the client reports failure instead of guessing.
  CHECK_THROWS_AS(clf.identify("goddag"), std::runtime_error);
}
