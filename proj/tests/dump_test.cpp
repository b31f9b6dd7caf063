#include <gtest/gtest.h>

#include "pinsk_history.hpp"
#include "test_util.hpp"

using namespace chronofold;
using namespace pinsk;

TEST(Dump, FreshDocument) {
  EXPECT_EQ(dump(new_document(alice), DumpWhat::chronofold),
            "CFLD1 alpha 1\n"
            "1 R 0\n"
            "AUTHORS 1\n1 alpha\n"
            "SHIFTS 1\n1 0\n"
            "REFS 1\n1 1\n"
            "TOC 0\n"
            "FORMAT 1\n1 0\n");
}

TEST(Dump, PinskForms) {
  Document doc = doc_of(alice);
  EXPECT_EQ(dump(doc, DumpWhat::text), "PINSK\n");
  EXPECT_EQ(dump(doc, DumpWhat::weave),
            "1 R\n2 C004D\n3 T\n6 C0050\n4 C0049\n5 C004E\n7 C0053\n8 C004B\n");
  EXPECT_EQ(dump(doc, DumpWhat::log), encode_batch(ops_since(doc, 0)));
  EXPECT_EQ(dump(doc, DumpWhat::costructures),
            "AUTHORS 7\n1 alpha\n2 beta\n3 gamma\n4 beta\n5 alpha\n6 gamma\n8 beta\n"
            "SHIFTS 5\n1 0\n4 1\n5 0\n6 1\n7 0\n"
            "REFS 4\n1 1\n4 2\n6 3\n7 5\n"
            "TOC 0\n"
            "FORMAT 1\n1 0\n");
  const std::string full = dump(doc, DumpWhat::chronofold);
  EXPECT_EQ(full.substr(0, full.find("AUTHORS")),
            "CFLD1 alpha 8\n1 R 2\n2 C004D 3\n3 T 6\n4 C0049 5\n5 C004E 7\n6 C0050 4\n"
            "7 C0053 8\n8 C004B 0\n");
}

TEST(Dump, SelectorNames) {
  EXPECT_EQ(parse_dump_what("costructures"), DumpWhat::costructures);
  EXPECT_EQ(parse_dump_what("chronofold"), DumpWhat::chronofold);
  EXPECT_THROW(parse_dump_what("everything"), error);
}

TEST(Load, RoundTripIsByteStable) {
  std::vector<Document> docs{new_document(bob), doc_of(alice), doc_of(bob), doc_of(george)};
  Document lines = new_document(alice);
  for (char32_t c : std::u32string(U"ab\ncd\nef")) lines.local_insert(lines.length(), c);
  lines.merge(chr(ts(10, bob), ts(4, alice), U'\n'));
  lines.set_format(2, 5, 3);
  lines.set_format(7, 9, 1);
  docs.push_back(lines);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioRunner runner;
    generate_and_run(FuzzConfig{.seed = seed, .replicas = 3, .ops = 80, .check_prefixes = false, .extra_check = {}},
                     runner);
    for (const auto& s : runner.slots()) docs.push_back(s.replica.doc);
  }
  for (const auto& doc : docs) {
    const std::string first = dump(doc, DumpWhat::chronofold);
    Document back = load_document(first);
    ASSERT_EQ(dump(back, DumpWhat::chronofold), first);
    ASSERT_EQ(back.text(), doc.text());
    ASSERT_EQ(back.author(), doc.author());
    for (LogIndex j = 1; j <= doc.length(); ++j) {
      ASSERT_EQ(back.inverse_ndx(j), doc.inverse_ndx(j));
      ASSERT_EQ(back.get_format(j), doc.get_format(j));
    }
  }
}

TEST(Load, RejectsTampering) {
  const std::string good = dump(doc_of(alice), DumpWhat::chronofold);
  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_THROW(load_document(replaced("3 T 6\n", "3 T 4\n")), error);
  EXPECT_THROW(load_document(replaced("CFLD1", "CFLD2")), error);
  EXPECT_THROW(load_document(replaced("4 1\n5 0\n", "4 2\n5 0\n")), error);
  EXPECT_THROW(load_document(good.substr(0, good.size() - 4)), error);
  EXPECT_THROW(load_document(good + "extra\n"), error);
  EXPECT_THROW(load_document(""), error);
}
