#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hlv/io.hpp"

using namespace hlv;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(std::filesystem::temp_directory_path() / name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

std::string check_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("manifest reading") {
    TempFile good("hlv_manifest_ok.json", R"({"task": "multiclass", "classes": ["A", "B"]})");
    const LabelSpace space = read_label_space(good.path);
    CHECK(space.kind() == TaskKind::Multiclass);
    CHECK(space.classes() == std::vector<std::string>{"A", "B"});

    TempFile bad_task("hlv_manifest_task.json", R"({"task": "ordinal", "classes": ["A","B"]})");
    CHECK_THROWS_AS(read_label_space(bad_task.path), ValidationError);
    TempFile missing("hlv_manifest_missing.json", R"({"classes": ["A","B"]})");
    CHECK_THROWS_AS(read_label_space(missing.path), ValidationError);
}

TEST_CASE("annotation reading") {
    const LabelSpace space({"A", "B"}, TaskKind::Multiclass);
    SUBCASE("well-formed records group by instance") {
        TempFile file("hlv_ann_ok.jsonl",
                      R"({"instance_id":"a","annotator_id":"u1","labels":["A"]})"
                      "\n"
                      R"({"instance_id":"b","annotator_id":"u1","labels":["B"]})"
                      "\n"
                      R"({"instance_id":"a","annotator_id":"u2","labels":["B"]})"
                      "\n");
        const AnnotationSet set = read_annotations(file.path, space);
        CHECK(set.size() == 2);
        CHECK(set[0].id == "a");
        CHECK(set[0].records.size() == 2);
        CHECK(set[1].id == "b");
        CHECK(set.has_annotator_ids());
        CHECK(set.annotator_ids() == std::vector<std::string>{"u1", "u2"});
    }
    SUBCASE("null annotator is accepted") {
        TempFile file("hlv_ann_null.jsonl",
                      R"({"instance_id":"a","annotator_id":null,"labels":["A"]})"
                      "\n");
        CHECK(!read_annotations(file.path, space).has_annotator_ids());
    }
    SUBCASE("arity violation reports the line") {
        TempFile file("hlv_ann_arity.jsonl",
                      R"({"instance_id":"a","annotator_id":"u1","labels":["A"]})"
                      "\n"
                      R"({"instance_id":"b","annotator_id":"u1","labels":["A","B"]})"
                      "\n");
        const std::string message =
            check_message([&] { read_annotations(file.path, space); });
        CHECK(message.find(":2:") != std::string::npos);
        CHECK(message.find("exactly 1 label") != std::string::npos);
    }
    SUBCASE("unknown class reports the line") {
        TempFile file("hlv_ann_class.jsonl",
                      R"({"instance_id":"a","annotator_id":"u1","labels":["C"]})"
                      "\n");
        const std::string message =
            check_message([&] { read_annotations(file.path, space); });
        CHECK(message.find("unknown class 'C'") != std::string::npos);
    }
    SUBCASE("duplicate annotator pair is rejected") {
        TempFile file("hlv_ann_dup.jsonl",
                      R"({"instance_id":"a","annotator_id":"u1","labels":["A"]})"
                      "\n"
                      R"({"instance_id":"a","annotator_id":"u1","labels":["B"]})"
                      "\n");
        const std::string message =
            check_message([&] { read_annotations(file.path, space); });
        CHECK(message.find("duplicate annotation") != std::string::npos);
        CHECK(message.find(":2:") != std::string::npos);
    }
    SUBCASE("malformed JSON reports the line") {
        TempFile file("hlv_ann_bad.jsonl",
                      R"({"instance_id":"a","annotator_id":"u1","labels":["A"]})"
                      "\n{oops\n");
        const std::string message =
            check_message([&] { read_annotations(file.path, space); });
        CHECK(message.find(":2:") != std::string::npos);
        CHECK(message.find("malformed JSON") != std::string::npos);
    }
    SUBCASE("text field extraction") {
        TempFile file("hlv_ann_text.jsonl",
                      R"({"instance_id":"a","annotator_id":"u1","labels":["A"],"text":"hello"})"
                      "\n"
                      R"({"instance_id":"a","annotator_id":"u2","labels":["B"]})"
                      "\n");
        const TextAnnotations out = read_annotations_with_text(file.path, space, "text");
        CHECK(out.texts == std::vector<std::string>{"hello"});
        CHECK_THROWS_AS(read_annotations_with_text(file.path, space, "missing"),
                        ValidationError);
    }
}

TEST_CASE("judgement file reading") {
    const LabelSpace space({"A", "B"}, TaskKind::Multiclass);
    SUBCASE("rows in file order, missing classes default to zero") {
        TempFile file("hlv_jud_ok.jsonl",
                      R"({"instance_id":"a","judgements":{"A":0.25,"B":0.75}})"
                      "\n"
                      R"({"instance_id":"b","judgements":{"A":1.0}})"
                      "\n");
        const NamedJudgements named = read_judgements(file.path, space);
        CHECK(named.ids == std::vector<std::string>{"a", "b"});
        CHECK(named.judgements.values()(0, 1) == 0.75);
        CHECK(named.judgements.values()(1, 0) == 1.0);
        CHECK(named.judgements.values()(1, 1) == 0.0);
    }
    SUBCASE("multiclass rows must sum to one") {
        TempFile file("hlv_jud_sum.jsonl",
                      R"({"instance_id":"a","judgements":{"A":0.4,"B":0.4}})"
                      "\n");
        const std::string message =
            check_message([&] { read_judgements(file.path, space); });
        CHECK(message.find("sum to") != std::string::npos);
    }
    SUBCASE("unknown class and duplicates are rejected") {
        TempFile bad("hlv_jud_class.jsonl", R"({"instance_id":"a","judgements":{"C":1.0}})"
                                            "\n");
        CHECK_THROWS_AS(read_judgements(bad.path, space), ValidationError);
        TempFile dup("hlv_jud_dup.jsonl",
                     R"({"instance_id":"a","judgements":{"A":1.0}})"
                     "\n"
                     R"({"instance_id":"a","judgements":{"A":1.0}})"
                     "\n");
        CHECK_THROWS_AS(read_judgements(dup.path, space), ValidationError);
    }
}

TEST_CASE("feature file reading") {
    TempFile file("hlv_feat_ok.jsonl",
                  R"({"instance_id":"a","features":[1.0, 2.0]})"
                  "\n"
                  R"({"instance_id":"b","features":[0.0, -1.5]})"
                  "\n");
    const NamedFeatures named = read_features(file.path);
    CHECK(named.ids.size() == 2);
    CHECK(named.features.dims() == 2);
    CHECK(named.features.row(0).size() == 2);  // both nonzero
    CHECK(named.features.row(1).size() == 1);  // zero dropped

    TempFile ragged("hlv_feat_ragged.jsonl",
                    R"({"instance_id":"a","features":[1.0, 2.0]})"
                    "\n"
                    R"({"instance_id":"b","features":[1.0]})"
                    "\n");
    CHECK_THROWS_AS(read_features(ragged.path), ValidationError);
}

TEST_CASE("alignment by instance id") {
    const LabelSpace space({"A", "B"}, TaskKind::Multiclass);
    TempFile file("hlv_align.jsonl",
                  R"({"instance_id":"b","judgements":{"A":1.0,"B":0.0}})"
                  "\n"
                  R"({"instance_id":"a","judgements":{"A":0.0,"B":1.0}})"
                  "\n");
    const NamedJudgements named = read_judgements(file.path, space);
    const std::vector<std::string> reference = {"a", "b"};
    const JudgementMatrix aligned = align_judgements(named, reference);
    CHECK(aligned.values()(0, 1) == 1.0);
    CHECK(aligned.values()(1, 0) == 1.0);

    const std::vector<std::string> wrong = {"a", "c"};
    const std::string message =
        check_message([&] { align_judgements(named, wrong); });
    CHECK(message.find("missing: c") != std::string::npos);
    CHECK(message.find("extra: b") != std::string::npos);
}

TEST_CASE("judgement writing round trip") {
    const LabelSpace space({"A", "B"}, TaskKind::Multiclass);
    const JudgementMatrix j(Matrix::from_rows({{0.123456789123, 0.876543210877}}),
                            TaskKind::Multiclass);
    const std::vector<std::string> ids = {"x"};
    const auto path = std::filesystem::temp_directory_path() / "hlv_jud_write.jsonl";
    write_judgements(path, ids, j, space);
    const NamedJudgements back = read_judgements(path, space);
    CHECK(back.ids == ids);
    CHECK(back.judgements.values()(0, 0) == doctest::Approx(0.123456789).epsilon(1e-9));
    std::filesystem::remove(path);
}

TEST_CASE("number formatting") {
    CHECK(format_sig9(0.5) == "0.5");
    CHECK(format_sig9(0.123456789123) == "0.123456789");
    CHECK(format_sig9(1.0) == "1");
    CHECK(round_sig9(0.123456789123) == doctest::Approx(0.123456789).epsilon(1e-12));
}

TEST_CASE("file digest is stable and content sensitive") {
    TempFile a("hlv_digest_a.txt", "hello");
    TempFile b("hlv_digest_b.txt", "hello");
    TempFile c("hlv_digest_c.txt", "world");
    CHECK(file_digest(a.path) == file_digest(b.path));
    CHECK(file_digest(a.path) != file_digest(c.path));
    CHECK(file_digest(a.path).size() == 16);
}
