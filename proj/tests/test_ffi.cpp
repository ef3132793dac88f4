#include "luandri/luandri.h"

#include "luandri/retrieval.hpp"
#include "luandri/storage.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <dlfcn.h>

#include <filesystem>
#include <set>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string write_toy(const std::string& name, std::string_view trec) {
    const auto dir = fs::temp_directory_path() / ("luandri_ffi_" + name);
    fs::remove_all(dir);
    luandri::write_index(luandri::build_index(luandri::parse_trec(trec, {"year"})), dir);
    return dir.string();
}

luandri_request request_for(const char* query, int32_t n = 10) {
    luandri_request r{};
    r.query = query;
    r.results_requested = n;
    return r;
}

}  // namespace

TEST_CASE("environment lifecycle") {
    const auto env = luandri_env_create();
    CHECK(env != 0);
    CHECK(luandri_env_destroy(env) == LUANDRI_OK);
    CHECK(luandri_env_destroy(env) == LUANDRI_INVALID_ARGUMENT);

    std::set<luandri_env> handles;
    for (int i = 0; i < 100; ++i) handles.insert(luandri_env_create());
    CHECK(handles.size() == 100);
    for (const auto h : handles) CHECK(luandri_env_destroy(h) == LUANDRI_OK);
}

TEST_CASE("add_index success and failure") {
    const auto env = luandri_env_create();
    CHECK(luandri_env_add_index(env, write_toy("valid", fixtures::kToyTrec).c_str()) == LUANDRI_OK);
    CHECK(std::string(luandri_last_error(env)).empty());
    CHECK(luandri_env_add_index(env, "/nonexistent/luandri/index") == LUANDRI_IO_ERROR);
    CHECK(!std::string(luandri_last_error(env)).empty());
    CHECK(luandri_env_add_index(env, nullptr) == LUANDRI_INVALID_ARGUMENT);
    CHECK(luandri_env_add_index(0, "x") == LUANDRI_INVALID_ARGUMENT);
    CHECK(std::string(luandri_last_error(0)) == "unknown environment handle");
    luandri_env_destroy(env);
}

TEST_CASE("two indexes of 3 and 4 documents give 7 searchable documents") {
    const auto env = luandri_env_create();
    const auto four = write_toy("four",
                                "<DOC><DOCNO>p</DOCNO><TEXT>common</TEXT></DOC><DOC><DOCNO>q</DOCNO><TEXT>common</TEXT></DOC>"
                                "<DOC><DOCNO>r</DOCNO><TEXT>common</TEXT></DOC><DOC><DOCNO>s</DOCNO><TEXT>common</TEXT></DOC>");
    const auto three = write_toy("three",
                                 "<DOC><DOCNO>a</DOCNO><TEXT>common</TEXT></DOC><DOC><DOCNO>b</DOCNO><TEXT>common</TEXT></DOC>"
                                 "<DOC><DOCNO>c</DOCNO><TEXT>common</TEXT></DOC>");
    REQUIRE(luandri_env_add_index(env, three.c_str()) == LUANDRI_OK);
    REQUIRE(luandri_env_add_index(env, four.c_str()) == LUANDRI_OK);
    auto request = request_for("common", 100);
    luandri_results results = 0;
    REQUIRE(luandri_env_run_query(env, &request, &results) == LUANDRI_OK);
    CHECK(luandri_results_count(results) == 7);
    luandri_result last{};
    REQUIRE(luandri_results_get(results, 6, &last) == LUANDRI_OK);
    CHECK(last.docid == 7);
    CHECK(std::string(last.document_name) == "s");
    luandri_env_destroy(env);
    // destroying the environment released its result sets
    CHECK(luandri_results_count(results) == -1);
}

TEST_CASE("run_query through the boundary") {
    const auto env = luandri_env_create();
    REQUIRE(luandri_env_add_index(env, write_toy("query", fixtures::kToyTrec).c_str()) == LUANDRI_OK);

    const std::string query(fixtures::kExampleQuery);
    auto request = request_for(query.c_str());
    luandri_results results = 0;
    REQUIRE(luandri_env_run_query(env, &request, &results) == LUANDRI_OK);
    CHECK(luandri_results_count(results) == 1);
    luandri_result r{};
    REQUIRE(luandri_results_get(results, 0, &r) == LUANDRI_OK);
    CHECK(r.docid == 1);
    CHECK(std::string(r.document_name) == "A");
    CHECK(std::string(r.snippet) == "<b>neural</b> <b>networks</b>");

    CHECK(luandri_results_get(results, 1, &r) == LUANDRI_INVALID_ARGUMENT);
    CHECK(r.docid == -1);
    CHECK(std::string(r.document_name).empty());
    CHECK(std::string(luandri_last_error(env)).find("out of range") != std::string::npos);
    CHECK(luandri_results_get(results, -1, &r) == LUANDRI_INVALID_ARGUMENT);
    CHECK(luandri_results_destroy(results) == LUANDRI_OK);
    CHECK(luandri_results_destroy(results) == LUANDRI_INVALID_ARGUMENT);
    CHECK(luandri_results_count(results) == -1);

    SUBCASE("parse error") {
        auto bad = request_for("#od0(a b)");
        luandri_results none = 99;
        CHECK(luandri_env_run_query(env, &bad, &none) == LUANDRI_PARSE_ERROR);
        CHECK(none == 0);
        CHECK(std::string(luandri_last_error(env)).find("offset 0") != std::string::npos);
    }
    SUBCASE("zero results requested") {
        auto zero = request_for("neural", 0);
        luandri_results set = 0;
        CHECK(luandri_env_run_query(env, &zero, &set) == LUANDRI_OK);
        CHECK(luandri_results_count(set) == 0);
        luandri_results_destroy(set);
    }
    SUBCASE("restriction and stop words") {
        const int64_t ids[] = {3};
        const char* stops[] = {"networks"};
        auto req = request_for("neural networks");
        req.doc_ids = ids;
        req.doc_id_count = 1;
        req.stopwords = stops;
        req.stopword_count = 1;
        luandri_results set = 0;
        REQUIRE(luandri_env_run_query(env, &req, &set) == LUANDRI_OK);
        REQUIRE(luandri_results_count(set) == 1);
        luandri_result one{};
        luandri_results_get(set, 0, &one);
        CHECK(one.docid == 3);
        CHECK(std::string(one.snippet) == "networks <b>neural</b>");
        luandri_results_destroy(set);
    }
    SUBCASE("invalid arguments") {
        luandri_results set = 0;
        CHECK(luandri_env_run_query(env, nullptr, &set) == LUANDRI_INVALID_ARGUMENT);
        auto negative = request_for("a", -1);
        CHECK(luandri_env_run_query(env, &negative, &set) == LUANDRI_INVALID_ARGUMENT);
        auto null_query = request_for(nullptr);
        CHECK(luandri_env_run_query(env, &null_query, &set) == LUANDRI_INVALID_ARGUMENT);
        auto bad_ids = request_for("a");
        bad_ids.doc_id_count = 2;
        CHECK(luandri_env_run_query(env, &bad_ids, &set) == LUANDRI_INVALID_ARGUMENT);
        auto ok = request_for("a");
        CHECK(luandri_env_run_query(env, &ok, nullptr) == LUANDRI_INVALID_ARGUMENT);
        CHECK(luandri_env_run_query(12345678, &ok, &set) == LUANDRI_INVALID_ARGUMENT);
        CHECK(luandri_results_get(777777, 0, nullptr) == LUANDRI_INVALID_ARGUMENT);
    }
    luandri_env_destroy(env);
}

TEST_CASE("query on an environment with no index is an error") {
    const auto env = luandri_env_create();
    auto request = request_for("a");
    luandri_results set = 0;
    CHECK(luandri_env_run_query(env, &request, &set) == LUANDRI_INVALID_ARGUMENT);
    CHECK(std::string(luandri_last_error(env)).find("no index") != std::string::npos);
    luandri_env_destroy(env);
}

TEST_CASE("the shared library exports exactly the luandri_* functions") {
    void* lib = dlopen(LUANDRI_SHARED_LIBRARY, RTLD_NOW | RTLD_LOCAL);
    REQUIRE(lib != nullptr);
    for (const char* symbol :
         {"luandri_env_create", "luandri_env_destroy", "luandri_env_add_index", "luandri_env_run_query",
          "luandri_results_count", "luandri_results_get", "luandri_results_destroy", "luandri_last_error"}) {
        CHECK_MESSAGE(dlsym(lib, symbol) != nullptr, symbol);
    }
    // internals stay hidden
    CHECK(dlsym(lib, "_ZN7luandri9run_queryERKNS_16QueryEnvironmentERKNS_13SearchRequestERKNS_13ScoringParamsERKSt8functionIFvSt17basic_string_viewIcSt11char_traitsIcEEEERKNS_13SnippetConfigE") == nullptr);
    dlclose(lib);
}
